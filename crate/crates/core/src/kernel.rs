//! Pairwise interaction functions `φ(x, y)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::wrap_signed;
use crate::error::{Error, Result};

/// Phase space of the particles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Line,
    Circle,
}

/// Samples of `Φ'(d)` on a uniform grid over `[lo, hi]`, linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientTable {
    lo: f64,
    hi: f64,
    samples: Vec<f64>,
}

impl GradientTable {
    pub fn new(lo: f64, hi: f64, samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 || !(hi > lo) {
            return Err(Error::InvalidArgument(
                "gradient table needs ≥ 2 samples on a nonempty interval".into(),
            ));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidArgument(
                "gradient table has non-finite samples".into(),
            ));
        }
        Ok(GradientTable { lo, hi, samples })
    }

    pub fn from_fn(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let n = n.max(2);
        let h = (hi - lo) / (n - 1) as f64;
        Self::new(lo, hi, (0..n).map(|k| f(lo + k as f64 * h)).collect())
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    fn eval(&self, d: f64) -> Result<f64> {
        if !(self.lo..=self.hi).contains(&d) {
            return Err(Error::KernelDomain {
                separation: d,
                lo: self.lo,
                hi: self.hi,
            });
        }
        let n = self.samples.len();
        let s = (d - self.lo) / (self.hi - self.lo) * (n - 1) as f64;
        let k = (s.floor() as usize).min(n - 2);
        let w = s - k as f64;
        Ok((1.0 - w) * self.samples[k] + w * self.samples[k + 1])
    }
}

/// Interaction function `φ(x, y)` acting on particle `x` from particle `y`.
#[derive(Debug, Clone, PartialEq)]
pub enum InteractionKernel {
    /// `K sin(y - x)`: attractive Kuramoto coupling.
    KuramotoSin { coupling: f64 },
    /// `Σ_k b_k sin(k(y - x))`, `k = 1, 2, …`.
    OddTrig { coefficients: Vec<f64> },
    /// Gradient form `φ(x, y) = Φ'(x - y)`. On the circle the separation is
    /// taken in `[-π, π)`.
    TabulatedGradient(GradientTable),
}

impl InteractionKernel {
    pub fn kuramoto(coupling: f64) -> Self {
        InteractionKernel::KuramotoSin { coupling }
    }

    /// Checks the table covers every separation that can occur on the circle.
    pub fn validate_for(&self, geometry: Geometry) -> Result<()> {
        if let (InteractionKernel::TabulatedGradient(t), Geometry::Circle) = (self, geometry) {
            if t.lo > -std::f64::consts::PI || t.hi < std::f64::consts::PI {
                return Err(Error::KernelDomain {
                    separation: std::f64::consts::PI,
                    lo: t.lo,
                    hi: t.hi,
                });
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: f64, y: f64, geometry: Geometry) -> Result<f64> {
        match self {
            InteractionKernel::KuramotoSin { coupling } => Ok(coupling * (y - x).sin()),
            InteractionKernel::OddTrig { coefficients } => Ok(coefficients
                .iter()
                .enumerate()
                .map(|(k, b)| b * ((k + 1) as f64 * (y - x)).sin())
                .sum()),
            InteractionKernel::TabulatedGradient(table) => {
                let d = match geometry {
                    Geometry::Line => x - y,
                    Geometry::Circle => wrap_signed(x - y),
                };
                table.eval(d)
            }
        }
    }

    /// Harmonic amplitudes `b_k` when the kernel is a sine series in `y - x`.
    fn sine_series(&self) -> Option<Vec<f64>> {
        match self {
            InteractionKernel::KuramotoSin { coupling } => Some(vec![*coupling]),
            InteractionKernel::OddTrig { coefficients } => Some(coefficients.clone()),
            InteractionKernel::TabulatedGradient(_) => None,
        }
    }

    /// `V(x_i) = Σ_j w_j φ(x_i, y_j)` for every target.
    ///
    /// Sources are summed in the order given; callers that need
    /// permutation-invariant results pass them sorted. Sine-series kernels
    /// go through the harmonic moments `Σ_j w_j e^{iky_j}` in O(N + M).
    pub fn field(
        &self,
        targets: &[f64],
        sources: &[f64],
        weights: &[f64],
        geometry: Geometry,
    ) -> Result<Vec<f64>> {
        debug_assert_eq!(sources.len(), weights.len());
        match self.sine_series() {
            Some(coefficients) => {
                let moments: Vec<Complex64> = (1..=coefficients.len())
                    .map(|k| {
                        let k = k as f64;
                        sources
                            .iter()
                            .zip(weights)
                            .fold(Complex64::new(0.0, 0.0), |acc, (&y, &w)| {
                                acc + Complex64::from_polar(w, k * y)
                            })
                    })
                    .collect();
                Ok(targets
                    .iter()
                    .map(|&x| {
                        coefficients
                            .iter()
                            .zip(&moments)
                            .enumerate()
                            .map(|(k, (b, m))| {
                                b * (Complex64::from_polar(1.0, -((k + 1) as f64) * x) * m).im
                            })
                            .sum()
                    })
                    .collect())
            }
            None => targets
                .iter()
                .map(|&x| {
                    sources.iter().zip(weights).try_fold(0.0, |acc, (&y, &w)| {
                        Ok(acc + w * self.eval(x, y, geometry)?)
                    })
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kuramoto_is_attractive() {
        let k = InteractionKernel::kuramoto(1.0);
        assert!((k.eval(0.0, 0.5, Geometry::Circle).unwrap() - 0.5f64.sin()).abs() < 1e-16);
        assert_eq!(k.eval(0.3, 0.3, Geometry::Circle).unwrap(), 0.0);
    }

    #[test]
    fn harmonic_field_matches_direct_sum() {
        let k = InteractionKernel::OddTrig {
            coefficients: vec![1.0, -0.3, 0.2],
        };
        let xs = [0.1, 2.0, 4.5, 5.9, 3.3];
        let w = [0.2; 5];
        let fast = k.field(&xs, &xs, &w, Geometry::Circle).unwrap();
        for (i, &x) in xs.iter().enumerate() {
            let direct: f64 = xs
                .iter()
                .map(|&y| 0.2 * k.eval(x, y, Geometry::Circle).unwrap())
                .sum();
            assert!((fast[i] - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn tabulated_kernel_domain() {
        let t = GradientTable::from_fn(-1.0, 1.0, 11, |d| -d).unwrap();
        let k = InteractionKernel::TabulatedGradient(t);
        assert!((k.eval(0.2, 0.7, Geometry::Line).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            k.eval(0.0, 3.0, Geometry::Line),
            Err(Error::KernelDomain { .. })
        ));
        assert!(k.validate_for(Geometry::Circle).is_err());
        let wide = GradientTable::from_fn(-PI, PI, 65, |d| -d.sin()).unwrap();
        let k = InteractionKernel::TabulatedGradient(wide);
        assert!(k.validate_for(Geometry::Circle).is_ok());
        // separation wraps on the circle
        assert!(k.eval(0.1, 6.0, Geometry::Circle).is_ok());
    }
}
