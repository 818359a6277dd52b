//! Finite-N interacting particle system `ẋ_i = ω_i + (1/N) Σ_j φ(x_i, x_j)`.

use std::f64::consts::TAU;

use crate::circle::{wrap_angle, EmpiricalMeasure};
use crate::error::{Error, Result};
use crate::integrate::{drive, rk4_step, TimeStepping, Trajectory};
use crate::kernel::{Geometry, InteractionKernel};

/// Positions of `N ≥ 1` particles and optional natural frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleState {
    positions: Vec<f64>,
    frequencies: Option<Vec<f64>>,
    geometry: Geometry,
}

impl ParticleState {
    /// Circle positions are stored as canonical representatives in `[0, 2π)`.
    pub fn new(positions: Vec<f64>, geometry: Geometry) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidArgument(
                "a particle state needs N ≥ 1".into(),
            ));
        }
        if positions.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(
                "particle positions must be finite".into(),
            ));
        }
        let positions = match geometry {
            Geometry::Circle => positions.into_iter().map(wrap_angle).collect(),
            Geometry::Line => positions,
        };
        Ok(ParticleState {
            positions,
            frequencies: None,
            geometry,
        })
    }

    pub fn circle(positions: Vec<f64>) -> Result<Self> {
        Self::new(positions, Geometry::Circle)
    }

    pub fn line(positions: Vec<f64>) -> Result<Self> {
        Self::new(positions, Geometry::Line)
    }

    pub fn with_frequencies(mut self, frequencies: Vec<f64>) -> Result<Self> {
        if frequencies.len() != self.positions.len() {
            return Err(Error::InvalidArgument(format!(
                "{} frequencies for {} particles",
                frequencies.len(),
                self.positions.len()
            )));
        }
        self.frequencies = Some(frequencies);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn frequencies(&self) -> Option<&[f64]> {
        self.frequencies.as_deref()
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }
}

/// Velocities of a configuration. Sources are summed in sorted order, which
/// makes the result bitwise invariant under relabeling of the particles.
pub(crate) fn velocities(
    positions: &[f64],
    frequencies: Option<&[f64]>,
    kernel: &InteractionKernel,
    geometry: Geometry,
) -> Result<Vec<f64>> {
    let n = positions.len();
    let mut sorted = positions.to_vec();
    sorted.sort_by(f64::total_cmp);
    let ones = vec![1.0; n];
    let inv_n = 1.0 / n as f64;
    let mut v = kernel.field(positions, &sorted, &ones, geometry)?;
    for (i, vi) in v.iter_mut().enumerate() {
        *vi *= inv_n;
        if let Some(w) = frequencies {
            *vi += w[i];
        }
    }
    Ok(v)
}

pub fn ds_rhs(s: &ParticleState, kernel: &InteractionKernel) -> Result<Vec<f64>> {
    velocities(&s.positions, s.frequencies(), kernel, s.geometry)
}

/// Integrates the particle system with fixed-step RK4. Circle states move on
/// the real lift inside a step and are wrapped at step boundaries.
pub fn ds_simulate(
    s0: &ParticleState,
    kernel: &InteractionKernel,
    stepping: &TimeStepping,
) -> Result<Trajectory> {
    kernel.validate_for(s0.geometry)?;
    let geometry = s0.geometry;
    let freqs = s0.frequencies.clone();
    let mut rhs = |y: &[f64]| velocities(y, freqs.as_deref(), kernel, geometry);
    drive(
        s0.positions.clone(),
        stepping,
        |y, h, _| rk4_step(y, h, &mut rhs),
        |y, _, _| {
            if geometry == Geometry::Circle {
                for v in y.iter_mut() {
                    *v = wrap_angle(*v);
                }
            }
            Ok(())
        },
    )
}

/// Twisted configuration `x_j = 2π j m / N + q` on the circle.
pub fn discrete_twisted_state(n: usize, winding: i64, q: f64) -> Result<ParticleState> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "a particle state needs N ≥ 1".into(),
        ));
    }
    let nn = n as i64;
    let positions = (0..nn)
        .map(|j| TAU * ((j * winding).rem_euclid(nn) as f64 / n as f64) + q)
        .collect();
    ParticleState::circle(positions)
}

/// Empirical measure with weight `1/N` on every particle.
pub fn to_empirical(s: &ParticleState) -> EmpiricalMeasure {
    EmpiricalMeasure::uniform(s.positions.clone()).expect("particle states are nonempty and finite")
}
