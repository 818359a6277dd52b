//! Continuum limit `∂_t x(t,ξ) = ∫₀¹ φ(x(t,ξ), x(t,z)) dz` on the midpoint
//! label grid.
//!
//! The midpoint rule turns the label integral into the particle sum, so the
//! discretized continuum limit is literally the particle system with uniform
//! labels and both share one code path.

use std::f64::consts::TAU;

use crate::circle::{wrap_angle, LabelGrid};
use crate::error::{Error, Result};
use crate::integrate::{TimeStepping, Trajectory};
use crate::kernel::{Geometry, InteractionKernel};
use crate::oa::OAPoint;
use crate::particles::{ds_simulate, velocities, ParticleState};

/// State `x(ξ_j)` on a label grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelField {
    grid: LabelGrid,
    values: Vec<f64>,
    geometry: Geometry,
}

impl LabelField {
    pub fn new(values: Vec<f64>, geometry: Geometry) -> Result<Self> {
        let grid = LabelGrid::new(values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "label field values must be finite".into(),
            ));
        }
        let values = match geometry {
            Geometry::Circle => values.into_iter().map(wrap_angle).collect(),
            Geometry::Line => values,
        };
        Ok(LabelField {
            grid,
            values,
            geometry,
        })
    }

    pub fn grid(&self) -> LabelGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn to_particles(&self) -> ParticleState {
        ParticleState::new(self.values.clone(), self.geometry)
            .expect("label fields are nonempty and finite")
    }
}

/// Midpoint quadrature `(1/n) Σ_z φ(x_j, x_z)`.
pub fn cl_rhs(x: &LabelField, kernel: &InteractionKernel) -> Result<Vec<f64>> {
    velocities(&x.values, None, kernel, x.geometry)
}

/// RK4 on the label grid, identical to [`ds_simulate`] on `n_labels` particles.
pub fn cl_simulate(
    x0: &LabelField,
    kernel: &InteractionKernel,
    stepping: &TimeStepping,
) -> Result<Trajectory> {
    ds_simulate(&x0.to_particles(), kernel, stepping)
}

/// Twisted state `x(ξ) = 2πmξ + q`.
pub fn twisted_field(grid: &LabelGrid, winding: i64, q: f64) -> LabelField {
    let values = grid
        .points()
        .into_iter()
        .map(|xi| TAU * winding as f64 * xi + q)
        .collect();
    LabelField::new(values, Geometry::Circle).expect("twisted fields are finite")
}

/// `s - ⌊s⌋`, kept inside `[0, 1)`.
pub(crate) fn frac(s: f64) -> f64 {
    let f = s - s.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Unstable-manifold point `ξ ↦ F⁻¹_{α,β}(ξ + C(α,β) + q/2π mod 1)`.
///
/// The rotation `q` enters as a label shift `q/2π`; at `β = 0` this is the
/// twisted state `2πξ + q`.
pub fn manifold_label(p: &OAPoint, q: f64, xi: f64) -> Result<f64> {
    let s = frac(xi + p.shift() + q / TAU);
    Ok(wrap_angle(p.quantile(s)?))
}

pub fn manifold_field(grid: &LabelGrid, p: &OAPoint, q: f64) -> Result<LabelField> {
    let values = grid
        .points()
        .into_iter()
        .map(|xi| manifold_label(p, q, xi))
        .collect::<Result<Vec<f64>>>()?;
    LabelField::new(values, Geometry::Circle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::circular_distance;
    use std::f64::consts::PI;

    #[test]
    fn constant_field_is_stationary() {
        let x = LabelField::new(vec![1.3; 32], Geometry::Circle).unwrap();
        // harmonic-moment summation leaves rounding residue only
        assert!(cl_rhs(&x, &InteractionKernel::kuramoto(1.0))
            .unwrap()
            .iter()
            .all(|&v| v.abs() < 1e-15));
    }

    #[test]
    fn twisted_field_examples() {
        let g = LabelGrid::new(2).unwrap();
        // ξ_0 = 0.25
        assert!((twisted_field(&g, 1, 0.0).values()[0] - PI / 2.0).abs() < 1e-15);
        assert!(twisted_field(&g, 0, 0.7).values().iter().all(|&v| v == 0.7));
        // ξ_1 = 0.75 -> 3π + π on a winding-2 state; check ξ = 0.5 through a 4-label grid's neighbour
        let g4 = LabelGrid::new(4).unwrap();
        let f = twisted_field(&g4, 2, PI);
        assert!(circular_distance(f.values()[1], wrap_angle(4.0 * PI * 0.375 + PI)) < 1e-14);
    }

    #[test]
    fn twisted_fields_are_equilibria() {
        let g = LabelGrid::new(256).unwrap();
        for m in 1..4 {
            let v = cl_rhs(
                &twisted_field(&g, m, 0.4),
                &InteractionKernel::kuramoto(1.0),
            )
            .unwrap();
            assert!(v.iter().all(|x| x.abs() < 1e-13));
        }
    }

    #[test]
    fn manifold_field_at_beta_zero_is_twisted() {
        let g = LabelGrid::new(64).unwrap();
        for &q in &[0.0, 1.0, 5.5] {
            let m = manifold_field(&g, &OAPoint::new(0.8, 0.0).unwrap(), q).unwrap();
            let t = twisted_field(&g, 1, q);
            for (a, b) in m.values().iter().zip(t.values()) {
                assert!(circular_distance(*a, *b) < 1e-13);
            }
        }
    }

    #[test]
    fn frac_stays_in_unit_interval() {
        assert_eq!(frac(1.0), 0.0);
        assert_eq!(frac(-0.25), 0.75);
        assert!(frac(-1e-18) < 1.0);
    }
}
