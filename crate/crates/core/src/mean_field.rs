//! Mean-field transport `∂_t f + ∂_θ(f V[f]) = 0` on the circle (and a line
//! variant), with `V[f](θ) = ∫ φ(θ, y) f(y) dy`.
//!
//! Two discretizations: a Fourier-Galerkin solver in mode space for the
//! Kuramoto kernel and a first-order conservative finite-volume solver for
//! arbitrary kernels. Mode convention: `f(θ) = (1/2π) Σ_n c_n e^{inθ}`,
//! `c_{-n} = conj(c_n)`, so an OA density has `c_n = βⁿ e^{inα}`.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::circle::{CircularDensity, ThetaGrid};
use crate::error::{Error, Result};
use crate::integrate::{drive, rk4_step, TimeStepping, Trajectory};
use crate::kernel::{Geometry, InteractionKernel};

/// Modulus of the last retained mode beyond which truncation is untrustworthy.
pub const TAIL_LIMIT: f64 = 0.5;
/// Courant number enforced by the finite-volume solver.
pub const CFL_NUMBER: f64 = 0.5;
pub const MIN_MODES: usize = 8;

/// Fourier modes `c_0 = 1, c_1, …, c_{n_modes}` of a circle density.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierDensity {
    modes: Vec<Complex64>,
}

impl FourierDensity {
    pub fn new(modes: Vec<Complex64>) -> Result<Self> {
        if modes.len() < 2 {
            return Err(Error::InvalidArgument(
                "need at least one nonconstant mode".into(),
            ));
        }
        if modes[0] != Complex64::new(1.0, 0.0) {
            return Err(Error::InvalidArgument(format!(
                "c_0 = {} must equal 1",
                modes[0]
            )));
        }
        if modes
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::InvalidArgument("non-finite Fourier mode".into()));
        }
        Ok(FourierDensity { modes })
    }

    pub fn uniform(n_modes: usize) -> Self {
        let mut modes = vec![Complex64::new(0.0, 0.0); n_modes + 1];
        modes[0] = Complex64::new(1.0, 0.0);
        FourierDensity { modes }
    }

    /// OA closure `c_n = aⁿ`.
    pub fn oa_closure(a: Complex64, n_modes: usize) -> Self {
        let mut modes = Vec::with_capacity(n_modes + 1);
        let mut c = Complex64::new(1.0, 0.0);
        for _ in 0..=n_modes {
            modes.push(c);
            c *= a;
        }
        FourierDensity { modes }
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len() - 1
    }

    pub fn modes(&self) -> &[Complex64] {
        &self.modes
    }

    pub fn order_parameter(&self) -> Complex64 {
        self.modes[1]
    }

    /// Grid values of the truncated series (real by conjugate symmetry).
    pub fn grid_values(&self, n_cells: usize) -> Vec<f64> {
        (0..n_cells)
            .map(|j| {
                let theta = TAU * j as f64 / n_cells as f64;
                let tail: f64 = self
                    .modes
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(n, c)| (c * Complex64::from_polar(1.0, n as f64 * theta)).re)
                    .sum();
                (1.0 + 2.0 * tail) / TAU
            })
            .collect()
    }

    pub fn reconstruct(&self, n_cells: usize) -> Result<CircularDensity> {
        CircularDensity::new(self.grid_values(n_cells))
    }
}

/// `∫ f(θ) e^{-iθ} dθ` by the periodic trapezoid rule.
pub fn order_parameter(f: &CircularDensity) -> Complex64 {
    let grid = f.grid();
    let h = grid.spacing();
    f.values()
        .iter()
        .enumerate()
        .fold(Complex64::new(0.0, 0.0), |acc, (j, &v)| {
            acc + Complex64::from_polar(v * h, -grid.node(j))
        })
}

/// How the Galerkin system closes at the highest retained mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailClosure {
    /// `c_{N+1} = 0`.
    #[default]
    Truncate,
    /// `c_{N+1} = c_N c_1`.
    OttAntonsen,
}

/// `ċ_n = (n/2)(c_1 c_{n-1} - conj(c_1) c_{n+1})`, `ċ_0 = 0`.
pub fn spectral_rhs(modes: &[Complex64], closure: TailClosure) -> Vec<Complex64> {
    let n_modes = modes.len() - 1;
    let c1 = modes[1];
    let beyond = match closure {
        TailClosure::Truncate => Complex64::new(0.0, 0.0),
        TailClosure::OttAntonsen => modes[n_modes] * c1,
    };
    let mut out = vec![Complex64::new(0.0, 0.0); modes.len()];
    for n in 1..=n_modes {
        let next = if n < n_modes { modes[n + 1] } else { beyond };
        out[n] = (c1 * modes[n - 1] - c1.conj() * next) * (0.5 * n as f64);
    }
    out
}

/// RK4 in mode space. Mode 0 has zero derivative and stays exactly 1.
pub fn mfl_simulate_spectral(
    c0: &FourierDensity,
    stepping: &TimeStepping,
    closure: TailClosure,
) -> Result<Trajectory<Complex64>> {
    let n_modes = c0.n_modes();
    if n_modes < MIN_MODES {
        return Err(Error::InvalidArgument(format!(
            "n_modes = {n_modes} < {MIN_MODES}"
        )));
    }
    let mut rhs = |c: &[Complex64]| Ok(spectral_rhs(c, closure));
    drive(
        c0.modes.clone(),
        stepping,
        |c, h, _| rk4_step(c, h, &mut rhs),
        |c, _, _| {
            let modulus = c[n_modes].norm();
            if modulus > TAIL_LIMIT {
                return Err(Error::TailBlowup {
                    mode: n_modes,
                    modulus,
                });
            }
            Ok(())
        },
    )
}

/// A grid density at a given time.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensityState {
    pub density: CircularDensity,
    pub time: f64,
}

/// Cell averages on a uniform partition of `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineDensity {
    lo: f64,
    hi: f64,
    values: Vec<f64>,
}

impl LineDensity {
    pub fn new(lo: f64, hi: f64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || !(hi > lo) {
            return Err(Error::InvalidArgument(
                "line density needs cells on a nonempty interval".into(),
            ));
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || value < -crate::circle::NEGATIVITY_TOL {
                return Err(Error::InvalidDensity { index, value });
            }
        }
        Ok(LineDensity { lo, hi, values })
    }

    /// Samples `f` at cell centers, adds `floor`, and normalizes.
    pub fn from_fn(
        lo: f64,
        hi: f64,
        n_cells: usize,
        floor: f64,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let h = (hi - lo) / n_cells as f64;
        let raw: Vec<f64> = (0..n_cells)
            .map(|j| f(lo + (j as f64 + 0.5) * h) + floor)
            .collect();
        let mass: f64 = raw.iter().sum::<f64>() * h;
        Self::new(lo, hi, raw.into_iter().map(|v| v / mass).collect())
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / self.values.len() as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.values.len())
            .map(|j| self.lo + (j as f64 + 0.5) * h)
            .collect()
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.spacing()
    }
}

/// Local Lax-Friedrichs flux with the single interface speed `v`, which
/// reduces to upwinding.
pub(crate) fn upwind_flux(v: f64, left: f64, right: f64) -> f64 {
    0.5 * v * (left + right) - 0.5 * v.abs() * (right - left)
}

/// Uniform finite-volume mesh: cell centers, interface positions and spacing.
struct FvMesh {
    centers: Vec<f64>,
    interfaces: Vec<f64>,
    spacing: f64,
    geometry: Geometry,
}

impl FvMesh {
    fn circle(n: usize) -> Self {
        let h = TAU / n as f64;
        FvMesh {
            centers: (0..n).map(|j| j as f64 * h).collect(),
            interfaces: (0..n).map(|j| (j as f64 + 0.5) * h).collect(),
            spacing: h,
            geometry: Geometry::Circle,
        }
    }

    fn line(lo: f64, hi: f64, n: usize) -> Self {
        let h = (hi - lo) / n as f64;
        FvMesh {
            centers: (0..n).map(|j| lo + (j as f64 + 0.5) * h).collect(),
            interfaces: (1..n).map(|j| lo + j as f64 * h).collect(),
            spacing: h,
            geometry: Geometry::Line,
        }
    }

    /// `(df/dt, max |V|)` with the local Lax-Friedrichs flux
    /// `½V(f_L + f_R) - ½|V|(f_R - f_L)` at each interface. The line mesh has
    /// zero-flux walls.
    fn rhs(&self, f: &[f64], kernel: &InteractionKernel) -> Result<(Vec<f64>, f64)> {
        let n = f.len();
        let h = self.spacing;
        let weights: Vec<f64> = f.iter().map(|v| v * h).collect();
        let speed = kernel.field(&self.interfaces, &self.centers, &weights, self.geometry)?;
        let max_speed = speed.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let flux_at = |k: usize, left: f64, right: f64| upwind_flux(speed[k], left, right);
        let mut out = vec![0.0; n];
        match self.geometry {
            Geometry::Circle => {
                let flux: Vec<f64> = (0..n).map(|j| flux_at(j, f[j], f[(j + 1) % n])).collect();
                for j in 0..n {
                    out[j] = -(flux[j] - flux[(j + n - 1) % n]) / h;
                }
            }
            Geometry::Line => {
                let flux: Vec<f64> = (0..n - 1).map(|j| flux_at(j, f[j], f[j + 1])).collect();
                for j in 0..n {
                    let right = if j + 1 < n { flux[j] } else { 0.0 };
                    let left = if j > 0 { flux[j - 1] } else { 0.0 };
                    out[j] = -(right - left) / h;
                }
            }
        }
        Ok((out, max_speed))
    }

    /// Third-order strong-stability-preserving Runge-Kutta step; keeps the
    /// upwind scheme positive under the CFL bound.
    fn ssprk3_step(
        &self,
        f: &[f64],
        dt: f64,
        step: usize,
        kernel: &InteractionKernel,
    ) -> Result<Vec<f64>> {
        let (k1, max_speed) = self.rhs(f, kernel)?;
        let limit = CFL_NUMBER * self.spacing / max_speed.max(f64::MIN_POSITIVE);
        if dt > limit {
            return Err(Error::CflViolation { step, dt, limit });
        }
        let u1: Vec<f64> = f.iter().zip(&k1).map(|(a, b)| a + dt * b).collect();
        let (k2, _) = self.rhs(&u1, kernel)?;
        let u2: Vec<f64> = f
            .iter()
            .zip(u1.iter().zip(&k2))
            .map(|(a, (b, c))| 0.75 * a + 0.25 * (b + dt * c))
            .collect();
        let (k3, _) = self.rhs(&u2, kernel)?;
        Ok(f.iter()
            .zip(u2.iter().zip(&k3))
            .map(|(a, (b, c))| a / 3.0 + 2.0 / 3.0 * (b + dt * c))
            .collect())
    }
}

/// Conservative finite-volume solver on the circle.
pub fn mfl_simulate_grid(
    f0: &CircularDensity,
    kernel: &InteractionKernel,
    stepping: &TimeStepping,
) -> Result<Vec<GridDensityState>> {
    kernel.validate_for(Geometry::Circle)?;
    let mesh = FvMesh::circle(f0.grid().n_cells());
    let traj = drive(
        f0.values().to_vec(),
        stepping,
        |f, h, n| mesh.ssprk3_step(f, h, n + 1, kernel),
        |_, _, _| Ok(()),
    )?;
    traj.times
        .into_iter()
        .zip(traj.states)
        .map(|(time, values)| {
            Ok(GridDensityState {
                density: CircularDensity::new(values)?,
                time,
            })
        })
        .collect()
}

/// Conservative finite-volume solver on an interval with zero-flux walls.
pub fn mfl_simulate_line(
    f0: &LineDensity,
    kernel: &InteractionKernel,
    stepping: &TimeStepping,
) -> Result<Trajectory> {
    let mesh = FvMesh::line(f0.lo, f0.hi, f0.values.len());
    drive(
        f0.values.clone(),
        stepping,
        |f, h, n| mesh.ssprk3_step(f, h, n + 1, kernel),
        |_, _, _| Ok(()),
    )
}

/// Trapezoid discretization of `(L f)(θ) = (1/2π) ∫ cos(m(θ - φ)) f(φ) dφ`.
pub fn linearized_operator_harmonic(n_cells: usize, harmonic: u32) -> Result<DMatrix<f64>> {
    if n_cells < MIN_MODES {
        return Err(Error::InvalidArgument(format!(
            "n_cells = {n_cells} < {MIN_MODES}"
        )));
    }
    let grid = ThetaGrid::new(n_cells)?;
    let h = grid.spacing();
    let m = harmonic as f64;
    Ok(DMatrix::from_fn(n_cells, n_cells, |i, j| {
        h / TAU * (m * (grid.node(i) - grid.node(j))).cos()
    }))
}

/// Linearization of the Kuramoto mean-field flow at the incoherent state.
pub fn linearized_operator(n_cells: usize) -> Result<DMatrix<f64>> {
    linearized_operator_harmonic(n_cells, 1)
}

/// Eigenvalues sorted descending with matching eigenvectors (as columns).
pub fn sorted_eigen(matrix: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = matrix.nrows();
    let eig = SymmetricEigen::new(matrix);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

pub fn linearized_spectrum(n_cells: usize) -> Result<Vec<f64>> {
    Ok(sorted_eigen(linearized_operator(n_cells)?).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oa::OAPoint;

    #[test]
    fn fourier_density_requires_unit_mass_mode() {
        assert!(
            FourierDensity::new(vec![Complex64::new(0.9, 0.0), Complex64::new(0.1, 0.0)]).is_err()
        );
        assert!(
            FourierDensity::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0)]).is_ok()
        );
    }

    #[test]
    fn oa_reconstruction_matches_closed_form() {
        let p = OAPoint::new(0.4, 0.3).unwrap();
        let f = FourierDensity::oa_closure(Complex64::from_polar(0.3, 0.4), 64)
            .reconstruct(128)
            .unwrap();
        for (j, v) in f.values().iter().enumerate() {
            assert!((v - p.density(f.grid().node(j))).abs() < 1e-14);
        }
    }

    #[test]
    fn order_parameter_of_uniform_is_zero() {
        let f = CircularDensity::uniform(64).unwrap();
        assert!(order_parameter(&f).norm() < 1e-15);
        assert_eq!(
            FourierDensity::uniform(8).order_parameter(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn spectral_rhs_examples() {
        let zero = spectral_rhs(FourierDensity::uniform(8).modes(), TailClosure::Truncate);
        assert!(zero.iter().all(|c| c.norm() == 0.0));
        let mut modes = FourierDensity::uniform(8).modes().to_vec();
        modes[1] = Complex64::new(1e-6, 0.0);
        let d = spectral_rhs(&modes, TailClosure::Truncate);
        assert!((d[1].re - 0.5e-6).abs() < 1e-18);
        assert_eq!(d[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn spectral_solver_needs_enough_modes() {
        let c = FourierDensity::uniform(4);
        let r = mfl_simulate_spectral(&c, &TimeStepping::new(0.1, 1.0), TailClosure::Truncate);
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn tail_blowup_is_detected() {
        let c = FourierDensity::oa_closure(Complex64::new(0.95, 0.0), 8);
        let r = mfl_simulate_spectral(&c, &TimeStepping::new(0.01, 1.0), TailClosure::Truncate);
        assert!(matches!(r, Err(Error::TailBlowup { .. })));
    }

    #[test]
    fn cfl_violation_is_reported() {
        let p = OAPoint::new(0.0, 0.5).unwrap();
        let f0 = CircularDensity::from_fn(256, |t| p.density(t)).unwrap();
        let r = mfl_simulate_grid(
            &f0,
            &InteractionKernel::kuramoto(1.0),
            &TimeStepping::new(0.5, 1.0),
        );
        assert!(matches!(r, Err(Error::CflViolation { step: 1, .. })));
    }

    #[test]
    fn operator_is_symmetric() {
        let l = linearized_operator(16).unwrap();
        assert!((l.clone() - l.transpose()).amax() < 1e-15);
    }
}
