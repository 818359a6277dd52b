//! Transforms between the continuum-limit and mean-field descriptions.
//!
//! Continuum to mean field: the label-averaged Dirac measure `∫ δ_{x(ξ)} dξ`.
//! Mean field to continuum: quantiles of the CDF, with the circular CDF
//! shifted by the accumulated boundary flux `C(t)` through the anchor `θ = 0`.

use crate::circle::{
    cdf_from_density, quantile_from_cdf, wrap_angle, CdfFn, CircularDensity, EmpiricalMeasure,
    LabelGrid, Quantile,
};
use crate::continuum::{frac, LabelField};
use crate::error::{Error, Result};
use crate::kernel::{Geometry, InteractionKernel};
use crate::mean_field::{upwind_flux, GridDensityState, LineDensity};

/// Highest trigonometric degree probed by [`pushforward_check`].
pub const PUSHFORWARD_DEGREE: usize = 8;
/// Admissible drift quadrature error per unit time.
pub const DRIFT_TOL: f64 = 1e-6;

/// Atoms at `x(ξ_j)` with weight `1/n_labels`.
pub fn cl_to_measure(x: &LabelField) -> EmpiricalMeasure {
    EmpiricalMeasure::uniform(x.values().to_vec()).expect("label fields are nonempty and finite")
}

/// `x_t(ξ) = F_t⁻¹(ξ)` for each slice of a line-density trajectory.
pub fn mfl_to_cl_line(slices: &[LineDensity], grid: &LabelGrid) -> Result<Vec<LabelField>> {
    slices
        .iter()
        .map(|f| {
            let cdf = CdfFn::from_cell_averages(f.lo(), f.hi(), f.values())?;
            let q = quantile_from_cdf(&cdf, true)?;
            LabelField::new(q.sample(grid)?, Geometry::Line)
        })
        .collect()
}

/// Running trapezoid integral `C(t) = ∫₀ᵗ g(s) ds` over stored samples.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DriftAccumulator {
    value: f64,
    last: Option<(f64, f64)>,
}

impl DriftAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Adds the sample `g(t)`; the first sample only anchors the integral.
    pub fn push(&mut self, t: f64, g: f64) -> f64 {
        if let Some((t0, g0)) = self.last {
            self.value += 0.5 * (t - t0) * (g0 + g);
        }
        self.last = Some((t, g));
        self.value
    }
}

/// Drift integrand `f(0) ∫ φ(0, y) f(y) dy`.
pub fn drift_integrand(f: &CircularDensity, kernel: &InteractionKernel) -> Result<f64> {
    let grid = f.grid();
    let h = grid.spacing();
    let weights: Vec<f64> = f.values().iter().map(|v| v * h).collect();
    let v0 = kernel.field(&[0.0], &grid.nodes(), &weights, Geometry::Circle)?[0];
    // node 0 sits at θ = 0, so periodic interpolation reduces to the node value
    Ok(f.value_at(0.0) * v0)
}

/// How the drift integrand is read off a grid slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriftRule {
    /// `f(0)·V(0)` from the grid values.
    Pointwise,
    /// Mass flux of the finite-volume scheme through `θ = 0`: the mean of the
    /// upwind fluxes at `±h/2`. Tracks the grid solver's own transport,
    /// numerical diffusion included, and agrees with `Pointwise` to `O(h)`.
    #[default]
    SchemeFlux,
}

/// Upwind mass flux through `θ = 0` for a grid slice.
pub fn drift_scheme_flux(f: &CircularDensity, kernel: &InteractionKernel) -> Result<f64> {
    let grid = f.grid();
    let n = grid.n_cells();
    let h = grid.spacing();
    let v = f.values();
    let weights: Vec<f64> = v.iter().map(|x| x * h).collect();
    let speed = kernel.field(
        &[-0.5 * h, 0.5 * h],
        &grid.nodes(),
        &weights,
        Geometry::Circle,
    )?;
    Ok(0.5 * (upwind_flux(speed[0], v[n - 1], v[0]) + upwind_flux(speed[1], v[0], v[1 % n])))
}

/// Output of [`mfl_to_cl_circle`].
#[derive(Debug, Clone, PartialEq)]
pub struct CircleTransform {
    pub times: Vec<f64>,
    pub drift: Vec<f64>,
    pub fields: Vec<LabelField>,
}

/// `x̃_t(ξ) = F_t⁻¹(ξ + C(t) mod 1)` along a time-uniform mean-field trajectory.
pub fn mfl_to_cl_circle(
    traj: &[GridDensityState],
    kernel: &InteractionKernel,
    grid: &LabelGrid,
    rule: DriftRule,
) -> Result<CircleTransform> {
    if traj.is_empty() {
        return Err(Error::InvalidArgument("empty trajectory".into()));
    }
    let times: Vec<f64> = traj.iter().map(|s| s.time).collect();
    if times.len() > 2 {
        let h = times[1] - times[0];
        if times
            .windows(2)
            .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1.0))
        {
            return Err(Error::InvalidArgument(
                "trajectory is not uniform in time".into(),
            ));
        }
    }
    let integrand = traj
        .iter()
        .map(|s| match rule {
            DriftRule::Pointwise => drift_integrand(&s.density, kernel),
            DriftRule::SchemeFlux => drift_scheme_flux(&s.density, kernel),
        })
        .collect::<Result<Vec<f64>>>()?;

    if integrand.len() >= 3 {
        // trapezoid error per unit time ≈ (h²/12)|g''| ≈ |Δ²g|/12
        let estimate = integrand
            .windows(3)
            .map(|w| (w[2] - 2.0 * w[1] + w[0]).abs() / 12.0)
            .fold(0.0, f64::max);
        if estimate > DRIFT_TOL {
            return Err(Error::DriftQuadrature { estimate });
        }
    }

    let mut acc = DriftAccumulator::new();
    let mut drift = Vec::with_capacity(traj.len());
    let mut fields = Vec::with_capacity(traj.len());
    let labels = grid.points();
    for (state, g) in traj.iter().zip(&integrand) {
        let c = acc.push(state.time, *g);
        drift.push(c);
        let q = quantile_from_cdf(&cdf_from_density(&state.density)?, true)?;
        let values = labels
            .iter()
            .map(|&xi| Ok(wrap_angle(q.eval(frac(xi + c))?)))
            .collect::<Result<Vec<f64>>>()?;
        fields.push(LabelField::new(values, Geometry::Circle)?);
    }
    Ok(CircleTransform {
        times,
        drift,
        fields,
    })
}

/// `max_{1≤k≤8} |∫ e^{ikθ} f(θ) dθ - ∫₀¹ e^{ik q(ξ)} dξ|`: small values
/// certify that `q` pushes Lebesgue measure on `[0, 1]` forward to `f`.
pub fn pushforward_check(
    f: &CircularDensity,
    q: &impl Quantile,
    labels: &LabelGrid,
) -> Result<f64> {
    let grid = f.grid();
    let h = grid.spacing();
    let samples = q.sample(labels)?;
    let w = labels.spacing();
    let mut defect = 0.0f64;
    for k in 1..=PUSHFORWARD_DEGREE {
        let k = k as f64;
        let (mut dc, mut ds) = (0.0, 0.0);
        for (j, &v) in f.values().iter().enumerate() {
            let th = k * grid.node(j);
            dc += h * v * th.cos();
            ds += h * v * th.sin();
        }
        let (mut lc, mut ls) = (0.0, 0.0);
        for &x in &samples {
            lc += w * (k * x).cos();
            ls += w * (k * x).sin();
        }
        defect = defect.max((dc - lc).abs()).max((ds - ls).abs());
    }
    Ok(defect)
}
