//! Closed forms on the Ott-Antonsen manifold of identical Kuramoto oscillators.
//!
//! A point `(α, β)` is the Poisson-kernel density
//! `f(θ) = (1/2π)(1-β²)/(1-2β cos(α+θ)+β²)`, peaked at `θ = -α`, with
//! Fourier modes `c_n = βⁿ e^{inα}` in the convention
//! `f = (1/2π) Σ c_n e^{inθ}`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::circle::{wrap_signed, Quantile};
use crate::error::{Error, Result};

/// Largest representable `β`; the `β → 1` limit is a Dirac mass.
pub const BETA_MAX: f64 = 1.0 - 1e-9;
/// Distance of the tangent argument to a pole below which the closed-form
/// quantile hands over to bisection.
pub const POLE_GUARD: f64 = 1e-12;

/// Coordinates `(α, β)` on the manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OAPoint {
    alpha: f64,
    beta: f64,
}

/// `∂F/∂α, ∂F/∂β, ∂F/∂θ` of the circular CDF and `∂C/∂α, ∂C/∂β` of the shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OAPartials {
    pub d_alpha_cdf: f64,
    pub d_beta_cdf: f64,
    pub d_theta_cdf: f64,
    pub d_alpha_shift: f64,
    pub d_beta_shift: f64,
}

/// A manifold point together with the time it was reached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OAFlowState {
    pub point: OAPoint,
    pub time: f64,
}

impl OAFlowState {
    pub fn advance(&self, dt: f64) -> OAFlowState {
        OAFlowState {
            point: self.point.flow(dt),
            time: self.time + dt,
        }
    }
}

fn pole_denominator(beta: f64, phi: f64) -> f64 {
    1.0 - 2.0 * beta * phi.cos() + beta * beta
}

/// `arctan(β sin φ / (1 - β cos φ))`; the denominator is positive for `β < 1`.
fn phase_offset(beta: f64, phi: f64) -> f64 {
    (beta * phi.sin()).atan2(1.0 - beta * phi.cos())
}

impl OAPoint {
    /// `α` is wrapped to `[-π, π)`; `β ∈ [0, 1]` is clamped to [`BETA_MAX`].
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "alpha = {alpha} is not finite"
            )));
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::InvalidBeta(beta));
        }
        Ok(OAPoint {
            alpha: wrap_signed(alpha),
            beta: beta.min(BETA_MAX),
        })
    }

    pub fn incoherent() -> Self {
        OAPoint {
            alpha: 0.0,
            beta: 0.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn density(&self, theta: f64) -> f64 {
        let b = self.beta;
        (1.0 - b * b) / (TAU * pole_denominator(b, self.alpha + theta))
    }

    /// Circular CDF anchored at 0, for `θ ∈ [0, 2π]`.
    pub fn cdf(&self, theta: f64) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        theta / TAU + (phase_offset(b, theta + a) - phase_offset(b, a)) / PI
    }

    /// `C(α, β) = -(1/π) arctan(β sin α / (1 - β cos α))`.
    pub fn shift(&self) -> f64 {
        -phase_offset(self.beta, self.alpha) / PI
    }

    /// Inverse CDF, continuous and increasing from `0` at `ξ = 0` to `2π` at `ξ = 1`.
    ///
    /// The closed form `2 arctan(r tan(πξ + A)) - α` with
    /// `r = (1-β)/(1+β)` and `A = arctan(tan(α/2)/r)` is evaluated on the
    /// branch `k = ⌊(πξ + A + π/2)/π⌋`, adding `2πk`; this lands the jump at
    /// the branch point `c` and keeps the result continuous.
    pub fn quantile(&self, xi: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&xi) {
            return Err(Error::DomainError {
                value: xi,
                domain: "[0, 1]",
            });
        }
        if xi == 0.0 {
            return Ok(0.0);
        }
        if xi == 1.0 {
            return Ok(TAU);
        }
        if self.beta == 0.0 {
            return Ok(TAU * xi);
        }
        let r = (1.0 - self.beta) / (1.0 + self.beta);
        let half = 0.5 * self.alpha;
        let offset = half.sin().atan2(r * half.cos());
        let u = PI * xi + offset;
        let k = ((u + FRAC_PI_2) / PI).floor();
        let w = u - k * PI;
        let theta = 2.0 * (r * w.sin()).atan2(w.cos()) + TAU * k - self.alpha;
        if w.cos().abs() < POLE_GUARD || !theta.is_finite() {
            return self.quantile_by_bisection(xi);
        }
        Ok(theta.clamp(0.0, TAU))
    }

    fn quantile_by_bisection(&self, xi: f64) -> Result<f64> {
        let (mut lo, mut hi) = (0.0, TAU);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) < xi {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let theta = 0.5 * (lo + hi);
        if theta.is_finite() && (self.cdf(theta) - xi).abs() < 1e-9 {
            Ok(theta)
        } else {
            Err(Error::BranchEvaluation { xi })
        }
    }

    /// Label at which the closed-form `G` jumps by `2π`.
    pub fn branch_point(&self) -> f64 {
        let r = (1.0 - self.beta) / (1.0 + self.beta);
        let half = 0.5 * self.alpha;
        0.5 - half.sin().atan2(r * half.cos()) / PI
    }

    pub fn partials(&self, theta: f64) -> OAPartials {
        let (a, b) = (self.alpha, self.beta);
        let phi = theta + a;
        let d_phi = pole_denominator(b, phi);
        let d_a = pole_denominator(b, a);
        let rate_phi = (b * phi.cos() - b * b) / d_phi;
        let rate_a = (b * a.cos() - b * b) / d_a;
        OAPartials {
            d_alpha_cdf: (rate_phi - rate_a) / PI,
            d_beta_cdf: (phi.sin() / d_phi - a.sin() / d_a) / PI,
            d_theta_cdf: self.density(theta),
            d_alpha_shift: -rate_a / PI,
            d_beta_shift: -a.sin() / d_a / PI,
        }
    }

    /// Reduced vector field `(α̇, β̇) = (0, ½β(1-β²))`.
    pub fn vector_field(&self) -> (f64, f64) {
        let b = self.beta;
        (0.0, 0.5 * b * (1.0 - b * b))
    }

    /// Exact flow `β(t) = β₀/√(β₀² + (1-β₀²)e^{-t})`, `α(t) = α₀`; any finite `t`.
    pub fn flow(&self, t: f64) -> OAPoint {
        let b0 = self.beta;
        if b0 == 0.0 {
            return *self;
        }
        let b = b0 / (b0 * b0 + (1.0 - b0 * b0) * (-t).exp()).sqrt();
        OAPoint {
            alpha: self.alpha,
            beta: b.min(BETA_MAX),
        }
    }

    /// `∫₀^{2π} e^{iu}/(1 - 2β cos(α+u) + β²) du = 2πβe^{-iα}/(1-β²)`.
    pub fn residue_integral(&self) -> Complex64 {
        let b = self.beta;
        Complex64::from_polar(TAU * b / (1.0 - b * b), -self.alpha)
    }

    /// `-β sin(α + θ)`, the continuum vector field at `θ = F⁻¹(ξ)`.
    pub fn lemma_rhs(&self, theta: f64) -> f64 {
        -self.beta * (self.alpha + theta).sin()
    }

    /// Modes `c_0..=c_{n_modes}` with `c_n = βⁿ e^{inα}`.
    pub fn fourier_modes(&self, n_modes: usize) -> Vec<Complex64> {
        let a = Complex64::from_polar(self.beta, self.alpha);
        let mut modes = Vec::with_capacity(n_modes + 1);
        let mut c = Complex64::new(1.0, 0.0);
        for _ in 0..=n_modes {
            modes.push(c);
            c *= a;
        }
        modes
    }
}

impl Quantile for OAPoint {
    fn quantile(&self, xi: f64) -> Result<f64> {
        OAPoint::quantile(self, xi)
    }
}

pub fn oa_density(p: &OAPoint, theta: f64) -> f64 {
    p.density(theta)
}

pub fn oa_cdf(p: &OAPoint, theta: f64) -> f64 {
    p.cdf(theta)
}

pub fn oa_quantile(p: &OAPoint, xi: f64) -> Result<f64> {
    p.quantile(xi)
}

pub fn oa_shift_c(p: &OAPoint) -> f64 {
    p.shift()
}

pub fn oa_partials(p: &OAPoint, theta: f64) -> OAPartials {
    p.partials(theta)
}

pub fn oa_vector_field(p: &OAPoint) -> (f64, f64) {
    p.vector_field()
}

pub fn oa_flow_explicit(p0: &OAPoint, t: f64) -> OAPoint {
    p0.flow(t)
}

pub fn residue_integral(p: &OAPoint) -> Complex64 {
    p.residue_integral()
}

pub fn lemma_rhs(p: &OAPoint, theta: f64) -> f64 {
    p.lemma_rhs(theta)
}
