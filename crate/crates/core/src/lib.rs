//! Particle, continuum-limit and mean-field descriptions of Kuramoto-type
//! interacting systems on the circle and the line, the transforms between
//! them, and the closed-form Ott-Antonsen family of unstable manifolds.

pub mod bridge;
pub mod circle;
pub mod continuum;
pub mod error;
pub mod integrate;
pub mod kernel;
pub mod lab;
pub mod mean_field;
pub mod oa;
pub mod particles;

pub use bridge::{
    cl_to_measure, drift_integrand, drift_scheme_flux, mfl_to_cl_circle, mfl_to_cl_line,
    pushforward_check, CircleTransform, DriftAccumulator, DriftRule,
};
pub use circle::{
    cdf_from_density, circular_distance, quantile_from_cdf, w1_circle, w1_circle_cdf, w1_line,
    wrap_angle, Angle, CdfFn, CircularDensity, EmpiricalMeasure, LabelGrid, Quantile, QuantileFn,
    ThetaGrid,
};
pub use continuum::{
    cl_rhs, cl_simulate, manifold_field, manifold_label, twisted_field, LabelField,
};
pub use error::{Error, Result};
pub use integrate::{TimeStepping, Trajectory};
pub use kernel::{Geometry, GradientTable, InteractionKernel};
pub use lab::VerificationReport;
pub use mean_field::{
    linearized_operator, linearized_spectrum, mfl_simulate_grid, mfl_simulate_line,
    mfl_simulate_spectral, order_parameter, FourierDensity, GridDensityState, LineDensity,
    TailClosure,
};
pub use num_complex::Complex64;
pub use oa::{OAFlowState, OAPartials, OAPoint};
pub use particles::{discrete_twisted_state, ds_rhs, ds_simulate, to_empirical, ParticleState};
