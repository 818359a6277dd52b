//! Fixed-step classical Runge-Kutta driver shared by every solver.

use std::ops::{Add, Mul};

use crate::error::{Error, Result};

/// Step size, horizon and output cadence of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeStepping {
    pub dt: f64,
    pub t_end: f64,
    /// Store every `output_every` time units (rounded to a whole number of
    /// steps); `None` stores every step.
    pub output_every: Option<f64>,
}

impl TimeStepping {
    pub fn new(dt: f64, t_end: f64) -> Self {
        TimeStepping {
            dt,
            t_end,
            output_every: None,
        }
    }

    pub fn with_output_every(mut self, every: f64) -> Self {
        self.output_every = Some(every);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "dt = {} must be positive",
                self.dt
            )));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "T = {} must be nonnegative",
                self.t_end
            )));
        }
        if let Some(every) = self.output_every {
            if !(every > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "output_every = {every} must be positive"
                )));
            }
        }
        Ok(())
    }

    /// Number of full steps, plus a shorter final step when `T/dt` is not whole.
    pub fn schedule(&self) -> (usize, Option<f64>) {
        let ratio = self.t_end / self.dt;
        let full = (ratio + 1e-9).floor() as usize;
        let rest = self.t_end - full as f64 * self.dt;
        if rest > 1e-12 * self.t_end.max(1.0) {
            (full, Some(rest))
        } else {
            (full, None)
        }
    }

    pub fn stride(&self) -> usize {
        self.output_every
            .map_or(1, |e| ((e / self.dt).round() as usize).max(1))
    }
}

/// Times and stored states of a run; always includes `t = 0` and `t = T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T = f64> {
    pub times: Vec<f64>,
    pub states: Vec<Vec<T>>,
}

impl<T> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &[T])> {
        self.times
            .last()
            .map(|&t| (t, self.states[self.states.len() - 1].as_slice()))
    }
}

/// Values an RK4 stage can combine.
pub trait StageValue: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn is_finite_value(&self) -> bool;
}

impl StageValue for f64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl StageValue for num_complex::Complex64 {
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

fn axpy<T: StageValue>(y: &[T], h: f64, k: &[T]) -> Vec<T> {
    y.iter().zip(k).map(|(&a, &b)| a + b * h).collect()
}

/// One classical RK4 step.
pub fn rk4_step<T, F>(y: &[T], h: f64, rhs: &mut F) -> Result<Vec<T>>
where
    T: StageValue,
    F: FnMut(&[T]) -> Result<Vec<T>>,
{
    let k1 = rhs(y)?;
    let k2 = rhs(&axpy(y, 0.5 * h, &k1))?;
    let k3 = rhs(&axpy(y, 0.5 * h, &k2))?;
    let k4 = rhs(&axpy(y, h, &k3))?;
    Ok(y.iter()
        .enumerate()
        .map(|(i, &v)| v + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0))
        .collect())
}

/// Runs `step` over the schedule of `stepping`, calling `after_step` on each
/// new state (wrapping, tail checks). Fails with `NonFinite` on the first
/// step that produces a non-finite component.
pub fn drive<T, S, A>(
    y0: Vec<T>,
    stepping: &TimeStepping,
    mut step: S,
    mut after_step: A,
) -> Result<Trajectory<T>>
where
    T: StageValue,
    S: FnMut(&[T], f64, usize) -> Result<Vec<T>>,
    A: FnMut(&mut Vec<T>, usize, f64) -> Result<()>,
{
    stepping.validate()?;
    let (full, rest) = stepping.schedule();
    let stride = stepping.stride();
    let total = full + usize::from(rest.is_some());
    let mut times = vec![0.0];
    let mut states = vec![y0.clone()];
    let mut y = y0;
    for n in 0..total {
        let h = if n < full {
            stepping.dt
        } else {
            rest.unwrap_or(stepping.dt)
        };
        let mut next = step(&y, h, n)?;
        let t = if n + 1 == total {
            stepping.t_end
        } else {
            (n + 1) as f64 * stepping.dt
        };
        if next.iter().any(|v| !v.is_finite_value()) {
            return Err(Error::NonFinite {
                step: n + 1,
                time: t,
            });
        }
        after_step(&mut next, n + 1, t)?;
        y = next;
        if (n + 1) % stride == 0 || n + 1 == total {
            times.push(t);
            states.push(y.clone());
        }
    }
    Ok(Trajectory { times, states })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_handles_remainders() {
        assert_eq!(TimeStepping::new(0.1, 1.0).schedule(), (10, None));
        let (full, rest) = TimeStepping::new(0.3, 1.0).schedule();
        assert_eq!(full, 3);
        assert!((rest.unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(TimeStepping::new(0.1, 0.0).schedule(), (0, None));
    }

    #[test]
    fn rk4_is_fourth_order_on_exponential() {
        let exact = 1f64.exp();
        let err = |dt: f64| {
            let traj = drive(
                vec![1.0],
                &TimeStepping::new(dt, 1.0),
                |y, h, _| rk4_step(y, h, &mut |v: &[f64]| Ok(v.to_vec())),
                |_, _, _| Ok(()),
            )
            .unwrap();
            (traj.last().unwrap().1[0] - exact).abs()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
    }

    #[test]
    fn output_stride_keeps_endpoints() {
        let traj = drive(
            vec![0.0],
            &TimeStepping::new(0.01, 1.0).with_output_every(0.1),
            |y, h, _| Ok(vec![y[0] + h]),
            |_, _, _| Ok(()),
        )
        .unwrap();
        assert_eq!(traj.len(), 11);
        assert_eq!(traj.times[0], 0.0);
        assert_eq!(*traj.times.last().unwrap(), 1.0);
    }

    #[test]
    fn non_finite_is_reported() {
        let res = drive(
            vec![1.0],
            &TimeStepping::new(0.1, 1.0),
            |y, _, n| Ok(vec![if n == 3 { f64::NAN } else { y[0] }]),
            |_, _, _| Ok(()),
        );
        assert!(matches!(res, Err(Error::NonFinite { step: 4, .. })));
    }
}
