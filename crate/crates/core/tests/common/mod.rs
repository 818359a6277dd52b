//! Reference computations that share no code with the library.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

/// Adaptive Simpson quadrature on `[a, b]`.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Root of a nondecreasing `g` with `g(lo) ≤ target ≤ g(hi)`.
pub fn bisect(g: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, target: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Classical RK4 for `y' = f(y)` from 0 to `t` with step `dt`.
pub fn rk4(f: &dyn Fn(&[f64]) -> Vec<f64>, y0: &[f64], t: f64, dt: f64) -> Vec<f64> {
    let steps = (t / dt).round() as usize;
    let h = t / steps as f64;
    let mut y = y0.to_vec();
    let add =
        |y: &[f64], k: &[f64], s: f64| y.iter().zip(k).map(|(a, b)| a + s * b).collect::<Vec<_>>();
    for _ in 0..steps {
        let k1 = f(&y);
        let k2 = f(&add(&y, &k1, 0.5 * h));
        let k3 = f(&add(&y, &k2, 0.5 * h));
        let k4 = f(&add(&y, &k3, h));
        for i in 0..y.len() {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

/// Poisson kernel density via its Fourier series `(1/2π)(1 + 2Σ βⁿ cos(n(θ+α)))`.
pub fn poisson_series(alpha: f64, beta: f64, theta: f64, terms: usize) -> f64 {
    let mut s = 1.0;
    let mut b = 1.0;
    for n in 1..=terms {
        b *= beta;
        s += 2.0 * b * (n as f64 * (theta + alpha)).cos();
    }
    s / TAU
}

/// Closed-form Poisson kernel density, written out independently.
pub fn poisson(alpha: f64, beta: f64, theta: f64) -> f64 {
    (1.0 - beta * beta) / (TAU * (1.0 - 2.0 * beta * (theta + alpha).cos() + beta * beta))
}

/// `∫₀^θ poisson` by adaptive Simpson.
pub fn poisson_cdf(alpha: f64, beta: f64, theta: f64) -> f64 {
    simpson(&|u| poisson(alpha, beta, u), 0.0, theta, 1e-14)
}

/// Periodic trapezoid rule with `n` nodes.
pub fn periodic_trapezoid(f: &dyn Fn(f64) -> f64, n: usize) -> f64 {
    let h = TAU / n as f64;
    (0..n).map(|j| f(j as f64 * h)).sum::<f64>() * h
}

/// `(re, im)` of the periodic trapezoid rule for a complex integrand.
pub fn periodic_trapezoid_complex(f: &dyn Fn(f64) -> (f64, f64), n: usize) -> (f64, f64) {
    let h = TAU / n as f64;
    let (mut re, mut im) = (0.0, 0.0);
    for j in 0..n {
        let (a, b) = f(j as f64 * h);
        re += a * h;
        im += b * h;
    }
    (re, im)
}

/// Exact phase difference of two unit-coupled Kuramoto oscillators.
pub fn two_oscillator_gap(delta0: f64, t: f64) -> f64 {
    2.0 * ((delta0 / 2.0).tan() * (-t).exp()).atan()
}

/// `β(t)` of `β̇ = ½β(1-β²)` by RK4.
pub fn reduced_flow_rk4(beta0: f64, t: f64, dt: f64) -> f64 {
    rk4(
        &|y: &[f64]| vec![0.5 * y[0] * (1.0 - y[0] * y[0])],
        &[beta0],
        t,
        dt,
    )[0]
}

/// Quantile of the Poisson density by bisection on the quadrature CDF.
pub fn poisson_quantile(alpha: f64, beta: f64, xi: f64) -> f64 {
    bisect(&|t| poisson_cdf(alpha, beta, t), 0.0, TAU, xi)
}

/// Smallest representative distance on the circle.
pub fn circle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

pub const HALF_PI: f64 = PI / 2.0;
