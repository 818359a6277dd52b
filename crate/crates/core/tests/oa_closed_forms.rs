mod common;

use std::f64::consts::{LN_2, PI, TAU};

use common::*;
use kuramoto_limits::circle::cdf_from_density;
use kuramoto_limits::{manifold_label, CircularDensity, OAPoint};
use proptest::prelude::*;

fn pt(alpha: f64, beta: f64) -> OAPoint {
    OAPoint::new(alpha, beta).unwrap()
}

#[test]
fn density_matches_fourier_series() {
    let p = pt(0.0, 0.5);
    assert!((p.density(0.0) - 3.0 / TAU).abs() < 1e-12);
    assert!((p.density(PI) - 1.0 / (6.0 * PI)).abs() < 1e-12);
    assert!((p.density(0.0) - poisson_series(0.0, 0.5, 0.0, 200)).abs() < 1e-12);
    assert!((p.density(PI) - poisson_series(0.0, 0.5, PI, 200)).abs() < 1e-12);
    for &(a, b, t) in &[(0.7, 0.4, 1.1), (-2.0, 0.9, 4.0), (3.0, 0.2, 0.3)] {
        assert!((pt(a, b).density(t) - poisson_series(a, b, t, 400)).abs() < 1e-10);
    }
}

#[test]
fn cdf_matches_quadrature() {
    let p = pt(0.0, 0.5);
    let oracle = poisson_cdf(0.0, 0.5, HALF_PI);
    assert!((oracle - 0.3975836).abs() < 1e-7);
    assert!((p.cdf(HALF_PI) - oracle).abs() < 1e-12);
    assert!((p.cdf(HALF_PI) - (0.25 + 0.5f64.atan() / PI)).abs() < 1e-14);
    for &(a, b, t) in &[(0.7, 0.4, 2.0), (-2.5, 0.85, 5.5), (1.0, 0.95, 3.0)] {
        assert!((pt(a, b).cdf(t) - poisson_cdf(a, b, t)).abs() < 1e-11);
    }
}

#[test]
fn grid_cdf_of_sampled_density() {
    let p = pt(0.0, 0.5);
    let f = CircularDensity::from_fn(4096, |t| poisson(0.0, 0.5, t)).unwrap();
    let cdf = cdf_from_density(&f).unwrap();
    assert!((cdf.eval(HALF_PI) - 0.397584).abs() < 1e-6);
    assert!((cdf.eval(HALF_PI) - p.cdf(HALF_PI)).abs() < 1e-6);
}

#[test]
fn quantile_matches_bisection() {
    let q = pt(0.7, 0.4).quantile(0.3).unwrap();
    assert!((q - poisson_quantile(0.7, 0.4, 0.3)).abs() < 1e-10);
    // manifold point at α = 0: C = 0, so the label maps straight through F⁻¹
    let x = manifold_label(&pt(0.0, 0.5), 0.0, 0.5).unwrap();
    assert!((x - poisson_quantile(0.0, 0.5, 0.5)).abs() < 1e-10);
}

#[test]
fn shift_constant() {
    let c = pt(PI / 2.0, 0.5).shift();
    assert!((c + 0.5f64.atan() / PI).abs() < 1e-14);
    assert!((c + 0.1475836).abs() < 1e-7);
    for &(a, b) in &[(0.4, 0.3), (-1.2, 0.8), (2.9, 0.5)] {
        let p = pt(a, b);
        let lhs = p.shift();
        let expected = -(b * a.sin()).atan2(1.0 - b * a.cos()) / PI;
        assert!((lhs - expected).abs() < 1e-14);
    }
    assert_eq!(pt(1.0, 0.0).shift(), 0.0);
    assert_eq!(pt(0.0, 0.7).shift(), 0.0);
}

#[test]
fn beta_partial_by_finite_difference() {
    let h = 1e-6;
    let fd = (pt(0.0, 0.5 + h).cdf(HALF_PI) - pt(0.0, 0.5 - h).cdf(HALF_PI)) / (2.0 * h);
    assert!((fd - 0.8 / PI).abs() < 1e-8);
    assert!((pt(0.0, 0.5).partials(HALF_PI).d_beta_cdf - 0.8 / PI).abs() < 1e-14);
    assert!((0.8 / PI - 0.2546479).abs() < 1e-7);
}

#[test]
fn reduced_vector_field_and_flow() {
    assert_eq!(pt(0.3, 0.5).vector_field(), (0.0, 0.1875));
    let t = 3f64.ln();
    let b = pt(0.0, 0.5).flow(t).beta();
    assert!((b - 1.0 / 2f64.sqrt()).abs() < 1e-14);
    assert!((b - reduced_flow_rk4(0.5, t, 1e-4)).abs() < 1e-12);
    assert!((pt(0.0, 0.5).flow(LN_2).beta() - reduced_flow_rk4(0.5, LN_2, 1e-4)).abs() < 1e-12);
}

#[test]
fn residue_integral_matches_trapezoid() {
    let quad = |a: f64, b: f64| {
        periodic_trapezoid_complex(
            &|u| {
                let d = 1.0 - 2.0 * b * (a + u).cos() + b * b;
                (u.cos() / d, u.sin() / d)
            },
            4096,
        )
    };
    let r = pt(0.0, 0.5).residue_integral();
    assert!((r.re - 4.0 * PI / 3.0).abs() < 1e-12 && r.im.abs() < 1e-14);
    let (re, im) = quad(0.0, 0.5);
    assert!((re - r.re).abs() < 1e-10 && (im - r.im).abs() < 1e-10);
    let r = pt(PI / 2.0, 0.3).residue_integral();
    let (re, im) = quad(PI / 2.0, 0.3);
    assert!((r.im + TAU * 0.3 / 0.91).abs() < 1e-14 && (r.im + 2.07138).abs() < 1e-5);
    assert!((re - r.re).abs() < 1e-10 && (im - r.im).abs() < 1e-10);
}

#[test]
fn lemma_rhs_matches_label_quadrature() {
    let p = pt(0.0, 0.5);
    assert!((p.lemma_rhs(HALF_PI) + 0.5).abs() < 1e-15);
    // left side at the label ξ with F⁻¹(ξ) = π/2, by midpoint quadrature over 4096 labels
    let n = 4096;
    let xs: Vec<f64> = (0..n)
        .map(|j| poisson_quantile_fast(&p, (j as f64 + 0.5) / n as f64))
        .collect();
    let lhs = xs.iter().map(|u| (u - HALF_PI).sin()).sum::<f64>() / n as f64;
    assert!((lhs + 0.5).abs() < 1e-10, "{lhs}");
}

/// Bisection on the closed-form CDF (the quadrature oracle is too slow for 4096 labels).
fn poisson_quantile_fast(p: &OAPoint, xi: f64) -> f64 {
    bisect(&|t| p.cdf(t), 0.0, TAU, xi)
}

#[test]
fn density_is_normalized() {
    for &a in &[-3.0, -1.0, 0.0, 2.0] {
        for &b in &[0.0, 0.3, 0.6, 0.9, 0.95] {
            let p = pt(a, b);
            let mass = periodic_trapezoid(&|t| p.density(t), 1024);
            assert!((mass - 1.0).abs() < 1e-12, "α={a} β={b}: {mass}");
        }
    }
}

#[test]
fn lemma_residual_on_coarse_grid() {
    let n = 1024;
    let labels: Vec<f64> = (0..n).map(|j| (j as f64 + 0.5) / n as f64).collect();
    let mut worst = 0.0f64;
    for &a in &[-3.0, -1.5, 0.0, 1.5, 3.0] {
        for k in 0..10 {
            let p = pt(a, 0.1 * k as f64);
            let xs: Vec<f64> = labels.iter().map(|&z| p.quantile(z).unwrap()).collect();
            for j in 0..257 {
                let v = p.quantile((j as f64 + 0.5) / 257.0).unwrap();
                let lhs = xs.iter().map(|u| (u - v).sin()).sum::<f64>() / n as f64;
                worst = worst.max((lhs - p.lemma_rhs(v)).abs());
            }
        }
    }
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn quantile_round_trip_near_branch_point() {
    for k in 0..64 {
        let alpha = -PI + TAU * k as f64 / 64.0;
        for &beta in &[0.05, 0.5, 0.9, 0.95] {
            let p = pt(alpha, beta);
            let c = p.branch_point();
            for d in [-1e-6, -1e-9, 0.0, 1e-9, 1e-6] {
                let xi = (c + d).clamp(0.0, 1.0);
                let x = p.quantile(xi).unwrap();
                assert!((p.cdf(x) - xi).abs() < 1e-10, "α={alpha} β={beta} ξ={xi}");
            }
        }
    }
}

proptest! {
    #[test]
    fn quantile_inverts_cdf(alpha in -PI..PI, beta in 0.0..0.95f64, xi in 0.0..=1.0f64) {
        let p = pt(alpha, beta);
        let x = p.quantile(xi).unwrap();
        prop_assert!((0.0..=TAU).contains(&x));
        prop_assert!((p.cdf(x) - xi).abs() < 1e-10);
    }

    #[test]
    fn quantile_is_monotone(alpha in -PI..PI, beta in 0.0..0.95f64, a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let p = pt(alpha, beta);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(p.quantile(lo).unwrap() <= p.quantile(hi).unwrap() + 1e-12);
    }

    #[test]
    fn flow_is_a_semigroup(beta in 0.0..0.99f64, s in 0.0..5.0f64, t in 0.0..5.0f64) {
        let p = pt(0.4, beta);
        let two = p.flow(s).flow(t).beta();
        let one = p.flow(s + t).beta();
        prop_assert!((two - one).abs() < 1e-12);
    }

    #[test]
    fn cdf_matches_quadrature_everywhere(alpha in -PI..PI, beta in 0.0..0.9f64, theta in 0.0..TAU) {
        prop_assert!((pt(alpha, beta).cdf(theta) - poisson_cdf(alpha, beta, theta)).abs() < 1e-10);
    }
}
