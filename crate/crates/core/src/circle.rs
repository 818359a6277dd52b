//! Circle arithmetic, uniform grids, densities, CDFs, quantiles and
//! 1-Wasserstein distances.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Tolerance on `|mass - 1|` accepted by [`cdf_from_density`].
pub const NORMALIZATION_TOL: f64 = 1e-8;
/// Tolerance on the total weight of an [`EmpiricalMeasure`].
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Densities may dip this far below zero (rounding) and still count as nonnegative.
pub const NEGATIVITY_TOL: f64 = 1e-12;
/// Flat CDF cells narrower than this are ignored by the strict quantile.
pub const FLAT_WIDTH_TOL: f64 = 1e-10;

/// Canonical representative of `x` in `[0, 2π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Representative of `x` in `[-π, π)`.
pub fn wrap_signed(x: f64) -> f64 {
    if (-PI..PI).contains(&x) {
        return x;
    }
    wrap_angle(x + PI) - PI
}

/// Geodesic distance on the unit circle, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(TAU - d)
}

/// A point on the circle `ℝ/2πℤ`, stored in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub fn new(radians: f64) -> Self {
        Angle(wrap_angle(radians))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn distance(self, other: Angle) -> f64 {
        circular_distance(self.0, other.0)
    }
}

impl From<f64> for Angle {
    fn from(x: f64) -> Self {
        Angle::new(x)
    }
}

/// Uniform periodic grid `θ_j = 2πj/n`, `j = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaGrid {
    n_cells: usize,
}

impl ThetaGrid {
    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::InvalidArgument(
                "theta grid needs at least one cell".into(),
            ));
        }
        Ok(ThetaGrid { n_cells })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.n_cells as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n_cells as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_cells).map(|j| self.node(j)).collect()
    }
}

/// Midpoint label grid `ξ_j = (j + ½)/n` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelGrid {
    n_labels: usize,
}

impl LabelGrid {
    pub fn new(n_labels: usize) -> Result<Self> {
        if n_labels == 0 {
            return Err(Error::InvalidArgument(
                "label grid needs at least one label".into(),
            ));
        }
        Ok(LabelGrid { n_labels })
    }

    pub fn n_labels(&self) -> usize {
        self.n_labels
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.n_labels as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        (j as f64 + 0.5) / self.n_labels as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_labels).map(|j| self.point(j)).collect()
    }
}

/// Density per radian sampled on a [`ThetaGrid`].
///
/// Values are node samples for smooth densities and cell averages for the
/// finite-volume solver; in both readings the periodic trapezoid sum
/// `h Σ f_j` is the total mass.
#[derive(Debug, Clone, PartialEq)]
pub struct CircularDensity {
    grid: ThetaGrid,
    values: Vec<f64>,
}

impl CircularDensity {
    /// Wraps grid values. Rejects negative (beyond rounding) or non-finite
    /// entries; normalization is checked where it matters.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let grid = ThetaGrid::new(values.len())?;
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || value < -NEGATIVITY_TOL {
                return Err(Error::InvalidDensity { index, value });
            }
        }
        Ok(CircularDensity { grid, values })
    }

    pub fn from_fn(n_cells: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let grid = ThetaGrid::new(n_cells)?;
        Self::new(grid.nodes().into_iter().map(f).collect())
    }

    pub fn uniform(n_cells: usize) -> Result<Self> {
        Self::from_fn(n_cells, |_| 1.0 / TAU)
    }

    pub fn grid(&self) -> ThetaGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Periodic trapezoid integral over `[0, 2π]`.
    pub fn mass(&self) -> f64 {
        self.grid.spacing() * self.values.iter().sum::<f64>()
    }

    pub fn normalized(&self) -> Self {
        let m = self.mass();
        CircularDensity {
            grid: self.grid,
            values: self.values.iter().map(|v| v / m).collect(),
        }
    }

    /// Periodic linear interpolation between nodes.
    pub fn value_at(&self, theta: f64) -> f64 {
        let n = self.grid.n_cells;
        let s = wrap_angle(theta) / self.grid.spacing();
        let j = (s.floor() as usize).min(n - 1);
        let w = s - j as f64;
        (1.0 - w) * self.values[j] + w * self.values[(j + 1) % n]
    }
}

/// Weighted atoms on the line or on the circle (positions are raw reals;
/// circle routines wrap them).
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    positions: Vec<f64>,
    weights: Vec<f64>,
}

impl EmpiricalMeasure {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        let (positions, weights): (Vec<f64>, Vec<f64>) = atoms.into_iter().unzip();
        if let Some(p) = positions.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidMeasure(format!(
                "non-finite atom position {p}"
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0)) {
            return Err(Error::InvalidMeasure(format!("invalid weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}")));
        }
        Ok(EmpiricalMeasure { positions, weights })
    }

    /// Equal weights `1/N`; coincident positions stay separate atoms.
    pub fn uniform(positions: Vec<f64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        let w = 1.0 / positions.len() as f64;
        let atoms = positions.into_iter().map(|p| (p, w)).collect();
        Self::new(atoms)
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

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Atoms sorted by position (ties keep input order).
    pub fn sorted_atoms(&self) -> Vec<(f64, f64)> {
        let mut atoms: Vec<(f64, f64)> = self
            .positions
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
            .collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        atoms
    }

    /// Atoms with positions wrapped into `[0, 2π)`, sorted.
    pub fn sorted_circle_atoms(&self) -> Vec<(f64, f64)> {
        let mut atoms: Vec<(f64, f64)> = self
            .positions
            .iter()
            .map(|&p| wrap_angle(p))
            .zip(self.weights.iter().copied())
            .collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        atoms
    }

    /// Line pseudo-inverse `inf{x : F(x) ≥ ξ}`; `ξ = 0` returns the leftmost atom.
    pub fn quantile(&self, xi: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&xi) {
            return Err(Error::DomainError {
                value: xi,
                domain: "[0, 1]",
            });
        }
        let atoms = self.sorted_atoms();
        let mut cumulative = 0.0;
        for &(x, w) in &atoms {
            cumulative += w;
            if cumulative >= xi {
                return Ok(x);
            }
        }
        // total weight may fall short of 1 by rounding
        Ok(atoms[atoms.len() - 1].0)
    }
}

/// Monotone piecewise-linear CDF through `(nodes[k], values[k])`.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfFn {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl CdfFn {
    /// Validates monotonicity and the endpoint values 0 and 1.
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() != values.len() || nodes.len() < 2 {
            return Err(Error::InvalidArgument(
                "CDF needs matching node/value arrays of length ≥ 2".into(),
            ));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument(
                "CDF nodes must increase strictly".into(),
            ));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidArgument(
                "CDF values must be nondecreasing".into(),
            ));
        }
        if values[0] != 0.0 || values[values.len() - 1] != 1.0 {
            return Err(Error::InvalidArgument("CDF must run from 0 to 1".into()));
        }
        Ok(CdfFn { nodes, values })
    }

    /// Line CDF of cell averages on a uniform partition of `[lo, hi]`;
    /// nodes are the cell edges, so the result is the exact CDF of the
    /// piecewise-constant density.
    pub fn from_cell_averages(lo: f64, hi: f64, averages: &[f64]) -> Result<Self> {
        if averages.is_empty() || !(hi > lo) {
            return Err(Error::InvalidArgument("empty line density".into()));
        }
        let n = averages.len();
        let h = (hi - lo) / n as f64;
        let mut values = Vec::with_capacity(n + 1);
        values.push(0.0);
        let mut acc = 0.0;
        for (index, &f) in averages.iter().enumerate() {
            if !f.is_finite() || f < -NEGATIVITY_TOL {
                return Err(Error::InvalidDensity { index, value: f });
            }
            acc += f.max(0.0) * h;
            values.push(acc);
        }
        if (acc - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NonNormalized {
                mass: acc,
                tol: NORMALIZATION_TOL,
            });
        }
        for v in values.iter_mut() {
            *v /= acc;
        }
        values[n] = 1.0;
        let nodes = (0..=n).map(|k| lo + k as f64 * h).collect();
        Self::new(nodes, values)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Linear interpolation, clamped to 0 / 1 outside the node range.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.nodes.len();
        if x <= self.nodes[0] {
            return 0.0;
        }
        if x >= self.nodes[n - 1] {
            return 1.0;
        }
        let k = self.nodes.partition_point(|&p| p <= x).max(1) - 1;
        let (x0, x1) = (self.nodes[k], self.nodes[k + 1]);
        let w = (x - x0) / (x1 - x0);
        (1.0 - w) * self.values[k] + w * self.values[k + 1]
    }
}

/// Something that maps labels `ξ ∈ [0, 1]` to positions.
pub trait Quantile {
    fn quantile(&self, xi: f64) -> Result<f64>;

    fn sample(&self, grid: &LabelGrid) -> Result<Vec<f64>> {
        grid.points()
            .into_iter()
            .map(|xi| self.quantile(xi))
            .collect()
    }
}

/// Pseudo-inverse of a tabulated [`CdfFn`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileFn {
    cdf: CdfFn,
}

impl QuantileFn {
    pub fn cdf(&self) -> &CdfFn {
        &self.cdf
    }

    /// `inf{x : F(x) ≥ ξ}` with linear interpolation inside the bracketing cell.
    pub fn eval(&self, xi: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&xi) {
            return Err(Error::DomainError {
                value: xi,
                domain: "[0, 1]",
            });
        }
        let (nodes, values) = (&self.cdf.nodes, &self.cdf.values);
        let j = values.partition_point(|&v| v < xi);
        if j == 0 {
            return Ok(nodes[0]);
        }
        let j = j.min(values.len() - 1);
        let (f0, f1) = (values[j - 1], values[j]);
        let w = (xi - f0) / (f1 - f0);
        Ok(nodes[j - 1] + w * (nodes[j] - nodes[j - 1]))
    }
}

impl Quantile for QuantileFn {
    fn quantile(&self, xi: f64) -> Result<f64> {
        self.eval(xi)
    }
}

/// Circular CDF anchored at 0 by the cumulative periodic trapezoid rule.
/// The result has `n_cells + 1` nodes covering `[0, 2π]`.
pub fn cdf_from_density(f: &CircularDensity) -> Result<CdfFn> {
    let n = f.grid.n_cells;
    let h = f.grid.spacing();
    let total = f.mass();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NonNormalized {
            mass: total,
            tol: NORMALIZATION_TOL,
        });
    }
    let vals = &f.values;
    let mut values = Vec::with_capacity(n + 1);
    values.push(0.0);
    let mut acc = 0.0;
    for j in 0..n {
        let lo = vals[j].max(0.0);
        let hi = vals[(j + 1) % n].max(0.0);
        acc += 0.5 * h * (lo + hi);
        values.push(acc);
    }
    for v in values.iter_mut() {
        *v /= acc;
    }
    values[n] = 1.0;
    let mut nodes: Vec<f64> = (0..n).map(|j| f.grid.node(j)).collect();
    nodes.push(TAU);
    CdfFn::new(nodes, values)
}

/// Quantile of a tabulated CDF. In strict mode any flat cell (zero
/// increment over a cell wider than [`FLAT_WIDTH_TOL`]) is rejected.
pub fn quantile_from_cdf(cdf: &CdfFn, strict: bool) -> Result<QuantileFn> {
    if strict {
        for (cell, (v, x)) in cdf.values.windows(2).zip(cdf.nodes.windows(2)).enumerate() {
            let increment = v[1] - v[0];
            if increment <= 0.0 && x[1] - x[0] > FLAT_WIDTH_TOL {
                return Err(Error::NotStrictlyMonotone { cell, increment });
            }
        }
    }
    Ok(QuantileFn { cdf: cdf.clone() })
}

/// 1-Wasserstein distance on the line from the quantile coupling.
pub fn w1_line(mu: &EmpiricalMeasure, nu: &EmpiricalMeasure) -> Result<f64> {
    if mu.is_empty() || nu.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    let a = mu.sorted_atoms();
    let b = nu.sorted_atoms();
    let (mut i, mut j) = (0, 0);
    let (mut ra, mut rb) = (a[0].1, b[0].1);
    let mut total = 0.0;
    loop {
        let step = ra.min(rb);
        total += step * (a[i].0 - b[j].0).abs();
        ra -= step;
        rb -= step;
        if ra <= 0.0 {
            i += 1;
            if i == a.len() {
                break;
            }
            ra = a[i].1;
        }
        if rb <= 0.0 {
            j += 1;
            if j == b.len() {
                break;
            }
            rb = b[j].1;
        }
    }
    Ok(total)
}

/// Piece of a CDF difference `D` that is linear on an interval.
#[derive(Debug, Clone, Copy)]
struct LinearPiece {
    len: f64,
    start: f64,
    end: f64,
}

impl LinearPiece {
    fn abs_integral(&self, c: f64) -> f64 {
        let (u, v) = (self.start - c, self.end - c);
        if u * v >= 0.0 {
            self.len * (0.5 * (u + v)).abs()
        } else {
            self.len * (u * u + v * v) / (2.0 * (u.abs() + v.abs()))
        }
    }

    /// `meas{D < c} - meas{D > c}` on this piece.
    fn balance(&self, c: f64) -> f64 {
        let (a, b) = (self.start, self.end);
        if a == b {
            return if a < c {
                self.len
            } else if a > c {
                -self.len
            } else {
                0.0
            };
        }
        let s = ((c - a) / (b - a)).clamp(0.0, 1.0);
        let below = if b > a { s } else { 1.0 - s };
        self.len * (2.0 * below - 1.0)
    }
}

/// `min_c ∫ |D(θ) - c| dθ` for a piecewise-linear `D`.
fn min_over_shift(pieces: &[LinearPiece]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in pieces {
        lo = lo.min(p.start.min(p.end));
        hi = hi.max(p.start.max(p.end));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let balance: f64 = pieces.iter().map(|p| p.balance(mid)).sum();
        if balance < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let c = 0.5 * (lo + hi);
    pieces.iter().map(|p| p.abs_integral(c)).sum()
}

/// 1-Wasserstein distance on the circle of circumference 2π.
///
/// Uses `W1 = min_c ∫₀^{2π} |F_μ - F_ν - c| dθ`: the shift `c` of the CDF
/// difference plays the role of the rotation of the quantile coupling. The
/// optimum is a weighted median over the atom-induced breakpoints.
pub fn w1_circle(mu: &EmpiricalMeasure, nu: &EmpiricalMeasure) -> Result<f64> {
    if mu.is_empty() || nu.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    let a = mu.sorted_circle_atoms();
    let b = nu.sorted_circle_atoms();
    let mut breaks: Vec<f64> = a.iter().chain(b.iter()).map(|p| p.0).collect();
    breaks.push(0.0);
    breaks.push(TAU);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let (mut ia, mut ib) = (0, 0);
    let (mut fa, mut fb) = (0.0, 0.0);
    let mut pieces = Vec::with_capacity(breaks.len());
    for w in breaks.windows(2) {
        while ia < a.len() && a[ia].0 <= w[0] {
            fa += a[ia].1;
            ia += 1;
        }
        while ib < b.len() && b[ib].0 <= w[0] {
            fb += b[ib].1;
            ib += 1;
        }
        let d = fa - fb;
        pieces.push(LinearPiece {
            len: w[1] - w[0],
            start: d,
            end: d,
        });
    }
    Ok(min_over_shift(&pieces).min(PI))
}

/// 1-Wasserstein distance on the circle between atoms and a continuous
/// circular CDF whose nodes span `[0, 2π]`.
pub fn w1_circle_cdf(mu: &EmpiricalMeasure, cdf: &CdfFn) -> Result<f64> {
    if mu.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    let nodes = cdf.nodes();
    if nodes[0] != 0.0 || (nodes[nodes.len() - 1] - TAU).abs() > 1e-12 {
        return Err(Error::InvalidArgument(
            "circular CDF must span [0, 2π]".into(),
        ));
    }
    let a = mu.sorted_circle_atoms();
    let mut breaks: Vec<f64> = a.iter().map(|p| p.0).chain(nodes.iter().copied()).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let mut ia = 0;
    let mut fa = 0.0;
    let mut pieces = Vec::with_capacity(breaks.len());
    for w in breaks.windows(2) {
        while ia < a.len() && a[ia].0 <= w[0] {
            fa += a[ia].1;
            ia += 1;
        }
        pieces.push(LinearPiece {
            len: w[1] - w[0],
            start: fa - cdf.eval(w[0]),
            end: fa - cdf.eval(w[1]),
        });
    }
    Ok(min_over_shift(&pieces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn wrap_is_idempotent_and_periodic() {
        for &x in &[-7.0, -TAU, -1e-18, 0.0, 1.0, TAU, 13.2] {
            let w = wrap_angle(x);
            assert!((0.0..TAU).contains(&w));
            assert_eq!(wrap_angle(w), w);
            assert!(circular_distance(wrap_angle(x + TAU), w) < 1e-14);
        }
    }

    #[test]
    fn uniform_cdf_and_quantile() {
        let f = CircularDensity::uniform(64).unwrap();
        let cdf = cdf_from_density(&f).unwrap();
        assert_eq!(cdf.eval(0.0), 0.0);
        assert_eq!(cdf.eval(TAU), 1.0);
        assert!((cdf.eval(PI) - 0.5).abs() < 1e-15);
        let q = quantile_from_cdf(&cdf, true).unwrap();
        for &xi in &[0.0, 0.1, 0.37, 0.5, 0.99, 1.0] {
            assert!((q.eval(xi).unwrap() - TAU * xi).abs() < 1e-13);
        }
    }

    #[test]
    fn unnormalized_density_is_rejected() {
        let f = CircularDensity::from_fn(32, |_| 0.2).unwrap();
        assert!(matches!(
            cdf_from_density(&f),
            Err(Error::NonNormalized { .. })
        ));
    }

    #[test]
    fn negative_density_is_rejected() {
        let mut v = vec![1.0 / TAU; 8];
        v[3] = -0.01;
        assert!(matches!(
            CircularDensity::new(v),
            Err(Error::InvalidDensity { index: 3, .. })
        ));
    }

    #[test]
    fn strict_quantile_rejects_flat_cells() {
        let cdf = CdfFn::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 0.5, 0.5, 1.0]).unwrap();
        assert!(matches!(
            quantile_from_cdf(&cdf, true),
            Err(Error::NotStrictlyMonotone { cell: 1, .. })
        ));
        let q = quantile_from_cdf(&cdf, false).unwrap();
        // pseudo-inverse takes the left end of the flat region
        assert_eq!(q.eval(0.5).unwrap(), 1.0);
        assert!(matches!(q.eval(1.5), Err(Error::DomainError { .. })));
    }

    #[test]
    fn quantile_inverts_strictly_increasing_cdf() {
        let nodes: Vec<f64> = (0..=100).map(|k| k as f64 / 100.0 * TAU).collect();
        let values: Vec<f64> = nodes.iter().map(|x| (x / TAU).powi(2)).collect();
        let cdf = CdfFn::new(nodes, values).unwrap();
        let q = quantile_from_cdf(&cdf, true).unwrap();
        for &theta in &[0.3, 1.7, 4.0] {
            assert!((q.eval(cdf.eval(theta)).unwrap() - theta).abs() < 1e-12);
        }
    }

    #[test]
    fn paper_step_quantile() {
        let mu = EmpiricalMeasure::new(vec![(-1.0, 1.0 / 3.0), (1.0, 2.0 / 3.0)]).unwrap();
        assert_eq!(mu.quantile(0.1).unwrap(), -1.0);
        assert_eq!(mu.quantile(1.0 / 3.0).unwrap(), -1.0);
        assert_eq!(mu.quantile(0.5).unwrap(), 1.0);
        assert_eq!(mu.quantile(1.0).unwrap(), 1.0);
    }

    #[test]
    fn w1_line_examples() {
        let d = |a: f64| EmpiricalMeasure::new(vec![(a, 1.0)]).unwrap();
        assert_eq!(w1_line(&d(0.3), &d(0.3)).unwrap(), 0.0);
        assert!((w1_line(&d(-1.0), &d(2.5)).unwrap() - 3.5).abs() < 1e-15);
        let mu = EmpiricalMeasure::new(vec![(0.0, 0.5), (1.0, 0.5)]).unwrap();
        assert!((w1_line(&mu, &d(0.5)).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn w1_circle_examples() {
        let d = |a: f64| EmpiricalMeasure::new(vec![(a, 1.0)]).unwrap();
        assert!(w1_circle(&d(1.0), &d(1.0)).unwrap() < 1e-15);
        assert!((w1_circle(&d(0.0), &d(PI)).unwrap() - PI).abs() < 1e-12);
        assert!((w1_circle(&d(0.0), &d(1.5 * PI)).unwrap() - 0.5 * PI).abs() < 1e-12);
        // rotation-invariant and blind to the 2π representative
        assert!((w1_circle(&d(-0.25), &d(0.25)).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_measure_errors() {
        assert!(matches!(
            EmpiricalMeasure::uniform(vec![]),
            Err(Error::EmptyMeasure)
        ));
    }

    fn small_measure() -> impl Strategy<Value = EmpiricalMeasure> {
        prop::collection::vec((-5.0f64..5.0, 0.05f64..1.0), 1..6).prop_map(|atoms| {
            let total: f64 = atoms.iter().map(|a| a.1).sum();
            let mut atoms: Vec<(f64, f64)> =
                atoms.into_iter().map(|(x, w)| (x, w / total)).collect();
            let rest: f64 = atoms[1..].iter().map(|a| a.1).sum();
            atoms[0].1 = 1.0 - rest;
            EmpiricalMeasure::new(atoms).unwrap()
        })
    }

    proptest! {
        #[test]
        fn w1_line_is_a_metric(a in small_measure(), b in small_measure(), c in small_measure()) {
            let ab = w1_line(&a, &b).unwrap();
            let ba = w1_line(&b, &a).unwrap();
            let bc = w1_line(&b, &c).unwrap();
            let ac = w1_line(&a, &c).unwrap();
            prop_assert!(ab >= 0.0);
            prop_assert!((ab - ba).abs() < 1e-12);
            prop_assert!(ac <= ab + bc + 1e-12);
            prop_assert!(w1_line(&a, &a).unwrap() < 1e-15);
        }

        #[test]
        fn quantile_is_monotone(increments in prop::collection::vec(0.0f64..1.0, 2..40),
                                xis in prop::collection::vec(0.0f64..=1.0, 2..30)) {
            let total: f64 = increments.iter().sum();
            prop_assume!(total > 1e-6);
            let mut values = vec![0.0];
            let mut acc = 0.0;
            for inc in &increments {
                acc += inc / total;
                values.push(acc.min(1.0));
            }
            *values.last_mut().unwrap() = 1.0;
            let nodes = (0..values.len()).map(|k| k as f64).collect();
            let cdf = CdfFn::new(nodes, values).unwrap();
            let q = quantile_from_cdf(&cdf, false).unwrap();
            let mut xis = xis;
            xis.sort_by(f64::total_cmp);
            let out: Vec<f64> = xis.iter().map(|&x| q.eval(x).unwrap()).collect();
            prop_assert!(out.windows(2).all(|w| w[1] >= w[0]));
        }
    }
}
