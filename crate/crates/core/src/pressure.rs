//! Topological pressure from preimage trees, the Bowen equation, and
//! derivative/curvature readings of the pressure curve.
//!
//! The estimator averages the last few level increments
//! `S_j(t) - S_{j-1}(t)` of the log weight sums instead of dividing
//! `S_n` by `n`; both have the same limit but the increments drop the
//! O(1/n) constant bias. The spread of the averaged increments is
//! reported as the error bar.

use rayon::prelude::*;

use crate::complex::Cx;
use crate::error::{Error, Result};
use crate::numeric;
use crate::semigroup::SemigroupSpec;
use crate::tol;
use crate::tree::{enumerate_tree, tree_weight_sum, PreimageTree, PruneOpts};

/// Pressure estimate at one parameter, with the increment spread as a
/// rough error bar.
#[derive(Clone, Copy, Debug)]
pub struct PressureValue {
    pub value: f64,
    pub spread: f64,
}

/// Pressure at parameter `t` read off an existing tree.
pub fn pressure_on_tree(tree: &PreimageTree, t: f64, k_avg: usize) -> PressureValue {
    let n = tree.depth();
    let k = k_avg.max(1).min(n);
    let mut increments = Vec::with_capacity(k);
    let mut prev = if n - k == 0 {
        0.0
    } else {
        tree_weight_sum(tree, t, n - k)
    };
    for j in (n - k + 1)..=n {
        let s = tree_weight_sum(tree, t, j);
        increments.push(s - prev);
        prev = s;
    }
    let value = numeric::pairwise_sum(&increments) / increments.len() as f64;
    let spread = increments.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - increments.iter().copied().fold(f64::INFINITY, f64::min);
    PressureValue { value, spread }
}

/// Pressure estimate at a single parameter from a fresh tree. Beyond
/// depth 8 the tree is pruned at the estimator's own t, capping the
/// exponential node growth at negligible weight bias.
pub fn estimate_pressure(
    spec: &SemigroupSpec,
    xi: Cx,
    t: f64,
    n: usize,
    k_avg: usize,
) -> Result<f64> {
    let prune = if n <= 8 { PruneOpts::off() } else { PruneOpts::at(t) };
    let tree = enumerate_tree(spec, xi, n, prune)?;
    Ok(pressure_on_tree(&tree, t, k_avg).value)
}

/// Sampled pressure curve with cross-checks at an alternate base point.
#[derive(Clone, Debug)]
pub struct PressureCurve {
    pub t_grid: Vec<f64>,
    pub depth: usize,
    pub estimates: Vec<f64>,
    /// Spread of the averaged increments at each grid point.
    pub increment_spreads: Vec<f64>,
    pub base_point: Cx,
    pub base_point_alt: Cx,
    /// Max over the grid of |estimate - alternate-base estimate|.
    pub cross_check_gap: f64,
    /// Grid indices i with P(t_{i+1}) > P(t_i) + tau_mono.
    pub monotonicity_violations: Vec<usize>,
    /// Grid indices i (interior) with second difference < -tau_conv.
    pub convexity_violations: Vec<usize>,
    /// Set when the grid contains 0 and P(0) < log 2 - 1e-9.
    pub p_zero_violation: bool,
}

/// Estimates the pressure on a grid from two admissible base points.
/// Shape violations are flagged on the result, never silently repaired.
pub fn pressure_curve(
    spec: &SemigroupSpec,
    xi: Cx,
    xi_alt: Cx,
    t_grid: &[f64],
    n: usize,
    k_avg: usize,
) -> Result<PressureCurve> {
    if t_grid.is_empty() {
        return Err(Error::Precondition("empty t grid".into()));
    }
    if t_grid.iter().any(|&t| t < 0.0) {
        return Err(Error::Precondition("pressure parameters must be >= 0".into()));
    }
    let tree = enumerate_tree(spec, xi, n, PruneOpts::off())?;
    let tree_alt = enumerate_tree(spec, xi_alt, n, PruneOpts::off())?;

    let both: Vec<(PressureValue, PressureValue)> = t_grid
        .par_iter()
        .map(|&t| (pressure_on_tree(&tree, t, k_avg), pressure_on_tree(&tree_alt, t, k_avg)))
        .collect();
    let estimates: Vec<f64> = both.iter().map(|(a, _)| a.value).collect();
    let increment_spreads: Vec<f64> = both.iter().map(|(a, _)| a.spread).collect();
    let cross_check_gap = both
        .iter()
        .map(|(a, b)| (a.value - b.value).abs())
        .fold(0.0, f64::max);

    let (monotonicity_violations, convexity_violations) = shape_violations(t_grid, &estimates);
    let p_zero_violation = t_grid
        .iter()
        .position(|&t| t == 0.0)
        .is_some_and(|i| estimates[i] < 2f64.ln() - 1e-9);

    Ok(PressureCurve {
        t_grid: t_grid.to_vec(),
        depth: n,
        estimates,
        increment_spreads,
        base_point: xi,
        base_point_alt: xi_alt,
        cross_check_gap,
        monotonicity_violations,
        convexity_violations,
        p_zero_violation,
    })
}

/// Grid indices violating strict decrease (beyond tau_mono) and
/// convexity (second differences below -tau_conv).
pub fn shape_violations(t_grid: &[f64], estimates: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let mut monotonicity = Vec::new();
    for i in 0..estimates.len().saturating_sub(1) {
        if t_grid[i + 1] > t_grid[i] && estimates[i + 1] > estimates[i] + tol::TAU_MONO {
            monotonicity.push(i);
        }
    }
    let mut convexity = Vec::new();
    for i in 1..estimates.len().saturating_sub(1) {
        let second = estimates[i + 1] - 2.0 * estimates[i] + estimates[i - 1];
        if second < -tol::TAU_CONV {
            convexity.push(i);
        }
    }
    (monotonicity, convexity)
}

/// The Bowen root: the zero of the pressure estimate.
#[derive(Clone, Copy, Debug)]
pub struct BowenResult {
    pub h: f64,
    pub bracket: (f64, f64),
    /// |P(h)| at the returned root.
    pub residual: f64,
    pub depth: usize,
}

/// Finds the zero of `t -> pressure_on_tree(tree, t, k_avg)` by
/// bracketing and bisection; the pressure is strictly decreasing so the
/// zero is unique.
pub fn bowen_root_on_tree(tree: &PreimageTree, k_avg: usize, tol_t: f64) -> Result<BowenResult> {
    let p = |t: f64| pressure_on_tree(tree, t, k_avg).value;
    let mut lo = 0.0;
    let mut hi = 2.0;
    if p(lo) <= 0.0 {
        return Err(Error::NoSignChange { max_t: tol::MAX_BRACKET_T });
    }
    while p(hi) > 0.0 {
        hi *= 2.0;
        if hi > tol::MAX_BRACKET_T {
            return Err(Error::NoSignChange { max_t: tol::MAX_BRACKET_T });
        }
    }
    while hi - lo > tol_t {
        let mid = 0.5 * (lo + hi);
        if p(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let h = 0.5 * (lo + hi);
    Ok(BowenResult { h, bracket: (lo, hi), residual: p(h).abs(), depth: tree.depth() })
}

/// Bowen root from a fresh tree at depth `n`.
pub fn bowen_root(spec: &SemigroupSpec, xi: Cx, n: usize, tol_t: f64) -> Result<BowenResult> {
    let tree = enumerate_tree(spec, xi, n, PruneOpts::off())?;
    bowen_root_on_tree(&tree, tol::DEFAULT_K_AVG, tol_t)
}

/// Locates `t` on the curve grid; the stencil needs both neighbors at
/// uniform spacing.
fn stencil(curve: &PressureCurve, t: f64) -> Result<(usize, f64)> {
    let i = curve
        .t_grid
        .iter()
        .position(|&g| (g - t).abs() < 1e-12)
        .ok_or_else(|| Error::GridTooCoarse(format!("t = {t} is not a grid point")))?;
    if i == 0 || i + 1 >= curve.t_grid.len() {
        return Err(Error::GridTooCoarse(format!("t = {t} has no interior neighbors")));
    }
    let hl = curve.t_grid[i] - curve.t_grid[i - 1];
    let hr = curve.t_grid[i + 1] - curve.t_grid[i];
    if hl <= 0.0 || (hl - hr).abs() > 1e-9 * hl.max(hr) {
        return Err(Error::GridTooCoarse("grid spacing is not uniform around t".into()));
    }
    Ok((i, hl))
}

/// Lyapunov exponent as minus the slope of the pressure curve.
pub fn lyapunov_from_slope(curve: &PressureCurve, t: f64) -> Result<f64> {
    let (i, h) = stencil(curve, t)?;
    Ok(-(curve.estimates[i + 1] - curve.estimates[i - 1]) / (2.0 * h))
}

/// Asymptotic variance as the curvature of the pressure curve. A value
/// that is slightly negative (within the convexity tolerance) is
/// clamped to zero; anything more negative is returned as-is so the
/// violation stays visible.
pub fn variance_from_curvature(curve: &PressureCurve, t: f64) -> Result<f64> {
    let (i, h) = stencil(curve, t)?;
    let raw = (curve.estimates[i + 1] - 2.0 * curve.estimates[i] + curve.estimates[i - 1])
        / (h * h);
    if (-tol::TAU_CONV..0.0).contains(&raw) {
        Ok(0.0)
    } else {
        Ok(raw)
    }
}

/// CSV rendering: `t,pressure,increment_spread,depth` with a header row
/// and 17-significant-digit values.
pub fn pressure_curve_csv(curve: &PressureCurve) -> String {
    let mut out = String::from("t,pressure,increment_spread,depth\n");
    for (i, &t) in curve.t_grid.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            numeric::fmt_g17(t),
            numeric::fmt_g17(curve.estimates[i]),
            numeric::fmt_g17(curve.increment_spreads[i]),
            curve.depth
        ));
    }
    out
}
