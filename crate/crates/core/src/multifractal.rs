//! The temperature function, auxiliary Lyapunov exponents, and the
//! dimension spectrum of Lyapunov level sets.
//!
//! For a reference parameter `t` and q in [0,1], the temperature T(q)
//! is the unique nonnegative solution of `P(T + q t) = q P(t)`; the
//! spectrum value at q is `T(q) + q * alpha(q)` with
//! `alpha(q) = t + P(t) / chi(q)`, where chi(q) is the Lyapunov
//! exponent of the auxiliary measure, read off the pressure slope at
//! the parameter `T(q) + q t`.

use rayon::prelude::*;

use crate::complex::Cx;
use crate::error::{Error, Result};
use crate::numeric;
use crate::pressure::{bowen_root_on_tree, pressure_on_tree};
use crate::semigroup::SemigroupSpec;
use crate::tol;
use crate::tree::{enumerate_tree, PreimageTree, PruneOpts};

/// Spread of the Lyapunov exponents below which the spectrum counts as
/// degenerate (the exceptional case: affine pressure, singleton spectrum).
pub const DEGENERACY_CHI_SPREAD: f64 = 1e-3;

/// One row of the spectrum table.
#[derive(Clone, Copy, Debug)]
pub struct SpectrumRow {
    pub q: f64,
    /// Temperature T(q).
    pub temperature: f64,
    /// Lyapunov exponent of the auxiliary measure at q.
    pub chi: f64,
    /// Level parameter alpha(q) = t + P(t)/chi.
    pub alpha: f64,
    /// Hausdorff dimension of the level set, T(q) + q alpha(q).
    pub dim: f64,
    /// Residual |P(T+qt) - q P(t)| of the temperature equation.
    pub residual: f64,
}

/// Sampled multifractal spectrum at a reference parameter.
#[derive(Clone, Debug)]
pub struct SpectrumTable {
    pub t: f64,
    pub rows: Vec<SpectrumRow>,
    /// Bowen root computed from the same tree.
    pub h_ref: f64,
    pub depth: usize,
    /// Set when max chi - min chi over the rows is below the spread
    /// threshold: the exceptional-case detector.
    pub degenerate: bool,
}

/// Solves `P(T + q t) = q P(t)` for T >= 0 on an existing tree by
/// bisection; the pressure is strictly decreasing in T so the solution
/// is unique. Returns the root and the equation residual.
pub fn temperature_on_tree(
    tree: &PreimageTree,
    t: f64,
    q: f64,
    k_avg: usize,
    tol_t: f64,
) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Precondition("q must lie in [0, 1]".into()));
    }
    if t < 0.0 {
        return Err(Error::Precondition("t must be >= 0".into()));
    }
    let target = q * pressure_on_tree(tree, t, k_avg).value;
    let g = |temp: f64| pressure_on_tree(tree, temp + q * t, k_avg).value - target;
    if g(0.0) <= 0.0 {
        // The analytic solution would be <= 0; clamp to the boundary.
        return Ok((0.0, g(0.0).abs()));
    }
    let mut lo = 0.0;
    let mut hi = 2.0;
    while g(hi) > 0.0 {
        hi *= 2.0;
        if hi > tol::MAX_BRACKET_T {
            return Err(Error::NoSignChange { max_t: tol::MAX_BRACKET_T });
        }
    }
    while hi - lo > tol_t {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    Ok((root, g(root).abs()))
}

/// Temperature from a fresh tree.
pub fn temperature(
    spec: &SemigroupSpec,
    xi: Cx,
    t: f64,
    q: f64,
    n: usize,
    tol_t: f64,
) -> Result<f64> {
    let tree = enumerate_tree(spec, xi, n, PruneOpts::off())?;
    Ok(temperature_on_tree(&tree, t, q, tol::DEFAULT_K_AVG, tol_t)?.0)
}

/// Lyapunov exponent at parameter `s` as minus the pressure slope,
/// computed from a fresh finite difference on the same tree. Central
/// where possible; one-sided next to the boundary t = 0.
pub fn chi_at(tree: &PreimageTree, s: f64, k_avg: usize) -> f64 {
    let step = tol::CHI_STEP;
    if s >= step {
        let up = pressure_on_tree(tree, s + step, k_avg).value;
        let down = pressure_on_tree(tree, s - step, k_avg).value;
        -(up - down) / (2.0 * step)
    } else {
        let here = pressure_on_tree(tree, s, k_avg).value;
        let up = pressure_on_tree(tree, s + step, k_avg).value;
        -(up - here) / step
    }
}

/// One spectrum row on an existing tree.
pub fn spectrum_row_on_tree(
    tree: &PreimageTree,
    t: f64,
    q: f64,
    k_avg: usize,
    tol_t: f64,
) -> Result<SpectrumRow> {
    let (temp, residual) = temperature_on_tree(tree, t, q, k_avg, tol_t)?;
    let chi = chi_at(tree, temp + q * t, k_avg);
    let p_t = pressure_on_tree(tree, t, k_avg).value;
    let alpha = t + p_t / chi;
    let dim = temp + q * alpha;
    Ok(SpectrumRow { q, temperature: temp, chi, alpha, dim, residual })
}

/// One spectrum row from a fresh tree.
pub fn spectrum_row(
    spec: &SemigroupSpec,
    xi: Cx,
    t: f64,
    q: f64,
    n: usize,
) -> Result<SpectrumRow> {
    let tree = enumerate_tree(spec, xi, n, PruneOpts::off())?;
    spectrum_row_on_tree(&tree, t, q, tol::DEFAULT_K_AVG, tol::DEFAULT_TOL_T)
}

/// The full table over a q grid. The grid must live in [0,1] and contain
/// both endpoints, where the temperature pins to the Bowen root and to
/// zero respectively.
pub fn spectrum_table(
    spec: &SemigroupSpec,
    xi: Cx,
    t: f64,
    q_grid: &[f64],
    n: usize,
) -> Result<SpectrumTable> {
    if q_grid.iter().any(|&q| !(0.0..=1.0).contains(&q)) {
        return Err(Error::Precondition("q grid must lie in [0, 1]".into()));
    }
    if !q_grid.contains(&0.0) || !q_grid.contains(&1.0) {
        return Err(Error::Precondition("q grid must contain 0 and 1".into()));
    }
    let tree = enumerate_tree(spec, xi, n, PruneOpts::off())?;
    let h_ref = bowen_root_on_tree(&tree, tol::DEFAULT_K_AVG, tol::DEFAULT_TOL_T)?.h;
    let rows: Vec<SpectrumRow> = q_grid
        .par_iter()
        .map(|&q| spectrum_row_on_tree(&tree, t, q, tol::DEFAULT_K_AVG, tol::DEFAULT_TOL_T))
        .collect::<Result<Vec<_>>>()?;
    let max_chi = rows.iter().map(|r| r.chi).fold(f64::NEG_INFINITY, f64::max);
    let min_chi = rows.iter().map(|r| r.chi).fold(f64::INFINITY, f64::min);
    Ok(SpectrumTable {
        t,
        rows,
        h_ref,
        depth: n,
        degenerate: max_chi - min_chi < DEGENERACY_CHI_SPREAD,
    })
}

/// Hausdorff dimension of the projected equilibrium measure,
/// `t + P(t)/chi(t)`.
pub fn hd_of_measure(spec: &SemigroupSpec, xi: Cx, t: f64, n: usize) -> Result<f64> {
    let tree = enumerate_tree(spec, xi, n, PruneOpts::off())?;
    let p_t = pressure_on_tree(&tree, t, tol::DEFAULT_K_AVG).value;
    let chi = chi_at(&tree, t, tol::DEFAULT_K_AVG);
    Ok(t + p_t / chi)
}

/// CSV rendering with '#' metadata lines followed by
/// `q,T,chi,alpha,dim` rows at 17 significant digits.
pub fn spectrum_csv(table: &SpectrumTable, seed: Option<u64>) -> String {
    let mut out = String::new();
    out.push_str(&format!("# t = {}\n", numeric::fmt_g17(table.t)));
    out.push_str(&format!("# n = {}\n", table.depth));
    out.push_str(&format!("# h_ref = {}\n", numeric::fmt_g17(table.h_ref)));
    match seed {
        Some(s) => out.push_str(&format!("# seed = {s}\n")),
        None => out.push_str("# seed = none\n"),
    }
    out.push_str(&format!("# degenerate = {}\n", table.degenerate));
    out.push_str("q,T,chi,alpha,dim\n");
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            numeric::fmt_g17(r.q),
            numeric::fmt_g17(r.temperature),
            numeric::fmt_g17(r.chi),
            numeric::fmt_g17(r.alpha),
            numeric::fmt_g17(r.dim)
        ));
    }
    out
}
