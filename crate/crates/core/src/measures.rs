//! Atomic approximations of conformal measures, derivative-weighted
//! backward sampling, transfer-operator cross-validation, and central
//! limit diagnostics.
//!
//! The atom measure truncates the series
//! `sum_n e^{-s n} sum_{x in f^{-n}(xi)} |(f^n)'(x)|^{-t}` at a finite
//! depth and normalizes; it is summable exactly when s exceeds the
//! pressure. The n-fold derivative weight is used throughout so that
//! the normalizer matches the series.

use rayon::prelude::*;

use crate::complex::Cx;
use crate::error::{Error, Result};
use crate::numeric;
use crate::pressure::pressure_on_tree;
use crate::prng::SplitMix64;
use crate::semigroup::{SemigroupSpec, Word};
use crate::tol;
use crate::tree::{enumerate_tree, PreimageTree, PruneOpts};

/// One weighted preimage atom.
#[derive(Clone, Debug)]
pub struct Atom {
    pub word: Word,
    pub point: Cx,
    pub weight: f64,
}

/// A finite atomic approximation of the conformal measure at (t, s).
#[derive(Clone, Debug)]
pub struct AtomMeasure {
    pub atoms: Vec<Atom>,
    pub t: f64,
    pub s: f64,
    pub base_point: Cx,
    pub n_max: usize,
    /// The truncated series value standing in for the full normalizer.
    pub normalizer: f64,
    /// Geometric tail bound e^((P-s) n_max) / (1 - e^(P-s)) relative to
    /// the mass of the deepest level.
    pub tail_bound: f64,
    /// atom index -> index of its parent atom one level up (None for
    /// level-1 atoms). Used by the quasi-invariance identity check.
    parents: Vec<Option<u32>>,
    /// First atom index of each level, for level slicing.
    level_offsets: Vec<usize>,
}

impl AtomMeasure {
    pub fn total_mass(&self) -> f64 {
        numeric::pairwise_sum(&self.atoms.iter().map(|a| a.weight).collect::<Vec<_>>())
    }

    /// Atom index range of one level, 1-based.
    pub fn level_range(&self, level: usize) -> std::ops::Range<usize> {
        let lo = self.level_offsets[level - 1];
        let hi = if level == self.level_offsets.len() {
            self.atoms.len()
        } else {
            self.level_offsets[level]
        };
        lo..hi
    }

    pub fn levels(&self) -> usize {
        self.level_offsets.len()
    }

    /// Largest violation of the conformality reweighting identity: for
    /// an atom with word i.w at point y, `weight * e^s * sderiv_i(y)^t`
    /// must equal the weight of the parent atom (word w). This is an
    /// algebraic identity of the construction, exact up to roundoff.
    pub fn quasi_invariance_defect(&self, spec: &SemigroupSpec) -> f64 {
        let mut worst = 0.0f64;
        for (idx, atom) in self.atoms.iter().enumerate() {
            let parent = match self.parents[idx] {
                Some(p) => &self.atoms[p as usize],
                None => continue,
            };
            let sym = atom.word.first().expect("non-root atom has a first symbol");
            let sderiv = spec.generator(sym).spherical_derivative(atom.point);
            let pushed = atom.weight * self.s.exp() * sderiv.powf(self.t);
            worst = worst.max((pushed - parent.weight).abs());
        }
        worst
    }
}

/// Builds the atom measure over all tree nodes up to `n_max`.
///
/// Fails with `SeriesNotSummable` unless `s > P(t) + margin`, mirroring
/// the divergence of the full series at s = P(t).
pub fn conformal_atoms(
    spec: &SemigroupSpec,
    xi: Cx,
    t: f64,
    s: f64,
    n_max: usize,
) -> Result<AtomMeasure> {
    let tree = enumerate_tree(spec, xi, n_max, PruneOpts::off())?;
    conformal_atoms_on_tree(&tree, t, s)
}

/// Atom measure over an existing tree.
pub fn conformal_atoms_on_tree(tree: &PreimageTree, t: f64, s: f64) -> Result<AtomMeasure> {
    let n_max = tree.depth();
    let pressure = pressure_on_tree(tree, t, tol::DEFAULT_K_AVG).value;
    if s <= pressure + tol::SUMMABILITY_MARGIN {
        return Err(Error::SeriesNotSummable { s, pressure });
    }

    // log unnormalized weights, level by level
    let mut log_weights: Vec<f64> = Vec::new();
    let mut parents: Vec<Option<u32>> = Vec::new();
    let mut level_offsets: Vec<usize> = Vec::new();
    let mut prev_offset = 0usize;
    for level in 1..=n_max {
        level_offsets.push(log_weights.len());
        let offset_before = if level == 1 { 0 } else { prev_offset };
        for node in tree.level(level) {
            log_weights.push(-s * level as f64 - t * node.log_sderiv);
            parents.push(if level == 1 {
                None
            } else {
                Some((offset_before + node.parent as usize) as u32)
            });
        }
        prev_offset = level_offsets[level - 1];
    }
    let log_z = numeric::log_sum_exp(&log_weights);

    let mut atoms = Vec::with_capacity(log_weights.len());
    let mut idx = 0;
    for level in 1..=n_max {
        for node in tree.level(level) {
            atoms.push(Atom {
                word: node.word.clone(),
                point: node.point,
                weight: (log_weights[idx] - log_z).exp(),
            });
            idx += 1;
        }
    }

    let rate = pressure - s; // negative by the summability check
    let tail_bound = (rate * n_max as f64).exp() / (1.0 - rate.exp());

    Ok(AtomMeasure {
        atoms,
        t,
        s,
        base_point: tree.base_point(),
        n_max,
        normalizer: log_z.exp(),
        tail_bound,
        parents,
        level_offsets,
    })
}

/// CSV rendering: `word,re,im,weight`, word as dot-separated symbols.
pub fn atoms_csv(measure: &AtomMeasure) -> String {
    let mut out = String::from("word,re,im,weight\n");
    for a in &measure.atoms {
        out.push_str(&format!(
            "{},{},{},{}\n",
            a.word,
            numeric::fmt_g17(a.point.re()),
            numeric::fmt_g17(a.point.im()),
            numeric::fmt_g17(a.weight)
        ));
    }
    out
}

/// One backward orbit with its branch choices and log selection weights.
#[derive(Clone, Debug)]
pub struct OrbitSample {
    /// points[0] is the start; points[k+1] is a preimage of points[k].
    pub points: Vec<Cx>,
    /// Symbol chosen at each step; f_{words[k]}(points[k+1]) = points[k].
    pub words: Vec<u8>,
    /// Log of the normalized probability of each chosen branch.
    pub log_weights: Vec<f64>,
    pub seed: u64,
}

/// Samples one backward orbit: at each step every one-step inverse
/// branch of every generator is a candidate, weighted by the spherical
/// branch derivative to the power -t, normalized per step. Deterministic
/// per seed.
pub fn sample_backward_orbit(
    spec: &SemigroupSpec,
    start: Cx,
    t: f64,
    length: usize,
    seed: u64,
) -> Result<OrbitSample> {
    let margin = spec.crit_margin(&start);
    if margin <= tol::DELTA_CRIT {
        return Err(Error::CriticalBranch { dist: margin });
    }
    let mut rng = SplitMix64::new(seed);
    let mut points = Vec::with_capacity(length + 1);
    let mut words = Vec::with_capacity(length);
    let mut log_weights = Vec::with_capacity(length);
    points.push(start);
    let mut current = start;
    for _ in 0..length {
        let mut candidates: Vec<(u8, Cx, f64)> = Vec::new(); // (symbol, point, log raw weight)
        for sym in 1..=spec.generator_count() as u8 {
            let gen = spec.generator(sym);
            for (p, mult) in gen.preimages(current)?.roots {
                let dist = spec.crit_margin(&p);
                if mult > 1 || dist <= tol::DELTA_CRIT {
                    return Err(Error::CriticalBranch { dist });
                }
                candidates.push((sym, p, -t * gen.spherical_derivative(p).ln()));
            }
        }
        let log_total = numeric::log_sum_exp(
            &candidates.iter().map(|c| c.2).collect::<Vec<_>>(),
        );
        let u = rng.next_f64();
        let mut acc = 0.0;
        let mut chosen = candidates.len() - 1;
        for (k, cand) in candidates.iter().enumerate() {
            acc += (cand.2 - log_total).exp();
            if u < acc {
                chosen = k;
                break;
            }
        }
        let (sym, p, lw) = candidates[chosen];
        points.push(p);
        words.push(sym);
        log_weights.push(lw - log_total);
        current = p;
    }
    Ok(OrbitSample { points, words, log_weights, seed })
}

/// Transfer-operator growth estimate and its spread across grid points.
#[derive(Clone, Copy, Debug)]
pub struct TransferCheck {
    /// Mean per-step log growth of iterates of the constant function 1.
    pub value: f64,
    /// Max minus min of the per-point growth over the grid.
    pub spread: f64,
}

/// Applies the transfer operator pointwise `n_power` times to the
/// constant function 1 (each application sums branch-derivative weights
/// over one-step preimages) and reads the per-step log growth off the
/// last two iterates, the usual power-method eigenvalue readout. The
/// grid should come from a converged render, so this cross-validates
/// the pressure estimator at fresh base points.
pub fn transfer_operator_check(
    spec: &SemigroupSpec,
    xi_grid: &[Cx],
    t: f64,
    n_power: usize,
) -> Result<TransferCheck> {
    if xi_grid.len() < 32 {
        return Err(Error::Precondition(format!(
            "transfer check needs at least 32 grid points, got {}",
            xi_grid.len()
        )));
    }
    if n_power < 2 {
        return Err(Error::Precondition("n_power must be at least 2".into()));
    }
    let growths: Vec<f64> = xi_grid
        .par_iter()
        .map(|xi| -> Result<f64> {
            let tree = enumerate_tree(spec, *xi, n_power, PruneOpts::off())?;
            let last = crate::tree::tree_weight_sum(&tree, t, n_power);
            let prev = crate::tree::tree_weight_sum(&tree, t, n_power - 1);
            Ok(last - prev)
        })
        .collect::<Result<Vec<_>>>()?;
    let value = numeric::pairwise_sum(&growths) / growths.len() as f64;
    let spread = growths.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - growths.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(TransferCheck { value, spread })
}

/// Block-sum statistics of the log derivative along sampled backward
/// orbits. Purely diagnostic: thresholds live in the callers.
#[derive(Clone, Debug)]
pub struct CltReport {
    pub t: f64,
    pub n_block: usize,
    pub n_samples: usize,
    pub seed: u64,
    /// Mean of the per-step observable.
    pub mean_per_step: f64,
    /// var(S_n)/n, the CLT-normalized variance.
    pub normalized_variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    /// var(S_n)/var(S_{n/2}) - 1; near 1 under CLT scaling.
    pub stabilization_ratio: f64,
    /// Set when the block sums are numerically constant (the observable
    /// is cohomologous to a constant, so the CLT degenerates).
    pub degenerate: bool,
}

/// Draws `n_samples` backward orbits of length `n_block` from the
/// repelling seed point and summarizes the block sums of the log
/// spherical derivative.
pub fn birkhoff_diagnostics(
    spec: &SemigroupSpec,
    t: f64,
    n_block: usize,
    n_samples: usize,
    seed: u64,
) -> Result<CltReport> {
    if n_samples == 0 {
        return Err(Error::Precondition("n_samples must be positive".into()));
    }
    if n_block < 2 {
        return Err(Error::Precondition("n_block must be at least 2".into()));
    }
    let start = spec.repelling_fixed_point()?;
    let sums: Vec<(f64, f64)> = (0..n_samples)
        .into_par_iter()
        .map(|k| -> Result<(f64, f64)> {
            let orbit = sample_backward_orbit(
                spec,
                start,
                t,
                n_block,
                SplitMix64::derive(seed, k as u64).next_u64(),
            )?;
            let steps: Vec<f64> = orbit
                .words
                .iter()
                .zip(orbit.points.iter().skip(1))
                .map(|(&sym, p)| spec.generator(sym).spherical_derivative(*p).ln())
                .collect();
            let full = numeric::pairwise_sum(&steps);
            let half = numeric::pairwise_sum(&steps[..n_block / 2]);
            Ok((full, half))
        })
        .collect::<Result<Vec<_>>>()?;

    let full: Vec<f64> = sums.iter().map(|s| s.0).collect();
    let half: Vec<f64> = sums.iter().map(|s| s.1).collect();
    let m = numeric::moments(&full);
    let m_half = numeric::moments(&half);
    let degenerate = m.variance < 1e-12 * (1.0 + m.mean * m.mean);
    let stabilization_ratio = if m_half.variance > 0.0 {
        m.variance / m_half.variance - 1.0
    } else {
        0.0
    };
    Ok(CltReport {
        t,
        n_block,
        n_samples,
        seed,
        mean_per_step: m.mean / n_block as f64,
        normalized_variance: m.variance / n_block as f64,
        skewness: m.skewness,
        excess_kurtosis: m.excess_kurtosis,
        stabilization_ratio,
        degenerate,
    })
}

/// Flat key=value rendering of the diagnostics report.
pub fn clt_report_text(report: &CltReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("t={}\n", numeric::fmt_g17(report.t)));
    out.push_str(&format!("n_block={}\n", report.n_block));
    out.push_str(&format!("n_samples={}\n", report.n_samples));
    out.push_str(&format!("seed={}\n", report.seed));
    out.push_str(&format!("mean_per_step={}\n", numeric::fmt_g17(report.mean_per_step)));
    out.push_str(&format!(
        "normalized_variance={}\n",
        numeric::fmt_g17(report.normalized_variance)
    ));
    out.push_str(&format!("skewness={}\n", numeric::fmt_g17(report.skewness)));
    out.push_str(&format!(
        "excess_kurtosis={}\n",
        numeric::fmt_g17(report.excess_kurtosis)
    ));
    out.push_str(&format!(
        "stabilization_ratio={}\n",
        numeric::fmt_g17(report.stabilization_ratio)
    ));
    out.push_str(&format!("degenerate_clt={}\n", report.degenerate));
    out
}
