//! Bounded-depth enumeration of skew-product preimage trees.
//!
//! Level k+1 is built by taking preimages of every level-k point under
//! every generator; the word of a child is its parent's word with the
//! generator symbol prepended, and the accumulated log spherical
//! derivative picks up one factor per step by the chain rule.

use rayon::prelude::*;

use crate::complex::Cx;
use crate::error::{Error, Result};
use crate::numeric;
use crate::semigroup::{SemigroupSpec, Word};
use crate::tol;

/// Nodes per level above which expansion fans out across threads.
const PAR_THRESHOLD: usize = 512;

/// Branch pruning for deep trees: a branch is dropped when its weight
/// `exp(-t_ref * log_sderiv)` falls below `threshold` times the largest
/// weight of its level. Off by default.
#[derive(Clone, Copy, Debug)]
pub struct PruneOpts {
    pub enabled: bool,
    pub t_ref: f64,
    pub threshold: f64,
}

impl PruneOpts {
    pub fn off() -> Self {
        PruneOpts { enabled: false, t_ref: 0.0, threshold: tol::PRUNE_THRESHOLD }
    }

    pub fn at(t_ref: f64) -> Self {
        PruneOpts { enabled: true, t_ref, threshold: tol::PRUNE_THRESHOLD }
    }
}

impl Default for PruneOpts {
    fn default() -> Self {
        PruneOpts::off()
    }
}

/// One node of the preimage tree.
#[derive(Clone, Debug)]
pub struct TreeNode {
    pub word: Word,
    pub point: Cx,
    /// Sum of log spherical derivatives along the branch back to the base.
    pub log_sderiv: f64,
    /// Index of the parent in the previous level (0 for level-1 nodes).
    pub parent: u32,
}

/// The finite truncation of the backward orbit of a base point.
#[derive(Clone, Debug)]
pub struct PreimageTree {
    base_point: Cx,
    base_check: f64,
    depth: usize,
    /// levels[k] holds the level-k nodes, k = 1..=depth.
    levels: Vec<Vec<TreeNode>>,
    pruned_mass: f64,
}

impl PreimageTree {
    pub fn base_point(&self) -> Cx {
        self.base_point
    }

    /// Minimum chordal distance of the base point to the postcritical samples.
    pub fn base_check(&self) -> f64 {
        self.base_check
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of branches dropped by pruning.
    pub fn pruned_mass(&self) -> f64 {
        self.pruned_mass
    }

    /// Nodes of level `k`, 1-based.
    pub fn level(&self, k: usize) -> &[TreeNode] {
        &self.levels[k - 1]
    }

    pub fn level_count(&self, k: usize) -> usize {
        self.levels[k - 1].len()
    }

    /// Largest single-step log spherical derivative over the whole tree;
    /// a discrete surrogate for log of the sup-norm of the derivative.
    pub fn max_step_log_sderiv(&self) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for k in 1..=self.depth {
            for node in self.level(k) {
                let parent_log = if k == 1 {
                    0.0
                } else {
                    self.levels[k - 2][node.parent as usize].log_sderiv
                };
                best = best.max(node.log_sderiv - parent_log);
            }
        }
        best
    }
}

/// Enumerates `n` levels of the preimage tree of `xi`.
///
/// Fails with `BasePointTooClose` when `xi` does not clear the
/// postcritical margin, and with `CriticalBranch` when any tree point
/// lands within the critical margin (there the accumulated derivative
/// would diverge).
pub fn enumerate_tree(
    spec: &SemigroupSpec,
    xi: Cx,
    n: usize,
    prune: PruneOpts,
) -> Result<PreimageTree> {
    if xi.is_infinite() {
        return Err(Error::Precondition("base point must be finite".into()));
    }
    if n == 0 {
        return Err(Error::Precondition("tree depth must be at least 1".into()));
    }
    let base_check = spec.pcv_margin(&xi);
    if base_check <= tol::DELTA_PCV {
        return Err(Error::BasePointTooClose { check: base_check, margin: tol::DELTA_PCV });
    }

    let mut levels: Vec<Vec<TreeNode>> = Vec::with_capacity(n);
    let mut pruned_mass = 0.0f64;
    let root_level = vec![TreeNode {
        word: Word::empty(),
        point: xi,
        log_sderiv: 0.0,
        parent: 0,
    }];

    for level_idx in 0..n {
        let current: &[TreeNode] =
            if level_idx == 0 { &root_level } else { &levels[level_idx - 1] };
        let expand = |(idx, node): (usize, &TreeNode)| -> Result<Vec<TreeNode>> {
            let mut children = Vec::new();
            for sym in 1..=spec.generator_count() as u8 {
                let gen = spec.generator(sym);
                let pre = gen.preimages(node.point)?;
                for (p, mult) in pre.roots {
                    let dist = spec.crit_margin(&p);
                    if mult > 1 || dist <= tol::DELTA_CRIT {
                        return Err(Error::CriticalBranch { dist });
                    }
                    let step = gen.spherical_derivative(p).ln();
                    children.push(TreeNode {
                        word: node.word.prepend(sym),
                        point: p,
                        log_sderiv: node.log_sderiv + step,
                        parent: idx as u32,
                    });
                }
            }
            Ok(children)
        };

        let expanded: Vec<Vec<TreeNode>> = if current.len() >= PAR_THRESHOLD {
            current
                .par_iter()
                .enumerate()
                .map(expand)
                .collect::<Result<Vec<_>>>()?
        } else {
            current
                .iter()
                .enumerate()
                .map(expand)
                .collect::<Result<Vec<_>>>()?
        };
        let mut next: Vec<TreeNode> = expanded.into_iter().flatten().collect();

        if prune.enabled {
            let max_w = next
                .iter()
                .map(|node| -prune.t_ref * node.log_sderiv)
                .fold(f64::NEG_INFINITY, f64::max);
            let cutoff = max_w + prune.threshold.ln();
            let before = next.len();
            next.retain(|node| -prune.t_ref * node.log_sderiv >= cutoff);
            pruned_mass += (before - next.len()) as f64;
        }

        if next.is_empty() {
            return Err(Error::Precondition("tree died out under pruning".into()));
        }
        levels.push(next);
    }

    Ok(PreimageTree { base_point: xi, base_check, depth: n, levels, pruned_mass })
}

/// Log of the derivative-weighted level sum
/// `log sum_{nodes at level} exp(-t * log_sderiv)`, reduced in a fixed
/// deterministic order.
pub fn tree_weight_sum(tree: &PreimageTree, t: f64, level: usize) -> f64 {
    assert!(level >= 1 && level <= tree.depth(), "level out of range");
    assert!(t >= 0.0, "weight exponent must be nonnegative");
    let exponents: Vec<f64> = tree
        .level(level)
        .iter()
        .map(|node| -t * node.log_sderiv)
        .collect();
    numeric::log_sum_exp(&exponents)
}
