//! Exponential shrinking of pulled-back balls: components of
//! `f_w^{-1}(B(xi, r))` have diameters bounded by C e^{-alpha |w|}; the
//! rate alpha is estimated by pushing boundary samples of the ball
//! through every inverse branch and fitting log max-diameter against
//! depth.

use rayon::prelude::*;

use num_complex::Complex64;

use crate::complex::Cx;
use crate::error::{Error, Result};
use crate::numeric::{self, LineFit};
use crate::semigroup::SemigroupSpec;
use crate::tol;

/// Boundary samples carried per branch.
const COMPANIONS: usize = 8;

/// Nodes per level above which branch expansion fans out across threads.
const PAR_THRESHOLD: usize = 256;

/// Fitted exponential shrinking rate.
#[derive(Clone, Debug)]
pub struct ShrinkFit {
    /// Rate in diam <= c_hat * exp(-alpha_hat * depth).
    pub alpha_hat: f64,
    pub c_hat: f64,
    pub r2: f64,
    /// Max component diameter (chordal) per depth 1..=n_max.
    pub diameters: Vec<f64>,
}

struct Branch {
    center: Cx,
    companions: [Complex64; COMPANIONS],
}

/// Estimates the shrinking rate of inverse-branch components of
/// `B(xi, radius)` up to depth `n_max`.
pub fn shrink_rate(
    spec: &SemigroupSpec,
    xi: Cx,
    radius: f64,
    n_max: usize,
) -> Result<ShrinkFit> {
    if n_max < 3 {
        return Err(Error::ScaleRangeSaturated(format!(
            "need at least 3 depths for the rate fit, got {n_max}"
        )));
    }
    let center = xi
        .finite()
        .ok_or_else(|| Error::Precondition("ball center must be finite".into()))?;
    if radius <= 0.0 {
        return Err(Error::Precondition("ball radius must be positive".into()));
    }
    // The ball must stay clear of the postcritical set or the inverse
    // branches are not single-valued over it.
    let margin = spec.pcv_margin(&xi);
    if margin <= 4.0 * radius {
        return Err(Error::Precondition(format!(
            "ball margin {margin:.3e} to the postcritical samples is below 4 r"
        )));
    }

    let companions: [Complex64; COMPANIONS] = std::array::from_fn(|k| {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / COMPANIONS as f64;
        center + Complex64::from_polar(radius, theta)
    });
    let mut current = vec![Branch { center: xi, companions }];
    let mut diameters = Vec::with_capacity(n_max);

    for _depth in 1..=n_max {
        let expand = |branch: &Branch| -> Result<Vec<Branch>> {
            let mut out = Vec::new();
            for sym in 1..=spec.generator_count() as u8 {
                let gen = spec.generator(sym);
                let pre = gen.preimages(branch.center)?;
                for (root, mult) in pre.roots {
                    if mult > 1 || spec.crit_margin(&root) <= tol::DELTA_CRIT {
                        return Err(Error::CriticalBranch {
                            dist: spec.crit_margin(&root),
                        });
                    }
                    let root_c = match root.finite() {
                        Some(c) => c,
                        None => continue,
                    };
                    // Pull each boundary sample through the same branch:
                    // the preimage closest to the branch center.
                    let mut pulled = [Complex64::new(0.0, 0.0); COMPANIONS];
                    for (slot, comp) in branch.companions.iter().enumerate() {
                        let cpre = gen.preimages(Cx::from_complex(*comp))?;
                        let nearest = cpre
                            .roots
                            .iter()
                            .filter_map(|(p, _)| p.finite())
                            .min_by(|a, b| {
                                (a - root_c)
                                    .norm()
                                    .partial_cmp(&(b - root_c).norm())
                                    .unwrap()
                            })
                            .ok_or(Error::DegenerateEquation)?;
                        pulled[slot] = nearest;
                    }
                    out.push(Branch { center: root, companions: pulled });
                }
            }
            Ok(out)
        };

        let expanded: Vec<Vec<Branch>> = if current.len() >= PAR_THRESHOLD {
            current.par_iter().map(expand).collect::<Result<Vec<_>>>()?
        } else {
            current.iter().map(expand).collect::<Result<Vec<_>>>()?
        };
        current = expanded.into_iter().flatten().collect();

        let mut level_diam = 0.0f64;
        for b in &current {
            for i in 0..COMPANIONS {
                let a = Cx::from_complex(b.companions[i]);
                level_diam = level_diam.max(a.chordal(&b.center));
                for j in (i + 1)..COMPANIONS {
                    let c = Cx::from_complex(b.companions[j]);
                    level_diam = level_diam.max(a.chordal(&c));
                }
            }
        }
        diameters.push(level_diam);
    }

    let xs: Vec<f64> = (1..=n_max).map(|k| k as f64).collect();
    let ys: Vec<f64> = diameters.iter().map(|d| d.ln()).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(Error::ScaleRangeSaturated("a level diameter collapsed to zero".into()));
    }
    let LineFit { slope, intercept, r2 } = numeric::linear_fit(&xs, &ys);
    Ok(ShrinkFit { alpha_hat: -slope, c_hat: intercept.exp(), r2, diameters })
}
