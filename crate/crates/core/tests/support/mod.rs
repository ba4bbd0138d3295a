//! Shared test support: an independent companion-matrix eigenvalue
//! oracle for polynomial roots, multiset comparison, and corpus spec
//! builders.
//!
//! The oracle is deliberately self-contained (its own trimming, its own
//! linear algebra) so it shares no code path with the root finder it
//! checks: roots are read off as eigenvalues of the companion matrix via
//! a shifted QR iteration on the Hessenberg form.

#![allow(dead_code)] // each integration-test binary uses a subset
#![allow(clippy::needless_range_loop)] // index form is clearest for matrix sweeps

use num_complex::Complex64;

use semithermo::{Cx, RationalMap, SemigroupSpec};

const ORACLE_EPS: f64 = 1e-13;

/// All complex roots of the polynomial (ascending coefficients) as a
/// flat list, multiple roots repeated. Panics on constant input.
pub fn companion_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    // independent trim
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut p: Vec<Complex64> = coeffs.to_vec();
    while p.len() > 1 && p.last().unwrap().norm() <= 1e-12 * scale {
        p.pop();
    }
    let d = p.len() - 1;
    assert!(d >= 1, "oracle needs degree >= 1");
    let lead = p[d];
    let monic: Vec<Complex64> = p[..d].iter().map(|&c| c / lead).collect();

    // companion matrix: ones on the subdiagonal, -monic in the last column
    let mut h = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    for i in 1..d {
        h[i][i - 1] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        h[i][d - 1] = -monic[i];
    }
    hessenberg_eigenvalues(h)
}

/// Eigenvalues of a complex upper Hessenberg matrix by the shifted QR
/// iteration with Givens rotations.
fn hessenberg_eigenvalues(mut h: Vec<Vec<Complex64>>) -> Vec<Complex64> {
    let n = h.len();
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut stuck = 0u32;
    loop {
        // deflate converged trailing entries
        while hi > 0 {
            let off = h[hi][hi - 1].norm();
            let local = h[hi - 1][hi - 1].norm() + h[hi][hi].norm();
            if off <= ORACLE_EPS * (local + 1e-300) {
                h[hi][hi - 1] = Complex64::new(0.0, 0.0);
                eigs.push(h[hi][hi]);
                hi -= 1;
                stuck = 0;
            } else {
                break;
            }
        }
        if hi == 0 {
            eigs.push(h[0][0]);
            break;
        }
        // active block [lo..=hi]
        let mut lo = hi;
        while lo > 0 {
            let off = h[lo][lo - 1].norm();
            let local = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            if off <= ORACLE_EPS * (local + 1e-300) {
                h[lo][lo - 1] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }

        // Wilkinson shift: trailing 2x2 eigenvalue nearest h[hi][hi],
        // with an exceptional random-ish shift when progress stalls
        stuck += 1;
        let shift = if stuck.is_multiple_of(24) {
            h[hi][hi] + h[hi][hi - 1] * Complex64::new(1.5, 0.25)
        } else {
            let a = h[hi - 1][hi - 1];
            let b = h[hi - 1][hi];
            let c = h[hi][hi - 1];
            let dd = h[hi][hi];
            let tr = a + dd;
            let disc = ((a - dd) * (a - dd) + 4.0 * b * c).sqrt();
            let l1 = (tr + disc) / 2.0;
            let l2 = (tr - disc) / 2.0;
            if (l1 - dd).norm() < (l2 - dd).norm() {
                l1
            } else {
                l2
            }
        };
        assert!(stuck < 2000, "oracle QR failed to converge");

        // one implicit-shift QR sweep on the block via Givens rotations
        for i in lo..=hi {
            h[i][i] -= shift;
        }
        let mut rots: Vec<(Complex64, Complex64)> = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let a = h[i][i];
            let b = h[i + 1][i];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (u, v) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            } else {
                (a / r, b / r)
            };
            // rows i, i+1: [[u*, v*], [-v, u]]
            for col in lo..h.len() {
                let x = h[i][col];
                let y = h[i + 1][col];
                h[i][col] = u.conj() * x + v.conj() * y;
                h[i + 1][col] = -v * x + u * y;
            }
            rots.push((u, v));
        }
        for (k, (u, v)) in rots.iter().enumerate() {
            let i = lo + k;
            // columns i, i+1 (right-multiply by the inverse rotation)
            for row in 0..=(i + 1).min(hi) {
                let x = h[row][i];
                let y = h[row][i + 1];
                h[row][i] = x * u + y * v;
                h[row][i + 1] = -x * v.conj() + y * u.conj();
            }
        }
        for i in lo..=hi {
            h[i][i] += shift;
        }
    }
    eigs
}

/// Expands `(root, multiplicity)` pairs into a flat list.
pub fn expand_multiplicities(roots: &[(Complex64, usize)]) -> Vec<Complex64> {
    let mut out = Vec::new();
    for (r, m) in roots {
        for _ in 0..*m {
            out.push(*r);
        }
    }
    out
}

/// Multiset equality up to pairing within `tol`: greedily matches each
/// left value to its nearest unused right value.
pub fn multisets_match(left: &[Complex64], right: &[Complex64], tol: f64) -> bool {
    if left.len() != right.len() {
        return false;
    }
    let mut used = vec![false; right.len()];
    for l in left {
        let mut best: Option<(usize, f64)> = None;
        for (j, r) in right.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (l - r).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) if d <= tol => used[j] = true,
            _ => return false,
        }
    }
    true
}

// corpus spec builders

pub fn z2_spec() -> SemigroupSpec {
    SemigroupSpec::new(vec![RationalMap::from_real(&[0.0, 0.0, 1.0], &[1.0]).unwrap()]).unwrap()
}

pub fn cheb_spec() -> SemigroupSpec {
    SemigroupSpec::new(vec![RationalMap::from_real(&[-2.0, 0.0, 1.0], &[1.0]).unwrap()]).unwrap()
}

pub fn pair_spec() -> SemigroupSpec {
    SemigroupSpec::new(vec![
        RationalMap::from_real(&[2.0, 0.0, 1.0], &[1.0]).unwrap(),
        RationalMap::from_real(&[-2.0, 0.0, 1.0], &[1.0]).unwrap(),
    ])
    .unwrap()
}

/// (name, spec, two admissible base points, tree depth) for the corpus.
pub fn corpus() -> Vec<(&'static str, SemigroupSpec, Cx, Cx, usize)> {
    vec![
        ("z2", z2_spec(), Cx::new(1.0, 0.0), Cx::new(-1.0, 0.0), 10),
        ("cheb", cheb_spec(), Cx::new(1.5, 0.0), Cx::new(0.7, 0.0), 12),
        ("pair", pair_spec(), Cx::new(1.0, 0.0), Cx::new(1.3, 0.0), 8),
    ]
}
