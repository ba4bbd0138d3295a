//! Simultaneous polynomial root finding (Aberth–Ehrlich iteration).
//!
//! All roots are found at once: initial guesses sit on a circle just
//! outside the root bound, every guess is corrected with the
//! Newton/Aberth step, and the iteration stops when all corrections are
//! at rounding level. Clusters of converged approximations are merged
//! into roots with multiplicity.
//!
//! Double roots land within the cluster radius; roots of multiplicity
//! three and higher sit on an evaluation noise floor of roughly
//! machine-epsilon^(1/m) and may be reported as a tight group of simple
//! roots instead of one multiple root.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly;
use crate::tol;

/// Correction size (relative to the iterate) treated as converged.
const STEP_EPS: f64 = 1e-15;

/// Roots of the polynomial with coefficients in ascending degree order,
/// clustered into `(root, multiplicity)` pairs sorted by real part, then
/// imaginary part.
///
/// Errors with `DegenerateEquation` when the trimmed polynomial is
/// constant and with `NonConvergence` when the relative residual of some
/// root exceeds the acceptance tolerance after the iteration cap.
pub fn find_roots(coeffs: &[Complex64]) -> Result<Vec<(Complex64, usize)>> {
    let p = poly::trim(coeffs.to_vec(), tol::EPS_LEAD);
    let degree = poly::degree(&p);
    if degree == 0 {
        return Err(Error::DegenerateEquation);
    }
    if degree == 1 {
        // a + b z = 0
        return Ok(vec![(-p[0] / p[1], 1)]);
    }

    let dp = poly::derivative(&p);
    let lead = p[degree].norm();
    let radius = 1.0 + p[..degree].iter().map(|c| c.norm() / lead).fold(0.0, f64::max);

    // Guesses on a circle, offset so no guess starts on the real axis.
    let mut zs: Vec<Complex64> = (0..degree)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / degree as f64 + 0.5;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    let mut iterations = 0;
    for it in 0..tol::MAX_ROOT_ITER {
        iterations = it + 1;
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let zi = zs[i];
            let pv = poly::eval(&p, zi);
            if pv.norm() == 0.0 {
                continue;
            }
            let dv = poly::eval(&dp, zi);
            let newton = if dv.norm() == 0.0 {
                // Flat spot: nudge off it instead of dividing by zero.
                Complex64::new(STEP_EPS.sqrt(), STEP_EPS.sqrt())
            } else {
                pv / dv
            };
            let mut repulse = Complex64::new(0.0, 0.0);
            for (j, &zj) in zs.iter().enumerate() {
                if j != i {
                    let diff = zi - zj;
                    if diff.norm() > 0.0 {
                        repulse += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulse;
            let step = if denom.norm() == 0.0 { newton } else { newton / denom };
            zs[i] = zi - step;
            max_step = max_step.max(step.norm() / (1.0 + zs[i].norm()));
        }
        if max_step <= STEP_EPS {
            break;
        }
    }

    // Acceptance: |p(z)| relative to the coefficient scale inflated to
    // the root's magnitude. Non-finite iterates fail outright (f64::max
    // would silently skip a NaN residual).
    let mut worst = 0.0f64;
    let coeff_scale = poly::coeff_scale(&p);
    for &z in &zs {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonConvergence { residual: f64::INFINITY, iterations });
        }
        let resid = poly::eval(&p, z).norm();
        let scale = coeff_scale * z.norm().max(1.0).powi(degree as i32);
        let rel = resid / scale.max(f64::MIN_POSITIVE);
        if !rel.is_finite() {
            return Err(Error::NonConvergence { residual: f64::INFINITY, iterations });
        }
        worst = worst.max(rel);
    }
    if worst > tol::EPS_ROOT {
        return Err(Error::NonConvergence { residual: worst, iterations });
    }

    Ok(cluster(zs))
}

/// Single-linkage clustering of approximations within the multiplicity
/// radius; each cluster becomes one root (the centroid) with the cluster
/// size as multiplicity.
fn cluster(mut zs: Vec<Complex64>) -> Vec<(Complex64, usize)> {
    zs.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    let mut used = vec![false; zs.len()];
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for i in 0..zs.len() {
        if used[i] {
            continue;
        }
        let mut members = vec![zs[i]];
        used[i] = true;
        let mut frontier = vec![zs[i]];
        while let Some(z) = frontier.pop() {
            for j in 0..zs.len() {
                if !used[j] && (zs[j] - z).norm() <= tol::EPS_CLUSTER {
                    used[j] = true;
                    members.push(zs[j]);
                    frontier.push(zs[j]);
                }
            }
        }
        let centroid = members.iter().sum::<Complex64>() / members.len() as f64;
        out.push((centroid, members.len()));
    }
    out.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
    out
}
