//! Dense polynomials over the complex numbers, coefficients in ascending
//! degree order. Internal plumbing for the rational-map module.

use num_complex::Complex64;

pub(crate) type Poly = Vec<Complex64>;

/// Largest coefficient modulus, used as the scale for relative tolerances.
pub(crate) fn coeff_scale(p: &[Complex64]) -> f64 {
    p.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Drops trailing coefficients that are negligible relative to the
/// largest one. Always keeps at least the constant term.
pub(crate) fn trim(mut p: Poly, rel_tol: f64) -> Poly {
    let scale = coeff_scale(&p);
    let tol = rel_tol * scale;
    while p.len() > 1 && p.last().is_some_and(|c| c.norm() <= tol) {
        p.pop();
    }
    if p.is_empty() {
        p.push(Complex64::new(0.0, 0.0));
    }
    p
}

pub(crate) fn degree(p: &[Complex64]) -> usize {
    p.len().saturating_sub(1)
}

pub(crate) fn is_zero(p: &[Complex64]) -> bool {
    p.iter().all(|c| c.norm() == 0.0)
}

/// Horner evaluation.
pub(crate) fn eval(p: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in p.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

pub(crate) fn derivative(p: &[Complex64]) -> Poly {
    if p.len() <= 1 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

pub(crate) fn add(a: &[Complex64], b: &[Complex64]) -> Poly {
    let n = a.len().max(b.len());
    let zero = Complex64::new(0.0, 0.0);
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or(zero) + b.get(k).copied().unwrap_or(zero))
        .collect()
}

pub(crate) fn sub(a: &[Complex64], b: &[Complex64]) -> Poly {
    let n = a.len().max(b.len());
    let zero = Complex64::new(0.0, 0.0);
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or(zero) - b.get(k).copied().unwrap_or(zero))
        .collect()
}

pub(crate) fn mul(a: &[Complex64], b: &[Complex64]) -> Poly {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &ca) in a.iter().enumerate() {
        if ca.norm() == 0.0 {
            continue;
        }
        for (j, &cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    out
}

pub(crate) fn scale(a: &[Complex64], s: Complex64) -> Poly {
    a.iter().map(|&c| c * s).collect()
}

/// Coefficients of `w^deg * p(1/w)`: the source-chart swap used to work
/// at the point at infinity. `deg` must be at least the degree of `p`.
pub(crate) fn reverse_pad(p: &[Complex64], deg: usize) -> Poly {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![zero; deg + 1];
    for (k, &c) in p.iter().enumerate() {
        out[deg - k] = c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn horner_matches_expansion() {
        // p(z) = 1 + 2z + 3z^2 at z = 2 -> 17
        let p = vec![c(1.0), c(2.0), c(3.0)];
        assert_eq!(eval(&p, c(2.0)), c(17.0));
    }

    #[test]
    fn derivative_shifts_and_scales() {
        let p = vec![c(5.0), c(1.0), c(0.0), c(4.0)]; // 5 + z + 4z^3
        assert_eq!(derivative(&p), vec![c(1.0), c(0.0), c(12.0)]);
    }

    #[test]
    fn mul_degree_adds() {
        let a = vec![c(1.0), c(1.0)]; // 1 + z
        let b = vec![c(-1.0), c(1.0)]; // -1 + z
        assert_eq!(mul(&a, &b), vec![c(-1.0), c(0.0), c(1.0)]);
    }

    #[test]
    fn trim_respects_scale() {
        // tolerance is relative to the largest coefficient
        let p = vec![c(1e8), c(1.0), c(1e-9)];
        assert_eq!(trim(p, 1e-12).len(), 2); // 1e-9 <= 1e-12 * 1e8
        let q = vec![c(1.0), c(1.0), c(1e-9)];
        assert_eq!(trim(q, 1e-12).len(), 3); // 1e-9 > 1e-12 * 1
        let s = vec![c(1.0), c(0.0), c(0.0)];
        assert_eq!(trim(s, 1e-12).len(), 1);
        let z = vec![c(0.0), c(0.0)];
        assert_eq!(trim(z, 1e-12), vec![c(0.0)]);
    }

    #[test]
    fn reverse_pad_swaps_chart() {
        // p(z) = 2 + 3z, deg 2: w^2 p(1/w) = 2w^2 + 3w
        let p = vec![c(2.0), c(3.0)];
        assert_eq!(reverse_pad(&p, 2), vec![c(0.0), c(3.0), c(2.0)]);
    }
}
