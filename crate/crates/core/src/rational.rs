//! Rational maps on the Riemann sphere: evaluation, spherical
//! derivatives, critical points, and full preimage sets.

use num_complex::Complex64;

use crate::complex::Cx;
use crate::error::{Error, Result};
use crate::poly::{self, Poly};
use crate::roots;
use crate::tol;

/// Above this squared modulus the source chart is swapped to 1/z before
/// evaluating, keeping derivative formulas away from overflow.
const CHART_SWAP_NORM_SQR: f64 = 1e100;

/// The set of solutions of `f(z) = w`, counted with multiplicity.
#[derive(Clone, Debug)]
pub struct PreimageSet {
    /// Roots with multiplicity; multiplicities sum to the map degree.
    pub roots: Vec<(Cx, usize)>,
    /// Largest chordal distance |f(root) - w| over the returned roots.
    pub residual: f64,
}

/// A rational map `numerator/denominator` in reduced form.
///
/// # Invariants
///
/// - coefficients ascending, leading coefficients nonzero after trimming
/// - numerator and denominator share no root (checked at construction)
/// - `degree = max(deg num, deg den) >= 1`
#[derive(Clone, Debug)]
pub struct RationalMap {
    num: Poly,
    den: Poly,
    degree: usize,
}

impl RationalMap {
    pub fn new(num: Vec<Complex64>, den: Vec<Complex64>) -> Result<Self> {
        let num = poly::trim(num, tol::EPS_LEAD);
        let den = poly::trim(den, tol::EPS_LEAD);
        if poly::is_zero(&num) {
            return Err(Error::InvalidMap("numerator is zero".into()));
        }
        if poly::is_zero(&den) {
            return Err(Error::InvalidMap("denominator is zero".into()));
        }
        let degree = poly::degree(&num).max(poly::degree(&den));
        if degree == 0 {
            return Err(Error::InvalidMap("map is constant (degree 0)".into()));
        }
        let map = RationalMap { num, den, degree };
        map.check_coprime()?;
        Ok(map)
    }

    /// A polynomial map (denominator 1).
    pub fn polynomial(num: Vec<Complex64>) -> Result<Self> {
        Self::new(num, vec![Complex64::new(1.0, 0.0)])
    }

    /// Builds a map from real coefficient lists; convenience for tests
    /// and spec files.
    pub fn from_real(num: &[f64], den: &[f64]) -> Result<Self> {
        Self::new(
            num.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            den.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Common roots of numerator and denominator would make the map
    /// ill-defined; detected by evaluating one polynomial at the roots
    /// of the other (cheaper than a resultant at the degrees in scope).
    fn check_coprime(&self) -> Result<()> {
        if poly::degree(&self.den) == 0 || poly::degree(&self.num) == 0 {
            return Ok(());
        }
        let (small, large) = if poly::degree(&self.num) <= poly::degree(&self.den) {
            (&self.num, &self.den)
        } else {
            (&self.den, &self.num)
        };
        let small_roots = roots::find_roots(small)
            .map_err(|e| Error::InvalidMap(format!("cannot factor map: {e}")))?;
        let scale = poly::coeff_scale(large);
        for (r, _) in small_roots {
            let v = poly::eval(large, r).norm();
            let local = scale * (1.0 + r.norm()).powi(poly::degree(large) as i32);
            if v <= tol::EPS_RES * local {
                return Err(Error::InvalidMap(format!(
                    "numerator and denominator share a root near {r}"
                )));
            }
        }
        Ok(())
    }

    /// Internal constructor for compositions, which are coprime by
    /// construction; only trims and recomputes the degree.
    pub(crate) fn compose_unchecked(num: Poly, den: Poly) -> Result<Self> {
        let num = poly::trim(num, tol::EPS_LEAD);
        let den = poly::trim(den, tol::EPS_LEAD);
        let degree = poly::degree(&num).max(poly::degree(&den));
        if degree == 0 || poly::is_zero(&num) {
            return Err(Error::InvalidMap("composition degenerated".into()));
        }
        Ok(RationalMap { num, den, degree })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn numerator(&self) -> &[Complex64] {
        &self.num
    }

    pub fn denominator(&self) -> &[Complex64] {
        &self.den
    }

    /// True when the denominator is constant.
    pub fn is_polynomial(&self) -> bool {
        poly::degree(&self.den) == 0
    }

    /// The coefficients of the chart-swapped map `g(w) = f(1/w)` as a
    /// (num, den) pair, both padded to the full degree.
    fn swapped_source(&self) -> (Poly, Poly) {
        let d = self.degree;
        (poly::reverse_pad(&self.num, d), poly::reverse_pad(&self.den, d))
    }

    /// Evaluates the map on the sphere. Total: poles map to infinity and
    /// the value at infinity is decided by the degree comparison.
    pub fn evaluate(&self, z: Cx) -> Cx {
        match z.finite() {
            None => {
                let dn = poly::degree(&self.num);
                let dd = poly::degree(&self.den);
                if dn > dd {
                    Cx::infinity()
                } else if dn < dd {
                    Cx::new(0.0, 0.0)
                } else {
                    Cx::from_complex(self.num[dn] / self.den[dd])
                }
            }
            Some(z) if z.norm_sqr() > CHART_SWAP_NORM_SQR => {
                let (n, d) = self.swapped_source();
                eval_fraction(&n, &d, z.inv())
            }
            Some(z) => eval_fraction(&self.num, &self.den, z),
        }
    }

    /// Norm of the derivative with respect to the spherical metric,
    /// |f'(z)| (1+|z|^2) / (1+|f(z)|^2), extended continuously to poles
    /// and to the point at infinity by chart swaps.
    pub fn spherical_derivative(&self, z: Cx) -> f64 {
        match z.finite() {
            None => {
                let (n, d) = self.swapped_source();
                sph_deriv_fraction(&n, &d, Complex64::new(0.0, 0.0))
            }
            Some(z) if z.norm_sqr() > CHART_SWAP_NORM_SQR => {
                let (n, d) = self.swapped_source();
                // z -> 1/z is a chordal isometry, so the metric derivative
                // of f at z equals that of f(1/w) at w = 1/z.
                sph_deriv_fraction(&n, &d, z.inv())
            }
            Some(z) => sph_deriv_fraction(&self.num, &self.den, z),
        }
    }

    /// All solutions of `f(z) = w` with multiplicity. Degree drops of
    /// the pointwise equation correspond to preimages at infinity.
    pub fn preimages(&self, w: Cx) -> Result<PreimageSet> {
        let equation: Poly = match w.finite() {
            // f(z) = inf  <=>  den(z) = 0 (plus infinity itself if deg num > deg den)
            None => self.den.clone(),
            Some(w) => poly::sub(&self.num, &poly::scale(&self.den, w)),
        };
        let equation = poly::trim(equation, tol::EPS_LEAD);
        let mut found: Vec<(Cx, usize)> = Vec::new();
        let mut finite_count = 0;
        if !poly::is_zero(&equation) && poly::degree(&equation) > 0 {
            for (r, m) in roots::find_roots(&equation)? {
                finite_count += m;
                found.push((Cx::from_complex(r), m));
            }
        } else if poly::is_zero(&equation) {
            return Err(Error::DegenerateEquation);
        }
        if finite_count < self.degree {
            found.push((Cx::infinity(), self.degree - finite_count));
        }
        let residual = found
            .iter()
            .map(|(r, _)| self.evaluate(*r).chordal(&w))
            .fold(0.0, f64::max);
        if residual > 10.0 * tol::EPS_ROOT {
            return Err(Error::NonConvergence { residual, iterations: tol::MAX_ROOT_ITER });
        }
        Ok(PreimageSet { roots: found, residual })
    }

    /// Critical points with multiplicity; counted with multiplicity they
    /// number `2 degree - 2`. Zeros of the Wronskian num' den - num den'
    /// plus the appropriate multiplicity at infinity.
    pub fn critical_points(&self) -> Result<Vec<(Cx, usize)>> {
        if self.degree < 2 {
            return Err(Error::Precondition(
                "critical points need degree >= 2".into(),
            ));
        }
        let wron = poly::sub(
            &poly::mul(&poly::derivative(&self.num), &self.den),
            &poly::mul(&self.num, &poly::derivative(&self.den)),
        );
        let wron = poly::trim(wron, tol::EPS_LEAD);
        let expected = 2 * self.degree - 2;
        let mut out: Vec<(Cx, usize)> = Vec::new();
        let mut count = 0;
        if poly::degree(&wron) > 0 {
            for (r, m) in roots::find_roots(&wron)? {
                count += m;
                out.push((Cx::from_complex(r), m));
            }
        }
        if count < expected {
            out.push((Cx::infinity(), expected - count));
        }
        Ok(out)
    }
}

fn eval_fraction(num: &[Complex64], den: &[Complex64], z: Complex64) -> Cx {
    let n = poly::eval(num, z);
    let d = poly::eval(den, z);
    if d.norm() == 0.0 {
        return Cx::infinity();
    }
    Cx::from_complex(n / d)
}

/// Spherical derivative through the pole-robust Wronskian form
/// |N'D - ND'| (1+|z|^2) / (|N|^2 + |D|^2), which is symmetric under
/// swapping the target chart and therefore finite at poles.
fn sph_deriv_fraction(num: &[Complex64], den: &[Complex64], z: Complex64) -> f64 {
    let n = poly::eval(num, z);
    let d = poly::eval(den, z);
    let dn = poly::eval(&poly::derivative(num), z);
    let dd = poly::eval(&poly::derivative(den), z);
    let wron = (dn * d - n * dd).norm();
    wron * (1.0 + z.norm_sqr()) / (n.norm_sqr() + d.norm_sqr())
}
