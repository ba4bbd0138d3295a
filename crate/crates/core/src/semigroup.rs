//! Generator tuples, finite words, and word compositions.

use num_complex::Complex64;

use crate::complex::Cx;
use crate::error::{Error, Result};
use crate::poly;
use crate::rational::RationalMap;
use crate::tol;

/// Iteration depth used when sampling the postcritical set.
const PCV_DEPTH: usize = 6;

/// Chordal radius for deduplicating postcritical samples.
const PCV_DEDUP: f64 = 1e-9;

/// A finite word over the generator alphabet `1..=u`. The composition
/// convention is `f_w = f_{w_n} o ... o f_{w_1}`, so new symbols are
/// prepended when a preimage tree grows one level deeper.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from 1-based symbols.
    pub fn from_symbols(symbols: &[u8]) -> Self {
        Word(symbols.to_vec())
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The word with `symbol` prepended (left extension).
    pub fn prepend(&self, symbol: u8) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(symbol);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// Drops the first symbol; the word of the parent node in a tree.
    pub fn tail(&self) -> Word {
        Word(self.0[1..].to_vec())
    }

    pub fn first(&self) -> Option<u8> {
        self.0.first().copied()
    }

    /// True when `self` equals `suffix` extended on the left.
    pub fn extends(&self, suffix: &Word) -> bool {
        self.0.len() >= suffix.0.len() && self.0[self.0.len() - suffix.0.len()..] == suffix.0[..]
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// A validated set of semigroup generators plus cached sample data: all
/// finite critical points and a finite stand-in for the postcritical set.
#[derive(Clone, Debug)]
pub struct SemigroupSpec {
    generators: Vec<RationalMap>,
    escape_radius: Option<f64>,
    crit_samples: Vec<Cx>,
    pcv_samples: Vec<Cx>,
}

impl SemigroupSpec {
    pub fn new(generators: Vec<RationalMap>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidSpec("generator list is empty".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            // Degree-1 generators would need a loxodromy analysis that is
            // out of scope; they are rejected outright.
            if g.degree() < 2 {
                return Err(Error::InvalidSpec(format!(
                    "generator {} has degree {}; degree-1 generators are rejected",
                    i + 1,
                    g.degree()
                )));
            }
        }

        let escape_radius = if generators.iter().all(|g| g.is_polynomial()) {
            // |f(z)| >= 2|z| outside this radius, uniformly over generators.
            let sum_bound = generators
                .iter()
                .map(|g| {
                    let lead = g.numerator().last().unwrap().norm();
                    g.numerator().iter().map(|c| c.norm()).sum::<f64>() / lead
                })
                .fold(0.0, f64::max);
            Some((1.0 + sum_bound).max(4.0))
        } else {
            None
        };

        let mut crit_samples: Vec<Cx> = Vec::new();
        let mut crit_values: Vec<Cx> = Vec::new();
        for g in &generators {
            for (c, _) in g.critical_points()? {
                if !c.is_infinite() {
                    push_dedup(&mut crit_samples, c);
                }
                push_dedup(&mut crit_values, g.evaluate(c));
            }
        }

        // Forward orbit of the critical values under all words up to a
        // fixed depth; points that have left the escape region are
        // dropped (they converge to infinity, which stays in the set).
        let mut pcv_samples = crit_values.clone();
        let mut frontier = crit_values;
        let bound = escape_radius.unwrap_or(f64::INFINITY);
        for _ in 0..PCV_DEPTH {
            let mut next: Vec<Cx> = Vec::new();
            for p in &frontier {
                for g in &generators {
                    let img = g.evaluate(*p);
                    if !img.is_infinite() && img.norm() > bound {
                        continue;
                    }
                    if pcv_samples.iter().all(|q| q.chordal(&img) > PCV_DEDUP) {
                        push_dedup(&mut next, img);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            for p in &next {
                push_dedup(&mut pcv_samples, *p);
            }
            frontier = next;
        }

        Ok(SemigroupSpec { generators, escape_radius, crit_samples, pcv_samples })
    }

    pub fn generators(&self) -> &[RationalMap] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// The generator for a 1-based symbol.
    pub fn generator(&self, symbol: u8) -> &RationalMap {
        &self.generators[symbol as usize - 1]
    }

    /// Sum of generator degrees: the branching factor of preimage trees.
    pub fn degree_sum(&self) -> usize {
        self.generators.iter().map(|g| g.degree()).sum()
    }

    /// Radius beyond which every (polynomial) generator at least doubles
    /// the modulus; `None` when some generator is not a polynomial.
    pub fn escape_radius(&self) -> Option<f64> {
        self.escape_radius
    }

    /// All finite critical points of all generators.
    pub fn crit_samples(&self) -> &[Cx] {
        &self.crit_samples
    }

    /// Finite sample of the postcritical set: forward images of the
    /// critical values under all words up to a fixed depth.
    pub fn pcv_samples(&self) -> &[Cx] {
        &self.pcv_samples
    }

    /// Minimum chordal distance from `xi` to the postcritical samples.
    pub fn pcv_margin(&self, xi: &Cx) -> f64 {
        self.pcv_samples
            .iter()
            .map(|p| p.chordal(xi))
            .fold(f64::INFINITY, f64::min)
    }

    /// Minimum chordal distance from `z` to the sampled critical points.
    pub fn crit_margin(&self, z: &Cx) -> f64 {
        self.crit_samples
            .iter()
            .map(|p| p.chordal(z))
            .fold(f64::INFINITY, f64::min)
    }

    /// A repelling fixed point of some generator: a solution of
    /// `f_i(z) = z` with spherical derivative > 1. Candidates are scanned
    /// in generator order, roots sorted, so the choice is deterministic.
    pub fn repelling_fixed_point(&self) -> Result<Cx> {
        for g in &self.generators {
            // num(z) - z den(z) = 0
            let shifted = poly::sub(
                g.numerator(),
                &poly::mul(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], g.denominator()),
            );
            let eq = poly::trim(shifted, tol::EPS_LEAD);
            if poly::degree(&eq) == 0 {
                continue;
            }
            if let Ok(roots) = crate::roots::find_roots(&eq) {
                for (r, _) in roots {
                    let z = Cx::from_complex(r);
                    if g.spherical_derivative(z) > 1.0 + 1e-9 {
                        return Ok(z);
                    }
                }
            }
        }
        Err(Error::NoRepellingSeed)
    }

    /// Deterministic base-point candidates for pressure estimation:
    /// repelling fixed points of the generators and their one-step
    /// preimages, filtered by the postcritical margin. All of them lie
    /// in the Julia set by backward invariance.
    pub fn base_point_candidates(&self) -> Vec<Cx> {
        let mut candidates: Vec<Cx> = Vec::new();
        let mut fixed: Vec<Cx> = Vec::new();
        for g in &self.generators {
            let shifted = poly::sub(
                g.numerator(),
                &poly::mul(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], g.denominator()),
            );
            let eq = poly::trim(shifted, tol::EPS_LEAD);
            if poly::degree(&eq) == 0 {
                continue;
            }
            if let Ok(roots) = crate::roots::find_roots(&eq) {
                for (r, _) in roots {
                    let z = Cx::from_complex(r);
                    if g.spherical_derivative(z) > 1.0 + 1e-9 {
                        push_dedup(&mut fixed, z);
                    }
                }
            }
        }
        for z in &fixed {
            if self.pcv_margin(z) > 10.0 * tol::DELTA_PCV {
                push_dedup(&mut candidates, *z);
            }
        }
        for z in fixed.clone() {
            for g in &self.generators {
                if let Ok(pre) = g.preimages(z) {
                    for (p, _) in pre.roots {
                        if !p.is_infinite()
                            && self.pcv_margin(&p) > 10.0 * tol::DELTA_PCV
                            && self.crit_margin(&p) > 10.0 * tol::DELTA_CRIT
                        {
                            push_dedup(&mut candidates, p);
                        }
                    }
                }
            }
        }
        candidates
    }
}

fn push_dedup(set: &mut Vec<Cx>, p: Cx) {
    if set.iter().all(|q| q.chordal(&p) > PCV_DEDUP) {
        set.push(p);
    }
}

/// Explicit coefficient form of `f_w = f_{w_n} o ... o f_{w_1}`; the
/// degree is the product of the generator degrees. Words longer than
/// `max_depth` are refused because the coefficients blow up.
pub fn compose_word_limited(
    spec: &SemigroupSpec,
    word: &Word,
    max_depth: usize,
) -> Result<RationalMap> {
    if word.len() > max_depth {
        return Err(Error::DepthExceeded { requested: word.len(), limit: max_depth });
    }
    if word.is_empty() {
        return Err(Error::Precondition("cannot compose the empty word".into()));
    }
    let mut acc: Option<RationalMap> = None;
    for &sym in word.symbols() {
        if sym == 0 || sym as usize > spec.generator_count() {
            return Err(Error::Precondition(format!("symbol {sym} out of range")));
        }
        let g = spec.generator(sym);
        acc = Some(match acc {
            None => g.clone(),
            Some(inner) => compose(g, &inner)?,
        });
    }
    Ok(acc.unwrap())
}

/// Composition with the default depth limit.
pub fn compose_word(spec: &SemigroupSpec, word: &Word) -> Result<RationalMap> {
    compose_word_limited(spec, word, tol::MAX_COMPOSE_DEPTH)
}

/// `outer(inner(z))` in coefficient form.
fn compose(outer: &RationalMap, inner: &RationalMap) -> Result<RationalMap> {
    let dn = poly::degree(outer.numerator()).max(poly::degree(outer.denominator()));
    let gn = inner.numerator();
    let gd = inner.denominator();

    // powers of numerator and denominator of the inner map
    let one = vec![Complex64::new(1.0, 0.0)];
    let mut n_pows: Vec<Vec<Complex64>> = vec![one.clone()];
    let mut d_pows: Vec<Vec<Complex64>> = vec![one];
    for k in 1..=dn {
        n_pows.push(poly::mul(&n_pows[k - 1], gn));
        d_pows.push(poly::mul(&d_pows[k - 1], gd));
    }

    let lift = |coeffs: &[Complex64]| -> Vec<Complex64> {
        let mut acc = vec![Complex64::new(0.0, 0.0)];
        for (k, &c) in coeffs.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            let term = poly::scale(&poly::mul(&n_pows[k], &d_pows[dn - k]), c);
            acc = poly::add(&acc, &term);
        }
        acc
    };

    let num = lift(outer.numerator());
    let den = lift(outer.denominator());
    let composed = RationalMap::compose_unchecked(num, den)?;
    let expected = outer.degree() * inner.degree();
    if composed.degree() != expected {
        return Err(Error::InvalidMap(format!(
            "composition degree {} != expected {}",
            composed.degree(),
            expected
        )));
    }
    Ok(composed)
}
