//! Global renders by the chaos game on inverse branches, fiber renders
//! by escape time along a prescribed symbol sequence.

use rayon::prelude::*;

use crate::complex::Cx;
use crate::error::{Error, Result};
use crate::geometry::grid::{GridImage, GridSpec, ImageKind};
use crate::prng::SplitMix64;
use crate::semigroup::SemigroupSpec;

/// Steps discarded before plotting starts.
const BURN_IN: usize = 100;

/// Global Julia set approximation: starting from a repelling fixed
/// point, repeatedly pick a uniformly random generator and a uniformly
/// random preimage branch, plotting after a burn-in. Backward
/// self-similarity makes the plotted points fill the Julia set of the
/// whole semigroup. Deterministic for a fixed seed.
pub fn render_global(
    spec: &SemigroupSpec,
    iterations: usize,
    seed: u64,
    grid: GridSpec,
) -> Result<GridImage> {
    let mut img = GridImage::blank(grid, ImageKind::Occupancy);
    let mut rng = SplitMix64::new(seed);
    let mut z = spec.repelling_fixed_point()?;
    for step in 0..(BURN_IN + iterations) {
        let sym = rng.next_below(spec.generator_count()) as u8 + 1;
        let gen = spec.generator(sym);
        let pre = gen.preimages(z)?;
        // choose uniformly among the d branches, counting multiplicity
        let mut pick = rng.next_below(gen.degree());
        let mut next = pre.roots[0].0;
        for (root, mult) in &pre.roots {
            if pick < *mult {
                next = *root;
                break;
            }
            pick -= mult;
        }
        z = next;
        if step >= BURN_IN {
            if let Some((px, py)) = img.pixel_of(&z) {
                img.set(px, py, 255);
            }
        }
    }
    Ok(img)
}

/// How the fiber symbol sequence is produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordRule {
    /// The same generator at every step.
    Constant(u8),
    /// A repeating pattern of symbols.
    Periodic(Vec<u8>),
    /// A fixed random sequence drawn once from the seed; every pixel
    /// sees the same sequence.
    SeededRandom(u64),
}

impl WordRule {
    fn sequence(&self, len: usize, generators: usize) -> Result<Vec<u8>> {
        let check = |s: u8| -> Result<u8> {
            if s == 0 || s as usize > generators {
                Err(Error::Precondition(format!("symbol {s} out of range")))
            } else {
                Ok(s)
            }
        };
        match self {
            WordRule::Constant(s) => {
                check(*s)?;
                Ok(vec![*s; len])
            }
            WordRule::Periodic(pat) => {
                if pat.is_empty() {
                    return Err(Error::Precondition("empty periodic pattern".into()));
                }
                for &s in pat {
                    check(s)?;
                }
                Ok((0..len).map(|k| pat[k % pat.len()]).collect())
            }
            WordRule::SeededRandom(seed) => {
                let mut rng = SplitMix64::new(*seed);
                Ok((0..len).map(|_| rng.next_below(generators) as u8 + 1).collect())
            }
        }
    }
}

/// Fiber Julia set approximation by escape time: each pixel is iterated
/// under `z -> f_{w_k}(z)` and the step at which it leaves the escape
/// radius is recorded; pixels that never leave (value = max_iter) cover
/// the non-escaping set, whose boundary is the fiber Julia set. Only
/// polynomial semigroups have the escape-radius characterization.
pub fn render_fiber(
    spec: &SemigroupSpec,
    rule: &WordRule,
    grid: GridSpec,
    max_iter: u8,
) -> Result<GridImage> {
    if let Some(i) = spec.generators().iter().position(|g| !g.is_polynomial()) {
        return Err(Error::NotPolynomial { index: i });
    }
    if max_iter == 0 {
        return Err(Error::Precondition("max_iter must be positive".into()));
    }
    let radius = spec.escape_radius().expect("polynomial semigroup has an escape radius");
    let word = rule.sequence(max_iter as usize, spec.generator_count())?;

    let mut img = GridImage::blank(grid, ImageKind::EscapeTime { max_iter });
    let width = grid.width;
    let centers: Vec<Cx> =
        (0..width * grid.height).map(|i| {
            let (px, py) = (i % width, i / width);
            img.center_of(px, py)
        }).collect();
    img.data
        .par_chunks_mut(width)
        .enumerate()
        .for_each(|(py, row)| {
            for (px, out) in row.iter_mut().enumerate() {
                let mut z = centers[py * width + px];
                let mut esc = max_iter;
                for (k, &sym) in word.iter().enumerate() {
                    if z.is_infinite() || z.norm() > radius {
                        esc = k as u8;
                        break;
                    }
                    z = spec.generator(sym).evaluate(z);
                }
                *out = esc;
            }
        });
    Ok(img)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::RationalMap;

    fn z2_spec() -> SemigroupSpec {
        SemigroupSpec::new(vec![RationalMap::from_real(&[0.0, 0.0, 1.0], &[1.0]).unwrap()])
            .unwrap()
    }

    fn cheb_spec() -> SemigroupSpec {
        SemigroupSpec::new(vec![RationalMap::from_real(&[-2.0, 0.0, 1.0], &[1.0]).unwrap()])
            .unwrap()
    }

    fn pair_spec() -> SemigroupSpec {
        SemigroupSpec::new(vec![
            RationalMap::from_real(&[2.0, 0.0, 1.0], &[1.0]).unwrap(),
            RationalMap::from_real(&[-2.0, 0.0, 1.0], &[1.0]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn global_render_of_circle() {
        let grid = GridSpec::new((-1.5, 1.5, -1.5, 1.5), 256, 256).unwrap();
        let img = render_global(&z2_spec(), 20_000, 11, grid).unwrap();
        let px_size = 3.0 / 256.0;
        let set = img.set_pixels();
        assert!(set.len() > 100);
        for (px, py) in set {
            let c = img.center_of(px, py);
            let dist = (c.norm() - 1.0).abs();
            assert!(dist <= 2.0 * px_size, "pixel off the unit circle by {dist}");
        }
    }

    #[test]
    fn global_render_of_segment() {
        let grid = GridSpec::new((-2.2, 2.2, -2.2, 2.2), 256, 256).unwrap();
        let img = render_global(&cheb_spec(), 20_000, 3, grid).unwrap();
        let px_size = 4.4 / 256.0;
        for (px, py) in img.set_pixels() {
            let c = img.center_of(px, py);
            assert!(c.im().abs() <= 2.0 * px_size);
            assert!(c.re().abs() <= 2.0 + 2.0 * px_size);
        }
    }

    #[test]
    fn global_render_is_seed_deterministic() {
        let grid = GridSpec::new((-2.2, 2.2, -2.2, 2.2), 128, 128).unwrap();
        let a = render_global(&pair_spec(), 5_000, 99, grid).unwrap();
        let b = render_global(&pair_spec(), 5_000, 99, grid).unwrap();
        assert_eq!(a.to_pgm(), b.to_pgm());
        let c = render_global(&pair_spec(), 5_000, 100, grid).unwrap();
        assert_ne!(a.to_pgm(), c.to_pgm());
    }

    #[test]
    fn fiber_render_of_disc_and_segment() {
        let grid = GridSpec::new((-2.2, 2.2, -2.2, 2.2), 128, 128).unwrap();
        // constant word 1 on <z^2>: non-escaping set is the closed unit disc
        let img = render_fiber(&z2_spec(), &WordRule::Constant(1), grid, 60).unwrap();
        let px = 4.4 / 128.0;
        for (x, y) in img.set_pixels() {
            assert!(img.center_of(x, y).norm() <= 1.0 + 2.0 * px);
        }
        // interior point is non-escaping
        let (cx, cy) = img.pixel_of(&Cx::new(0.0, 0.0)).unwrap();
        assert!(img.is_set(cx, cy));

        // Constant word 2 on the pair: J(z^2-2) = [-2, 2]. The segment
        // has measure zero, so the iteration count must stay matched to
        // the resolution: pixels at distance d escape in about
        // log(1/d)/log(2) steps, and a deeper run empties the frame.
        let img = render_fiber(&pair_spec(), &WordRule::Constant(2), grid, 6).unwrap();
        let set = img.set_pixels();
        assert!(!set.is_empty());
        for (x, y) in set {
            let c = img.center_of(x, y);
            assert!(c.im().abs() <= 3.0 * px, "im {}", c.im());
            assert!(c.re().abs() <= 2.0 + 3.0 * px);
        }
    }

    #[test]
    fn fiber_dust_for_escaping_critical_orbit() {
        // c = 2 is outside the Mandelbrot set (0 -> 2 -> 6 -> ...), so the
        // constant-1 fiber of the pair is totally disconnected dust: no
        // interior, few pixels, all inside |z| <= 2.
        let grid = GridSpec::new((-2.2, 2.2, -2.2, 2.2), 128, 128).unwrap();
        let img = render_fiber(&pair_spec(), &WordRule::Constant(1), grid, 6).unwrap();
        let set = img.set_pixels();
        assert!(!set.is_empty());
        for (x, y) in &set {
            assert!(img.center_of(*x, *y).norm() <= 2.0 + 0.15);
        }
        // dust: a small fraction of the frame
        assert!(set.len() < 128 * 128 / 10, "{} pixels set", set.len());
    }

    #[test]
    fn fiber_rules_produce_sequences() {
        let rule = WordRule::Periodic(vec![1, 2]);
        assert_eq!(rule.sequence(5, 2).unwrap(), vec![1, 2, 1, 2, 1]);
        let fixed = WordRule::SeededRandom(7).sequence(16, 2).unwrap();
        assert_eq!(fixed, WordRule::SeededRandom(7).sequence(16, 2).unwrap());
        assert!(WordRule::Constant(3).sequence(4, 2).is_err());
    }

    #[test]
    fn fiber_needs_polynomials() {
        let inv = RationalMap::from_real(&[1.0, 0.0, 1.0], &[0.0, 1.0]).unwrap(); // (1+z^2)/z
        let spec = SemigroupSpec::new(vec![inv]).unwrap();
        let grid = GridSpec::new((-2.0, 2.0, -2.0, 2.0), 64, 64).unwrap();
        assert!(matches!(
            render_fiber(&spec, &WordRule::Constant(1), grid, 30),
            Err(Error::NotPolynomial { .. })
        ));
    }
}
