//! Box-counting dimension from a log-log fit over dyadic scales.

use std::collections::HashSet;

use crate::complex::Cx;
use crate::error::{Error, Result};
use crate::geometry::grid::GridImage;
use crate::numeric::{self, LineFit};

/// Minimum growth between consecutive scales before the finest ones are
/// treated as saturated (pixel-resolution bias) and excluded.
const SATURATION_GROWTH: f64 = 0.05;

/// Box counts per dyadic scale and the fitted dimension.
#[derive(Clone, Debug)]
pub struct BoxCounts {
    /// (k, occupied box count) pairs actually used in the fit.
    pub counts: Vec<(u32, usize)>,
    pub slope: f64,
    pub r2: f64,
}

/// Box-counting dimension of a finite point cloud inside `bbox`: for
/// each k in `k_range` the square is split into 2^k x 2^k boxes and the
/// number of boxes hit is counted; the dimension is the slope of
/// log N against log (1/eps).
pub fn box_dimension_points(
    points: &[Cx],
    bbox: (f64, f64, f64, f64),
    k_range: std::ops::RangeInclusive<u32>,
) -> Result<BoxCounts> {
    let ks: Vec<u32> = k_range.collect();
    if ks.len() < 4 {
        return Err(Error::ScaleRangeSaturated(format!(
            "need at least 4 dyadic scales, got {}",
            ks.len()
        )));
    }
    let (x0, x1, y0, y1) = bbox;
    let span = (x1 - x0).max(y1 - y0);
    if span <= 0.0 {
        return Err(Error::Precondition("bbox is degenerate".into()));
    }
    let mut counts: Vec<(u32, usize)> = Vec::with_capacity(ks.len());
    for &k in &ks {
        let boxes = 1u64 << k;
        let mut hit: HashSet<u64> = HashSet::new();
        for p in points {
            if let Some(z) = p.finite() {
                if z.re < x0 || z.re > x1 || z.im < y0 || z.im > y1 {
                    continue;
                }
                let bx = (((z.re - x0) / span) * boxes as f64) as u64;
                let by = (((z.im - y0) / span) * boxes as f64) as u64;
                hit.insert(bx.min(boxes - 1) * boxes + by.min(boxes - 1));
            }
        }
        counts.push((k, hit.len()));
    }
    fit_counts(counts)
}

/// Box-counting dimension of the set pixels of an image.
pub fn box_dimension_image(
    img: &GridImage,
    k_range: std::ops::RangeInclusive<u32>,
) -> Result<BoxCounts> {
    let pts: Vec<Cx> = img.set_pixels().iter().map(|&(x, y)| img.center_of(x, y)).collect();
    box_dimension_points(&pts, img.spec.bbox, k_range)
}

fn fit_counts(mut counts: Vec<(u32, usize)>) -> Result<BoxCounts> {
    if counts.iter().any(|&(_, n)| n == 0) {
        return Err(Error::ScaleRangeSaturated("a scale saw no occupied boxes".into()));
    }
    // Drop the two finest scales while the count stops growing there.
    while counts.len() >= 2 {
        let last = counts[counts.len() - 1].1 as f64;
        let prev = counts[counts.len() - 2].1 as f64;
        if (last - prev) / prev < SATURATION_GROWTH {
            counts.pop();
            counts.pop();
        } else {
            break;
        }
    }
    if counts.len() < 4 {
        return Err(Error::ScaleRangeSaturated(
            "fewer than 4 unsaturated scales remain".into(),
        ));
    }
    for w in counts.windows(2) {
        if w[1].1 == w[0].1 {
            return Err(Error::ScaleRangeSaturated(format!(
                "box count stuck at {} between scales {} and {}",
                w[0].1, w[0].0, w[1].0
            )));
        }
    }
    let xs: Vec<f64> = counts.iter().map(|&(k, _)| k as f64 * 2f64.ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&(_, n)| (n as f64).ln()).collect();
    let LineFit { slope, r2, .. } = numeric::linear_fit(&xs, &ys);
    Ok(BoxCounts { counts, slope, r2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_segment() -> Vec<Cx> {
        (0..40_000).map(|k| Cx::new(-2.0 + 4.0 * k as f64 / 39_999.0, 0.0)).collect()
    }

    #[test]
    fn segment_has_dimension_one() {
        let bbox = (-2.0, 2.0, -2.0, 2.0);
        let fit = box_dimension_points(&dense_segment(), bbox, 2..=8).unwrap();
        assert!((fit.slope - 1.0).abs() < 0.1, "slope {}", fit.slope);
        assert!(fit.r2 > 0.99);
    }

    #[test]
    fn circle_has_dimension_one() {
        let pts: Vec<Cx> = (0..40_000)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 40_000.0;
                Cx::new(t.cos(), t.sin())
            })
            .collect();
        let fit = box_dimension_points(&pts, (-1.5, 1.5, -1.5, 1.5), 2..=8).unwrap();
        assert!((fit.slope - 1.0).abs() < 0.1, "slope {}", fit.slope);
    }

    #[test]
    fn filled_square_has_dimension_two() {
        let mut rng = crate::prng::SplitMix64::new(4);
        let pts: Vec<Cx> =
            (0..200_000).map(|_| Cx::new(rng.next_f64(), rng.next_f64())).collect();
        let fit = box_dimension_points(&pts, (0.0, 1.0, 0.0, 1.0), 2..=7).unwrap();
        assert!((fit.slope - 2.0).abs() < 0.1, "slope {}", fit.slope);
    }

    #[test]
    fn too_few_scales_error() {
        let bbox = (-2.0, 2.0, -2.0, 2.0);
        assert!(matches!(
            box_dimension_points(&dense_segment(), bbox, 2..=4),
            Err(Error::ScaleRangeSaturated(_))
        ));
    }

    #[test]
    fn saturated_cloud_errors() {
        // 4 isolated points saturate instantly at every scale
        let pts =
            vec![Cx::new(0.1, 0.1), Cx::new(0.9, 0.1), Cx::new(0.1, 0.9), Cx::new(0.9, 0.9)];
        assert!(matches!(
            box_dimension_points(&pts, (0.0, 1.0, 0.0, 1.0), 2..=8),
            Err(Error::ScaleRangeSaturated(_))
        ));
    }
}
