//! Pixel grids over a rectangle in the plane, written as binary PGM.

use crate::complex::Cx;
use crate::error::{Error, Result};

/// What the pixel bytes mean.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageKind {
    /// 255 = occupied, 0 = empty.
    Occupancy,
    /// Pixel value is the escape time, saturating at `max_iter`, which
    /// marks the non-escaping set.
    EscapeTime { max_iter: u8 },
}

/// Placement of a pixel grid in the plane.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    /// (re_min, re_max, im_min, im_max)
    pub bbox: (f64, f64, f64, f64),
    pub width: usize,
    pub height: usize,
}

impl GridSpec {
    pub fn new(bbox: (f64, f64, f64, f64), width: usize, height: usize) -> Result<Self> {
        if width < 16 || height < 16 {
            return Err(Error::Precondition("grid must be at least 16x16".into()));
        }
        if !(bbox.0 < bbox.1 && bbox.2 < bbox.3) {
            return Err(Error::Precondition("bbox is degenerate".into()));
        }
        Ok(GridSpec { bbox, width, height })
    }
}

/// A rendered image: occupancy bits or escape times over a bbox.
#[derive(Clone, Debug)]
pub struct GridImage {
    pub spec: GridSpec,
    pub kind: ImageKind,
    /// Row-major, row 0 at im_max (image convention: top row first).
    pub data: Vec<u8>,
}

impl GridImage {
    pub fn blank(spec: GridSpec, kind: ImageKind) -> Self {
        GridImage { spec, kind, data: vec![0; spec.width * spec.height] }
    }

    pub fn width(&self) -> usize {
        self.spec.width
    }

    pub fn height(&self) -> usize {
        self.spec.height
    }

    /// Pixel indices of a finite point, if it falls inside the bbox.
    pub fn pixel_of(&self, p: &Cx) -> Option<(usize, usize)> {
        let z = p.finite()?;
        let (x0, x1, y0, y1) = self.spec.bbox;
        if z.re < x0 || z.re >= x1 || z.im < y0 || z.im >= y1 {
            return None;
        }
        let px = ((z.re - x0) / (x1 - x0) * self.spec.width as f64) as usize;
        let py = ((y1 - z.im) / (y1 - y0) * self.spec.height as f64) as usize;
        Some((px.min(self.spec.width - 1), py.min(self.spec.height - 1)))
    }

    /// Center of a pixel as a point in the plane.
    pub fn center_of(&self, px: usize, py: usize) -> Cx {
        let (x0, x1, y0, y1) = self.spec.bbox;
        let re = x0 + (px as f64 + 0.5) / self.spec.width as f64 * (x1 - x0);
        let im = y1 - (py as f64 + 0.5) / self.spec.height as f64 * (y1 - y0);
        Cx::new(re, im)
    }

    pub fn get(&self, px: usize, py: usize) -> u8 {
        self.data[py * self.spec.width + px]
    }

    pub fn set(&mut self, px: usize, py: usize, v: u8) {
        self.data[py * self.spec.width + px] = v;
    }

    /// Whether a pixel belongs to the rendered set: occupied pixels for
    /// occupancy images, non-escaping pixels for escape-time images.
    pub fn is_set(&self, px: usize, py: usize) -> bool {
        match self.kind {
            ImageKind::Occupancy => self.get(px, py) != 0,
            ImageKind::EscapeTime { max_iter } => self.get(px, py) >= max_iter,
        }
    }

    /// Pixel coordinates of all set pixels.
    pub fn set_pixels(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for py in 0..self.spec.height {
            for px in 0..self.spec.width {
                if self.is_set(px, py) {
                    out.push((px, py));
                }
            }
        }
        out
    }

    /// True when some set pixel lies within Chebyshev distance `radius`.
    pub fn set_within(&self, px: usize, py: usize, radius: usize) -> bool {
        let x0 = px.saturating_sub(radius);
        let y0 = py.saturating_sub(radius);
        let x1 = (px + radius).min(self.spec.width - 1);
        let y1 = (py + radius).min(self.spec.height - 1);
        for y in y0..=y1 {
            for x in x0..=x1 {
                if self.is_set(x, y) {
                    return true;
                }
            }
        }
        false
    }

    /// Binary PGM (P5, maxval 255). Bytes are a pure function of the
    /// image content, so equal seeds give equal files.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.spec.width, self.spec.height).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }

    /// Set pixels as a `re,im` CSV point cloud (pixel centers).
    pub fn points_csv(&self) -> String {
        let mut out = String::from("re,im\n");
        for (px, py) in self.set_pixels() {
            let c = self.center_of(px, py);
            out.push_str(&format!(
                "{},{}\n",
                crate::numeric::fmt_g17(c.re()),
                crate::numeric::fmt_g17(c.im())
            ));
        }
        out
    }

    /// Parses the PGM format written by `to_pgm`.
    pub fn from_pgm(bytes: &[u8], bbox: (f64, f64, f64, f64), kind: ImageKind) -> Result<Self> {
        let header_err = || Error::Precondition("not a P5 PGM file".into());
        let text = String::from_utf8_lossy(&bytes[..bytes.len().min(64)]);
        let mut parts = text.split_ascii_whitespace();
        if parts.next() != Some("P5") {
            return Err(header_err());
        }
        let width: usize = parts.next().ok_or_else(header_err)?.parse().map_err(|_| header_err())?;
        let height: usize =
            parts.next().ok_or_else(header_err)?.parse().map_err(|_| header_err())?;
        let _maxval = parts.next().ok_or_else(header_err)?;
        // data begins after the third whitespace-terminated header field
        let mut fields = 0;
        let mut idx = 0;
        let mut in_field = false;
        for (i, &b) in bytes.iter().enumerate() {
            if b.is_ascii_whitespace() {
                if in_field {
                    fields += 1;
                    in_field = false;
                }
                if fields == 4 {
                    idx = i + 1;
                    break;
                }
            } else {
                in_field = true;
            }
        }
        let data = bytes[idx..].to_vec();
        if data.len() != width * height {
            return Err(Error::Precondition("PGM payload size mismatch".into()));
        }
        let spec = GridSpec::new(bbox, width, height)?;
        Ok(GridImage { spec, kind, data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pixel_round_trip() {
        let spec = GridSpec::new((-2.0, 2.0, -2.0, 2.0), 64, 64).unwrap();
        let img = GridImage::blank(spec, ImageKind::Occupancy);
        for &(px, py) in &[(0, 0), (63, 63), (10, 53)] {
            let c = img.center_of(px, py);
            assert_eq!(img.pixel_of(&c), Some((px, py)));
        }
        assert_eq!(img.pixel_of(&Cx::new(5.0, 0.0)), None);
        assert_eq!(img.pixel_of(&Cx::infinity()), None);
    }

    #[test]
    fn pgm_round_trip() {
        let spec = GridSpec::new((0.0, 1.0, 0.0, 1.0), 16, 16).unwrap();
        let mut img = GridImage::blank(spec, ImageKind::Occupancy);
        img.set(3, 4, 255);
        let bytes = img.to_pgm();
        assert!(bytes.starts_with(b"P5\n16 16\n255\n"));
        let back = GridImage::from_pgm(&bytes, spec.bbox, ImageKind::Occupancy).unwrap();
        assert_eq!(back.data, img.data);
    }

    #[test]
    fn tiny_grid_rejected() {
        assert!(GridSpec::new((0.0, 1.0, 0.0, 1.0), 8, 64).is_err());
        assert!(GridSpec::new((1.0, 0.0, 0.0, 1.0), 64, 64).is_err());
    }
}
