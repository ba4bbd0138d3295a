//! Points on the Riemann sphere and the chordal metric.

use num_complex::Complex64;

/// Magnitude beyond which a finite value is treated as the point at
/// infinity; `MAG_CUTOFF^2` must stay well inside f64 range.
const MAG_CUTOFF: f64 = 1e150;

/// A point on the Riemann sphere.
///
/// Finite points carry coordinates; the point at infinity is an explicit
/// flag, never a large-magnitude sentinel. With the normalization used
/// here the chordal distance between any two points is at most 2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cx {
    re: f64,
    im: f64,
    infinite: bool,
}

impl Cx {
    /// A finite point. Components must be finite floats.
    pub fn new(re: f64, im: f64) -> Self {
        debug_assert!(re.is_finite() && im.is_finite());
        Cx { re, im, infinite: false }
    }

    /// The point at infinity.
    pub const fn infinity() -> Self {
        Cx { re: 0.0, im: 0.0, infinite: true }
    }

    /// Converts a raw complex value, sending overflowed or enormous
    /// values to the point at infinity.
    pub fn from_complex(z: Complex64) -> Self {
        if !z.re.is_finite() || !z.im.is_finite() || z.norm_sqr() > MAG_CUTOFF {
            Cx::infinity()
        } else {
            Cx::new(z.re, z.im)
        }
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn is_infinite(&self) -> bool {
        self.infinite
    }

    /// The finite coordinate, if this is not the point at infinity.
    pub fn finite(&self) -> Option<Complex64> {
        if self.infinite {
            None
        } else {
            Some(Complex64::new(self.re, self.im))
        }
    }

    /// Euclidean modulus; infinite for the point at infinity.
    pub fn norm(&self) -> f64 {
        if self.infinite {
            f64::INFINITY
        } else {
            Complex64::new(self.re, self.im).norm()
        }
    }

    /// Chordal distance on the sphere, normalized so that antipodal
    /// points are at distance 2.
    pub fn chordal(&self, other: &Cx) -> f64 {
        match (self.finite(), other.finite()) {
            (Some(a), Some(b)) => {
                let sa = (1.0 + a.norm_sqr()).sqrt();
                let sb = (1.0 + b.norm_sqr()).sqrt();
                2.0 * (a - b).norm() / (sa * sb)
            }
            (Some(a), None) | (None, Some(a)) => 2.0 / (1.0 + a.norm_sqr()).sqrt(),
            (None, None) => 0.0,
        }
    }
}

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Cx::from_complex(z)
    }
}

impl From<f64> for Cx {
    fn from(x: f64) -> Self {
        Cx::new(x, 0.0)
    }
}

impl std::fmt::Display for Cx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.infinite {
            write!(f, "inf")
        } else if self.im >= 0.0 {
            write!(f, "{}+{}i", self.re, self.im)
        } else {
            write!(f, "{}{}i", self.re, self.im)
        }
    }
}
