//! RO(C2) degrees and the chart coordinates derived from them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// An element `a + b*sigma` of RO(C2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Degree {
    pub a: i64,
    pub b: i64,
}

impl From<[i64; 2]> for Degree {
    fn from(v: [i64; 2]) -> Self {
        Degree { a: v[0], b: v[1] }
    }
}

impl From<Degree> for [i64; 2] {
    fn from(d: Degree) -> Self {
        [d.a, d.b]
    }
}

impl Degree {
    pub const ZERO: Degree = Degree { a: 0, b: 0 };
    pub const ONE: Degree = Degree { a: 1, b: 0 };
    pub const SIGMA: Degree = Degree { a: 0, b: 1 };
    pub const RHO: Degree = Degree { a: 1, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        Degree { a, b }
    }

    /// `x + y*rho` written in the basis {1, sigma}.
    pub const fn from_rho(x: i64, y: i64) -> Self {
        Degree { a: x + y, b: y }
    }

    pub fn underlying_dimension(self) -> i64 {
        self.a + self.b
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, o: Degree) -> Degree {
        Degree::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for Degree {
    type Output = Degree;
    fn sub(self, o: Degree) -> Degree {
        Degree::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree::new(-self.a, -self.b)
    }
}

impl Mul<Degree> for i64 {
    type Output = Degree;
    fn mul(self, d: Degree) -> Degree {
        Degree::new(self * d.a, self * d.b)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = |b: i64| if b == 1 { "σ".to_string() } else { format!("{b}σ") };
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, -1) => write!(f, "-σ"),
            (0, b) => write!(f, "{}", sig(b)),
            (a, b) if b < 0 => write!(f, "{a}-{}", sig(-b)),
            (a, b) => write!(f, "{a}+{}", sig(b)),
        }
    }
}

/// A degree together with a cohomological filtration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BiDegree {
    pub degree: Degree,
    pub s: i64,
}

impl BiDegree {
    pub const fn new(degree: Degree, s: i64) -> Self {
        BiDegree { degree, s }
    }

    /// Integer stem `a + b`, the horizontal chart coordinate.
    pub fn stem(self) -> i64 {
        self.degree.underlying_dimension()
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.degree, self.s)
    }
}

pub fn regular_multiple(k: i64) -> Degree {
    k * Degree::RHO
}

/// Trigraded `(r, s, t)` coordinates to `((t - r) + r*sigma, s)`.
pub fn tri_to_bidegree(r: i64, s: i64, t: i64) -> BiDegree {
    BiDegree::new(Degree::new(t - r, r), s)
}

/// Where `d_r` out of `src` lands.
pub fn differential_target(src: BiDegree, r: i64) -> BiDegree {
    debug_assert!(r >= 2);
    BiDegree::new(src.degree - Degree::ONE, src.s + r)
}

/// Inverse of [`differential_target`].
pub fn differential_source(tgt: BiDegree, r: i64) -> BiDegree {
    BiDegree::new(tgt.degree + Degree::ONE, tgt.s - r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_multiples() {
        assert_eq!(regular_multiple(0), Degree::new(0, 0));
        assert_eq!(regular_multiple(3), Degree::new(3, 3));
        assert_eq!(regular_multiple(-4), Degree::new(-4, -4));
    }

    #[test]
    fn trigraded_conversion() {
        assert_eq!(tri_to_bidegree(0, 0, 0), BiDegree::new(Degree::ZERO, 0));
        assert_eq!(tri_to_bidegree(-2, 0, 0), BiDegree::new(Degree::new(2, -2), 0));
        assert_eq!(tri_to_bidegree(-1, 1, -1), BiDegree::new(Degree::new(0, -1), 1));
    }

    #[test]
    fn targets() {
        let u = BiDegree::new(Degree::new(2, -2), 0);
        assert_eq!(differential_target(u, 3), BiDegree::new(Degree::new(1, -2), 3));
        let u2 = BiDegree::new(Degree::new(4, -4), 0);
        assert_eq!(differential_target(u2, 7), BiDegree::new(Degree::new(3, -4), 7));
        assert_eq!(
            differential_target(BiDegree::new(Degree::ZERO, 0), 2),
            BiDegree::new(Degree::new(-1, 0), 2)
        );
    }

    #[test]
    fn json_is_a_pair() {
        let d = Degree::new(2, -2);
        assert_eq!(serde_json::to_string(&d).unwrap(), "[2,-2]");
        let back: Degree = serde_json::from_str("[0,-1]").unwrap();
        assert_eq!(back, Degree::new(0, -1));
        assert_eq!(Degree::from_rho(-5, -2), Degree::new(-7, -2));
    }
}
