//! The ring `Z_2[η, u^{±2}]/(2η)` detecting the `p = 2` descent spectral sequence.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ss::Bidegree;

/// `coefficient · u^{2a} η^b` in descent bidegree `(b, 4a + 2b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingClass {
    pub a: i64,
    pub b: u32,
    /// Taken mod 2 once `b ≥ 1`.
    pub coefficient: i64,
}

impl RingClass {
    pub fn new(a: i64, b: u32, coefficient: i64) -> Self {
        let coefficient = if b >= 1 { coefficient.rem_euclid(2) } else { coefficient };
        RingClass { a, b, coefficient }
    }

    pub fn eta() -> Self {
        Self::new(0, 1, 1)
    }

    /// `x = u^{-2} η³` in `(3, 2)`.
    pub fn x() -> Self {
        Self::new(-1, 3, 1)
    }

    /// The monomial generating bidegree `b`, if the ring has one there.
    pub fn at(b: Bidegree) -> Option<Self> {
        let rest = b.t - 2 * b.s;
        (b.s >= 0 && rest % 4 == 0).then(|| Self::new(rest / 4, b.s as u32, 1))
    }

    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new(self.b as i64, 4 * self.a + 2 * self.b as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient == 0
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.a + other.a, self.b + other.b, self.coefficient * other.coefficient)
    }

    pub fn pow(&self, j: u32) -> Self {
        (0..j).fold(Self::new(0, 0, 1), |acc, _| acc.mul(self))
    }

    /// Sum of two multiples of the same monomial.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.a, self.b) != (other.a, other.b) {
            return Err(Error::Unsupported(format!("cannot add {self} and {other} in the ring model")));
        }
        Ok(Self::new(self.a, self.b, self.coefficient + other.coefficient))
    }

    /// `d_3` from `d_3(η) = 0` and `d_3(u²) = η³`: `d_3(u^{2a} η^b) = a u^{2a−2} η^{b+3}`.
    pub fn d3(&self) -> Self {
        Self::new(self.a - 1, self.b + 3, self.coefficient * self.a)
    }
}

impl fmt::Display for RingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.coefficient != 1 {
            write!(f, "{}·", self.coefficient)?;
        }
        match (self.a, self.b) {
            (0, 0) => write!(f, "1"),
            (a, 0) => write!(f, "u^{}", 2 * a),
            (0, b) => write!(f, "η^{b}"),
            (a, b) => write!(f, "u^{}η^{b}", 2 * a),
        }
    }
}
