//! Fixed-precision p-adic integers.
//!
//! A [`PAdic`] is a residue modulo `p^N`. Products go through `u128`, so any
//! `p^N < 2^63` is supported.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus we allow; keeps `a + b` and `a * b` safely inside u128/u64.
const MODULUS_LIMIT: u64 = 1 << 63;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `p^n`, or `PrecisionTooLarge` when it would not fit below `2^63`.
pub fn modulus(p: u64, n: u32) -> Result<u64> {
    let mut m: u64 = 1;
    for _ in 0..n {
        m = m
            .checked_mul(p)
            .filter(|m| *m < MODULUS_LIMIT)
            .ok_or(Error::PrecisionTooLarge { prime: p, precision: n })?;
    }
    Ok(m)
}

/// The largest `N` with `p^N < 2^63`.
pub fn max_precision(p: u64) -> u32 {
    let mut n = 0;
    while modulus(p, n + 1).is_ok() {
        n += 1;
    }
    n
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub(crate) fn reduce_signed(v: i128, m: u64) -> u64 {
    v.rem_euclid(m as i128) as u64
}

/// `ν_p(n)` for a nonzero integer.
pub fn int_valuation(p: u64, n: i128) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut n = n.unsigned_abs();
    let p = p as u128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Some(v)
}

/// Valuation of a p-adic number known modulo `p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Valuation {
    Finite(u32),
    /// Zero at this precision: the true valuation is at least `N`.
    AtPrecision,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtPrecision => None,
        }
    }
}

/// An element of `Z_p` known modulo `p^N`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PAdic {
    prime: u64,
    precision: u32,
    residue: u64,
}

impl PAdic {
    pub fn new(prime: u64, precision: u32, value: i128) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        if precision == 0 {
            return Err(Error::PrecisionTooLarge { prime, precision });
        }
        let m = modulus(prime, precision)?;
        Ok(PAdic {
            prime,
            precision,
            residue: reduce_signed(value, m),
        })
    }

    pub fn zero(prime: u64, precision: u32) -> Result<Self> {
        Self::new(prime, precision, 0)
    }

    pub fn one(prime: u64, precision: u32) -> Result<Self> {
        Self::new(prime, precision, 1)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        // validated at construction
        modulus(self.prime, self.precision).expect("validated modulus")
    }

    fn with_residue(&self, residue: u64) -> Self {
        PAdic { residue, ..*self }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        if self.precision != other.precision {
            return Err(Error::PrecisionMismatch(self.precision, other.precision));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.modulus();
        Ok(self.with_residue(((self.residue as u128 + other.residue as u128) % m as u128) as u64))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.checked_add(&other.neg_value())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with_residue(mul_mod(self.residue, other.residue, self.modulus())))
    }

    fn neg_value(&self) -> Self {
        let m = self.modulus();
        self.with_residue((m - self.residue) % m)
    }

    pub fn valuation(&self) -> Valuation {
        if self.residue == 0 {
            return Valuation::AtPrecision;
        }
        Valuation::Finite(int_valuation(self.prime, self.residue as i128).unwrap_or(0))
    }

    pub fn is_unit(&self) -> bool {
        self.residue % self.prime != 0
    }

    pub fn inverse(&self) -> Result<Self> {
        inv_mod(self.residue, self.modulus())
            .map(|r| self.with_residue(r))
            .ok_or(Error::NotAUnit)
    }

    pub fn pow(&self, e: u64) -> Self {
        self.with_residue(pow_mod(self.residue, e, self.modulus()))
    }

    /// `x^j` for any integer `j`; negative exponents need a unit.
    pub fn unit_pow(&self, j: i64) -> Result<Self> {
        if j >= 0 {
            return Ok(self.pow(j as u64));
        }
        Ok(self.inverse()?.pow(j.unsigned_abs()))
    }

    /// Reduce to a lower precision.
    pub fn truncate(&self, precision: u32) -> Result<Self> {
        if precision > self.precision {
            return Err(Error::PrecisionMismatch(self.precision, precision));
        }
        Self::new(self.prime, precision, self.residue as i128)
    }

    /// Split a unit into its root-of-unity and principal parts.
    pub fn decompose_unit(&self) -> Result<UnitDecomposition> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let torsion = if self.prime == 2 {
            let sign = if self.residue % 4 == 1 { 1 } else { -1 };
            PAdic::new(2, self.precision, sign)?
        } else {
            teichmuller(self.prime, self.residue % self.prime, self.precision)?
        };
        let principal = self.checked_mul(&torsion.inverse()?)?;
        Ok(UnitDecomposition {
            torsion_part: torsion,
            principal_part: principal,
        })
    }
}

impl fmt::Debug for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.prime, self.precision)
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

// Operator forms panic on mismatched parameters; use the checked_* methods
// where the inputs are not known to agree.
impl Add for PAdic {
    type Output = PAdic;
    fn add(self, rhs: PAdic) -> PAdic {
        self.checked_add(&rhs).expect("PAdic parameters differ")
    }
}

impl Sub for PAdic {
    type Output = PAdic;
    fn sub(self, rhs: PAdic) -> PAdic {
        self.checked_sub(&rhs).expect("PAdic parameters differ")
    }
}

impl Mul for PAdic {
    type Output = PAdic;
    fn mul(self, rhs: PAdic) -> PAdic {
        self.checked_mul(&rhs).expect("PAdic parameters differ")
    }
}

impl Neg for PAdic {
    type Output = PAdic;
    fn neg(self) -> PAdic {
        self.neg_value()
    }
}

/// A unit written as (root of unity) · (principal unit).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnitDecomposition {
    pub torsion_part: PAdic,
    pub principal_part: PAdic,
}

/// The Teichmüller lift of `a mod p`: the `(p−1)`-st root of unity congruent to `a`.
pub fn teichmuller(p: u64, a: u64, precision: u32) -> Result<PAdic> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if a % p == 0 {
        return Err(Error::NotAUnit);
    }
    let mut x = PAdic::new(p, precision, (a % p) as i128)?;
    // x ↦ x^p gains one digit per step
    for _ in 0..=precision {
        let y = x.pow(p);
        if y == x {
            return Ok(x);
        }
        x = y;
    }
    Ok(x)
}

/// Smallest primitive root modulo an odd prime (1 for p = 2).
pub fn primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(1);
    }
    let mut factors = Vec::new();
    let mut n = p - 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            factors.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .ok_or(Error::NotPrime(p))
}

/// Topological generator of the principal units: `1 + p` for odd p, `5` for p = 2.
pub fn topological_generator(p: u64) -> u64 {
    if p == 2 {
        5
    } else {
        1 + p
    }
}

/// `ν_p(a^j − 1)` for the standard topological generator `a`.
pub fn generator_weight_valuation(p: u64, j: i64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if j == 0 {
        return Err(Error::ZeroWeight);
    }
    let v = int_valuation(p, j as i128).unwrap_or(0);
    Ok(if p == 2 { v + 2 } else { v + 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(PAdic::new(3, 10, 9).unwrap().valuation(), Valuation::Finite(2));
        assert_eq!(PAdic::new(2, 10, 0).unwrap().valuation(), Valuation::AtPrecision);
        assert_eq!(PAdic::new(5, 8, 7775).unwrap().valuation(), Valuation::Finite(2));
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller(3, 1, 6).unwrap().residue(), 1);
        assert_eq!(teichmuller(3, 2, 4).unwrap().residue(), 80);
        let w = teichmuller(5, 2, 4).unwrap();
        assert_eq!(w.residue() % 5, 2);
        assert_eq!(w.pow(4).residue(), 1);
        assert!(matches!(teichmuller(5, 10, 4), Err(Error::NotAUnit)));
    }

    #[test]
    fn unit_pow_examples() {
        let x = PAdic::new(3, 6, 4).unwrap();
        assert_eq!(x.unit_pow(0).unwrap().residue(), 1);
        assert_eq!(x.unit_pow(4).unwrap().residue(), 256);
        let y = PAdic::new(2, 6, 5).unwrap().unit_pow(-1).unwrap();
        assert_eq!((5 * y.residue()) % 64, 1);
        assert!(matches!(
            PAdic::new(3, 4, 3).unwrap().unit_pow(-2),
            Err(Error::NotAUnit)
        ));
    }

    #[test]
    fn weight_valuation_examples() {
        assert_eq!(generator_weight_valuation(3, 4).unwrap(), 1);
        assert_eq!(generator_weight_valuation(5, 5).unwrap(), 2);
        assert_eq!(generator_weight_valuation(2, 2).unwrap(), 3);
        assert!(matches!(generator_weight_valuation(2, 0), Err(Error::ZeroWeight)));
    }

    #[test]
    fn precision_limits() {
        assert_eq!(max_precision(2), 62);
        assert!(PAdic::new(2, 63, 1).is_err());
        assert!(PAdic::new(13, max_precision(13), 1).is_ok());
    }

    #[test]
    fn unit_decomposition() {
        for &(p, n) in &[(2u64, 10u32), (3, 8), (7, 6)] {
            for a in 1..60i128 {
                let x = PAdic::new(p, n, a).unwrap();
                if !x.is_unit() {
                    continue;
                }
                let d = x.decompose_unit().unwrap();
                assert_eq!(d.torsion_part * d.principal_part, x);
                let q = if p == 2 { 4 } else { p };
                assert_eq!(d.principal_part.residue() % q, 1);
            }
        }
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(3).unwrap(), 2);
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(13).unwrap(), 2);
    }
}
