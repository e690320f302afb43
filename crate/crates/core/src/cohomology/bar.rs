//! Brute-force oracle: inhomogeneous bar cochains of `(Z/p^n)^×` with
//! coefficients in `Z/p^m`.
//!
//! Everything is computed over `R = Z/p^m`. A finite `R`-module is identified
//! by the orders `|p^i A|`, and the order of a span is read off a Smith form,
//! so no coordinates on the cohomology group are ever needed.

use super::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::fg_module::matrix::{Matrix, Zpn};
use crate::fg_module::snf::{snf, Transforms};
use crate::fg_module::FgZpModule;
use crate::padic::{inv_mod, is_prime, pow_mod};

/// Largest cochain matrix (rows × columns) the oracle will build.
pub const MAX_ENTRIES: usize = 20_000_000;

/// Highest degree the oracle accepts.
pub const MAX_DEGREE: u32 = 3;

struct Level {
    modulus: u64,
    order: usize,
    index: Vec<usize>,
    elems: Vec<u64>,
    mul: Vec<usize>,
    /// Scalar by which each element acts on `Z/p^m`.
    action: Vec<u64>,
}

impl Level {
    fn new(p: u64, n: u32, ring: &Zpn, j: i64) -> Result<Self> {
        let q = p.checked_pow(n).filter(|&q| q - q / p <= 1 << 12);
        let Some(q) = q else {
            return Err(Error::TooLarge(format!("(Z/{p}^{n})^× has too many elements")));
        };
        let elems: Vec<u64> = (1..q).filter(|x| x % p != 0).collect();
        let mut index = vec![usize::MAX; q as usize];
        for (i, &e) in elems.iter().enumerate() {
            index[e as usize] = i;
        }
        let order = elems.len();
        let mut mul = vec![0; order * order];
        for (a, &x) in elems.iter().enumerate() {
            for (b, &y) in elems.iter().enumerate() {
                mul[a * order + b] = index[(x * y % q) as usize];
            }
        }
        let action = elems
            .iter()
            .map(|&g| {
                let g = g % ring.m;
                let base = if j < 0 { inv_mod(g, ring.m).expect("unit") } else { g };
                pow_mod(base, j.unsigned_abs(), ring.m)
            })
            .collect();
        Ok(Level {
            modulus: q,
            order,
            index,
            elems,
            mul,
            action,
        })
    }

    fn cochains(&self, s: u32) -> usize {
        self.order.pow(s)
    }

    /// The coboundary `C^s → C^{s+1}` as a dense matrix.
    fn coboundary(&self, s: u32, ring: &Zpn) -> Result<Matrix> {
        let (rows, cols) = (self.cochains(s + 1), self.cochains(s));
        if rows.saturating_mul(cols) > MAX_ENTRIES {
            return Err(Error::TooLarge(format!("bar coboundary of size {rows}×{cols}")));
        }
        let g = self.order;
        let mut d = Matrix::zeros(rows, cols);
        let mut tuple = vec![0usize; s as usize + 1];
        for row in 0..rows {
            let mut r = row;
            for slot in tuple.iter_mut().rev() {
                *slot = r % g;
                r /= g;
            }
            let encode = |it: &mut dyn Iterator<Item = usize>| it.fold(0, |acc, x| acc * g + x);
            let bump = |d: &mut Matrix, col: usize, c: u64| {
                let v = ring.add(d.get(row, col), c);
                d.set(row, col, v);
            };
            // g_1 · f(g_2, …, g_{s+1})
            let col = encode(&mut tuple[1..].iter().copied());
            bump(&mut d, col, self.action[tuple[0]]);
            for i in 0..s as usize {
                let merged = self.mul[tuple[i] * g + tuple[i + 1]];
                let mut it = tuple[..i].iter().copied().chain([merged]).chain(tuple[i + 2..].iter().copied());
                let col = encode(&mut it);
                let sign = if i % 2 == 0 { ring.neg(1) } else { 1 };
                bump(&mut d, col, sign);
            }
            let col = encode(&mut tuple[..s as usize].iter().copied());
            let sign = if s % 2 == 0 { ring.neg(1) } else { 1 };
            bump(&mut d, col, sign);
        }
        Ok(d)
    }

    /// Generators of the cocycles `Z^s` as columns.
    fn cocycles(&self, s: u32, ring: &Zpn) -> Result<Matrix> {
        let d = self.coboundary(s, ring)?;
        let cols = d.cols();
        let f = snf(d, ring, Transforms { v: true, ..Transforms::NONE });
        let v = f.v.expect("requested");
        let mut gens = Vec::new();
        for (i, e) in f.exponents.iter().enumerate() {
            match e {
                Some(0) => {}
                Some(e) => gens.push(scale(&v.col(i), ring.p.pow(ring.n - e), ring)),
                None => gens.push(v.col(i)),
            }
        }
        for i in f.exponents.len()..cols {
            gens.push(v.col(i));
        }
        Ok(Matrix::from_cols(&gens, cols))
    }

    /// Pull a cochain back along the reduction map from a finer level.
    fn inflate(&self, finer: &Level, s: u32, x: &[u64]) -> Vec<u64> {
        let proj: Vec<usize> = finer.elems.iter().map(|&e| self.index[(e % self.modulus) as usize]).collect();
        let (g, h) = (self.order, finer.order);
        (0..finer.cochains(s))
            .map(|mut c| {
                // both encodings put g_1 in the most significant digit
                let mut idx = 0;
                let mut w = 1;
                for _ in 0..s {
                    idx += proj[c % h] * w;
                    w *= g;
                    c /= h;
                }
                x[idx]
            })
            .collect()
    }
}

fn scale(x: &[u64], c: u64, ring: &Zpn) -> Vec<u64> {
    x.iter().map(|&v| ring.mul(v, c)).collect()
}

/// `log_p` of the order of the `R`-span of the columns of `m`.
fn span_log_order(m: &Matrix, ring: &Zpn) -> u32 {
    if m.cols() == 0 || m.rows() == 0 {
        return 0;
    }
    let f = snf(m.clone(), ring, Transforms::NONE);
    f.exponents.iter().flatten().map(|e| ring.n - e).sum()
}

/// Iso type of `(A + B) / B` for column spans `A`, `B` inside `R^k`.
fn relative_type(a: &Matrix, b: &Matrix, ring: &Zpn) -> FgZpModule {
    let base = span_log_order(b, ring);
    let logs: Vec<u32> = (0..=ring.n)
        .map(|i| {
            let scaled = Matrix::from_cols(
                &(0..a.cols()).map(|j| scale(&a.col(j), ring.p.pow(i), ring)).collect::<Vec<_>>(),
                a.rows(),
            );
            span_log_order(&scaled.hconcat(b), ring) - base
        })
        .collect();
    // factors of exponent > i number logs[i] − logs[i+1]
    let above: Vec<u32> = (0..ring.n as usize).map(|i| logs[i] - logs[i + 1]).collect();
    let mut exps = Vec::new();
    for k in 1..=ring.n as usize {
        let next = above.get(k).copied().unwrap_or(0);
        for _ in 0..above[k - 1] - next {
            exps.push(k as u32);
        }
    }
    FgZpModule::new(ring.p, 0, exps).expect("positive exponents")
}

fn finite_twist(p: u64, coeff: &Coefficient) -> Result<(u32, i64)> {
    match *coeff {
        Coefficient::TwistedFinite { k, j } if k > 0 => Ok((k, j)),
        Coefficient::TrivialZ2tor { k } if p == 2 && k > 0 => Ok((k, 0)),
        _ => Err(Error::Unsupported(format!("bar oracle needs a finite p-primary coefficient, got {coeff}"))),
    }
}

/// `H^s((Z/p^n)^×, M)` for `M = Z/p^m` with its twist, by brute force.
pub fn brute_force_cohomology(p: u64, n: u32, coeff: &Coefficient, s: u32) -> Result<FgZpModule> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (m, j) = finite_twist(p, coeff)?;
    if n < m || s > MAX_DEGREE {
        return Err(Error::Unsupported(format!("bar oracle needs n ≥ m and s ≤ {MAX_DEGREE}")));
    }
    let ring = Zpn::new(p, m)?;
    let level = Level::new(p, n, &ring, j)?;
    let z = level.cocycles(s, &ring)?;
    let b = boundaries(&level, s, &ring)?;
    Ok(relative_type(&z, &b, &ring))
}

fn boundaries(level: &Level, s: u32, ring: &Zpn) -> Result<Matrix> {
    if s == 0 {
        Ok(Matrix::zeros(1, 0))
    } else {
        level.coboundary(s - 1, ring)
    }
}

/// Quotient level at which the oracle reads off the continuous cohomology.
pub fn oracle_level(p: u64, m: u32) -> u32 {
    if p == 2 {
        m + 2
    } else {
        m + 1
    }
}

/// Continuous `H^s(Z_p^×, M)` for finite `M`, as a colimit over quotients.
///
/// For `s ≤ 1` the value at [`oracle_level`] is already the colimit. In degree
/// 2 the groups at a fixed level keep growing with `n`, so the oracle returns
/// the image of inflation from `n` to `n + m` instead.
pub fn continuous_cohomology_oracle(p: u64, coeff: &Coefficient, s: u32) -> Result<FgZpModule> {
    let (m, j) = finite_twist(p, coeff)?;
    let n = oracle_level(p, m);
    if s <= 1 {
        return brute_force_cohomology(p, n, coeff, s);
    }
    if s > 2 {
        return Err(Error::Unsupported("oracle colimit is implemented for s ≤ 2".into()));
    }
    let ring = Zpn::new(p, m)?;
    let coarse = Level::new(p, n, &ring, j)?;
    let fine = Level::new(p, n + m, &ring, j)?;
    let b = boundaries(&fine, s, &ring)?;
    let rows = fine.cochains(s);
    if rows.saturating_mul(b.cols() + coarse.cochains(s)) > MAX_ENTRIES {
        return Err(Error::TooLarge(format!("inflation image with {rows} rows")));
    }
    let z = coarse.cocycles(s, &ring)?;
    let inflated: Vec<Vec<u64>> = (0..z.cols()).map(|c| coarse.inflate(&fine, s, &z.col(c))).collect();
    Ok(relative_type(&Matrix::from_cols(&inflated, rows), &b, &ring))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_of_trivial_action() {
        let z3 = Coefficient::twisted_finite(1, 0);
        assert_eq!(brute_force_cohomology(3, 2, &z3, 0).unwrap(), FgZpModule::cyclic(3, 1));
    }

    #[test]
    fn twisted_degree_one() {
        let m = Coefficient::twisted_finite(2, 2);
        assert_eq!(brute_force_cohomology(3, 3, &m, 1).unwrap(), FgZpModule::cyclic(3, 1));
    }

    #[test]
    fn size_cap() {
        let m = Coefficient::twisted_finite(3, 1);
        assert!(matches!(brute_force_cohomology(5, 4, &m, 2), Err(Error::TooLarge(_))));
    }
}
