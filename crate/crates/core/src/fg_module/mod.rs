//! Finitely generated `Z_p`-modules and their homomorphisms.

mod group;
pub mod matrix;
mod quotient;
pub mod snf;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{int_valuation, is_prime, max_precision};
pub(crate) use group::factor as factor_int;
pub use group::{group_homology, AbGroup, GroupMap};
use matrix::{Matrix, Zpn};
pub(crate) use quotient::{quotient, zp_kernel, Gens};
pub use quotient::Quotient;
pub use snf::{smith_normal_form, Snf};

/// Retries after the first attempt, each at doubled precision.
pub const PRECISION_RETRIES: u32 = 3;

/// `Z_p^r ⊕ ⊕ Z/p^{k_i}` in canonical form (exponents descending, all positive).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FgZpModule {
    #[serde(rename = "p")]
    prime: u64,
    #[serde(rename = "free")]
    free_rank: usize,
    #[serde(rename = "torsion")]
    torsion: Vec<u32>,
}

impl FgZpModule {
    pub fn new(prime: u64, free_rank: usize, mut torsion: Vec<u32>) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        torsion.retain(|&k| k > 0);
        torsion.sort_unstable_by(|a, b| b.cmp(a));
        Ok(FgZpModule {
            prime,
            free_rank,
            torsion,
        })
    }

    pub fn zero(prime: u64) -> Self {
        FgZpModule {
            prime,
            free_rank: 0,
            torsion: vec![],
        }
    }

    pub fn free(prime: u64, rank: usize) -> Self {
        FgZpModule {
            prime,
            free_rank: rank,
            torsion: vec![],
        }
    }

    /// `Z/p^k` (zero when `k = 0`).
    pub fn cyclic(prime: u64, k: u32) -> Self {
        FgZpModule {
            prime,
            free_rank: 0,
            torsion: if k > 0 { vec![k] } else { vec![] },
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_exponents(&self) -> &[u32] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn num_generators(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// `log_p` of the torsion order.
    pub fn torsion_log_order(&self) -> u32 {
        self.torsion.iter().sum()
    }

    pub fn max_exponent(&self) -> u32 {
        self.torsion.first().copied().unwrap_or(0)
    }

    /// Per-generator exponent in generator order (`None` for free generators).
    pub fn generator_exponents(&self) -> Vec<Option<u32>> {
        std::iter::repeat(None)
            .take(self.free_rank)
            .chain(self.torsion.iter().map(|&k| Some(k)))
            .collect()
    }

    /// Relation columns `p^{k_i}·e_i` for the torsion generators.
    pub(crate) fn relations(&self, ring: &Zpn) -> Matrix {
        let n = self.num_generators();
        let mut r = Matrix::zeros(n, self.torsion.len());
        for (i, &k) in self.torsion.iter().enumerate() {
            r.set(self.free_rank + i, i, ring.pow_p(k));
        }
        r
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        direct_sum(&[self.clone(), other.clone()])
    }
}

impl fmt::Display for FgZpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.parts();
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

impl FgZpModule {
    /// Summand names, free first then torsion ascending.
    pub fn parts(&self) -> Vec<String> {
        let mut parts: Vec<String> = (0..self.free_rank).map(|_| format!("Z_{}", self.prime)).collect();
        parts.extend(self.torsion.iter().rev().map(|&k| format!("Z/{}", self.prime.pow(k))));
        parts
    }
}

/// Canonical form of a direct sum.
pub fn direct_sum(ms: &[FgZpModule]) -> Result<FgZpModule> {
    let Some(first) = ms.first() else {
        // sum of nothing; the prime is irrelevant for the zero module
        return Ok(FgZpModule::zero(2));
    };
    let p = first.prime;
    let mut free = 0;
    let mut torsion = Vec::new();
    for m in ms {
        if m.prime != p {
            return Err(Error::PrimeMismatch(p, m.prime));
        }
        free += m.free_rank;
        torsion.extend_from_slice(&m.torsion);
    }
    FgZpModule::new(p, free, torsion)
}

/// A homomorphism between modules in canonical form.
///
/// `matrix[i][j]` is the `i`-th codomain coordinate of the image of the `j`-th
/// domain generator. Entries are integers read in `Z_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleMap {
    domain: FgZpModule,
    codomain: FgZpModule,
    matrix: Vec<Vec<i64>>,
}

impl ModuleMap {
    pub fn new(domain: FgZpModule, codomain: FgZpModule, mut matrix: Vec<Vec<i64>>) -> Result<Self> {
        if domain.prime != codomain.prime {
            return Err(Error::PrimeMismatch(domain.prime, codomain.prime));
        }
        let (r, c) = (codomain.num_generators(), domain.num_generators());
        if matrix.len() != r || matrix.iter().any(|row| row.len() != c) {
            return Err(Error::Shape(format!("expected a {r}x{c} matrix")));
        }
        let p = domain.prime;
        let cod_exp = codomain.generator_exponents();
        for (row, e) in matrix.iter_mut().zip(&cod_exp) {
            if let Some(k) = e {
                let m = (p as i128).pow(*k);
                for v in row.iter_mut() {
                    *v = (*v as i128).rem_euclid(m) as i64;
                }
            }
        }
        // p^{k_j}·(generator j) must map to zero
        for (j, dk) in domain.generator_exponents().iter().enumerate() {
            let Some(dk) = dk else { continue };
            for (i, ck) in cod_exp.iter().enumerate() {
                let v = matrix[i][j];
                if v == 0 {
                    continue;
                }
                let ok = match ck {
                    None => false,
                    Some(ck) => int_valuation(p, v as i128).unwrap_or(0) + dk >= *ck,
                };
                if !ok {
                    return Err(Error::Shape("map does not respect torsion relations".into()));
                }
            }
        }
        Ok(ModuleMap {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn zero(domain: FgZpModule, codomain: FgZpModule) -> Result<Self> {
        let m = vec![vec![0; domain.num_generators()]; codomain.num_generators()];
        Self::new(domain, codomain, m)
    }

    pub fn identity(m: FgZpModule) -> Self {
        let n = m.num_generators();
        let matrix = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        ModuleMap {
            domain: m.clone(),
            codomain: m,
            matrix,
        }
    }

    /// Multiplication by an integer scalar on a module.
    pub fn scalar(m: FgZpModule, c: i64) -> Result<Self> {
        let n = m.num_generators();
        let matrix = (0..n).map(|i| (0..n).map(|j| if i == j { c } else { 0 }).collect()).collect();
        Self::new(m.clone(), m, matrix)
    }

    pub fn domain(&self) -> &FgZpModule {
        &self.domain
    }

    pub fn codomain(&self) -> &FgZpModule {
        &self.codomain
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn prime(&self) -> u64 {
        self.domain.prime
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&v| v == 0)
    }

    /// `self ∘ first`.
    pub fn compose_after(&self, first: &ModuleMap) -> Result<ModuleMap> {
        if first.codomain != self.domain {
            return Err(Error::Shape("maps are not composable".into()));
        }
        let p = self.prime();
        let cap = (p as i128).pow(max_precision(p));
        let (r, c, k) = (
            self.codomain.num_generators(),
            first.domain.num_generators(),
            self.domain.num_generators(),
        );
        let mut out = vec![vec![0i64; c]; r];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let mut acc: i128 = 0;
                for l in 0..k {
                    acc = (acc + self.matrix[i][l] as i128 * first.matrix[l][j] as i128) % cap;
                }
                *slot = acc as i64;
            }
        }
        ModuleMap::new(first.domain.clone(), self.codomain.clone(), out)
    }

    /// Largest finite valuation among the entries.
    fn entry_valuation_bound(&self) -> u32 {
        self.matrix
            .iter()
            .flatten()
            .filter_map(|&v| int_valuation(self.prime(), v as i128))
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn to_matrix(&self, ring: &Zpn) -> Matrix {
        Matrix::from_i64_rows(&self.matrix, self.domain.num_generators(), ring)
    }

    /// Build from residues; free coordinates keep the residue as an integer.
    pub(crate) fn from_matrix(domain: FgZpModule, codomain: FgZpModule, m: &Matrix) -> Result<Self> {
        let rows = (0..m.rows())
            .map(|i| m.row(i).iter().map(|&v| v as i64).collect())
            .collect();
        ModuleMap::new(domain, codomain, rows)
    }
}

/// Starting working precision for a computation touching these modules and maps.
pub(crate) fn working_precision(p: u64, modules: &[&FgZpModule], maps: &[&ModuleMap]) -> u32 {
    let k = modules
        .iter()
        .map(|m| m.max_exponent())
        .chain(maps.iter().map(|f| f.entry_valuation_bound()))
        .max()
        .unwrap_or(0);
    (2 * k + 8).min(max_precision(p))
}

/// Run `f` at precision `n0`, doubling on `PrecisionExhausted` up to the retry bound.
pub fn with_precision_retry<T>(p: u64, n0: u32, mut f: impl FnMut(u32) -> Result<T>) -> Result<T> {
    let cap = max_precision(p);
    let mut n = n0.min(cap);
    for attempt in 0..=PRECISION_RETRIES {
        match f(n) {
            Err(Error::PrecisionExhausted(_)) if attempt < PRECISION_RETRIES && n < cap => {
                n = (2 * n).min(cap);
            }
            other => return other,
        }
    }
    Err(Error::PrecisionExhausted(n))
}

/// `ker(out) / (im(inc) + relations)` inside the presentation of `b`.
fn subquotient(b: &FgZpModule, inc: Option<&ModuleMap>, out: Option<&ModuleMap>) -> Result<Quotient> {
    let p = b.prime;
    let mut mods = vec![b];
    let mut maps = vec![];
    if let Some(f) = inc {
        mods.push(&f.domain);
        maps.push(f);
    }
    if let Some(g) = out {
        mods.push(&g.codomain);
        maps.push(g);
    }
    let n0 = working_precision(p, &mods, &maps);
    with_precision_retry(p, n0, |n| subquotient_at(b, inc, out, n))
}

fn subquotient_at(b: &FgZpModule, inc: Option<&ModuleMap>, out: Option<&ModuleMap>, n: u32) -> Result<Quotient> {
    let ring = Zpn::new(b.prime, n)?;
    let nb = b.num_generators();
    let s = match out {
        None => Gens {
            m: Matrix::identity(nb),
            prec: n,
        },
        Some(g) => {
            let gm = g.to_matrix(&ring);
            let rc = g.codomain.relations(&ring).neg(&ring);
            let k = zp_kernel(&gm.hconcat(&rc), &ring)?;
            Gens {
                m: k.m.select_rows(0..nb),
                prec: k.prec,
            }
        }
    };
    let rel = b.relations(&ring);
    let t = match inc {
        None => rel,
        Some(f) => f.to_matrix(&ring).hconcat(&rel),
    };
    quotient(&s, &Gens { m: t, prec: n }, &ring)
}

pub fn kernel(f: &ModuleMap) -> Result<FgZpModule> {
    Ok(subquotient(&f.domain, None, Some(f))?.module)
}

pub fn cokernel(f: &ModuleMap) -> Result<FgZpModule> {
    Ok(subquotient(&f.codomain, Some(f), None)?.module)
}

/// `ker(g) / im(f)` for `A --f--> B --g--> C`.
pub fn homology_at(f: &ModuleMap, g: &ModuleMap) -> Result<FgZpModule> {
    Ok(homology_quotient(f, g)?.module)
}

/// Like [`homology_at`], keeping the coordinate data.
pub fn homology_quotient(f: &ModuleMap, g: &ModuleMap) -> Result<Quotient> {
    if f.codomain != g.domain {
        return Err(Error::Shape("maps are not composable".into()));
    }
    if !g.compose_after(f)?.is_zero() {
        return Err(Error::NotAComplex);
    }
    subquotient(&f.codomain, Some(f), Some(g))
}

/// Subquotient with either map optional (missing maps are zero).
pub fn homology_optional(b: &FgZpModule, f: Option<&ModuleMap>, g: Option<&ModuleMap>) -> Result<Quotient> {
    if let (Some(f), Some(g)) = (f, g) {
        return homology_quotient(f, g);
    }
    subquotient(b, f, g)
}
