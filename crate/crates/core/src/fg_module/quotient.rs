//! Subquotients of `Z_p^n`: kernels over `Z_p` and iso types of `S/T`.

use super::matrix::{Matrix, Zpn};
use super::snf::{snf, Transforms};
use super::FgZpModule;
use crate::error::{Error, Result};

/// Digits of headroom demanded below the precision horizon.
pub(crate) const GUARD: u32 = 2;

/// Generators of a submodule of `Z_p^n` (columns) known modulo `p^prec`.
#[derive(Clone, Debug)]
pub(crate) struct Gens {
    pub m: Matrix,
    pub prec: u32,
}

/// Kernel of `m` viewed as a map of free `Z_p`-modules.
///
/// Diagonal entries that vanish at precision count as genuine zeros; the
/// returned basis is accurate to `N − (largest nonzero diagonal valuation)`.
pub(crate) fn zp_kernel(m: &Matrix, ring: &Zpn) -> Result<Gens> {
    let s = snf(
        m.clone(),
        ring,
        Transforms {
            v: true,
            ..Transforms::NONE
        },
    );
    let prec = checked_prec(ring.n, s.max_exponent())?;
    let idx: Vec<usize> = (s.rank()..m.cols()).collect();
    let v = s.v.expect("requested");
    Ok(Gens {
        m: v.select_cols(&idx),
        prec,
    })
}

fn checked_prec(n: u32, loss: u32) -> Result<u32> {
    if n <= loss + GUARD {
        return Err(Error::PrecisionExhausted(n));
    }
    Ok(n - loss)
}

/// The quotient `S/T` of two submodules `T ⊆ S ⊆ Z_p^n`, with enough data
/// to move elements of `S` into canonical coordinates.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: FgZpModule,
    ring: Zpn,
    prec0: u32,
    coord_ring: Zpn,
    u_s: Matrix,
    d_s: Vec<u32>,
    u_c: Matrix,
    /// canonical generator index -> SNF index in the coordinate space
    order: Vec<usize>,
    exps: Vec<Option<u32>>,
    lifts: Matrix,
}

impl Quotient {
    /// Lifts of the canonical generators to the ambient space, as columns.
    pub fn lifts(&self) -> &Matrix {
        &self.lifts
    }

    /// Precision of the canonical coordinates.
    pub fn coord_precision(&self) -> u32 {
        self.coord_ring.n
    }

    /// Canonical coordinates of `x ∈ S`, torsion entries reduced mod `p^k`.
    pub fn coords(&self, x: &[u64]) -> Result<Vec<u64>> {
        let y = self.u_s.mul_vec(x, &self.ring);
        let cr = &self.coord_ring;
        let m0 = self.ring.p.pow(self.prec0);
        let mut ys = Vec::with_capacity(self.d_s.len());
        for (i, &yi) in y.iter().enumerate() {
            let yi = yi % m0;
            if i < self.d_s.len() {
                let pd = self.ring.p.pow(self.d_s[i]);
                if yi % pd != 0 {
                    return Err(Error::Shape("element is not in the submodule".into()));
                }
                ys.push((yi / pd) % cr.m);
            } else if yi % cr.m != 0 {
                return Err(Error::Shape("element is not in the submodule".into()));
            }
        }
        let z = self.u_c.mul_vec(&ys, cr);
        Ok(self
            .order
            .iter()
            .map(|&j| match self.exps[j] {
                Some(k) => z[j] % cr.p.pow(k),
                None => z[j],
            })
            .collect())
    }
}

/// Build `S/T` from generator columns. `T ⊆ S` is checked.
pub(crate) fn quotient(s: &Gens, t: &Gens, ring: &Zpn) -> Result<Quotient> {
    let n = s.m.rows();
    assert_eq!(n, t.m.rows(), "ambient mismatch");
    let prec0 = s.prec.min(t.prec).min(ring.n);
    let ss = snf(
        s.m.clone(),
        ring,
        Transforms {
            u: true,
            u_inv: true,
            ..Transforms::NONE
        },
    );
    let rho = ss.rank();
    let d_s: Vec<u32> = ss.exponents[..rho].iter().map(|e| e.expect("rank")).collect();
    let prec = checked_prec(prec0, d_s.iter().copied().max().unwrap_or(0))?;
    let cr = ring.lower(prec)?;
    let m0 = ring.p.pow(prec0);
    let u_s = ss.u.expect("requested");
    let u_s_inv = ss.u_inv.expect("requested");

    // coordinates of T in the basis p^{d_i}·(U^{-1} e_i) of S
    let y = u_s.mul(&t.m, ring);
    let mut c = Matrix::zeros(rho, t.m.cols());
    for j in 0..t.m.cols() {
        for i in 0..n {
            let v = y.get(i, j) % m0;
            if i < rho {
                let pd = ring.p.pow(d_s[i]);
                if v % pd != 0 {
                    return Err(Error::Shape("quotient of non-nested submodules".into()));
                }
                c.set(i, j, (v / pd) % cr.m);
            } else if v % cr.m != 0 {
                return Err(Error::Shape("quotient of non-nested submodules".into()));
            }
        }
    }

    let cs = snf(
        c,
        &cr,
        Transforms {
            u: true,
            u_inv: true,
            ..Transforms::NONE
        },
    );
    let mut exps = cs.exponents.clone();
    exps.resize(rho, None);
    if let Some(&k) = exps.iter().flatten().max() {
        if k + GUARD >= prec {
            return Err(Error::PrecisionExhausted(ring.n));
        }
    }
    let mut free: Vec<usize> = (0..rho).filter(|&j| exps[j].is_none()).collect();
    let mut tors: Vec<usize> = (0..rho).filter(|&j| exps[j].map_or(false, |k| k > 0)).collect();
    tors.sort_by_key(|&j| std::cmp::Reverse(exps[j]));
    let module = FgZpModule::new(
        ring.p,
        free.len(),
        tors.iter().map(|&j| exps[j].expect("torsion")).collect(),
    )
    .expect("prime already validated");
    free.extend(tors);
    let order = free;

    let u_c = cs.u.expect("requested");
    let u_c_inv = cs.u_inv.expect("requested");
    let mut lifts = Matrix::zeros(n, order.len());
    for (g, &j) in order.iter().enumerate() {
        let mut scaled = vec![0u64; n];
        for (i, slot) in scaled.iter_mut().enumerate().take(rho) {
            *slot = ring.mul(u_c_inv.get(i, j), ring.p.pow(d_s[i]));
        }
        let x = u_s_inv.mul_vec(&scaled, ring);
        for (i, v) in x.into_iter().enumerate() {
            lifts.set(i, g, v);
        }
    }

    Ok(Quotient {
        module,
        ring: *ring,
        prec0,
        coord_ring: cr,
        u_s,
        d_s,
        u_c,
        order,
        exps,
        lifts,
    })
}
