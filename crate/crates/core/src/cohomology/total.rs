//! Exact cohomology of `Z_p^× = F × P` from the tensor product of the
//! periodic resolution of `F` with the two-term resolution of `P`.
//!
//! No collapse or splitting is assumed, so this is the reference the direct
//! sum in [`cohomology_units`](super::cohomology_units) is tested against.

use super::{principal_scalar, torsion_generator, torsion_order, Coefficient, Component};
use crate::error::Result;
use crate::fg_module::{homology_at, AbGroup, FgZpModule, ModuleMap};
use crate::padic::max_precision;

fn cap(q: u64) -> i128 {
    (q as i128).pow(max_precision(q))
}

fn reduce(x: i128, q: u64) -> i64 {
    x.rem_euclid(cap(q)) as i64
}

/// Scalars of `δ_F` in each degree: `c − 1` from even, the norm from odd.
fn periodic_scalars(c: i64, f: u64, q: u64) -> [i64; 2] {
    let mut norm: i128 = 0;
    let mut pw: i128 = 1;
    for _ in 0..f {
        norm = (norm + pw) % cap(q);
        pw = pw * c as i128 % cap(q);
    }
    [reduce(c as i128 - 1, q), norm as i64]
}

/// Total differential `C^s → C^{s+1}` on a single component, where
/// `C^s = M^{(s,0)} ⊕ M^{(s−1,1)}` and `d(x, y) = (δ_F x, (−1)^s δ_P x + δ_F y)`.
fn total_differential(c: &Component, s: i64, f_scal: [i64; 2], p_scal: i64) -> Result<ModuleMap> {
    let m = &c.module;
    let q = m.prime();
    let width = |deg: i64| (deg >= 0) as usize + (deg >= 1) as usize;
    let sum = |k: usize| -> Result<FgZpModule> {
        let mut out = FgZpModule::zero(q);
        for _ in 0..k {
            out = out.direct_sum(m)?;
        }
        Ok(out)
    };
    let (src_w, dst_w) = (width(s), width(s + 1));
    let g = m.num_generators();
    let dom = sum(src_w)?;
    let cod = sum(dst_w)?;
    // blocks indexed by (row block, col block); block 0 is the P-degree 0 part
    let delta_f = |deg: i64| f_scal[(deg.rem_euclid(2)) as usize];
    let sign = if s % 2 == 0 { 1 } else { -1 };
    let mut blocks = vec![vec![0i64; src_w]; dst_w];
    if s >= 0 {
        blocks[0][0] = delta_f(s);
        blocks[1][0] = reduce(sign as i128 * p_scal as i128, q);
    }
    if s >= 1 {
        blocks[1][1] = delta_f(s - 1);
    }
    // direct sums of a canonical module are canonical only up to a permutation
    // of generators, so build the matrix in the order the sum uses
    let order_dom = generator_order(m, src_w);
    let order_cod = generator_order(m, dst_w);
    let mut rows = vec![vec![0i64; src_w * g]; dst_w * g];
    for (r, &(rb, ri)) in order_cod.iter().enumerate() {
        for (cidx, &(cb, ci)) in order_dom.iter().enumerate() {
            if ri == ci {
                rows[r][cidx] = blocks[rb][cb];
            }
        }
    }
    ModuleMap::new(dom, cod, rows)
}

/// `(block, generator)` pairs in the canonical generator order of `m^{⊕k}`.
fn generator_order(m: &FgZpModule, k: usize) -> Vec<(usize, usize)> {
    let exps = m.generator_exponents();
    let mut gens: Vec<(usize, usize)> = (0..k).flat_map(|b| (0..exps.len()).map(move |i| (b, i))).collect();
    // free generators (None) first, then torsion descending; stable within ties
    gens.sort_by_key(|&(_, i)| std::cmp::Reverse(exps[i].map_or(u32::MAX, |e| e)));
    gens
}

fn component_cohomology(p: u64, c: &Component, s: u32) -> Result<FgZpModule> {
    let f = torsion_order(p);
    if c.prime != p {
        // P is pro-p, so only F sees a prime-to-p module, trivially
        return super::cyclic_cohomology_scalar(&c.module, 1, f, s);
    }
    let w = if c.weight == 0 {
        1
    } else {
        torsion_generator(p)?.unit_pow(c.weight)?.residue() as i64
    };
    let f_scal = periodic_scalars(w, f, p);
    let p_scal = reduce(principal_scalar(p, c)? as i128 - 1, p);
    let s = s as i64;
    let inc = total_differential(c, s - 1, f_scal, p_scal)?;
    let out = total_differential(c, s, f_scal, p_scal)?;
    homology_at(&inc, &out)
}

/// `H^s(Z_p^×, M)` from the total complex.
pub fn cohomology_units_total(p: u64, coeff: &Coefficient, s: u32) -> Result<AbGroup> {
    let parts = coeff
        .components(p)?
        .iter()
        .map(|c| component_cohomology(p, c, s))
        .collect::<Result<Vec<_>>>()?;
    AbGroup::from_parts(p, parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_sum_on_small_cases() {
        for p in [2u64, 3, 5] {
            for j in -3..=3 {
                for s in 0..4 {
                    let c = Coefficient::twisted_zp(j);
                    assert_eq!(
                        cohomology_units_total(p, &c, s).unwrap(),
                        super::super::cohomology_units(p, &c, s).unwrap(),
                        "p={p} j={j} s={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn two_torsion_twist_at_two() {
        // Z/8 with weight 1: H^1 = (Z/2)^2
        let c = Coefficient::twisted_finite(3, 1);
        let h = cohomology_units_total(2, &c, 1).unwrap();
        assert_eq!(h.component(2), FgZpModule::new(2, 0, vec![1, 1]).unwrap());
    }
}
