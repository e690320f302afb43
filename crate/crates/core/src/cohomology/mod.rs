//! Continuous cohomology of `Z_p`, finite cyclic groups and `Z_p^×`.
//!
//! `Z_p^× = F × P` with `F` the torsion subgroup (`μ_{p−1}`, or `{±1}` at
//! p = 2) and `P` the principal units, procyclic on `1+p` (or `5`). Every
//! supported coefficient is a sum of cyclic modules on which both generators
//! act by scalars, so all complexes below are built from scalar maps.

pub mod bar;
mod coefficient;
pub mod total;

use serde::{Deserialize, Serialize};

pub use coefficient::{Coefficient, Component};

use crate::error::{Error, Result};
use crate::fg_module::{cokernel, homology_at, kernel, AbGroup, FgZpModule, ModuleMap};
use crate::padic::{max_precision, primitive_root, teichmuller, topological_generator, PAdic};

/// Which group a cohomology request refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "group", rename_all = "snake_case")]
pub enum GroupKind {
    /// The principal units `1 + pZ_p` (`1 + 4Z_2` at p = 2).
    Procyclic { p: u64 },
    /// The order-`m` subgroup of the torsion of `Z_p^×`.
    FiniteCyclic { p: u64, m: u64 },
    Units { p: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyRequest {
    #[serde(flatten)]
    pub group: GroupKind,
    pub coefficient: Coefficient,
    pub degree: u32,
}

impl CohomologyRequest {
    pub fn compute(&self) -> Result<AbGroup> {
        match self.group {
            GroupKind::Procyclic { p } => cohomology_procyclic(p, &self.coefficient, self.degree),
            GroupKind::FiniteCyclic { p, m } => cohomology_finite_cyclic(p, m, &self.coefficient, self.degree),
            GroupKind::Units { p } => cohomology_units(p, &self.coefficient, self.degree),
        }
    }
}

/// Integer representative of an element of `Z_q` at full machine precision.
fn residue(x: PAdic) -> i64 {
    x.residue() as i64
}

/// Scalar by which the principal generator acts on a component.
pub fn principal_scalar(p: u64, c: &Component) -> Result<i64> {
    if c.prime != p || c.weight == 0 {
        return Ok(1);
    }
    let a = PAdic::new(p, max_precision(p), topological_generator(p) as i128)?;
    Ok(residue(a.unit_pow(c.weight)?))
}

/// Generator of the torsion subgroup `F`: `−1` at p = 2, else the Teichmüller
/// lift of the smallest primitive root.
pub fn torsion_generator(p: u64) -> Result<PAdic> {
    let n = max_precision(p);
    if p == 2 {
        PAdic::new(2, n, -1)
    } else {
        teichmuller(p, primitive_root(p)?, n)
    }
}

/// Order of `F`.
pub fn torsion_order(p: u64) -> u64 {
    if p == 2 {
        2
    } else {
        p - 1
    }
}

/// Scalar by which `g^e` acts on a component, `g` the torsion generator.
fn torsion_scalar(p: u64, c: &Component, e: u64) -> Result<i64> {
    if c.prime != p || c.weight == 0 {
        return Ok(1);
    }
    let w = torsion_generator(p)?.pow(e);
    Ok(residue(w.unit_pow(c.weight)?))
}

fn scalar_map(m: &FgZpModule, c: i64) -> Result<ModuleMap> {
    ModuleMap::scalar(m.clone(), c)
}

/// `c − 1` as an integer, keeping the representative small when `c ≡ 1`.
fn minus_one(c: i64, q: u64) -> i64 {
    let cap = (q as i128).pow(max_precision(q));
    ((c as i128 - 1).rem_euclid(cap)) as i64
}

/// Cohomology of the procyclic group on one component.
fn procyclic_component(p: u64, c: &Component, s: u32) -> Result<FgZpModule> {
    if c.prime != p {
        // pro-p group, prime-to-p module: only invariants survive
        return Ok(if s == 0 { c.module.clone() } else { FgZpModule::zero(c.prime) });
    }
    let f = scalar_map(&c.module, minus_one(principal_scalar(p, c)?, p))?;
    match s {
        0 => kernel(&f),
        1 => cokernel(&f),
        _ => Ok(FgZpModule::zero(p)),
    }
}

/// `H^s` of the principal units: `ker(g−1)`, `coker(g−1)`, then zero.
pub fn cohomology_procyclic(p: u64, m: &Coefficient, s: u32) -> Result<AbGroup> {
    let parts = m
        .components(p)?
        .iter()
        .map(|c| procyclic_component(p, c, s))
        .collect::<Result<Vec<_>>>()?;
    AbGroup::from_parts(p, parts)
}

/// Cohomology of `C_m` acting on `x` through multiplication by `c`.
pub fn cyclic_cohomology_scalar(x: &FgZpModule, c: i64, m: u64, s: u32) -> Result<FgZpModule> {
    let q = x.prime();
    if m == 1 {
        return Ok(if s == 0 { x.clone() } else { FgZpModule::zero(q) });
    }
    let cap = (q as i128).pow(max_precision(q));
    let mut norm: i128 = 0;
    let mut pw: i128 = 1;
    for _ in 0..m {
        norm = (norm + pw) % cap;
        pw = pw * (c as i128).rem_euclid(cap) % cap;
    }
    let diff = scalar_map(x, minus_one(c, q))?;
    let norm = scalar_map(x, norm as i64)?;
    match s {
        0 => kernel(&diff),
        s if s % 2 == 1 => homology_at(&diff, &norm),
        _ => homology_at(&norm, &diff),
    }
}

/// Cohomology of the order-`m` subgroup of the torsion of `Z_p^×`.
pub fn cohomology_finite_cyclic(p: u64, m: u64, coeff: &Coefficient, s: u32) -> Result<AbGroup> {
    let comps = coeff.components(p)?;
    let f = torsion_order(p);
    let twisted = comps.iter().any(|c| c.prime == p && c.weight != 0);
    if m == 0 || (twisted && f % m != 0) {
        return Err(Error::Unsupported(format!("no order-{m} subgroup acts on this coefficient at p = {p}")));
    }
    let parts = comps
        .iter()
        .map(|c| {
            let e = if twisted { f / m } else { 0 };
            let scalar = torsion_scalar(p, c, e)?;
            cyclic_cohomology_scalar(&c.module, scalar, m, s)
        })
        .collect::<Result<Vec<_>>>()?;
    AbGroup::from_parts(p, parts)
}

/// `H^s(Z_p^×, M) = ⊕_{i+j=s} H^i(F, H^j(P, M))`.
pub fn cohomology_units(p: u64, coeff: &Coefficient, s: u32) -> Result<AbGroup> {
    let f = torsion_order(p);
    let mut parts = Vec::new();
    for c in coeff.components(p)? {
        let w = torsion_scalar(p, &c, 1)?;
        for j in 0..=s.min(1) {
            let hj = procyclic_component(p, &c, j)?;
            if hj.is_zero() {
                continue;
            }
            parts.push(cyclic_cohomology_scalar(&hj, w, f, s - j)?);
        }
    }
    AbGroup::from_parts(p, parts)
}
