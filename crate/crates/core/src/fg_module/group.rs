//! Groups with prime-to-p torsion, split into primary components.
//!
//! Picard cells carry groups like `Z/2` or `μ_{p−1}` next to `Z_p`-modules, so
//! page entries are finite direct sums of primary pieces.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{FgZpModule, ModuleMap, Quotient};
use crate::error::{Error, Result};
use crate::padic::is_prime;

/// `Z_p^r ⊕ (finite abelian group)`, stored per prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbGroup {
    prime: u64,
    parts: BTreeMap<u64, FgZpModule>,
}

impl AbGroup {
    pub fn zero(prime: u64) -> Self {
        AbGroup {
            prime,
            parts: BTreeMap::new(),
        }
    }

    pub fn from_module(prime: u64, m: FgZpModule) -> Result<Self> {
        let mut g = Self::zero(prime);
        g.insert(m)?;
        Ok(g)
    }

    pub fn from_parts(prime: u64, parts: impl IntoIterator<Item = FgZpModule>) -> Result<Self> {
        let mut g = Self::zero(prime);
        for m in parts {
            g.insert(m)?;
        }
        Ok(g)
    }

    /// Cyclic group of order `n` with trivial structure, split by CRT.
    pub fn cyclic(prime: u64, n: u64) -> Result<Self> {
        let mut g = Self::zero(prime);
        for (q, k) in factor(n) {
            g.insert(FgZpModule::cyclic(q, k))?;
        }
        Ok(g)
    }

    fn insert(&mut self, m: FgZpModule) -> Result<()> {
        let q = m.prime();
        if q != self.prime && m.free_rank() > 0 {
            return Err(Error::Unsupported(format!(
                "free Z_{q} summand in a group over p = {}",
                self.prime
            )));
        }
        if m.is_zero() {
            return Ok(());
        }
        let merged = match self.parts.get(&q) {
            Some(old) => old.direct_sum(&m)?,
            None => m,
        };
        self.parts.insert(q, merged);
        Ok(())
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// The `q`-primary part (including the free part when `q = p`).
    pub fn component(&self, q: u64) -> FgZpModule {
        self.parts.get(&q).cloned().unwrap_or_else(|| FgZpModule::zero(q))
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.parts.keys().copied()
    }

    pub fn parts(&self) -> impl Iterator<Item = &FgZpModule> {
        self.parts.values()
    }

    pub fn free_rank(&self) -> usize {
        self.component(self.prime).free_rank()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> u128 {
        self.parts
            .values()
            .map(|m| (m.prime() as u128).pow(m.torsion_log_order()))
            .product()
    }

    pub fn direct_sum(&self, other: &AbGroup) -> Result<AbGroup> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        let mut g = self.clone();
        for m in other.parts.values() {
            g.insert(m.clone())?;
        }
        Ok(g)
    }

    /// Invariant factors `n_1 | n_2 | …` of the torsion subgroup, ascending.
    pub fn invariant_factors(&self) -> Vec<u128> {
        let width = self.parts.values().map(|m| m.torsion_exponents().len()).max().unwrap_or(0);
        let mut out = vec![1u128; width];
        for m in self.parts.values() {
            // exponents are descending; align the largest with the last factor
            for (i, &k) in m.torsion_exponents().iter().enumerate() {
                out[width - 1 - i] *= (m.prime() as u128).pow(k);
            }
        }
        out
    }

    fn summand_names(&self) -> Vec<String> {
        let mut out: Vec<String> = (0..self.free_rank()).map(|_| format!("Z_{}", self.prime)).collect();
        out.extend(self.invariant_factors().iter().map(|n| format!("Z/{n}")));
        out
    }

    /// Display with a custom separator, e.g. `" × "`.
    pub fn display_with(&self, sep: &str) -> String {
        let names = self.summand_names();
        if names.is_empty() {
            "0".to_string()
        } else {
            names.join(sep)
        }
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(" ⊕ "))
    }
}

pub(crate) fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut k = 0;
        while n % d == 0 {
            n /= d;
            k += 1;
        }
        if k > 0 {
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AbGroupJson {
    p: u64,
    free: usize,
    torsion: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    prime_to_p: Vec<(u64, u32)>,
}

impl Serialize for AbGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let base = self.component(self.prime);
        let mut prime_to_p = Vec::new();
        for m in self.parts.values().filter(|m| m.prime() != self.prime) {
            // ascending exponents inside each prime
            for &k in m.torsion_exponents().iter().rev() {
                prime_to_p.push((m.prime(), k));
            }
        }
        AbGroupJson {
            p: self.prime,
            free: base.free_rank(),
            torsion: base.torsion_exponents().to_vec(),
            prime_to_p,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AbGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = AbGroupJson::deserialize(d)?;
        let build = || -> Result<AbGroup> {
            let mut g = AbGroup::from_module(j.p, FgZpModule::new(j.p, j.free, j.torsion.clone())?)?;
            for &(q, k) in &j.prime_to_p {
                if q == j.p || !is_prime(q) {
                    return Err(Error::Parse(format!("bad prime_to_p entry ({q}, {k})")));
                }
                g.insert(FgZpModule::cyclic(q, k))?;
            }
            Ok(g)
        };
        build().map_err(D::Error::custom)
    }
}

/// A homomorphism of [`AbGroup`]s, one matrix per prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMap {
    domain: AbGroup,
    codomain: AbGroup,
    parts: BTreeMap<u64, ModuleMap>,
}

impl GroupMap {
    /// Missing primes are filled with zero maps.
    pub fn new(domain: AbGroup, codomain: AbGroup, maps: impl IntoIterator<Item = ModuleMap>) -> Result<Self> {
        if domain.prime != codomain.prime {
            return Err(Error::PrimeMismatch(domain.prime, codomain.prime));
        }
        let mut parts = BTreeMap::new();
        for f in maps {
            let q = f.prime();
            if *f.domain() != domain.component(q) || *f.codomain() != codomain.component(q) {
                return Err(Error::Shape(format!("{q}-primary map does not match the groups")));
            }
            parts.insert(q, f);
        }
        let primes: Vec<u64> = domain.primes().chain(codomain.primes()).collect();
        for q in primes {
            if let std::collections::btree_map::Entry::Vacant(e) = parts.entry(q) {
                e.insert(ModuleMap::zero(domain.component(q), codomain.component(q))?);
            }
        }
        Ok(GroupMap {
            domain,
            codomain,
            parts,
        })
    }

    pub fn zero(domain: AbGroup, codomain: AbGroup) -> Result<Self> {
        Self::new(domain, codomain, [])
    }

    pub fn from_module_map(prime: u64, f: ModuleMap) -> Result<Self> {
        let d = AbGroup::from_module(prime, f.domain().clone())?;
        let c = AbGroup::from_module(prime, f.codomain().clone())?;
        Self::new(d, c, [f])
    }

    pub fn domain(&self) -> &AbGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &AbGroup {
        &self.codomain
    }

    pub fn part(&self, q: u64) -> Option<&ModuleMap> {
        self.parts.get(&q)
    }

    pub fn parts(&self) -> impl Iterator<Item = &ModuleMap> {
        self.parts.values()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.values().all(|f| f.is_zero())
    }

    /// `self ∘ first`.
    pub fn compose_after(&self, first: &GroupMap) -> Result<GroupMap> {
        if first.codomain != self.domain {
            return Err(Error::Shape("maps are not composable".into()));
        }
        let mut maps = Vec::new();
        for (q, g) in &self.parts {
            if let Some(f) = first.parts.get(q) {
                maps.push(g.compose_after(f)?);
            }
        }
        GroupMap::new(first.domain.clone(), self.codomain.clone(), maps)
    }
}

/// `ker(out) / im(inc)` at a group `b`, prime by prime.
pub fn group_homology(
    b: &AbGroup,
    inc: Option<&GroupMap>,
    out: Option<&GroupMap>,
) -> Result<(AbGroup, BTreeMap<u64, Quotient>)> {
    if let Some(f) = inc {
        if f.codomain != *b {
            return Err(Error::Shape("incoming map does not land in the group".into()));
        }
    }
    if let Some(g) = out {
        if g.domain != *b {
            return Err(Error::Shape("outgoing map does not start at the group".into()));
        }
    }
    let mut result = AbGroup::zero(b.prime);
    let mut quotients = BTreeMap::new();
    for q in b.primes() {
        let bq = b.component(q);
        let q_inc = inc.and_then(|f| f.part(q));
        let q_out = out.and_then(|g| g.part(q));
        let quo = super::homology_optional(&bq, q_inc, q_out)?;
        result.insert(quo.module.clone())?;
        quotients.insert(q, quo);
    }
    Ok((result, quotients))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_factor_display() {
        let g = AbGroup::from_parts(7, [FgZpModule::free(7, 1), FgZpModule::cyclic(2, 2), FgZpModule::cyclic(3, 1)])
            .unwrap();
        assert_eq!(g.display_with(" × "), "Z_7 × Z/12");
        let h = AbGroup::from_parts(2, [FgZpModule::new(2, 1, vec![2, 1]).unwrap()]).unwrap();
        assert_eq!(h.to_string(), "Z_2 ⊕ Z/2 ⊕ Z/4");
        assert_eq!(AbGroup::zero(5).to_string(), "0");
    }

    #[test]
    fn json_roundtrip() {
        let g = AbGroup::from_parts(5, [FgZpModule::free(5, 1), FgZpModule::cyclic(2, 2)]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"p":5,"free":1,"torsion":[],"prime_to_p":[[2,2]]}"#);
        let back: AbGroup = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        let plain = AbGroup::from_module(3, FgZpModule::cyclic(3, 2)).unwrap();
        assert_eq!(serde_json::to_string(&plain).unwrap(), r#"{"p":3,"free":0,"torsion":[2]}"#);
    }

    #[test]
    fn cyclic_split() {
        let g = AbGroup::cyclic(7, 6).unwrap();
        assert_eq!(g.component(2), FgZpModule::cyclic(2, 1));
        assert_eq!(g.component(3), FgZpModule::cyclic(3, 1));
        assert_eq!(g.torsion_order(), 6);
    }
}
