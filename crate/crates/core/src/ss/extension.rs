//! Assembling an abutment from `E_∞` and a table of extensions.

use serde::{Deserialize, Serialize};

use super::{Bidegree, Cell, Page};
use crate::error::{Error, Result};
use crate::fg_module::{AbGroup, FgZpModule};

/// A summand of an `E_∞` cell: filtration `s` and index in [`summands`] order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassId {
    pub s: i64,
    pub index: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extension {
    Trivial,
    Nontrivial,
}

/// Which primes a record applies to: a number or the string `"odd"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PrimeSelector {
    Exactly(u64),
    Named(PrimeClass),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeClass {
    Odd,
}

impl PrimeSelector {
    pub fn matches(&self, p: u64) -> bool {
        match self {
            PrimeSelector::Exactly(q) => *q == p,
            PrimeSelector::Named(PrimeClass::Odd) => p % 2 == 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionRecord {
    pub prime: PrimeSelector,
    pub stem: i64,
    /// Class in lower filtration (the quotient side).
    pub lower: ClassId,
    /// Class in higher filtration (the subgroup side).
    pub upper: ClassId,
    pub extension: Extension,
    pub cite: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExtensionTable {
    pub records: Vec<ExtensionRecord>,
}

/// Cyclic summands of a group: free part first, then each prime ascending
/// with exponents descending. `None` marks a free summand.
pub fn summands(g: &AbGroup) -> Vec<(u64, Option<u32>)> {
    let base = g.component(g.prime());
    let mut out: Vec<(u64, Option<u32>)> = (0..base.free_rank()).map(|_| (g.prime(), None)).collect();
    for m in g.parts() {
        out.extend(m.torsion_exponents().iter().map(|&k| (m.prime(), Some(k))));
    }
    out
}

struct Item {
    prime: u64,
    exp: Option<u32>,
    members: Vec<ClassId>,
}

/// Iterated extension of the `E_∞` cells of one stem, top filtration first.
/// Unlisted pairs split.
pub fn assemble_stem(einf: &Page, stem: i64, ext: &ExtensionTable) -> Result<AbGroup> {
    let w = einf.window();
    assemble_stem_filtered(einf, stem, ext, w.s_min, w.s_max)
}

/// Like [`assemble_stem`], using only filtrations `s_lo..=s_hi`.
pub fn assemble_stem_filtered(einf: &Page, stem: i64, ext: &ExtensionTable, s_lo: i64, s_hi: i64) -> Result<AbGroup> {
    let p = einf.prime();
    let w = einf.window();
    let records: Vec<&ExtensionRecord> = ext.records.iter().filter(|r| r.prime.matches(p) && r.stem == stem).collect();
    for r in &records {
        if r.lower.s >= r.upper.s {
            return Err(Error::InconsistentTable(format!(
                "extension in stem {stem}: lower filtration {} is not below {}",
                r.lower.s, r.upper.s
            )));
        }
    }
    let mut items: Vec<Item> = Vec::new();
    for s in (s_lo.max(w.s_min)..=s_hi.min(w.s_max)).rev() {
        let b = Bidegree::new(s, s + stem);
        let g = match einf.cell(b) {
            Some(Cell::Known(g)) => g,
            Some(Cell::Truncated) => return Err(Error::Truncated(format!("stem {stem} meets truncated cell {b}"))),
            None => return Err(Error::Truncated(format!("stem {stem} leaves the window at {b}"))),
        };
        for (index, (prime, exp)) in summands(&g).into_iter().enumerate() {
            let id = ClassId { s, index };
            let rec = records
                .iter()
                .find(|r| r.lower == id && r.extension == Extension::Nontrivial && r.upper.s <= s_hi);
            let Some(rec) = rec else {
                items.push(Item {
                    prime,
                    exp,
                    members: vec![id],
                });
                continue;
            };
            let bad = |why: &str| Error::InconsistentTable(format!("extension {:?} -> {:?}: {why}", rec.lower, rec.upper));
            let item = items
                .iter_mut()
                .find(|it| it.members.contains(&rec.upper))
                .ok_or_else(|| bad("upper class does not exist at E_∞"))?;
            let Some(a) = exp else {
                return Err(bad("a free quotient always splits"));
            };
            if item.prime != prime {
                return Err(bad("classes of different primes"));
            }
            item.exp = item.exp.map(|b| a + b);
            item.members.push(id);
        }
    }
    for r in &records {
        let seen = |c: &ClassId| c.s < s_lo || c.s > s_hi || items.iter().any(|it| it.members.contains(c));
        if !seen(&r.lower) || !seen(&r.upper) {
            return Err(Error::InconsistentTable(format!("stem {stem}: record refers to a missing class")));
        }
    }
    let mut out = AbGroup::zero(p);
    for it in items {
        let m = match it.exp {
            None => FgZpModule::free(it.prime, 1),
            Some(k) => FgZpModule::cyclic(it.prime, k),
        };
        out = out.direct_sum(&AbGroup::from_module(p, m)?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ss::Window;

    fn page_with(cells: &[(i64, AbGroup)]) -> Page {
        let mut page = Page::new(2, 5, Window::new(-4, 8, 6));
        for (s, g) in cells {
            page.set(Bidegree::new(*s, *s), g.clone()).unwrap();
        }
        page
    }

    fn g(m: FgZpModule) -> AbGroup {
        AbGroup::from_module(2, m).unwrap()
    }

    #[test]
    fn default_split_and_single_cell() {
        let z2 = g(FgZpModule::cyclic(2, 1));
        let page = page_with(&[(0, z2.clone()), (1, z2)]);
        let out = assemble_stem(&page, 0, &ExtensionTable::default()).unwrap();
        assert_eq!(out.to_string(), "Z/2 ⊕ Z/2");
        let free = page_with(&[(0, g(FgZpModule::free(2, 1)))]);
        assert_eq!(assemble_stem(&free, 0, &ExtensionTable::default()).unwrap().to_string(), "Z_2");
    }

    #[test]
    fn nontrivial_records_merge() {
        let page = page_with(&[
            (0, g(FgZpModule::cyclic(2, 1))),
            (1, g(FgZpModule::new(2, 1, vec![1, 1]).unwrap())),
            (3, g(FgZpModule::cyclic(2, 1))),
        ]);
        let rec = |lower, upper| ExtensionRecord {
            prime: PrimeSelector::Exactly(2),
            stem: 0,
            lower,
            upper,
            extension: Extension::Nontrivial,
            cite: String::new(),
        };
        let table = ExtensionTable {
            records: vec![
                rec(ClassId { s: 0, index: 0 }, ClassId { s: 1, index: 0 }),
                rec(ClassId { s: 1, index: 1 }, ClassId { s: 3, index: 0 }),
            ],
        };
        assert_eq!(assemble_stem(&page, 0, &table).unwrap().to_string(), "Z_2 ⊕ Z/2 ⊕ Z/4");
        assert_eq!(assemble_stem_filtered(&page, 0, &table, 0, 1).unwrap().to_string(), "Z_2 ⊕ Z/2 ⊕ Z/2");
        assert_eq!(assemble_stem_filtered(&page, 0, &table, 2, 24).unwrap().to_string(), "Z/2");

        let broken = ExtensionTable {
            records: vec![rec(ClassId { s: 0, index: 0 }, ClassId { s: 2, index: 0 })],
        };
        assert!(matches!(assemble_stem(&page, 0, &broken), Err(Error::InconsistentTable(_))));
    }

    #[test]
    fn prime_selector_json() {
        let odd: PrimeSelector = serde_json::from_str("\"odd\"").unwrap();
        assert!(odd.matches(3) && !odd.matches(2));
        let two: PrimeSelector = serde_json::from_str("2").unwrap();
        assert!(two.matches(2) && !two.matches(3));
    }
}
