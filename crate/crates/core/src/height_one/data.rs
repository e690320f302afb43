//! Shipped tables: the `p = 2` descent `d_3`, transported Picard
//! differentials, and 0-stem extensions.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ss::{Bidegree, ExtensionTable, PrimeSelector, Window};

/// Overrides the shipped data directory.
pub const DATA_DIR_ENV: &str = "KLOCAL_DATA_DIR";

const D3_FILE: &str = "p2_ass_d3.json";
const TRANSPORTED_FILE: &str = "transported.json";
const EXTENSIONS_FILE: &str = "extensions.json";

const SHIPPED_D3: &str = include_str!("../../data/p2_ass_d3.json");
const SHIPPED_TRANSPORTED: &str = include_str!("../../data/transported.json");
const SHIPPED_EXTENSIONS: &str = include_str!("../../data/extensions.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrowMap {
    /// Isomorphism of `Z/p` onto `Z/p`.
    Onto,
    /// A cyclic group of order at least `p²` onto `Z/p`.
    KernelDrop,
    Zero,
}

/// Arrows `(s₀ + k, t₀ + period·m + 2k) → (· + 3, · + 2)` for all `m`, and
/// `k ≥ 0` along an `η`-tower or `k = 0` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct D3Family {
    pub name: String,
    pub source: Bidegree,
    pub t_period: i64,
    pub eta_tower: bool,
    pub map: ArrowMap,
    pub cite: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct D3Table {
    pub prime: u64,
    pub page: i64,
    pub families: Vec<D3Family>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub from: Bidegree,
    pub to: Bidegree,
    pub map: ArrowMap,
    pub family: String,
}

impl D3Table {
    /// Arrows with source in `window`, sorted by source.
    pub fn arrows(&self, window: &Window) -> Vec<Arrow> {
        let mut out = Vec::new();
        for f in &self.families {
            for s in window.s_min.max(f.source.s)..=window.s_max {
                let k = s - f.source.s;
                if k > 0 && !f.eta_tower {
                    break;
                }
                for t in window.t_min..=window.t_max {
                    if (t - f.source.t - 2 * k).rem_euclid(f.t_period) == 0 {
                        let from = Bidegree::new(s, t);
                        out.push(Arrow {
                            from,
                            to: from.d_target(self.page),
                            map: f.map,
                            family: f.name.clone(),
                        });
                    }
                }
            }
        }
        out.sort_by_key(|a| a.from);
        out
    }

    fn validate(&self) -> Result<()> {
        if self.prime != 2 || self.page != 3 {
            return Err(Error::Parse("the d3 table is for p = 2 and page 3".into()));
        }
        for f in &self.families {
            if f.t_period <= 0 || f.cite.trim().is_empty() {
                return Err(Error::Parse(format!("d3 family {}: needs a positive period and a cite", f.name)));
            }
        }
        Ok(())
    }
}

/// One summand of a cell, indexed as in [`crate::ss::summands`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandRef {
    pub s: i64,
    pub t: i64,
    pub index: usize,
}

impl SummandRef {
    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new(self.s, self.t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrowStatus {
    Known,
    Undetermined,
}

/// A Picard differential imported from a comparison map, or left open.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportedArrow {
    pub prime: PrimeSelector,
    pub page: i64,
    pub source: SummandRef,
    pub target: SummandRef,
    pub status: ArrowStatus,
    pub cite: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightOneData {
    pub d3: D3Table,
    pub transported: Vec<TransportedArrow>,
    pub extensions: ExtensionTable,
}

fn parse_json<T: serde::de::DeserializeOwned>(name: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{name}: {e}")))
}

impl HeightOneData {
    pub fn parse(d3: &str, transported: &str, extensions: &str) -> Result<Self> {
        let data = HeightOneData {
            d3: parse_json(D3_FILE, d3)?,
            transported: parse_json(TRANSPORTED_FILE, transported)?,
            extensions: parse_json(EXTENSIONS_FILE, extensions)?,
        };
        data.validate()?;
        Ok(data)
    }

    /// The tables compiled into the library.
    pub fn shipped() -> Result<Self> {
        Self::parse(SHIPPED_D3, SHIPPED_TRANSPORTED, SHIPPED_EXTENSIONS)
    }

    pub fn load_dir(dir: &Path) -> Result<Self> {
        let read = |f: &str| std::fs::read_to_string(dir.join(f));
        Self::parse(&read(D3_FILE)?, &read(TRANSPORTED_FILE)?, &read(EXTENSIONS_FILE)?)
    }

    /// [`DATA_DIR_ENV`] if set, the shipped tables otherwise.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) => Self::load_dir(Path::new(&dir)),
            None => Self::shipped(),
        }
    }

    fn validate(&self) -> Result<()> {
        self.d3.validate()?;
        for a in &self.transported {
            if a.target.bidegree() != a.source.bidegree().d_target(a.page) || a.page < 2 {
                return Err(Error::Parse(format!(
                    "transported d{} from {} cannot land in {}",
                    a.page,
                    a.source.bidegree(),
                    a.target.bidegree()
                )));
            }
            if a.cite.trim().is_empty() {
                return Err(Error::Parse("transported arrow without a cite".into()));
            }
        }
        for r in &self.extensions.records {
            if r.lower.s >= r.upper.s || r.cite.trim().is_empty() {
                return Err(Error::Parse(format!("extension record in stem {} is malformed", r.stem)));
            }
        }
        Ok(())
    }

    /// Transported arrows for `p`.
    pub fn transported_for(&self, p: u64) -> impl Iterator<Item = &TransportedArrow> {
        self.transported.iter().filter(move |a| a.prime.matches(p))
    }
}
