//! Bigraded spectral sequences in Adams grading.
//!
//! A [`Page`] holds the groups of one page inside a window together with the
//! differentials the caller installed. Cells outside the window are unknown:
//! a nonzero cell whose `d_r` partner lies outside becomes [`Cell::Truncated`]
//! on the next page, and truncation never heals.

mod extension;
pub mod filtered;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use extension::{
    assemble_stem, assemble_stem_filtered, summands, ClassId, Extension, ExtensionRecord, ExtensionTable, PrimeClass, PrimeSelector,
};

use crate::error::{Error, Result};
use crate::fg_module::{group_homology, AbGroup, GroupMap, Quotient};

/// `(s, t)`; charts plot `(t − s, s)`. `d_r` maps `(s, t)` to `(s + r, t + r − 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bidegree {
    pub s: i64,
    pub t: i64,
}

impl Bidegree {
    pub const fn new(s: i64, t: i64) -> Self {
        Bidegree { s, t }
    }

    pub fn stem(&self) -> i64 {
        self.t - self.s
    }

    /// Target of `d_r`.
    pub fn d_target(&self, r: i64) -> Bidegree {
        Bidegree::new(self.s + r, self.t + r - 1)
    }

    /// Source of the `d_r` landing here.
    pub fn d_source(&self, r: i64) -> Bidegree {
        Bidegree::new(self.s - r, self.t - r + 1)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.s, self.t)
    }
}

pub const DEFAULT_WINDOW: Window = Window {
    t_min: -32,
    t_max: 32,
    s_min: 0,
    s_max: 24,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub t_min: i64,
    pub t_max: i64,
    #[serde(default)]
    pub s_min: i64,
    pub s_max: i64,
}

impl Window {
    pub fn new(t_min: i64, t_max: i64, s_max: i64) -> Self {
        Window {
            t_min,
            t_max,
            s_min: 0,
            s_max,
        }
    }

    pub fn contains(&self, b: Bidegree) -> bool {
        (self.s_min..=self.s_max).contains(&b.s) && (self.t_min..=self.t_max).contains(&b.t)
    }

    pub fn is_empty(&self) -> bool {
        self.t_min > self.t_max || self.s_min > self.s_max
    }

    /// Grow by `pad` in `t` and upwards in `s`.
    pub fn padded(&self, pad: i64) -> Window {
        Window {
            t_min: self.t_min - pad,
            t_max: self.t_max + pad,
            s_min: self.s_min,
            s_max: self.s_max + pad,
        }
    }

    pub fn bidegrees(&self) -> impl Iterator<Item = Bidegree> + '_ {
        (self.s_min..=self.s_max).flat_map(move |s| (self.t_min..=self.t_max).map(move |t| Bidegree::new(s, t)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Known(AbGroup),
    /// Depends on data outside the window.
    Truncated,
}

impl Cell {
    pub fn group(&self) -> Option<&AbGroup> {
        match self {
            Cell::Known(g) => Some(g),
            Cell::Truncated => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Cell::Known(g) if g.is_zero())
    }
}

/// One page `E_r`. Missing in-window cells are zero.
#[derive(Clone, Debug)]
pub struct Page {
    prime: u64,
    r: i64,
    window: Window,
    cells: BTreeMap<Bidegree, Cell>,
    diffs: BTreeMap<Bidegree, GroupMap>,
    /// How each changed cell arose from the previous page.
    history: BTreeMap<Bidegree, BTreeMap<u64, Quotient>>,
    /// Everything outside the window is known to be zero.
    complete: bool,
}

impl Page {
    pub fn new(prime: u64, r: i64, window: Window) -> Self {
        Page {
            prime,
            r,
            window,
            cells: BTreeMap::new(),
            diffs: BTreeMap::new(),
            history: BTreeMap::new(),
            complete: false,
        }
    }

    /// Declare that every cell outside the window is zero.
    pub fn with_complete_support(mut self) -> Self {
        self.complete = true;
        self
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    /// Set a cell; out-of-window bidegrees are rejected.
    pub fn set(&mut self, b: Bidegree, g: AbGroup) -> Result<()> {
        if !self.window.contains(b) {
            return Err(Error::Shape(format!("{b} is outside the window")));
        }
        if g.prime() != self.prime {
            return Err(Error::PrimeMismatch(self.prime, g.prime()));
        }
        if g.is_zero() {
            self.cells.remove(&b);
        } else {
            self.cells.insert(b, Cell::Known(g));
        }
        Ok(())
    }

    pub fn set_truncated(&mut self, b: Bidegree) {
        if self.window.contains(b) {
            self.cells.insert(b, Cell::Truncated);
        }
    }

    /// `None` outside the window.
    pub fn cell(&self, b: Bidegree) -> Option<Cell> {
        if !self.window.contains(b) {
            return None;
        }
        Some(self.cells.get(&b).cloned().unwrap_or_else(|| Cell::Known(AbGroup::zero(self.prime))))
    }

    /// The group at `b`, or an error if it is truncated or out of window.
    pub fn group(&self, b: Bidegree) -> Result<AbGroup> {
        match self.cell(b) {
            Some(Cell::Known(g)) => Ok(g),
            Some(Cell::Truncated) => Err(Error::Truncated(format!("cell {b}"))),
            None => Err(Error::Truncated(format!("cell {b} is outside the window"))),
        }
    }

    /// Nonzero or truncated cells in `(s, t)` order.
    pub fn cells(&self) -> impl Iterator<Item = (Bidegree, &Cell)> {
        self.cells.iter().map(|(b, c)| (*b, c))
    }

    pub fn differentials(&self) -> impl Iterator<Item = (Bidegree, &GroupMap)> {
        self.diffs.iter().map(|(b, d)| (*b, d))
    }

    pub fn differential(&self, from: Bidegree) -> Option<&GroupMap> {
        self.diffs.get(&from)
    }

    /// Quotient data relating the cell at `b` to the previous page, if it changed.
    pub fn history(&self, b: Bidegree) -> Option<&BTreeMap<u64, Quotient>> {
        self.history.get(&b)
    }

    /// Install `d_r` out of `from`. Zero maps are accepted and dropped.
    pub fn set_differential(&mut self, from: Bidegree, d: GroupMap) -> Result<()> {
        let to = from.d_target(self.r);
        let src = self.group(from)?;
        let dst = self.group(to)?;
        if *d.domain() != src || *d.codomain() != dst {
            return Err(Error::Shape(format!("d_{} from {from} does not match the cells", self.r)));
        }
        if d.is_zero() {
            self.diffs.remove(&from);
        } else {
            self.diffs.insert(from, d);
        }
        Ok(())
    }

    pub fn clear_differentials(&mut self) {
        self.diffs.clear();
    }

    /// Check `d ∘ d = 0` wherever two installed differentials compose.
    pub fn check_complex(&self) -> Result<()> {
        for (&b, d) in &self.diffs {
            if let Some(next) = self.diffs.get(&b.d_target(self.r)) {
                if !next.compose_after(d)?.is_zero() {
                    return Err(Error::NotAComplex);
                }
            }
        }
        Ok(())
    }

    /// Copy of the page cut down to a smaller window.
    pub fn restrict(&self, window: Window) -> Page {
        let keep = |b: &Bidegree| window.contains(*b);
        Page {
            prime: self.prime,
            r: self.r,
            window,
            cells: self.cells.iter().filter(|(b, _)| keep(b)).map(|(b, c)| (*b, c.clone())).collect(),
            diffs: self
                .diffs
                .iter()
                .filter(|(b, _)| keep(b) && keep(&b.d_target(self.r)))
                .map(|(b, d)| (*b, d.clone()))
                .collect(),
            history: self.history.iter().filter(|(b, _)| keep(b)).map(|(b, q)| (*b, q.clone())).collect(),
            complete: false,
        }
    }

    /// Largest `s` of a nonzero or truncated cell.
    pub fn top_filtration(&self) -> Option<i64> {
        self.cells.keys().map(|b| b.s).max()
    }

    pub fn has_truncation(&self) -> bool {
        self.cells.values().any(|c| *c == Cell::Truncated)
    }

    /// Whether a `d_r` partner of a nonzero cell is unknown.
    fn partner_unknown(&self, partner: Bidegree) -> bool {
        if partner.s < self.window.s_min.min(0) || (self.complete && !self.window.contains(partner)) {
            return false;
        }
        !matches!(self.cell(partner), Some(Cell::Known(_)))
    }

    pub fn to_json(&self) -> PageJson {
        let cells = self
            .cells
            .iter()
            .map(|(b, c)| CellJson {
                s: b.s,
                t: b.t,
                group: match c {
                    Cell::Known(g) => GroupOrUnknown::Known(g.clone()),
                    Cell::Truncated => GroupOrUnknown::Unknown("?".into()),
                },
            })
            .collect();
        let diffs = self
            .diffs
            .iter()
            .map(|(b, d)| DiffJson {
                from: [b.s, b.t],
                to: {
                    let t = b.d_target(self.r);
                    [t.s, t.t]
                },
                rank_data: d
                    .parts()
                    .filter(|f| !f.is_zero())
                    .map(|f| PrimeMatrix {
                        q: f.prime(),
                        matrix: f.matrix().to_vec(),
                    })
                    .collect(),
            })
            .collect();
        PageJson {
            r: self.r,
            p: self.prime,
            window: self.window,
            cells,
            diffs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PageJson {
    pub r: i64,
    pub p: u64,
    pub window: Window,
    pub cells: Vec<CellJson>,
    pub diffs: Vec<DiffJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellJson {
    pub s: i64,
    pub t: i64,
    pub group: GroupOrUnknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupOrUnknown {
    Known(AbGroup),
    /// Always `"?"`.
    Unknown(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffJson {
    pub from: [i64; 2],
    pub to: [i64; 2],
    pub rank_data: Vec<PrimeMatrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimeMatrix {
    pub q: u64,
    pub matrix: Vec<Vec<i64>>,
}

/// `E_{r+1}` from `E_r` and its installed differentials.
pub fn turn_page(page: &Page) -> Result<Page> {
    page.check_complex()?;
    let r = page.r;
    let mut next = Page::new(page.prime, r + 1, page.window);
    next.complete = page.complete;
    for (&b, cell) in &page.cells {
        let g = match cell {
            Cell::Truncated => {
                next.cells.insert(b, Cell::Truncated);
                continue;
            }
            Cell::Known(g) => g,
        };
        let out = page.diffs.get(&b);
        let inc = page.diffs.get(&b.d_source(r));
        let unknown = (out.is_none() && page.partner_unknown(b.d_target(r)))
            || (inc.is_none() && page.partner_unknown(b.d_source(r)));
        if unknown {
            next.cells.insert(b, Cell::Truncated);
            continue;
        }
        if out.is_none() && inc.is_none() {
            next.cells.insert(b, cell.clone());
            continue;
        }
        let (h, quotients) = group_homology(g, inc, out)?;
        next.history.insert(b, quotients);
        if !h.is_zero() {
            next.cells.insert(b, Cell::Known(h));
        }
    }
    Ok(next)
}

/// Supplies the differentials of each page.
pub trait DifferentialInstaller {
    /// Differentials `d_r` on `page`, keyed by source.
    fn install(&mut self, page: &Page) -> Result<Vec<(Bidegree, GroupMap)>>;
}

impl<F: FnMut(&Page) -> Result<Vec<(Bidegree, GroupMap)>>> DifferentialInstaller for F {
    fn install(&mut self, page: &Page) -> Result<Vec<(Bidegree, GroupMap)>> {
        self(page)
    }
}

/// Installs nothing.
pub struct NoDifferentials;

impl DifferentialInstaller for NoDifferentials {
    fn install(&mut self, _: &Page) -> Result<Vec<(Bidegree, GroupMap)>> {
        Ok(Vec::new())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollapseStatus {
    Collapsed,
    NoCollapse,
}

/// Result of [`run_to_collapse`]: every page visited, the last one first-class.
#[derive(Clone, Debug)]
pub struct Collapse {
    /// `E_2, E_3, …`, each with the differentials that were installed on it.
    pub pages: Vec<Page>,
    pub status: CollapseStatus,
    /// Horizontal vanishing line: every cell with `s` above it is zero.
    pub vanishing_line: Option<i64>,
}

impl Collapse {
    pub fn last(&self) -> &Page {
        self.pages.last().expect("at least one page")
    }
}

/// Certify a horizontal vanishing line on `core`: all cells above `line` are
/// zero and nothing inside is truncated. Returns the lowest such line.
pub fn vanishing_line(page: &Page, core: &Window) -> Option<i64> {
    let mut top = None;
    for (b, c) in page.cells() {
        if !core.contains(b) {
            continue;
        }
        if *c == Cell::Truncated {
            return None;
        }
        top = top.max(Some(b.s));
    }
    Some(top.unwrap_or(core.s_min - 1))
}

/// Turn pages until the installer supplies no differentials on a page `E_r`
/// whose vanishing line `L` satisfies `L < r`, so every later differential
/// leaves the support. `core` is the region the certificate covers.
pub fn run_to_collapse(
    e2: Page,
    installer: &mut dyn DifferentialInstaller,
    r_max: i64,
    core: &Window,
) -> Result<Collapse> {
    let mut pages = Vec::new();
    let mut page = e2;
    loop {
        let diffs = installer.install(&page)?;
        for (b, d) in diffs {
            page.set_differential(b, d)?;
        }
        page.check_complex()?;
        let line = vanishing_line(&page, core);
        let quiet = page.diffs.is_empty();
        if quiet && line.map_or(false, |l| l < page.r) {
            pages.push(page);
            return Ok(Collapse {
                pages,
                status: CollapseStatus::Collapsed,
                vanishing_line: line,
            });
        }
        if page.r >= r_max {
            pages.push(page);
            return Ok(Collapse {
                pages,
                status: CollapseStatus::NoCollapse,
                vanishing_line: line,
            });
        }
        let next = turn_page(&page)?;
        pages.push(page);
        page = next;
    }
}
