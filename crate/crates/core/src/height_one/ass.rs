//! The descent spectral sequence `H^s(Z_p^×, π_t E) ⇒ π_{t−s} L_{K(1)} S`.

use super::data::{Arrow, ArrowMap, HeightOneData};
use super::ring::RingClass;
use super::summand_map;
use crate::cohomology::{cohomology_units, Coefficient};
use crate::error::{Error, Result};
use crate::fg_module::GroupMap;
use crate::ss::{run_to_collapse, Bidegree, Collapse, CollapseStatus, NoDifferentials, Page, Window};

/// Extra room around the requested window so edge effects stay outside it.
pub const ASS_PAD: i64 = 12;

/// `E_2` on `window`: `H^s(Z_p^×, Z_p(t/2))` for even `t`, zero for odd `t`.
pub fn ass_e2(p: u64, window: &Window) -> Result<Page> {
    let mut page = Page::new(p, 2, *window);
    for b in window.bidegrees() {
        if b.s < 0 || b.t % 2 != 0 {
            continue;
        }
        let g = cohomology_units(p, &Coefficient::twisted_zp(b.t / 2), b.s as u32)?;
        page.set(b, g)?;
    }
    Ok(page)
}

#[derive(Clone, Debug)]
pub struct AssRun {
    /// Pages on the padded window, `E_2` first.
    pub collapse: Collapse,
    pub core: Window,
    /// The `d_3` arrows installed from the table.
    pub arrows: Vec<Arrow>,
}

impl AssRun {
    pub fn einf(&self) -> &Page {
        self.collapse.last()
    }

    /// `E_r`, or `E_∞` once `r` is past the last page.
    pub fn page(&self, r: i64) -> &Page {
        let i = (r - 2).max(0) as usize;
        self.collapse.pages.get(i).unwrap_or_else(|| self.einf())
    }

    /// Pages cut down to the requested window.
    pub fn core_pages(&self) -> Vec<Page> {
        self.collapse.pages.iter().map(|p| p.restrict(self.core)).collect()
    }
}

/// Check every ring-model class in `window` against the table: an arrow
/// leaves it exactly when the Leibniz `d_3` is nonzero, and lands where the
/// Leibniz rule says.
pub fn leibniz_check(arrows: &[Arrow], e2: &Page) -> Result<usize> {
    let window = *e2.window();
    let mut checked = 0;
    for b in window.bidegrees() {
        if b.s < 1 || e2.group(b)?.is_zero() {
            continue;
        }
        let Some(x) = RingClass::at(b) else {
            continue;
        };
        let d = x.d3();
        if !window.contains(d.bidegree()) {
            continue;
        }
        checked += 1;
        let arrow = arrows.iter().find(|a| a.from == b);
        match (arrow, d.is_zero()) {
            (None, true) => {}
            (Some(a), false) if a.to == d.bidegree() => {}
            (Some(a), _) => {
                return Err(Error::InconsistentTable(format!(
                    "table has d3 {} -> {} but the Leibniz rule gives d3({x}) = {d}",
                    a.from, a.to
                )))
            }
            (None, false) => {
                return Err(Error::InconsistentTable(format!(
                    "Leibniz rule gives d3({x}) = {d} at {b} but the table has no arrow"
                )))
            }
        }
    }
    Ok(checked)
}

fn arrow_map(page: &Page, a: &Arrow) -> Result<Option<GroupMap>> {
    let src = page.group(a.from)?;
    let dst = page.group(a.to)?;
    let bad = |why: &str| Error::InconsistentTable(format!("d3 {} -> {}: {why}", a.from, a.to));
    if a.map == ArrowMap::Zero {
        return Ok(None);
    }
    let (Some(ks), Some(kt)) = (cyclic_exponent(&src), cyclic_exponent(&dst)) else {
        return Err(bad("source and target must be nonzero cyclic groups"));
    };
    let fits = match a.map {
        ArrowMap::Onto => ks == kt,
        ArrowMap::KernelDrop => ks > kt,
        ArrowMap::Zero => true,
    };
    if !fits {
        return Err(bad(&format!("{src} -> {dst} does not fit {:?}", a.map)));
    }
    summand_map(&src, &[(0, 0)], &dst).map(Some)
}

fn cyclic_exponent(g: &crate::fg_module::AbGroup) -> Option<u32> {
    match crate::ss::summands(g).as_slice() {
        [(_, Some(k))] => Some(*k),
        _ => None,
    }
}

/// Run the descent spectral sequence to collapse on `core`.
///
/// Odd primes collapse at `E_2` because the nonzero rows are too far apart.
/// At `p = 2` the `d_3` table is checked against the Leibniz rule, installed,
/// and `E_4` must carry a certified vanishing line.
pub fn ass_run(p: u64, core: &Window, data: &HeightOneData) -> Result<AssRun> {
    let run = ass_pages(p, core, data)?;
    if run.collapse.status != CollapseStatus::Collapsed {
        return Err(Error::Truncated(format!("descent spectral sequence at p = {p} did not certify collapse on the window")));
    }
    Ok(run)
}

/// Like [`ass_run`] but returns the pages whether or not collapse was certified.
pub fn ass_pages(p: u64, core: &Window, data: &HeightOneData) -> Result<AssRun> {
    let window = core.padded(ASS_PAD);
    let e2 = ass_e2(p, &window)?;
    let (collapse, arrows) = if p == 2 {
        let arrows = data.d3.arrows(&window);
        leibniz_check(&arrows, &e2)?;
        let mut install = |page: &Page| -> Result<Vec<(Bidegree, GroupMap)>> {
            if page.r() != data.d3.page {
                return Ok(Vec::new());
            }
            let mut out = Vec::new();
            for a in &arrows {
                // arrows touching truncated or out-of-window cells are left out;
                // the engine marks those cells as unknown
                let known = |b| matches!(page.cell(b), Some(crate::ss::Cell::Known(_)));
                if !known(a.from) || !known(a.to) {
                    continue;
                }
                if let Some(m) = arrow_map(page, a)? {
                    out.push((a.from, m));
                }
            }
            Ok(out)
        };
        (run_to_collapse(e2, &mut install, 6, core)?, arrows)
    } else {
        (run_to_collapse(e2, &mut NoDifferentials, 2, core)?, Vec::new())
    };
    Ok(AssRun {
        collapse,
        core: *core,
        arrows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn core() -> Window {
        Window::new(-16, 16, 8)
    }

    #[test]
    fn odd_prime_collapses_at_e2() {
        let data = HeightOneData::shipped().unwrap();
        let run = ass_run(3, &core(), &data).unwrap();
        assert_eq!(run.collapse.pages.len(), 1);
        assert_eq!(run.collapse.vanishing_line, Some(1));
        assert_eq!(run.einf().group(Bidegree::new(1, 12)).unwrap().to_string(), "Z/9");
    }

    #[test]
    fn two_collapses_at_e4() {
        let data = HeightOneData::shipped().unwrap();
        let run = ass_run(2, &core(), &data).unwrap();
        assert_eq!(run.einf().r(), 4);
        assert_eq!(run.collapse.vanishing_line, Some(3));
        let e4 = run.einf();
        let g = |s, t| e4.group(Bidegree::new(s, t)).unwrap().to_string();
        assert_eq!(g(1, 4), "Z/4");
        assert_eq!(g(1, 8), "Z/16");
        assert_eq!(g(3, 6), "Z/2");
        assert_eq!(g(3, 2), "0");
    }

    #[test]
    fn corrupted_table_is_rejected() {
        let mut data = HeightOneData::shipped().unwrap();
        data.d3.families[0].source = Bidegree::new(1, 2);
        assert!(matches!(ass_run(2, &core(), &data), Err(Error::InconsistentTable(_))));
    }
}
