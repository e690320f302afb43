//! The Picard spectral sequence `H^s(Z_p^×, π_t pic E) ⇒ π_{t−s} pic(L_{K(1)} S)`.

use serde::{Deserialize, Serialize};

use super::ass::{ass_pages, AssRun};
use super::data::{ArrowStatus, HeightOneData, TransportedArrow};
use super::ring::RingClass;
use super::summand_map;
use crate::cohomology::{cohomology_units, Coefficient};
use crate::error::{Error, Result};
use crate::fg_module::{AbGroup, FgZpModule, GroupMap};
use crate::ss::{
    assemble_stem, assemble_stem_filtered, run_to_collapse, summands, Bidegree, Cell, Page, Window,
};

/// Room for truncation to spread through the pages that are run.
pub const PICARD_PAD: i64 = 40;

/// Pages turned; every class in stems 0 and −1 of a window with `s ≤ 24`
/// has settled by then.
pub const PICARD_LAST_PAGE: i64 = 8;

/// Classes known to be permanent cycles: the unit row in filtration 0 (it
/// comes from the units of the `p`-complete sphere) and the algebraic part
/// of the 0-stem in filtrations 0 and 1.
pub const PERMANENT: [Bidegree; 3] = [Bidegree::new(0, 0), Bidegree::new(0, 1), Bidegree::new(1, 1)];

/// Coefficients of row `t`: `Pic(E) = Z/2`, the units `Z_p^×`, then `π_{t−1} E`.
pub fn picard_row(p: u64, t: i64) -> Option<Coefficient> {
    match t {
        0 if p == 2 => Some(Coefficient::TrivialZ2tor { k: 1 }),
        0 => Some(Coefficient::TrivialCyclic { m: 2 }),
        1 => Some(Coefficient::units(p)),
        t if t >= 2 && t % 2 == 1 => Some(Coefficient::twisted_zp((t - 1) / 2)),
        _ => None,
    }
}

pub fn picard_e2(p: u64, window: &Window) -> Result<Page> {
    let mut page = Page::new(p, 2, *window);
    for b in window.bidegrees() {
        if b.s < 0 {
            continue;
        }
        let Some(coeff) = picard_row(p, b.t) else {
            continue;
        };
        page.set(b, cohomology_units(p, &coeff, b.s as u32)?)?;
    }
    Ok(page)
}

/// A Picard differential the theorems do not determine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flag {
    pub r: i64,
    pub from: Bidegree,
    pub to: Bidegree,
    pub reason: String,
}

/// Additive differentials copied from the descent spectral sequence.
#[derive(Clone, Debug, Default)]
pub struct Imported {
    pub maps: Vec<(Bidegree, GroupMap)>,
    pub flagged: Vec<Flag>,
}

/// Copy `d_r` from descent row `t − 1` onto Picard row `t` where `r ≤ t − 1`
/// and both ends have the same groups on both sides. A descent differential
/// that cannot be copied is flagged instead; cells in `skip` are left alone.
pub fn import_differentials(ass: &AssRun, pic: &Page, r: i64, skip: &[Bidegree]) -> Result<Imported> {
    if r < 2 {
        return Err(Error::Unsupported("differentials start on E_2".into()));
    }
    let ass_page = ass.page(r);
    let mut out = Imported::default();
    if ass_page.r() != r {
        // the descent spectral sequence has collapsed
        return Ok(out);
    }
    for (b, cell) in pic.cells() {
        let Cell::Known(g) = cell else {
            continue;
        };
        if b.t < 2 || g.is_zero() || skip.contains(&b) {
            continue;
        }
        let a = Bidegree::new(b.s, b.t - 1);
        let Some(d) = ass_page.differential(a) else {
            continue;
        };
        let to = b.d_target(r);
        let flag = |reason: &str| Flag {
            r,
            from: b,
            to,
            reason: reason.into(),
        };
        if r > b.t - 1 {
            out.flagged.push(flag("page is past the range where descent differentials carry over"));
            continue;
        }
        let same = |x: Bidegree, y: Bidegree| match (pic.cell(x), ass_page.cell(y)) {
            (Some(Cell::Known(g)), Some(Cell::Known(h))) => g == h,
            _ => false,
        };
        if same(b, a) && same(to, a.d_target(r)) {
            out.maps.push((b, d.clone()));
        } else {
            out.flagged.push(flag("source or target survives differently in the two spectral sequences"));
        }
    }
    Ok(out)
}

/// `d_t(x) = d_t^{ASS}(x) + x²` for `x` on the Picard diagonal `(t, t)`,
/// that is descent bidegree `(t, t − 1)`.
pub fn nonlinear_differential(x: &RingClass, ass_d: &RingClass) -> Result<RingClass> {
    let b = x.bidegree();
    if b.s != b.t + 1 {
        return Err(Error::Unsupported(format!("{x} is not on the Picard diagonal")));
    }
    let sq = x.mul(x);
    if ass_d.is_zero() {
        return Ok(sq);
    }
    ass_d.add(&sq)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NonlinearEvaluation {
    pub at: Bidegree,
    pub x: RingClass,
    pub ass: RingClass,
    pub value: RingClass,
}

#[derive(Clone, Debug)]
pub struct PicardRun {
    pub pages: Vec<Page>,
    pub core: Window,
    pub flagged: Vec<Flag>,
    pub nonlinear: Vec<NonlinearEvaluation>,
    /// Transported arrows for this prime that were left open.
    pub undetermined: Vec<TransportedArrow>,
}

impl PicardRun {
    pub fn einf(&self) -> &Page {
        self.pages.last().expect("at least one page")
    }

    pub fn core_pages(&self) -> Vec<Page> {
        self.pages.iter().map(|p| p.restrict(self.core)).collect()
    }
}

fn transported_maps(page: &Page, arrows: &[&TransportedArrow]) -> Result<Vec<(Bidegree, GroupMap)>> {
    let mut by_source: std::collections::BTreeMap<Bidegree, Vec<(usize, usize)>> = Default::default();
    for a in arrows {
        by_source.entry(a.source.bidegree()).or_default().push((a.source.index, a.target.index));
    }
    let mut out = Vec::new();
    for (from, pairs) in by_source {
        let to = from.d_target(page.r());
        let (src, dst) = (page.group(from)?, page.group(to)?);
        out.push((from, summand_map(&src, &pairs, &dst)?));
    }
    Ok(out)
}

/// Run the Picard spectral sequence through `E_8` and require every cell
/// of `core` to be determined.
pub fn picard_run(p: u64, core: &Window, data: &HeightOneData) -> Result<PicardRun> {
    let run = picard_pages(p, core, data)?;
    if let Some(b) = run.einf().restrict(*core).cells().find(|(_, c)| **c == Cell::Truncated).map(|(b, _)| b) {
        return Err(Error::Truncated(format!("Picard cell {b} depends on data outside the window")));
    }
    Ok(run)
}

/// Like [`picard_run`] but keeps truncated cells instead of failing.
pub fn picard_pages(p: u64, core: &Window, data: &HeightOneData) -> Result<PicardRun> {
    let window = core.padded(PICARD_PAD);
    let ass_core = Window {
        t_min: window.t_min - 1,
        ..window
    };
    let ass = ass_pages(p, &ass_core, data)?;
    let e2 = picard_e2(p, &window)?;
    let transported: Vec<&TransportedArrow> = data.transported_for(p).collect();
    let mut flagged = Vec::new();
    let mut nonlinear = Vec::new();
    let mut install = |page: &Page| -> Result<Vec<(Bidegree, GroupMap)>> {
        let r = page.r();
        let known: Vec<&TransportedArrow> = transported
            .iter()
            .copied()
            .filter(|a| a.page == r && a.status == ArrowStatus::Known)
            .collect();
        let mut out = transported_maps(page, &known)?;
        let mut skip: Vec<Bidegree> = PERMANENT.to_vec();
        skip.extend(out.iter().map(|(b, _)| *b));
        // the nonlinear formula on the diagonal cell (r, r)
        let diag = Bidegree::new(r, r);
        if let (Some(x), Ok(g)) = (RingClass::at(Bidegree::new(r, r - 1)), page.group(diag)) {
            if p == 2 && !g.is_zero() {
                skip.push(diag);
                let ass_d = if r == 3 { x.d3() } else { RingClass::new(0, 0, 0) };
                let value = nonlinear_differential(&x, &ass_d)?;
                if !value.is_zero() {
                    let dst = page.group(diag.d_target(r))?;
                    out.push((diag, summand_map(&g, &[(0, 0)], &dst)?));
                }
                nonlinear.push(NonlinearEvaluation { at: diag, x, ass: ass_d, value });
            }
        }
        let imported = import_differentials(&ass, page, r, &skip)?;
        out.extend(imported.maps);
        flagged.extend(imported.flagged.into_iter().filter(|f| core.contains(f.from)));
        Ok(out)
    };
    let collapse = run_to_collapse(e2, &mut install, PICARD_LAST_PAGE, core)?;
    Ok(PicardRun {
        pages: collapse.pages,
        core: *core,
        flagged,
        nonlinear,
        undetermined: transported
            .into_iter()
            .filter(|a| a.status == ArrowStatus::Undetermined)
            .cloned()
            .collect(),
    })
}

/// Window used by [`extract_pic`] and [`brauer_bound`].
pub const GROUPS_WINDOW: Window = Window {
    t_min: -8,
    t_max: 16,
    s_min: 0,
    s_max: 12,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicGroups {
    pub pic: AbGroup,
    pub pic_alg: AbGroup,
    pub kappa: AbGroup,
}

/// `Pic₁` from the 0-stem at `E_∞`, with its algebraic part (filtrations 0
/// and 1) and the exotic part (filtration at least 2).
pub fn extract_pic(p: u64, data: &HeightOneData) -> Result<PicGroups> {
    let run = picard_run(p, &GROUPS_WINDOW, data)?;
    pic_from_run(&run, data)
}

pub fn pic_from_run(run: &PicardRun, data: &HeightOneData) -> Result<PicGroups> {
    let einf = run.einf().restrict(run.core);
    let ext = &data.extensions;
    Ok(PicGroups {
        pic: assemble_stem(&einf, 0, ext)?,
        pic_alg: assemble_stem_filtered(&einf, 0, ext, 0, 1)?,
        kappa: assemble_stem_filtered(&einf, 0, ext, 2, run.core.s_max)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrauerBound {
    /// Product of the orders of the `(−1)`-stem classes that survive or
    /// support an undetermined differential.
    pub upper_order: u128,
    /// The classes that survive whatever the open differentials do.
    pub certain_subquotient: AbGroup,
    pub unknown_differentials: Vec<TransportedArrow>,
}

pub fn brauer_bound(p: u64, data: &HeightOneData) -> Result<BrauerBound> {
    let run = picard_run(p, &GROUPS_WINDOW, data)?;
    brauer_from_run(&run)
}

pub fn brauer_from_run(run: &PicardRun) -> Result<BrauerBound> {
    let p = run.einf().prime();
    let einf = run.einf();
    let unknown: Vec<TransportedArrow> = run
        .undetermined
        .iter()
        .filter(|a| a.source.bidegree().stem() == -1)
        .cloned()
        .collect();
    let mut upper: u128 = 1;
    let mut certain = AbGroup::zero(p);
    for s in run.core.s_min..=run.core.s_max {
        let b = Bidegree::new(s, s - 1);
        let g = einf.group(b)?;
        if g.free_rank() > 0 {
            return Err(Error::Unsupported(format!("(−1)-stem cell {b} is not finite")));
        }
        upper *= g.torsion_order();
        let mut left = summands(&g);
        for a in unknown.iter().filter(|a| a.source.bidegree() == b) {
            let at_page = &run.pages[(a.page - 2) as usize];
            let gone = summands(&at_page.group(b)?)
                .get(a.source.index)
                .copied()
                .ok_or_else(|| Error::InconsistentTable(format!("no summand {} at {b}", a.source.index)))?;
            let i = left.iter().position(|x| *x == gone).ok_or_else(|| {
                Error::InconsistentTable(format!("open differential from {b} has no surviving source"))
            })?;
            left.remove(i);
        }
        for (q, k) in left {
            let m = match k {
                Some(k) => FgZpModule::cyclic(q, k),
                None => FgZpModule::free(q, 1),
            };
            certain = certain.direct_sum(&AbGroup::from_module(p, m)?)?;
        }
    }
    Ok(BrauerBound {
        upper_order: upper,
        certain_subquotient: certain,
        unknown_differentials: unknown,
    })
}
