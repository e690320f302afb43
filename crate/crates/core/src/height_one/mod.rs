//! Height one: the descent and Picard spectral sequences of the
//! `K(1)`-local sphere, and the Picard and Brauer groups read off from them.

mod ass;
mod data;
mod picard;
mod ring;

pub use ass::{ass_e2, ass_pages, ass_run, leibniz_check, AssRun, ASS_PAD};
pub use data::{
    Arrow, ArrowMap, ArrowStatus, D3Family, D3Table, HeightOneData, SummandRef, TransportedArrow, DATA_DIR_ENV,
};
pub use picard::{
    brauer_bound, brauer_from_run, extract_pic, import_differentials, nonlinear_differential, pic_from_run,
    picard_e2, picard_pages, picard_row, picard_run, BrauerBound, Flag, Imported, NonlinearEvaluation, PicGroups, PicardRun,
    GROUPS_WINDOW, PERMANENT, PICARD_LAST_PAGE, PICARD_PAD,
};
pub use ring::RingClass;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fg_module::{AbGroup, GroupMap, ModuleMap};
use crate::ss::summands;

/// The map sending summand `i` of `src` to summand `j` of `dst` for each
/// `(i, j)`, as injectively as the orders allow; other summands go to zero.
pub(crate) fn summand_map(src: &AbGroup, pairs: &[(usize, usize)], dst: &AbGroup) -> Result<GroupMap> {
    let (ss, ds) = (summands(src), summands(dst));
    // position of each summand inside its prime's module
    let locate = |list: &[(u64, Option<u32>)], i: usize| -> Option<(u64, usize, Option<u32>)> {
        let (q, k) = *list.get(i)?;
        let pos = list[..i].iter().filter(|x| x.0 == q).count();
        Some((q, pos, k))
    };
    let mut rows: BTreeMap<u64, Vec<Vec<i64>>> = BTreeMap::new();
    for &(i, j) in pairs {
        let bad = |why: &str| Error::InconsistentTable(format!("summand {i} of {src} to summand {j} of {dst}: {why}"));
        let (q, a, ks) = locate(&ss, i).ok_or_else(|| bad("no such source summand"))?;
        let (q2, b, kt) = locate(&ds, j).ok_or_else(|| bad("no such target summand"))?;
        if q != q2 {
            return Err(bad("different primes"));
        }
        let entry = match (ks, kt) {
            (_, None) if ks.is_some() => return Err(bad("torsion cannot map nontrivially to a free summand")),
            (Some(ks), Some(kt)) => (q as i64).pow(kt.saturating_sub(ks)),
            _ => 1,
        };
        let (n_src, n_dst) = (src.component(q).num_generators(), dst.component(q).num_generators());
        let m = rows.entry(q).or_insert_with(|| vec![vec![0; n_src]; n_dst]);
        m[b][a] = entry;
    }
    let maps = rows
        .into_iter()
        .map(|(q, m)| ModuleMap::new(src.component(q), dst.component(q), m))
        .collect::<Result<Vec<_>>>()?;
    GroupMap::new(src.clone(), dst.clone(), maps)
}
