//! Spectral sequences of filtered cochain complexes and Deligne's décalage.
//!
//! `F^p C^n` is stored by generators; `E_r^{p}` in degree `n` sits at the
//! Adams bidegree `(s, t) = (p, p − n)`, so `d_r` has the usual `(r, r − 1)`
//! shift. Everything for one page is computed at a single working precision.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Bidegree, Page, Window};
use crate::error::{Error, Result};
use crate::fg_module::matrix::{Matrix, Zpn};
use crate::fg_module::{quotient, with_precision_retry, zp_kernel, AbGroup, FgZpModule, Gens, GroupMap, ModuleMap, Quotient};
use crate::padic::max_precision;

/// A bounded cochain complex with a finite decreasing filtration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilteredComplex {
    prime: u64,
    n_min: i64,
    modules: Vec<FgZpModule>,
    /// `diffs[i]: C^{n_min+i} → C^{n_min+i+1}`.
    diffs: Vec<ModuleMap>,
    /// `F^p = C` for `p ≤ p_min`.
    p_min: i64,
    /// `steps[k][i]`: generators of `F^{p_min+1+k} C^{n_min+i}`, as coordinate
    /// vectors. `F^p = 0` past the last step.
    steps: Vec<Vec<Vec<Vec<i64>>>>,
}

impl FilteredComplex {
    /// Validates `d² = 0`, `d(F^p) ⊆ F^p` and `F^{p+1} ⊆ F^p`.
    pub fn new(
        prime: u64,
        n_min: i64,
        modules: Vec<FgZpModule>,
        diffs: Vec<ModuleMap>,
        p_min: i64,
        steps: Vec<Vec<Vec<Vec<i64>>>>,
    ) -> Result<Self> {
        if diffs.len() + 1 != modules.len().max(1) {
            return Err(Error::Shape("need one differential between consecutive degrees".into()));
        }
        for (i, d) in diffs.iter().enumerate() {
            if *d.domain() != modules[i] || *d.codomain() != modules[i + 1] {
                return Err(Error::Shape(format!("differential {i} does not match the modules")));
            }
            if i + 1 < diffs.len() && !diffs[i + 1].compose_after(d)?.is_zero() {
                return Err(Error::NotAComplex);
            }
        }
        for step in &steps {
            if step.len() != modules.len() {
                return Err(Error::Shape("filtration step must list every degree".into()));
            }
            for (i, gens) in step.iter().enumerate() {
                if gens.iter().any(|g| g.len() != modules[i].num_generators()) {
                    return Err(Error::Shape("filtration generator of the wrong length".into()));
                }
            }
        }
        let fc = FilteredComplex {
            prime,
            n_min,
            modules,
            diffs,
            p_min,
            steps,
        };
        fc.validate()?;
        Ok(fc)
    }

    /// Trivial filtration: `F^0 = C`, `F^1 = 0`.
    pub fn trivial(prime: u64, n_min: i64, modules: Vec<FgZpModule>, diffs: Vec<ModuleMap>) -> Result<Self> {
        Self::new(prime, n_min, modules, diffs, 0, Vec::new())
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn n_range(&self) -> (i64, i64) {
        (self.n_min, self.n_min + self.modules.len() as i64 - 1)
    }

    /// `(p_min, p_max)` with `F^{p_max+1} = 0`.
    pub fn p_range(&self) -> (i64, i64) {
        (self.p_min, self.p_min + self.steps.len() as i64)
    }

    pub fn module(&self, n: i64) -> FgZpModule {
        self.index(n).map_or_else(|| FgZpModule::zero(self.prime), |i| self.modules[i].clone())
    }

    pub fn differential(&self, n: i64) -> Option<&ModuleMap> {
        self.index(n).and_then(|i| self.diffs.get(i))
    }

    fn index(&self, n: i64) -> Option<usize> {
        let i = n - self.n_min;
        (0..self.modules.len() as i64).contains(&i).then_some(i as usize)
    }

    /// Generators of `F^p C^n`.
    pub fn filtration_gens(&self, p: i64, n: i64) -> Vec<Vec<i64>> {
        let Some(i) = self.index(n) else {
            return Vec::new();
        };
        if p <= self.p_min {
            let g = self.modules[i].num_generators();
            return (0..g).map(|j| (0..g).map(|k| i64::from(j == k)).collect()).collect();
        }
        let k = (p - self.p_min - 1) as usize;
        self.steps.get(k).map_or_else(Vec::new, |s| s[i].clone())
    }

    fn working_precision(&self) -> u32 {
        let k = self.modules.iter().map(|m| m.max_exponent()).max().unwrap_or(0);
        (2 * k + 12).min(max_precision(self.prime))
    }

    fn validate(&self) -> Result<()> {
        with_precision_retry(self.prime, self.working_precision(), |n| {
            let cx = Ctx::new(self, n)?;
            let (n_lo, n_hi) = self.n_range();
            let (p_lo, p_hi) = self.p_range();
            for deg in n_lo..=n_hi {
                for p in p_lo..=p_hi {
                    let f = cx.filt(p, deg);
                    // F^{p+1} ⊆ F^p and d(F^p) ⊆ F^p
                    cx.nested(&cx.filt(p + 1, deg), &f, deg)?;
                    if deg < n_hi {
                        let df = cx.d(deg).mul(&f, &cx.ring);
                        cx.nested(&df, &cx.filt(p, deg + 1), deg + 1)?;
                    }
                }
            }
            Ok(())
        })
    }
}

/// Matrices of a filtered complex at one precision.
struct Ctx<'a> {
    fc: &'a FilteredComplex,
    ring: Zpn,
}

impl<'a> Ctx<'a> {
    fn new(fc: &'a FilteredComplex, n: u32) -> Result<Self> {
        Ok(Ctx {
            fc,
            ring: Zpn::new(fc.prime, n)?,
        })
    }

    fn dim(&self, n: i64) -> usize {
        self.fc.module(n).num_generators()
    }

    fn rel(&self, n: i64) -> Matrix {
        self.fc.module(n).relations(&self.ring)
    }

    fn filt(&self, p: i64, n: i64) -> Matrix {
        let gens = self.fc.filtration_gens(p, n);
        let cols: Vec<Vec<u64>> = gens.iter().map(|g| g.iter().map(|&v| self.ring.from_i64(v)).collect()).collect();
        Matrix::from_cols(&cols, self.dim(n))
    }

    /// `d: C^n → C^{n+1}` on coordinates (zero outside the support).
    fn d(&self, n: i64) -> Matrix {
        match self.fc.differential(n) {
            Some(d) => d.to_matrix(&self.ring),
            None => Matrix::zeros(self.dim(n + 1), self.dim(n)),
        }
    }

    /// Fail unless `span(a) ⊆ span(b) + relations` in degree `n`.
    fn nested(&self, a: &Matrix, b: &Matrix, n: i64) -> Result<()> {
        let rel = self.rel(n);
        let s = Gens {
            m: b.hconcat(&rel),
            prec: self.ring.n,
        };
        let t = Gens {
            m: a.hconcat(&rel),
            prec: self.ring.n,
        };
        quotient(&s, &t, &self.ring).map(|_| ()).map_err(|e| match e {
            Error::Shape(_) => Error::Shape(format!("filtration is not nested or not d-stable in degree {n}")),
            other => other,
        })
    }

    /// `Z_r^{p,n} = {x ∈ F^p C^n : dx ∈ F^{p+r} C^{n+1}}`, relations included.
    fn cycles(&self, r: i64, p: i64, n: i64) -> Result<Gens> {
        let a = self.filt(p, n).hconcat(&self.rel(n));
        if self.dim(n + 1) == 0 || r <= 0 {
            return Ok(Gens {
                m: a,
                prec: self.ring.n,
            });
        }
        let b = self.filt(p + r, n + 1).hconcat(&self.rel(n + 1));
        let da = self.d(n).mul(&a, &self.ring);
        let k = zp_kernel(&da.hconcat(&b.neg(&self.ring)), &self.ring)?;
        let top = k.m.select_rows(0..a.cols());
        Ok(Gens {
            m: a.mul(&top, &self.ring).hconcat(&self.rel(n)),
            prec: k.prec,
        })
    }

    /// `E_r^{p}` in degree `n` as `Z_r^p / (Z_{r−1}^{p+1} + d Z_{r−1}^{p−r+1})`.
    fn term(&self, r: i64, p: i64, n: i64) -> Result<Quotient> {
        let s = self.cycles(r, p, n)?;
        let up = self.cycles(r - 1, p + 1, n)?;
        let below = self.cycles(r - 1, p - r + 1, n - 1)?;
        let db = self.d(n - 1).mul(&below.m, &self.ring);
        let t = Gens {
            m: up.m.hconcat(&db),
            prec: up.prec.min(below.prec),
        };
        quotient(&s, &t, &self.ring)
    }
}

fn bidegree(p: i64, n: i64) -> Bidegree {
    Bidegree::new(p, p - n)
}

fn page_window(fc: &FilteredComplex) -> Window {
    let (n_lo, n_hi) = fc.n_range();
    let (p_lo, p_hi) = fc.p_range();
    Window {
        t_min: p_lo - n_hi,
        t_max: p_hi - n_lo,
        s_min: p_lo,
        s_max: p_hi,
    }
}

fn build_page(fc: &FilteredComplex, r: i64, with_diffs: bool) -> Result<Page> {
    if r < 0 {
        return Err(Error::Shape("page index must be nonnegative".into()));
    }
    let p = fc.prime;
    with_precision_retry(p, fc.working_precision(), |prec| {
        let cx = Ctx::new(fc, prec)?;
        let mut page = Page::new(p, r, page_window(fc)).with_complete_support();
        let (n_lo, n_hi) = fc.n_range();
        let (p_lo, p_hi) = fc.p_range();
        let mut terms = std::collections::BTreeMap::new();
        for n in n_lo..=n_hi {
            for f in p_lo..=p_hi {
                let q = cx.term(r, f, n)?;
                page.set(bidegree(f, n), AbGroup::from_module(p, q.module.clone())?)?;
                terms.insert((f, n), q);
            }
        }
        if with_diffs && r >= 1 {
            for ((f, n), q) in &terms {
                let Some(target) = terms.get(&(f + r, n + 1)) else {
                    continue;
                };
                if q.module.is_zero() || target.module.is_zero() {
                    continue;
                }
                let images = cx.d(*n).mul(q.lifts(), &cx.ring);
                let cols = (0..images.cols()).map(|j| target.coords(&images.col(j))).collect::<Result<Vec<_>>>()?;
                let m = Matrix::from_cols(&cols, target.module.num_generators());
                let map = ModuleMap::from_matrix(q.module.clone(), target.module.clone(), &m)?;
                page.set_differential(bidegree(*f, *n), GroupMap::from_module_map(p, map)?)?;
            }
        }
        Ok(page)
    })
}

/// `E_r` with its differential `d_r` installed (`d_0` is not recorded).
pub fn ss_of_filtration(fc: &FilteredComplex, r: i64) -> Result<Page> {
    build_page(fc, r, true)
}

/// Groups of `E_r` only.
pub fn ss_terms(fc: &FilteredComplex, r: i64) -> Result<Page> {
    build_page(fc, r, false)
}

/// `Dec(F)^p C^n = {x ∈ F^{p+n} C^n : dx ∈ F^{p+n+1} C^{n+1}}`.
pub fn decalage(fc: &FilteredComplex) -> Result<FilteredComplex> {
    decalage_shifted(fc, 0)
}

fn decalage_shifted(fc: &FilteredComplex, shift: i64) -> Result<FilteredComplex> {
    let (n_lo, n_hi) = fc.n_range();
    let (p_lo, p_hi) = fc.p_range();
    let lo = p_lo - n_hi - 1;
    let hi = p_hi - n_lo;
    let prec = max_precision(fc.prime);
    let cx = Ctx::new(fc, prec)?;
    let mut steps = Vec::new();
    for q in lo + 1..=hi {
        let mut per_degree = Vec::new();
        for n in n_lo..=n_hi {
            let z = cx.cycles(1, q + shift + n, n)?;
            // drop the relation columns, which are implicit
            let keep = z.m.cols() - cx.rel(n).cols();
            let gens = (0..keep)
                .map(|j| z.m.col(j).into_iter().map(|v| v as i64).collect())
                .filter(|g: &Vec<i64>| g.iter().any(|&v| v != 0))
                .collect();
            per_degree.push(gens);
        }
        steps.push(per_degree);
    }
    FilteredComplex::new(fc.prime, fc.n_min, fc.modules.clone(), fc.diffs.clone(), lo, steps)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub s: i64,
    pub t: i64,
    pub decalage: AbGroup,
    pub original: AbGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecalageReport {
    pub r: i64,
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl DecalageReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare `E_r(Dec F)` at `(s, t)` with `E_{r+1}(F)` at `(2s − t, s)`.
pub fn decalage_check(fc: &FilteredComplex, r: i64) -> Result<DecalageReport> {
    compare_with(&decalage(fc)?, fc, r)
}

/// Negative control: décalage with the filtration index shifted by one.
pub fn decalage_check_corrupted(fc: &FilteredComplex, r: i64) -> Result<DecalageReport> {
    compare_with(&decalage_shifted(fc, 1)?, fc, r)
}

fn compare_with(dec: &FilteredComplex, fc: &FilteredComplex, r: i64) -> Result<DecalageReport> {
    let ed = ss_terms(dec, r)?;
    let ef = ss_terms(fc, r + 1)?;
    let group = |page: &Page, b: Bidegree| page.cell(b).and_then(|c| c.group().cloned()).unwrap_or_else(|| AbGroup::zero(fc.prime));
    let mut keys: Vec<Bidegree> = ed.cells().map(|(b, _)| b).collect();
    // (a, b) on the original side comes from (b, 2b − a) on the décalage side
    keys.extend(ef.cells().map(|(b, _)| Bidegree::new(b.t, 2 * b.t - b.s)));
    keys.sort();
    keys.dedup();
    let mut mismatches = Vec::new();
    for b in &keys {
        let lhs = group(&ed, *b);
        let rhs = group(&ef, Bidegree::new(2 * b.s - b.t, b.s));
        if lhs != rhs {
            mismatches.push(Mismatch {
                s: b.s,
                t: b.t,
                decalage: lhs,
                original: rhs,
            });
        }
    }
    Ok(DecalageReport {
        r,
        checked: keys.len(),
        mismatches,
    })
}

/// Shape limits for [`random_filtered_complex`].
#[derive(Clone, Copy, Debug)]
pub struct RandomShape {
    /// Largest `log_p` of the order of any `C^n`.
    pub max_log_order: u32,
    pub max_width: usize,
    pub max_steps: usize,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape {
            max_log_order: 4,
            max_width: 6,
            max_steps: 5,
        }
    }
}

/// A finite filtered complex built from spheres and disks, twisted by random
/// automorphisms, with a random `d`-stable filtration.
pub fn random_filtered_complex(p: u64, rng: &mut ChaCha8Rng, shape: RandomShape) -> Result<FilteredComplex> {
    let width = rng.gen_range(1..=shape.max_width);
    let mut budget = vec![shape.max_log_order; width];
    // summands per degree: (exponent, piece id); pieces: (degree, exponent, target exponent)
    let mut summands: Vec<Vec<(u32, usize)>> = vec![Vec::new(); width];
    let mut disks: Vec<(usize, usize, usize)> = Vec::new();
    let mut next_id = 0;
    for _ in 0..rng.gen_range(1..=2 * width + 2) {
        let n = rng.gen_range(0..width);
        let k = rng.gen_range(1..=3u32);
        if k > budget[n] {
            continue;
        }
        let disk = n + 1 < width && rng.gen_bool(0.6);
        if disk {
            let l = rng.gen_range(1..=3u32);
            if l > budget[n + 1] {
                continue;
            }
            budget[n] -= k;
            budget[n + 1] -= l;
            summands[n].push((k, next_id));
            summands[n + 1].push((l, next_id + 1));
            disks.push((n, next_id, next_id + 1));
            next_id += 2;
        } else {
            budget[n] -= k;
            summands[n].push((k, next_id));
            next_id += 1;
        }
    }
    // canonical generator order: exponents descending
    for s in summands.iter_mut() {
        s.sort_by(|a, b| b.0.cmp(&a.0));
    }
    let modules: Vec<FgZpModule> = summands
        .iter()
        .map(|s| FgZpModule::new(p, 0, s.iter().map(|x| x.0).collect()))
        .collect::<Result<_>>()?;
    let pos = |n: usize, id: usize| summands[n].iter().position(|x| x.1 == id).expect("placed");
    let mut diffs = Vec::new();
    for n in 0..width.saturating_sub(1) {
        let mut rows = vec![vec![0i64; summands[n].len()]; summands[n + 1].len()];
        for &(deg, a, b) in disks.iter().filter(|d| d.0 == n) {
            let (i, j) = (pos(n + 1, b), pos(deg, a));
            let (k, l) = (summands[n].get(j).expect("source").0, summands[n + 1][i].0);
            rows[i][j] = p.pow(l.saturating_sub(k)) as i64;
        }
        diffs.push(ModuleMap::new(modules[n].clone(), modules[n + 1].clone(), rows)?);
    }
    // conjugate by random automorphisms
    let autos: Vec<(ModuleMap, ModuleMap)> = modules.iter().map(|m| random_automorphism(m, rng)).collect::<Result<_>>()?;
    let diffs: Vec<ModuleMap> = diffs
        .iter()
        .enumerate()
        .map(|(n, d)| autos[n + 1].0.compose_after(&d.compose_after(&autos[n].1)?))
        .collect::<Result<_>>()?;

    let steps_total = rng.gen_range(1..=shape.max_steps);
    let mut steps: Vec<Vec<Vec<Vec<i64>>>> = vec![vec![Vec::new(); width]; steps_total - 1];
    // F^p for p = steps_total − 1 down to 1, degrees ascending
    for k in (0..steps_total - 1).rev() {
        for n in 0..width {
            let mut gens: Vec<Vec<i64>> = if k + 1 < steps.len() { steps[k + 1][n].clone() } else { Vec::new() };
            if n > 0 {
                for g in steps[k][n - 1].clone() {
                    gens.push(apply(&diffs[n - 1], &g));
                }
            }
            for _ in 0..rng.gen_range(0..=2) {
                if modules[n].is_zero() {
                    break;
                }
                let v = modules[n]
                    .torsion_exponents()
                    .iter()
                    .map(|&e| rng.gen_range(0..p.pow(e)) as i64)
                    .collect();
                gens.push(v);
            }
            gens.retain(|g| g.iter().any(|&v| v != 0));
            steps[k][n] = gens;
        }
    }
    FilteredComplex::new(p, 0, modules, diffs, 0, steps)
}

fn apply(f: &ModuleMap, x: &[i64]) -> Vec<i64> {
    let p = f.prime() as i128;
    f.matrix()
        .iter()
        .zip(f.codomain().torsion_exponents())
        .map(|(row, &k)| {
            let s: i128 = row.iter().zip(x).map(|(&a, &b)| a as i128 * b as i128).sum();
            s.rem_euclid(p.pow(k)) as i64
        })
        .collect()
}

/// A random automorphism of a finite module and its inverse.
fn random_automorphism(m: &FgZpModule, rng: &mut ChaCha8Rng) -> Result<(ModuleMap, ModuleMap)> {
    let p = m.prime();
    let exps = m.torsion_exponents().to_vec();
    let g = exps.len();
    let mut a = ModuleMap::identity(m.clone());
    let mut inv = ModuleMap::identity(m.clone());
    for _ in 0..2 * g {
        if g < 2 {
            break;
        }
        let (i, j) = (rng.gen_range(0..g), rng.gen_range(0..g));
        if i == j {
            continue;
        }
        // generator j ↦ e_j + c·e_i needs ν(c) + k_j ≥ k_i
        let c = rng.gen_range(1..p.pow(exps[i]).max(2)) as i64 * p.pow(exps[i].saturating_sub(exps[j])) as i64;
        let mut e = vec![vec![0i64; g]; g];
        let mut e_inv = vec![vec![0i64; g]; g];
        for d in 0..g {
            e[d][d] = 1;
            e_inv[d][d] = 1;
        }
        e[i][j] = c;
        e_inv[i][j] = -c;
        let e = ModuleMap::new(m.clone(), m.clone(), e)?;
        let e_inv = ModuleMap::new(m.clone(), m.clone(), e_inv)?;
        a = e.compose_after(&a)?;
        inv = inv.compose_after(&e_inv)?;
    }
    Ok((a, inv))
}

/// The seeded corpus used by tests and the CLI.
pub fn random_corpus(p: u64, seed: u64, count: usize) -> Result<Vec<FilteredComplex>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_filtered_complex(p, &mut rng, RandomShape::default())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u64, k: u32) -> FgZpModule {
        FgZpModule::cyclic(p, k)
    }

    /// `Z/4 --2--> Z/4 --2--> Z/4` in degrees 0..2: H = Z/2, 0, Z/2.
    fn three_term() -> (Vec<FgZpModule>, Vec<ModuleMap>) {
        let m = z(2, 2);
        let two = ModuleMap::scalar(m.clone(), 2).unwrap();
        (vec![m.clone(), m.clone(), m], vec![two.clone(), two])
    }

    #[test]
    fn trivial_filtration_gives_cohomology() {
        let (mods, diffs) = three_term();
        let fc = FilteredComplex::trivial(2, 0, mods, diffs).unwrap();
        let e1 = ss_terms(&fc, 1).unwrap();
        let h: Vec<String> = (0..3).map(|n| e1.group(bidegree(0, n)).unwrap().to_string()).collect();
        assert_eq!(h, ["Z/2", "0", "Z/2"]);
        assert_eq!(ss_terms(&fc, 0).unwrap().group(bidegree(0, 1)).unwrap().to_string(), "Z/4");
    }

    #[test]
    fn trivial_filtration_decalage_is_truncation() {
        let (mods, diffs) = three_term();
        let fc = FilteredComplex::trivial(2, 0, mods, diffs).unwrap();
        let dec = decalage(&fc).unwrap();
        // Dec^{-n} C^n = Z^n = 2·Z/4, Dec^{-n+1} C^n = 0
        assert_eq!(dec.filtration_gens(-1, 1).len(), 1);
        for r in 1..=3 {
            assert!(decalage_check(&fc, r).unwrap().passed(), "r = {r}");
        }
    }

    #[test]
    fn reversed_reindexing_fails_on_trivial_filtration() {
        // E_{r+1}(Dec) at (2s − t, s) against E_r(F) at (s, t)
        let (mods, diffs) = three_term();
        let fc = FilteredComplex::trivial(2, 0, mods, diffs).unwrap();
        let dec = decalage(&fc).unwrap();
        let (ed, ef) = (ss_terms(&dec, 2).unwrap(), ss_terms(&fc, 1).unwrap());
        let b = bidegree(0, 2);
        let moved = Bidegree::new(2 * b.s - b.t, b.s);
        assert_ne!(ed.cell(moved).map(|c| c.is_zero()), Some(false));
        assert!(!ef.group(b).unwrap().is_zero());
    }

    #[test]
    fn two_step_filtration_long_exact_sequence() {
        // C: Z/4 --1--> Z/4 (acyclic), F^1 = 2·C in degree 1 only
        let m = z(2, 2);
        let id = ModuleMap::identity(m.clone());
        let fc = FilteredComplex::new(2, 0, vec![m.clone(), m.clone()], vec![id], 0, vec![vec![vec![], vec![vec![2]]]])
            .unwrap();
        // E_1: gr^0 = [Z/4 → Z/2] gives Z/2 in degree 0; gr^1 = [0 → Z/2] gives Z/2 in degree 1
        let e1 = ss_of_filtration(&fc, 1).unwrap();
        assert_eq!(e1.group(bidegree(0, 0)).unwrap().to_string(), "Z/2");
        assert_eq!(e1.group(bidegree(1, 1)).unwrap().to_string(), "Z/2");
        // d_1 connects them and kills both, matching H(C) = 0
        assert!(e1.differential(bidegree(0, 0)).is_some());
        let e2 = ss_terms(&fc, 2).unwrap();
        assert_eq!(e2.cells().count(), 0);
    }

    #[test]
    fn free_complex() {
        // Z_2 --2--> Z_2 with F^1 C^1 = 2·Z_2: d_1 is an iso Z_2 → Z_2, leaving H^1 = Z/2
        let m = FgZpModule::free(2, 1);
        let two = ModuleMap::scalar(m.clone(), 2).unwrap();
        let fc = FilteredComplex::new(2, 0, vec![m.clone(), m], vec![two], 0, vec![vec![vec![], vec![vec![2]]]]).unwrap();
        let e1 = ss_of_filtration(&fc, 1).unwrap();
        assert_eq!(e1.group(bidegree(0, 0)).unwrap().to_string(), "Z_2");
        assert_eq!(e1.group(bidegree(1, 1)).unwrap().to_string(), "Z_2");
        let e2 = ss_terms(&fc, 2).unwrap();
        let left: Vec<_> = e2.cells().map(|(b, c)| (b, c.group().unwrap().to_string())).collect();
        assert_eq!(left, [(bidegree(0, 1), "Z/2".to_string())]);
        for r in 1..=3 {
            assert!(decalage_check(&fc, r).unwrap().passed());
        }
    }

    #[test]
    fn zero_complex() {
        let fc = FilteredComplex::trivial(3, 0, vec![FgZpModule::zero(3)], vec![]).unwrap();
        let dec = decalage(&fc).unwrap();
        assert_eq!(ss_terms(&dec, 1).unwrap().cells().count(), 0);
    }

    #[test]
    fn filtration_must_be_stable() {
        let m = z(3, 1);
        let id = ModuleMap::identity(m.clone());
        // F^1 contains degree 0 but not its image
        let bad = FilteredComplex::new(3, 0, vec![m.clone(), m], vec![id], 0, vec![vec![vec![vec![1]], vec![]]]);
        assert!(bad.is_err());
    }
}
