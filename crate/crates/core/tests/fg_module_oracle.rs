//! Kernel, cokernel and homology against brute-force enumeration of finite groups.

use std::collections::HashSet;

use klocal_core::fg_module::{cokernel, homology_at, kernel};
use klocal_core::{FgZpModule, ModuleMap};
use proptest::prelude::*;

type Elem = Vec<u64>;

fn elements(m: &FgZpModule) -> Vec<Elem> {
    let p = m.prime();
    let mut out = vec![vec![]];
    for &k in m.torsion_exponents() {
        let q = p.pow(k);
        out = out
            .into_iter()
            .flat_map(|e: Elem| {
                (0..q).map(move |v| {
                    let mut e = e.clone();
                    e.push(v);
                    e
                })
            })
            .collect();
    }
    out
}

fn apply(f: &ModuleMap, x: &[u64]) -> Elem {
    let p = f.prime() as i128;
    f.matrix()
        .iter()
        .zip(f.codomain().torsion_exponents())
        .map(|(row, &k)| {
            let q = p.pow(k);
            let s: i128 = row.iter().zip(x).map(|(&a, &b)| a as i128 * b as i128).sum();
            s.rem_euclid(q) as u64
        })
        .collect()
}

fn scale(m: &FgZpModule, x: &[u64], c: u64) -> Elem {
    let p = m.prime();
    x.iter()
        .zip(m.torsion_exponents())
        .map(|(&v, &k)| (v as u128 * c as u128 % p.pow(k) as u128) as u64)
        .collect()
}

/// Iso type of `S / T` from the counts `|{x ∈ S : p^i x ∈ T}| / |T|`.
fn iso_type(p: u64, ambient: &FgZpModule, s: &[Elem], t: &HashSet<Elem>) -> FgZpModule {
    let max_k = ambient.max_exponent();
    let mut logs = vec![0u32];
    for i in 1..=max_k {
        let c = s.iter().filter(|x| t.contains(&scale(ambient, x, p.pow(i)))).count();
        let log = ((c / t.len()) as f64).log(p as f64).round() as u32;
        logs.push(log);
    }
    // number of cyclic factors of exponent ≥ i is logs[i] − logs[i−1]
    let mut exps = Vec::new();
    for i in 1..=max_k as usize {
        let ge_i = logs[i] - logs[i - 1];
        let ge_next = if i < max_k as usize { logs[i + 1] - logs[i] } else { 0 };
        for _ in 0..(ge_i - ge_next) {
            exps.push(i as u32);
        }
    }
    FgZpModule::new(p, 0, exps).unwrap()
}

fn module_strategy(p: u64, max_log: u32) -> impl Strategy<Value = FgZpModule> {
    prop::collection::vec(1u32..=3, 0..=3).prop_filter_map("too large", move |mut e| {
        e.sort_unstable_by(|a, b| b.cmp(a));
        (e.iter().sum::<u32>() <= max_log).then(|| FgZpModule::new(p, 0, e).unwrap())
    })
}

/// A random well-defined map: entries into `Z/p^l` from a `Z/p^k` generator are multiples of `p^{l−k}`.
fn map_strategy(a: FgZpModule, b: FgZpModule) -> impl Strategy<Value = ModuleMap> {
    let p = a.prime();
    let n = a.num_generators() * b.num_generators();
    prop::collection::vec(0u64..1000, n).prop_map(move |raw| {
        let mut rows = vec![vec![0i64; a.num_generators()]; b.num_generators()];
        for (i, &l) in b.torsion_exponents().iter().enumerate() {
            for (j, &k) in a.torsion_exponents().iter().enumerate() {
                let step = p.pow(l.saturating_sub(k));
                rows[i][j] = ((raw[i * a.num_generators() + j] * step) % p.pow(l)) as i64;
            }
        }
        ModuleMap::new(a.clone(), b.clone(), rows).unwrap()
    })
}

fn pair_strategy() -> impl Strategy<Value = (u64, FgZpModule, FgZpModule)> {
    prop::sample::select(vec![2u64, 3, 5]).prop_flat_map(|p| {
        let max = if p == 2 { 6 } else if p == 3 { 4 } else { 3 };
        (Just(p), module_strategy(p, max), module_strategy(p, max))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernel_and_cokernel_match_enumeration(
        (f, _) in pair_strategy().prop_flat_map(|(_, a, b)| (map_strategy(a, b), Just(())))
    ) {
        let a = f.domain().clone();
        let b = f.codomain().clone();
        let p = a.prime();
        let ea = elements(&a);
        let ker: Vec<Elem> = ea.iter().filter(|x| apply(&f, x).iter().all(|&v| v == 0)).cloned().collect();
        let zero: HashSet<Elem> = [vec![0; a.num_generators()]].into_iter().collect();
        prop_assert_eq!(kernel(&f).unwrap(), iso_type(p, &a, &ker, &zero));

        let image: HashSet<Elem> = ea.iter().map(|x| apply(&f, x)).collect();
        prop_assert_eq!(cokernel(&f).unwrap(), iso_type(p, &b, &elements(&b), &image));
    }

    #[test]
    fn homology_matches_enumeration(
        (f, g) in pair_strategy().prop_flat_map(|(p, a, b)| {
            let max = if p == 2 { 6 } else if p == 3 { 4 } else { 3 };
            (map_strategy(a, b.clone()), module_strategy(p, max).prop_flat_map(move |c| map_strategy(b.clone(), c)))
        })
    ) {
        let b = f.codomain().clone();
        let p = b.prime();
        // force g ∘ f = 0 by replacing f with the zero map when needed
        let f = if g.compose_after(&f).unwrap().is_zero() { f } else { ModuleMap::zero(f.domain().clone(), b.clone()).unwrap() };
        let eb = elements(&b);
        let ker: Vec<Elem> = eb.iter().filter(|x| apply(&g, x).iter().all(|&v| v == 0)).cloned().collect();
        let image: HashSet<Elem> = elements(f.domain()).iter().map(|x| apply(&f, x)).collect();
        prop_assert_eq!(homology_at(&f, &g).unwrap(), iso_type(p, &b, &ker, &image));
    }
}

#[test]
fn zero_maps_are_neutral() {
    let m = FgZpModule::new(3, 1, vec![2, 1]).unwrap();
    let z = FgZpModule::zero(3);
    assert_eq!(cokernel(&ModuleMap::zero(z.clone(), m.clone()).unwrap()).unwrap(), m);
    assert_eq!(kernel(&ModuleMap::zero(m.clone(), z).unwrap()).unwrap(), m);
}

#[test]
fn exact_pair_has_zero_homology() {
    // Z_2 --2--> Z_2 --> Z/2
    let z2 = FgZpModule::free(2, 1);
    let f = ModuleMap::scalar(z2.clone(), 2).unwrap();
    let g = ModuleMap::new(z2, FgZpModule::cyclic(2, 1), vec![vec![1]]).unwrap();
    assert!(homology_at(&f, &g).unwrap().is_zero());
}

#[test]
fn free_modules_with_mixed_maps() {
    // Z_3^2 --[[3,0],[0,0]]--> Z_3^2: kernel Z_3, cokernel Z_3 ⊕ Z/3
    let a = FgZpModule::free(3, 2);
    let f = ModuleMap::new(a.clone(), a.clone(), vec![vec![3, 0], vec![0, 0]]).unwrap();
    assert_eq!(kernel(&f).unwrap(), FgZpModule::free(3, 1));
    assert_eq!(cokernel(&f).unwrap(), FgZpModule::new(3, 1, vec![1]).unwrap());
    // Z_5 --(1, 5)--> Z_5 ⊕ Z/25: kernel 0, cokernel Z/25 ⊕... the pair (1,5) splits off
    let b = FgZpModule::new(5, 1, vec![2]).unwrap();
    let g = ModuleMap::new(FgZpModule::free(5, 1), b, vec![vec![1], vec![5]]).unwrap();
    assert!(kernel(&g).unwrap().is_zero());
    assert_eq!(cokernel(&g).unwrap(), FgZpModule::cyclic(5, 2));
}
