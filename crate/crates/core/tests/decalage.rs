use klocal_core::fg_module::{homology_optional, AbGroup};
use klocal_core::ss::filtered::{decalage, decalage_check, decalage_check_corrupted, random_corpus, ss_of_filtration, ss_terms};
use klocal_core::ss::{turn_page, Bidegree, Page};

const COUNT: usize = 200;

fn log_order(g: &AbGroup) -> u32 {
    g.parts().map(|m| m.torsion_log_order()).sum()
}

fn same_groups(a: &Page, b: &Page) -> bool {
    let nonzero = |p: &Page| -> Vec<(Bidegree, AbGroup)> {
        p.cells()
            .filter_map(|(b, c)| c.group().filter(|g| !g.is_zero()).map(|g| (b, g.clone())))
            .collect()
    };
    nonzero(a) == nonzero(b)
}

#[test]
fn decalage_shifts_pages_on_random_complexes() {
    for p in [2u64, 3, 5] {
        for (i, fc) in random_corpus(p, 0xdec0 + p, COUNT).unwrap().iter().enumerate() {
            for r in 1..=4 {
                let rep = decalage_check(fc, r).unwrap();
                assert!(rep.passed(), "p={p} #{i} r={r}: {:?}", rep.mismatches);
            }
        }
    }
}

#[test]
fn shifted_decalage_is_caught() {
    let mut caught = 0;
    let mut nontrivial = 0;
    for p in [2u64, 3] {
        for fc in random_corpus(p, 0xbad + p, COUNT).unwrap() {
            let e2 = ss_terms(&fc, 2).unwrap();
            if e2.cells().count() == 0 {
                continue;
            }
            nontrivial += 1;
            if !decalage_check_corrupted(&fc, 1).unwrap().passed() {
                caught += 1;
            }
        }
    }
    assert!(nontrivial > 20);
    assert_eq!(caught, nontrivial);
}

#[test]
fn differentials_turn_to_next_page() {
    for p in [2u64, 3] {
        for fc in random_corpus(p, 0x7 + p, COUNT).unwrap() {
            for r in 1..=4 {
                let er = ss_of_filtration(&fc, r).unwrap();
                let next = ss_terms(&fc, r + 1).unwrap();
                assert!(same_groups(&turn_page(&er).unwrap(), &next), "p={p} r={r}");
            }
        }
    }
}

#[test]
fn abutment_has_the_order_of_cohomology() {
    for p in [2u64, 3, 5] {
        for fc in random_corpus(p, 0xab + p, COUNT).unwrap() {
            let (p_lo, p_hi) = fc.p_range();
            let einf = ss_terms(&fc, p_hi - p_lo + 2).unwrap();
            let (n_lo, n_hi) = fc.n_range();
            for n in n_lo..=n_hi {
                let h = homology_optional(&fc.module(n), fc.differential(n - 1), fc.differential(n)).unwrap();
                let total: u32 = (p_lo..=p_hi)
                    .filter_map(|f| einf.cell(Bidegree::new(f, f - n)).and_then(|c| c.group().cloned()))
                    .map(|g| log_order(&g))
                    .sum();
                assert_eq!(total, h.module.torsion_log_order(), "p={p} n={n}");
            }
            // décalage converges to the same thing
            let dec = decalage(&fc).unwrap();
            let (d_lo, d_hi) = dec.p_range();
            let dinf = ss_terms(&dec, d_hi - d_lo + 2).unwrap();
            let (a, b): (u32, u32) = (
                dinf.cells().filter_map(|(_, c)| c.group().map(log_order)).sum(),
                einf.cells().filter_map(|(_, c)| c.group().map(log_order)).sum(),
            );
            assert_eq!(a, b);
        }
    }
}

#[test]
fn corpus_has_higher_differentials() {
    let mut with_d2 = 0;
    let mut with_d3 = 0;
    for p in [2u64, 3, 5] {
        for fc in random_corpus(p, 0xdec0 + p, COUNT).unwrap() {
            let live = |r| ss_of_filtration(&fc, r).unwrap().differentials().count() > 0;
            with_d2 += live(2) as usize;
            with_d3 += live(3) as usize;
        }
    }
    eprintln!("corpus: {with_d2} with d_2, {with_d3} with d_3");
    assert!(with_d2 >= 10 && with_d3 >= 3);
}
