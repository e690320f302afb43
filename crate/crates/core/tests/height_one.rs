use klocal_core::height_one::*;
use klocal_core::padic::int_valuation;
use klocal_core::ss::{Bidegree, Window};

fn data() -> HeightOneData {
    HeightOneData::shipped().unwrap()
}

/// Closed form of the descent `E_2` term.
fn expected_e2(p: u64, b: Bidegree) -> String {
    let (s, t) = (b.s, b.t);
    if s < 0 || t % 2 != 0 {
        return "0".into();
    }
    let torsion = |v: u32| format!("Z/{}", p.pow(v + 1));
    if p != 2 {
        return match s {
            0 | 1 if t == 0 => format!("Z_{p}"),
            1 if t % (2 * (p as i64 - 1)) == 0 => torsion(int_valuation(p, t as i128).unwrap()),
            _ => "0".into(),
        };
    }
    match (s, t.rem_euclid(4)) {
        (0, _) if t == 0 => "Z_2".into(),
        (0, _) => "0".into(),
        (1, 0) if t == 0 => "Z_2".into(),
        (1, 0) => torsion(int_valuation(2, t as i128).unwrap()),
        _ => "Z/2".into(),
    }
}

#[test]
fn descent_e2_matches_the_closed_form() {
    let w = Window::new(-24, 24, 10);
    for p in [2u64, 3, 5, 7] {
        let page = ass_e2(p, &w).unwrap();
        for b in w.bidegrees() {
            assert_eq!(page.group(b).unwrap().to_string(), expected_e2(p, b), "p={p} at {b}");
        }
    }
}

#[test]
fn odd_descent_samples() {
    let w = Window::new(-16, 16, 8);
    let run = ass_run(3, &w, &data()).unwrap();
    let einf = run.einf();
    assert_eq!(einf.r(), 2);
    // stems 3, 7, 11
    for (t, g) in [(4, "Z/3"), (8, "Z/3"), (12, "Z/9")] {
        assert_eq!(einf.group(Bidegree::new(1, t)).unwrap().to_string(), g);
    }
}

#[test]
fn picard_e2_rows() {
    let w = Window::new(-8, 8, 6);
    let p3 = picard_e2(3, &w).unwrap();
    assert_eq!(p3.group(Bidegree::new(2, 1)).unwrap().to_string(), "Z/2");
    assert_eq!(p3.group(Bidegree::new(0, 0)).unwrap().to_string(), "Z/2");
    assert_eq!(p3.group(Bidegree::new(4, 0)).unwrap().to_string(), "Z/2");
    assert_eq!(p3.group(Bidegree::new(1, 1)).unwrap().to_string(), "Z_3 ⊕ Z/2");
    let p2 = picard_e2(2, &w).unwrap();
    for (s, t, g) in [
        (0, 0, "Z/2"),
        (3, 0, "Z/2 ⊕ Z/2"),
        (0, 1, "Z_2 ⊕ Z/2"),
        (1, 1, "Z_2 ⊕ Z/2 ⊕ Z/2"),
        (2, 1, "Z/2 ⊕ Z/2 ⊕ Z/2"),
        (2, 2, "0"),
        (3, 3, "Z/2"),
    ] {
        assert_eq!(p2.group(Bidegree::new(s, t)).unwrap().to_string(), g, "({s},{t})");
    }
}

#[test]
fn units_row_is_permanent() {
    for p in [2u64, 3] {
        let run = picard_run(p, &GROUPS_WINDOW, &data()).unwrap();
        for page in &run.pages {
            for b in PERMANENT {
                assert!(page.differential(b).map_or(true, |d| d.is_zero()), "p={p} d_{} from {b}", page.r());
            }
        }
        assert_eq!(run.pages[0].group(Bidegree::new(0, 1)).unwrap(), run.einf().group(Bidegree::new(0, 1)).unwrap());
    }
}

#[test]
fn powers_of_x_are_not_nilpotent() {
    let w = Window::new(-4, 24, 36);
    let e2 = ass_e2(2, &w).unwrap();
    for j in 1..=12u32 {
        let xj = RingClass::x().pow(j);
        assert!(!xj.is_zero());
        let b = xj.bidegree();
        assert_eq!(b, Bidegree::new(3 * j as i64, 2 * j as i64));
        assert_eq!(RingClass::at(b), Some(xj));
        assert_eq!(e2.group(b).unwrap().to_string(), "Z/2");
    }
}

#[test]
fn nonlinear_rule() {
    let x = RingClass::x();
    assert!(nonlinear_differential(&x, &x.d3()).unwrap().is_zero());
    assert_eq!(x.d3(), x.mul(&x));
    let zero = RingClass::new(0, 0, 0);
    assert_eq!(nonlinear_differential(&x, &zero).unwrap(), x.mul(&x));
    assert!(nonlinear_differential(&RingClass::eta(), &zero).is_err());

    let run = picard_run(2, &GROUPS_WINDOW, &data()).unwrap();
    let at_33: Vec<_> = run.nonlinear.iter().filter(|n| n.at == Bidegree::new(3, 3)).collect();
    assert_eq!(at_33.len(), 1);
    assert!(at_33[0].value.is_zero());
}

#[test]
fn imports_stay_in_range() {
    let run = picard_run(2, &GROUPS_WINDOW, &data()).unwrap();
    assert!(!run.flagged.is_empty());
    for f in &run.flagged {
        assert_eq!(f.to, f.from.d_target(f.r));
    }
    // row 3 at r = 3 is past t − 1
    assert!(run.flagged.iter().any(|f| f.from == Bidegree::new(4, 3) && f.r == 3));
    let e3 = &run.pages[1];
    assert!(e3.differentials().all(|(b, _)| b.t < 2 || b.t - 1 >= 3 || b == Bidegree::new(3, 3)));
}

#[test]
fn picard_groups() {
    let data = data();
    let two = extract_pic(2, &data).unwrap();
    assert_eq!(two.pic.to_string(), "Z_2 ⊕ Z/2 ⊕ Z/4");
    assert_eq!(two.pic_alg.to_string(), "Z_2 ⊕ Z/2 ⊕ Z/2");
    assert_eq!(two.kappa.to_string(), "Z/2");
    for (p, g) in [(3u64, "Z_3 ⊕ Z/4"), (5, "Z_5 ⊕ Z/8"), (7, "Z_7 ⊕ Z/12")] {
        let r = extract_pic(p, &data).unwrap();
        assert_eq!(r.pic.to_string(), g, "p={p}");
        assert_eq!(r.pic, r.pic_alg);
        assert!(r.kappa.is_zero());
    }
}

#[test]
fn brauer_bounds() {
    let data = data();
    for (p, mu) in [(3u64, "Z/2"), (5, "Z/4"), (7, "Z/6")] {
        let b = brauer_bound(p, &data).unwrap();
        assert_eq!(b.upper_order, (p - 1) as u128);
        assert_eq!(b.certain_subquotient.to_string(), mu);
        assert!(b.unknown_differentials.is_empty());
    }
    let b = brauer_bound(2, &data).unwrap();
    assert_eq!(b.upper_order, 32);
    assert_eq!(b.unknown_differentials.len(), 3);
    assert_eq!(b.certain_subquotient.to_string(), "Z/2 ⊕ Z/2");
}
