//! Smith normal form over `Z/p^N`.
//!
//! Pivoting always picks an entry of minimal valuation in the remaining block,
//! so every multiplier is an exact quotient and `U·m·V = D` holds exactly
//! modulo `p^N`.

use super::matrix::{Matrix, Zpn};
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct Snf {
    pub ring: Zpn,
    /// Diagonal form of the input.
    pub d: Matrix,
    /// Valuations of the diagonal, in divisibility order; `None` means zero at precision.
    pub exponents: Vec<Option<u32>>,
    pub u: Option<Matrix>,
    pub u_inv: Option<Matrix>,
    pub v: Option<Matrix>,
    pub v_inv: Option<Matrix>,
}

impl Snf {
    /// Number of diagonal entries that are nonzero at precision.
    pub fn rank(&self) -> usize {
        self.exponents.iter().take_while(|e| e.is_some()).count()
    }

    /// Largest nonzero diagonal valuation.
    pub fn max_exponent(&self) -> u32 {
        self.exponents.iter().flatten().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Transforms {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

impl Transforms {
    pub const ALL: Transforms = Transforms {
        u: true,
        u_inv: true,
        v: true,
        v_inv: true,
    };
    pub const NONE: Transforms = Transforms {
        u: false,
        u_inv: false,
        v: false,
        v_inv: false,
    };
}

/// Smith normal form of `m` over `Z/p^N` with all four transforms.
pub fn smith_normal_form(m: &Matrix, p: u64, precision: u32) -> Result<Snf> {
    let ring = Zpn::new(p, precision)?;
    Ok(snf(m.reduce(&ring), &ring, Transforms::ALL))
}

pub(crate) fn snf(mut a: Matrix, ring: &Zpn, want: Transforms) -> Snf {
    let (r, c) = (a.rows(), a.cols());
    let mut u = want.u.then(|| Matrix::identity(r));
    let mut u_inv = want.u_inv.then(|| Matrix::identity(r));
    let mut v = want.v.then(|| Matrix::identity(c));
    let mut v_inv = want.v_inv.then(|| Matrix::identity(c));
    let mut exponents = Vec::with_capacity(r.min(c));

    for k in 0..r.min(c) {
        let Some((pi, pj, pv)) = find_pivot(&a, k, ring) else {
            break;
        };
        a.swap_rows(k, pi);
        if let Some(u) = u.as_mut() {
            u.swap_rows(k, pi);
        }
        if let Some(ui) = u_inv.as_mut() {
            ui.swap_cols(k, pi);
        }
        a.swap_cols(k, pj);
        if let Some(v) = v.as_mut() {
            v.swap_cols(k, pj);
        }
        if let Some(vi) = v_inv.as_mut() {
            vi.swap_rows(k, pj);
        }

        // normalise the pivot to exactly p^pv
        let (_, unit) = ring.split(a.get(k, k)).expect("pivot is nonzero");
        if unit != 1 {
            let inv = ring.inv(unit).expect("unit part is invertible");
            a.scale_row(k, inv, ring);
            if let Some(u) = u.as_mut() {
                u.scale_row(k, inv, ring);
            }
            if let Some(ui) = u_inv.as_mut() {
                ui.scale_col(k, unit, ring);
            }
        }
        let pp = ring.p.pow(pv);

        for i in k + 1..r {
            let e = a.get(i, k);
            if e == 0 {
                continue;
            }
            let q = e / pp;
            let nq = ring.neg(q);
            a.add_row_multiple(i, k, nq, k, ring);
            if let Some(u) = u.as_mut() {
                u.add_row_multiple(i, k, nq, 0, ring);
            }
            if let Some(ui) = u_inv.as_mut() {
                ui.add_col_multiple(k, i, q, ring);
            }
        }
        for j in k + 1..c {
            let e = a.get(k, j);
            if e == 0 {
                continue;
            }
            let q = e / pp;
            // column k is now p^pv·e_k, so only the (k, j) entry changes
            a.set(k, j, 0);
            if let Some(v) = v.as_mut() {
                v.add_col_multiple(j, k, ring.neg(q), ring);
            }
            if let Some(vi) = v_inv.as_mut() {
                vi.add_row_multiple(k, j, q, 0, ring);
            }
        }
        exponents.push(Some(pv));
    }
    while exponents.len() < r.min(c) {
        exponents.push(None);
    }
    Snf {
        ring: *ring,
        d: a,
        exponents,
        u,
        u_inv,
        v,
        v_inv,
    }
}

fn find_pivot(a: &Matrix, k: usize, ring: &Zpn) -> Option<(usize, usize, u32)> {
    let mut best: Option<(usize, usize, u32)> = None;
    for i in k..a.rows() {
        let row = a.row(i);
        for (j, &x) in row.iter().enumerate().skip(k) {
            if x == 0 {
                continue;
            }
            if x % ring.p != 0 {
                return Some((i, j, 0));
            }
            let v = ring.val(x).expect("nonzero");
            if best.map_or(true, |b| v < b.2) {
                best = Some((i, j, v));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &Matrix, p: u64, n: u32) -> Snf {
        let s = smith_normal_form(m, p, n).unwrap();
        let ring = s.ring;
        let u = s.u.as_ref().unwrap();
        let v = s.v.as_ref().unwrap();
        assert_eq!(u.mul(&m.reduce(&ring), &ring).mul(v, &ring), s.d);
        let ui = s.u_inv.as_ref().unwrap();
        let vi = s.v_inv.as_ref().unwrap();
        assert_eq!(u.mul(ui, &ring), Matrix::identity(m.rows()));
        assert_eq!(vi.mul(v, &ring), Matrix::identity(m.cols()));
        s
    }

    #[test]
    fn identity() {
        let s = check(&Matrix::identity(3), 5, 4);
        assert_eq!(s.d, Matrix::identity(3));
        assert_eq!(s.u.unwrap(), Matrix::identity(3));
        assert_eq!(s.v.unwrap(), Matrix::identity(3));
    }

    #[test]
    fn diagonal_already() {
        let m = Matrix::from_rows(&[vec![2, 0], vec![0, 8]], 2);
        let s = check(&m, 2, 6);
        assert_eq!(s.exponents, vec![Some(1), Some(3)]);
    }

    #[test]
    fn three_by_three_example() {
        let m = Matrix::from_rows(&[vec![3, 3], vec![3, 12]], 2);
        let s = check(&m, 3, 6);
        assert_eq!(s.exponents, vec![Some(1), Some(2)]);
        assert_eq!(s.d.get(0, 0), 3);
        assert_eq!(s.d.get(1, 1), 9);
    }

    #[test]
    fn rectangular_and_zero() {
        let m = Matrix::from_rows(&[vec![0, 4, 0], vec![0, 2, 6]], 3);
        let s = check(&m, 2, 5);
        assert_eq!(s.exponents, vec![Some(1), Some(2)]);
        let z = check(&Matrix::zeros(2, 3), 3, 3);
        assert_eq!(z.exponents, vec![None, None]);
    }
}
