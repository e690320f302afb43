//! Dense matrices over `Z/p^N` standing in for `Z_p`.

use crate::error::Result;
use crate::padic::{inv_mod, modulus, reduce_signed};

/// Arithmetic context for `Z/p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zpn {
    pub p: u64,
    pub n: u32,
    pub m: u64,
    small: bool,
}

impl Zpn {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        let m = modulus(p, n)?;
        Ok(Zpn {
            p,
            n,
            m,
            small: m < (1 << 32),
        })
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.small {
            a * b % self.m
        } else {
            ((a as u128 * b as u128) % self.m as u128) as u64
        }
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        reduce_signed(v as i128, self.m)
    }

    /// Valuation of a residue; `None` when zero at this precision.
    #[inline]
    pub fn val(&self, mut a: u64) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        Some(v)
    }

    /// Write a nonzero residue as `p^v · u` and return `(v, u)`.
    pub fn split(&self, a: u64) -> Option<(u32, u64)> {
        let v = self.val(a)?;
        Some((v, a / self.p.pow(v)))
    }

    pub fn inv(&self, u: u64) -> Option<u64> {
        inv_mod(u, self.m)
    }

    pub fn pow_p(&self, k: u32) -> u64 {
        if k >= self.n {
            0
        } else {
            self.p.pow(k)
        }
    }

    /// Same prime, lower precision.
    pub fn lower(&self, n: u32) -> Result<Zpn> {
        Zpn::new(self.p, n)
    }
}

/// Row-major dense matrix of residues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn from_cols(cols: &[Vec<u64>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], cols: usize, ring: &Zpn) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, ring.from_i64(v));
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c · row[src]`, starting at column `from`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: u64, from: usize, ring: &Zpn) {
        if c == 0 {
            return;
        }
        let cols = self.cols;
        let (s, d) = (src * cols, dst * cols);
        for j in from..cols {
            let v = self.data[s + j];
            if v != 0 {
                self.data[d + j] = ring.add(self.data[d + j], ring.mul(c, v));
            }
        }
    }

    /// `col[dst] += c · col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: u64, ring: &Zpn) {
        if c == 0 {
            return;
        }
        for i in 0..self.rows {
            let v = self.data[i * self.cols + src];
            if v != 0 {
                let k = i * self.cols + dst;
                self.data[k] = ring.add(self.data[k], ring.mul(c, v));
            }
        }
    }

    pub fn scale_row(&mut self, i: usize, c: u64, ring: &Zpn) {
        for j in 0..self.cols {
            let k = i * self.cols + j;
            self.data[k] = ring.mul(self.data[k], c);
        }
    }

    pub fn scale_col(&mut self, j: usize, c: u64, ring: &Zpn) {
        for i in 0..self.rows {
            let k = i * self.cols + j;
            self.data[k] = ring.mul(self.data[k], c);
        }
    }

    pub fn mul(&self, other: &Matrix, ring: &Zpn) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let v = ring.add(out.get(i, j), ring.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64], ring: &Zpn) -> Vec<u64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| ring.add(acc, ring.mul(a, b)))
            })
            .collect()
    }

    pub fn hconcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hconcat");
        let mut out = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn neg(&self, ring: &Zpn) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| ring.neg(v)).collect(),
        }
    }

    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> Matrix {
        let rows: Vec<Vec<u64>> = idx.into_iter().map(|i| self.row(i).to_vec()).collect();
        Matrix::from_rows(&rows, self.cols)
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.set(i, k, self.get(i, j));
            }
        }
        out
    }

    /// Reduce every entry into a smaller modulus.
    pub fn reduce(&self, ring: &Zpn) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v % ring.m).collect(),
        }
    }
}
