//! Benchmark fixtures shared by the criterion targets.

use klocal_core::fg_module::matrix::Matrix;
use klocal_core::height_one::HeightOneData;
use klocal_core::ss::Window;

/// Window used by the spectral sequence benchmarks.
pub fn chart_window() -> Window {
    Window::new(-8, 24, 10)
}

pub fn data() -> HeightOneData {
    HeightOneData::shipped().expect("shipped tables are valid")
}

/// A dense `n × n` matrix with entries in `0..p^3`, filled by a fixed LCG.
pub fn pseudo_random_matrix(n: usize, p: u64) -> Matrix {
    let q = p.pow(3);
    let mut x: u64 = 0x9e37_79b9;
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            m.set(i, j, (x >> 33) % q);
        }
    }
    m
}
