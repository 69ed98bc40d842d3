//! Small dense linear-algebra helpers shared across modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type RMat = DMatrix<f64>;
pub type CMat = DMatrix<C64>;
pub type RVec = DVector<f64>;
pub type CVec = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest entry of `|m + mᵀ|`.
pub fn antisymmetry_defect(m: &RMat) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..=i {
            worst = worst.max((m[(i, j)] + m[(j, i)]).abs());
        }
    }
    worst
}

pub fn antisymmetry_defect_c(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..=i {
            worst = worst.max((m[(i, j)] + m[(j, i)]).norm());
        }
    }
    worst
}

pub fn antisymmetrize(m: &RMat) -> RMat {
    (m - m.transpose()) * 0.5
}

pub fn antisymmetrize_c(m: &CMat) -> CMat {
    (m - m.transpose()) * C64::new(0.5, 0.0)
}

/// Block-diagonal `⊕ [[0, 1], [-1, 0]]` over `modes` blocks.
pub fn symplectic_j(modes: usize) -> RMat {
    let mut j = RMat::zeros(2 * modes, 2 * modes);
    for n in 0..modes {
        j[(2 * n, 2 * n + 1)] = 1.0;
        j[(2 * n + 1, 2 * n)] = -1.0;
    }
    j
}

pub fn max_abs(m: &RMat) -> f64 {
    m.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

pub fn max_abs_c(m: &CMat) -> f64 {
    m.iter().fold(0.0f64, |a, x| a.max(x.norm()))
}

pub fn all_finite(m: &RMat) -> bool {
    m.iter().all(|x| x.is_finite())
}

pub fn all_finite_c(m: &CMat) -> bool {
    m.iter().all(|x| x.re.is_finite() && x.im.is_finite())
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

/// `exp(m)` by scaling and squaring with a Taylor kernel; accurate to double precision
/// for the small generators used by the trajectory engine.
pub fn expm(m: &RMat) -> RMat {
    let n = m.nrows();
    let norm = max_row_sum(m);
    let mut s = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        s += 1;
    }
    let a = m * scale;
    // Taylor to order 12: remainder < 0.25^13/13! ~ 2e-18.
    let mut result = RMat::identity(n, n);
    let mut term = RMat::identity(n, n);
    let mut tmp = RMat::zeros(n, n);
    for k in 1..=12u32 {
        tmp.gemm(1.0 / k as f64, &term, &a, 0.0);
        std::mem::swap(&mut term, &mut tmp);
        result += &term;
    }
    for _ in 0..s {
        tmp.gemm(1.0, &result, &result, 0.0);
        std::mem::swap(&mut result, &mut tmp);
    }
    result
}

fn max_row_sum(m: &RMat) -> f64 {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn expm_c(m: &CMat) -> CMat {
    m.clone().exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_matches_rotation() {
        let mut a = RMat::zeros(2, 2);
        a[(0, 1)] = 1.3;
        a[(1, 0)] = -1.3;
        let r = expm(&a);
        assert!((r[(0, 0)] - 1.3f64.cos()).abs() < 1e-14);
        assert!((r[(0, 1)] - 1.3f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn expm_agrees_with_nalgebra_on_large_norm() {
        let a = RMat::from_fn(5, 5, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let a = antisymmetrize(&a) * 9.0;
        let ours = expm(&a);
        let theirs = a.clone().exp();
        assert!(max_abs(&(ours - theirs)) < 1e-11);
    }

    #[test]
    fn symplectic_block() {
        let j = symplectic_j(2);
        assert_eq!(j[(2, 3)], 1.0);
        assert_eq!(j[(3, 2)], -1.0);
        assert_eq!(antisymmetry_defect(&j), 0.0);
    }
}
