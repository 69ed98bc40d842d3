//! Pfaffians of complex skew-symmetric matrices by pivoted Parlett–Reid elimination.

use crate::error::{FlsError, Result};
use crate::linalg::{antisymmetrize_c, CMat, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix {
    m: CMat,
}

impl SkewMatrix {
    /// Stores `(m - mᵀ)/2`.
    pub fn new(m: CMat) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(FlsError::DimensionMismatch(format!("{}x{} is not square", m.nrows(), m.ncols())));
        }
        Ok(Self { m: antisymmetrize_c(&m) })
    }

    /// Caller guarantees antisymmetry.
    pub fn from_antisymmetric(m: CMat) -> Self {
        debug_assert!(crate::linalg::antisymmetry_defect_c(&m) <= 1e-10 * (1.0 + crate::linalg::max_abs_c(&m)));
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }
}

pub fn pfaffian(a: &SkewMatrix) -> C64 {
    let n = a.dim();
    let mut buf: Vec<C64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            buf.push(a.m[(i, j)]);
        }
    }
    pfaffian_in_place(&mut buf, n)
}

pub fn pfaffian_submatrix(a: &SkewMatrix, idx: &[usize]) -> Result<C64> {
    let n = a.dim();
    if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
        return Err(FlsError::IndexOutOfRange { index: bad, modes: n });
    }
    if idx.windows(2).any(|w| w[0] >= w[1]) {
        return Err(FlsError::InvalidArgument("index list must be strictly increasing".into()));
    }
    let k = idx.len();
    let mut buf = Vec::with_capacity(k * k);
    for &i in idx {
        for &j in idx {
            buf.push(a.m[(i, j)]);
        }
    }
    Ok(pfaffian_in_place(&mut buf, k))
}

/// Pfaffian of the row-major `n × n` skew matrix in `a`, which is overwritten.
pub fn pfaffian_in_place(a: &mut [C64], n: usize) -> C64 {
    debug_assert_eq!(a.len(), n * n);
    if n % 2 == 1 {
        return C64::new(0.0, 0.0);
    }
    let mut pf = C64::new(1.0, 0.0);
    let mut tau = vec![C64::new(0.0, 0.0); n];
    let mut col = vec![C64::new(0.0, 0.0); n];
    let mut k = 0;
    while k + 1 < n {
        let mut kp = k + 1;
        let mut best = a[(k + 1) * n + k].norm_sqr();
        for i in (k + 2)..n {
            let v = a[i * n + k].norm_sqr();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            for j in 0..n {
                a.swap((k + 1) * n + j, kp * n + j);
            }
            for i in 0..n {
                a.swap(i * n + k + 1, i * n + kp);
            }
            pf = -pf;
        }
        let pivot = a[k * n + k + 1];
        if pivot.norm_sqr() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        pf *= pivot;
        if k + 2 < n {
            let inv = C64::new(1.0, 0.0) / pivot;
            for j in (k + 2)..n {
                tau[j] = a[k * n + j] * inv;
                col[j] = a[j * n + k + 1];
            }
            for i in (k + 2)..n {
                let ti = tau[i];
                let ci = col[i];
                let row = &mut a[i * n..(i + 1) * n];
                for j in (k + 2)..n {
                    row[j] += ti * col[j] - ci * tau[j];
                }
            }
        }
        k += 2;
    }
    pf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use proptest::prelude::*;

    fn skew_from(vals: &[(usize, usize, C64)], n: usize) -> SkewMatrix {
        let mut m = CMat::zeros(n, n);
        for &(i, j, v) in vals {
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
        SkewMatrix::from_antisymmetric(m)
    }

    fn lcg_matrix(n: usize, seed: u64) -> CMat {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        CMat::from_fn(n, n, |_, _| c(next(), next()))
    }

    #[test]
    fn two_by_two() {
        let a = c(0.3, -1.2);
        assert_eq!(pfaffian(&skew_from(&[(0, 1, a)], 2)), a);
    }

    #[test]
    fn four_by_four_closed_form() {
        let v = [c(1.0, 0.5), c(-2.0, 0.1), c(0.7, 0.0), c(0.2, -0.3), c(3.0, 1.0), c(-1.1, 0.4)];
        let m = skew_from(
            &[(0, 1, v[0]), (0, 2, v[1]), (0, 3, v[2]), (1, 2, v[3]), (1, 3, v[4]), (2, 3, v[5])],
            4,
        );
        let expected = v[0] * v[5] - v[1] * v[4] + v[2] * v[3];
        assert!((pfaffian(&m) - expected).norm() < 1e-14);
        assert!((pfaffian_submatrix(&m, &[0, 1]).unwrap() - v[0]).norm() < 1e-15);
        assert_eq!(pfaffian_submatrix(&m, &[]).unwrap(), c(1.0, 0.0));
        assert_eq!(pfaffian_submatrix(&m, &[0, 1, 2, 3]).unwrap(), pfaffian(&m));
        assert!(pfaffian_submatrix(&m, &[1, 0]).is_err());
        assert!(pfaffian_submatrix(&m, &[0, 4]).is_err());
    }

    #[test]
    fn odd_dimension_is_zero() {
        let m = SkewMatrix::new(lcg_matrix(5, 1)).unwrap();
        assert_eq!(pfaffian(&m), c(0.0, 0.0));
    }

    #[test]
    fn square_is_determinant_8x8() {
        let m = SkewMatrix::new(lcg_matrix(8, 7)).unwrap();
        let pf = pfaffian(&m);
        let det = m.matrix().clone().determinant();
        assert!((pf * pf - det).norm() <= 1e-8 * det.norm());
    }

    #[test]
    fn direct_sum_is_product() {
        let lambdas = [c(2.0, 0.0), c(-0.5, 0.25), c(1e-3, 4.0)];
        let m = skew_from(&[(0, 1, lambdas[0]), (2, 3, lambdas[1]), (4, 5, lambdas[2])], 6);
        let prod = lambdas[0] * lambdas[1] * lambdas[2];
        assert!((pfaffian(&m) - prod).norm() <= 1e-15 * prod.norm());
    }

    #[test]
    fn singular_is_zero() {
        let m = SkewMatrix::from_antisymmetric(CMat::zeros(4, 4));
        assert_eq!(pfaffian(&m), c(0.0, 0.0));
    }

    proptest! {
        #[test]
        fn congruence_rule(seed in 0u64..1000, half in 1usize..6) {
            let n = 2 * half;
            let a = SkewMatrix::new(lcg_matrix(n, seed)).unwrap();
            let b = lcg_matrix(n, seed ^ 0xdead_beef);
            let bab = SkewMatrix::new(&b * a.matrix() * b.transpose()).unwrap();
            let lhs = pfaffian(&bab);
            let rhs = b.clone().determinant() * pfaffian(&a);
            prop_assert!((lhs - rhs).norm() <= 1e-7 * rhs.norm().max(1e-300));
        }
    }
}
