//! Jordan–Wigner realization: `γ_{2n} = Z^{⊗n} X`, `γ_{2n+1} = Z^{⊗n} Y`, mode 0 leftmost.

use crate::error::{FlsError, Result};
use crate::linalg::{c, CMat, C64, I};
use crate::model::{LindbladOperator, QuadraticForm};

pub const MAX_OPERATOR_MODES: usize = 12;
pub const MAX_EVOLVE_MODES: usize = 10;

/// `γ_i |x⟩ = phase · |target⟩` for the basis state with index `x`.
#[inline]
pub fn majorana_action(i: usize, x: usize, modes: usize) -> (C64, usize) {
    let n = i / 2;
    let pos = modes - 1 - n;
    let higher = x >> (pos + 1);
    let sign = if higher.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    let occupied = (x >> pos) & 1 == 1;
    let target = x ^ (1 << pos);
    let phase = if i % 2 == 0 {
        c(sign, 0.0)
    } else if occupied {
        c(0.0, -sign)
    } else {
        c(0.0, sign)
    };
    (phase, target)
}

fn check_dim(modes: usize, cap: usize) -> Result<()> {
    if modes > cap {
        return Err(FlsError::DimensionTooLarge(format!("L = {modes} exceeds dense cap {cap}")));
    }
    Ok(())
}

pub fn majorana_dense(i: usize, modes: usize) -> Result<CMat> {
    check_dim(modes, MAX_OPERATOR_MODES)?;
    if i >= 2 * modes {
        return Err(FlsError::IndexOutOfRange { index: i, modes });
    }
    let dim = 1usize << modes;
    let mut m = CMat::zeros(dim, dim);
    for x in 0..dim {
        let (ph, y) = majorana_action(i, x, modes);
        m[(y, x)] = ph;
    }
    Ok(m)
}

/// Dense matrix of `(i/2) Σ a_ij γ_i γ_j + Σ b_i γ_i + d`.
pub fn dense_operator(op: &LindbladOperator) -> Result<CMat> {
    let modes = op.modes();
    check_dim(modes, MAX_EVOLVE_MODES)?;
    let dim = 1usize << modes;
    let n = 2 * modes;
    let mut m = CMat::zeros(dim, dim);
    for x in 0..dim {
        m[(x, x)] += op.d;
        for j in 0..n {
            let (pj, y) = majorana_action(j, x, modes);
            if op.b[j] != c(0.0, 0.0) {
                m[(y, x)] += op.b[j] * pj;
            }
            for i in 0..n {
                let aij = op.a[(i, j)];
                if i == j || aij == c(0.0, 0.0) {
                    continue;
                }
                let (pi, z) = majorana_action(i, y, modes);
                m[(z, x)] += I * 0.5 * aij * pi * pj;
            }
        }
    }
    Ok(m)
}

pub fn dense_form(form: &QuadraticForm) -> Result<CMat> {
    dense_operator(&LindbladOperator::from_form(form))
}

/// Occupation operator `c_n† c_n`.
pub fn number_dense(n: usize, modes: usize) -> CMat {
    let dim = 1usize << modes;
    let pos = modes - 1 - n;
    CMat::from_fn(dim, dim, |i, j| if i == j && (i >> pos) & 1 == 1 { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_c;
    use crate::model::{annihilate, create, fock_bilinear};

    #[test]
    fn single_mode_is_pauli() {
        let g0 = majorana_dense(0, 1).unwrap();
        let g1 = majorana_dense(1, 1).unwrap();
        assert_eq!(g0, CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]));
        assert_eq!(g1, CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]));
    }

    #[test]
    fn canonical_anticommutation() {
        for modes in 1..=4 {
            let g: Vec<CMat> = (0..2 * modes).map(|i| majorana_dense(i, modes).unwrap()).collect();
            let dim = 1 << modes;
            for i in 0..2 * modes {
                for j in 0..2 * modes {
                    let ac = &g[i] * &g[j] + &g[j] * &g[i];
                    let expect = if i == j { CMat::identity(dim, dim) * c(2.0, 0.0) } else { CMat::zeros(dim, dim) };
                    assert_eq!(ac, expect, "L={modes} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn anticommutation_by_action_up_to_12_modes() {
        let modes = 12;
        for x in [0usize, 1, 0b1011_0110_0101, (1 << 12) - 1] {
            for i in 0..2 * modes {
                for j in 0..2 * modes {
                    let (pj, y) = majorana_action(j, x, modes);
                    let (pi, z) = majorana_action(i, y, modes);
                    let (qi, y2) = majorana_action(i, x, modes);
                    let (qj, z2) = majorana_action(j, y2, modes);
                    assert_eq!(z, z2);
                    let s = pi * pj + qi * qj;
                    let expect = if i == j { 2.0 } else { 0.0 };
                    assert_eq!(s, c(expect, 0.0));
                }
            }
        }
    }

    #[test]
    fn number_operator_from_majoranas() {
        for modes in 1..=3 {
            for n in 0..modes {
                let nn = dense_operator(&fock_bilinear(&create(n, modes), &annihilate(n, modes))).unwrap();
                assert!(max_abs_c(&(nn - number_dense(n, modes))) < 1e-15);
            }
        }
    }

    #[test]
    fn annihilator_lowers() {
        let a = dense_operator(&annihilate(0, 1)).unwrap();
        assert_eq!(a[(0, 1)], c(1.0, 0.0));
        assert_eq!(a[(1, 0)], c(0.0, 0.0));
    }

    #[test]
    fn termwise_construction_agrees() {
        // c_1† c_0 + 0.3 c_0 - 0.2i on two modes, compared with products of dense matrices.
        let modes = 2;
        let op = fock_bilinear(&create(1, modes), &annihilate(0, modes))
            .add(&annihilate(0, modes).scale(c(0.3, 0.0)))
            .add(&LindbladOperator::linear(crate::linalg::CVec::zeros(4), c(0.0, -0.2)));
        let cd = |k: usize, n: usize| dense_operator(&if k == 0 { annihilate(n, modes) } else { create(n, modes) }).unwrap();
        let expect = cd(1, 1) * cd(0, 0) + cd(0, 0) * c(0.3, 0.0) + CMat::identity(4, 4) * c(0.0, -0.2);
        assert!(max_abs_c(&(dense_operator(&op).unwrap() - expect)) < 1e-14);
    }
}
