use crate::linalg::{max_abs_c, CMat};
use crate::model::Distribution;

/// Total variation distance `½ Σ |P - Q|`.
pub fn tvd(p: &Distribution, q: &Distribution) -> f64 {
    assert_eq!(p.probs.len(), q.probs.len(), "distributions over different spaces");
    0.5 * p.probs.iter().zip(&q.probs).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaCheck {
    pub lhs: f64,
    pub bound: f64,
}

impl LemmaCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.bound * (1.0 + 1e-12)
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// Compares `Σ_r |⟨r|O₁ρO₂|r⟩|` with `L^{k1+k2}/(k1! k2!) ‖O₁‖_max ‖O₂‖_max`.
pub fn verify_sparse_lemma(o1: &CMat, k1: usize, o2: &CMat, k2: usize, rho: &CMat) -> LemmaCheck {
    let dim = rho.nrows();
    let modes = dim.trailing_zeros() as i32;
    let prod = o1 * rho * o2;
    let lhs = (0..dim).map(|r| prod[(r, r)].norm()).sum();
    let l = modes as f64;
    let bound = l.powi((k1 + k2) as i32) / (factorial(k1) * factorial(k2)) * max_abs_c(o1) * max_abs_c(o2);
    LemmaCheck { lhs, bound }
}

/// Largest Hamming distance between basis states connected by a nonzero entry.
pub fn hamming_locality(o: &CMat, tol: f64) -> usize {
    let mut k = 0;
    for i in 0..o.nrows() {
        for j in 0..o.ncols() {
            if o[(i, j)].norm() > tol {
                k = k.max((i ^ j).count_ones() as usize);
            }
        }
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::oracle::jw::majorana_dense;

    #[test]
    fn tvd_examples() {
        let p = Distribution { modes: 1, probs: vec![0.75, 0.25] };
        let q = Distribution { modes: 1, probs: vec![0.5, 0.5] };
        assert_eq!(tvd(&p, &p), 0.0);
        assert!((tvd(&p, &q) - 0.25).abs() < 1e-15);
        let a = Distribution { modes: 1, probs: vec![1.0, 0.0] };
        let b = Distribution { modes: 1, probs: vec![0.0, 1.0] };
        assert_eq!(tvd(&a, &b), 1.0);
    }

    #[test]
    fn identity_saturates() {
        let rho = CMat::identity(8, 8) * c(0.125, 0.0);
        let id = CMat::identity(8, 8);
        let r = verify_sparse_lemma(&id, 0, &id, 0, &rho);
        assert!((r.lhs - 1.0).abs() < 1e-15);
        assert_eq!(r.bound, 1.0);
        assert!(r.holds());
    }

    #[test]
    fn single_majoranas_at_three_modes() {
        let g0 = majorana_dense(0, 3).unwrap();
        let g1 = majorana_dense(1, 3).unwrap();
        let mut rho = CMat::from_fn(8, 8, |i, j| c(((i * 3 + j) % 5) as f64, ((i + 2 * j) % 3) as f64 - 1.0));
        rho = &rho * rho.adjoint();
        let tr = rho.trace();
        rho /= tr;
        let r = verify_sparse_lemma(&g0, 1, &g1, 1, &rho);
        assert_eq!(r.bound, 9.0);
        assert!(r.holds());
        assert_eq!(hamming_locality(&g0, 0.0), 1);
    }
}
