use crate::error::{FlsError, Result};
use crate::linalg::{
    all_finite, all_finite_c, antisymmetrize, antisymmetrize_c, antisymmetry_defect, c, CMat, CVec,
    RMat, RVec, C64, I,
};

/// Hermitian quadratic-linear form `(i/2) Σ α_ij γ_i γ_j + Σ β_i γ_i` on `L` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    pub alpha: RMat,
    pub beta: RVec,
}

impl QuadraticForm {
    pub fn zero(modes: usize) -> Self {
        Self { alpha: RMat::zeros(2 * modes, 2 * modes), beta: RVec::zeros(2 * modes) }
    }

    /// Checked constructor; `alpha` must already be antisymmetric to 1e-12.
    pub fn new(alpha: RMat, beta: RVec) -> Result<Self> {
        let n = alpha.nrows();
        if alpha.ncols() != n || n % 2 != 0 || beta.len() != n {
            return Err(FlsError::DimensionMismatch(format!(
                "alpha {}x{}, beta {}",
                alpha.nrows(),
                alpha.ncols(),
                beta.len()
            )));
        }
        if !all_finite(&alpha) || beta.iter().any(|x| !x.is_finite()) {
            return Err(FlsError::NonFinite("quadratic form"));
        }
        let defect = antisymmetry_defect(&alpha);
        if defect > 1e-12 {
            return Err(FlsError::NonAntisymmetric(defect));
        }
        Ok(Self { alpha, beta })
    }

    pub fn modes(&self) -> usize {
        self.alpha.nrows() / 2
    }

    pub fn has_linear(&self) -> bool {
        self.beta.iter().any(|&x| x != 0.0)
    }

    /// Adds `λ O + λ* O†`; for a Hermitian `O` pass `λ` real and halve it yourself if needed.
    pub fn add_hermitian_combination(&mut self, op: &LindbladOperator, lambda: C64) {
        let n = self.alpha.nrows();
        for i in 0..n {
            for j in 0..n {
                self.alpha[(i, j)] += 2.0 * (lambda * op.a[(i, j)]).re;
            }
            self.beta[i] += 2.0 * (lambda * op.b[i]).re;
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { alpha: &self.alpha * s, beta: &self.beta * s }
    }

    /// Upper bound on the operator norm by the triangle inequality over Majorana monomials.
    pub fn norm_bound(&self) -> f64 {
        let n = self.alpha.nrows();
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += self.alpha[(i, j)].abs();
            }
        }
        s + self.beta.iter().map(|x| x.abs()).sum::<f64>()
    }
}

/// Quadratic-linear operator `(i/2) Σ a_ij γ_i γ_j + Σ b_i γ_i + d` with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladOperator {
    pub a: CMat,
    pub b: CVec,
    pub d: C64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FockKind {
    Create,
    Annihilate,
}

impl LindbladOperator {
    /// Antisymmetrizes `a`, moving its symmetric part into `d`.
    pub fn new(a: CMat, b: CVec, d: C64) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n || n % 2 != 0 || b.len() != n {
            return Err(FlsError::DimensionMismatch(format!(
                "a {}x{}, b {}",
                a.nrows(),
                a.ncols(),
                b.len()
            )));
        }
        if !all_finite_c(&a) || b.iter().any(|x| !x.re.is_finite() || !x.im.is_finite())
            || !d.re.is_finite()
            || !d.im.is_finite()
        {
            return Err(FlsError::NonFinite("Lindblad operator"));
        }
        let trace: C64 = (0..n).map(|i| a[(i, i)]).sum();
        Ok(Self { a: antisymmetrize_c(&a), b, d: d + I * 0.5 * trace })
    }

    pub fn zero(modes: usize) -> Self {
        Self { a: CMat::zeros(2 * modes, 2 * modes), b: CVec::zeros(2 * modes), d: c(0.0, 0.0) }
    }

    pub fn linear(b: CVec, d: C64) -> Self {
        let n = b.len();
        Self { a: CMat::zeros(n, n), b, d }
    }

    pub fn modes(&self) -> usize {
        self.b.len() / 2
    }

    pub fn adjoint(&self) -> Self {
        Self { a: self.a.map(|z| z.conj()), b: self.b.map(|z| z.conj()), d: self.d.conj() }
    }

    pub fn scale(&self, z: C64) -> Self {
        Self { a: &self.a * z, b: &self.b * z, d: self.d * z }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { a: &self.a + &other.a, b: &self.b + &other.b, d: self.d + other.d }
    }

    pub fn is_linear(&self, tol: f64) -> bool {
        self.a.iter().all(|z| z.norm() <= tol)
    }

    /// True when the operator is a multiple of the identity (no effect in a dissipator).
    pub fn is_scalar(&self, tol: f64) -> bool {
        self.is_linear(tol) && self.b.iter().all(|z| z.norm() <= tol)
    }

    /// Product of two linear operators, which is again quadratic-linear.
    pub fn linear_product(x: &Self, y: &Self) -> Result<Self> {
        if !x.is_linear(0.0) || !y.is_linear(0.0) {
            return Err(FlsError::InvalidArgument("product of non-linear operators".into()));
        }
        let m = &x.b * y.b.transpose();
        Self::new(m * c(0.0, -2.0), &y.b * x.d + &x.b * y.d, x.d * y.d)
    }

    /// Coefficient vector `(a_ij for i<j, b, d)`, the coordinates used for proportionality tests.
    pub fn coefficients(&self) -> Vec<C64> {
        let n = self.a.nrows();
        let mut v = Vec::with_capacity(n * (n - 1) / 2 + n + 1);
        for i in 0..n {
            for j in (i + 1)..n {
                v.push(self.a[(i, j)]);
            }
        }
        v.extend(self.b.iter().copied());
        v.push(self.d);
        v
    }

    /// Triangle-inequality bound on the operator norm.
    pub fn norm_bound(&self) -> f64 {
        let n = self.a.nrows();
        let mut s = self.d.norm();
        for i in 0..n {
            for j in (i + 1)..n {
                s += self.a[(i, j)].norm();
            }
            s += self.b[i].norm();
        }
        s
    }

    /// Real form of a Hermitian operator; imaginary parts are discarded.
    pub fn hermitian_form(&self) -> QuadraticForm {
        QuadraticForm { alpha: self.a.map(|z| z.re), beta: self.b.map(|z| z.re) }
    }

    pub fn from_form(form: &QuadraticForm) -> Self {
        Self {
            a: form.alpha.map(|x| c(x, 0.0)),
            b: form.beta.map(|x| c(x, 0.0)),
            d: c(0.0, 0.0),
        }
    }
}

/// Encoding of `c_n` or `c_n†` with `c_n = (γ_{2n} + iγ_{2n+1})/2`.
pub fn fock_operator_as_majorana(kind: FockKind, n: usize, modes: usize) -> Result<LindbladOperator> {
    if n >= modes {
        return Err(FlsError::IndexOutOfRange { index: n, modes });
    }
    let mut b = CVec::zeros(2 * modes);
    b[2 * n] = c(0.5, 0.0);
    b[2 * n + 1] = match kind {
        FockKind::Annihilate => c(0.0, 0.5),
        FockKind::Create => c(0.0, -0.5),
    };
    Ok(LindbladOperator::linear(b, c(0.0, 0.0)))
}

pub fn annihilate(n: usize, modes: usize) -> LindbladOperator {
    fock_operator_as_majorana(FockKind::Annihilate, n, modes).expect("mode index")
}

pub fn create(n: usize, modes: usize) -> LindbladOperator {
    fock_operator_as_majorana(FockKind::Create, n, modes).expect("mode index")
}

/// `c_x† c_y`, `c_x c_y`, ... built as a product of two linear operators.
pub fn fock_bilinear(x: &LindbladOperator, y: &LindbladOperator) -> LindbladOperator {
    LindbladOperator::linear_product(x, y).expect("linear factors")
}

/// Hopping `J (c_x† c_y + c_y† c_x)` as a Hermitian form.
pub fn hopping(modes: usize, x: usize, y: usize, j: f64) -> QuadraticForm {
    let t = fock_bilinear(&create(x, modes), &annihilate(y, modes));
    let h = t.add(&t.adjoint()).scale(c(j, 0.0));
    h.hermitian_form()
}

/// Onsite energy `ε c_x† c_x` (up to a constant).
pub fn onsite(modes: usize, x: usize, eps: f64) -> QuadraticForm {
    fock_bilinear(&create(x, modes), &annihilate(x, modes)).scale(c(eps, 0.0)).hermitian_form()
}

/// Unitary jump `√Γ exp(-iG)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryJump {
    pub rate: f64,
    pub generator: QuadraticForm,
}

impl UnitaryJump {
    pub fn new(rate: f64, generator: QuadraticForm) -> Result<Self> {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(FlsError::InvalidArgument(format!("jump rate {rate} must be >= 0")));
        }
        Ok(Self { rate, generator })
    }
}

/// Antisymmetric real matrix from an arbitrary one; convenience for building inputs.
pub fn antisymmetric_part(m: &RMat) -> RMat {
    antisymmetrize(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annihilator_encoding() {
        let op = fock_operator_as_majorana(FockKind::Annihilate, 0, 1).unwrap();
        assert_eq!(op.b[0], c(0.5, 0.0));
        assert_eq!(op.b[1], c(0.0, 0.5));
        assert_eq!(op.d, c(0.0, 0.0));
        let cr = fock_operator_as_majorana(FockKind::Create, 0, 1).unwrap();
        assert_eq!(cr.b[1], c(0.0, -0.5));
        assert_eq!(cr, op.adjoint());
        assert!(fock_operator_as_majorana(FockKind::Create, 2, 2).is_err());
    }

    #[test]
    fn number_operator_product() {
        let n = fock_bilinear(&create(0, 1), &annihilate(0, 1));
        assert!((n.a[(0, 1)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((n.a[(1, 0)] - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((n.d - c(0.5, 0.0)).norm() < 1e-15);
        assert!(n.b.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn symmetric_part_folds_into_scalar() {
        let a = CMat::identity(2, 2) * c(1.0, 0.0);
        let op = LindbladOperator::new(a, CVec::zeros(2), c(0.0, 0.0)).unwrap();
        assert!(op.a.iter().all(|z| z.norm() == 0.0));
        assert_eq!(op.d, c(0.0, 1.0));
    }

    #[test]
    fn hopping_is_antisymmetric() {
        let h = hopping(3, 0, 2, 0.7);
        assert!(antisymmetry_defect(&h.alpha) < 1e-15);
        assert!(QuadraticForm::new(h.alpha.clone(), h.beta.clone()).is_ok());
    }

    #[test]
    fn rejects_non_antisymmetric_form() {
        assert!(matches!(
            QuadraticForm::new(RMat::identity(2, 2), RVec::zeros(2)),
            Err(FlsError::NonAntisymmetric(_))
        ));
    }
}
