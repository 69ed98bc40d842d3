//! Small fixed instances, one per efficiently simulable class, used by examples and tests.

use super::{
    annihilate, create, fock_bilinear, hopping, onsite, ClassHint, FockConfiguration, LindbladOperator, LindbladSet,
    LindbladTerm, Model, QuadraticForm, QuadraticHamiltonian, UnitaryJump,
};
use crate::linalg::c;

/// Open chain `J Σ (c_n† c_{n+1} + h.c.)`.
pub fn chain(modes: usize, j: f64) -> QuadraticForm {
    let mut h = QuadraticForm::zero(modes);
    for n in 0..modes.saturating_sub(1) {
        h.alpha += &hopping(modes, n, n + 1, j).alpha;
    }
    h
}

/// `Δ (c_x c_y + c_y† c_x†)`.
pub fn pairing(modes: usize, x: usize, y: usize, delta: f64) -> QuadraticForm {
    let p = fock_bilinear(&annihilate(x, modes), &annihilate(y, modes));
    p.add(&p.adjoint()).scale(c(delta, 0.0)).hermitian_form()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceInstance {
    /// Pair loss `√Γ c_0 c_1` and pair gain `√Γ c_1† c_0†` at equal rates, with coherent pairing.
    PairFluctuation,
    /// Single-mode loss and gain at equal rates on mode 0.
    SingleFluctuation,
    /// Random phase flips `exp(-iπ n_0)` at unit rate.
    PhaseFlip,
    /// Loss `√Γ c_{L-1}` at the end of the chain.
    EndLoss,
}

impl ReferenceInstance {
    pub const ALL: [ReferenceInstance; 4] =
        [Self::PairFluctuation, Self::SingleFluctuation, Self::PhaseFlip, Self::EndLoss];

    pub fn name(&self) -> &'static str {
        match self {
            Self::PairFluctuation => "ec1-pair",
            Self::SingleFluctuation => "ec1-single",
            Self::PhaseFlip => "ec2-flip",
            Self::EndLoss => "ec3-loss",
        }
    }

    pub fn duration(&self) -> f64 {
        1.0
    }

    /// Model on `modes ≥ 2` modes and its initial configuration: `1100…` for the pair instance,
    /// `1010…` otherwise.
    pub fn build(&self, modes: usize) -> (Model, FockConfiguration) {
        assert!(modes >= 2, "reference instances need two modes");
        let t = self.duration();
        let mut h = chain(modes, 1.0);
        h.alpha += &onsite(modes, 0, 0.3).alpha;
        let terms: Vec<LindbladTerm> = match self {
            Self::PairFluctuation => {
                h.alpha += &pairing(modes, 0, 1, 0.7).alpha;
                let p = fock_bilinear(&annihilate(0, modes), &annihilate(1, modes)).scale(c(0.5f64.sqrt(), 0.0));
                vec![LindbladTerm::operator(p.clone()), LindbladTerm::operator(p.adjoint())]
            }
            Self::SingleFluctuation => {
                let g = c(0.5f64.sqrt(), 0.0);
                vec![
                    LindbladTerm::operator(annihilate(0, modes).scale(g)),
                    LindbladTerm::operator(create(0, modes).scale(g)),
                ]
            }
            Self::PhaseFlip => {
                let j = UnitaryJump::new(1.0, onsite(modes, 0, std::f64::consts::PI)).expect("rate");
                vec![LindbladTerm::jump(j)]
            }
            Self::EndLoss => {
                let a: LindbladOperator = annihilate(modes - 1, modes).scale(c(0.8f64.sqrt(), 0.0));
                vec![LindbladTerm::operator(a)]
            }
        };
        let set = LindbladSet::new(modes, terms, ClassHint::Auto).expect("reference set classifies");
        let model = Model::new(QuadraticHamiltonian::constant(h, t), set).expect("reference model");
        let initial = match self {
            Self::PairFluctuation => FockConfiguration::new((0..modes).map(|n| n < 2).collect()),
            _ => FockConfiguration::new((0..modes).map(|n| n % 2 == 0).collect()),
        };
        (model, initial)
    }
}
