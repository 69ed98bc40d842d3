//! Per-step stochastic generators.

use crate::error::{FlsError, Result};
use crate::gaussian::embed_form;
use crate::linalg::{c, C64};
use crate::model::{create, Channel, Decomposition, LindbladOperator, QuadraticForm, UnitaryJump};
use rand::Rng;
use rand_distr::StandardNormal;

/// Noise for one channel in one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Noise {
    /// Complex Gaussian with `E|ξ|² = 1` (pairs).
    Complex(C64),
    /// Real standard Gaussian (Hermitian and linear channels).
    Real(f64),
    /// Jump channels draw no Gaussian noise.
    None,
}

/// All random draws of one step, one entry per decomposition slot, plus the jump decision.
#[derive(Debug, Clone, PartialEq)]
pub struct StepNoise {
    pub per_slot: Vec<Noise>,
    /// Offset of the candidate jump time within the step, in `[0, dt)`.
    pub jump_time: f64,
    /// Uniform variate deciding which jump (if any) fires.
    pub jump_u: f64,
}

impl StepNoise {
    pub fn zero(d: &Decomposition) -> Self {
        Self {
            per_slot: d
                .slots
                .iter()
                .map(|s| match s.channel {
                    Channel::Pair(_) => Noise::Complex(c(0.0, 0.0)),
                    Channel::Hermitian(_) | Channel::Linear(_) => Noise::Real(0.0),
                    _ => Noise::None,
                })
                .collect(),
            jump_time: 0.0,
            jump_u: 1.0,
        }
    }

    pub fn draw<R: Rng + ?Sized>(d: &Decomposition, dt: f64, rng: &mut R) -> Self {
        let mut has_jump = false;
        let per_slot = d
            .slots
            .iter()
            .map(|s| match s.channel {
                Channel::Pair(_) => {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Noise::Complex(c(re, im) * std::f64::consts::FRAC_1_SQRT_2)
                }
                Channel::Hermitian(_) | Channel::Linear(_) => Noise::Real(rng.sample(StandardNormal)),
                Channel::Jump(_) => {
                    has_jump = true;
                    Noise::None
                }
                Channel::General(_) => Noise::None,
            })
            .collect();
        let (jump_time, jump_u) = if has_jump {
            (rng.random::<f64>() * dt, rng.random::<f64>())
        } else {
            (0.0, 1.0)
        };
        Self { per_slot, jump_time, jump_u }
    }
}

/// Real forms `F_s` such that the channel contributes `Σ_s x_s F_s` for noise coordinates `x_s`.
///
/// Pair `B`: `θB + θ*B† = Re θ · F_re + Im θ · F_im`. Hermitian `B`: `g B`. Linear `A` on
/// ancilla mode `ancilla`: `f (c†_anc A + A† c_anc)`. All forms live on `modes` modes.
pub fn channel_forms(channel: &Channel, modes: usize, ancilla: Option<usize>) -> Result<Vec<QuadraticForm>> {
    let embed = |op: &LindbladOperator| -> LindbladOperator {
        let n = op.b.len();
        let mut big = LindbladOperator::zero(modes);
        big.a.view_mut((0, 0), (n, n)).copy_from(&op.a);
        big.b.rows_mut(0, n).copy_from(&op.b);
        big.d = op.d;
        big
    };
    let combo = |op: &LindbladOperator, lambda: C64| {
        let mut f = QuadraticForm::zero(modes);
        f.add_hermitian_combination(op, lambda);
        f
    };
    match channel {
        Channel::Pair(b) => {
            let b = embed(b);
            Ok(vec![combo(&b, c(1.0, 0.0)), combo(&b, c(0.0, 1.0))])
        }
        Channel::Hermitian(b) => Ok(vec![combo(&embed(b), c(0.5, 0.0))]),
        Channel::Linear(a) => {
            let anc = ancilla.ok_or_else(|| FlsError::InvalidArgument("linear channel needs an ancilla".into()))?;
            let k = LindbladOperator::linear_product(&create(anc, modes), &embed(a))?;
            Ok(vec![combo(&k, c(1.0, 0.0))])
        }
        Channel::Jump(_) => Ok(Vec::new()),
        Channel::General(_) => Err(FlsError::UnsupportedClass("general channel".into())),
    }
}

/// Noise coordinates matching [`channel_forms`], already divided by `√dt`.
pub fn noise_coordinates(noise: &Noise, dt: f64) -> Vec<f64> {
    let s = 1.0 / dt.sqrt();
    match *noise {
        Noise::Complex(z) => vec![z.re * s, z.im * s],
        Noise::Real(x) => vec![x * s],
        Noise::None => Vec::new(),
    }
}

fn accumulate(
    h: &QuadraticForm,
    d: &Decomposition,
    noise: &StepNoise,
    dt: f64,
    modes: usize,
    ancilla: Option<usize>,
    accept: impl Fn(&Channel) -> bool,
) -> Result<QuadraticForm> {
    let mut g = embed_form(h, modes, 0);
    for (slot, n) in d.slots.iter().zip(&noise.per_slot) {
        if !accept(&slot.channel) {
            continue;
        }
        let forms = channel_forms(&slot.channel, modes, ancilla)?;
        for (f, x) in forms.iter().zip(noise_coordinates(n, dt)) {
            g.alpha += &f.alpha * x;
            g.beta += &f.beta * x;
        }
    }
    Ok(g)
}

/// `H' = H + Σ_k (θ_k A_k + θ_k* A_k†) + Σ_h g_h B_h / √dt` with `θ = ξ/√dt`.
pub fn ec1_step_generator(h: &QuadraticForm, d: &Decomposition, noise: &StepNoise, dt: f64) -> Result<QuadraticForm> {
    if d.slots.iter().any(|s| !matches!(s.channel, Channel::Pair(_) | Channel::Hermitian(_))) {
        return Err(FlsError::UnsupportedClass("ec1_step_generator needs an EC1 decomposition".into()));
    }
    accumulate(h, d, noise, dt, h.modes(), None, |_| true)
}

/// `H ⊗ 1 + Σ_k f_k (c†_anc A_k + A_k† c_anc) / √dt` on `total_modes` modes; `H` acts on the
/// leading modes and `ancilla` is the mode dedicated to this step.
pub fn ec3_step_generator(
    h: &QuadraticForm,
    d: &Decomposition,
    noise: &StepNoise,
    ancilla: usize,
    total_modes: usize,
    dt: f64,
) -> Result<QuadraticForm> {
    if d.slots.iter().any(|s| !matches!(s.channel, Channel::Linear(_))) {
        return Err(FlsError::UnsupportedClass("ec3_step_generator needs an EC3 decomposition".into()));
    }
    if ancilla < h.modes() || ancilla >= total_modes {
        return Err(FlsError::IndexOutOfRange { index: ancilla, modes: total_modes });
    }
    accumulate(h, d, noise, dt, total_modes, Some(ancilla), |_| true)
}

/// Outcome of the EC2 jump lottery for one step.
#[derive(Debug, Clone, PartialEq)]
pub struct Ec2Step {
    /// Slot index and generator of the applied jump, if any.
    pub jump: Option<(usize, UnitaryJump)>,
    /// Jump time offset within the step.
    pub time: f64,
}

/// Picks at most one jump with probabilities `Γ_k dt` evaluated at the drawn jump time.
pub fn ec2_step_unitary(rates_at_jump_time: &Decomposition, noise: &StepNoise, dt: f64) -> Result<Ec2Step> {
    let total: f64 = rates_at_jump_time.jumps().map(|j| j.rate * dt).sum();
    if total >= 0.5 {
        return Err(FlsError::StepTooLarge(total));
    }
    let mut acc = 0.0;
    for (i, slot) in rates_at_jump_time.slots.iter().enumerate() {
        if let Channel::Jump(j) = &slot.channel {
            acc += j.rate * dt;
            if noise.jump_u < acc {
                return Ok(Ec2Step { jump: Some((i, j.clone())), time: noise.jump_time });
            }
        }
    }
    Ok(Ec2Step { jump: None, time: noise.jump_time })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::antisymmetry_defect;
    use crate::model::{annihilate, create as cr, decompose, fock_bilinear, hopping, ClassHint};
    use rand::SeedableRng;

    fn decomp(ops: Vec<LindbladOperator>) -> Decomposition {
        let idx: Vec<_> = ops.into_iter().enumerate().collect();
        decompose(&idx, &[], ClassHint::Auto).unwrap()
    }

    #[test]
    fn zero_noise_is_hamiltonian() {
        let d = decomp(vec![annihilate(0, 2), cr(0, 2)]);
        let h = hopping(2, 0, 1, 0.5);
        let g = ec1_step_generator(&h, &d, &StepNoise::zero(&d), 0.1).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn generators_are_antisymmetric() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let pl = fock_bilinear(&annihilate(0, 2), &annihilate(1, 2));
        let d = decomp(vec![pl.clone(), pl.adjoint()]);
        let noise = StepNoise::draw(&d, 0.1, &mut rng);
        let g = ec1_step_generator(&hopping(2, 0, 1, 1.0), &d, &noise, 0.1).unwrap();
        assert!(antisymmetry_defect(&g.alpha) < 1e-12);

        let d3 = decomp(vec![annihilate(0, 2).scale(c(0.7, 0.0))]);
        let noise = StepNoise::draw(&d3, 0.1, &mut rng);
        let g = ec3_step_generator(&hopping(2, 0, 1, 1.0), &d3, &noise, 2, 3, 0.1).unwrap();
        assert!(antisymmetry_defect(&g.alpha) < 1e-12);
        // Support: system modes plus the ancilla only.
        assert!(g.beta.iter().all(|&x| x == 0.0));
        assert!(g.alpha[(4, 0)] != 0.0 || g.alpha[(4, 1)] != 0.0);
    }

    #[test]
    fn wrong_class_rejected() {
        let d = decomp(vec![annihilate(0, 1)]);
        let h = QuadraticForm::zero(1);
        assert!(ec1_step_generator(&h, &d, &StepNoise::zero(&d), 0.1).is_err());
        let d1 = decomp(vec![annihilate(0, 1), cr(0, 1)]);
        assert!(ec3_step_generator(&h, &d1, &StepNoise::zero(&d1), 1, 2, 0.1).is_err());
    }

    #[test]
    fn noise_moments() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n0 = fock_bilinear(&create(0, 2), &annihilate(0, 2));
        let pl = fock_bilinear(&annihilate(0, 2), &annihilate(1, 2));
        let d = decomp(vec![pl.clone(), pl.adjoint(), n0]);
        let n = 40_000;
        let (mut z1, mut z2, mut zz, mut x1, mut x2) = (c(0.0, 0.0), 0.0, c(0.0, 0.0), 0.0, 0.0);
        for _ in 0..n {
            let s = StepNoise::draw(&d, 0.1, &mut rng);
            for v in &s.per_slot {
                match *v {
                    Noise::Complex(z) => {
                        z1 += z;
                        z2 += z.norm_sqr();
                        zz += z * z;
                    }
                    Noise::Real(x) => {
                        x1 += x;
                        x2 += x * x;
                    }
                    Noise::None => panic!("no jump slots here"),
                }
            }
        }
        let nf = n as f64;
        let five = 5.0 / nf.sqrt();
        assert!((z1 / nf).norm() < five);
        assert!((z2 / nf - 1.0).abs() < 5.0 * 2f64.sqrt() / nf.sqrt());
        assert!((zz / nf).norm() < five * 2f64.sqrt());
        assert!((x1 / nf).abs() < five);
        assert!((x2 / nf - 1.0).abs() < 5.0 * 2f64.sqrt() / nf.sqrt());
    }

    #[test]
    fn jump_lottery() {
        let j = UnitaryJump::new(2.0, QuadraticForm::zero(1)).unwrap();
        let d = decompose(&[], &[(0, j)], ClassHint::Auto).unwrap();
        let mut n = StepNoise::zero(&d);
        n.jump_u = 0.1;
        assert!(ec2_step_unitary(&d, &n, 0.1).unwrap().jump.is_some());
        n.jump_u = 0.3;
        assert!(ec2_step_unitary(&d, &n, 0.1).unwrap().jump.is_none());
        assert!(matches!(ec2_step_unitary(&d, &n, 0.3), Err(FlsError::StepTooLarge(_))));
    }
}
