//! Particle loss through ancilla modes: single-mode decay and loss from a chain.
//!
//! `cargo run --release --example ec3_loss`

use fls::linalg::c;
use fls::model::reference::ReferenceInstance;
use fls::model::{annihilate, ClassHint, FockConfiguration, LindbladSet, Model, QuadraticForm, QuadraticHamiltonian};
use fls::oracle::{exact_distribution, tvd};
use fls::unraveling::{average_distribution, TrajectoryPlan};

fn main() -> fls::Result<()> {
    let gamma = 1.0f64;
    println!("single mode, loss rate {gamma}");
    for t in [0.5, 1.0, 2.0] {
        let set = LindbladSet::from_operators(1, vec![annihilate(0, 1).scale(c(gamma.sqrt(), 0.0))], ClassHint::Auto)?;
        let model = Model::new(QuadraticHamiltonian::constant(QuadraticForm::zero(1), t), set)?;
        let plan = TrajectoryPlan::new(&model, t, 0.01, 5, 5000)?;
        let avg = average_distribution(&model, &plan, &FockConfiguration::parse("1")?, None)?;
        println!(
            "  t {t}: P(1) = {:.4} +- {:.4}, exp(-Gt) = {:.4}",
            avg.mean.probs[1],
            avg.stderr[1],
            (-gamma * t).exp()
        );
    }
    let inst = ReferenceInstance::EndLoss;
    let (model, init) = inst.build(4);
    let t = inst.duration();
    let exact = exact_distribution(&model, &init, t)?;
    let plan = TrajectoryPlan::new(&model, t, 0.02, 6, 10_000)?;
    let avg = average_distribution(&model, &plan, &init, None)?;
    println!("chain of 4 with loss at the end: TVD to oracle {:.4}", tvd(&avg.mean, &exact));
    Ok(())
}
