//! Classical pair fluctuations (equal-rate loss and gain on one mode) compared with the exact
//! Lindblad evolution.

use fls::linalg::c;
use fls::model::{annihilate, create, hopping, ClassHint, FockConfiguration, LindbladSet, Model, QuadraticHamiltonian};
use fls::oracle::{exact_distribution, tvd};
use fls::unraveling::{average_distribution, TrajectoryPlan};
use std::time::Instant;

fn main() -> fls::Result<()> {
    let t = 1.0;
    let rate: f64 = 0.5;
    let ops = vec![annihilate(0, 2).scale(c(rate.sqrt(), 0.0)), create(0, 2).scale(c(rate.sqrt(), 0.0))];
    let model = Model::new(
        QuadraticHamiltonian::constant(hopping(2, 0, 1, 1.0), t),
        LindbladSet::from_operators(2, ops, ClassHint::Auto)?,
    )?;
    println!("class {}", model.class_tag());
    let initial = FockConfiguration::parse("10")?;
    let exact = exact_distribution(&model, &initial, t)?;
    for dt in [0.1, 0.05, 0.025] {
        let plan = TrajectoryPlan::new(&model, t, dt, 7, 20_000)?;
        let start = Instant::now();
        let avg = average_distribution(&model, &plan, &initial, None)?;
        println!(
            "dt {dt:<6} tvd {:.5}  stderr {:.1e}  ({:.2?})",
            tvd(&avg.mean, &exact),
            avg.stderr.iter().cloned().fold(0.0, f64::max),
            start.elapsed()
        );
    }
    Ok(())
}
