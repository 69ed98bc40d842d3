//! Random unitary jumps: phase flips on one mode of a hopping chain, against the dense oracle.
//!
//! `cargo run --release --example ec2_jumps -- [trajectories]`

use fls::model::reference::ReferenceInstance;
use fls::oracle::{exact_distribution, tvd};
use fls::unraveling::{run_trajectories, TrajectoryPlan};

fn main() -> fls::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let inst = ReferenceInstance::PhaseFlip;
    let (model, init) = inst.build(3);
    let t = inst.duration();
    let exact = exact_distribution(&model, &init, t)?;
    for dt in [0.1, 0.05, 0.02] {
        let plan = TrajectoryPlan::new(&model, t, dt, 3, n)?.with_record(true);
        let res = run_trajectories(&model, &plan, &init, None)?;
        let jumps: usize = res
            .outcomes
            .iter()
            .filter_map(|o| o.record.as_ref())
            .map(|r| r.jumps.iter().filter(|j| j.is_some()).count())
            .sum();
        println!(
            "dt {dt:<5} TVD {:.4}  mean jumps per trajectory {:.3} (expected {:.3})",
            tvd(&res.distribution, &exact),
            jumps as f64 / n as f64,
            t
        );
    }
    Ok(())
}
