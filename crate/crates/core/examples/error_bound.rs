//! A-priori error bound versus the measured trajectory error for each reference instance.
//!
//! `cargo run --release --example error_bound -- [trajectories] [L]`

use fls::bounds::{choose_dt, correction_norms, error_bound};
use fls::model::reference::ReferenceInstance;
use fls::oracle::{exact_distribution, tvd};
use fls::unraveling::{average_distribution, TrajectoryPlan};

fn main() -> fls::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let modes: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(2);
    println!("instance,L,dt,tvd,mc_sigma,bound");
    for inst in ReferenceInstance::ALL {
        let (model, init) = inst.build(modes);
        let t = inst.duration();
        let exact = exact_distribution(&model, &init, t)?;
        for dt in [0.1, 0.05] {
            let plan = TrajectoryPlan::new(&model, t, dt, 7, n)?;
            let avg = average_distribution(&model, &plan, &init, None)?;
            let sigma = 0.5 * avg.stderr.iter().sum::<f64>();
            let bound = error_bound(&model, t, dt)?;
            println!("{},{modes},{dt},{:.3e},{sigma:.1e},{bound:.3e}", inst.name(), tvd(&avg.mean, &exact));
        }
        let profile = correction_norms(&model, 0.0)?;
        println!("# {} k_m={} terms={} dt(eps=0.01)={:.3e}", inst.name(), profile.k_max, profile.terms.len(), choose_dt(&model, t, 0.01)?);
    }
    Ok(())
}
