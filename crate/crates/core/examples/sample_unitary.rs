//! Exact output distribution and sequential samples of a unitary free-fermion circuit.
//!
//! `cargo run --release --example sample_unitary -- [L] [samples]`

use fls::model::reference::{chain, pairing};
use fls::model::{FockConfiguration, Model, QuadraticHamiltonian};
use fls::oracle::{exact_distribution, tvd};
use fls::rng::trajectory_rng;
use fls::sampler::OutcomeDistributionHandle;
use fls::model::Distribution;

fn main() -> fls::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let modes: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let n: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let t = 1.3;

    let mut h = chain(modes, 1.0);
    h.alpha += &pairing(modes, 0, modes - 1, 0.4).alpha;
    h.beta[1] = 0.25;
    let h = QuadraticHamiltonian::constant(h, t);
    let init = FockConfiguration::new((0..modes).map(|n| n < modes / 2).collect());

    let handle = OutcomeDistributionHandle::unitary(&h, &init, t)?;
    let pf = handle.enumerate_distribution()?;
    let samples: Vec<FockConfiguration> = (0..n).map(|i| handle.sample(&mut trajectory_rng(1, i as u64))).collect();
    let empirical = Distribution::from_samples(modes, &samples);

    println!("initial {init}, t = {t}");
    if modes <= 10 {
        let exact = exact_distribution(&Model::unitary(h)?, &init, t)?;
        println!("TVD pfaffian vs dense: {:.2e}", tvd(&pf, &exact));
    }
    println!("TVD {n} samples vs pfaffian: {:.2e}", tvd(&empirical, &pf));
    let mut top: Vec<(FockConfiguration, f64)> = pf.iter().collect();
    top.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (cfg, p) in top.iter().take(6) {
        println!("  {cfg}  {p:.5}  {:.5}", empirical.get(cfg));
    }
    Ok(())
}
