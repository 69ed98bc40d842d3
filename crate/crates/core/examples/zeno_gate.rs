//! Zeno-blockade CZ gate: leakage versus the loss-to-hopping ratio.
//!
//! `cargo run --release --example zeno_gate`

use fls::gates::{leakage_nonhermitian, simulate_cz, CzScheme, GateSpec, LeakageModel};
use std::f64::consts::PI;

fn main() -> fls::Result<()> {
    println!("gamma   leakage    2pi/gamma  two-level  phase(11)  process fidelity");
    for gamma in [50.0, 100.0, 200.0, 400.0, 800.0] {
        let spec = GateSpec::new(1.0, gamma)?;
        let r = simulate_cz(&spec, CzScheme::Zeno)?;
        println!(
            "{gamma:<7} {:.3e}  {:.3e}  {:.3e}  {:+.4}    {:.5}",
            r.leakage,
            2.0 * PI / gamma,
            leakage_nonhermitian(&spec, LeakageModel::TwoLevel),
            r.phase_11,
            r.process_fidelity
        );
    }
    let noisy = GateSpec { gamma_prime: 0.01, ..GateSpec::new(1.0, 400.0)? };
    let r = simulate_cz(&noisy, CzScheme::Zeno)?;
    println!("with background pair gain 0.01: leaked {:?}", r.leaked);
    Ok(())
}
