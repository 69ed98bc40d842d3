//! Two-species cold-atom CZ schemes in four traps, with and without interactions and background loss.
//!
//! `cargo run --release --example cold_atom_gate`

use fls::gates::{leakage_nonhermitian, minimal_error, optimal_time, simulate_cz, CzScheme, GateSpec, LeakageModel};

fn main() -> fls::Result<()> {
    for scheme in [CzScheme::AtomSelectiveHopping, CzScheme::AtomPhaseFlip] {
        println!("{}", scheme.name());
        for (gamma, zeta) in [(100.0, 0.0), (400.0, 0.0), (400.0, 1.0)] {
            let spec = GateSpec { zeta, ..GateSpec::new(1.0, gamma)? };
            let r = simulate_cz(&spec, scheme)?;
            println!(
                "  gamma {gamma:<5} zeta {zeta}: leaked {:.2e} {:.2e} {:.2e} {:.2e}, 4-level model {:.2e}, fidelity {:.5}",
                r.leaked[0],
                r.leaked[1],
                r.leaked[2],
                r.leaked[3],
                2.0 * leakage_nonhermitian(&spec, LeakageModel::ColdAtom),
                r.process_fidelity
            );
        }
    }
    let spec = GateSpec { gamma_prime: 1e-2, ..GateSpec::new(1.0, 2.5e4)? };
    let (t, eps) = optimal_time(&spec)?;
    println!("loss 2.5e4/s, background 1e-2/s: optimal time {t:.3e} s, error {eps:.3e} (closed form {:.3e})", minimal_error(&spec));
    Ok(())
}
