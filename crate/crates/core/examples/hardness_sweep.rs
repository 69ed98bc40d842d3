//! Gate error reachable as a function of the gain/loss ratio, and the resulting regime labels.
//!
//! `cargo run --release --example hardness_sweep -- [p0]`

use fls::gates::{log_grid, sweep_hardness_diagram};

fn main() -> fls::Result<()> {
    let p0: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.01);
    let mut grid = log_grid(1e-7, 1e7, 15);
    grid.push(1.0);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    println!("ratio       epsilon     regime (p0 = {p0})");
    for p in sweep_hardness_diagram(&grid, p0)? {
        println!("{:<11.3e} {:<11.3e} {}", p.ratio, p.epsilon, p.regime);
    }
    Ok(())
}
