//! Random check of the sparse-operator trace inequality used in the error bound.
//!
//! `cargo run --release --example lemma_check -- [instances]`

use fls::linalg::{c, CMat};
use fls::oracle::verify_sparse_lemma;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn sparse(g: &mut ChaCha8Rng, modes: usize, k: usize) -> CMat {
    let dim = 1usize << modes;
    CMat::from_fn(dim, dim, |i, j| {
        if ((i ^ j).count_ones() as usize) < k {
            c(g.sample(StandardNormal), g.sample(StandardNormal))
        } else {
            c(0.0, 0.0)
        }
    })
}

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(500);
    let mut g = ChaCha8Rng::seed_from_u64(9);
    let mut table = [[0usize; 2]; 7];
    for _ in 0..n {
        let modes = g.random_range(1..=6);
        let (k1, k2) = (g.random_range(1..=4), g.random_range(1..=4));
        let (o1, o2) = (sparse(&mut g, modes, k1), sparse(&mut g, modes, k2));
        let x = sparse(&mut g, modes, modes + 1);
        let rho = &x * x.adjoint();
        let rho = &rho / rho.trace();
        let check = verify_sparse_lemma(&o1, k1, &o2, k2, &rho);
        table[modes][usize::from(!check.holds())] += 1;
    }
    println!("L  holds  violated");
    for (l, row) in table.iter().enumerate().skip(1) {
        println!("{l}  {:<6} {}", row[0], row[1]);
    }
}
