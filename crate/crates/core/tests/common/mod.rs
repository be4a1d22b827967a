//! Shared generators for the integration suites.
#![allow(dead_code)]

use fadingbc_core::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random finite state law with `n` atoms, gains in `[0, gain_max]`.
pub fn random_dist(rng: &mut ChaCha8Rng, n: usize, gain_max: f64) -> FadingDistribution {
    loop {
        let mut atoms: Vec<(f64, f64, f64)> = (0..n)
            .map(|_| {
                (
                    rng.gen_range(0.0..gain_max),
                    rng.gen_range(0.0..gain_max),
                    rng.gen_range(0.05..1.0),
                )
            })
            .collect();
        let total: f64 = atoms.iter().map(|a| a.2).sum();
        for a in atoms.iter_mut() {
            a.2 /= total;
        }
        if let Ok(d) = build_discrete(&atoms) {
            if d.len() == n {
                return d;
            }
        }
    }
}

/// One of the four CSIT kinds, selected by `pick`.
pub fn csit_of(pick: usize, rng: &mut ChaCha8Rng, n_atoms: usize) -> CsitMap {
    match pick % 4 {
        0 => CsitMap::perfect(),
        1 => CsitMap::none(),
        2 => CsitMap::degradedness_bit(),
        _ => {
            let symbols = rng.gen_range(1..=n_atoms.max(1));
            let mut table: Vec<usize> = (0..n_atoms).map(|i| i % symbols).collect();
            table.shuffle(rng);
            CsitMap::table(table, symbols).unwrap()
        }
    }
}

/// Feasible random inner policy for a partition under budget `power`.
pub fn random_inner_policy(
    rng: &mut ChaCha8Rng,
    partition: &CsitPartition,
    power: f64,
) -> InnerPolicy {
    let n = partition.group_count();
    let phi_raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0 * power)).collect();
    let phi = project_budget(&phi_raw, partition, power);
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    for _ in 0..n {
        let a: f64 = rng.gen_range(0.0..1.0);
        let b: f64 = rng.gen_range(0.0..(1.0 - a));
        alpha.push(a);
        beta.push(b);
    }
    InnerPolicy { phi, alpha, beta }
}

/// Feasible random outer policy (free restriction).
pub fn random_outer_policy(
    rng: &mut ChaCha8Rng,
    dist: &FadingDistribution,
    partition: &CsitPartition,
    power: f64,
) -> OuterPolicy {
    let n = partition.group_count();
    let phi_raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0 * power)).collect();
    OuterPolicy {
        phi: project_budget(&phi_raw, partition, power),
        alpha: (0..dist.len()).map(|_| rng.gen_range(0.0..=1.0)).collect(),
        beta: (0..dist.len()).map(|_| rng.gen_range(0.0..=1.0)).collect(),
        restriction: OuterRestriction::Free,
    }
}

pub fn quick_opts(seed: u64) -> OptimizerOptions {
    OptimizerOptions {
        directions: 8,
        restarts: 3,
        grid_seed_levels: 3,
        step_tol: 1e-6,
        max_iters: 300,
        rng_seed: seed,
    }
}
