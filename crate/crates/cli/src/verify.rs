//! Bundled verification suites: the identity checks behind `fadingbc
//! verify`, plus the exhaustive grid oracle used to cross-check the
//! water-filling solver. Everything is deterministic given the seed.

use fadingbc_core as core;
use fadingbc_core::{
    BoundKind, CsitMap, FadingDistribution, InnerPolicy, OuterPolicy, OuterRestriction,
};

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Deterministic generator for the suites (splitmix64).
pub struct Stream(u64);

impl Stream {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Random finite state law with `n` atoms and gains below `gain_max`.
pub fn random_dist(stream: &mut Stream, n: usize, gain_max: f64) -> FadingDistribution {
    loop {
        let mut atoms: Vec<(f64, f64, f64)> = (0..n)
            .map(|_| {
                (
                    stream.range(0.0, gain_max),
                    stream.range(0.0, gain_max),
                    stream.range(0.05, 1.0),
                )
            })
            .collect();
        let total: f64 = atoms.iter().map(|a| a.2).sum();
        for a in atoms.iter_mut() {
            a.2 /= total;
        }
        if let Ok(d) = core::build_discrete(&atoms) {
            if d.len() == n {
                return d;
            }
        }
    }
}

pub fn random_csit(stream: &mut Stream, pick: usize, n_atoms: usize) -> CsitMap {
    match pick % 4 {
        0 => CsitMap::perfect(),
        1 => CsitMap::none(),
        2 => CsitMap::degradedness_bit(),
        _ => {
            let symbols = 1 + stream.below(n_atoms.max(1));
            let mut table: Vec<usize> = (0..n_atoms).map(|i| i % symbols).collect();
            // deterministic shuffle
            for i in (1..table.len()).rev() {
                table.swap(i, stream.below(i + 1));
            }
            CsitMap::table(table, symbols).unwrap()
        }
    }
}

pub fn random_inner_policy(
    stream: &mut Stream,
    partition: &core::CsitPartition,
    power: f64,
) -> InnerPolicy {
    let n = partition.group_count();
    let phi_raw: Vec<f64> = (0..n).map(|_| stream.range(0.0, 2.0 * power)).collect();
    let phi = core::project_budget(&phi_raw, partition, power);
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    for _ in 0..n {
        let a = stream.range(0.0, 1.0);
        let b = stream.range(0.0, 1.0 - a);
        alpha.push(a);
        beta.push(b);
    }
    InnerPolicy { phi, alpha, beta }
}

// ---------------------------------------------------------------------------
// suites
// ---------------------------------------------------------------------------

/// Closed forms vs the Gaussian log-det oracle, `draws` random instances.
pub fn suite_oracle_equivalence(seed: u64, draws: usize) -> SuiteOutcome {
    let mut s = Stream::new(seed ^ 0x01);
    let mut worst = 0.0f64;
    for k in 0..draws {
        let n = 1 + s.below(6);
        let dist = random_dist(&mut s, n, 8.0);
        let csit = random_csit(&mut s, k, n);
        let part = core::partition_by_csit(&dist, &csit).unwrap();
        let power = s.range(0.1, 4.0);
        let pol = random_inner_policy(&mut s, &part, power);
        match core::verify_closed_forms(&dist, &part, &pol, power, 1e-9) {
            Ok(rep) => worst = worst.max(rep.max_abs_err),
            Err(e) => {
                return SuiteOutcome {
                    name: "oracle-equivalence",
                    pass: false,
                    detail: format!("draw {k}: {e}"),
                }
            }
        }
    }
    SuiteOutcome {
        name: "oracle-equivalence",
        pass: worst <= 1e-9,
        detail: format!("{draws} draws, max |closed-form - log-det| = {worst:.3e} bits"),
    }
}

/// Per-atom coincidence of the order-split inner policy with the outer
/// constraint values, message and secrecy sides.
pub fn suite_coincidence(seed: u64, draws: usize) -> SuiteOutcome {
    let mut s = Stream::new(seed ^ 0x02);
    let mut worst = 0.0f64;
    for k in 0..draws {
        let n = 1 + s.below(16);
        let dist = random_dist(&mut s, n, 8.0);
        let part = core::partition_by_csit(&dist, &CsitMap::perfect()).unwrap();
        let power = s.range(0.1, 4.0);
        let alpha_star: Vec<f64> = (0..n).map(|_| s.range(0.0, 1.0)).collect();
        let beta_star: Vec<f64> = (0..n).map(|_| s.range(0.0, 1.0)).collect();
        let phi_raw: Vec<f64> = (0..n).map(|_| s.range(0.0, 2.0 * power)).collect();
        let phi = core::project_budget(&phi_raw, &part, power);

        let outer_pol = OuterPolicy {
            phi: phi.clone(),
            alpha: alpha_star.clone(),
            beta: beta_star.clone(),
            restriction: OuterRestriction::Free,
        };
        let inner_pol =
            core::order_split_policy(&dist, &part, &alpha_star, &beta_star, &phi).unwrap();

        let outer = core::outer_polytope(&dist, &part, &outer_pol, power).unwrap();
        let inner = core::inner_polytope(&dist, &part, &inner_pol, power).unwrap();
        for (ic, oc) in inner.constraints.iter().zip(outer.constraints.iter()) {
            worst = worst.max((ic.1 - oc.1).abs());
        }

        let so = core::secrecy_outer_box(&dist, &part, &outer_pol, power).unwrap();
        let si = core::secrecy_inner_box(&dist, &part, &inner_pol, power).unwrap();
        worst = worst.max((si.r0_cap - so.r0_cap).abs());
        worst = worst.max((si.r1_cap - so.r1_cap).abs());
        worst = worst.max((si.r2_cap - so.r2_cap).abs());
        if worst > 1e-12 {
            return SuiteOutcome {
                name: "order-split-coincidence",
                pass: false,
                detail: format!("draw {k}: constraint gap {worst:.3e} bits"),
            };
        }
    }
    SuiteOutcome {
        name: "order-split-coincidence",
        pass: true,
        detail: format!("{draws} draws, max constraint gap {worst:.3e} bits"),
    }
}

/// The stronger-receiver superposition pair is non-decreasing in the
/// satellite fraction.
pub fn suite_beta_monotonicity(seed: u64, draws: usize, grid: usize) -> SuiteOutcome {
    let mut s = Stream::new(seed ^ 0x03);
    let mut worst_drop = 0.0f64;
    for _ in 0..draws {
        let g2 = s.range(0.0, 8.0);
        let g1 = g2 + s.range(1e-9, 8.0);
        let phi = s.range(0.0, 6.0);
        let term = |b: f64| {
            core::psi(g1 * b * phi) + core::psi(g2 * (1.0 - b) * phi / (g2 * b * phi + 1.0))
        };
        let mut prev = term(0.0);
        for k in 1..=grid {
            let cur = term(k as f64 / grid as f64);
            worst_drop = worst_drop.max(prev - cur);
            prev = cur;
        }
    }
    SuiteOutcome {
        name: "split-monotonicity",
        pass: worst_drop <= 1e-12,
        detail: format!("{draws} draws x {grid} grid, worst decrease {worst_drop:.3e} bits"),
    }
}

/// Traced support ordering: inner within outer, restricted within free.
pub fn suite_containment(
    seed: u64,
    instances: usize,
    directions: usize,
    opts_seed: u64,
) -> SuiteOutcome {
    let mut s = Stream::new(seed ^ 0x04);
    let opts = core::OptimizerOptions {
        directions,
        restarts: 3,
        grid_seed_levels: 3,
        step_tol: 1e-6,
        max_iters: 300,
        rng_seed: opts_seed,
    };
    let dirs = core::direction_set(directions);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_restricted = f64::NEG_INFINITY;
    for k in 0..instances {
        let n = 1 + s.below(5);
        let dist = random_dist(&mut s, n, 8.0).with_iid(k % 2 == 0);
        let csit = random_csit(&mut s, k, n);
        let part = core::partition_by_csit(&dist, &csit).unwrap();
        let power = s.range(0.2, 3.0);
        for w in &dirs {
            let run = |bound, restriction| {
                core::max_weighted(&dist, &part, bound, *w, restriction, &opts, power)
                    .map(|r| r.value)
            };
            let inner = match run(BoundKind::Inner, OuterRestriction::Free) {
                Ok(v) => v,
                Err(e) => {
                    return SuiteOutcome {
                        name: "containment",
                        pass: false,
                        detail: format!("instance {k}: {e}"),
                    }
                }
            };
            let outer = run(BoundKind::Outer, OuterRestriction::Free).unwrap();
            worst = worst.max(inner - outer);
            if dist.is_iid() {
                let restricted = run(BoundKind::Outer, OuterRestriction::PerGainClass).unwrap();
                worst_restricted = worst_restricted.max(restricted - outer);
            }
        }
    }
    let pass = worst <= 1e-9 && worst_restricted <= 1e-9;
    SuiteOutcome {
        name: "containment",
        pass,
        detail: format!(
            "{instances} instances x {directions} directions, worst inner-outer gap {worst:.3e}, restricted-free gap {worst_restricted:.3e}"
        ),
    }
}

/// Water-filling against the exhaustive budget-composition grid oracle.
pub fn suite_waterfill_vs_grid(seed: u64, instances: usize, steps: usize) -> SuiteOutcome {
    let mut s = Stream::new(seed ^ 0x05);
    let mut worst = 0.0f64;
    for k in 0..instances {
        let symbols = 1 + k % 3; // 1..3 symbols keeps the default suite quick
        let n = symbols.max(1 + s.below(4));
        let dist = random_dist(&mut s, n, 8.0);
        let csit = if symbols == 1 {
            CsitMap::none()
        } else {
            CsitMap::degradedness_bit()
        };
        let part = core::partition_by_csit(&dist, &csit).unwrap();
        if !core::csit_refines_order(&dist, &part) {
            continue;
        }
        let power = s.range(0.3, 3.0);
        let (_, wf) = core::waterfill_sumrate(&dist, &part, power, 1e-9).unwrap();
        let grid = grid_sumrate_oracle(&dist, &part, power, steps);
        worst = worst.max((wf - grid).abs());
    }
    SuiteOutcome {
        name: "waterfill-vs-grid",
        pass: worst <= 1e-3,
        detail: format!(
            "{instances} instances, grid step {steps}, worst |wf - grid| = {worst:.3e} bits"
        ),
    }
}

/// Exhaustive sum-rate maximization over the budget-allocation grid: budget
/// shares `x_e = j·P/steps` with `Σ_e j_e = steps` are enumerated completely
/// via per-symbol value tables. Independent of the KKT solver.
pub fn grid_sumrate_oracle(
    dist: &FadingDistribution,
    partition: &core::CsitPartition,
    power: f64,
    steps: usize,
) -> f64 {
    let k = partition.group_count();
    let delta = power / steps as f64;
    // table[e][j] = contribution of symbol e when it receives budget j·delta
    let tables: Vec<Vec<f64>> = partition
        .groups()
        .iter()
        .map(|g| {
            (0..=steps)
                .map(|j| {
                    let phi = if g.mass > 0.0 {
                        j as f64 * delta / g.mass
                    } else {
                        0.0
                    };
                    g.atom_indices
                        .iter()
                        .map(|&i| {
                            let a = &dist.atoms()[i];
                            a.p * (1.0 + a.max_gain() * phi).log2()
                        })
                        .sum()
                })
                .collect()
        })
        .collect();

    fn best(tables: &[Vec<f64>], e: usize, remaining: usize, acc: f64, out: &mut f64) {
        if e + 1 == tables.len() {
            let v = acc + tables[e][remaining];
            if v > *out {
                *out = v;
            }
            return;
        }
        for j in 0..=remaining {
            best(tables, e + 1, remaining - j, acc + tables[e][j], out);
        }
    }

    let mut out = f64::NEG_INFINITY;
    if k == 0 {
        return 0.0;
    }
    best(&tables, 0, steps, 0.0, &mut out);
    out
}

/// The default `verify` run: all suites at bundled sizes and seeds.
pub fn run_all(seed: u64) -> Vec<SuiteOutcome> {
    vec![
        suite_oracle_equivalence(seed, 1000),
        suite_coincidence(seed, 1000),
        suite_beta_monotonicity(seed, 1000, 1000),
        suite_containment(seed, 10, 8, seed),
        suite_waterfill_vs_grid(seed, 8, 1000),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_oracle_matches_closed_form_single_symbol() {
        // single symbol, single atom, best gain 3, P=1: optimum puts all
        // budget on the symbol: log2(4) = 2
        let dist = core::build_discrete(&[(3.0, 1.0, 1.0)]).unwrap();
        let part = core::partition_by_csit(&dist, &CsitMap::none()).unwrap();
        let v = grid_sumrate_oracle(&dist, &part, 1.0, 1000);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn grid_oracle_two_symbol_example() {
        // symbols with best gains 3 and 1, equal masses, P=1:
        // optimum value = psi(4)/2 + psi(2/3)/2
        let dist = core::build_discrete(&[(3.0, 1.0, 0.5), (1.0, 0.5, 0.5)]).unwrap();
        let part = core::partition_by_csit(&dist, &CsitMap::perfect()).unwrap();
        let v = grid_sumrate_oracle(&dist, &part, 1.0, 2000);
        assert!((v - 1.5294468445267841).abs() < 1e-6, "grid {v}");
    }

    #[test]
    fn default_suites_pass() {
        // smaller sizes here; the full run is exercised by the binary and
        // the acceptance suite
        assert!(suite_oracle_equivalence(7, 50).pass);
        assert!(suite_coincidence(7, 50).pass);
        assert!(suite_beta_monotonicity(7, 50, 200).pass);
        assert!(suite_waterfill_vs_grid(7, 3, 400).pass);
        let c = suite_containment(7, 3, 4, 7);
        assert!(c.pass, "{}", c.detail);
    }
}
