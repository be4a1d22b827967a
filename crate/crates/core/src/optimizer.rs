//! Policy-space search: weighted-rate maximization over the nonconvex
//! policy unions, region tracing, and the exact concave sum-rate
//! water-filling solver.
//!
//! The scalarized problems are solved by deterministic multi-start
//! projected coordinate ascent with central-difference steps, seeded from a
//! Halton lattice plus structured corner policies. Two warm-start couplings
//! keep the reported bounds ordered by construction rather than by search
//! luck:
//!
//! - an outer-bound run re-runs the (deterministic) inner search and lifts
//!   its best policy into the outer space, whose constraint values pointwise
//!   dominate the lifted inner ones;
//! - when the side information determines the degradedness order, both
//!   bounds run one shared "order-structured" search (satellite power to the
//!   stronger receiver per symbol), whose objective is identical on both
//!   sides; the inner run re-evaluates the result through its own pipeline.
//!
//! Every reported value is a true feasible-policy evaluation; the couplings
//! only decide where to look.

use alloc::vec;
use alloc::vec::Vec;

use crate::fading::{csit_refines_order, CsitPartition, FadingDistribution};
use crate::geometry::{self, RatePoint, RateRegion};
use crate::math;
use crate::rates::{
    inner_polytope, outer_polytope, secrecy_inner_box, secrecy_outer_box, InnerPolicy, OuterPolicy,
    OuterRestriction, RateError, RatePolytope,
};

/// Optimizer errors.
#[derive(Debug, Clone, PartialEq)]
pub enum OptimError {
    /// Weight vector negative or all-zero.
    BadWeight,
    /// Restriction not valid for this bound kind or instance.
    RestrictionUnavailable { reason: &'static str },
    /// A bisection bracket could not be established.
    NoConvergence,
    /// Propagated policy/evaluation error.
    Rate(RateError),
}

impl core::fmt::Display for OptimError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::BadWeight => write!(f, "weight must be nonnegative and not all zero"),
            Self::RestrictionUnavailable { reason } => {
                write!(f, "restriction unavailable: {reason}")
            }
            Self::NoConvergence => write!(f, "bisection failed to bracket"),
            Self::Rate(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for OptimError {}

impl From<RateError> for OptimError {
    fn from(e: RateError) -> Self {
        Self::Rate(e)
    }
}

/// Which bound's policy union is being searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Inner,
    Outer,
    SecrecyInner,
    SecrecyOuter,
    /// No-common-message secrecy caps: power-only union of rectangles.
    SecrecyOuterNoCommon,
}

impl BoundKind {
    fn is_secrecy(self) -> bool {
        matches!(
            self,
            Self::SecrecyInner | Self::SecrecyOuter | Self::SecrecyOuterNoCommon
        )
    }
}

/// Search configuration. Everything is deterministic given `rng_seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerOptions {
    /// Weight vectors used by [`trace_region`].
    pub directions: usize,
    /// Ascent starts kept from the ranked seed pool (jittered beyond it).
    pub restarts: usize,
    /// Lattice seeds per scalar dimension.
    pub grid_seed_levels: usize,
    /// Ascent stops once every per-coordinate step falls below this.
    pub step_tol: f64,
    /// Cap on ascent sweeps per start.
    pub max_iters: usize,
    pub rng_seed: u64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            directions: 64,
            restarts: 16,
            grid_seed_levels: 5,
            step_tol: 1e-6,
            max_iters: 2000,
            rng_seed: 0x5EED_CAFE_F00D_0001,
        }
    }
}

/// Optimizing policy of one weighted-rate maximization.
#[derive(Debug, Clone, PartialEq)]
pub enum PolicySolution {
    Inner(InnerPolicy),
    Outer(OuterPolicy),
}

/// Outcome of one weighted-rate maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportResult {
    pub weight: [f64; 3],
    pub value: f64,
    pub policy: PolicySolution,
    pub vertex: RatePoint,
    pub converged: bool,
    pub iterations: usize,
}

/// Deterministic weight spread over the nonnegative octant: the seven
/// canonical axis/diagonal directions followed by a golden-angle lattice.
pub fn direction_set(n: usize) -> Vec<[f64; 3]> {
    const ISQRT2: f64 = core::f64::consts::FRAC_1_SQRT_2;
    let isqrt3 = 1.0 / math::sqrt(3.0);
    let canonical = [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, ISQRT2, ISQRT2],
        [ISQRT2, ISQRT2, 0.0],
        [ISQRT2, 0.0, ISQRT2],
        [isqrt3, isqrt3, isqrt3],
    ];
    let mut out: Vec<[f64; 3]> = canonical.iter().copied().take(n).collect();
    const GOLDEN_FRAC: f64 = 0.618_033_988_749_894_9;
    let rest = n.saturating_sub(out.len());
    for i in 0..rest {
        let t = (i as f64 + 0.5) / rest as f64;
        let polar = t; // cos of inclination in (0, 1)
        let azim = core::f64::consts::FRAC_PI_2 * frac((i as f64 + 0.5) * GOLDEN_FRAC);
        let sin_incl = math::sqrt((1.0 - polar * polar).max(0.0));
        out.push([
            sin_incl * math::cos(azim),
            sin_incl * math::sin(azim),
            polar,
        ]);
    }
    out
}

#[inline]
fn frac(x: f64) -> f64 {
    x - math::floor(x)
}

/// Scales a raw power profile onto the budget: identity when already within
/// `Σ p(e)·phi(e) <= P`, otherwise a uniform rescale onto the budget face.
pub fn project_budget(phi_raw: &[f64], partition: &CsitPartition, power: f64) -> Vec<f64> {
    let mut used = 0.0;
    for (g, &p) in partition.groups().iter().zip(phi_raw.iter()) {
        used += g.mass * p;
    }
    if used <= power || used <= 0.0 {
        phi_raw.to_vec()
    } else {
        let scale = power / used;
        phi_raw.iter().map(|&p| p * scale).collect()
    }
}

/// Exact water-filling for the sum-rate capacity objective
/// `E[psi(max(g1,g2)·phi(E))]` under the average power budget.
///
/// Outer bisection on the multiplier; per symbol, inner bisection on the
/// stationarity condition `Σ p(s|e)·g/(1+g·phi) = λ·ln 2`. The budget is met
/// with equality whenever any gain is positive.
pub fn waterfill_sumrate(
    dist: &FadingDistribution,
    partition: &CsitPartition,
    power: f64,
    tol: f64,
) -> Result<(Vec<f64>, f64), OptimError> {
    if !csit_refines_order(dist, partition) {
        return Err(OptimError::Rate(RateError::CsitDoesNotDetermineOrder));
    }
    let n = partition.group_count();
    if power <= 0.0 {
        let phi = vec![0.0; n];
        let value = crate::rates::sumrate_value(dist, partition, &phi, power.max(0.0))?;
        return Ok((phi, value));
    }

    // per-symbol (conditional mass, best gain) tables
    let tables: Vec<Vec<(f64, f64)>> = partition
        .groups()
        .iter()
        .map(|g| {
            g.atom_indices
                .iter()
                .map(|&i| {
                    let a = &dist.atoms()[i];
                    (a.p / g.mass, a.max_gain())
                })
                .collect()
        })
        .collect();
    let marginal = |e: usize, phi: f64| -> f64 {
        tables[e]
            .iter()
            .map(|&(w, g)| w * g / (1.0 + g * phi))
            .sum()
    };
    let marginal_at_zero: Vec<f64> = (0..n).map(|e| marginal(e, 0.0)).collect();
    if marginal_at_zero.iter().all(|&m| m <= 0.0) {
        let phi = vec![0.0; n];
        let value = crate::rates::sumrate_value(dist, partition, &phi, power)?;
        return Ok((phi, value));
    }

    let phi_of_lambda = |lambda: f64| -> Result<Vec<f64>, OptimError> {
        let target = lambda * math::LN_2;
        let mut phi = vec![0.0; n];
        for e in 0..n {
            if marginal_at_zero[e] <= target {
                continue;
            }
            let mut hi = 1.0;
            let mut guard = 0;
            while marginal(e, hi) > target {
                hi *= 2.0;
                guard += 1;
                if guard > 200 {
                    return Err(OptimError::NoConvergence);
                }
            }
            let mut lo = 0.0;
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if marginal(e, mid) > target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            phi[e] = 0.5 * (lo + hi);
        }
        Ok(phi)
    };
    let budget_used = |phi: &[f64]| -> f64 {
        partition
            .groups()
            .iter()
            .zip(phi.iter())
            .map(|(g, &p)| g.mass * p)
            .sum()
    };

    let mut lam_hi = marginal_at_zero.iter().cloned().fold(0.0f64, f64::max) / math::LN_2;
    let mut lam_lo = lam_hi;
    let mut guard = 0;
    while budget_used(&phi_of_lambda(lam_lo)?) < power {
        lam_lo *= 0.5;
        guard += 1;
        if guard > 200 {
            return Err(OptimError::NoConvergence);
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lam_lo + lam_hi);
        if budget_used(&phi_of_lambda(mid)?) >= power {
            lam_lo = mid;
        } else {
            lam_hi = mid;
        }
    }
    let mut phi = phi_of_lambda(0.5 * (lam_lo + lam_hi))?;
    // exact budget equality, then a final KKT residual check
    let used = budget_used(&phi);
    if used > 0.0 {
        let scale = power / used;
        for p in phi.iter_mut() {
            *p *= scale;
        }
    }
    let lambda_star = 0.5 * (lam_lo + lam_hi);
    let worst_residual = (0..n)
        .filter(|&e| phi[e] > 0.0)
        .map(|e| math::abs(marginal(e, phi[e]) - lambda_star * math::LN_2))
        .fold(0.0f64, f64::max);
    if worst_residual > tol.max(1e-7) * (1.0 + lambda_star) {
        return Err(OptimError::NoConvergence);
    }
    let value = crate::rates::sumrate_value(dist, partition, &phi, power)?;
    Ok((phi, value))
}

// ---------------------------------------------------------------------------
// parameter spaces and deterministic search
// ---------------------------------------------------------------------------

/// Which family of evaluators a search drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Message,
    Secrecy,
}

/// Parameterization of a searchable policy subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ParamKind {
    /// Per symbol: `(phi, a, b)` with `(alpha, beta) = (a, b·(1-a))`.
    InnerFree,
    /// Per symbol `phi`; `alpha` per D2 atom, `beta` per D1 atom.
    OuterFree,
    /// Like `OuterFree` with `alpha` tied per `(g2, symbol)` class and
    /// `beta` per `(g1, symbol)` class.
    OuterPerClass,
    /// Single symbol, `alpha = f(g2)`, `beta = g(g1)`, both non-increasing.
    OuterMonotone,
    /// Per symbol `(phi, t)`: satellite fraction `t` on the symbol's own
    /// degradedness branch. The shared search of both bounds.
    OrderStructured,
    /// Per symbol `phi` only (splits pinned at 1).
    PhiOnly,
}

struct Problem<'a> {
    dist: &'a FadingDistribution,
    partition: &'a CsitPartition,
    power: f64,
    weight: [f64; 3],
    /// every group is pure in the degradedness indicator
    order_pure: bool,
    /// per group: true iff its atoms lie in D1 (meaningful when order_pure)
    group_d1: Vec<bool>,
    phi_cap: Vec<f64>,
}

impl<'a> Problem<'a> {
    fn new(
        dist: &'a FadingDistribution,
        partition: &'a CsitPartition,
        power: f64,
        weight: [f64; 3],
    ) -> Self {
        let group_d1: Vec<bool> = partition
            .groups()
            .iter()
            .map(|g| dist.atoms()[g.atom_indices[0]].is_d1())
            .collect();
        let phi_cap: Vec<f64> = partition
            .groups()
            .iter()
            .map(|g| if g.mass > 0.0 { power / g.mass } else { 0.0 })
            .collect();
        Self {
            dist,
            partition,
            power,
            weight,
            order_pure: csit_refines_order(dist, partition),
            group_d1,
            phi_cap,
        }
    }

    fn n_groups(&self) -> usize {
        self.partition.group_count()
    }

    fn n_atoms(&self) -> usize {
        self.dist.len()
    }
}

/// Index bookkeeping for one parameterization.
struct ParamSpace {
    kind: ParamKind,
    upper: Vec<f64>,
    /// for OuterFree/PerClass/Monotone: parameter index feeding each atom's
    /// alpha (D2 side) and beta (D1 side)
    alpha_param_of_atom: Vec<Option<usize>>,
    beta_param_of_atom: Vec<Option<usize>>,
}

impl ParamSpace {
    fn dims(&self) -> usize {
        self.upper.len()
    }
}

fn build_space(problem: &Problem<'_>, kind: ParamKind) -> ParamSpace {
    let n = problem.n_groups();
    let atoms = problem.n_atoms();
    let mut upper = Vec::new();
    let mut alpha_param_of_atom = vec![None; atoms];
    let mut beta_param_of_atom = vec![None; atoms];
    match kind {
        ParamKind::InnerFree => {
            for e in 0..n {
                upper.push(problem.phi_cap[e]);
                upper.push(1.0);
                upper.push(1.0);
            }
        }
        ParamKind::PhiOnly => {
            upper.extend_from_slice(&problem.phi_cap);
        }
        ParamKind::OrderStructured => {
            for e in 0..n {
                upper.push(problem.phi_cap[e]);
                upper.push(1.0);
            }
        }
        ParamKind::OuterFree => {
            upper.extend_from_slice(&problem.phi_cap);
            for (i, atom) in problem.dist.atoms().iter().enumerate() {
                if !atom.is_d1() {
                    alpha_param_of_atom[i] = Some(upper.len());
                    upper.push(1.0);
                }
            }
            for (i, atom) in problem.dist.atoms().iter().enumerate() {
                if atom.is_d1() {
                    beta_param_of_atom[i] = Some(upper.len());
                    upper.push(1.0);
                }
            }
        }
        ParamKind::OuterPerClass => {
            upper.extend_from_slice(&problem.phi_cap);
            // class key: (gain bits, group); one parameter per class that
            // contains at least one atom on the relevant branch
            let mut alpha_classes: Vec<(u64, usize, usize)> = Vec::new(); // (g2 bits, group, param)
            let mut beta_classes: Vec<(u64, usize, usize)> = Vec::new();
            for (i, atom) in problem.dist.atoms().iter().enumerate() {
                let e = problem.partition.group_of_atom(i);
                let ak = (atom.g2.to_bits(), e);
                let idx = match alpha_classes.iter().find(|c| (c.0, c.1) == ak) {
                    Some(c) => c.2,
                    None => {
                        let p = upper.len();
                        upper.push(1.0);
                        alpha_classes.push((ak.0, ak.1, p));
                        p
                    }
                };
                alpha_param_of_atom[i] = Some(idx);
                let bk = (atom.g1.to_bits(), e);
                let idx = match beta_classes.iter().find(|c| (c.0, c.1) == bk) {
                    Some(c) => c.2,
                    None => {
                        let p = upper.len();
                        upper.push(1.0);
                        beta_classes.push((bk.0, bk.1, p));
                        p
                    }
                };
                beta_param_of_atom[i] = Some(idx);
            }
        }
        ParamKind::OuterMonotone => {
            upper.extend_from_slice(&problem.phi_cap);
            // one parameter per distinct gain value; decode enforces the
            // monotone chain
            let mut g2_values: Vec<u64> = problem
                .dist
                .atoms()
                .iter()
                .map(|a| a.g2.to_bits())
                .collect();
            g2_values.sort_unstable();
            g2_values.dedup();
            let alpha_base = upper.len();
            upper.extend(core::iter::repeat_n(1.0, g2_values.len()));
            let mut g1_values: Vec<u64> = problem
                .dist
                .atoms()
                .iter()
                .map(|a| a.g1.to_bits())
                .collect();
            g1_values.sort_unstable();
            g1_values.dedup();
            let beta_base = upper.len();
            upper.extend(core::iter::repeat_n(1.0, g1_values.len()));
            for (i, atom) in problem.dist.atoms().iter().enumerate() {
                let ai = g2_values.binary_search(&atom.g2.to_bits()).unwrap();
                alpha_param_of_atom[i] = Some(alpha_base + ai);
                let bi = g1_values.binary_search(&atom.g1.to_bits()).unwrap();
                beta_param_of_atom[i] = Some(beta_base + bi);
            }
        }
    }
    ParamSpace {
        kind,
        upper,
        alpha_param_of_atom,
        beta_param_of_atom,
    }
}

/// Decoded feasible policy of a parameter vector.
enum Decoded {
    Inner(InnerPolicy),
    Outer(OuterPolicy),
}

fn decode(problem: &Problem<'_>, space: &ParamSpace, theta: &[f64]) -> Decoded {
    let n = problem.n_groups();
    match space.kind {
        ParamKind::InnerFree => {
            let mut phi_raw = Vec::with_capacity(n);
            let mut alpha = Vec::with_capacity(n);
            let mut beta = Vec::with_capacity(n);
            for e in 0..n {
                phi_raw.push(theta[3 * e].max(0.0));
                let a = theta[3 * e + 1].clamp(0.0, 1.0);
                let b = theta[3 * e + 2].clamp(0.0, 1.0);
                alpha.push(a);
                beta.push(b * (1.0 - a));
            }
            Decoded::Inner(InnerPolicy {
                phi: project_budget(&phi_raw, problem.partition, problem.power),
                alpha,
                beta,
            })
        }
        ParamKind::OrderStructured => {
            let mut phi_raw = Vec::with_capacity(n);
            let mut alpha = Vec::with_capacity(n);
            let mut beta = Vec::with_capacity(n);
            for e in 0..n {
                phi_raw.push(theta[2 * e].max(0.0));
                let t = theta[2 * e + 1].clamp(0.0, 1.0);
                if problem.group_d1[e] {
                    alpha.push(0.0);
                    beta.push(t);
                } else {
                    alpha.push(t);
                    beta.push(0.0);
                }
            }
            Decoded::Inner(InnerPolicy {
                phi: project_budget(&phi_raw, problem.partition, problem.power),
                alpha,
                beta,
            })
        }
        ParamKind::PhiOnly => {
            let phi_raw: Vec<f64> = theta.iter().map(|&p| p.max(0.0)).collect();
            Decoded::Outer(OuterPolicy {
                phi: project_budget(&phi_raw, problem.partition, problem.power),
                alpha: vec![1.0; problem.n_atoms()],
                beta: vec![1.0; problem.n_atoms()],
                restriction: OuterRestriction::Free,
            })
        }
        ParamKind::OuterFree | ParamKind::OuterPerClass | ParamKind::OuterMonotone => {
            let phi_raw: Vec<f64> = (0..n).map(|e| theta[e].max(0.0)).collect();
            let atoms = problem.n_atoms();
            let mut alpha = vec![0.0; atoms];
            let mut beta = vec![0.0; atoms];
            for i in 0..atoms {
                if let Some(pi) = space.alpha_param_of_atom[i] {
                    alpha[i] = theta[pi].clamp(0.0, 1.0);
                }
                if let Some(pi) = space.beta_param_of_atom[i] {
                    beta[i] = theta[pi].clamp(0.0, 1.0);
                }
            }
            let restriction = match space.kind {
                ParamKind::OuterPerClass => OuterRestriction::PerGainClass,
                ParamKind::OuterMonotone => {
                    enforce_monotone(problem, &mut alpha, |a| a.g2);
                    enforce_monotone(problem, &mut beta, |a| a.g1);
                    OuterRestriction::MonotoneNoCsit
                }
                _ => OuterRestriction::Free,
            };
            Decoded::Outer(OuterPolicy {
                phi: project_budget(&phi_raw, problem.partition, problem.power),
                alpha,
                beta,
                restriction,
            })
        }
    }
}

/// Forces `values` non-increasing in the keyed gain by a running minimum
/// over atoms sorted by ascending gain.
fn enforce_monotone(
    problem: &Problem<'_>,
    values: &mut [f64],
    key: impl Fn(&crate::fading::GainAtom) -> f64,
) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| key(&problem.dist.atoms()[a]).total_cmp(&key(&problem.dist.atoms()[b])));
    let mut running = 1.0f64;
    for &i in &order {
        running = running.min(values[i]);
        values[i] = running;
    }
}

/// Objective: weighted support of the policy's rate set.
fn evaluate(problem: &Problem<'_>, family: Family, kind: BoundKind, decoded: &Decoded) -> f64 {
    let poly = decoded_polytope(problem, family, kind, decoded);
    geometry::polytope_support(&poly, &problem.weight).0
}

fn decoded_polytope(
    problem: &Problem<'_>,
    family: Family,
    kind: BoundKind,
    decoded: &Decoded,
) -> RatePolytope {
    match (family, decoded) {
        (Family::Message, Decoded::Inner(p)) => {
            inner_polytope(problem.dist, problem.partition, p, problem.power)
                .expect("decoded policy is feasible")
        }
        (Family::Message, Decoded::Outer(p)) => {
            outer_polytope(problem.dist, problem.partition, p, problem.power)
                .expect("decoded policy is feasible")
        }
        (Family::Secrecy, Decoded::Inner(p)) => {
            secrecy_inner_box(problem.dist, problem.partition, p, problem.power)
                .expect("decoded policy is feasible")
                .to_polytope()
        }
        (Family::Secrecy, Decoded::Outer(p)) => {
            let mut sbox = secrecy_outer_box(problem.dist, problem.partition, p, problem.power)
                .expect("decoded policy is feasible");
            if kind == BoundKind::SecrecyOuterNoCommon {
                sbox.r0_cap = 0.0;
            }
            sbox.to_polytope()
        }
    }
}

/// Deterministic xorshift-free stream (splitmix64).
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Halton low-discrepancy point, dimension `dim`, index `index >= 1`.
fn halton(index: usize, dim: usize) -> f64 {
    const PRIMES: [usize; 24] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    ];
    let base = PRIMES[dim % PRIMES.len()];
    let mut f = 1.0;
    let mut r = 0.0;
    let mut i = index;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

struct SearchOutcome {
    theta: Vec<f64>,
    value: f64,
    sweeps: usize,
    converged: bool,
}

/// Structured corner seeds for one space: budget-uniform and cap powers
/// crossed with canonical split patterns.
fn corner_seeds(problem: &Problem<'_>, space: &ParamSpace) -> Vec<Vec<f64>> {
    let n = problem.n_groups();
    let d = space.dims();
    let phi_patterns: Vec<Vec<f64>> = vec![
        vec![problem.power; n],
        problem.phi_cap.clone(),
        vec![0.5 * problem.power; n],
    ];
    let split_levels = [0.0, 1.0, 0.5];
    let mut seeds = Vec::new();
    match space.kind {
        ParamKind::PhiOnly => {
            for phis in &phi_patterns {
                seeds.push(phis.clone());
            }
        }
        ParamKind::InnerFree => {
            for phis in &phi_patterns {
                for &a in &split_levels {
                    for &b in &split_levels {
                        let mut s = vec![0.0; d];
                        for e in 0..n {
                            s[3 * e] = phis[e];
                            s[3 * e + 1] = a;
                            s[3 * e + 2] = b;
                        }
                        seeds.push(s);
                    }
                }
                // order corners: satellite fully on the symbol's own branch
                if problem.order_pure {
                    let mut s = vec![0.0; d];
                    for e in 0..n {
                        s[3 * e] = phis[e];
                        if problem.group_d1[e] {
                            s[3 * e + 2] = 1.0;
                        } else {
                            s[3 * e + 1] = 1.0;
                        }
                    }
                    seeds.push(s);
                }
            }
        }
        ParamKind::OrderStructured => {
            for phis in &phi_patterns {
                for &t in &split_levels {
                    let mut s = vec![0.0; d];
                    for e in 0..n {
                        s[2 * e] = phis[e];
                        s[2 * e + 1] = t;
                    }
                    seeds.push(s);
                }
            }
        }
        ParamKind::OuterFree | ParamKind::OuterPerClass | ParamKind::OuterMonotone => {
            for phis in &phi_patterns {
                for &t in &split_levels {
                    let mut s = vec![0.0; d];
                    s[..n].copy_from_slice(phis);
                    for v in s.iter_mut().skip(n) {
                        *v = t;
                    }
                    seeds.push(s);
                }
            }
        }
    }
    seeds
}

/// Multi-start projected coordinate ascent over one parameter space.
fn run_search(
    problem: &Problem<'_>,
    family: Family,
    kind: BoundKind,
    space: &ParamSpace,
    opts: &OptimizerOptions,
) -> SearchOutcome {
    let eval = |theta: &[f64]| -> f64 {
        let decoded = decode(problem, space, theta);
        evaluate(problem, family, kind, &decoded)
    };
    let d = space.dims();
    if d == 0 {
        return SearchOutcome {
            theta: Vec::new(),
            value: eval(&[]),
            sweeps: 0,
            converged: true,
        };
    }

    let mut seeds = corner_seeds(problem, space);
    let lattice_count = (opts.grid_seed_levels * opts.grid_seed_levels).clamp(4, 64);
    for k in 1..=lattice_count {
        let mut s = Vec::with_capacity(d);
        for dim in 0..d {
            s.push(halton(k, dim) * space.upper[dim]);
        }
        seeds.push(s);
    }

    let mut scored: Vec<(f64, Vec<f64>)> = seeds.into_iter().map(|s| (eval(&s), s)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    scored.truncate(opts.restarts.max(1));

    // jittered restarts beyond the ranked pool share one deterministic stream
    let mut rng = SplitMix64(opts.rng_seed ^ (space.kind as u64).wrapping_mul(0x9E37));
    let jitter_count = opts.restarts.saturating_sub(scored.len()).min(8);
    let base = scored[0].1.clone();
    for _ in 0..jitter_count {
        let mut s = base.clone();
        for (dim, v) in s.iter_mut().enumerate() {
            let span = 0.25 * space.upper[dim].max(1e-9);
            *v = (*v + span * (2.0 * rng.next_unit() - 1.0)).clamp(0.0, space.upper[dim]);
        }
        scored.push((eval(&s), s));
    }

    let mut best = SearchOutcome {
        theta: scored[0].1.clone(),
        value: scored[0].0,
        sweeps: 0,
        converged: true,
    };
    let mut total_sweeps = 0usize;
    let mut all_converged = true;
    for (v0, mut theta) in scored {
        let (v, sweeps, converged) = coordinate_ascent(&eval, &mut theta, space, opts, v0);
        total_sweeps += sweeps;
        all_converged &= converged;
        if v > best.value {
            best.theta = theta;
            best.value = v;
        }
    }
    best.sweeps = total_sweeps;
    best.converged = all_converged;
    best
}

/// Projected coordinate ascent with central-difference direction probes and
/// per-coordinate adaptive steps. Probes mutate one coordinate in place.
fn coordinate_ascent(
    eval: &impl Fn(&[f64]) -> f64,
    theta: &mut Vec<f64>,
    space: &ParamSpace,
    opts: &OptimizerOptions,
    v0: f64,
) -> (f64, usize, bool) {
    const ACCEPT: f64 = 1e-14;
    let d = space.dims();
    let mut value = v0;
    let mut steps: Vec<f64> = space.upper.iter().map(|&u| 0.2 * u.max(1e-12)).collect();
    let mut sweeps = 0usize;
    let probe_at = |theta: &mut Vec<f64>, i: usize, x: f64| -> f64 {
        let saved = theta[i];
        theta[i] = x;
        let v = eval(theta);
        theta[i] = saved;
        v
    };
    loop {
        sweeps += 1;
        let mut improved = false;
        for i in 0..d {
            let up = space.upper[i];
            if up <= 0.0 {
                continue;
            }
            let h = (1e-6 * up).max(1e-10);
            let xp = (theta[i] + h).min(up);
            let xm = (theta[i] - h).max(0.0);
            let grad = if xp > xm {
                (probe_at(theta, i, xp) - probe_at(theta, i, xm)) / (xp - xm)
            } else {
                0.0
            };
            let dir = if grad < 0.0 { -1.0 } else { 1.0 };
            let mut accepted = false;
            for trial_dir in [dir, -dir] {
                let t = (theta[i] + trial_dir * steps[i]).clamp(0.0, up);
                if t == theta[i] {
                    continue;
                }
                let vt = probe_at(theta, i, t);
                if vt > value + ACCEPT {
                    theta[i] = t;
                    value = vt;
                    accepted = true;
                    // greedy extension while the same move keeps paying
                    loop {
                        steps[i] = (steps[i] * 2.0).min(up);
                        let t2 = (theta[i] + trial_dir * steps[i]).clamp(0.0, up);
                        if t2 == theta[i] {
                            break;
                        }
                        let v2 = probe_at(theta, i, t2);
                        if v2 > value + ACCEPT {
                            theta[i] = t2;
                            value = v2;
                        } else {
                            break;
                        }
                    }
                    break;
                }
            }
            if accepted {
                improved = true;
            } else {
                steps[i] *= 0.5;
            }
        }
        let max_step = steps
            .iter()
            .zip(space.upper.iter())
            .map(|(&s, &u)| if u > 0.0 { s / u.max(1e-12) } else { 0.0 })
            .fold(0.0f64, f64::max);
        if !improved && max_step < opts.step_tol {
            return (value, sweeps, true);
        }
        if sweeps >= opts.max_iters {
            return (value, sweeps, false);
        }
    }
}

// ---------------------------------------------------------------------------
// weighted maximization and region tracing
// ---------------------------------------------------------------------------

/// Maps an inner policy onto the order-split structure: the satellite
/// fraction survives only on each symbol's own degradedness branch.
/// Meaningful when the partition is order-pure.
fn split_project(problem: &Problem<'_>, pol: &InnerPolicy) -> InnerPolicy {
    let mut out = pol.clone();
    for e in 0..problem.n_groups() {
        if problem.group_d1[e] {
            out.alpha[e] = 0.0;
        } else {
            out.beta[e] = 0.0;
        }
    }
    out
}

/// Lifts an inner policy into the outer policy space: split values copied
/// onto each atom of their symbol. The outer constraint values pointwise
/// dominate the inner ones at the lifted point.
fn lift_to_outer(problem: &Problem<'_>, pol: &InnerPolicy) -> OuterPolicy {
    let atoms = problem.n_atoms();
    let mut alpha = vec![0.0; atoms];
    let mut beta = vec![0.0; atoms];
    for i in 0..atoms {
        let e = problem.partition.group_of_atom(i);
        alpha[i] = pol.alpha[e];
        beta[i] = pol.beta[e];
    }
    OuterPolicy {
        phi: pol.phi.clone(),
        alpha,
        beta,
        restriction: OuterRestriction::Free,
    }
}

struct Candidate {
    value: f64,
    decoded: Decoded,
}

/// Maximizes `weight · R` over the chosen bound's policy union.
///
/// The search is deterministic given `opts.rng_seed`; `converged` reports
/// whether every ascent met the step tolerance before the sweep cap.
pub fn max_weighted(
    dist: &FadingDistribution,
    partition: &CsitPartition,
    bound: BoundKind,
    weight: [f64; 3],
    restriction: OuterRestriction,
    opts: &OptimizerOptions,
    power: f64,
) -> Result<SupportResult, OptimError> {
    if weight.iter().any(|&w| !w.is_finite() || w < 0.0) || weight.iter().all(|&w| w == 0.0) {
        return Err(OptimError::BadWeight);
    }
    if restriction != OuterRestriction::Free {
        if bound != BoundKind::Outer {
            return Err(OptimError::RestrictionUnavailable {
                reason: "policy-class restrictions apply to the message outer bound only",
            });
        }
        if restriction == OuterRestriction::MonotoneNoCsit
            && (!dist.is_iid() || partition.group_count() != 1)
        {
            return Err(OptimError::RestrictionUnavailable {
                reason: "monotone restriction needs an i.i.d. state law and no CSIT",
            });
        }
    }

    let problem = Problem::new(dist, partition, power.max(0.0), weight);
    let family = if bound.is_secrecy() {
        Family::Secrecy
    } else {
        Family::Message
    };
    let perfect = partition.is_perfect();

    let mut candidates: Vec<Candidate> = Vec::new();
    let mut iterations = 0usize;
    let mut converged = true;

    // Searches run identically (same space, objective, seeds, rng stream) by
    // both an inner and an outer invocation at order-pure CSIT, so the two
    // bounds consume bit-equal outcomes through the coincidence identity.
    let mut shared_kinds: Vec<ParamKind> = Vec::new();
    if problem.order_pure && bound != BoundKind::SecrecyOuterNoCommon {
        shared_kinds.push(ParamKind::OrderStructured);
        if perfect {
            // per-atom splits collapse onto per-symbol ones here, so the
            // outer-side spaces are identity-mappable into inner policies
            shared_kinds.push(ParamKind::OuterFree);
            if family == Family::Message {
                shared_kinds.push(ParamKind::OuterPerClass);
                if dist.is_iid() && partition.group_count() == 1 {
                    shared_kinds.push(ParamKind::OuterMonotone);
                }
            }
        }
    }

    match bound {
        BoundKind::Inner | BoundKind::SecrecyInner => {
            let free = build_space(&problem, ParamKind::InnerFree);
            let iout = run_search(&problem, family, bound, &free, opts);
            iterations += iout.sweeps;
            converged &= iout.converged;
            let Decoded::Inner(inner_best) = decode(&problem, &free, &iout.theta) else {
                unreachable!()
            };
            if problem.order_pure {
                // the order-split projection never loses at order-pure CSIT
                let proj = Decoded::Inner(split_project(&problem, &inner_best));
                let value = evaluate(&problem, family, bound, &proj);
                candidates.push(Candidate {
                    value,
                    decoded: proj,
                });
            }
            candidates.push(Candidate {
                value: iout.value,
                decoded: Decoded::Inner(inner_best),
            });
            for kind in shared_kinds {
                let space = build_space(&problem, kind);
                let sout = run_search(&problem, family, outer_kind_of(family), &space, opts);
                iterations += sout.sweeps;
                converged &= sout.converged;
                let mapped = match decode(&problem, &space, &sout.theta) {
                    Decoded::Inner(pol) => pol,
                    Decoded::Outer(pol) => {
                        // order_split_policy wants atom-indexed power
                        let atom_phi: Vec<f64> = (0..problem.n_atoms())
                            .map(|i| pol.phi[problem.partition.group_of_atom(i)])
                            .collect();
                        crate::rates::order_split_policy(
                            problem.dist,
                            problem.partition,
                            &pol.alpha,
                            &pol.beta,
                            &atom_phi,
                        )
                        .expect("shared outer spaces require perfect CSIT")
                    }
                };
                let dec = Decoded::Inner(mapped);
                let value = evaluate(&problem, family, bound, &dec);
                candidates.push(Candidate {
                    value,
                    decoded: dec,
                });
            }
        }
        BoundKind::Outer | BoundKind::SecrecyOuter => {
            if restriction != OuterRestriction::Free {
                let kind = match restriction {
                    OuterRestriction::PerGainClass => ParamKind::OuterPerClass,
                    OuterRestriction::MonotoneNoCsit => ParamKind::OuterMonotone,
                    OuterRestriction::Free => unreachable!(),
                };
                let space = build_space(&problem, kind);
                let out = run_search(&problem, family, bound, &space, opts);
                iterations += out.sweeps;
                converged &= out.converged;
                candidates.push(Candidate {
                    value: out.value,
                    decoded: decode(&problem, &space, &out.theta),
                });
            } else {
                for kind in shared_kinds {
                    let space = build_space(&problem, kind);
                    let sout = run_search(&problem, family, outer_kind_of(family), &space, opts);
                    iterations += sout.sweeps;
                    converged &= sout.converged;
                    match decode(&problem, &space, &sout.theta) {
                        Decoded::Inner(pol) => {
                            let lifted = Decoded::Outer(lift_to_outer(&problem, &pol));
                            let value = evaluate(&problem, family, bound, &lifted);
                            candidates.push(Candidate {
                                value,
                                decoded: lifted,
                            });
                        }
                        dec @ Decoded::Outer(_) => {
                            candidates.push(Candidate {
                                value: sout.value,
                                decoded: dec,
                            });
                        }
                    }
                }
                if !perfect {
                    // own searches over the genuinely larger per-atom spaces
                    let mut own_kinds = vec![ParamKind::OuterFree];
                    if bound == BoundKind::Outer {
                        own_kinds.push(ParamKind::OuterPerClass);
                        if dist.is_iid() && partition.group_count() == 1 {
                            own_kinds.push(ParamKind::OuterMonotone);
                        }
                    }
                    for kind in own_kinds {
                        let space = build_space(&problem, kind);
                        let out = run_search(&problem, family, bound, &space, opts);
                        iterations += out.sweeps;
                        converged &= out.converged;
                        candidates.push(Candidate {
                            value: out.value,
                            decoded: decode(&problem, &space, &out.theta),
                        });
                    }
                }
                // deterministic re-run of the inner search; the lifted best
                // policy pointwise dominates its inner value
                let inner_kind = match bound {
                    BoundKind::Outer => BoundKind::Inner,
                    _ => BoundKind::SecrecyInner,
                };
                let inner_space = build_space(&problem, ParamKind::InnerFree);
                let iout = run_search(&problem, family, inner_kind, &inner_space, opts);
                iterations += iout.sweeps;
                converged &= iout.converged;
                if let Decoded::Inner(pol) = decode(&problem, &inner_space, &iout.theta) {
                    let lifted = Decoded::Outer(lift_to_outer(&problem, &pol));
                    let value = evaluate(&problem, family, bound, &lifted);
                    candidates.push(Candidate {
                        value,
                        decoded: lifted,
                    });
                }
            }
        }
        BoundKind::SecrecyOuterNoCommon => {
            let space = build_space(&problem, ParamKind::PhiOnly);
            let out = run_search(&problem, family, bound, &space, opts);
            iterations += out.sweeps;
            converged &= out.converged;
            candidates.push(Candidate {
                value: out.value,
                decoded: decode(&problem, &space, &out.theta),
            });
        }
    }

    let best = candidates
        .into_iter()
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one candidate");
    let poly = decoded_polytope(&problem, family, bound, &best.decoded);
    let (value, vertex) = geometry::polytope_support(&poly, &weight);
    let policy = match best.decoded {
        Decoded::Inner(p) => PolicySolution::Inner(p),
        Decoded::Outer(p) => PolicySolution::Outer(p),
    };
    Ok(SupportResult {
        weight,
        value,
        policy,
        vertex,
        converged,
        iterations,
    })
}

fn outer_kind_of(family: Family) -> BoundKind {
    match family {
        Family::Message => BoundKind::Outer,
        Family::Secrecy => BoundKind::SecrecyOuter,
    }
}

/// Collects per-direction support vertices into a comprehensive region:
/// common-rate transfers (message bounds only), then the hull. Origins index
/// into `results`.
pub fn assemble_region(results: &[SupportResult], bound: BoundKind) -> RateRegion {
    let mut labeled: Vec<(RatePoint, usize)> = Vec::new();
    for (i, r) in results.iter().enumerate() {
        labeled.push((r.vertex, i));
        if !bound.is_secrecy() && r.vertex.r0 > 0.0 {
            let v = r.vertex;
            labeled.push((RatePoint::new(0.0, v.r1 + v.r0, v.r2), i));
            labeled.push((RatePoint::new(0.0, v.r1, v.r2 + v.r0), i));
        }
    }
    geometry::hull_with_origins(&labeled)
}

/// Traces a bound's rate region over `opts.directions` weight vectors.
pub fn trace_region(
    dist: &FadingDistribution,
    partition: &CsitPartition,
    bound: BoundKind,
    restriction: OuterRestriction,
    opts: &OptimizerOptions,
    power: f64,
) -> Result<(RateRegion, Vec<SupportResult>), OptimError> {
    let dirs = direction_set(opts.directions);
    let mut results = Vec::with_capacity(dirs.len());
    for w in dirs {
        results.push(max_weighted(
            dist,
            partition,
            bound,
            w,
            restriction,
            opts,
            power,
        )?);
    }
    let region = assemble_region(&results, bound);
    Ok((region, results))
}
