//! Closed-form rate functionals for the two-user fading Gaussian broadcast
//! channel: inner/outer rate polytopes, secrecy rate boxes, and the sum-rate
//! capacity value under order-revealing side information.
//!
//! Conventions, fixed once here and reused everywhere:
//! - all rates are in bits per channel use, `psi(x) = log2(1 + x)`;
//! - the state space splits into `D1 = {g1 >= g2}` (ties included) and
//!   `D2 = {g1 < g2}`, applied uniformly to every formula;
//! - every expectation is an exact compensated sum over the finite support.
//!
//! The inner bound evaluates a two-direction superposition signaling scheme:
//! per side-information symbol, total power `phi`, a fraction `beta` on the
//! satellite layer decoded by receiver 1, `alpha` on the satellite layer
//! decoded by receiver 2, and the rest on the cloud center. The outer bound
//! carries the same split parameters per state atom, with full power
//! (no split) credited to the stronger receiver on each degradedness event.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::fading::{csit_refines_order, CsitPartition, FadingDistribution};
use crate::math::{self, KahanSum};

/// Budget slack accepted when validating `Σ p(e)·phi(e) <= P`.
pub const BUDGET_TOL: f64 = 1e-9;
/// Slack accepted on `alpha/beta` ranges and the `alpha + beta <= 1` coupling.
pub const SPLIT_TOL: f64 = 1e-12;

/// Errors from policy validation and rate evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum RateError {
    /// The policy violates a range, coupling, or budget constraint.
    PolicyInfeasible { reason: String },
    /// The side information does not determine the degradedness order.
    CsitDoesNotDetermineOrder,
    /// The operation needs symbols to be in bijection with atoms.
    RequiresPerfectCsit,
}

impl core::fmt::Display for RateError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::PolicyInfeasible { reason } => write!(f, "infeasible policy: {reason}"),
            Self::CsitDoesNotDetermineOrder => {
                write!(f, "CSIT does not determine the degradedness order")
            }
            Self::RequiresPerfectCsit => write!(f, "operation requires perfect CSIT"),
        }
    }
}

impl core::error::Error for RateError {}

/// `log2(1 + x)` for `x >= 0`; exactly 0 at 0, strictly increasing, concave.
///
/// Panics on negative input: a negative SNR indicates a bug upstream, not
/// a recoverable condition.
#[inline]
pub fn psi(x: f64) -> f64 {
    assert!(x >= 0.0, "psi: negative argument {x}");
    math::ln_1p(x) / math::LN_2
}

/// Per-symbol power and split fractions for the inner bound.
///
/// Vectors are indexed by group position in the corresponding
/// [`CsitPartition`] (groups are ordered by symbol id).
#[derive(Debug, Clone, PartialEq)]
pub struct InnerPolicy {
    pub phi: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl InnerPolicy {
    /// All-zero policy over `n` symbols.
    pub fn zero(n: usize) -> Self {
        Self {
            phi: vec![0.0; n],
            alpha: vec![0.0; n],
            beta: vec![0.0; n],
        }
    }

    /// Checks ranges, the `alpha + beta <= 1` coupling, and the average
    /// power budget against `partition` and `power`.
    pub fn validate(&self, partition: &CsitPartition, power: f64) -> Result<(), RateError> {
        let n = partition.group_count();
        if self.phi.len() != n || self.alpha.len() != n || self.beta.len() != n {
            return Err(RateError::PolicyInfeasible {
                reason: String::from("policy length does not match symbol count"),
            });
        }
        for i in 0..n {
            if !self.phi[i].is_finite() || self.phi[i] < 0.0 {
                return Err(RateError::PolicyInfeasible {
                    reason: String::from("phi must be finite and nonnegative"),
                });
            }
            if !in_unit(self.alpha[i]) || !in_unit(self.beta[i]) {
                return Err(RateError::PolicyInfeasible {
                    reason: String::from("alpha/beta must lie in [0, 1]"),
                });
            }
            if self.alpha[i] + self.beta[i] > 1.0 + SPLIT_TOL {
                return Err(RateError::PolicyInfeasible {
                    reason: String::from("alpha + beta exceeds 1"),
                });
            }
        }
        check_budget(&self.phi, partition, power)
    }
}

/// Optimizer-domain restrictions on the outer-bound split functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OuterRestriction {
    /// `alpha`, `beta` free per atom.
    Free,
    /// `alpha` equal across atoms sharing `(g2, symbol)`; `beta` equal
    /// across atoms sharing `(g1, symbol)`.
    PerGainClass,
    /// Single symbol, i.i.d. state: `alpha` non-increasing in `g2` and
    /// `beta` non-increasing in `g1` across atoms.
    MonotoneNoCsit,
}

/// Per-atom split fractions and per-symbol power for the outer bound.
///
/// `phi` is indexed by group position; `alpha` and `beta` by atom index.
/// Only `alpha` on `D2` atoms and `beta` on `D1` atoms enter any formula.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterPolicy {
    pub phi: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub restriction: OuterRestriction,
}

impl OuterPolicy {
    pub fn zero(symbols: usize, atoms: usize) -> Self {
        Self {
            phi: vec![0.0; symbols],
            alpha: vec![0.0; atoms],
            beta: vec![0.0; atoms],
            restriction: OuterRestriction::Free,
        }
    }

    pub fn validate(
        &self,
        dist: &FadingDistribution,
        partition: &CsitPartition,
        power: f64,
    ) -> Result<(), RateError> {
        if self.phi.len() != partition.group_count()
            || self.alpha.len() != dist.len()
            || self.beta.len() != dist.len()
        {
            return Err(RateError::PolicyInfeasible {
                reason: String::from("policy length does not match symbol/atom count"),
            });
        }
        if self.phi.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(RateError::PolicyInfeasible {
                reason: String::from("phi must be finite and nonnegative"),
            });
        }
        if self
            .alpha
            .iter()
            .chain(self.beta.iter())
            .any(|&v| !in_unit(v))
        {
            return Err(RateError::PolicyInfeasible {
                reason: String::from("alpha/beta must lie in [0, 1]"),
            });
        }
        match self.restriction {
            OuterRestriction::Free => {}
            OuterRestriction::PerGainClass => {
                check_classes(dist, partition, &self.alpha, |a| a.g2, "alpha")?;
                check_classes(dist, partition, &self.beta, |a| a.g1, "beta")?;
            }
            OuterRestriction::MonotoneNoCsit => {
                if partition.group_count() != 1 {
                    return Err(RateError::PolicyInfeasible {
                        reason: String::from("monotone restriction needs a single symbol"),
                    });
                }
                check_monotone(dist, &self.alpha, |a| a.g2, "alpha")?;
                check_monotone(dist, &self.beta, |a| a.g1, "beta")?;
            }
        }
        check_budget(&self.phi, partition, power)
    }
}

fn in_unit(v: f64) -> bool {
    v.is_finite() && (-SPLIT_TOL..=1.0 + SPLIT_TOL).contains(&v)
}

fn check_budget(phi: &[f64], partition: &CsitPartition, power: f64) -> Result<(), RateError> {
    let mut sum = KahanSum::default();
    for (g, &p) in partition.groups().iter().zip(phi.iter()) {
        sum.add(g.mass * p);
    }
    if sum.value() > power + BUDGET_TOL {
        return Err(RateError::PolicyInfeasible {
            reason: String::from("average power budget exceeded"),
        });
    }
    Ok(())
}

fn check_classes(
    dist: &FadingDistribution,
    partition: &CsitPartition,
    values: &[f64],
    key_gain: impl Fn(&crate::fading::GainAtom) -> f64,
    name: &str,
) -> Result<(), RateError> {
    for i in 0..dist.len() {
        for j in (i + 1)..dist.len() {
            let same_class = key_gain(&dist.atoms()[i]) == key_gain(&dist.atoms()[j])
                && partition.group_of_atom(i) == partition.group_of_atom(j);
            if same_class && math::abs(values[i] - values[j]) > SPLIT_TOL {
                return Err(RateError::PolicyInfeasible {
                    reason: alloc::format!("{name} differs within a (gain, symbol) class"),
                });
            }
        }
    }
    Ok(())
}

fn check_monotone(
    dist: &FadingDistribution,
    values: &[f64],
    key_gain: impl Fn(&crate::fading::GainAtom) -> f64,
    name: &str,
) -> Result<(), RateError> {
    for i in 0..dist.len() {
        for j in 0..dist.len() {
            let (gi, gj) = (key_gain(&dist.atoms()[i]), key_gain(&dist.atoms()[j]));
            if gi >= gj && values[i] > values[j] + SPLIT_TOL {
                return Err(RateError::PolicyInfeasible {
                    reason: alloc::format!("{name} must be non-increasing in its gain"),
                });
            }
        }
    }
    Ok(())
}

/// Coefficient pattern of one rate constraint over `(R0, R1, R2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintPattern {
    /// `R0 + R1 <= rhs`
    CommonPlus1,
    /// `R0 + R2 <= rhs`
    CommonPlus2,
    /// `R0 + R1 + R2 <= rhs`
    Total,
    /// `R0 <= rhs`
    Cap0,
    /// `R1 <= rhs`
    Cap1,
    /// `R2 <= rhs`
    Cap2,
}

impl ConstraintPattern {
    /// 0/1 coefficients over `(R0, R1, R2)`.
    pub fn coeffs(self) -> [f64; 3] {
        match self {
            Self::CommonPlus1 => [1.0, 1.0, 0.0],
            Self::CommonPlus2 => [1.0, 0.0, 1.0],
            Self::Total => [1.0, 1.0, 1.0],
            Self::Cap0 => [1.0, 0.0, 0.0],
            Self::Cap1 => [0.0, 1.0, 0.0],
            Self::Cap2 => [0.0, 0.0, 1.0],
        }
    }
}

/// One policy's linear constraint set in `(R0, R1, R2)`, plus the implicit
/// nonnegativity of each rate.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePolytope {
    pub constraints: Vec<(ConstraintPattern, f64)>,
}

impl RatePolytope {
    pub fn new(constraints: Vec<(ConstraintPattern, f64)>) -> Self {
        debug_assert!(constraints
            .iter()
            .all(|&(_, rhs)| rhs >= 0.0 && rhs.is_finite()));
        Self { constraints }
    }
}

/// Product-form secrecy region `{R0 <= r0_cap, R1 <= r1_cap, R2 <= r2_cap}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyBox {
    pub r0_cap: f64,
    pub r1_cap: f64,
    pub r2_cap: f64,
}

impl SecrecyBox {
    /// View as a rate polytope with one cap per coordinate.
    pub fn to_polytope(self) -> RatePolytope {
        RatePolytope::new(vec![
            (ConstraintPattern::Cap0, self.r0_cap),
            (ConstraintPattern::Cap1, self.r1_cap),
            (ConstraintPattern::Cap2, self.r2_cap),
        ])
    }
}

/// SNR of a power-`num_power` layer seen through gain `g` with a
/// power-`intf_power` same-cell interferer.
#[inline]
fn layer_snr(g: f64, num_power: f64, intf_power: f64) -> f64 {
    let num = g * num_power;
    let den = g * intf_power + 1.0;
    (num / den).max(0.0)
}

/// Four-constraint inner-bound polytope of one policy.
///
/// The right-hand sides, with `alpha, beta, phi` read at the symbol of each
/// atom:
/// - `R0+R1   <= E[psi(g1(1-a)f / (g1 a f + 1))]`
/// - `R0+R2   <= E[psi(g2(1-b)f / (g2 b f + 1))]`
/// - `R0+R1+R2 <= E[psi(g1 b f / (g1 a f + 1))] + line-2 rhs`
/// - `R0+R1+R2 <= line-1 rhs + E[psi(g2 a f / (g2 b f + 1))]`
pub fn inner_polytope(
    dist: &FadingDistribution,
    partition: &CsitPartition,
    policy: &InnerPolicy,
    power: f64,
) -> Result<RatePolytope, RateError> {
    policy.validate(partition, power)?;
    let mut t1 = KahanSum::default();
    let mut t2 = KahanSum::default();
    let mut t3_extra = KahanSum::default();
    let mut t4_extra = KahanSum::default();
    for (i, atom) in dist.atoms().iter().enumerate() {
        let e = partition.group_of_atom(i);
        let (f, a, b) = (
            policy.phi[e],
            clamp01(policy.alpha[e]),
            clamp01(policy.beta[e]),
        );
        t1.add(atom.p * psi(layer_snr(atom.g1, (1.0 - a).max(0.0) * f, a * f)));
        t2.add(atom.p * psi(layer_snr(atom.g2, (1.0 - b).max(0.0) * f, b * f)));
        t3_extra.add(atom.p * psi(layer_snr(atom.g1, b * f, a * f)));
        t4_extra.add(atom.p * psi(layer_snr(atom.g2, a * f, b * f)));
    }
    let (t1, t2) = (t1.value(), t2.value());
    Ok(RatePolytope::new(vec![
        (ConstraintPattern::CommonPlus1, t1),
        (ConstraintPattern::CommonPlus2, t2),
        (ConstraintPattern::Total, t3_extra.value() + t2),
        (ConstraintPattern::Total, t1 + t4_extra.value()),
    ]))
}

/// Four-constraint outer-bound polytope of one policy.
///
/// Uses the canonical partition `D1 = {g1 >= g2}`, `D2 = {g1 < g2}`:
/// - `R0+R1   <= E[psi(g1(1-a)f/(g1 a f+1))·1_D2] + E[psi(g1 f)·1_D1]`
/// - `R0+R2   <= E[psi(g2(1-b)f/(g2 b f+1))·1_D1] + E[psi(g2 f)·1_D2]`
/// - `R0+R1+R2 <= E[(psi(g1 b f) + psi(g2(1-b)f/(g2 b f+1)))·1_D1] + E[psi(g2 f)·1_D2]`
/// - `R0+R1+R2 <= E[(psi(g2 a f) + psi(g1(1-a)f/(g1 a f+1)))·1_D2] + E[psi(g1 f)·1_D1]`
pub fn outer_polytope(
    dist: &FadingDistribution,
    partition: &CsitPartition,
    policy: &OuterPolicy,
    power: f64,
) -> Result<RatePolytope, RateError> {
    policy.validate(dist, partition, power)?;
    let mut c1 = KahanSum::default();
    let mut c2 = KahanSum::default();
    let mut c3 = KahanSum::default();
    let mut c4 = KahanSum::default();
    for (i, atom) in dist.atoms().iter().enumerate() {
        let f = policy.phi[partition.group_of_atom(i)];
        let a = clamp01(policy.alpha[i]);
        let b = clamp01(policy.beta[i]);
        if atom.is_d1() {
            let full1 = psi((atom.g1 * f).max(0.0));
            c1.add(atom.p * full1);
            let beta_pair = psi((atom.g1 * b * f).max(0.0))
                + psi(layer_snr(atom.g2, (1.0 - b).max(0.0) * f, b * f));
            c2.add(atom.p * psi(layer_snr(atom.g2, (1.0 - b).max(0.0) * f, b * f)));
            c3.add(atom.p * beta_pair);
            c4.add(atom.p * full1);
        } else {
            let full2 = psi((atom.g2 * f).max(0.0));
            let alpha_head = psi(layer_snr(atom.g1, (1.0 - a).max(0.0) * f, a * f));
            c1.add(atom.p * alpha_head);
            c2.add(atom.p * full2);
            c3.add(atom.p * full2);
            c4.add(atom.p * (psi((atom.g2 * a * f).max(0.0)) + alpha_head));
        }
    }
    Ok(RatePolytope::new(vec![
        (ConstraintPattern::CommonPlus1, c1.value()),
        (ConstraintPattern::CommonPlus2, c2.value()),
        (ConstraintPattern::Total, c3.value()),
        (ConstraintPattern::Total, c4.value()),
    ]))
}

/// Secrecy rate box achieved by one inner policy.
///
/// The positive part is applied to the full expectation difference, not per
/// atom.
pub fn secrecy_inner_box(
    dist: &FadingDistribution,
    partition: &CsitPartition,
    policy: &InnerPolicy,
    power: f64,
) -> Result<SecrecyBox, RateError> {
    policy.validate(partition, power)?;
    let mut r0_1 = KahanSum::default();
    let mut r0_2 = KahanSum::default();
    let mut r1_gain = KahanSum::default();
    let mut r1_leak = KahanSum::default();
    let mut r2_gain = KahanSum::default();
    let mut r2_leak = KahanSum::default();
    for (i, atom) in dist.atoms().iter().enumerate() {
        let e = partition.group_of_atom(i);
        let (f, a, b) = (
            policy.phi[e],
            clamp01(policy.alpha[e]),
            clamp01(policy.beta[e]),
        );
        let common = (1.0 - a - b).max(0.0);
        r0_1.add(atom.p * psi(layer_snr(atom.g1, common * f, (a + b) * f)));
        r0_2.add(atom.p * psi(layer_snr(atom.g2, common * f, (a + b) * f)));
        r1_gain.add(atom.p * psi(layer_snr(atom.g1, b * f, a * f)));
        r1_leak.add(atom.p * psi((atom.g2 * b * f).max(0.0)));
        r2_gain.add(atom.p * psi(layer_snr(atom.g2, a * f, b * f)));
        r2_leak.add(atom.p * psi((atom.g1 * a * f).max(0.0)));
    }
    Ok(SecrecyBox {
        r0_cap: r0_1.value().min(r0_2.value()),
        r1_cap: (r1_gain.value() - r1_leak.value()).max(0.0),
        r2_cap: (r2_gain.value() - r2_leak.value()).max(0.0),
    })
}

/// Secrecy rate box bounding any scheme, for one outer policy.
///
/// Each confidential-rate integrand is nonnegative on its own event, so no
/// positive-part clamp is needed.
pub fn secrecy_outer_box(
    dist: &FadingDistribution,
    partition: &CsitPartition,
    policy: &OuterPolicy,
    power: f64,
) -> Result<SecrecyBox, RateError> {
    policy.validate(dist, partition, power)?;
    let mut r0_1 = KahanSum::default();
    let mut r0_2 = KahanSum::default();
    let mut r1 = KahanSum::default();
    let mut r2 = KahanSum::default();
    for (i, atom) in dist.atoms().iter().enumerate() {
        let f = policy.phi[partition.group_of_atom(i)];
        let a = clamp01(policy.alpha[i]);
        let b = clamp01(policy.beta[i]);
        if atom.is_d1() {
            r0_1.add(atom.p * psi(layer_snr(atom.g1, (1.0 - b).max(0.0) * f, b * f)));
            r0_2.add(atom.p * psi(layer_snr(atom.g2, (1.0 - b).max(0.0) * f, b * f)));
            r1.add(atom.p * (psi((atom.g1 * b * f).max(0.0)) - psi((atom.g2 * b * f).max(0.0))));
        } else {
            r0_1.add(atom.p * psi(layer_snr(atom.g1, (1.0 - a).max(0.0) * f, a * f)));
            r0_2.add(atom.p * psi(layer_snr(atom.g2, (1.0 - a).max(0.0) * f, a * f)));
            r2.add(atom.p * (psi((atom.g2 * a * f).max(0.0)) - psi((atom.g1 * a * f).max(0.0))));
        }
    }
    // every integrand is nonnegative on its event; the clamp only absorbs
    // last-ulp rounding of the log evaluations
    Ok(SecrecyBox {
        r0_cap: r0_1.value().min(r0_2.value()),
        r1_cap: r1.value().max(0.0),
        r2_cap: r2.value().max(0.0),
    })
}

/// Confidential-rate caps without a common message: the outer box at
/// `alpha == beta == 1`, which drops the split functions entirely.
pub fn secrecy_outer_nocommon(
    dist: &FadingDistribution,
    partition: &CsitPartition,
    phi: &[f64],
    power: f64,
) -> Result<(f64, f64), RateError> {
    let atoms = dist.len();
    let policy = OuterPolicy {
        phi: phi.to_vec(),
        alpha: vec![1.0; atoms],
        beta: vec![1.0; atoms],
        restriction: OuterRestriction::Free,
    };
    let sbox = secrecy_outer_box(dist, partition, &policy, power)?;
    Ok((sbox.r1_cap, sbox.r2_cap))
}

/// Sum-rate capacity value `E[psi(max(g1, g2)·phi(E))]` of one power policy.
///
/// Valid only when the side information determines the degradedness order.
pub fn sumrate_value(
    dist: &FadingDistribution,
    partition: &CsitPartition,
    phi: &[f64],
    power: f64,
) -> Result<f64, RateError> {
    if !csit_refines_order(dist, partition) {
        return Err(RateError::CsitDoesNotDetermineOrder);
    }
    if phi.len() != partition.group_count() {
        return Err(RateError::PolicyInfeasible {
            reason: String::from("phi length does not match symbol count"),
        });
    }
    if phi.iter().any(|&p| !p.is_finite() || p < 0.0) {
        return Err(RateError::PolicyInfeasible {
            reason: String::from("phi must be finite and nonnegative"),
        });
    }
    check_budget(phi, partition, power)?;
    let mut sum = KahanSum::default();
    for (i, atom) in dist.atoms().iter().enumerate() {
        let f = phi[partition.group_of_atom(i)];
        sum.add(atom.p * psi((atom.max_gain() * f).max(0.0)));
    }
    Ok(sum.value())
}

/// Builds the inner policy that matches the outer bound's per-atom split:
/// the satellite layer goes to the stronger receiver of each atom
/// (`alpha = alpha*` on `D2`, `beta = beta*` on `D1`, 0 elsewhere).
///
/// Requires perfect CSIT so that symbols are in bijection with atoms;
/// `alpha_star`, `beta_star`, `phi` are indexed by atom.
pub fn order_split_policy(
    dist: &FadingDistribution,
    partition: &CsitPartition,
    alpha_star: &[f64],
    beta_star: &[f64],
    phi: &[f64],
) -> Result<InnerPolicy, RateError> {
    if !partition.is_perfect() || partition.group_count() != dist.len() {
        return Err(RateError::RequiresPerfectCsit);
    }
    if alpha_star.len() != dist.len() || beta_star.len() != dist.len() || phi.len() != dist.len() {
        return Err(RateError::PolicyInfeasible {
            reason: String::from("parameter length does not match atom count"),
        });
    }
    let n = partition.group_count();
    let mut pol = InnerPolicy::zero(n);
    for e in 0..n {
        let atom_idx = partition.groups()[e].atom_indices[0];
        let atom = &dist.atoms()[atom_idx];
        pol.phi[e] = phi[atom_idx];
        if atom.is_d1() {
            pol.beta[e] = beta_star[atom_idx];
        } else {
            pol.alpha[e] = alpha_star[atom_idx];
        }
    }
    Ok(pol)
}

#[inline]
fn clamp01(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}
