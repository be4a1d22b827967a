//! Channel state law, transmitter side information, and exact expectations.
//!
//! The state of the channel is a pair of power gains `(g1, g2)` with
//! `g_i = |S_i|^2`; every implemented rate functional depends on the state
//! only through these gains, so phases are never stored. The state law is a
//! finite probability mass function over gain pairs (continuous fading
//! enters only through explicit quantization), which keeps every expectation
//! an exact finite sum instead of a Monte-Carlo estimate.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{self, KahanSum};

/// Mass-sum slack accepted on construction before normalization.
pub const MASS_INPUT_TOL: f64 = 1e-9;
/// Mass-sum slack guaranteed after normalization.
pub const MASS_TOL: f64 = 1e-12;

/// Errors from state-law construction and expectation.
#[derive(Debug, Clone, PartialEq)]
pub enum FadingError {
    /// An atom carried zero or negative probability mass.
    NonPositiveMass { index: usize, mass: f64 },
    /// Input masses summed outside `[1 - 1e-9, 1 + 1e-9]`.
    MassSumOutOfTolerance { sum: f64 },
    /// A gain was negative.
    NegativeGain { index: usize, gain: f64 },
    /// Continuous quantizer grid was malformed.
    BadGridSpec { reason: &'static str },
    /// A table CSIT map does not cover every atom, or leaves a symbol unused.
    IncompleteTable { reason: &'static str },
    /// The functional under expectation produced a non-finite value.
    NonFiniteFunctional { index: usize },
}

impl core::fmt::Display for FadingError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::NonPositiveMass { index, mass } => {
                write!(f, "atom {index} has non-positive mass {mass}")
            }
            Self::MassSumOutOfTolerance { sum } => {
                write!(f, "atom masses sum to {sum}, outside 1 ± 1e-9")
            }
            Self::NegativeGain { index, gain } => {
                write!(f, "atom {index} has negative gain {gain}")
            }
            Self::BadGridSpec { reason } => write!(f, "bad quantizer grid: {reason}"),
            Self::IncompleteTable { reason } => write!(f, "bad CSIT table: {reason}"),
            Self::NonFiniteFunctional { index } => {
                write!(f, "functional is not finite on atom {index}")
            }
        }
    }
}

impl core::error::Error for FadingError {}

/// One point of the finite state law: a gain pair and its probability mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainAtom {
    /// Linear power gain to receiver 1 (`|S1|^2`).
    pub g1: f64,
    /// Linear power gain to receiver 2 (`|S2|^2`).
    pub g2: f64,
    /// Probability mass, in `(0, 1]`.
    pub p: f64,
}

impl GainAtom {
    /// The stronger gain; ties belong to receiver 1's side everywhere.
    #[inline]
    pub fn max_gain(&self) -> f64 {
        if self.g1 >= self.g2 {
            self.g1
        } else {
            self.g2
        }
    }

    /// True iff receiver 1 is at least as strong (`g1 >= g2`, ties included).
    #[inline]
    pub fn is_d1(&self) -> bool {
        self.g1 >= self.g2
    }
}

/// Finite state law over gain pairs, canonically sorted by `(g1, g2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingDistribution {
    atoms: Vec<GainAtom>,
    iid: bool,
}

/// Builds a finite state law from `(g1, g2, p)` triples.
///
/// Duplicate gain pairs are merged by summing mass; atoms are sorted into
/// canonical `(g1, g2)` order; masses are rescaled to sum to exactly 1 when
/// the input sum is within `1e-9` of 1, and rejected otherwise.
pub fn build_discrete(atoms: &[(f64, f64, f64)]) -> Result<FadingDistribution, FadingError> {
    for (i, &(g1, g2, p)) in atoms.iter().enumerate() {
        if !p.is_finite() || p <= 0.0 {
            return Err(FadingError::NonPositiveMass { index: i, mass: p });
        }
        if !g1.is_finite() || g1 < 0.0 {
            return Err(FadingError::NegativeGain { index: i, gain: g1 });
        }
        if !g2.is_finite() || g2 < 0.0 {
            return Err(FadingError::NegativeGain { index: i, gain: g2 });
        }
    }
    let mut sum = KahanSum::default();
    for &(_, _, p) in atoms {
        sum.add(p);
    }
    let sum = sum.value();
    if math::abs(sum - 1.0) > MASS_INPUT_TOL {
        return Err(FadingError::MassSumOutOfTolerance { sum });
    }

    let mut merged: Vec<GainAtom> = Vec::with_capacity(atoms.len());
    let mut sorted: Vec<(f64, f64, f64)> = atoms.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    for (g1, g2, p) in sorted {
        match merged.last_mut() {
            Some(last) if last.g1 == g1 && last.g2 == g2 => last.p += p,
            _ => merged.push(GainAtom { g1, g2, p }),
        }
    }
    for a in &mut merged {
        a.p /= sum;
    }
    Ok(FadingDistribution {
        atoms: merged,
        iid: false,
    })
}

impl FadingDistribution {
    /// Marks (or unmarks) the state process as i.i.d. in time. The rate
    /// formulas never read this; it only gates the monotone no-CSIT
    /// outer-bound restriction.
    pub fn with_iid(mut self, iid: bool) -> Self {
        self.iid = iid;
        self
    }

    pub fn is_iid(&self) -> bool {
        self.iid
    }

    pub fn atoms(&self) -> &[GainAtom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Exact expectation `Σ_s p(s)·f(s)` over the finite support
    /// (compensated summation).
    pub fn expect<F: Fn(&GainAtom) -> f64>(&self, f: F) -> Result<f64, FadingError> {
        let mut sum = KahanSum::default();
        for (i, a) in self.atoms.iter().enumerate() {
            let v = f(a);
            if !v.is_finite() {
                return Err(FadingError::NonFiniteFunctional { index: i });
            }
            sum.add(a.p * v);
        }
        Ok(sum.value())
    }
}

/// Kind of deterministic quantizer from states to CSIT symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CsitKind {
    /// Every atom is its own symbol.
    Perfect,
    /// A single symbol: no transmitter side information.
    None,
    /// One bit: the degradedness order, symbol `1(g1 < g2)`. Ties map to
    /// symbol 0 together with the `g1 >= g2` branch.
    DegradednessBit,
    /// Explicit atom-index → symbol-id table.
    Table,
}

/// Deterministic map from state atoms to CSIT symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct CsitMap {
    kind: CsitKind,
    table: Vec<usize>,
    symbol_count: usize,
}

impl CsitMap {
    pub fn perfect() -> Self {
        Self {
            kind: CsitKind::Perfect,
            table: Vec::new(),
            symbol_count: 0,
        }
    }

    pub fn none() -> Self {
        Self {
            kind: CsitKind::None,
            table: Vec::new(),
            symbol_count: 1,
        }
    }

    pub fn degradedness_bit() -> Self {
        Self {
            kind: CsitKind::DegradednessBit,
            table: Vec::new(),
            symbol_count: 0,
        }
    }

    /// Explicit table. Every symbol id in `[0, symbol_count)` must be hit by
    /// at least one atom and every entry must be in range.
    pub fn table(table: Vec<usize>, symbol_count: usize) -> Result<Self, FadingError> {
        if symbol_count == 0 {
            return Err(FadingError::IncompleteTable {
                reason: "symbol_count must be positive",
            });
        }
        let mut hit = vec![false; symbol_count];
        for &e in &table {
            if e >= symbol_count {
                return Err(FadingError::IncompleteTable {
                    reason: "symbol id out of range",
                });
            }
            hit[e] = true;
        }
        if hit.iter().any(|h| !h) {
            return Err(FadingError::IncompleteTable {
                reason: "some symbol id is never used",
            });
        }
        Ok(Self {
            kind: CsitKind::Table,
            table,
            symbol_count,
        })
    }

    pub fn kind(&self) -> &CsitKind {
        &self.kind
    }

    /// Symbol assigned to atom `index` of `dist`.
    pub fn symbol_of(&self, dist: &FadingDistribution, index: usize) -> usize {
        match self.kind {
            CsitKind::Perfect => index,
            CsitKind::None => 0,
            CsitKind::DegradednessBit => {
                let a = &dist.atoms()[index];
                usize::from(a.g1 < a.g2)
            }
            CsitKind::Table => self.table[index],
        }
    }
}

/// One CSIT symbol's preimage: its atoms, their conditional masses, and the
/// symbol mass.
#[derive(Debug, Clone, PartialEq)]
pub struct CsitGroup {
    /// Symbol id this group is the preimage of.
    pub symbol: usize,
    /// Indices into the distribution's atom list.
    pub atom_indices: Vec<usize>,
    /// Symbol mass `p(e)` (sum of the member atom masses).
    pub mass: f64,
}

/// Cached factorization of the state law through a CSIT map. Groups are
/// ordered by symbol id and only non-empty symbols appear.
#[derive(Debug, Clone, PartialEq)]
pub struct CsitPartition {
    groups: Vec<CsitGroup>,
    /// atom index → position of its group in `groups`
    atom_group: Vec<usize>,
}

/// Computes the preimages `ξ⁻¹(e)` of a CSIT map over a distribution.
pub fn partition_by_csit(
    dist: &FadingDistribution,
    csit: &CsitMap,
) -> Result<CsitPartition, FadingError> {
    if let CsitKind::Table = csit.kind {
        if csit.table.len() != dist.len() {
            return Err(FadingError::IncompleteTable {
                reason: "table length does not match atom count",
            });
        }
    }
    let mut symbols: Vec<usize> = Vec::with_capacity(dist.len());
    for i in 0..dist.len() {
        symbols.push(csit.symbol_of(dist, i));
    }
    let mut ids: Vec<usize> = symbols.clone();
    ids.sort_unstable();
    ids.dedup();

    let mut groups: Vec<CsitGroup> = Vec::with_capacity(ids.len());
    let mut atom_group = vec![0usize; dist.len()];
    for (gi, &sym) in ids.iter().enumerate() {
        let mut atom_indices = Vec::new();
        let mut mass = KahanSum::default();
        for (i, &s) in symbols.iter().enumerate() {
            if s == sym {
                atom_indices.push(i);
                atom_group[i] = gi;
                mass.add(dist.atoms()[i].p);
            }
        }
        groups.push(CsitGroup {
            symbol: sym,
            atom_indices,
            mass: mass.value(),
        });
    }
    Ok(CsitPartition { groups, atom_group })
}

impl CsitPartition {
    pub fn groups(&self) -> &[CsitGroup] {
        &self.groups
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    /// Position in `groups()` of the group containing atom `index`.
    #[inline]
    pub fn group_of_atom(&self, index: usize) -> usize {
        self.atom_group[index]
    }

    /// Conditional mass `p(s | e)` of atom `index` within its group.
    pub fn conditional(&self, dist: &FadingDistribution, index: usize) -> f64 {
        dist.atoms()[index].p / self.groups[self.atom_group[index]].mass
    }

    /// True iff every group is a singleton, i.e. the map is injective on
    /// atoms.
    pub fn is_perfect(&self) -> bool {
        self.groups.iter().all(|g| g.atom_indices.len() == 1)
    }
}

/// True iff every CSIT group is constant in the tie-adjusted indicator
/// `1(g1 < g2)`, i.e. the transmitter can read the degradedness order off
/// its side information.
pub fn csit_refines_order(dist: &FadingDistribution, partition: &CsitPartition) -> bool {
    partition.groups.iter().all(|g| {
        let mut it = g.atom_indices.iter().map(|&i| !dist.atoms()[i].is_d1());
        match it.next() {
            None => true,
            Some(first) => it.all(|d| d == first),
        }
    })
}

/// Parametric continuous fading family accepted by the quantizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContinuousFamily {
    /// Independent Rayleigh envelopes: each power gain is exponential with
    /// the given mean.
    RayleighIndependent { mean_gain1: f64, mean_gain2: f64 },
}

/// Quantizer grid: equiprobable cells per axis after truncating `tail_mass`
/// in the upper tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizerGrid {
    pub levels_per_axis: usize,
    pub tail_mass: f64,
}

/// Quantizes a continuous fading law onto a finite gain-pair support.
///
/// Each axis is truncated at the `1 - tail_mass` quantile, renormalized and
/// split into `levels_per_axis` equiprobable cells; each cell is represented
/// by its conditional-mean gain. Joint atoms are products of the marginal
/// cells (the family is independent across receivers).
pub fn quantize_continuous(
    family: ContinuousFamily,
    grid: QuantizerGrid,
) -> Result<FadingDistribution, FadingError> {
    if grid.levels_per_axis < 2 {
        return Err(FadingError::BadGridSpec {
            reason: "levels_per_axis must be at least 2",
        });
    }
    if grid.tail_mass.is_nan() || grid.tail_mass <= 0.0 || grid.tail_mass >= 0.1 {
        return Err(FadingError::BadGridSpec {
            reason: "tail_mass must lie in (0, 0.1)",
        });
    }
    match family {
        ContinuousFamily::RayleighIndependent {
            mean_gain1,
            mean_gain2,
        } => {
            let gain_ok = |g: f64| g.is_finite() && g > 0.0;
            if !gain_ok(mean_gain1) || !gain_ok(mean_gain2) {
                return Err(FadingError::BadGridSpec {
                    reason: "mean gains must be positive",
                });
            }
            let reps1 = exponential_cell_means(mean_gain1, grid.levels_per_axis, grid.tail_mass);
            let reps2 = exponential_cell_means(mean_gain2, grid.levels_per_axis, grid.tail_mass);
            let cell_mass = 1.0 / (grid.levels_per_axis * grid.levels_per_axis) as f64;
            let mut atoms = Vec::with_capacity(reps1.len() * reps2.len());
            for &r1 in &reps1 {
                for &r2 in &reps2 {
                    atoms.push((r1, r2, cell_mass));
                }
            }
            build_discrete(&atoms)
        }
    }
}

/// Conditional means of the truncated-and-renormalized exponential law over
/// its equiprobable cells. Cell edges satisfy `exp(-x_k/mu) = 1 - (1-t)k/L`
/// exactly, which keeps the per-cell integrals in closed form.
fn exponential_cell_means(mean: f64, levels: usize, tail_mass: f64) -> Vec<f64> {
    let l = levels as f64;
    let kept = 1.0 - tail_mass;
    let survival = |k: usize| 1.0 - kept * (k as f64) / l;
    let edge = |k: usize| -mean * math::ln(survival(k));
    let mut reps = Vec::with_capacity(levels);
    for k in 0..levels {
        let (sa, sb) = (survival(k), survival(k + 1));
        let (xa, xb) = (edge(k), edge(k + 1));
        // ∫ x e^{-x/mu}/mu dx over [xa, xb] = (xa + mu)·sa - (xb + mu)·sb
        reps.push(mean + (xa * sa - xb * sb) / (sa - sb));
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_atom() -> FadingDistribution {
        build_discrete(&[(3.0, 1.0, 0.5), (1.0, 3.0, 0.5)]).unwrap()
    }

    #[test]
    fn build_two_atoms() {
        let d = two_atom();
        assert_eq!(d.len(), 2);
        let mass: f64 = d.atoms().iter().map(|a| a.p).sum();
        assert!((mass - 1.0).abs() <= MASS_TOL);
        // canonical order: (1,3) before (3,1)
        assert_eq!(d.atoms()[0].g1, 1.0);
        assert_eq!(d.atoms()[1].g1, 3.0);
    }

    #[test]
    fn build_merges_duplicates() {
        let d = build_discrete(&[(3.0, 1.0, 0.25), (3.0, 1.0, 0.25), (1.0, 3.0, 0.5)]).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(
            d.atoms()[0],
            GainAtom {
                g1: 1.0,
                g2: 3.0,
                p: 0.5
            }
        );
        assert_eq!(
            d.atoms()[1],
            GainAtom {
                g1: 3.0,
                g2: 1.0,
                p: 0.5
            }
        );
    }

    #[test]
    fn build_rejects_bad_mass_sum() {
        let err = build_discrete(&[(3.0, 1.0, 0.5), (1.0, 3.0, 0.6)]).unwrap_err();
        assert!(matches!(err, FadingError::MassSumOutOfTolerance { .. }));
    }

    #[test]
    fn build_rejects_nonpositive_mass_and_negative_gain() {
        assert!(matches!(
            build_discrete(&[(1.0, 1.0, 0.0), (1.0, 2.0, 1.0)]),
            Err(FadingError::NonPositiveMass { index: 0, .. })
        ));
        assert!(matches!(
            build_discrete(&[(-1.0, 1.0, 1.0)]),
            Err(FadingError::NegativeGain { index: 0, .. })
        ));
    }

    #[test]
    fn build_normalizes_slightly_off_sums() {
        let d = build_discrete(&[(1.0, 2.0, 0.5 + 4e-10), (2.0, 1.0, 0.5 + 4e-10)]).unwrap();
        let mass: f64 = d.atoms().iter().map(|a| a.p).sum();
        assert!((mass - 1.0).abs() <= MASS_TOL);
    }

    #[test]
    fn expect_basics() {
        let d = two_atom();
        assert_eq!(d.expect(|_| 1.0).unwrap(), 1.0);
        assert_eq!(d.expect(|a| a.g1).unwrap(), 2.0);
        let psi3 = crate::rates::psi(3.0);
        let psi1 = crate::rates::psi(1.0);
        let e = d.expect(|a| crate::rates::psi(a.g1)).unwrap();
        assert!((e - 0.5 * (psi3 + psi1)).abs() < 1e-15);
        assert!((e - 1.5).abs() < 1e-15);
    }

    #[test]
    fn expect_rejects_non_finite() {
        let d = two_atom();
        let err = d.expect(|a| 1.0 / (a.g1 - 3.0)).unwrap_err();
        assert!(matches!(err, FadingError::NonFiniteFunctional { .. }));
    }

    #[test]
    fn degradedness_bit_partition() {
        let d = two_atom();
        let part = partition_by_csit(&d, &CsitMap::degradedness_bit()).unwrap();
        assert_eq!(part.group_count(), 2);
        // symbol 0 holds the g1 >= g2 atom (3,1); symbol 1 holds (1,3)
        assert_eq!(part.groups()[0].symbol, 0);
        assert_eq!(part.groups()[0].atom_indices, vec![1]);
        assert_eq!(part.groups()[1].atom_indices, vec![0]);
        assert!((part.groups()[0].mass - 0.5).abs() < 1e-15);
        assert!((part.groups()[1].mass - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tie_atom_maps_to_symbol_zero() {
        let d = build_discrete(&[(2.0, 2.0, 0.5), (1.0, 3.0, 0.5)]).unwrap();
        let part = partition_by_csit(&d, &CsitMap::degradedness_bit()).unwrap();
        let tie_idx = d.atoms().iter().position(|a| a.g1 == 2.0).unwrap();
        let g = part.group_of_atom(tie_idx);
        assert_eq!(part.groups()[g].symbol, 0);
    }

    #[test]
    fn none_partition_is_single_group() {
        let d = two_atom();
        let part = partition_by_csit(&d, &CsitMap::none()).unwrap();
        assert_eq!(part.group_count(), 1);
        assert_eq!(part.groups()[0].atom_indices.len(), 2);
        assert!((part.groups()[0].mass - 1.0).abs() < 1e-15);
    }

    #[test]
    fn perfect_partition_is_singletons() {
        let d = build_discrete(&[(1.0, 2.0, 0.25), (2.0, 1.0, 0.25), (3.0, 3.0, 0.5)]).unwrap();
        let part = partition_by_csit(&d, &CsitMap::perfect()).unwrap();
        assert_eq!(part.group_count(), 3);
        assert!(part.is_perfect());
    }

    #[test]
    fn table_validation() {
        assert!(CsitMap::table(vec![0, 1], 2).is_ok());
        assert!(matches!(
            CsitMap::table(vec![0, 2], 2),
            Err(FadingError::IncompleteTable { .. })
        ));
        assert!(matches!(
            CsitMap::table(vec![0, 0], 2),
            Err(FadingError::IncompleteTable { .. })
        ));
        let d = two_atom();
        let short = CsitMap::table(vec![0], 1).unwrap();
        assert!(matches!(
            partition_by_csit(&d, &short),
            Err(FadingError::IncompleteTable { .. })
        ));
    }

    #[test]
    fn partition_conserves_mass() {
        let d = build_discrete(&[(1.0, 2.0, 0.3), (2.0, 1.0, 0.2), (3.0, 3.0, 0.5)]).unwrap();
        let csit = CsitMap::table(vec![0, 1, 0], 2).unwrap();
        let part = partition_by_csit(&d, &csit).unwrap();
        let total: f64 = part.groups().iter().map(|g| g.mass).sum();
        assert!((total - 1.0).abs() <= MASS_TOL);
        for g in part.groups() {
            let grp: f64 = g.atom_indices.iter().map(|&i| d.atoms()[i].p).sum();
            assert!((grp - g.mass).abs() <= 1e-12);
            let cond: f64 = g
                .atom_indices
                .iter()
                .map(|&i| part.conditional(&d, i))
                .sum();
            assert!((cond - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn refines_order_cases() {
        let d = two_atom();
        let bit = partition_by_csit(&d, &CsitMap::degradedness_bit()).unwrap();
        assert!(csit_refines_order(&d, &bit));
        let none = partition_by_csit(&d, &CsitMap::none()).unwrap();
        assert!(!csit_refines_order(&d, &none));
        let perfect = partition_by_csit(&d, &CsitMap::perfect()).unwrap();
        assert!(csit_refines_order(&d, &perfect));
    }

    #[test]
    fn quantizer_rejects_bad_grids() {
        let fam = ContinuousFamily::RayleighIndependent {
            mean_gain1: 1.0,
            mean_gain2: 1.0,
        };
        assert!(matches!(
            quantize_continuous(
                fam,
                QuantizerGrid {
                    levels_per_axis: 1,
                    tail_mass: 0.01
                }
            ),
            Err(FadingError::BadGridSpec { .. })
        ));
        assert!(matches!(
            quantize_continuous(
                fam,
                QuantizerGrid {
                    levels_per_axis: 4,
                    tail_mass: 0.5
                }
            ),
            Err(FadingError::BadGridSpec { .. })
        ));
    }

    #[test]
    fn quantizer_two_level_marginals() {
        let fam = ContinuousFamily::RayleighIndependent {
            mean_gain1: 1.0,
            mean_gain2: 1.0,
        };
        let d = quantize_continuous(
            fam,
            QuantizerGrid {
                levels_per_axis: 2,
                tail_mass: 0.01,
            },
        )
        .unwrap();
        assert_eq!(d.len(), 4);
        let mass: f64 = d.atoms().iter().map(|a| a.p).sum();
        assert!((mass - 1.0).abs() <= MASS_TOL);
        // marginal masses are (0.5, 0.5) on each axis
        let g1_values: Vec<f64> = {
            let mut v: Vec<f64> = d.atoms().iter().map(|a| a.g1).collect();
            v.dedup();
            v
        };
        assert_eq!(g1_values.len(), 2);
        for gv in g1_values {
            let m: f64 = d.atoms().iter().filter(|a| a.g1 == gv).map(|a| a.p).sum();
            assert!((m - 0.5).abs() < 1e-12);
        }
        // closed-form cell means for mu=1, t=0.01, L=2 (independent CDF oracle)
        let expected = [0.3030011937334899, 1.6039650651354376];
        let mut reps: Vec<f64> = d.atoms().iter().map(|a| a.g1).collect();
        reps.dedup();
        for (r, e) in reps.iter().zip(expected.iter()) {
            assert!((r - e).abs() < 1e-12, "rep {r} vs oracle {e}");
        }
    }

    #[test]
    fn quantizer_marginal_mean_close_to_analytic() {
        let fam = ContinuousFamily::RayleighIndependent {
            mean_gain1: 2.0,
            mean_gain2: 1.0,
        };
        let d = quantize_continuous(
            fam,
            QuantizerGrid {
                levels_per_axis: 64,
                tail_mass: 1e-3,
            },
        )
        .unwrap();
        let mean1 = d.expect(|a| a.g1).unwrap();
        assert!((mean1 - 2.0).abs() / 2.0 < 0.02, "mean {mean1}");
    }
}
