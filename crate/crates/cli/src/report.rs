//! Run reports: everything a run computed, in a deterministic JSON payload.
//! Wall-clock time is deliberately not part of the payload so that reruns
//! with the same config and seed are byte-identical; it goes to stdout.

use fadingbc_core as core;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool_version: String,
    pub command: String,
    pub config: RunConfig,
    pub traces: Vec<TraceReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sum_rate: Option<SumRateReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    /// `inner`, `outer`, `secrecy_inner`, `secrecy_outer`, or
    /// `secrecy_outer_nocommon`.
    pub bound: String,
    pub restriction: String,
    pub support_table: Vec<SupportRow>,
    /// Hull extreme points in canonical order.
    pub vertices: Vec<[f64; 3]>,
    /// For each vertex, the index into `support_table` of the run that
    /// generated it.
    pub origins: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportRow {
    pub direction: [f64; 3],
    pub value: f64,
    pub vertex: [f64; 3],
    pub converged: bool,
    pub iterations: usize,
    pub policy: PolicyReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyReport {
    pub kind: String,
    pub phi: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumRateReport {
    pub phi: Vec<f64>,
    pub value_bits: f64,
}

pub fn bound_name(bound: core::BoundKind) -> &'static str {
    match bound {
        core::BoundKind::Inner => "inner",
        core::BoundKind::Outer => "outer",
        core::BoundKind::SecrecyInner => "secrecy_inner",
        core::BoundKind::SecrecyOuter => "secrecy_outer",
        core::BoundKind::SecrecyOuterNoCommon => "secrecy_outer_nocommon",
    }
}

pub fn restriction_name(r: core::OuterRestriction) -> &'static str {
    match r {
        core::OuterRestriction::Free => "free",
        core::OuterRestriction::PerGainClass => "thm4",
        core::OuterRestriction::MonotoneNoCsit => "thm4-monotone",
    }
}

pub fn policy_report(p: &core::PolicySolution) -> PolicyReport {
    match p {
        core::PolicySolution::Inner(pol) => PolicyReport {
            kind: "inner".into(),
            phi: pol.phi.clone(),
            alpha: pol.alpha.clone(),
            beta: pol.beta.clone(),
        },
        core::PolicySolution::Outer(pol) => PolicyReport {
            kind: "outer".into(),
            phi: pol.phi.clone(),
            alpha: pol.alpha.clone(),
            beta: pol.beta.clone(),
        },
    }
}

pub fn trace_report(
    bound: core::BoundKind,
    restriction: core::OuterRestriction,
    region: &core::RateRegion,
    results: &[core::SupportResult],
) -> TraceReport {
    TraceReport {
        bound: bound_name(bound).into(),
        restriction: restriction_name(restriction).into(),
        support_table: results
            .iter()
            .map(|r| SupportRow {
                direction: r.weight,
                value: r.value,
                vertex: r.vertex.coords(),
                converged: r.converged,
                iterations: r.iterations,
                policy: policy_report(&r.policy),
            })
            .collect(),
        vertices: region.vertices().iter().map(|v| v.coords()).collect(),
        origins: region.origins().to_vec(),
    }
}

pub fn to_json(report: &RunReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

pub fn from_json(text: &str) -> Result<RunReport, serde_json::Error> {
    serde_json::from_str(text)
}
