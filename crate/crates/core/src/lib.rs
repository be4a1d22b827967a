//! Numerical toolkit for the two-user ergodic fading Gaussian broadcast
//! channel with partial transmitter side information: inner and outer
//! capacity bounds, secrecy-capacity bounds, exact sum-rate water-filling,
//! region tracing, and an independent Gaussian log-det validation oracle.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default
//! `std` feature for freestanding use. All state laws are finite gain-pair
//! distributions, so every expectation is an exact sum and every identity
//! check is a sharp numeric comparison rather than a Monte-Carlo estimate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod math;

pub mod fading;
pub mod geometry;
pub mod optimizer;
pub mod oracle;
pub mod rates;

pub use fading::{
    build_discrete, csit_refines_order, partition_by_csit, quantize_continuous, ContinuousFamily,
    CsitKind, CsitMap, CsitPartition, FadingDistribution, FadingError, GainAtom, QuantizerGrid,
};
pub use geometry::{
    contains, hull, hull_with_origins, polytope_support, polytope_vertices, slice_at_r0,
    transfer_closure, ContainsReport, GeometryError, RatePoint, RateRegion,
};
pub use optimizer::{
    assemble_region, direction_set, max_weighted, project_budget, trace_region, waterfill_sumrate,
    BoundKind, OptimError, OptimizerOptions, PolicySolution, SupportResult,
};
pub use oracle::{
    gaussian_mi, joint_covariance, marton_functionals, verify_closed_forms, ClosedFormReport,
    MartonFunctionals, OracleError, SignalingSpec,
};
pub use rates::{
    inner_polytope, order_split_policy, outer_polytope, psi, secrecy_inner_box, secrecy_outer_box,
    secrecy_outer_nocommon, sumrate_value, ConstraintPattern, InnerPolicy, OuterPolicy,
    OuterRestriction, RateError, RatePolytope, SecrecyBox,
};
