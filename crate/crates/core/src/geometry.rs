//! Small-scale 3-D rate-region machinery: polytope vertices, support
//! functions, comprehensive convex hulls, containment reports, and the
//! common-rate transfer closure.
//!
//! Regions here are comprehensive (downward closed): capacity regions are,
//! and augmenting hulls with coordinate projections keeps containment checks
//! meaningful near the axes. Geometry tolerances are fixed at 1e-9 in bits;
//! optimizer-facing comparisons use 1e-6.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::rates::RatePolytope;

/// Geometric coincidence/dedup tolerance, in bits.
pub const GEOM_TOL: f64 = 1e-9;

/// Acceptance band for vertex feasibility. Three-plane solves with 0/1
/// coefficients are accurate to ~1e-14, so this is generous for genuine
/// vertices while keeping the computed support monotone in the constraint
/// values well below the 1e-9 comparison tolerances.
const VERTEX_FEAS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryError {
    EmptyRegion,
}

impl core::fmt::Display for GeometryError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::EmptyRegion => write!(f, "region has no vertices"),
        }
    }
}

impl core::error::Error for GeometryError {}

/// A rate triple in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
}

impl RatePoint {
    pub const ORIGIN: Self = Self {
        r0: 0.0,
        r1: 0.0,
        r2: 0.0,
    };

    pub fn new(r0: f64, r1: f64, r2: f64) -> Self {
        Self { r0, r1, r2 }
    }

    #[inline]
    pub fn coords(&self) -> [f64; 3] {
        [self.r0, self.r1, self.r2]
    }

    #[inline]
    pub fn dot(&self, w: &[f64; 3]) -> f64 {
        self.r0 * w[0] + self.r1 * w[1] + self.r2 * w[2]
    }

    fn linf(&self, other: &Self) -> f64 {
        math::abs(self.r0 - other.r0)
            .max(math::abs(self.r1 - other.r1))
            .max(math::abs(self.r2 - other.r2))
    }
}

/// Convex, comprehensive rate region represented by its extreme points in
/// canonical (lexicographic) order, with per-vertex generator provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRegion {
    vertices: Vec<RatePoint>,
    /// Index of the generating input point for each vertex (parallel to
    /// `vertices`); callers map these onto policies or directions.
    origins: Vec<usize>,
}

impl RateRegion {
    pub fn vertices(&self) -> &[RatePoint] {
        &self.vertices
    }

    pub fn origins(&self) -> &[usize] {
        &self.origins
    }

    /// `max_v w·v` over the extreme points.
    pub fn support(&self, w: &[f64; 3]) -> Result<f64, GeometryError> {
        self.vertices
            .iter()
            .map(|v| v.dot(w))
            .max_by(f64::total_cmp)
            .ok_or(GeometryError::EmptyRegion)
    }
}

/// Enumerates the extreme points of a [`RatePolytope`] (its constraints plus
/// the nonnegativity of each rate).
///
/// Every vertex of such a polytope is the intersection of three active,
/// independent planes, so enumerating plane triples, filtering feasibility
/// and deduplicating yields exactly the extreme-point set.
pub fn polytope_vertices(poly: &RatePolytope) -> Vec<RatePoint> {
    let mut out: Vec<RatePoint> = Vec::new();
    for_each_vertex(poly, |p| {
        if !out.iter().any(|q| q.linf(&p) <= GEOM_TOL) {
            out.push(p);
        }
    });
    canonical_sort(&mut out);
    out
}

/// Support value and maximizing vertex of one polytope, without collecting
/// the vertex list. The polytope always contains the origin, so the result
/// is well defined.
pub fn polytope_support(poly: &RatePolytope, w: &[f64; 3]) -> (f64, RatePoint) {
    let mut best = (0.0f64, RatePoint::ORIGIN);
    for_each_vertex(poly, |p| {
        let v = p.dot(w);
        if v > best.0 {
            best = (v, p);
        }
    });
    best
}

/// Visits all feasible intersections of three planes drawn from the
/// constraints and coordinate planes. Visited points may repeat.
fn for_each_vertex(poly: &RatePolytope, mut visit: impl FnMut(RatePoint)) {
    // plane list: constraint planes (c·r = rhs) then coordinate planes r_i = 0
    let mut planes: Vec<([f64; 3], f64)> = poly
        .constraints
        .iter()
        .map(|&(pat, rhs)| (pat.coeffs(), rhs))
        .collect();
    planes.push(([1.0, 0.0, 0.0], 0.0));
    planes.push(([0.0, 1.0, 0.0], 0.0));
    planes.push(([0.0, 0.0, 1.0], 0.0));

    let n = planes.len();
    let feasible = |p: &RatePoint| -> bool {
        if p.r0 < -VERTEX_FEAS_TOL || p.r1 < -VERTEX_FEAS_TOL || p.r2 < -VERTEX_FEAS_TOL {
            return false;
        }
        poly.constraints
            .iter()
            .all(|&(pat, rhs)| p.dot(&pat.coeffs()) <= rhs + VERTEX_FEAS_TOL)
    };

    visit(RatePoint::ORIGIN); // rhs >= 0 always admits the origin
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                if let Some(p) = solve3(&planes[i], &planes[j], &planes[k]) {
                    let snapped = RatePoint::new(p.r0.max(0.0), p.r1.max(0.0), p.r2.max(0.0));
                    if feasible(&p) {
                        visit(snapped);
                    }
                }
            }
        }
    }
}

/// Solves the 3x3 system given by three planes; `None` when near-singular.
fn solve3(a: &([f64; 3], f64), b: &([f64; 3], f64), c: &([f64; 3], f64)) -> Option<RatePoint> {
    let m = [a.0, b.0, c.0];
    let rhs = [a.1, b.1, c.1];
    let det = det3(&m);
    // constraint coefficients are 0/1, so a fixed absolute threshold is safe
    if math::abs(det) < 1e-12 {
        return None;
    }
    let mut x = [0.0f64; 3];
    for (i, xi) in x.iter_mut().enumerate() {
        let mut mm = m;
        for r in 0..3 {
            mm[r][i] = rhs[r];
        }
        *xi = det3(&mm) / det;
    }
    Some(RatePoint::new(x[0], x[1], x[2]))
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Common-rate transfer: a point `(r0, r1, r2)` with `r0 > 0` also yields
/// `(0, r1 + r0, r2)` and `(0, r1, r2 + r0)`; intermediate transfers are
/// recovered by the subsequent hull.
pub fn transfer_closure(points: &[RatePoint]) -> Vec<RatePoint> {
    let mut out = points.to_vec();
    for p in points {
        if p.r0 > 0.0 {
            out.push(RatePoint::new(0.0, p.r1 + p.r0, p.r2));
            out.push(RatePoint::new(0.0, p.r1, p.r2 + p.r0));
        }
    }
    out
}

/// Comprehensive convex hull: extreme points of
/// `conv(points ∪ their coordinate maskings)`, canonically ordered.
pub fn hull(points: &[RatePoint]) -> RateRegion {
    let labeled: Vec<(RatePoint, usize)> = points.iter().copied().zip(0..points.len()).collect();
    hull_with_origins(&labeled)
}

/// [`hull`] with caller-provided provenance labels that survive masking and
/// extremity filtering.
pub fn hull_with_origins(points: &[(RatePoint, usize)]) -> RateRegion {
    if points.is_empty() {
        return RateRegion {
            vertices: vec![RatePoint::ORIGIN],
            origins: vec![usize::MAX],
        };
    }
    // candidates: every coordinate masking of every point (vertices of the
    // downward closure of each point's box)
    let mut cand: Vec<(RatePoint, usize)> = Vec::with_capacity(points.len() * 8);
    for &(p, label) in points {
        for mask in 0..8u8 {
            let q = RatePoint::new(
                if mask & 1 != 0 { 0.0 } else { p.r0.max(0.0) },
                if mask & 2 != 0 { 0.0 } else { p.r1.max(0.0) },
                if mask & 4 != 0 { 0.0 } else { p.r2.max(0.0) },
            );
            if !cand.iter().any(|(c, _)| c.linf(&q) <= GEOM_TOL) {
                cand.push((q, label));
            }
        }
    }

    let mut keep: Vec<(RatePoint, usize)> = Vec::new();
    for (i, &(p, label)) in cand.iter().enumerate() {
        let others: Vec<RatePoint> = cand
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &(q, _))| q)
            .collect();
        if !in_convex_hull(&p, &others) {
            keep.push((p, label));
        }
    }
    if keep.is_empty() {
        // all candidates coincide (single point repeated); keep the first
        keep.push(cand[0]);
    }
    keep.sort_by(|a, b| {
        a.0.r0
            .total_cmp(&b.0.r0)
            .then(a.0.r1.total_cmp(&b.0.r1))
            .then(a.0.r2.total_cmp(&b.0.r2))
    });
    RateRegion {
        vertices: keep.iter().map(|&(p, _)| p).collect(),
        origins: keep.iter().map(|&(_, l)| l).collect(),
    }
}

/// Containment report of `inner ⊆ outer` over sampled directions.
#[derive(Debug, Clone, PartialEq)]
pub struct ContainsReport {
    pub ok: bool,
    pub worst_gap: f64,
    pub worst_dir: [f64; 3],
}

/// Checks `support(inner, w) <= support(outer, w) + tol` over the sampled
/// directions; `worst_gap` is the largest inner-minus-outer excess.
pub fn contains(
    outer: &RateRegion,
    inner: &RateRegion,
    directions: &[[f64; 3]],
    tol: f64,
) -> Result<ContainsReport, GeometryError> {
    let mut worst_gap = f64::NEG_INFINITY;
    let mut worst_dir = [0.0; 3];
    for w in directions {
        let gap = inner.support(w)? - outer.support(w)?;
        if gap > worst_gap {
            worst_gap = gap;
            worst_dir = *w;
        }
    }
    Ok(ContainsReport {
        ok: worst_gap <= tol,
        worst_gap,
        worst_dir,
    })
}

/// Extreme points of the 2-D slice `{(r1, r2) : (r0, r1, r2) ∈ region}`,
/// traced by support optimization over quarter-circle directions and hulled.
/// Returns an error when `r0` exceeds the region's reach.
pub fn slice_at_r0(
    region: &RateRegion,
    r0: f64,
    directions: usize,
) -> Result<Vec<[f64; 2]>, GeometryError> {
    let max_r0 = region
        .vertices
        .iter()
        .map(|v| v.r0)
        .max_by(f64::total_cmp)
        .ok_or(GeometryError::EmptyRegion)?;
    if r0 < 0.0 || r0 > max_r0 + GEOM_TOL {
        return Err(GeometryError::EmptyRegion);
    }
    let verts = &region.vertices;
    let mut pts: Vec<[f64; 2]> = Vec::new();
    let n = directions.max(2);
    for k in 0..=n {
        let theta = core::f64::consts::FRAC_PI_2 * (k as f64) / (n as f64);
        let w = [math::cos(theta), math::sin(theta)];
        if let Some(y) = slice_support_point(verts, r0, &w) {
            pts.push(y);
            pts.push([y[0], 0.0]);
            pts.push([0.0, y[1]]);
        }
    }
    pts.push([0.0, 0.0]);
    Ok(hull2d(&mut pts))
}

/// Maximizes `w·(r1, r2)` over convex weights λ with `Σ λ v = (r0, ·, ·)`,
/// via the little equality-form simplex below.
fn slice_support_point(verts: &[RatePoint], r0: f64, w: &[f64; 2]) -> Option<[f64; 2]> {
    let n = verts.len();
    let mut a = vec![vec![0.0f64; n]; 2];
    for (j, v) in verts.iter().enumerate() {
        a[0][j] = v.r0;
        a[1][j] = 1.0;
    }
    let b = [r0, 1.0];
    let c: Vec<f64> = verts.iter().map(|v| w[0] * v.r1 + w[1] * v.r2).collect();
    let lambda = simplex_max(&a, &b, &c)?;
    let mut y = [0.0f64; 2];
    for (j, v) in verts.iter().enumerate() {
        y[0] += lambda[j] * v.r1;
        y[1] += lambda[j] * v.r2;
    }
    Some(y)
}

/// `p ∈ conv(points)` via phase-1 simplex feasibility on
/// `Σ λ q = p, Σ λ = 1, λ >= 0`.
fn in_convex_hull(p: &RatePoint, points: &[RatePoint]) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = points.len();
    let mut a = vec![vec![0.0f64; n]; 4];
    for (j, q) in points.iter().enumerate() {
        a[0][j] = q.r0;
        a[1][j] = q.r1;
        a[2][j] = q.r2;
        a[3][j] = 1.0;
    }
    let b = [p.r0, p.r1, p.r2, 1.0];
    let scale = 1.0 + math::abs(p.r0) + math::abs(p.r1) + math::abs(p.r2);
    phase1_residual(&a, &b).is_some_and(|r| r <= GEOM_TOL * scale)
}

/// Phase-1 simplex: minimal total artificial mass for `Ax = b, x >= 0`
/// (`b >= 0` required). Returns `None` only on iteration blowup.
fn phase1_residual(a: &[Vec<f64>], b: &[f64]) -> Option<f64> {
    let m = a.len();
    let n = a[0].len();
    debug_assert!(b.iter().all(|&x| x >= 0.0));
    // tableau columns: n structurals + m artificials + rhs
    let mut t = vec![vec![0.0f64; n + m + 1]; m];
    let mut basis: Vec<usize> = (n..n + m).collect();
    for i in 0..m {
        for j in 0..n {
            t[i][j] = a[i][j];
        }
        t[i][n + i] = 1.0;
        t[i][n + m] = b[i];
    }
    // minimize sum of artificials == maximize -(sum)
    let costs: Vec<f64> = (0..n + m).map(|j| if j < n { 0.0 } else { -1.0 }).collect();
    if !simplex_run(&mut t, &mut basis, &costs, n + m) {
        return None;
    }
    let mut resid = 0.0;
    for (i, &bi) in basis.iter().enumerate() {
        if bi >= n {
            resid += t[i][n + m];
        }
    }
    Some(resid)
}

/// Two-phase simplex for `max c·x  s.t.  Ax = b, x >= 0` with `b >= 0`.
/// Returns the optimal `x`, or `None` if infeasible/unbounded.
fn simplex_max(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Option<Vec<f64>> {
    let m = a.len();
    let n = a[0].len();
    let mut t = vec![vec![0.0f64; n + m + 1]; m];
    let mut basis: Vec<usize> = (n..n + m).collect();
    for i in 0..m {
        for j in 0..n {
            t[i][j] = a[i][j];
        }
        t[i][n + i] = 1.0;
        t[i][n + m] = b[i];
    }
    let phase1: Vec<f64> = (0..n + m).map(|j| if j < n { 0.0 } else { -1.0 }).collect();
    if !simplex_run(&mut t, &mut basis, &phase1, n + m) {
        return None;
    }
    let resid: f64 = basis
        .iter()
        .enumerate()
        .filter(|&(_, &bi)| bi >= n)
        .map(|(i, _)| t[i][n + m])
        .sum();
    if resid > 1e-9 {
        return None; // infeasible
    }
    // phase 2: artificials barred from entering (cost treated as -inf by
    // restricting the entering scan to structural columns)
    let mut costs = vec![0.0f64; n + m];
    costs[..n].copy_from_slice(&c[..n]);
    if !simplex_run(&mut t, &mut basis, &costs, n) {
        return None;
    }
    let mut x = vec![0.0f64; n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            x[bi] = t[i][n + m];
        }
    }
    Some(x)
}

/// Bland-rule primal simplex sweep on an explicit tableau. `enter_limit`
/// bounds the entering-column scan (used to bar artificials in phase 2).
/// Returns false on iteration blowup or unboundedness.
fn simplex_run(t: &mut [Vec<f64>], basis: &mut [usize], costs: &[f64], enter_limit: usize) -> bool {
    let m = t.len();
    let rhs = t[0].len() - 1;
    let max_iters = 50 * (rhs + m);
    for _ in 0..max_iters {
        // reduced costs: c_j - c_B · column_j  (tableau is B^-1 A)
        let mut entering = None;
        for j in 0..enter_limit {
            if basis.contains(&j) {
                continue;
            }
            let mut red = costs[j];
            for i in 0..m {
                red -= costs[basis[i]] * t[i][j];
            }
            if red > 1e-9 {
                entering = Some(j);
                break; // Bland: first improving index
            }
        }
        let Some(e) = entering else { return true };
        // ratio test, Bland tie-break on smallest basis index
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            if t[i][e] > 1e-11 {
                let ratio = t[i][rhs] / t[i][e];
                if ratio < best - 1e-12
                    || (math::abs(ratio - best) <= 1e-12
                        && leave.is_some_and(|l| basis[i] < basis[l]))
                {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(l) = leave else { return false }; // unbounded
        pivot(t, l, e);
        basis[l] = e;
    }
    false
}

#[allow(clippy::needless_range_loop)] // row aliasing defeats iterator forms
fn pivot(t: &mut [Vec<f64>], row: usize, col: usize) {
    let m = t.len();
    let w = t[0].len();
    let pv = t[row][col];
    for j in 0..w {
        t[row][j] /= pv;
    }
    for i in 0..m {
        if i != row {
            let f = t[i][col];
            if f != 0.0 {
                for j in 0..w {
                    t[i][j] -= f * t[row][j];
                }
            }
        }
    }
}

fn canonical_sort(points: &mut [RatePoint]) {
    points.sort_by(|a, b| {
        a.r0.total_cmp(&b.r0)
            .then(a.r1.total_cmp(&b.r1))
            .then(a.r2.total_cmp(&b.r2))
    });
}

/// Andrew monotone-chain hull in 2-D, deduplicated, counterclockwise.
fn hull2d(pts: &mut Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| math::abs(a[0] - b[0]) <= GEOM_TOL && math::abs(a[1] - b[1]) <= GEOM_TOL);
    if pts.len() <= 2 {
        return pts.clone();
    }
    let cross = |o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for p in pts.iter() {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= GEOM_TOL
        {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= GEOM_TOL
        {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
