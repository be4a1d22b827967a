//! Independent validation path for the closed-form rate expressions.
//!
//! Rebuilds each mutual-information functional of the layered Gaussian
//! signaling from first principles: assemble the joint covariance of the
//! three unit-variance signal layers and the two channel outputs, then
//! evaluate conditional mutual informations by Schur complements and
//! log-determinants. Nothing here shares an algebraic step with the
//! `rates` module, which is the point.
//!
//! Unit convention: the channel is circularly-symmetric complex, and every
//! implemented functional depends only on gain magnitudes, so the covariance
//! is assembled with real surrogates (amplitudes `sqrt(g_i)`, unit noise).
//! [`gaussian_mi`] is the real-Gaussian `½·log2` det-ratio; a complex
//! variable carries two i.i.d. real components, so the layered-signaling
//! functionals in [`marton_functionals`] are twice the real value, which
//! lands them exactly on `psi(x) = log2(1 + x)` per channel use.

use alloc::vec::Vec;

use crate::fading::{CsitPartition, FadingDistribution};
use crate::math;
use crate::rates::{psi, InnerPolicy, RateError};

/// Ridge added to conditioning blocks so split fractions of exactly 0 or 1
/// do not produce spurious singularities.
pub const CONDITIONING_RIDGE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    /// Signaling parameters outside their domain.
    InvalidSpec { reason: &'static str },
    /// Conditioning covariance not invertible beyond the ridge.
    SingularConditioning,
    /// A mutual information evaluated below `-1e-9` bits.
    NegativeMutualInformation { bits: f64 },
    /// Policy rejected by the rate-functional validators.
    Policy(RateError),
}

impl core::fmt::Display for OracleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::InvalidSpec { reason } => write!(f, "invalid signaling spec: {reason}"),
            Self::SingularConditioning => write!(f, "conditioning covariance is singular"),
            Self::NegativeMutualInformation { bits } => {
                write!(f, "mutual information evaluated to {bits} bits")
            }
            Self::Policy(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for OracleError {}

impl From<RateError> for OracleError {
    fn from(e: RateError) -> Self {
        Self::Policy(e)
    }
}

/// One CSIT symbol's signaling parameters on one state atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalingSpec {
    pub g1: f64,
    pub g2: f64,
    pub phi: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl SignalingSpec {
    pub fn validate(&self) -> Result<(), OracleError> {
        let ok_unit = |v: f64| (0.0..=1.0).contains(&v);
        let bad_gain = |g: f64| g.is_nan() || g < 0.0;
        if bad_gain(self.g1) || bad_gain(self.g2) {
            return Err(OracleError::InvalidSpec {
                reason: "negative gain",
            });
        }
        if self.phi.is_nan() || self.phi < 0.0 {
            return Err(OracleError::InvalidSpec {
                reason: "negative power",
            });
        }
        if !ok_unit(self.alpha) || !ok_unit(self.beta) {
            return Err(OracleError::InvalidSpec {
                reason: "split fraction outside [0, 1]",
            });
        }
        if self.alpha + self.beta > 1.0 + 1e-12 {
            return Err(OracleError::InvalidSpec {
                reason: "alpha + beta exceeds 1",
            });
        }
        Ok(())
    }
}

/// Variable order of the joint covariance.
pub const W: usize = 0;
pub const U: usize = 1;
pub const V: usize = 2;
pub const Y1: usize = 3;
pub const Y2: usize = 4;

pub type Cov5 = [[f64; 5]; 5];

/// Joint covariance of `(W, U, V, Y1, Y2)` under the layered signaling
/// `X = sqrt(phi)·(sqrt(beta)·U + sqrt(1-alpha-beta)·W + sqrt(alpha)·V)`,
/// `Y_i = sqrt(g_i)·X + Z_i` with unit-variance independent layers and
/// noises.
pub fn joint_covariance(spec: &SignalingSpec) -> Result<Cov5, OracleError> {
    spec.validate()?;
    let common = (1.0 - spec.alpha - spec.beta).max(0.0);
    let s = [math::sqrt(spec.g1), math::sqrt(spec.g2)];
    let load_w = math::sqrt(common * spec.phi);
    let load_u = math::sqrt(spec.beta * spec.phi);
    let load_v = math::sqrt(spec.alpha * spec.phi);

    let mut c = [[0.0f64; 5]; 5];
    c[W][W] = 1.0;
    c[U][U] = 1.0;
    c[V][V] = 1.0;
    for (y, si) in [(Y1, s[0]), (Y2, s[1])] {
        c[y][W] = si * load_w;
        c[W][y] = c[y][W];
        c[y][U] = si * load_u;
        c[U][y] = c[y][U];
        c[y][V] = si * load_v;
        c[V][y] = c[y][V];
    }
    let x_var = spec.phi * (common + spec.alpha + spec.beta);
    c[Y1][Y1] = spec.g1 * x_var + 1.0;
    c[Y2][Y2] = spec.g2 * x_var + 1.0;
    c[Y1][Y2] = s[0] * s[1] * x_var;
    c[Y2][Y1] = c[Y1][Y2];
    Ok(c)
}

/// True iff `m + tol·I` admits a Cholesky factorization, i.e. all
/// eigenvalues exceed `-tol`.
pub fn is_psd(m: &Cov5, n: usize, tol: f64) -> bool {
    let mut a = [[0.0f64; 5]; 5];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = m[i][j];
        }
        a[i][i] += tol;
    }
    // in-place Cholesky attempt
    for k in 0..n {
        for j in 0..k {
            a[k][k] -= a[k][j] * a[k][j];
        }
        if a[k][k] <= 0.0 {
            return false;
        }
        a[k][k] = math::sqrt(a[k][k]);
        for i in (k + 1)..n {
            for j in 0..k {
                a[i][k] -= a[i][j] * a[k][j];
            }
            a[i][k] /= a[k][k];
        }
    }
    true
}

/// Conditional mutual information `I(A; B | C)` of a real jointly Gaussian
/// vector, in bits:
/// `½·log2( det Σ_{A|C} · det Σ_{B|C} / det Σ_{AB|C} )`.
///
/// Conditional covariances come from Schur complements against
/// `Σ_CC + ridge·I`. Values in `[-1e-9, 0)` are clamped to 0; anything more
/// negative is reported as an error.
pub fn gaussian_mi(
    cov: &Cov5,
    group_a: &[usize],
    group_b: &[usize],
    conditioning: &[usize],
) -> Result<f64, OracleError> {
    debug_assert!(group_a.iter().all(|i| !group_b.contains(i)));
    let det_given_c = |vars: &[usize]| -> Result<f64, OracleError> {
        let m = conditional_cov(cov, vars, conditioning)?;
        let d = det(&m, vars.len());
        if d.is_nan() || d <= 0.0 {
            return Err(OracleError::SingularConditioning);
        }
        Ok(d)
    };
    let da = det_given_c(group_a)?;
    let db = det_given_c(group_b)?;
    let mut ab: Vec<usize> = group_a.to_vec();
    ab.extend_from_slice(group_b);
    let dab = det_given_c(&ab)?;
    let bits = 0.5 * math::log2(da * db / dab);
    if bits < -1e-9 {
        return Err(OracleError::NegativeMutualInformation { bits });
    }
    Ok(bits.max(0.0))
}

/// `Σ_{A|C} = Σ_AA − Σ_AC (Σ_CC + ridge·I)^{-1} Σ_CA` as a dense block.
fn conditional_cov(cov: &Cov5, a: &[usize], c: &[usize]) -> Result<[[f64; 5]; 5], OracleError> {
    let na = a.len();
    let nc = c.len();
    let mut out = [[0.0f64; 5]; 5];
    for i in 0..na {
        for j in 0..na {
            out[i][j] = cov[a[i]][a[j]];
        }
    }
    if nc == 0 {
        return Ok(out);
    }
    // solve (Σ_CC + ridge) X = Σ_CA, then subtract Σ_AC X
    let mut scc = [[0.0f64; 5]; 5];
    let mut sca = [[0.0f64; 5]; 5];
    for i in 0..nc {
        for j in 0..nc {
            scc[i][j] = cov[c[i]][c[j]];
        }
        scc[i][i] += CONDITIONING_RIDGE;
        for j in 0..na {
            sca[i][j] = cov[c[i]][a[j]];
        }
    }
    let x = solve_multi(&mut scc, &mut sca, nc, na).ok_or(OracleError::SingularConditioning)?;
    for i in 0..na {
        for j in 0..na {
            let mut acc = 0.0;
            for k in 0..nc {
                acc += cov[a[i]][c[k]] * x[k][j];
            }
            out[i][j] -= acc;
        }
    }
    Ok(out)
}

/// Gaussian elimination with partial pivoting; solves `M X = B` in place on
/// stack blocks (n, m <= 5). Returns None if a pivot vanishes beyond the
/// ridge.
#[allow(clippy::needless_range_loop)] // in-place elimination aliases rows
fn solve_multi(
    m: &mut [[f64; 5]; 5],
    b: &mut [[f64; 5]; 5],
    n: usize,
    cols: usize,
) -> Option<[[f64; 5]; 5]> {
    for k in 0..n {
        let mut piv = k;
        for i in (k + 1)..n {
            if math::abs(m[i][k]) > math::abs(m[piv][k]) {
                piv = i;
            }
        }
        if math::abs(m[piv][k]) < 1e-300 {
            return None;
        }
        m.swap(k, piv);
        b.swap(k, piv);
        for i in (k + 1)..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
            for j in 0..cols {
                b[i][j] -= f * b[k][j];
            }
        }
    }
    let mut x = [[0.0f64; 5]; 5];
    for j in 0..cols {
        for i in (0..n).rev() {
            let mut acc = b[i][j];
            for k in (i + 1)..n {
                acc -= m[i][k] * x[k][j];
            }
            x[i][j] = acc / m[i][i];
        }
    }
    Some(x)
}

/// Determinant by LU with partial pivoting (n <= 5).
#[allow(clippy::needless_range_loop)] // in-place elimination aliases rows
fn det(m: &[[f64; 5]; 5], n: usize) -> f64 {
    let mut a = *m;
    let mut d = 1.0;
    for k in 0..n {
        let mut piv = k;
        for i in (k + 1)..n {
            if math::abs(a[i][k]) > math::abs(a[piv][k]) {
                piv = i;
            }
        }
        if a[piv][k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            a.swap(k, piv);
            d = -d;
        }
        d *= a[k][k];
        for i in (k + 1)..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    d
}

/// The five mutual-information functionals of the layered signaling on one
/// atom, per complex channel use (twice the real-surrogate value).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MartonFunctionals {
    /// `I(W, U; Y1 | s)`
    pub f1: f64,
    /// `I(W, V; Y2 | s)`
    pub f2: f64,
    /// `I(U; Y1 | W, s)`
    pub f3: f64,
    /// `I(V; Y2 | W, s)`
    pub f4: f64,
    /// `I(U; V | W)`; exactly 0 for independent layers
    pub f5: f64,
}

/// Evaluates the five functionals via [`gaussian_mi`] on the joint
/// covariance.
pub fn marton_functionals(spec: &SignalingSpec) -> Result<MartonFunctionals, OracleError> {
    let cov = joint_covariance(spec)?;
    let complex = |a: &[usize], b: &[usize], c: &[usize]| -> Result<f64, OracleError> {
        Ok(2.0 * gaussian_mi(&cov, a, b, c)?)
    };
    Ok(MartonFunctionals {
        f1: complex(&[W, U], &[Y1], &[])?,
        f2: complex(&[W, V], &[Y2], &[])?,
        f3: complex(&[U], &[Y1], &[W])?,
        f4: complex(&[V], &[Y2], &[W])?,
        f5: complex(&[U], &[V], &[W])?,
    })
}

/// Comparison report of the closed forms against the log-det oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormReport {
    pub max_abs_err: f64,
    pub worst_atom: usize,
    pub ok: bool,
}

/// Compares, on every atom, the four per-atom closed-form integrands of the
/// inner bound against the oracle's functionals:
/// `f1 ↔ psi(g1(1-a)f/(g1 a f+1))`, `f3 ↔ psi(g1 b f/(g1 a f+1))`,
/// `f2 ↔ psi(g2(1-b)f/(g2 b f+1))`, `f4 ↔ psi(g2 a f/(g2 b f+1))`.
pub fn verify_closed_forms(
    dist: &FadingDistribution,
    partition: &CsitPartition,
    policy: &InnerPolicy,
    power: f64,
    tol: f64,
) -> Result<ClosedFormReport, OracleError> {
    policy.validate(partition, power)?;
    let mut max_abs_err = 0.0f64;
    let mut worst_atom = 0usize;
    for (i, atom) in dist.atoms().iter().enumerate() {
        let e = partition.group_of_atom(i);
        let spec = SignalingSpec {
            g1: atom.g1,
            g2: atom.g2,
            phi: policy.phi[e],
            alpha: policy.alpha[e].clamp(0.0, 1.0),
            beta: policy.beta[e].clamp(0.0, 1.0),
        };
        let f = marton_functionals(&spec)?;
        let snr = |g: f64, num: f64, intf: f64| ((g * num) / (g * intf + 1.0)).max(0.0);
        let closed = [
            psi(snr(
                spec.g1,
                (1.0 - spec.alpha) * spec.phi,
                spec.alpha * spec.phi,
            )),
            psi(snr(
                spec.g2,
                (1.0 - spec.beta) * spec.phi,
                spec.beta * spec.phi,
            )),
            psi(snr(spec.g1, spec.beta * spec.phi, spec.alpha * spec.phi)),
            psi(snr(spec.g2, spec.alpha * spec.phi, spec.beta * spec.phi)),
        ];
        for (oracle, form) in [
            (f.f1, closed[0]),
            (f.f2, closed[1]),
            (f.f3, closed[2]),
            (f.f4, closed[3]),
        ] {
            let err = math::abs(oracle - form);
            if err > max_abs_err {
                max_abs_err = err;
                worst_atom = i;
            }
        }
    }
    Ok(ClosedFormReport {
        max_abs_err,
        worst_atom,
        ok: max_abs_err <= tol,
    })
}
