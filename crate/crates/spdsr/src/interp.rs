//! Interpolation between SPD matrices: minimal scaling-rotation curves
//! next to the Euclidean, log-Euclidean, and affine-invariant
//! interpolants, with per-sample tensor statistics (determinant,
//! fractional anisotropy, mean diffusivity, rotation angle) and
//! detection of interior swelling, fattening, and shrinking.

use std::fmt;
use std::str::FromStr;

use crate::error::{SrError, SrResult};
use crate::manifold::{exp_map, log_map, Frame, Tangent};
use crate::matcore::{so_angle, spd_exp, spd_log, spd_power, sym_eig, Rotation, SymMat};
use crate::srdist::{sr_distance, SrConfig};
use crate::tol;

/// Interpolation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Minimal scaling-rotation curve.
    Sr,
    /// Euclidean: entrywise affine combination.
    Euclid,
    /// Log-Euclidean: affine combination of matrix logarithms.
    LogEuclid,
    /// Affine-invariant geodesic.
    AffineInv,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::Sr,
        Scheme::Euclid,
        Scheme::LogEuclid,
        Scheme::AffineInv,
    ];

    /// Short name used in command lines and file names.
    pub fn token(self) -> &'static str {
        match self {
            Scheme::Sr => "SR",
            Scheme::Euclid => "E",
            Scheme::LogEuclid => "LE",
            Scheme::AffineInv => "AI",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Scheme {
    type Err = SrError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "SR" => Ok(Scheme::Sr),
            "E" => Ok(Scheme::Euclid),
            "LE" => Ok(Scheme::LogEuclid),
            "AI" => Ok(Scheme::AffineInv),
            other => Err(SrError::invalid(format!(
                "unknown scheme {other:?}, expected one of SR, E, LE, AI"
            ))),
        }
    }
}

/// Parameters `(U, D, A, L)` of a scaling-rotation curve
/// `t -> exp(At) U D exp(Lt) U' exp(A't)`: a starting decomposition and
/// a constant velocity.
#[derive(Debug, Clone)]
pub struct CurveParams {
    base: Frame,
    velocity: Tangent,
}

/// Qualitative movement of a curve, from thresholding its two velocity
/// components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveCharacter {
    Constant,
    PureRotation,
    PureScaling,
    Mixed,
}

impl fmt::Display for CurveCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveCharacter::Constant => "constant",
            CurveCharacter::PureRotation => "pure-rotation",
            CurveCharacter::PureScaling => "pure-scaling",
            CurveCharacter::Mixed => "mixed",
        })
    }
}

impl CurveParams {
    /// Validates that the decomposition and the velocity share one
    /// dimension.
    pub fn new(base: Frame, velocity: Tangent) -> SrResult<Self> {
        if base.p() != velocity.p() {
            return Err(SrError::invalid(
                "curve base and velocity dimensions differ",
            ));
        }
        Ok(CurveParams { base, velocity })
    }

    pub(crate) fn new_unchecked(base: Frame, velocity: Tangent) -> Self {
        CurveParams { base, velocity }
    }

    pub fn p(&self) -> usize {
        self.base.p()
    }

    pub fn base(&self) -> &Frame {
        &self.base
    }

    pub fn velocity(&self) -> &Tangent {
        &self.velocity
    }

    /// The decomposition the curve passes through at time `t`.
    pub fn frame_at(&self, t: f64) -> SrResult<Frame> {
        exp_map(&self.base, &self.velocity, t)
    }

    /// The SPD matrix the curve passes through at time `t`.
    pub fn eval(&self, t: f64) -> SrResult<SymMat> {
        Ok(self.frame_at(t)?.compose())
    }

    /// Rotation angle accumulated from time 0 to time `t`; linear in `t`
    /// because the rotation speed is constant.
    pub fn rotation_angle_at(&self, t: f64) -> f64 {
        t * self.velocity.a().angle()
    }

    /// Classifies the velocity as constant, pure rotation, pure scaling,
    /// or mixed.
    pub fn character(&self) -> CurveCharacter {
        let rotating = self.velocity.a().frob_norm() > tol::TOL_CURVE_CHARACTER;
        let scaling = self.velocity.l().frob_norm() > tol::TOL_CURVE_CHARACTER;
        match (rotating, scaling) {
            (false, false) => CurveCharacter::Constant,
            (true, false) => CurveCharacter::PureRotation,
            (false, true) => CurveCharacter::PureScaling,
            (true, true) => CurveCharacter::Mixed,
        }
    }
}

/// The SPD matrix a scaling-rotation curve passes through at time `t`.
pub fn sr_curve_eval(c: &CurveParams, t: f64) -> SrResult<SymMat> {
    c.eval(t)
}

/// Minimal scaling-rotation curve from `x` to `y`, together with the
/// curves of any tied minimal pairs. The first return reaches `x` at
/// `t = 0` and `y` at `t = 1`; ties are listed in the deterministic
/// enumeration order of the distance search.
pub fn sr_interpolate(
    x: &SymMat,
    y: &SymMat,
    cfg: &SrConfig,
) -> SrResult<(CurveParams, Vec<CurveParams>)> {
    let res = sr_distance(x, y, cfg)?;
    let mut alternatives = Vec::with_capacity(res.ties.len());
    for (fx, fy) in &res.ties {
        let (v, _) = log_map(fx, fy)?;
        alternatives.push(CurveParams::new_unchecked(fx.clone(), v));
    }
    Ok((res.curve, alternatives))
}

fn check_same_p(x: &SymMat, y: &SymMat) -> SrResult<()> {
    if x.p() != y.p() {
        return Err(SrError::invalid(format!(
            "dimension mismatch: {} vs {}",
            x.p(),
            y.p()
        )));
    }
    Ok(())
}

fn check_t(t: f64) -> SrResult<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(SrError::invalid("interpolation parameter must be finite"))
    }
}

/// Euclidean interpolant `(1 - t) X + t Y`.
pub fn euclid_interp(x: &SymMat, y: &SymMat, t: f64) -> SrResult<SymMat> {
    check_same_p(x, y)?;
    check_t(t)?;
    let m = x.matrix() * (1.0 - t) + y.matrix() * t;
    SymMat::from_matrix(&m)
}

/// Log-Euclidean interpolant `exp((1 - t) log X + t log Y)`.
pub fn logeuclid_interp(x: &SymMat, y: &SymMat, t: f64) -> SrResult<SymMat> {
    check_same_p(x, y)?;
    check_t(t)?;
    let lx = spd_log(x)?;
    let ly = spd_log(y)?;
    let mid = SymMat::from_matrix(&(lx.matrix() * (1.0 - t) + ly.matrix() * t))?;
    Ok(spd_exp(&mid))
}

/// Affine-invariant interpolant
/// `X^(1/2) (X^(-1/2) Y X^(-1/2))^t X^(1/2)`.
pub fn affineinv_interp(x: &SymMat, y: &SymMat, t: f64) -> SrResult<SymMat> {
    check_same_p(x, y)?;
    check_t(t)?;
    let xh = spd_power(x, 0.5)?;
    let xmh = spd_power(x, -0.5)?;
    let inner = SymMat::from_matrix(&(xmh.matrix() * y.matrix() * xmh.matrix()))?;
    let mid = spd_power(&inner, t)?;
    SymMat::from_matrix(&(xh.matrix() * mid.matrix() * xh.matrix()))
}

/// Determinant, fractional anisotropy, and mean diffusivity of one
/// tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorStats {
    pub det: f64,
    pub fa: f64,
    pub md: f64,
}

/// Tensor statistics from the basis-independent invariants: trace,
/// squared Frobenius norm, and determinant; no eigendecomposition.
///
/// FA uses the normalizer `sqrt(p / (p - 1))`. For 3x3 tensors this is
/// the standard fractional anisotropy; the 2x2 case (`sqrt(2)`) is the
/// direct two-eigenvalue analogue, provided as a library extension.
pub fn stats(m: &SymMat) -> TensorStats {
    let p = m.p() as f64;
    let tr = m.trace();
    let f2 = m.frob_norm().powi(2);
    let spread = (f2 - tr * tr / p).max(0.0);
    let fa = if f2 > 0.0 {
        (p / (p - 1.0)).sqrt() * (spread / f2).sqrt()
    } else {
        0.0
    };
    TensorStats {
        det: m.det(),
        fa,
        md: tr / p,
    }
}

/// Rotation angle between two tracked frames, in `[0, pi]`.
pub fn frame_angle(u_t: &Rotation, u_0: &Rotation) -> f64 {
    so_angle(u_0, u_t)
}

/// Angle between the principal axes of two tensors, in `[0, pi/2]`;
/// the axes carry no orientation, so the absolute inner product is used.
/// Fails with an ambiguous-axis error when either top eigenvalue is not
/// simple at the relative tolerance `tol_eq`.
pub fn principal_axis_angle(m_t: &SymMat, m_0: &SymMat, tol_eq: f64) -> SrResult<f64> {
    check_same_p(m_t, m_0)?;
    let a = top_axis(m_t, tol_eq)?;
    let b = top_axis(m_0, tol_eq)?;
    let dot: f64 = a.iter().zip(b.iter()).map(|(x, y)| x * y).sum();
    Ok(dot.abs().clamp(0.0, 1.0).acos())
}

fn top_axis(m: &SymMat, tol_eq: f64) -> SrResult<Vec<f64>> {
    let (u, d) = sym_eig(m);
    let vals = d.entries();
    let top = vals
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.total_cmp(b))
        .map(|(i, _)| i)
        .expect("eigenvalue list is non-empty");
    let scale = f64::max(1.0, vals[top].abs());
    let runner_up = vals
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != top)
        .map(|(_, &v)| v)
        .fold(f64::MIN, f64::max);
    if vals[top] - runner_up <= tol_eq * scale {
        return Err(SrError::AmbiguousAxis);
    }
    Ok((0..m.p()).map(|i| u.matrix()[(i, top)]).collect())
}

/// One sampled point of an interpolation path.
#[derive(Debug, Clone)]
pub struct TrajectorySample {
    pub t: f64,
    pub m: SymMat,
    pub det: f64,
    pub fa: f64,
    pub md: f64,
    /// Rotation angle from the start of the path; `None` when the
    /// principal axis is ambiguous at this sample.
    pub angle: Option<f64>,
}

/// An interpolation path sampled on a uniform time grid over `[0, 1]`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub scheme: Scheme,
    pub samples: Vec<TrajectorySample>,
}

/// Samples the interpolant of `scheme` between `x` and `y` at
/// `n_samples` uniform times in `[0, 1]`, attaching tensor statistics
/// and the rotation angle from the start. The scaling-rotation scheme
/// tracks its frames, so its angle column is always present; the other
/// schemes track the principal axis and omit the angle at samples where
/// that axis is ambiguous.
pub fn make_trajectory(
    x: &SymMat,
    y: &SymMat,
    scheme: Scheme,
    n_samples: usize,
    cfg: &SrConfig,
) -> SrResult<Trajectory> {
    check_same_p(x, y)?;
    if n_samples < 2 {
        return Err(SrError::invalid("a trajectory needs at least 2 samples"));
    }
    // Reject non-SPD inputs up front for every scheme, including the
    // Euclidean one whose formula would silently accept them.
    crate::matcore::spd_eig(x)?;
    crate::matcore::spd_eig(y)?;

    let ts: Vec<f64> = (0..n_samples)
        .map(|i| i as f64 / (n_samples - 1) as f64)
        .collect();
    let mut samples = Vec::with_capacity(n_samples);
    match scheme {
        Scheme::Sr => {
            let (curve, _) = sr_interpolate(x, y, cfg)?;
            for &t in &ts {
                let m = curve.eval(t)?;
                samples.push(sample_of(t, m, Some(curve.rotation_angle_at(t))));
            }
        }
        Scheme::Euclid | Scheme::LogEuclid | Scheme::AffineInv => {
            let f = match scheme {
                Scheme::Euclid => euclid_interp,
                Scheme::LogEuclid => logeuclid_interp,
                _ => affineinv_interp,
            };
            for &t in &ts {
                let m = f(x, y, t)?;
                let angle = match principal_axis_angle(&m, x, cfg.tol_eq) {
                    Ok(a) => Some(a),
                    Err(SrError::AmbiguousAxis) => None,
                    Err(e) => return Err(e),
                };
                samples.push(sample_of(t, m, angle));
            }
        }
    }

    check_endpoint(&samples.first().expect("n_samples >= 2").m, x, "start")?;
    check_endpoint(&samples.last().expect("n_samples >= 2").m, y, "end")?;
    Ok(Trajectory { scheme, samples })
}

fn sample_of(t: f64, m: SymMat, angle: Option<f64>) -> TrajectorySample {
    let s = stats(&m);
    TrajectorySample {
        t,
        m,
        det: s.det,
        fa: s.fa,
        md: s.md,
        angle,
    }
}

fn check_endpoint(got: &SymMat, want: &SymMat, which: &str) -> SrResult<()> {
    let scale = f64::max(1.0, want.matrix().amax());
    if (got.matrix() - want.matrix()).amax() <= 1e-10 * scale {
        Ok(())
    } else {
        Err(SrError::domain(format!(
            "trajectory {which} point drifted from its input matrix"
        )))
    }
}

/// Interior anomalies of a sampled path relative to its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EffectReport {
    /// Some interior determinant exceeds both endpoint determinants.
    pub swelling: bool,
    /// Some interior FA drops below both endpoint FAs.
    pub fattening: bool,
    /// Some interior MD drops below both endpoint MDs.
    pub shrinking: bool,
}

/// Flags swelling, fattening, and shrinking on the sampled grid, with a
/// small guard band so flat paths are not flagged by roundoff.
pub fn effect_report(traj: &Trajectory) -> EffectReport {
    let n = traj.samples.len();
    if n < 3 {
        return EffectReport {
            swelling: false,
            fattening: false,
            shrinking: false,
        };
    }
    let ends = [&traj.samples[0], &traj.samples[n - 1]];
    let end_det = ends.iter().map(|s| s.det).fold(f64::MIN, f64::max);
    let end_fa = ends.iter().map(|s| s.fa).fold(f64::MAX, f64::min);
    let end_md = ends.iter().map(|s| s.md).fold(f64::MAX, f64::min);
    let interior = &traj.samples[1..n - 1];
    let int_det = interior.iter().map(|s| s.det).fold(f64::MIN, f64::max);
    let int_fa = interior.iter().map(|s| s.fa).fold(f64::MAX, f64::min);
    let int_md = interior.iter().map(|s| s.md).fold(f64::MAX, f64::min);
    EffectReport {
        swelling: int_det > end_det * (1.0 + tol::TOL_EFFECT),
        fattening: int_fa < end_fa - tol::TOL_EFFECT,
        shrinking: int_md < end_md - tol::TOL_EFFECT,
    }
}
