//! The eigen-decomposition manifold SO(p) x Diag+(p): frames, tangent
//! vectors, exponential and logarithm maps, and the geodesic distance
//! that weighs rotation against scaling.
//!
//! A frame `(U, D)` is one eigen-decomposition of an SPD matrix. Tangent
//! vectors are pairs `(A, L)` of an antisymmetric matrix (rotation
//! velocity) and a diagonal matrix (log-scaling velocity). Geodesics are
//! `t -> (exp(A t) U, exp(L t) D)`.

use crate::error::{SrError, SrResult};
use crate::group::{even_signs, perm_matrix, sign_matrix, partition_of, Partition, Perm};
use crate::matcore::{
    diag_exp, so_angle, so_exp, so_log_between, AntiSym, DiagMat, Rotation, SymMat,
};
use crate::tol;

/// One eigen-decomposition `(U, D)` of the SPD matrix `U D U'`: a
/// rotation paired with a positive diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    u: Rotation,
    d: DiagMat,
}

impl Frame {
    /// Validates matching dimensions and positive diagonal entries.
    pub fn new(u: Rotation, d: DiagMat) -> SrResult<Self> {
        if u.p() != d.p() {
            return Err(SrError::invalid("rotation and diagonal dimensions differ"));
        }
        if !d.is_positive() {
            return Err(SrError::invalid(format!(
                "frame diagonal must be strictly positive, got {:?}",
                d.entries()
            )));
        }
        Ok(Frame { u, d })
    }

    pub(crate) fn new_unchecked(u: Rotation, d: DiagMat) -> Self {
        Frame { u, d }
    }

    pub fn p(&self) -> usize {
        self.u.p()
    }

    pub fn u(&self) -> &Rotation {
        &self.u
    }

    pub fn d(&self) -> &DiagMat {
        &self.d
    }

    /// The SPD matrix `U D U'` this frame decomposes.
    pub fn compose(&self) -> SymMat {
        let m = self.u.matrix() * self.d.matrix() * self.u.matrix().transpose();
        SymMat::from_matrix(&m).expect("frame composition is symmetric")
    }
}

/// A tangent vector `(A, L)` at a frame: rotation velocity and
/// log-scaling velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct Tangent {
    a: AntiSym,
    l: DiagMat,
}

impl Tangent {
    pub fn new(a: AntiSym, l: DiagMat) -> SrResult<Self> {
        if a.p() != l.p() {
            return Err(SrError::invalid(
                "antisymmetric and diagonal dimensions differ",
            ));
        }
        Ok(Tangent { a, l })
    }

    pub fn zero(p: usize) -> Self {
        Tangent {
            a: AntiSym::zero(p),
            l: DiagMat::new_unchecked(vec![0.0; p]),
        }
    }

    pub fn p(&self) -> usize {
        self.a.p()
    }

    pub fn a(&self) -> &AntiSym {
        &self.a
    }

    pub fn l(&self) -> &DiagMat {
        &self.l
    }
}

/// Metric parameters: `k` weighs the squared rotation distance against
/// the squared scaling distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricConfig {
    pub k: f64,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig { k: 1.0 }
    }
}

impl MetricConfig {
    pub(crate) fn check(&self) -> SrResult<()> {
        if self.k.is_finite() && self.k > 0.0 {
            Ok(())
        } else {
            Err(SrError::invalid(format!(
                "metric weight k must be positive and finite, got {}",
                self.k
            )))
        }
    }
}

/// Geodesic from `base` with velocity `v`, evaluated at time `t`:
/// `(exp(A t) U, exp(L t) D)`.
pub fn exp_map(base: &Frame, v: &Tangent, t: f64) -> SrResult<Frame> {
    if base.p() != v.p() {
        return Err(SrError::invalid("frame and tangent dimensions differ"));
    }
    if !t.is_finite() {
        return Err(SrError::invalid("curve parameter must be finite"));
    }
    let u = so_exp(&v.a.scaled(t)).compose(&base.u);
    let growth = diag_exp(&v.l.map(|x| x * t));
    let d = DiagMat::new_unchecked(
        base.d
            .entries()
            .iter()
            .zip(growth.entries())
            .map(|(&d, &g)| d * g)
            .collect(),
    );
    Ok(Frame { u, d })
}

/// Alias of [`exp_map`] for callers thinking in curve-evaluation terms.
pub fn geodesic_eval(base: &Frame, v: &Tangent, t: f64) -> SrResult<Frame> {
    exp_map(base, v, t)
}

/// Inverse of [`exp_map`] at `t = 1`: the velocity whose geodesic reaches
/// `target` from `base` in unit time, `A = log(V U')`, `L = log(L_t D^-1)`.
///
/// The boolean is true when `V U'` is an involution: the rotation part
/// then has two minimal logarithms and the returned one is a
/// deterministic choice, so there are exactly two shortest geodesics.
pub fn log_map(base: &Frame, target: &Frame) -> SrResult<(Tangent, bool)> {
    if base.p() != target.p() {
        return Err(SrError::invalid("frame dimensions differ"));
    }
    let (a, involution) = so_log_between(&base.u, &target.u)?;
    let l = DiagMat::new_unchecked(
        target
            .d
            .entries()
            .iter()
            .zip(base.d.entries())
            .map(|(&lam, &d)| (lam / d).ln())
            .collect(),
    );
    Ok((Tangent { a, l }, involution))
}

/// Geodesic distance between two frames:
/// `sqrt(k * angle(V U')^2 + sum log^2(lambda_i / d_i))`.
pub fn geo_dist(a: &Frame, b: &Frame, cfg: &MetricConfig) -> SrResult<f64> {
    if a.p() != b.p() {
        return Err(SrError::invalid("frame dimensions differ"));
    }
    cfg.check()?;
    let theta = so_angle(&a.u, &b.u);
    let scaling: f64 = a
        .d
        .entries()
        .iter()
        .zip(b.d.entries())
        .map(|(&d, &lam)| (lam / d).ln().powi(2))
        .sum();
    Ok((cfg.k * theta * theta + scaling).sqrt())
}

/// Evaluates the distance before and after the transform
/// `(U, D) -> (R1 U R2, S D_p)` applied to both frames with the same
/// rotations `r1`, `r2`, permutation `perm`, and positive scaling `s`.
/// The two returned values agree up to roundoff; exposing both lets
/// callers check the invariance on their own data.
pub fn verify_invariance(
    a: &Frame,
    b: &Frame,
    cfg: &MetricConfig,
    r1: &Rotation,
    r2: &Rotation,
    perm: &Perm,
    s: &DiagMat,
) -> SrResult<(f64, f64)> {
    let p = a.p();
    if [b.p(), r1.p(), r2.p(), perm.p(), s.p()] != [p; 5] {
        return Err(SrError::invalid("transform dimensions differ from frames"));
    }
    if !s.is_positive() {
        return Err(SrError::invalid("diagonal scaling must be positive"));
    }
    let before = geo_dist(a, b, cfg)?;
    let transform = |f: &Frame| -> Frame {
        let u = r1.compose(&f.u).compose(r2);
        let dp = f.d.permuted(perm);
        let d = DiagMat::new_unchecked(
            dp.entries()
                .iter()
                .zip(s.entries())
                .map(|(&d, &s)| d * s)
                .collect(),
        );
        Frame { u, d }
    };
    let after = geo_dist(&transform(a), &transform(b), cfg)?;
    Ok((before, after))
}

/// All parameter sets generating the same curve `t -> U D exp(L t) U'`
/// conjugated by `exp(A t)`: one per version, `((U I_s P', D_p), (A, L_p))`,
/// with the sign-change/permutation enumeration order of
/// [`crate::group::enumerate_versions`]. The first entry is the input.
///
/// Requires the curve to pass through a matrix with distinct eigenvalues
/// at some time, which holds exactly when the pairs `(d_i, l_i)` are
/// pairwise distinct; otherwise the family is infinite and a
/// multiplicity error is returned.
pub fn equivalent_geodesics(base: &Frame, v: &Tangent) -> SrResult<Vec<(Frame, Tangent)>> {
    if base.p() != v.p() {
        return Err(SrError::invalid("frame and tangent dimensions differ"));
    }
    let p = base.p();
    let joint = joint_partition(&base.d, &v.l);
    if !joint.is_all_singletons() {
        return Err(SrError::Multiplicity {
            partition: joint,
            context: "curve keeps repeated eigenvalues at every time, \
                      so infinitely many parameter sets generate it"
                .to_string(),
        });
    }

    let mut out = Vec::with_capacity((1 << (p - 1)) * Perm::all(p).len());
    for sigma in even_signs(p) {
        let s = sign_matrix(&sigma).matrix();
        for perm in Perm::all(p) {
            let pm = perm_matrix(&perm);
            let u = Rotation::new_unchecked(base.u.matrix() * &s * pm.matrix().transpose());
            let frame = Frame::new_unchecked(u, base.d.permuted(&perm));
            let tangent = Tangent {
                a: v.a.clone(),
                l: v.l.permuted(&perm),
            };
            out.push((frame, tangent));
        }
    }
    Ok(out)
}

/// Partition of indices where `i` and `j` share a block only when both
/// the diagonal entries and the scaling velocities coincide; equal
/// eigenvalues with different velocities separate at any other time.
fn joint_partition(d: &DiagMat, l: &DiagMat) -> Partition {
    let d_part = partition_of(d, tol::TOL_EQ_DEFAULT);
    if d_part.is_all_singletons() {
        return d_part;
    }
    // Refine each eigenvalue block by the velocities inside it, by
    // shifting equal-velocity members onto distinct synthetic values.
    let p = d.p();
    let l_part = partition_of(l, tol::TOL_EQ_DEFAULT);
    let mut joint_key = vec![0.0f64; p];
    for (bi, block) in d_part.blocks().iter().enumerate() {
        for &i in block {
            let li_block = l_part
                .blocks()
                .iter()
                .position(|b| b.contains(&i))
                .expect("index is in some velocity block");
            joint_key[i] = (bi * p + li_block) as f64;
        }
    }
    partition_of(&DiagMat::new_unchecked(joint_key), 1e-12)
}
