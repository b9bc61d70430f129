//! The scaling-rotation distance between SPD matrices: the smallest
//! geodesic distance between any eigen-decomposition of one matrix and
//! any eigen-decomposition of the other.
//!
//! With distinct eigenvalues both fibers are finite, and fixing one side
//! while enumerating the other is exact. Repeated eigenvalues leave a
//! free block rotation in the fiber; the 3x3 cases reduce to six
//! sign-change/permutation representatives whose block angles come from
//! a closed-form alignment (one free side) or an alternating ascent
//! (both sides free).

use nalgebra::DMatrix;

use crate::error::{SrError, SrResult};
use crate::group::{
    enumerate_versions, partition_of, perm_matrix, sign_matrix, Partition, Perm, SignChange,
};
use crate::interp::CurveParams;
use crate::manifold::{geo_dist, log_map, Frame, MetricConfig};
use crate::matcore::{semi_svd2, spd_eig, DiagMat, Rotation, SymMat};
use crate::tol;

/// Parameters of a distance computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrConfig {
    /// Weight of squared rotation distance against squared scaling
    /// distance. Must be positive.
    pub k: f64,
    /// Relative tolerance for treating eigenvalues as equal.
    pub tol_eq: f64,
    /// Absolute tolerance for reporting tied minimal pairs.
    pub tol_tie: f64,
    /// Convergence threshold on the alignment objective.
    pub tol_g: f64,
    /// Iteration cap for the alternating alignment ascent.
    pub max_iter: usize,
}

impl Default for SrConfig {
    fn default() -> Self {
        SrConfig {
            k: 1.0,
            tol_eq: tol::TOL_EQ_DEFAULT,
            tol_tie: tol::TOL_TIE_DEFAULT,
            tol_g: tol::TOL_G_DEFAULT,
            max_iter: tol::MAX_ITER_DEFAULT,
        }
    }
}

impl SrConfig {
    /// The metric restriction of this configuration.
    pub fn metric(&self) -> MetricConfig {
        MetricConfig { k: self.k }
    }

    fn check(&self) -> SrResult<()> {
        self.metric().check()?;
        for (name, value) in [
            ("tol_eq", self.tol_eq),
            ("tol_tie", self.tol_tie),
            ("tol_g", self.tol_g),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(SrError::invalid(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        if self.max_iter == 0 {
            return Err(SrError::invalid("max_iter must be at least 1"));
        }
        Ok(())
    }
}

/// Eigenvalue multiplicity pattern of one matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultiplicityClass {
    /// All eigenvalues distinct.
    Distinct,
    /// Exactly two eigenvalues coincide; `repeated` holds their indices
    /// in the eigenvalue order of the inspected decomposition. For
    /// dimension 2 this is the isotropic case.
    Pair { repeated: [usize; 2] },
    /// All three eigenvalues coincide (3x3 isotropic).
    Triple,
}

/// Eigenvalue multiplicity pattern of a symmetric matrix at the given
/// relative tolerance.
pub fn classify(x: &SymMat, tol_eq: f64) -> MultiplicityClass {
    let (_, d) = crate::matcore::sym_eig(x);
    class_of_partition(&partition_of(&d, tol_eq), d.p())
}

fn class_of_partition(part: &Partition, p: usize) -> MultiplicityClass {
    if part.is_all_singletons() {
        return MultiplicityClass::Distinct;
    }
    if part.blocks().len() == 1 {
        return if p == 2 {
            MultiplicityClass::Pair { repeated: [0, 1] }
        } else {
            MultiplicityClass::Triple
        };
    }
    let block = part
        .blocks()
        .iter()
        .find(|b| b.len() == 2)
        .expect("non-singleton partition of size 3 with 2 blocks has a pair");
    MultiplicityClass::Pair {
        repeated: [block[0], block[1]],
    }
}

/// Distinct eigenvalues whose smallest relative gap is within
/// [`tol::NEAR_MULTIPLICITY_FACTOR`] of the equality tolerance: the
/// computation ran on the distinct branch but sits close to a
/// multiplicity, so the minimal pair is sensitive to perturbation.
fn near_multiplicity(d: &DiagMat, part: &Partition, tol_eq: f64) -> bool {
    if !part.is_all_singletons() {
        return false;
    }
    let vals = d.entries();
    let scale = f64::max(1.0, vals.iter().cloned().fold(f64::MIN, f64::max));
    let mut min_gap = f64::MAX;
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            min_gap = min_gap.min((vals[i] - vals[j]).abs());
        }
    }
    min_gap <= tol::NEAR_MULTIPLICITY_FACTOR * tol_eq * scale
}

/// A minimal pair of eigen-decompositions realizing the
/// scaling-rotation distance, with the curve parameters connecting them.
#[derive(Debug, Clone)]
pub struct MinimalPairResult {
    /// The scaling-rotation distance.
    pub distance: f64,
    /// The minimizing decompositions of the two inputs.
    pub pair: (Frame, Frame),
    /// Parameters of a minimal curve from the first input to the second.
    pub curve: CurveParams,
    /// Further candidate pairs whose distance is within `tol_tie` of the
    /// minimum, in enumeration order.
    pub ties: Vec<(Frame, Frame)>,
    /// The relative rotation of the minimal pair is an involution, so
    /// both signs of the rotation velocity give a minimal curve.
    pub involution: bool,
    /// Multiplicity pattern of the first input.
    pub class_x: MultiplicityClass,
    /// Multiplicity pattern of the second input.
    pub class_y: MultiplicityClass,
    /// Some eigenvalue gap sits just above the equality tolerance.
    pub near_multiplicity: bool,
}

/// Scaling-rotation distance with a minimal pair, for 2x2 inputs.
pub fn sr_distance_2(x: &SymMat, y: &SymMat, cfg: &SrConfig) -> SrResult<MinimalPairResult> {
    if x.p() != 2 || y.p() != 2 {
        return Err(SrError::invalid("this entry point takes 2x2 matrices"));
    }
    sr_inner(x, y, cfg)
}

/// Scaling-rotation distance with a minimal pair, for 3x3 inputs.
pub fn sr_distance_3(x: &SymMat, y: &SymMat, cfg: &SrConfig) -> SrResult<MinimalPairResult> {
    if x.p() != 3 || y.p() != 3 {
        return Err(SrError::invalid("this entry point takes 3x3 matrices"));
    }
    sr_inner(x, y, cfg)
}

/// Scaling-rotation distance with a minimal pair; dispatches on the
/// common dimension of the inputs.
pub fn sr_distance(x: &SymMat, y: &SymMat, cfg: &SrConfig) -> SrResult<MinimalPairResult> {
    if x.p() != y.p() {
        return Err(SrError::invalid(format!(
            "dimension mismatch: {} vs {}",
            x.p(),
            y.p()
        )));
    }
    match x.p() {
        2 => sr_distance_2(x, y, cfg),
        _ => sr_distance_3(x, y, cfg),
    }
}

fn sr_inner(x: &SymMat, y: &SymMat, cfg: &SrConfig) -> SrResult<MinimalPairResult> {
    cfg.check()?;
    let (ux, dx) = spd_eig(x)?;
    let (uy, dy) = spd_eig(y)?;
    let part_x = partition_of(&dx, cfg.tol_eq);
    let part_y = partition_of(&dy, cfg.tol_eq);

    let candidates = candidate_pairs(&ux, &dx, &part_x, &uy, &dy, &part_y, cfg)?;
    let metric = cfg.metric();
    let mut dists = Vec::with_capacity(candidates.len());
    for (fx, fy) in &candidates {
        dists.push(geo_dist(fx, fy, &metric)?);
    }
    let best = dists
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.total_cmp(b))
        .map(|(i, _)| i)
        .expect("candidate list is never empty");
    let ties: Vec<(Frame, Frame)> = candidates
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != best && dists[i] <= dists[best] + cfg.tol_tie)
        .map(|(_, pair)| pair.clone())
        .collect();

    let (fx, fy) = candidates[best].clone();
    let (velocity, involution) = log_map(&fx, &fy)?;
    let curve = CurveParams::new_unchecked(fx.clone(), velocity);
    Ok(MinimalPairResult {
        distance: dists[best],
        pair: (fx, fy),
        curve,
        ties,
        involution,
        class_x: class_of_partition(&part_x, x.p()),
        class_y: class_of_partition(&part_y, y.p()),
        near_multiplicity: near_multiplicity(&dx, &part_x, cfg.tol_eq)
            || near_multiplicity(&dy, &part_y, cfg.tol_eq),
    })
}

/// Builds the finite candidate list whose minimum realizes the distance.
/// `min_by(total_cmp)` on the result takes the first minimizer, so the
/// enumeration order here fixes which tied pair is reported as primary.
fn candidate_pairs(
    ux: &Rotation,
    dx: &DiagMat,
    part_x: &Partition,
    uy: &Rotation,
    dy: &DiagMat,
    part_y: &Partition,
    cfg: &SrConfig,
) -> SrResult<Vec<(Frame, Frame)>> {
    // All eigenvalues of X equal: X is round, any rotation decomposes
    // it, so share Y's rotation and pay only scaling.
    if part_x.blocks().len() == 1 {
        let fx = Frame::new_unchecked(uy.clone(), dx.clone());
        let fy = Frame::new_unchecked(uy.clone(), dy.clone());
        return Ok(vec![(fx, fy)]);
    }
    if part_y.blocks().len() == 1 {
        let swapped = candidate_pairs(uy, dy, part_y, ux, dx, part_x, cfg)?;
        return Ok(swapped.into_iter().map(|(a, b)| (b, a)).collect());
    }

    if part_x.is_all_singletons() && part_y.is_all_singletons() {
        let versions = enumerate_versions(ux, dx, cfg.tol_eq)?;
        let fy = Frame::new_unchecked(uy.clone(), dy.clone());
        return Ok(versions.into_iter().map(|fx| (fx, fy.clone())).collect());
    }

    // From here exactly one eigenvalue is repeated on at least one side,
    // which only happens for 3x3 inputs.
    if part_y.is_all_singletons() {
        return pair_versus_distinct(ux, dx, part_x, uy, dy);
    }
    if part_x.is_all_singletons() {
        let swapped = candidate_pairs(uy, dy, part_y, ux, dx, part_x, cfg)?;
        return Ok(swapped.into_iter().map(|(a, b)| (b, a)).collect());
    }
    pair_versus_pair(ux, dx, part_x, uy, dy, part_y, cfg)
}

/// Version frame moving the repeated eigenvalue block into coordinates
/// 1 and 2, so the free fiber rotation acts in the leading 2x2 block.
fn leading_pair_frame(u: &Rotation, d: &DiagMat, part: &Partition) -> Frame {
    let rep = part
        .blocks()
        .iter()
        .find(|b| b.len() == 2)
        .expect("caller checked a repeated pair exists");
    let single = part
        .blocks()
        .iter()
        .find(|b| b.len() == 1)
        .expect("caller checked a singleton exists")[0];
    let q = Perm::new(vec![rep[0], rep[1], single])
        .expect("block indices form a permutation")
        .inverse();
    let pm = perm_matrix(&q);
    let rot = Rotation::new_unchecked(u.matrix() * pm.matrix().transpose());
    Frame::new_unchecked(rot, d.permuted(&q))
}

/// The six sign-change/permutation representatives that remain after the
/// free block rotation absorbs the rest: the repeated pair can land in
/// any of the three coordinate slots, each with two inequivalent sign
/// patterns.
fn pair_case_elements() -> (Vec<SignChange>, Vec<Perm>) {
    let signs = vec![
        SignChange::new(vec![1, 1, 1]).expect("valid signs"),
        SignChange::new(vec![-1, 1, -1]).expect("valid signs"),
    ];
    let perms = vec![
        Perm::new(vec![0, 1, 2]).expect("valid permutation"),
        Perm::new(vec![1, 2, 0]).expect("valid permutation"),
        Perm::new(vec![0, 2, 1]).expect("valid permutation"),
    ];
    (signs, perms)
}

/// The matrix `I_s P'` turning a base decomposition into the version
/// selected by a sign change and a permutation.
fn sign_perm(sigma: &SignChange, perm: &Perm) -> DMatrix<f64> {
    sign_matrix(sigma).matrix() * perm_matrix(perm).matrix().transpose()
}

/// Rotation by `t` in the plane of the first two coordinates.
fn rot12(t: f64) -> DMatrix<f64> {
    let (c, s) = (t.cos(), t.sin());
    DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0])
}

/// X has a repeated pair, Y has distinct eigenvalues: six candidates,
/// each with its block rotation chosen in closed form.
fn pair_versus_distinct(
    ux: &Rotation,
    dx: &DiagMat,
    part_x: &Partition,
    uy: &Rotation,
    dy: &DiagMat,
) -> SrResult<Vec<(Frame, Frame)>> {
    let base = leading_pair_frame(ux, dx, part_x);
    let fy = Frame::new_unchecked(uy.clone(), dy.clone());
    let (signs, perms) = pair_case_elements();
    let mut out = Vec::with_capacity(6);
    for sigma in &signs {
        for perm in &perms {
            let rhat = minimal_rotation(base.u(), uy, sigma, perm)?;
            let rot = Rotation::new_unchecked(
                base.u().matrix() * rhat.matrix() * sign_perm(sigma, perm),
            );
            out.push((
                Frame::new_unchecked(rot, base.d().permuted(perm)),
                fy.clone(),
            ));
        }
    }
    Ok(out)
}

/// Both X and Y have a repeated pair: six candidates, each with both
/// block angles from the alternating alignment ascent.
fn pair_versus_pair(
    ux: &Rotation,
    dx: &DiagMat,
    part_x: &Partition,
    uy: &Rotation,
    dy: &DiagMat,
    part_y: &Partition,
    cfg: &SrConfig,
) -> SrResult<Vec<(Frame, Frame)>> {
    let bx = leading_pair_frame(ux, dx, part_x);
    let by = leading_pair_frame(uy, dy, part_y);
    let (signs, perms) = pair_case_elements();
    let mut out = Vec::with_capacity(6);
    for sigma in &signs {
        for perm in &perms {
            let gm = maximize_g(bx.u(), by.u(), sigma, perm, cfg)?;
            let rot_x = Rotation::new_unchecked(
                bx.u().matrix() * rot12(gm.theta) * sign_perm(sigma, perm),
            );
            let rot_y = Rotation::new_unchecked(by.u().matrix() * rot12(gm.phi));
            out.push((
                Frame::new_unchecked(rot_x, bx.d().permuted(perm)),
                Frame::new_unchecked(rot_y, by.d().clone()),
            ));
        }
    }
    Ok(out)
}

/// Closed-form block rotation aligning a repeated-pair version with a
/// fixed rotation: maximizes `trace(U R I_s P' V')` over rotations `R`
/// of the leading 2x2 block. The maximizer comes from the
/// rotation-constrained SVD of the relevant block.
pub fn minimal_rotation(
    u: &Rotation,
    v: &Rotation,
    sigma: &SignChange,
    perm: &Perm,
) -> SrResult<Rotation> {
    if [u.p(), v.p(), sigma.p(), perm.p()] != [3; 4] {
        return Err(SrError::invalid(
            "block rotation alignment is defined for dimension 3",
        ));
    }
    // trace(U R K V') = trace(G R) with G = K V' U, and R only acts on
    // the leading block, so only G's leading block matters.
    let gamma = sign_perm(sigma, perm) * v.matrix().transpose() * u.matrix();
    Ok(block_rotation(best_block_angle(&gamma)?))
}

/// The angle whose leading-block rotation maximizes `trace(G R)`.
fn best_block_angle(gamma: &DMatrix<f64>) -> SrResult<f64> {
    let g11 = DMatrix::from_fn(2, 2, |i, j| gamma[(i, j)]);
    let svd = semi_svd2(&g11)?;
    let r11 = svd.e2.matrix() * svd.e1.matrix().transpose();
    Ok(r11[(1, 0)].atan2(r11[(0, 0)]))
}

fn block_rotation(t: f64) -> Rotation {
    Rotation::new_unchecked(rot12(t))
}

/// Result of the alternating alignment ascent.
#[derive(Debug, Clone)]
pub struct GMax {
    /// Block angle on the first side.
    pub theta: f64,
    /// Block angle on the second side.
    pub phi: f64,
    /// The maximized trace objective.
    pub value: f64,
    /// Iterations used by the reported start.
    pub iterations: usize,
    /// Objective after the initial point and after each iteration of the
    /// reported start; non-decreasing.
    pub history: Vec<f64>,
}

/// Maximizes `G(theta, phi) = trace(U R_theta I_s P' R_phi' V')` over
/// both block angles by alternating exact coordinate maximization,
/// restarted from the four corners of a half-period grid; the best
/// converged start wins. Fails with a convergence error only when no
/// start meets `tol_g` within `max_iter` iterations.
pub fn maximize_g(
    u: &Rotation,
    v: &Rotation,
    sigma: &SignChange,
    perm: &Perm,
    cfg: &SrConfig,
) -> SrResult<GMax> {
    if [u.p(), v.p(), sigma.p(), perm.p()] != [3; 4] {
        return Err(SrError::invalid(
            "the alignment ascent is defined for dimension 3",
        ));
    }
    cfg.check()?;
    let k = sign_perm(sigma, perm);
    let w = v.matrix().transpose() * u.matrix();
    let wt = w.transpose();
    let eval = |theta: f64, phi: f64| (rot12(theta) * &k * rot12(phi).transpose() * &w).trace();

    let pi = std::f64::consts::PI;
    let mut best: Option<GMax> = None;
    let mut best_failed: Option<GMax> = None;
    for (t0, p0) in [(0.0, 0.0), (0.0, pi), (pi, 0.0), (pi, pi)] {
        let (mut theta, mut phi) = (t0, p0);
        let mut g = eval(theta, phi);
        let mut history = vec![g];
        let mut converged = false;
        let mut iterations = cfg.max_iter;
        for it in 1..=cfg.max_iter {
            // Exact maximization in theta for fixed phi, then in phi for
            // fixed theta; each step can only raise the objective.
            let a_theta = &k * rot12(phi).transpose() * &w;
            theta = best_block_angle(&a_theta)?;
            let a_phi = k.transpose() * rot12(theta).transpose() * &wt;
            phi = best_block_angle(&a_phi)?;
            let g_new = eval(theta, phi);
            history.push(g_new);
            let gain = g_new - g;
            g = g_new;
            if gain.abs() <= cfg.tol_g {
                converged = true;
                iterations = it;
                break;
            }
        }
        let run = GMax {
            theta,
            phi,
            value: g,
            iterations,
            history,
        };
        let slot = if converged { &mut best } else { &mut best_failed };
        if slot.as_ref().is_none_or(|b| run.value > b.value) {
            *slot = Some(run);
        }
    }
    match best {
        Some(b) => Ok(b),
        None => {
            let b = best_failed.expect("at least one start ran");
            Err(SrError::Convergence {
                iterations: b.iterations,
                theta: b.theta,
                phi: b.phi,
                value: b.value,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{so_exp, AntiSym};
    use nalgebra::Vector3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn spd3(u: &Rotation, eigs: [f64; 3]) -> SymMat {
        let d = DiagMat::new(eigs.to_vec()).unwrap();
        SymMat::from_matrix(&(u.matrix() * d.matrix() * u.matrix().transpose())).unwrap()
    }

    fn rot3(axis: [f64; 3]) -> Rotation {
        so_exp(&AntiSym::Spatial(Vector3::from(axis)))
    }

    fn laplace_pair(eps: f64, theta: f64) -> (SymMat, SymMat) {
        let x = SymMat::from_upper(2, &[(0.5 * eps).exp(), 0.0, (-0.5 * eps).exp()]).unwrap();
        let r = so_exp(&AntiSym::Planar(theta));
        let y = SymMat::from_matrix(&(r.matrix() * x.matrix() * r.matrix().transpose())).unwrap();
        (x, y)
    }

    /// Distance for the rotated-anisotropy family at k = 1:
    /// min of the direct rotation and the swap route.
    fn laplace_closed_form(eps: f64, theta: f64) -> f64 {
        theta.min(((PI / 2.0 - theta).powi(2) + 2.0 * eps * eps).sqrt())
    }

    #[test]
    fn classify_patterns() {
        let distinct = SymMat::from_upper(3, &[3.0, 0.0, 0.0, 2.0, 0.0, 1.0]).unwrap();
        assert_eq!(classify(&distinct, 1e-8), MultiplicityClass::Distinct);

        let pair = SymMat::from_upper(3, &[2.0, 0.0, 0.0, 1.0, 0.0, 2.0]).unwrap();
        match classify(&pair, 1e-8) {
            MultiplicityClass::Pair { .. } => {}
            other => panic!("expected a pair, got {other:?}"),
        }

        let triple = SymMat::from_upper(3, &[5.0, 0.0, 0.0, 5.0, 0.0, 5.0]).unwrap();
        assert_eq!(classify(&triple, 1e-8), MultiplicityClass::Triple);

        let iso2 = SymMat::from_upper(2, &[4.0, 0.0, 4.0]).unwrap();
        assert_eq!(
            classify(&iso2, 1e-8),
            MultiplicityClass::Pair { repeated: [0, 1] }
        );
    }

    #[test]
    fn two_by_two_closed_form() {
        let cfg = SrConfig::default();
        for (eps, theta) in [(0.3, 0.2), (0.3, 0.9), (0.3, 1.4), (0.8, 0.6)] {
            let (x, y) = laplace_pair(eps, theta);
            let got = sr_distance(&x, &y, &cfg).unwrap().distance;
            let want = laplace_closed_form(eps, theta);
            assert!(
                (got - want).abs() < 1e-12,
                "eps={eps} theta={theta}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn two_by_two_tie_is_reported() {
        let eps = 0.4f64;
        let theta = PI / 4.0 + 2.0 * eps * eps / PI;
        let (x, y) = laplace_pair(eps, theta);
        let res = sr_distance(&x, &y, &SrConfig::default()).unwrap();
        assert_eq!(res.ties.len(), 1, "exactly one tied pair at the crossing");
        // Just off the crossing the tie disappears.
        let (x2, y2) = laplace_pair(eps, theta + 1e-3);
        assert!(sr_distance(&x2, &y2, &SrConfig::default()).unwrap().ties.is_empty());
    }

    #[test]
    fn pure_rotation_pair() {
        let u = rot3([0.3, -0.5, 0.4]);
        let x = spd3(&Rotation::identity(3), [3.0, 2.0, 1.0]);
        let y = spd3(&u, [3.0, 2.0, 1.0]);
        let angle = AntiSym::Spatial(Vector3::new(0.3, -0.5, 0.4)).angle();
        let res = sr_distance(&x, &y, &SrConfig::default()).unwrap();
        assert!((res.distance - angle).abs() < 1e-10);
        assert!(res.curve.velocity().l().frob_norm() < 1e-10);
        // Weighting rotation more scales the distance accordingly.
        let res_k = sr_distance(&x, &y, &SrConfig { k: 0.25, ..SrConfig::default() }).unwrap();
        assert!((res_k.distance - 0.5 * angle).abs() < 1e-10);
    }

    #[test]
    fn pure_scaling_pair() {
        let x = SymMat::from_upper(3, &[15.0, 0.0, 0.0, 5.0, 0.0, 1.0]).unwrap();
        let y = SymMat::from_upper(3, &[7.0, 0.0, 0.0, 12.0, 0.0, 8.0]).unwrap();
        let want = ((7.0f64 / 15.0).ln().powi(2)
            + (12.0f64 / 5.0).ln().powi(2)
            + 8.0f64.ln().powi(2))
        .sqrt();
        let res = sr_distance(&x, &y, &SrConfig::default()).unwrap();
        assert!((res.distance - want).abs() < 1e-12);
        assert!(res.curve.velocity().a().frob_norm() < 1e-12);
    }

    #[test]
    fn triple_side_shares_the_other_rotation() {
        let x = SymMat::from_upper(3, &[4.0, 0.0, 0.0, 4.0, 0.0, 4.0]).unwrap();
        let u = rot3([0.2, 0.7, -0.1]);
        let y = spd3(&u, [9.0, 3.0, 1.0]);
        let want = ((9.0f64 / 4.0).ln().powi(2)
            + (3.0f64 / 4.0).ln().powi(2)
            + (1.0f64 / 4.0).ln().powi(2))
        .sqrt();
        let res = sr_distance(&x, &y, &SrConfig::default()).unwrap();
        assert!((res.distance - want).abs() < 1e-10);
        assert!(res.curve.velocity().a().frob_norm() < 1e-10);
        assert_eq!(res.class_x, MultiplicityClass::Triple);
    }

    #[test]
    fn symmetry_and_self_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let cfg = SrConfig::default();
        for _ in 0..20 {
            let x = spd3(
                &rot3([rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 0.3]),
                [
                    rng.gen_range(1.0..2.0),
                    rng.gen_range(3.0..4.0),
                    rng.gen_range(5.0..6.0),
                ],
            );
            let y = spd3(
                &rot3([0.1, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]),
                [
                    rng.gen_range(1.0..2.0),
                    rng.gen_range(3.0..4.0),
                    rng.gen_range(5.0..6.0),
                ],
            );
            let xy = sr_distance(&x, &y, &cfg).unwrap().distance;
            let yx = sr_distance(&y, &x, &cfg).unwrap().distance;
            assert!((xy - yx).abs() < 1e-10);
            assert!(sr_distance(&x, &x, &cfg).unwrap().distance < 1e-10);
        }
    }

    #[test]
    fn minimal_pair_recomposes_the_inputs() {
        let x = spd3(&rot3([0.5, 0.2, -0.3]), [6.0, 2.0, 0.5]);
        let y = spd3(&rot3([-0.1, 0.8, 0.2]), [4.0, 3.0, 1.5]);
        let res = sr_distance(&x, &y, &SrConfig::default()).unwrap();
        let rx = res.pair.0.compose();
        let ry = res.pair.1.compose();
        assert!((rx.matrix() - x.matrix()).amax() < tol::TOL_RECON * 10.0);
        assert!((ry.matrix() - y.matrix()).amax() < tol::TOL_RECON * 10.0);
    }

    #[test]
    fn near_multiplicity_is_flagged() {
        let x = SymMat::from_upper(3, &[1.0, 0.0, 0.0, 1.0 + 5e-8, 0.0, 2.0]).unwrap();
        let y = SymMat::from_upper(3, &[5.0, 0.0, 0.0, 3.0, 0.0, 1.0]).unwrap();
        let res = sr_distance(&x, &y, &SrConfig::default()).unwrap();
        assert_eq!(res.class_x, MultiplicityClass::Distinct);
        assert!(res.near_multiplicity);

        let clear = SymMat::from_upper(3, &[1.0, 0.0, 0.0, 1.5, 0.0, 2.0]).unwrap();
        assert!(!sr_distance(&clear, &y, &SrConfig::default()).unwrap().near_multiplicity);
    }

    #[test]
    fn rejects_non_spd_and_mismatched_inputs() {
        let x = SymMat::from_upper(2, &[1.0, 0.0, -1.0]).unwrap();
        let y = SymMat::from_upper(2, &[1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            sr_distance(&x, &y, &SrConfig::default()),
            Err(SrError::Domain(_))
        ));
        let z = SymMat::from_upper(3, &[1.0, 0.0, 0.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(sr_distance(&y, &z, &SrConfig::default()).is_err());
        assert!(sr_distance(&y, &y, &SrConfig { k: -1.0, ..SrConfig::default() }).is_err());
    }

    #[test]
    fn alignment_identity_case() {
        let u = Rotation::identity(3);
        let sigma = SignChange::new(vec![1, 1, 1]).unwrap();
        let perm = Perm::identity(3);
        let r = minimal_rotation(&u, &u, &sigma, &perm).unwrap();
        assert!((r.matrix() - DMatrix::identity(3, 3)).amax() < 1e-12);
    }

    #[test]
    fn alignment_beats_a_rotation_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(57);
        let (signs, perms) = pair_case_elements();
        for _ in 0..20 {
            let u = rot3([
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ]);
            let v = rot3([
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ]);
            let sigma = &signs[rng.gen_range(0..signs.len())];
            let perm = &perms[rng.gen_range(0..perms.len())];
            let rhat = minimal_rotation(&u, &v, sigma, perm).unwrap();
            let objective = |r: &DMatrix<f64>| {
                (u.matrix() * r * sign_perm(sigma, perm) * v.matrix().transpose()).trace()
            };
            let at_rhat = objective(rhat.matrix());
            for i in 0..500 {
                let t = 2.0 * PI * (i as f64) / 500.0;
                assert!(at_rhat >= objective(&rot12(t)) - 1e-9);
            }
        }
    }

    #[test]
    fn ascent_history_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let (signs, perms) = pair_case_elements();
        for _ in 0..20 {
            let u = rot3([
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ]);
            let v = rot3([
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ]);
            let sigma = &signs[rng.gen_range(0..signs.len())];
            let perm = &perms[rng.gen_range(0..perms.len())];
            let gm = maximize_g(&u, &v, sigma, perm, &SrConfig::default()).unwrap();
            for w in gm.history.windows(2) {
                assert!(w[1] >= w[0] - 1e-12);
            }
            assert!(gm.value <= 3.0 + 1e-9);
        }
    }

    #[test]
    fn repeated_pair_against_distinct_beats_fiber_grid() {
        // X has eigenvalues (2, 2, 5) seen through a rotation; its fiber
        // keeps a free block rotation the candidate search must cover.
        let ux = rot3([0.4, -0.2, 0.7]);
        let x = spd3(&ux, [2.0, 2.0, 5.0]);
        let uy = rot3([-0.6, 0.3, 0.1]);
        let y = spd3(&uy, [7.0, 3.0, 1.0]);
        let cfg = SrConfig::default();
        let res = sr_distance(&x, &y, &cfg).unwrap();

        // Oracle: sweep the full fiber of X as (U R(t) I_s P', D_p) over
        // all 24 sign/permutation choices and a fine grid of block
        // angles, against Y's fixed decomposition.
        let (uxe, dxe) = spd_eig(&x).unwrap();
        let part = partition_of(&dxe, cfg.tol_eq);
        let base = leading_pair_frame(&uxe, &dxe, &part);
        let (uye, dye) = spd_eig(&y).unwrap();
        let fy = Frame::new_unchecked(uye, dye);
        let metric = cfg.metric();
        let mut grid_min = f64::MAX;
        for sigma in crate::group::even_signs(3) {
            for perm in Perm::all(3) {
                let k = sign_perm(&sigma, &perm);
                let dp = base.d().permuted(&perm);
                for i in 0..2000 {
                    let t = 2.0 * PI * (i as f64) / 2000.0;
                    let rot = Rotation::new_unchecked(base.u().matrix() * rot12(t) * &k);
                    let fx = Frame::new_unchecked(rot, dp.clone());
                    grid_min = grid_min.min(geo_dist(&fx, &fy, &metric).unwrap());
                }
            }
        }
        assert!(res.distance <= grid_min + 1e-9, "exact {} grid {}", res.distance, grid_min);
        assert!(res.distance >= grid_min - 1e-4, "exact {} grid {}", res.distance, grid_min);
    }

    #[test]
    fn both_sides_repeated_beats_fiber_grid() {
        let ux = rot3([0.2, 0.5, -0.3]);
        let x = spd3(&ux, [4.0, 4.0, 1.0]);
        let uy = rot3([0.9, -0.4, 0.6]);
        let y = spd3(&uy, [2.0, 6.0, 6.0]);
        let cfg = SrConfig::default();
        let res = sr_distance(&x, &y, &cfg).unwrap();

        let (uxe, dxe) = spd_eig(&x).unwrap();
        let bx = leading_pair_frame(&uxe, &dxe, &partition_of(&dxe, cfg.tol_eq));
        let (uye, dye) = spd_eig(&y).unwrap();
        let by = leading_pair_frame(&uye, &dye, &partition_of(&dye, cfg.tol_eq));
        let metric = cfg.metric();
        let mut grid_min = f64::MAX;
        let n = 180;
        for sigma in crate::group::even_signs(3) {
            for perm in Perm::all(3) {
                let k = sign_perm(&sigma, &perm);
                let dp = bx.d().permuted(&perm);
                for i in 0..n {
                    let t = 2.0 * PI * (i as f64) / (n as f64);
                    let rx = Rotation::new_unchecked(bx.u().matrix() * rot12(t) * &k);
                    let fx = Frame::new_unchecked(rx, dp.clone());
                    for j in 0..n {
                        let s = 2.0 * PI * (j as f64) / (n as f64);
                        let ry = Rotation::new_unchecked(by.u().matrix() * rot12(s));
                        let fyv = Frame::new_unchecked(ry, by.d().clone());
                        grid_min = grid_min.min(geo_dist(&fx, &fyv, &metric).unwrap());
                    }
                }
            }
        }
        assert!(res.distance <= grid_min + 1e-9, "exact {} grid {}", res.distance, grid_min);
        assert!(res.distance >= grid_min - 5e-3, "exact {} grid {}", res.distance, grid_min);
    }
}
