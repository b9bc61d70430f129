//! Exponential and logarithm on the rotation groups SO(2) and SO(3).
//!
//! The logarithm returns the principal (minimal-norm) antisymmetric
//! generator together with a flag marking involutions (rotations by pi),
//! where two minimal generators exist and a deterministic one is chosen.

use nalgebra::{DMatrix, Vector3};

use crate::error::{SrError, SrResult};
use crate::matcore::types::{AntiSym, Rotation};
use crate::tol;

use std::f64::consts::PI;

/// Beyond this angle the SO(3) logarithm switches from the difference
/// formula `theta/(2 sin theta) (R - R')` to axis extraction from the
/// symmetric part, which stays accurate as the angle approaches pi.
const NEAR_PI_CUT: f64 = 3.0;

/// Exponential map: a plane rotation for `p = 2`, the Rodrigues formula
/// for `p = 3`.
pub fn so_exp(a: &AntiSym) -> Rotation {
    match a {
        AntiSym::Planar(t) => {
            let (c, s) = (t.cos(), t.sin());
            Rotation::new_unchecked(DMatrix::from_row_slice(2, 2, &[c, -s, s, c]))
        }
        AntiSym::Spatial(axis) => {
            let theta = axis.norm();
            if theta == 0.0 {
                return Rotation::identity(3);
            }
            let k = AntiSym::Spatial(axis / theta).matrix();
            let half = 0.5 * theta;
            let r = DMatrix::identity(3, 3)
                + &k * theta.sin()
                + (&k * &k) * (2.0 * half.sin() * half.sin());
            Rotation::new_unchecked(r)
        }
    }
}

/// The antisymmetric part read as an axis vector: for antisymmetric `M`
/// this is the vector `s` with `M = [s]_x`.
fn vee3(m: &DMatrix<f64>) -> Vector3<f64> {
    Vector3::new(
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    )
}

/// Principal logarithm. The boolean is true when the rotation is an
/// involution (angle pi within [`tol::TOL_INVOLUTION`]): both signs of
/// the returned generator are then minimal, and the one whose first
/// nonzero axis component is positive is reported.
pub fn so_log(r: &Rotation) -> (AntiSym, bool) {
    match r.p() {
        2 => {
            let m = r.matrix();
            let theta = m[(1, 0)].atan2(m[(0, 0)]);
            if theta.abs() >= PI - tol::TOL_INVOLUTION {
                (AntiSym::Planar(theta.abs()), true)
            } else {
                (AntiSym::Planar(theta), false)
            }
        }
        _ => so_log3(r),
    }
}

fn so_log3(r: &Rotation) -> (AntiSym, bool) {
    let m = r.matrix();
    // vee3(R - R') = 2 sin(theta) n, trace(R) - 1 = 2 cos(theta); the
    // two-argument angle stays well conditioned at both ends of [0, pi],
    // where acos of the trace alone loses half the working precision.
    let axis_part = vee3(&(m - m.transpose()));
    let s = axis_part.norm();
    let theta = s.atan2(m.trace() - 1.0);

    if theta <= NEAR_PI_CUT {
        let f = if theta < 1e-12 { 0.5 } else { theta / s };
        return (AntiSym::Spatial(axis_part * f), false);
    }

    // Near pi the difference formula cancels; recover the axis from the
    // symmetric part instead: (R + R')/2 = I + (1 - cos)(nn' - I).
    let c = theta.cos();
    let sym = 0.5 * (m + m.transpose());
    let outer = DMatrix::identity(3, 3) + (&sym - DMatrix::identity(3, 3)) / (1.0 - c);
    let j = (0..3)
        .max_by(|&a, &b| outer[(a, a)].total_cmp(&outer[(b, b)]))
        .unwrap();
    let col = Vector3::new(outer[(0, j)], outer[(1, j)], outer[(2, j)]);
    let mut n = col / col.norm();

    let involution = theta >= PI - tol::TOL_INVOLUTION;
    if involution {
        // Deterministic representative of the two minimal generators.
        for i in 0..3 {
            if n[i].abs() > 1e-12 {
                if n[i] < 0.0 {
                    n = -n;
                }
                break;
            }
        }
    } else {
        // Orient along the antisymmetric part, which still carries the
        // sign even when its magnitude is tiny.
        if axis_part.dot(&n) < 0.0 {
            n = -n;
        }
    }
    (AntiSym::Spatial(n * theta), involution)
}

/// Geodesic angle between two rotations: the rotation angle of `v u'`,
/// in `[0, pi]`, without forming a logarithm.
pub fn so_angle(u: &Rotation, v: &Rotation) -> f64 {
    assert_eq!(u.p(), v.p(), "rotation dimensions differ");
    match u.p() {
        2 => {
            let (um, vm) = (u.matrix(), v.matrix());
            // Entries of V U' needed for the plane angle.
            let cos = vm[(0, 0)] * um[(0, 0)] + vm[(0, 1)] * um[(0, 1)];
            let sin = vm[(1, 0)] * um[(0, 0)] + vm[(1, 1)] * um[(0, 1)];
            sin.atan2(cos).abs()
        }
        _ => {
            let r = v.matrix() * u.matrix().transpose();
            let s = vee3(&(&r - r.transpose())).norm();
            s.atan2(r.trace() - 1.0)
        }
    }
}

/// Logarithm wrapper that rejects dimension mismatches for callers that
/// pass two rotations and need `log(v u')`.
pub fn so_log_between(u: &Rotation, v: &Rotation) -> SrResult<(AntiSym, bool)> {
    if u.p() != v.p() {
        return Err(SrError::invalid("rotation dimensions differ"));
    }
    let rel = Rotation::new_unchecked(v.matrix() * u.matrix().transpose());
    Ok(so_log(&rel))
}
