//! Rotation-constrained singular value decomposition of 2x2 matrices.
//!
//! An ordinary SVD allows the orthogonal factors to be reflections. Here
//! both factors are constrained to rotations, and the sign of the second
//! singular value absorbs the determinant: `G = E1 L E2'` with
//! `E1, E2 in SO(2)` and `L = diag(l1, l2)`, `l1 >= |l2|`.

use nalgebra::DMatrix;

use crate::error::{SrError, SrResult};
use crate::matcore::types::{DiagMat, Rotation};

/// Result of [`semi_svd2`]: `g = e1 * lambda * e2'`.
#[derive(Debug, Clone)]
pub struct SemiSvd2 {
    pub e1: Rotation,
    pub lambda: DiagMat,
    pub e2: Rotation,
}

fn plane_rotation(t: f64) -> Rotation {
    let (c, s) = (t.cos(), t.sin());
    Rotation::new_unchecked(DMatrix::from_row_slice(2, 2, &[c, -s, s, c]))
}

/// Decomposes a real 2x2 matrix as `E1 diag(l1, l2) E2'` with both
/// factors rotations and `l1 >= |l2|`. `l2` is negative exactly when
/// `det G < 0`.
///
/// When `l1 = |l2|` the factors are not unique; a deterministic choice
/// is made whose `E1` has first column with nonnegative first component
/// (positive second component breaking the remaining tie).
pub fn semi_svd2(g: &DMatrix<f64>) -> SrResult<SemiSvd2> {
    if g.nrows() != 2 || g.ncols() != 2 {
        return Err(SrError::invalid(format!(
            "semi-SVD needs a 2x2 matrix, got {}x{}",
            g.nrows(),
            g.ncols()
        )));
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(SrError::invalid("semi-SVD input has a non-finite entry"));
    }
    let (a, b, c, d) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);

    // Writing G = R(psi) diag(l1, l2) R(chi)' and expanding gives
    //   a + d = (l1 + l2) cos(psi - chi),   c - b = (l1 + l2) sin(psi - chi),
    //   a - d = (l1 - l2) cos(psi + chi),   c + b = (l1 - l2) sin(psi + chi),
    // so the two amplitudes and the two angles fall out of atan2/hypot.
    let half_sum = 0.5 * (a + d).hypot(c - b);
    let half_dif = 0.5 * (a - d).hypot(c + b);
    let ang_dif = (c - b).atan2(a + d);
    let ang_sum = (c + b).atan2(a - d);

    let psi = 0.5 * (ang_sum + ang_dif);
    let chi = 0.5 * (ang_sum - ang_dif);
    let l1 = half_sum + half_dif;
    let l2 = half_sum - half_dif;

    let mut e1 = plane_rotation(psi);
    let mut e2 = plane_rotation(chi);
    let col = (e1.matrix()[(0, 0)], e1.matrix()[(1, 0)]);
    if col.0 < 0.0 || (col.0 == 0.0 && col.1 < 0.0) {
        e1 = plane_rotation(psi + std::f64::consts::PI);
        e2 = plane_rotation(chi + std::f64::consts::PI);
    }

    Ok(SemiSvd2 {
        e1,
        lambda: DiagMat::new_unchecked(vec![l1, l2]),
        e2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reconstruct(s: &SemiSvd2) -> DMatrix<f64> {
        s.e1.matrix() * s.lambda.matrix() * s.e2.matrix().transpose()
    }

    #[test]
    fn mixed_sign_diagonal() {
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, -3.0]);
        let s = semi_svd2(&g).unwrap();
        assert!((s.lambda.entries()[0] - 3.0).abs() < 1e-14);
        assert!((s.lambda.entries()[1] + 2.0).abs() < 1e-14);
        assert!((reconstruct(&s) - &g).amax() < 1e-14);
        // Deterministic factor choice: E1's first column is (0, 1).
        assert!(s.e1.matrix()[(0, 0)].abs() < 1e-15);
        assert!(s.e1.matrix()[(1, 0)] > 0.0);
    }

    #[test]
    fn identity_input() {
        let s = semi_svd2(&DMatrix::identity(2, 2)).unwrap();
        assert_eq!(s.lambda.entries(), &[1.0, 1.0]);
        assert!((s.e1.matrix() - DMatrix::identity(2, 2)).amax() < 1e-15);
        assert!((s.e2.matrix() - DMatrix::identity(2, 2)).amax() < 1e-15);
    }

    #[test]
    fn zero_input() {
        let s = semi_svd2(&DMatrix::zeros(2, 2)).unwrap();
        assert_eq!(s.lambda.entries(), &[0.0, 0.0]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(semi_svd2(&DMatrix::zeros(3, 3)).is_err());
        let nan = DMatrix::from_row_slice(2, 2, &[f64::NAN, 0.0, 0.0, 1.0]);
        assert!(semi_svd2(&nan).is_err());
    }

    proptest! {
        #[test]
        fn decomposition_invariants(
            a in -10.0f64..10.0, b in -10.0f64..10.0,
            c in -10.0f64..10.0, d in -10.0f64..10.0,
        ) {
            let g = DMatrix::from_row_slice(2, 2, &[a, b, c, d]);
            let s = semi_svd2(&g).unwrap();
            let (l1, l2) = (s.lambda.entries()[0], s.lambda.entries()[1]);
            prop_assert!(l1 >= l2.abs() - 1e-12);
            prop_assert!((reconstruct(&s) - &g).amax() < 1e-12);
            // The factors must be valid rotations.
            prop_assert!(Rotation::new(s.e1.matrix().clone()).is_ok());
            prop_assert!(Rotation::new(s.e2.matrix().clone()).is_ok());
            // l1 * l2 carries the determinant.
            let det = a * d - b * c;
            prop_assert!((l1 * l2 - det).abs() < 1e-10 * (1.0 + det.abs()));
        }
    }
}
