//! Eigendecomposition of symmetric matrices and the spectral kernels
//! built on it (matrix logarithm, exponential, and powers of
//! symmetric positive-definite matrices).
//!
//! Dimension 2 uses the closed form. Dimension 3 uses cyclic Jacobi
//! sweeps with inner rotations (|angle| <= pi/4), which stay accurate
//! near eigenvalue multiplicities where branch-based analytic formulas
//! lose digits.

use nalgebra::DMatrix;

use crate::error::{SrError, SrResult};
use crate::matcore::types::{DiagMat, Rotation, SymMat};
use crate::tol;

const MAX_JACOBI_SWEEPS: usize = 30;

/// Eigendecomposition `M = U D U'` with `U` a rotation (`det U = +1`).
///
/// No eigenvalue ordering is imposed; callers that need a particular
/// pairing of eigenvalues choose it themselves. The output is
/// deterministic for a given input.
pub fn sym_eig(m: &SymMat) -> (Rotation, DiagMat) {
    let (mut u, d) = match m.p() {
        2 => sym_eig2(m.matrix()),
        _ => sym_eig3(m.matrix()),
    };
    if u.determinant() < 0.0 {
        let p = u.nrows();
        for i in 0..p {
            u[(i, p - 1)] = -u[(i, p - 1)];
        }
    }
    (Rotation::new_unchecked(u), DiagMat::new_unchecked(d))
}

/// Closed-form 2x2 case. Returns the eigenvector matrix and eigenvalues
/// in the order the formula produces them.
fn sym_eig2(m: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let (a, b, d) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
    if b == 0.0 {
        return (DMatrix::identity(2, 2), vec![a, d]);
    }
    // Rotation angle from tan(2t) = 2b / (a - d); the eigenvalues are
    // mean +/- half the discriminant root.
    let t = 0.5 * (2.0 * b).atan2(a - d);
    let h = (a - d).hypot(2.0 * b);
    let (c, s) = (t.cos(), t.sin());
    let u = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
    let mean = 0.5 * (a + d);
    (u, vec![mean + 0.5 * h, mean - 0.5 * h])
}

/// Cyclic Jacobi for the 3x3 case: repeatedly zeroes each off-diagonal
/// entry with a plane rotation until the off-diagonal mass reaches
/// machine precision relative to the input norm.
fn sym_eig3(m: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let mut a = m.clone();
    let mut v = DMatrix::<f64>::identity(3, 3);
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let stop = (f64::EPSILON * scale).powi(2);

    for _ in 0..MAX_JACOBI_SWEEPS {
        let off = a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2);
        if off <= stop {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let apq = a[(p, q)];
            if apq == 0.0 {
                continue;
            }
            // Same zeroing condition as the 2x2 closed form, reduced to
            // the inner rotation |t| <= pi/4 for guaranteed convergence.
            let mut t = 0.5 * (2.0 * apq).atan2(a[(p, p)] - a[(q, q)]);
            if t > std::f64::consts::FRAC_PI_4 {
                t -= std::f64::consts::FRAC_PI_2;
            } else if t < -std::f64::consts::FRAC_PI_4 {
                t += std::f64::consts::FRAC_PI_2;
            }
            let (c, s) = (t.cos(), t.sin());
            let mut g = DMatrix::<f64>::identity(3, 3);
            g[(p, p)] = c;
            g[(q, q)] = c;
            g[(p, q)] = -s;
            g[(q, p)] = s;
            let b = g.transpose() * &a * &g;
            // Keep the working matrix exactly symmetric and the zeroed
            // entry exactly zero so roundoff cannot reintroduce it.
            a = 0.5 * (&b + b.transpose());
            a[(p, q)] = 0.0;
            a[(q, p)] = 0.0;
            v *= &g;
        }
    }
    let d = vec![a[(0, 0)], a[(1, 1)], a[(2, 2)]];
    (v, d)
}

/// Entry-wise exponential of a diagonal matrix.
pub fn diag_exp(l: &DiagMat) -> DiagMat {
    l.map(f64::exp)
}

/// Entry-wise logarithm of a positive diagonal matrix.
pub fn diag_log(d: &DiagMat) -> SrResult<DiagMat> {
    if !d.is_positive() {
        return Err(SrError::domain(format!(
            "diagonal log needs strictly positive entries, got {:?}",
            d.entries()
        )));
    }
    Ok(d.map(f64::ln))
}

/// Eigendecomposition of `x` with the positive-definiteness check: every
/// eigenvalue must exceed [`tol::TOL_PD`] times the largest one.
pub(crate) fn spd_eig(x: &SymMat) -> SrResult<(Rotation, DiagMat)> {
    let (u, d) = sym_eig(x);
    let max = d.entries().iter().cloned().fold(f64::MIN, f64::max);
    if max <= 0.0 || d.entries().iter().any(|&v| v <= tol::TOL_PD * max) {
        return Err(SrError::domain(format!(
            "matrix is not positive-definite (eigenvalues {:?})",
            d.entries()
        )));
    }
    Ok((u, d))
}

/// Matrix logarithm of a symmetric positive-definite matrix.
pub fn spd_log(x: &SymMat) -> SrResult<SymMat> {
    let (u, d) = spd_eig(x)?;
    Ok(respectrum(&u, &d.map(f64::ln)))
}

/// Matrix exponential of a symmetric matrix (always symmetric
/// positive-definite).
pub fn spd_exp(s: &SymMat) -> SymMat {
    let (u, d) = sym_eig(s);
    respectrum(&u, &d.map(f64::exp))
}

/// Real power `x^alpha` of a symmetric positive-definite matrix.
pub fn spd_power(x: &SymMat, alpha: f64) -> SrResult<SymMat> {
    if !alpha.is_finite() {
        return Err(SrError::invalid("power exponent must be finite"));
    }
    let (u, d) = spd_eig(x)?;
    Ok(respectrum(&u, &d.map(|v| v.powf(alpha))))
}

/// Reassembles `U f(D) U'` as an exactly symmetric matrix.
fn respectrum(u: &Rotation, d: &DiagMat) -> SymMat {
    let m = u.matrix() * d.matrix() * u.matrix().transpose();
    SymMat::from_matrix(&m).expect("spectral reassembly is symmetric")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn assert_decomposition(m: &SymMat) {
        let (u, d) = sym_eig(m);
        let rebuilt = u.matrix() * d.matrix() * u.matrix().transpose();
        let scale = f64::max(1.0, m.matrix().amax());
        let err = (m.matrix() - &rebuilt).amax();
        assert!(err <= tol::TOL_RECON * scale, "reconstruction error {err:e}");
        // new_unchecked skipped validation; check orthonormality here.
        assert!(Rotation::new(u.matrix().clone()).is_ok());
    }

    #[test]
    fn closed_form_2x2() {
        let m = SymMat::from_upper(2, &[2.0, 1.0, 2.0]).unwrap();
        let (_, d) = sym_eig(&m);
        let mut eigs = d.entries().to_vec();
        eigs.sort_by(f64::total_cmp);
        assert!((eigs[0] - 1.0).abs() < 1e-14);
        assert!((eigs[1] - 3.0).abs() < 1e-14);
        assert_decomposition(&m);
    }

    #[test]
    fn diagonal_input_keeps_entry_order() {
        let m = SymMat::from_upper(2, &[1.0, 0.0, 5.0]).unwrap();
        let (u, d) = sym_eig(&m);
        assert_eq!(u.matrix(), &DMatrix::identity(2, 2));
        assert_eq!(d.entries(), &[1.0, 5.0]);
    }

    #[test]
    fn jacobi_3x3_fixed_case() {
        let m = SymMat::from_upper(3, &[4.0, 1.0, -2.0, 3.0, 0.5, 5.0]).unwrap();
        assert_decomposition(&m);
    }

    #[test]
    fn jacobi_survives_tiny_eigenvalue_gap() {
        // Eigenvalues 1, 1 + 1e-13, 2 seen through a rotation.
        let angle: f64 = 0.7;
        let (c, s) = (angle.cos(), angle.sin());
        let r = DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]);
        let rot = DMatrix::from_row_slice(
            3,
            3,
            &[1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c],
        ) * r;
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            1.0,
            1.0 + 1e-13,
            2.0,
        ]));
        let m = SymMat::from_matrix(&(&rot * d * rot.transpose())).unwrap();
        assert_decomposition(&m);
    }

    #[test]
    fn random_symmetric_matrices_decompose() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let p = if rng.gen_bool(0.5) { 2 } else { 3 };
            let n = p * (p + 1) / 2;
            let upper: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let m = SymMat::from_upper(p, &upper).unwrap();
            assert_decomposition(&m);
        }
    }

    #[test]
    fn diag_maps() {
        let d = DiagMat::new(vec![1.0, std::f64::consts::E]).unwrap();
        let l = diag_log(&d).unwrap();
        assert!((l.entries()[0]).abs() < 1e-15);
        assert!((l.entries()[1] - 1.0).abs() < 1e-15);
        let back = diag_exp(&l);
        assert!((back.entries()[1] - std::f64::consts::E).abs() < 1e-15);
        assert!(diag_log(&DiagMat::new(vec![1.0, 0.0]).unwrap()).is_err());
    }

    #[test]
    fn spd_kernels() {
        let x = SymMat::from_upper(2, &[4.0, 0.0, 1.0]).unwrap();
        let half = spd_power(&x, 0.5).unwrap();
        assert!((half.matrix()[(0, 0)] - 2.0).abs() < 1e-12);
        assert!((half.matrix()[(1, 1)] - 1.0).abs() < 1e-12);

        let log = spd_log(&x).unwrap();
        let back = spd_exp(&log);
        assert!((back.matrix() - x.matrix()).amax() < 1e-12);

        let not_spd = SymMat::from_upper(2, &[1.0, 0.0, -1.0]).unwrap();
        assert!(spd_log(&not_spd).is_err());
        assert!(spd_power(&not_spd, 0.5).is_err());
    }

    #[test]
    fn spd_log_of_identity_is_zero() {
        let id = SymMat::from_upper(3, &[1.0, 0.0, 0.0, 1.0, 0.0, 1.0]).unwrap();
        let log = spd_log(&id).unwrap();
        assert!(log.matrix().amax() < 1e-14);
    }
}
