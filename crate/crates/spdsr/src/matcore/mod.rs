//! Matrix types and numeric kernels: symmetric eigendecomposition,
//! rotation-group exponential and logarithm, diagonal and SPD spectral
//! maps, and the rotation-constrained 2x2 SVD.

mod eig;
mod rot;
mod svd2;
mod types;

pub use eig::{diag_exp, diag_log, spd_exp, spd_log, spd_power, sym_eig};
pub(crate) use eig::spd_eig;
pub use rot::{so_angle, so_exp, so_log, so_log_between};
pub use svd2::{semi_svd2, SemiSvd2};
pub use types::{AntiSym, DiagMat, Rotation, SymMat};
pub(crate) use types::check_dim;

use nalgebra::DMatrix;

use crate::error::{SrError, SrResult};

/// Frobenius inner product `trace(X Y')` of two equally sized matrices.
pub fn frob_inner(x: &DMatrix<f64>, y: &DMatrix<f64>) -> SrResult<f64> {
    if x.shape() != y.shape() {
        return Err(SrError::invalid(format!(
            "shape mismatch: {:?} vs {:?}",
            x.shape(),
            y.shape()
        )));
    }
    Ok(x.dot(y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_product_examples() {
        let id = DMatrix::<f64>::identity(3, 3);
        assert_eq!(frob_inner(&id, &id).unwrap(), 3.0);

        let theta = 0.8;
        let a = AntiSym::Planar(theta).matrix();
        assert!((frob_inner(&a, &a).unwrap() - 2.0 * theta * theta).abs() < 1e-15);

        let wide = DMatrix::<f64>::zeros(2, 3);
        assert!(frob_inner(&id, &wide).is_err());
    }
}
