//! Matrix domain types: symmetric, rotation, diagonal, and antisymmetric
//! matrices of dimension 2 or 3.
//!
//! Every type validates its defining structure at construction, so the
//! numeric kernels can assume well-formed input. Dimensions other than
//! 2 and 3 are rejected everywhere.

use nalgebra::{DMatrix, Vector3};

use crate::error::{SrError, SrResult};
use crate::tol;

/// Checks that a dimension is one this crate supports.
pub(crate) fn check_dim(p: usize) -> SrResult<()> {
    if p == 2 || p == 3 {
        Ok(())
    } else {
        Err(SrError::invalid(format!("dimension must be 2 or 3, got {p}")))
    }
}

fn check_finite(values: &[f64], what: &str) -> SrResult<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(SrError::invalid(format!("{what} contains a non-finite entry")))
    }
}

/// A real symmetric matrix of dimension 2 or 3, exactly symmetric by
/// construction: both triangles are filled from the same stored values.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMat {
    p: usize,
    m: DMatrix<f64>,
}

impl SymMat {
    /// Builds a symmetric matrix from its upper triangle in row-major
    /// order: `[m11, m12, m22]` for `p = 2`,
    /// `[m11, m12, m13, m22, m23, m33]` for `p = 3`.
    pub fn from_upper(p: usize, upper: &[f64]) -> SrResult<Self> {
        check_dim(p)?;
        let expect = p * (p + 1) / 2;
        if upper.len() != expect {
            return Err(SrError::invalid(format!(
                "upper triangle for p={p} needs {expect} values, got {}",
                upper.len()
            )));
        }
        check_finite(upper, "upper triangle")?;
        let mut m = DMatrix::zeros(p, p);
        let mut k = 0;
        for i in 0..p {
            for j in i..p {
                m[(i, j)] = upper[k];
                m[(j, i)] = upper[k];
                k += 1;
            }
        }
        Ok(SymMat { p, m })
    }

    /// Accepts a square matrix that is already symmetric to within
    /// `1e-8` relative to its largest entry, then stores it with the two
    /// triangles exactly equal (averaging paired off-diagonal entries).
    pub fn from_matrix(m: &DMatrix<f64>) -> SrResult<Self> {
        let p = m.nrows();
        check_dim(p)?;
        if m.ncols() != p {
            return Err(SrError::invalid(format!(
                "expected a square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        check_finite(m.as_slice(), "matrix")?;
        let scale = f64::max(1.0, m.amax());
        let mut upper = Vec::with_capacity(p * (p + 1) / 2);
        for i in 0..p {
            for j in i..p {
                let skew = (m[(i, j)] - m[(j, i)]).abs();
                if skew > 1e-8 * scale {
                    return Err(SrError::invalid(format!(
                        "matrix is not symmetric: |m[{i}][{j}] - m[{j}][{i}]| = {skew:e}"
                    )));
                }
                upper.push(0.5 * (m[(i, j)] + m[(j, i)]));
            }
        }
        SymMat::from_upper(p, &upper)
    }

    /// Dimension, 2 or 3.
    pub fn p(&self) -> usize {
        self.p
    }

    /// The materialized matrix.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    /// Upper triangle in the same row-major order accepted by
    /// [`SymMat::from_upper`].
    pub fn upper(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.p * (self.p + 1) / 2);
        for i in 0..self.p {
            for j in i..self.p {
                out.push(self.m[(i, j)]);
            }
        }
        out
    }

    /// Determinant by cofactor expansion (exact formula, no factorization).
    pub fn det(&self) -> f64 {
        let m = &self.m;
        match self.p {
            2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
            _ => {
                m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
                    - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
                    + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
            }
        }
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    /// Frobenius norm.
    pub fn frob_norm(&self) -> f64 {
        self.m.norm()
    }
}

/// A rotation matrix: orthogonal with determinant `+1`, validated at
/// construction within [`tol::TOL_ORTH`].
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    p: usize,
    m: DMatrix<f64>,
}

impl Rotation {
    /// Validates orthogonality (`max |R'R - I|`) and `det R = +1`, both
    /// within [`tol::TOL_ORTH`].
    pub fn new(m: DMatrix<f64>) -> SrResult<Self> {
        let p = m.nrows();
        check_dim(p)?;
        if m.ncols() != p {
            return Err(SrError::invalid(format!(
                "expected a square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        check_finite(m.as_slice(), "rotation")?;
        let gram = m.transpose() * &m;
        let mut defect: f64 = 0.0;
        for i in 0..p {
            for j in 0..p {
                let target = if i == j { 1.0 } else { 0.0 };
                defect = defect.max((gram[(i, j)] - target).abs());
            }
        }
        if defect > tol::TOL_ORTH {
            return Err(SrError::invalid(format!(
                "matrix is not orthogonal: max |R'R - I| = {defect:e}"
            )));
        }
        let det = m.determinant();
        if (det - 1.0).abs() > tol::TOL_ORTH {
            return Err(SrError::invalid(format!(
                "orthogonal matrix has determinant {det}, want +1"
            )));
        }
        Ok(Rotation { p, m })
    }

    /// Wraps a matrix that is a rotation by construction (products of
    /// validated rotations, closed-form exponentials). Checked in debug
    /// builds only.
    pub(crate) fn new_unchecked(m: DMatrix<f64>) -> Self {
        debug_assert!(
            Rotation::new(m.clone()).is_ok(),
            "new_unchecked received a non-rotation"
        );
        let p = m.nrows();
        Rotation { p, m }
    }

    /// The identity rotation of dimension `p` (must be 2 or 3).
    pub fn identity(p: usize) -> Self {
        assert!(p == 2 || p == 3, "dimension must be 2 or 3, got {p}");
        Rotation {
            p,
            m: DMatrix::identity(p, p),
        }
    }

    /// Dimension, 2 or 3.
    pub fn p(&self) -> usize {
        self.p
    }

    /// The materialized matrix.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    /// Transposed rotation (the inverse).
    pub fn transposed(&self) -> Rotation {
        Rotation {
            p: self.p,
            m: self.m.transpose(),
        }
    }

    /// Product `self * other`.
    pub fn compose(&self, other: &Rotation) -> Rotation {
        assert_eq!(self.p, other.p, "rotation dimensions differ");
        Rotation {
            p: self.p,
            m: &self.m * &other.m,
        }
    }
}

/// A diagonal matrix of dimension 2 or 3, stored as its diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagMat {
    d: Vec<f64>,
}

impl DiagMat {
    /// Builds a diagonal matrix from its diagonal entries (2 or 3 of them).
    pub fn new(d: Vec<f64>) -> SrResult<Self> {
        check_dim(d.len())?;
        check_finite(&d, "diagonal")?;
        Ok(DiagMat { d })
    }

    pub(crate) fn new_unchecked(d: Vec<f64>) -> Self {
        DiagMat { d }
    }

    /// Dimension, 2 or 3.
    pub fn p(&self) -> usize {
        self.d.len()
    }

    /// Diagonal entries.
    pub fn entries(&self) -> &[f64] {
        &self.d
    }

    /// Whether every diagonal entry is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.d.iter().all(|&v| v > 0.0)
    }

    /// The materialized matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        let p = self.p();
        DMatrix::from_fn(p, p, |i, j| if i == j { self.d[i] } else { 0.0 })
    }

    /// Entry-wise map over the diagonal.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> DiagMat {
        DiagMat {
            d: self.d.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Frobenius norm.
    pub fn frob_norm(&self) -> f64 {
        self.d.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// An antisymmetric matrix, stored by its independent components: a single
/// angle generator for `p = 2`, an axis vector for `p = 3`. The
/// materialized matrix satisfies `A' = -A` exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum AntiSym {
    /// `p = 2`: the matrix `[[0, -t], [t, 0]]`, generator of a plane
    /// rotation by `t`.
    Planar(f64),
    /// `p = 3`: the cross-product matrix of the axis vector `a`, whose
    /// exponential rotates by `|a|` radians about `a`.
    Spatial(Vector3<f64>),
}

impl AntiSym {
    /// The zero element of dimension `p` (must be 2 or 3).
    pub fn zero(p: usize) -> Self {
        assert!(p == 2 || p == 3, "dimension must be 2 or 3, got {p}");
        match p {
            2 => AntiSym::Planar(0.0),
            _ => AntiSym::Spatial(Vector3::zeros()),
        }
    }

    /// Dimension, 2 or 3.
    pub fn p(&self) -> usize {
        match self {
            AntiSym::Planar(_) => 2,
            AntiSym::Spatial(_) => 3,
        }
    }

    /// The rotation amount of the exponential: `|t|` or `|a|`.
    pub fn angle(&self) -> f64 {
        match self {
            AntiSym::Planar(t) => t.abs(),
            AntiSym::Spatial(a) => a.norm(),
        }
    }

    /// Frobenius norm of the materialized matrix, `sqrt(2) * angle`.
    pub fn frob_norm(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.angle()
    }

    /// Scales the generator: `exp(scaled(t)) = exp(A t)`.
    pub fn scaled(&self, t: f64) -> AntiSym {
        match self {
            AntiSym::Planar(v) => AntiSym::Planar(v * t),
            AntiSym::Spatial(a) => AntiSym::Spatial(a * t),
        }
    }

    /// The materialized antisymmetric matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        match self {
            AntiSym::Planar(t) => DMatrix::from_row_slice(2, 2, &[0.0, -t, *t, 0.0]),
            AntiSym::Spatial(a) => DMatrix::from_row_slice(
                3,
                3,
                &[0.0, -a.z, a.y, a.z, 0.0, -a.x, -a.y, a.x, 0.0],
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upper_triangle_round_trip() {
        let upper = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let m = SymMat::from_upper(3, &upper).unwrap();
        assert_eq!(m.upper(), upper.to_vec());
        assert_eq!(m.matrix()[(2, 0)], 3.0);
        assert_eq!(m.matrix()[(0, 2)], 3.0);
    }

    #[test]
    fn rejects_bad_dimension_and_length() {
        assert!(SymMat::from_upper(4, &[0.0; 10]).is_err());
        assert!(SymMat::from_upper(3, &[0.0; 5]).is_err());
        assert!(SymMat::from_upper(2, &[1.0, f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn from_matrix_rejects_asymmetry() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.2, 1.0]);
        assert!(SymMat::from_matrix(&m).is_err());
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let m = SymMat::from_upper(3, &[2.0, 1.0, 0.5, 3.0, -1.0, 4.0]).unwrap();
        let lu = m.matrix().clone().lu().determinant();
        assert!((m.det() - lu).abs() < 1e-12);
    }

    #[test]
    fn rotation_validation() {
        let r = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!(Rotation::new(r).is_ok());
        let reflection = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(Rotation::new(reflection).is_err());
        let skewed = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(Rotation::new(skewed).is_err());
    }

    #[test]
    fn antisym_matrix_is_antisymmetric() {
        let a = AntiSym::Spatial(Vector3::new(0.3, -0.7, 1.1));
        let m = a.matrix();
        assert_eq!(m.transpose(), -&m);
        assert!((a.frob_norm() - m.norm()).abs() < 1e-15);

        let b = AntiSym::Planar(0.9);
        let mb = b.matrix();
        assert_eq!(mb.transpose(), -&mb);
        assert!((b.frob_norm() - mb.norm()).abs() < 1e-15);
    }
}
