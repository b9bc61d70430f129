//! Scaling-rotation geometry for 2x2 and 3x3 symmetric positive-definite
//! matrices.
//!
//! An SPD matrix is treated as a rotation (its eigenvectors) applied to a
//! scaling (its eigenvalues). This crate measures how much rotation and
//! scaling it takes to deform one SPD matrix into another, builds the
//! minimal curves that realize that deformation, and compares them with
//! Euclidean, log-Euclidean, and affine-invariant interpolation through
//! determinant, fractional anisotropy, mean diffusivity, and rotation
//! angle along each path.
//!
//! Module layout:
//!
//! - [`matcore`]: matrix types and numeric kernels (eigendecomposition,
//!   rotation exp/log, SPD spectral maps, 2x2 semi-SVD);
//! - [`group`]: permutations, sign changes, eigenvalue partitions, and
//!   eigen-decomposition version enumeration;
//! - [`manifold`]: the frame manifold SO(p) x Diag+(p) with its metric,
//!   exponential/logarithm maps, and geodesics;
//! - [`srdist`]: the scaling-rotation distance, minimal pairs, and the
//!   rotation-alignment maximization behind the 3x3 repeated-eigenvalue
//!   cases;
//! - [`interp`]: interpolation curves for all schemes, tensor statistics,
//!   and interior-effect detection (swelling, fattening, shrinking).

pub mod error;
pub mod group;
pub mod interp;
pub mod manifold;
pub mod matcore;
pub mod srdist;
pub mod tol;

pub use error::{SrError, SrResult};
pub use group::{Partition, Perm, SignChange};
pub use interp::{CurveParams, EffectReport, Scheme, TensorStats, Trajectory, TrajectorySample};
pub use manifold::{Frame, MetricConfig, Tangent};
pub use matcore::{AntiSym, DiagMat, Rotation, SymMat};
pub use srdist::{MinimalPairResult, MultiplicityClass, SrConfig};
