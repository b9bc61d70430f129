//! Numerical tolerances used across the crate.
//!
//! Validation thresholds are fixed constants; decision thresholds that a
//! caller may reasonably want to tune (eigenvalue equality, tie reporting,
//! ascent convergence) are defaults consumed by [`crate::srdist::SrConfig`].

/// Positive-definiteness threshold, relative to the largest eigenvalue.
/// An eigenvalue below `TOL_PD * max_eigenvalue` counts as non-positive.
pub const TOL_PD: f64 = 1e-12;

/// Orthogonality validation: `R` is accepted as a rotation when
/// `max |R' R - I|` and `|det R - 1|` stay below this bound.
pub const TOL_ORTH: f64 = 1e-9;

/// Eigen-reconstruction bound: `U D U'` must return the input within this
/// tolerance, relative to the largest absolute entry.
pub const TOL_RECON: f64 = 1e-11;

/// Default relative tolerance for treating two eigenvalues as equal.
/// The comparison scale is `max(1, largest eigenvalue)`.
pub const TOL_EQ_DEFAULT: f64 = 1e-8;

/// Relative eigenvalue gaps above the equality tolerance but below
/// `NEAR_MULTIPLICITY_FACTOR` times it are flagged as near-multiplicity:
/// the computation proceeds on the distinct-eigenvalue branch but the
/// result is marked as sensitive to perturbation.
pub const NEAR_MULTIPLICITY_FACTOR: f64 = 10.0;

/// Default absolute tolerance for reporting tied minimal pairs.
pub const TOL_TIE_DEFAULT: f64 = 1e-9;

/// A rotation whose angle is within this bound of pi counts as an
/// involution, where the principal logarithm is not unique and both
/// signs of the axis give a minimal one.
pub const TOL_INVOLUTION: f64 = 1e-9;

/// Default convergence threshold on the change of the trace objective in
/// the alternating rotation-alignment ascent.
pub const TOL_G_DEFAULT: f64 = 1e-12;

/// Default iteration cap for the alternating ascent.
pub const MAX_ITER_DEFAULT: usize = 200;

/// Threshold on tangent norms below which a curve component counts as
/// absent when labeling a minimal curve (pure rotation, pure scaling, ...).
pub const TOL_CURVE_CHARACTER: f64 = 1e-9;

/// Guard band for interpolation effect detection (swelling, fattening,
/// shrinking): an interior extremum must beat the endpoint bound by more
/// than this margin to count.
pub const TOL_EFFECT: f64 = 1e-9;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerances_are_positive() {
        for t in [
            TOL_PD,
            TOL_ORTH,
            TOL_RECON,
            TOL_EQ_DEFAULT,
            TOL_TIE_DEFAULT,
            TOL_G_DEFAULT,
            TOL_CURVE_CHARACTER,
            TOL_EFFECT,
        ] {
            assert!(t > 0.0 && t < 1.0);
        }
    }

    #[test]
    fn reconstruction_is_looser_than_positivity() {
        // The eigensolver may not promise tighter reconstruction than the
        // positivity check it feeds.
        for (tighter, looser) in [(TOL_PD, TOL_RECON), (TOL_RECON, TOL_EQ_DEFAULT)] {
            assert!(tighter < looser);
        }
    }
}
