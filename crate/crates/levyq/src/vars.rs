//! Variable-id conventions shared across the crate.
//!
//! Polynomials are agnostic about what their variable ids mean; the modules
//! that build them agree on two contexts:
//!
//! * cumulant context: ids `0..n` stand for `x_1, ..., x_n` (id `j` is
//!   `x_{j+1}`),
//! * space-time context: the named ids below.
//!
//! [`E`] is an atom standing for `e^{1/2}`. It never cancels (it is
//! transcendental over the rationals), so polynomials in it behave exactly
//! like polynomials in an indeterminate; evaluation maps it to `exp(0.5)`.

use crate::poly::VarId;

/// Space coordinate `x`.
pub const X: VarId = 0;
/// Time coordinate `t`.
pub const T: VarId = 1;
/// Second time coordinate `s`, used by two-time identities.
pub const S: VarId = 2;
/// The constant `e^{1/2}` treated as an atom. Its id sits outside the
/// ordinary range so it never collides with a cumulant variable and the
/// degree grading can ignore it.
pub const E: VarId = VarId::MAX;
/// First summand variable in convolution identities.
pub const Y: VarId = 4;
/// Second summand variable in convolution identities.
pub const Z: VarId = 5;

/// Id of `x_k` (1-based) in the cumulant context.
pub fn cumulant_var(k: usize) -> VarId {
    debug_assert!(k >= 1);
    (k - 1) as VarId
}
