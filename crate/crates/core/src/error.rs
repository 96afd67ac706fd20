use thiserror::Error;

/// Errors raised by the geometry engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("singular matrix (|det| = {det:e} at or below threshold {threshold:e})")]
    SingularMatrix { det: f64, threshold: f64 },

    #[error("circulant metric requires A > B > 0, got A = {a}, B = {b}")]
    PositivityViolation { a: String, b: String },

    #[error("associated metric is degenerate (A = B or A = -2B)")]
    DegenerateAssociated,

    #[error("second derivatives are not symmetric (residual {residual:e})")]
    AsymmetricHessian { residual: f64 },

    #[error("Ricci tensor is not circulant (residual {residual:e})")]
    NotCirculantRicci { residual: f64 },

    #[error("curvature tensor is not in class L2 (residual {residual:e})")]
    NotInL2 { residual: f64 },

    #[error("2-plane is degenerate for the associated metric (Gram determinant {gram:e})")]
    DegeneratePlane { gram: f64 },

    #[error("2-plane {{x, Qx}} is not degenerate (cos phi = {cos_phi})")]
    NotDegeneratePlane { cos_phi: f64 },

    #[error("vector does not induce a Q-basis (det[x, Qx, Q^2 x] = {det:e})")]
    NotAQBasis { det: f64 },

    #[error("direction is isotropic for the associated metric (g~(x, x) = {norm:e})")]
    IsotropicDirection { norm: f64 },

    #[error("associated manifold is not Einstein (tau~* = {tau_star})")]
    NotEinstein { tau_star: f64 },

    #[error("orthonormal Q-basis search failed: {0}")]
    SearchFailed(String),

    #[error("structure constants are not antisymmetric (residual {residual:e})")]
    NotAntisymmetric { residual: f64 },

    #[error("structure constants violate the Jacobi identity (residual {residual:e})")]
    JacobiViolation { residual: f64 },

    #[error("expected Lie family {expected}, got family {got}")]
    WrongFamily { expected: u8, got: u8 },

    #[error("invalid tolerance: eps_rel and eps_abs must be positive")]
    InvalidTolerance,
}
