//! Geometry of Q-bases on the associated manifold.
//!
//! A vector `x` with `det[x, Qx, Q²x] ≠ 0` induces the Q-basis
//! `{x, Qx, Q²x}`. Since `g(Qx, Qy) = g(x, y)`, all three vectors have the
//! same `g`-length and all three pairwise angles equal the angle `φ` between
//! `x` and `Qx`, with `cos φ = g(x, Qx) / g(x, x)`.
//!
//! Under `g~` the Gram matrix of the basis has diagonal `2 g(x,x) cos φ` and
//! off-diagonal `g(x,x)(cos φ + 1)`, so `x` is isotropic exactly when
//! `φ = π/2` and the plane `{x, Qx}` is degenerate exactly when
//! `cos φ = −1/3`. At those angles sectional and Ricci curvatures are
//! extended by their limits, which exist when `τ~* = 0`.

use crate::error::GeometryError;
use crate::scalar::Scalar;
use crate::tensor::{apply_q, apply_q2, det_columns, Rank4Tensor3, SymMatrix3, Vector3};
use crate::tolerance::{Check, Tolerance};

/// Half-width of the window around `cos φ = −1/3` treated as degenerate.
pub const DEGENERATE_WINDOW: f64 = 1e-9;

/// Offsets `10^-k` of the sequences used by the limit verifiers.
pub const LIMIT_EXPONENTS: std::ops::RangeInclusive<i32> = 2..=8;

/// Convergence threshold of the limit verifiers, relative to `1 + |limit|`.
pub const LIMIT_TOLERANCE: f64 = 1e-6;

/// A vector together with the Q-basis it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct QBasisData<S> {
    pub x: Vector3<S>,
    pub qx: Vector3<S>,
    pub q2x: Vector3<S>,
    pub cos_phi: S,
    /// `φ` in radians.
    pub phi: f64,
    /// `g(x, x)`.
    pub norm_g: S,
    /// `det[x | Qx | Q²x]`.
    pub det: S,
    /// Largest difference between the cosines of the three pairwise angles.
    pub angle_spread: S,
}

impl<S: Scalar> QBasisData<S> {
    /// `φ ∈ (0, 2π/3)`, i.e. `−1/2 < cos φ < 1`.
    pub fn phi_in_expected_range(&self) -> bool {
        self.cos_phi > -S::half() && self.cos_phi < S::one()
    }
}

/// Q-basis data of `x` for the metric `g`.
pub fn q_basis_data<S: Scalar>(
    x: &Vector3<S>,
    g: &SymMatrix3<S>,
    tol: &Tolerance,
) -> Result<QBasisData<S>, GeometryError> {
    let qx = apply_q(x);
    let q2x = apply_q2(x);
    let det = det_columns(x, &qx, &q2x);
    let m = x.max_abs();
    if x.is_zero() || tol.judge(&det, &(m.clone() * m.clone() * m)).holds() {
        return Err(GeometryError::NotAQBasis { det: det.to_f64() });
    }
    let norm_g = g.bilinear(x, x);
    let cos_phi = g.bilinear(x, &qx) / norm_g.clone();
    let c2 = g.bilinear(&qx, &q2x) / g.bilinear(&qx, &qx);
    let c3 = g.bilinear(x, &q2x) / norm_g.clone();
    let angle_spread = S::max_of(
        (c2.clone() - cos_phi.clone()).abs(),
        S::max_of((c3.clone() - cos_phi.clone()).abs(), (c2 - c3).abs()),
    );
    Ok(QBasisData {
        phi: cos_phi.to_f64().clamp(-1.0, 1.0).acos(),
        x: x.clone(),
        qx,
        q2x,
        cos_phi,
        norm_g,
        det,
        angle_spread,
    })
}

/// `g~` Gram matrix of `{x, Qx, Q²x}` from `φ` and `g(x, x)`.
pub fn gtilde_gram<S: Scalar>(qb: &QBasisData<S>) -> SymMatrix3<S> {
    let diag = S::from_i64(2) * qb.norm_g.clone() * qb.cos_phi.clone();
    let off = qb.norm_g.clone() * (qb.cos_phi.clone() + S::one());
    SymMatrix3::from_fn(|i, j| if i == j { diag.clone() } else { off.clone() })
}

/// `g~` Gram matrix of `{x, Qx, Q²x}` by direct evaluation.
pub fn gtilde_gram_direct<S: Scalar>(qb: &QBasisData<S>, gt: &SymMatrix3<S>) -> SymMatrix3<S> {
    let v = [&qb.x, &qb.qx, &qb.q2x];
    SymMatrix3::from_fn(|i, j| gt.bilinear(v[i], v[j]))
}

/// `|cos φ + 1/3|`.
pub fn degeneracy_residual<S: Scalar>(qb: &QBasisData<S>) -> S {
    (qb.cos_phi.clone() + S::ratio(1, 3)).abs()
}

fn is_degenerate_cos<S: Scalar>(cos_phi: &S) -> bool {
    let r = (cos_phi.clone() + S::ratio(1, 3)).abs();
    if S::EXACT {
        r.is_zero()
    } else {
        r.to_f64() <= DEGENERATE_WINDOW
    }
}

/// `false` when `{x, Qx}` (and then every Q-plane of the basis) is degenerate
/// for `g~`, which happens exactly at `cos φ = −1/3`.
pub fn plane_nondegenerate<S: Scalar>(qb: &QBasisData<S>) -> bool {
    !is_degenerate_cos(&qb.cos_phi)
}

/// `g~(x,x) g~(y,y) − g~(x,y)²`.
pub fn plane_gram_det<S: Scalar>(gt: &SymMatrix3<S>, x: &Vector3<S>, y: &Vector3<S>) -> S {
    let xy = gt.bilinear(x, y);
    gt.bilinear(x, x) * gt.bilinear(y, y) - xy.clone() * xy
}

/// `k~(x, y) = R~(x, y, x, y) / (g~(x,x) g~(y,y) − g~(x,y)²)`.
pub fn sectional_curvature<S: Scalar>(
    r: &Rank4Tensor3<S>,
    gt: &SymMatrix3<S>,
    x: &Vector3<S>,
    y: &Vector3<S>,
    tol: &Tolerance,
) -> Result<S, GeometryError> {
    let den = plane_gram_det(gt, x, y);
    let scale = {
        let m = gt.max_abs() * x.max_abs() * y.max_abs();
        m.clone() * m
    };
    if tol.judge(&den, &scale).holds() {
        return Err(GeometryError::DegeneratePlane { gram: den.to_f64() });
    }
    Ok(r.eval(x, y, x, y) / den)
}

/// Sectional curvature of a Q-plane on an associated manifold in `L2`:
/// `k~ = −τ~*(1 + cos φ) / (3(1 + 3 cos φ)) − τ~/6`.
pub fn q_plane_curvature_closed_form<S: Scalar>(tau_t: &S, tau_star_t: &S, cos_phi: &S) -> Result<S, GeometryError> {
    if is_degenerate_cos(cos_phi) {
        return Err(GeometryError::DegeneratePlane { gram: 0.0 });
    }
    let three = S::from_i64(3);
    let num = tau_star_t.clone() * (S::one() + cos_phi.clone());
    let den = three.clone() * (S::one() + three * cos_phi.clone());
    Ok(-num / den - tau_t.clone() / S::from_i64(6))
}

/// `L1` specialisation `τ~* = −τ~`: `k~ = τ~(1 − cos φ) / (6(1 + 3 cos φ))`.
pub fn q_plane_curvature_l1<S: Scalar>(tau_t: &S, cos_phi: &S) -> Result<S, GeometryError> {
    if is_degenerate_cos(cos_phi) {
        return Err(GeometryError::DegeneratePlane { gram: 0.0 });
    }
    let c = cos_phi.clone();
    Ok(tau_t.clone() * (S::one() - c.clone()) / (S::from_i64(6) * (S::one() + S::from_i64(3) * c)))
}

/// `R~(x, Qx, x, Qx)` on a degenerate plane. On an `L2` associated manifold
/// this is `(8τ~*/27) g(x,x)²`.
pub fn degenerate_plane_numerator<S: Scalar>(r: &Rank4Tensor3<S>, qb: &QBasisData<S>) -> Result<S, GeometryError> {
    if !is_degenerate_cos(&qb.cos_phi) {
        return Err(GeometryError::NotDegeneratePlane {
            cos_phi: qb.cos_phi.to_f64(),
        });
    }
    Ok(r.eval(&qb.x, &qb.qx, &qb.x, &qb.qx))
}

/// `(8τ~*/27) g(x,x)²`.
pub fn degenerate_numerator_closed_form<S: Scalar>(tau_star_t: &S, norm_g: &S) -> S {
    S::ratio(8, 27) * tau_star_t.clone() * norm_g.clone() * norm_g.clone()
}

fn require_einstein<S: Scalar>(tau_t: &S, tau_star_t: &S, tol: &Tolerance) -> Result<(), GeometryError> {
    if tol.judge(tau_star_t, &S::max_of(tau_t.abs(), tau_star_t.abs())).holds() {
        Ok(())
    } else {
        Err(GeometryError::NotEinstein {
            tau_star: tau_star_t.to_f64(),
        })
    }
}

/// Sectional curvature of a degenerate Q-plane, defined as a limit; equals
/// `−τ~/6` and exists only when `τ~* = 0`.
pub fn limit_sectional<S: Scalar>(tau_t: &S, tau_star_t: &S, tol: &Tolerance) -> Result<S, GeometryError> {
    require_einstein(tau_t, tau_star_t, tol)?;
    Ok(-tau_t.clone() / S::from_i64(6))
}

/// `g~(x, x)` as a zero test.
pub fn is_isotropic<S: Scalar>(x: &Vector3<S>, gt: &SymMatrix3<S>, tol: &Tolerance) -> Check<S> {
    let m = x.max_abs();
    tol.judge(&gt.bilinear(x, x), &(gt.max_abs() * m.clone() * m))
}

/// `r~(x) = ρ~(x, x) / g~(x, x)`.
pub fn ricci_curvature<S: Scalar>(
    rho: &SymMatrix3<S>,
    gt: &SymMatrix3<S>,
    x: &Vector3<S>,
    tol: &Tolerance,
) -> Result<S, GeometryError> {
    let iso = is_isotropic(x, gt, tol);
    let norm = gt.bilinear(x, x);
    if iso.holds() {
        return Err(GeometryError::IsotropicDirection { norm: norm.to_f64() });
    }
    Ok(rho.bilinear(x, x) / norm)
}

/// Ricci curvature of a non-isotropic direction on an `L2` associated
/// manifold: `τ~*/(6 cos φ) + τ~*/6 + τ~/3`.
pub fn ricci_closed_form<S: Scalar>(tau_t: &S, tau_star_t: &S, cos_phi: &S) -> Result<S, GeometryError> {
    if cos_phi.is_zero() {
        return Err(GeometryError::IsotropicDirection { norm: 0.0 });
    }
    let six = S::from_i64(6);
    Ok(
        tau_star_t.clone() / (six.clone() * cos_phi.clone())
            + tau_star_t.clone() / six
            + tau_t.clone() / S::from_i64(3),
    )
}

/// `L1` specialisation: `r~ = (τ~/6)(1 − 1/cos φ)`.
pub fn ricci_l1<S: Scalar>(tau_t: &S, cos_phi: &S) -> Result<S, GeometryError> {
    if cos_phi.is_zero() {
        return Err(GeometryError::IsotropicDirection { norm: 0.0 });
    }
    Ok(tau_t.clone() / S::from_i64(6) * (S::one() - S::one() / cos_phi.clone()))
}

/// `ρ~(x, x)` for an isotropic `x` on an `L2` associated manifold:
/// `(τ~*/3) g(x, x)`.
pub fn isotropic_ricci_value<S: Scalar>(tau_star_t: &S, norm_g: &S) -> S {
    tau_star_t.clone() / S::from_i64(3) * norm_g.clone()
}

/// Ricci curvature of an isotropic direction, defined as a limit; equals
/// `τ~/3` and exists only when `τ~* = 0`.
pub fn limit_ricci<S: Scalar>(tau_t: &S, tau_star_t: &S, tol: &Tolerance) -> Result<S, GeometryError> {
    require_einstein(tau_t, tau_star_t, tol)?;
    Ok(tau_t.clone() / S::from_i64(3))
}

/// `(A, B)` of a positive definite circulant metric, i.e. `A > B` and
/// `A + 2B > 0`.
fn circulant_parts(g: &SymMatrix3<f64>) -> Result<(f64, f64), GeometryError> {
    let (a, b) = (*g.get(0, 0), *g.get(0, 1));
    let off = crate::classify::circulant_ricci_residual(g);
    if off > 1e-12 * a.abs().max(1.0) {
        return Err(GeometryError::SearchFailed("metric is not circulant".into()));
    }
    if !(a > b && a + 2.0 * b > 0.0) {
        return Err(GeometryError::PositivityViolation {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    Ok((a, b))
}

/// A vector with `g(x, x) = 1` and `cos φ = cos_phi` for a circulant metric,
/// for `−1/2 < cos_phi < 1`.
///
/// Splitting `x = s (1,1,1) + w` with `w ⟂ (1,1,1)` gives
/// `3 s² (A + 2B) = (1 + 2 cos φ)/3` and `(A − B)|w|² = 2(1 − cos φ)/3`.
pub fn vector_with_angle(g: &SymMatrix3<f64>, cos_phi: f64) -> Result<Vector3<f64>, GeometryError> {
    let (a, b) = circulant_parts(g)?;
    if !(cos_phi > -0.5 && cos_phi < 1.0) {
        return Err(GeometryError::SearchFailed(format!(
            "cos phi = {cos_phi} is outside (-1/2, 1)"
        )));
    }
    let p = (1.0 + 2.0 * cos_phi) / 3.0;
    let w = 2.0 * (1.0 - cos_phi) / 3.0;
    let s = (p / (3.0 * (a + 2.0 * b))).sqrt();
    let t = (w / (a - b)).sqrt() / std::f64::consts::SQRT_2;
    Ok(Vector3::new(s + t, s - t, s))
}

/// A vector inducing a `g`-orthonormal Q-basis, i.e. `g(x, x) = 1` and
/// `g(x, Qx) = 0`. The result is checked against both constraints.
pub fn find_orthonormal_q_basis(g: &SymMatrix3<f64>) -> Result<Vector3<f64>, GeometryError> {
    let x = vector_with_angle(g, 0.0)?;
    let r1 = (g.bilinear(&x, &x) - 1.0).abs();
    let r2 = g.bilinear(&x, &apply_q(&x)).abs();
    let det = det_columns(&x, &apply_q(&x), &apply_q2(&x));
    if r1 > 1e-10 || r2 > 1e-10 || det.abs() < 1e-10 {
        return Err(GeometryError::SearchFailed(format!(
            "residuals {r1:e}, {r2:e}, det {det:e}"
        )));
    }
    Ok(x)
}

/// Values of a sequence approaching a limit.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitSequence {
    pub limit: f64,
    /// `(offset, value)` pairs in order of decreasing offset.
    pub values: Vec<(f64, f64)>,
    /// Largest difference between the last value and the limit, and between
    /// the last two values.
    pub error: f64,
    pub converged: bool,
}

fn finish(limit: f64, values: Vec<(f64, f64)>) -> LimitSequence {
    let last = values.last().map_or(f64::NAN, |v| v.1);
    let prev = values.iter().rev().nth(1).map_or(last, |v| v.1);
    let error = (last - limit).abs().max((last - prev).abs());
    let converged = error < LIMIT_TOLERANCE * (1.0 + limit.abs());
    LimitSequence {
        limit,
        values,
        error,
        converged,
    }
}

/// Evaluates `k~(x_n, Q x_n)` along `φ_n = arccos(−1/3) + 10^-k`.
pub fn verify_limit_sectional(
    r: &Rank4Tensor3<f64>,
    g: &SymMatrix3<f64>,
    gt: &SymMatrix3<f64>,
    limit: f64,
) -> Result<LimitSequence, GeometryError> {
    let phi0 = (-1.0f64 / 3.0).acos();
    let loose = Tolerance::uniform(1e-300)?;
    let mut values = Vec::new();
    for k in LIMIT_EXPONENTS {
        let h = 10f64.powi(-k);
        let x = vector_with_angle(g, (phi0 + h).cos())?;
        let v = sectional_curvature(r, gt, &x, &apply_q(&x), &loose)?;
        values.push((h, v));
    }
    Ok(finish(limit, values))
}

/// Evaluates `r~(x_n)` along `φ_n = π/2 + 10^-k`.
pub fn verify_limit_ricci(
    rho: &SymMatrix3<f64>,
    g: &SymMatrix3<f64>,
    gt: &SymMatrix3<f64>,
    limit: f64,
) -> Result<LimitSequence, GeometryError> {
    let loose = Tolerance::uniform(1e-300)?;
    let mut values = Vec::new();
    for k in LIMIT_EXPONENTS {
        let h = 10f64.powi(-k);
        let x = vector_with_angle(g, (std::f64::consts::FRAC_PI_2 + h).cos())?;
        values.push((h, ricci_curvature(rho, gt, &x, &loose)?));
    }
    Ok(finish(limit, values))
}

/// How a curvature value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluation {
    /// Direct quotient.
    Direct,
    /// Limit value at a degenerate plane or isotropic direction.
    Limit,
}

/// One Q-plane of a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QPlane<S> {
    /// `"x,Qx"`, `"Qx,Q2x"` or `"x,Q2x"`.
    pub label: &'static str,
    pub nondegenerate: bool,
    /// Fails on a degenerate plane of a non-Einstein manifold, where the
    /// limit does not exist.
    pub sectional: Result<S, GeometryError>,
    pub evaluation: Evaluation,
    /// Closed form, present for associated manifolds in `L2`.
    pub closed_form: Option<S>,
}

/// One direction of a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QDirection<S> {
    pub label: &'static str,
    pub isotropic: bool,
    /// Fails on an isotropic direction of a non-Einstein manifold.
    pub ricci: Result<S, GeometryError>,
    pub evaluation: Evaluation,
    pub closed_form: Option<S>,
}

/// Everything the `sectional` report shows for one vector.
#[derive(Debug, Clone, PartialEq)]
pub struct QBasisReport<S> {
    pub basis: QBasisData<S>,
    pub planes: Vec<QPlane<S>>,
    pub directions: Vec<QDirection<S>>,
}

impl<S: Scalar> QBasisReport<S> {
    /// The first undefined curvature value, planes before directions.
    pub fn first_error(&self) -> Option<&GeometryError> {
        self.planes
            .iter()
            .filter_map(|p| p.sectional.as_ref().err())
            .chain(self.directions.iter().filter_map(|d| d.ricci.as_ref().err()))
            .next()
    }
}

/// Curvature data of the associated manifold needed for Q-basis reports.
#[derive(Debug, Clone, Copy)]
pub struct AssociatedCurvature<'a, S> {
    pub riemann: &'a Rank4Tensor3<S>,
    pub ricci: &'a SymMatrix3<S>,
    pub tau: &'a S,
    pub tau_star: &'a S,
    /// Whether the closed forms apply.
    pub in_l2: bool,
}

/// Sectional curvatures of the three Q-planes and Ricci curvatures of the
/// three basis directions. Degenerate planes and isotropic directions take
/// the limit values, which exist only when `τ~* = 0`.
pub fn q_basis_report<S: Scalar>(
    x: &Vector3<S>,
    g: &SymMatrix3<S>,
    gt: &SymMatrix3<S>,
    curv: AssociatedCurvature<'_, S>,
    tol: &Tolerance,
) -> Result<QBasisReport<S>, GeometryError> {
    let basis = q_basis_data(x, g, tol)?;
    let nondegenerate = plane_nondegenerate(&basis);
    let closed_k = if curv.in_l2 && nondegenerate {
        q_plane_curvature_closed_form(curv.tau, curv.tau_star, &basis.cos_phi).ok()
    } else {
        None
    };
    let pairs = [
        ("x,Qx", &basis.x, &basis.qx),
        ("Qx,Q2x", &basis.qx, &basis.q2x),
        ("x,Q2x", &basis.x, &basis.q2x),
    ];
    let planes = pairs
        .into_iter()
        .map(|(label, u, v)| {
            let (sectional, evaluation) = if nondegenerate {
                (sectional_curvature(curv.riemann, gt, u, v, tol), Evaluation::Direct)
            } else {
                let k = limit_sectional(curv.tau, curv.tau_star, tol).map_err(|_| GeometryError::DegeneratePlane {
                    gram: plane_gram_det(gt, u, v).to_f64(),
                });
                (k, Evaluation::Limit)
            };
            QPlane {
                label,
                nondegenerate,
                sectional,
                evaluation,
                closed_form: closed_k.clone(),
            }
        })
        .collect();
    let closed_r = if curv.in_l2 {
        ricci_closed_form(curv.tau, curv.tau_star, &basis.cos_phi).ok()
    } else {
        None
    };
    let directions = [("x", &basis.x), ("Qx", &basis.qx), ("Q2x", &basis.q2x)]
        .into_iter()
        .map(|(label, v)| {
            let isotropic = is_isotropic(v, gt, tol).holds();
            let (ricci, evaluation) = if isotropic {
                let r = limit_ricci(curv.tau, curv.tau_star, tol).map_err(|_| GeometryError::IsotropicDirection {
                    norm: gt.bilinear(v, v).to_f64(),
                });
                (r, Evaluation::Limit)
            } else {
                (ricci_curvature(curv.ricci, gt, v, tol), Evaluation::Direct)
            };
            QDirection {
                label,
                isotropic,
                ricci,
                evaluation,
                closed_form: closed_r.clone(),
            }
        })
        .collect();
    Ok(QBasisReport {
        basis,
        planes,
        directions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::tensor::circulant_sym;
    use num::Zero;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn basis_vector_angles() {
        let tol = Tolerance::default();
        let e1 = Vector3::<Rational>::basis(0);
        let qb = q_basis_data(&e1, &SymMatrix3::identity(), &tol).unwrap();
        assert!(qb.cos_phi.is_zero());
        assert!((qb.phi - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let qb = q_basis_data(&e1, &circulant_sym(q(2, 1), q(1, 1)), &tol).unwrap();
        assert_eq!(qb.cos_phi, q(1, 2));
        assert!((qb.phi - std::f64::consts::FRAC_PI_3).abs() < 1e-15);
        assert!(qb.angle_spread.is_zero());
    }

    #[test]
    fn fixed_vector_is_not_a_q_basis() {
        let x = Vector3::new(q(1, 1), q(1, 1), q(1, 1));
        let err = q_basis_data(&x, &SymMatrix3::identity(), &Tolerance::default());
        assert!(matches!(err, Err(GeometryError::NotAQBasis { .. })));
    }

    #[test]
    fn gram_formula() {
        let tol = Tolerance::default();
        let g = circulant_sym(q(2, 1), q(1, 1));
        let gt = circulant_sym(q(2, 1), q(3, 1));
        let qb = q_basis_data(&Vector3::basis(0), &g, &tol).unwrap();
        let gram = gtilde_gram(&qb);
        assert_eq!((gram.get(0, 0).clone(), gram.get(0, 1).clone()), (q(2, 1), q(3, 1)));
        assert_eq!(gram, gtilde_gram_direct(&qb, &gt));
    }

    #[test]
    fn degenerate_angle() {
        let tol = Tolerance::default();
        let id = SymMatrix3::<Rational>::identity();
        let x = Vector3::new(q(1, 1), q(1, 1), q(-1, 1));
        let qb = q_basis_data(&x, &id, &tol).unwrap();
        assert_eq!(qb.cos_phi, q(-1, 3));
        assert!(!plane_nondegenerate(&qb));
        let gt = circulant_sym(q(0, 1), q(1, 1));
        assert!(plane_gram_det(&gt, &qb.x, &qb.qx).is_zero());
        assert!(q_plane_curvature_closed_form(&q(1, 1), &q(1, 1), &qb.cos_phi).is_err());
        let e1 = q_basis_data(&Vector3::basis(0), &id, &tol).unwrap();
        assert!(plane_nondegenerate(&e1));
    }

    #[test]
    fn closed_form_special_cases() {
        let (t, ts) = (q(12, 1), q(-12, 1));
        assert_eq!(q_plane_curvature_closed_form(&t, &ts, &q(0, 1)).unwrap(), q(2, 1));
        for c in [q(0, 1), q(1, 2), q(-1, 5)] {
            assert_eq!(q_plane_curvature_closed_form(&q(3, 1), &q(0, 1), &c).unwrap(), q(-1, 2));
            assert_eq!(
                q_plane_curvature_closed_form(&t, &ts, &c).unwrap(),
                q_plane_curvature_l1(&t, &c).unwrap()
            );
        }
        assert_eq!(
            ricci_closed_form(&t, &ts, &q(1, 2)).unwrap(),
            ricci_l1(&t, &q(1, 2)).unwrap()
        );
        assert_eq!(degenerate_numerator_closed_form(&q(27, 8), &q(1, 1)), q(1, 1));
    }

    #[test]
    fn limits_need_einstein() {
        let tol = Tolerance::default();
        assert_eq!(limit_sectional(&q(3, 1), &q(0, 1), &tol).unwrap(), q(-1, 2));
        assert_eq!(limit_ricci(&q(3, 1), &q(0, 1), &tol).unwrap(), q(1, 1));
        assert!(limit_sectional(&q(0, 1), &q(0, 1), &tol).unwrap().is_zero());
        assert!(matches!(
            limit_ricci(&q(12, 1), &q(-12, 1), &tol),
            Err(GeometryError::NotEinstein { .. })
        ));
    }

    #[test]
    fn isotropy() {
        let tol = Tolerance::default();
        let gt = circulant_sym(q(0, 1), q(1, 1));
        assert!(is_isotropic(&Vector3::basis(0), &gt, &tol).holds());
        let ones = Vector3::new(q(1, 1), q(1, 1), q(1, 1));
        let gt2 = circulant_sym(q(2, 1), q(3, 1));
        assert!(is_isotropic(&ones, &gt2, &tol).fails());
        assert!(matches!(
            ricci_curvature(&SymMatrix3::zero(), &gt, &Vector3::basis(1), &tol),
            Err(GeometryError::IsotropicDirection { .. })
        ));
    }

    #[test]
    fn near_isotropic_is_borderline() {
        // cos φ = cos(π/2 + 1e-12) gives |g~(x,x)| ≈ 2e-12 against a bound near 9e-13
        let g = SymMatrix3::<f64>::identity();
        let gt = circulant_sym(0.0, 1.0);
        let x = vector_with_angle(&g, (std::f64::consts::FRAC_PI_2 + 1e-12).cos()).unwrap();
        let check = is_isotropic(&x, &gt, &Tolerance::uniform(5e-13).unwrap());
        assert_eq!(check.verdict, crate::tolerance::Verdict::Borderline);
    }

    #[test]
    fn orthonormal_basis() {
        for g in [
            SymMatrix3::identity(),
            circulant_sym(2.0, 1.0),
            circulant_sym(7.5, 0.25),
        ] {
            let x = find_orthonormal_q_basis(&g).unwrap();
            assert!((g.bilinear(&x, &x) - 1.0).abs() <= 1e-10);
            assert!(g.bilinear(&x, &apply_q(&x)).abs() <= 1e-10);
        }
        assert!(find_orthonormal_q_basis(&circulant_sym(1.0, 2.0)).is_err());
    }

    #[test]
    fn angle_construction() {
        let g = circulant_sym(3.0, 1.25);
        for c in [-0.49, -1.0 / 3.0, 0.0, 0.3, 0.99] {
            let x = vector_with_angle(&g, c).unwrap();
            let qb = q_basis_data(&x, &g, &Tolerance::default()).unwrap();
            assert!((qb.cos_phi - c).abs() < 1e-12);
            assert!((qb.norm_g - 1.0).abs() < 1e-12);
        }
    }
}
