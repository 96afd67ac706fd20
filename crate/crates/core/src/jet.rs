//! Pointwise curvature from the 2-jet of a metric.
//!
//! A [`MetricJet2`] holds `g_ij`, `∂_k g_ij` and `∂_l ∂_k g_ij` at one point of
//! a coordinate chart. That is all the data the Levi-Civita connection and
//! its curvature need at that point. The engine accepts any symmetric
//! invertible metric, which matters because the associated metric is
//! indefinite.
//!
//! Conventions:
//!
//! * `Γ^k_ij = ½ g^kl (∂_i g_jl + ∂_j g_il − ∂_l g_ij)`, so `∇_{e_i} e_j = Γ^k_ij e_k`;
//! * `R(x, y) z = ∇_x ∇_y z − ∇_y ∇_x z − ∇_[x,y] z`;
//! * `R_ijkl = g(R(e_i, e_j) e_k, e_l)`;
//! * `ρ(y, z) = g^ij R(e_i, y, z, e_j)`, `τ = g^ij ρ_ij` and `τ* = dual^ij ρ_ij`,
//!   where `dual` is the inverse of the other metric of the pair.

use std::array;

use crate::error::GeometryError;
use crate::scalar::{max_abs, Scalar};
use crate::tensor::{circulant_sym, invert_sym3, QStructure, Rank4Tensor3, SymMatrix3, DIM};
use crate::tolerance::Tolerance;

/// 2-jet of the functions `A`, `B` of a circulant metric at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantJet<S> {
    pub a: S,
    pub b: S,
    /// `A_i = ∂A/∂x_i`.
    pub da: [S; 3],
    pub db: [S; 3],
    /// `A_ij = ∂²A/∂x_i∂x_j`.
    pub d2a: [[S; 3]; 3],
    pub d2b: [[S; 3]; 3],
}

impl<S: Scalar> CirculantJet<S> {
    /// Jet of constant functions `A = a`, `B = b`.
    pub fn constant(a: S, b: S) -> Self {
        CirculantJet {
            a,
            b,
            da: zeros3(),
            db: zeros3(),
            d2a: zeros33(),
            d2b: zeros33(),
        }
    }

    /// `A > B > 0`.
    pub fn check_positivity(&self) -> Result<(), GeometryError> {
        if self.a > self.b && self.b > S::zero() {
            Ok(())
        } else {
            Err(GeometryError::PositivityViolation {
                a: self.a.to_string(),
                b: self.b.to_string(),
            })
        }
    }

    /// Largest asymmetry of the two Hessians.
    pub fn hessian_asymmetry(&self) -> S {
        let mut worst = S::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                worst = S::max_of(worst, (self.d2a[i][j].clone() - self.d2a[j][i].clone()).abs());
                worst = S::max_of(worst, (self.d2b[i][j].clone() - self.d2b[j][i].clone()).abs());
            }
        }
        worst
    }

    pub fn scale(&self, c: &S) -> Self {
        let s = |v: &S| v.clone() * c.clone();
        CirculantJet {
            a: s(&self.a),
            b: s(&self.b),
            da: self.da.each_ref().map(s),
            db: self.db.each_ref().map(s),
            d2a: self.d2a.each_ref().map(|r| r.each_ref().map(s)),
            d2b: self.d2b.each_ref().map(|r| r.each_ref().map(s)),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> CirculantJet<T> {
        CirculantJet {
            a: f(&self.a),
            b: f(&self.b),
            da: self.da.each_ref().map(&f),
            db: self.db.each_ref().map(&f),
            d2a: self.d2a.each_ref().map(|r| r.each_ref().map(&f)),
            d2b: self.d2b.each_ref().map(|r| r.each_ref().map(&f)),
        }
    }

    /// Metric matrix `circulant(A, B)`.
    pub fn metric(&self) -> SymMatrix3<S> {
        circulant_sym(self.a.clone(), self.b.clone())
    }

    /// Associated metric matrix `circulant(2B, A + B)`.
    pub fn associated_metric(&self) -> SymMatrix3<S> {
        associated_of(&self.a, &self.b)
    }
}

fn associated_of<S: Scalar>(a: &S, b: &S) -> SymMatrix3<S> {
    circulant_sym(b.clone() + b.clone(), a.clone() + b.clone())
}

fn zeros3<S: Scalar>() -> [S; 3] {
    array::from_fn(|_| S::zero())
}

fn zeros33<S: Scalar>() -> [[S; 3]; 3] {
    array::from_fn(|_| zeros3())
}

/// 2-jet of an arbitrary symmetric invertible metric.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricJet2<S> {
    g: SymMatrix3<S>,
    g_inv: SymMatrix3<S>,
    dg: [SymMatrix3<S>; 3],
    d2g: [[SymMatrix3<S>; 3]; 3],
}

impl<S: Scalar> MetricJet2<S> {
    /// `dg[k]` is `∂_k g`, `d2g[k][l]` is `∂_l ∂_k g`.
    ///
    /// Fails when `g` is singular or `d2g[k][l] != d2g[l][k]` beyond tolerance.
    pub fn new(
        g: SymMatrix3<S>,
        dg: [SymMatrix3<S>; 3],
        d2g: [[SymMatrix3<S>; 3]; 3],
        tol: &Tolerance,
    ) -> Result<Self, GeometryError> {
        let mut asym = S::zero();
        let mut scale = S::zero();
        for k in 0..DIM {
            for l in 0..DIM {
                asym = S::max_of(asym, (&d2g[k][l] - &d2g[l][k]).max_abs());
                scale = S::max_of(scale, d2g[k][l].max_abs());
            }
        }
        if !tol.judge(&asym, &scale).holds() {
            return Err(GeometryError::AsymmetricHessian {
                residual: asym.to_f64(),
            });
        }
        let g_inv = invert_sym3(&g, tol)?;
        Ok(MetricJet2 { g, g_inv, dg, d2g })
    }

    /// Constant metric: all derivatives vanish.
    pub fn constant(g: SymMatrix3<S>) -> Result<Self, GeometryError> {
        let dg = array::from_fn(|_| SymMatrix3::zero());
        let d2g = array::from_fn(|_| array::from_fn(|_| SymMatrix3::zero()));
        Self::new(g, dg, d2g, &Tolerance::default())
    }

    pub fn metric(&self) -> &SymMatrix3<S> {
        &self.g
    }

    pub fn inverse_metric(&self) -> &SymMatrix3<S> {
        &self.g_inv
    }

    pub fn first(&self) -> &[SymMatrix3<S>; 3] {
        &self.dg
    }

    pub fn second(&self) -> &[[SymMatrix3<S>; 3]; 3] {
        &self.d2g
    }

    /// Multiplies the metric and all its derivatives by `c`.
    pub fn scale(&self, c: &S) -> Result<Self, GeometryError> {
        MetricJet2::new(
            self.g.scale(c),
            self.dg.each_ref().map(|m| m.scale(c)),
            self.d2g.each_ref().map(|r| r.each_ref().map(|m| m.scale(c))),
            &Tolerance::default(),
        )
    }

    pub fn to_f64(&self) -> MetricJet2<f64> {
        MetricJet2 {
            g: self.g.to_f64(),
            g_inv: self.g_inv.to_f64(),
            dg: self.dg.each_ref().map(|m| m.to_f64()),
            d2g: self.d2g.each_ref().map(|r| r.each_ref().map(|m| m.to_f64())),
        }
    }
}

/// Jet of the circulant metric `circulant(A, B)`; requires `A > B > 0`.
pub fn circulant_to_jet<S: Scalar>(cj: &CirculantJet<S>) -> Result<MetricJet2<S>, GeometryError> {
    cj.check_positivity()?;
    MetricJet2::new(
        circulant_sym(cj.a.clone(), cj.b.clone()),
        array::from_fn(|k| circulant_sym(cj.da[k].clone(), cj.db[k].clone())),
        array::from_fn(|k| array::from_fn(|l| circulant_sym(cj.d2a[k][l].clone(), cj.d2b[k][l].clone()))),
        &Tolerance::default(),
    )
}

/// Jet of the associated metric `circulant(2B, A + B)`, by linearity.
///
/// Positivity is not required here; only `det g~ = 2(A + 2B)(A − B)² ≠ 0`.
pub fn associated_jet<S: Scalar>(cj: &CirculantJet<S>) -> Result<MetricJet2<S>, GeometryError> {
    let two = S::from_i64(2);
    let a_minus_b = cj.a.clone() - cj.b.clone();
    let a_plus_2b = cj.a.clone() + two * cj.b.clone();
    if a_minus_b.is_zero() || a_plus_2b.is_zero() {
        return Err(GeometryError::DegenerateAssociated);
    }
    MetricJet2::new(
        associated_of(&cj.a, &cj.b),
        array::from_fn(|k| associated_of(&cj.da[k], &cj.db[k])),
        array::from_fn(|k| array::from_fn(|l| associated_of(&cj.d2a[k][l], &cj.d2b[k][l]))),
        &Tolerance::default(),
    )
    .map_err(|err| match err {
        GeometryError::SingularMatrix { .. } => GeometryError::DegenerateAssociated,
        other => other,
    })
}

/// Connection coefficients `C^k_ij` with `∇_{e_i} e_j = C^k_ij e_k`.
///
/// For a coordinate frame these are the Christoffel symbols and are symmetric
/// in `i, j`; for a left-invariant frame they are not.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection<S> {
    // [k][i][j]
    coeffs: [[[S; 3]; 3]; 3],
}

impl<S: Scalar> Connection<S> {
    pub fn from_fn(mut f: impl FnMut(usize, usize, usize) -> S) -> Self {
        Connection {
            coeffs: array::from_fn(|k| array::from_fn(|i| array::from_fn(|j| f(k, i, j)))),
        }
    }

    /// `C^k_ij`.
    pub fn get(&self, k: usize, i: usize, j: usize) -> &S {
        &self.coeffs[k][i][j]
    }

    pub fn max_abs(&self) -> S {
        max_abs(self.coeffs.iter().flatten().flatten())
    }

    /// `max |C^k_ij − C^k_ji|`.
    pub fn asymmetry(&self) -> S {
        let mut worst = S::zero();
        for k in 0..DIM {
            for i in 0..DIM {
                for j in 0..DIM {
                    let d = self.get(k, i, j).clone() - self.get(k, j, i).clone();
                    worst = S::max_of(worst, d.abs());
                }
            }
        }
        worst
    }
}

/// Christoffel symbols of the Levi-Civita connection.
pub type Christoffel<S> = Connection<S>;

/// Christoffel symbols of the first kind `[ij, l] = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)`,
/// stored as `[i][j][l]`.
fn first_kind<S: Scalar>(dg: &[SymMatrix3<S>; 3]) -> [[[S; 3]; 3]; 3] {
    array::from_fn(|i| {
        array::from_fn(|j| {
            array::from_fn(|l| {
                S::half() * (dg[i].get(j, l).clone() + dg[j].get(i, l).clone() - dg[l].get(i, j).clone())
            })
        })
    })
}

fn raise<S: Scalar>(g_inv: &SymMatrix3<S>, lowered: &[[[S; 3]; 3]; 3]) -> Connection<S> {
    Connection::from_fn(|k, i, j| {
        (0..DIM).fold(S::zero(), |acc, l| {
            acc + g_inv.get(k, l).clone() * lowered[i][j][l].clone()
        })
    })
}

/// Levi-Civita connection coefficients of the jet at its base point.
pub fn christoffel<S: Scalar>(mj: &MetricJet2<S>) -> Christoffel<S> {
    raise(&mj.g_inv, &first_kind(&mj.dg))
}

/// `∂_m Γ^k_ij`, stored as `[m]`.
fn christoffel_derivatives<S: Scalar>(mj: &MetricJet2<S>) -> [Connection<S>; 3] {
    let lowered = first_kind(&mj.dg);
    array::from_fn(|m| {
        // ∂_m g^kl = −g^ka (∂_m g_ab) g^bl
        let d_inv = SymMatrix3::from_fn(|k, l| {
            let mut acc = S::zero();
            for a in 0..DIM {
                for b in 0..DIM {
                    acc = acc + mj.g_inv.get(k, a).clone() * mj.dg[m].get(a, b).clone() * mj.g_inv.get(b, l).clone();
                }
            }
            -acc
        });
        // ∂_m [ij, l]; d2g[p][m] = ∂_m ∂_p g
        let d_lowered: [[[S; 3]; 3]; 3] = array::from_fn(|i| {
            array::from_fn(|j| {
                array::from_fn(|l| {
                    S::half()
                        * (mj.d2g[i][m].get(j, l).clone() + mj.d2g[j][m].get(i, l).clone()
                            - mj.d2g[l][m].get(i, j).clone())
                })
            })
        });
        Connection::from_fn(|k, i, j| {
            (0..DIM).fold(S::zero(), |acc, l| {
                acc + d_inv.get(k, l).clone() * lowered[i][j][l].clone()
                    + mj.g_inv.get(k, l).clone() * d_lowered[i][j][l].clone()
            })
        })
    })
}

/// Residual of `∂_k g_ij − C^l_ki g_lj − C^l_kj g_il = 0`.
pub fn metric_compatibility_residual<S: Scalar>(mj: &MetricJet2<S>, gamma: &Christoffel<S>) -> S {
    let mut worst = S::zero();
    for k in 0..DIM {
        for i in 0..DIM {
            for j in 0..DIM {
                let mut r = mj.dg[k].get(i, j).clone();
                for l in 0..DIM {
                    r = r
                        - gamma.get(l, k, i).clone() * mj.g.get(l, j).clone()
                        - gamma.get(l, k, j).clone() * mj.g.get(i, l).clone();
                }
                worst = S::max_of(worst, r.abs());
            }
        }
    }
    worst
}

/// Curvature data of one metric at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureBundle<S> {
    /// Connection coefficients in the frame the curvature was computed in.
    pub gamma: Connection<S>,
    /// `R_ijkl = g(R(e_i, e_j) e_k, e_l)`.
    pub riemann: Rank4Tensor3<S>,
    /// `ρ_yz = g^ij R_{i y z j}`.
    pub ricci: SymMatrix3<S>,
    /// `τ = g^ij ρ_ij`.
    pub tau: S,
    /// `τ* = dual^ij ρ_ij`.
    pub tau_star: S,
}

impl<S: Scalar> CurvatureBundle<S> {
    /// Assembles Ricci tensor and both scalar curvatures from a lowered
    /// curvature tensor.
    pub fn from_riemann(
        gamma: Connection<S>,
        riemann: Rank4Tensor3<S>,
        g_inv: &SymMatrix3<S>,
        dual: &SymMatrix3<S>,
    ) -> Self {
        let ricci = SymMatrix3::from_fn(|y, z| {
            let mut acc = S::zero();
            for i in 0..DIM {
                for j in 0..DIM {
                    acc = acc + g_inv.get(i, j).clone() * riemann.get(i, y, z, j).clone();
                }
            }
            acc
        });
        let tau = g_inv.contract(&ricci);
        let tau_star = dual.contract(&ricci);
        CurvatureBundle {
            gamma,
            riemann,
            ricci,
            tau,
            tau_star,
        }
    }

    /// Largest violation of the algebraic curvature symmetries, first Bianchi
    /// identity and symmetry of the full Ricci contraction.
    pub fn symmetry_residual(&self, g_inv: &SymMatrix3<S>) -> S {
        let mut worst = self.riemann.symmetry_residual();
        for y in 0..DIM {
            for z in 0..DIM {
                let mut a = S::zero();
                let mut b = S::zero();
                for i in 0..DIM {
                    for j in 0..DIM {
                        a = a + g_inv.get(i, j).clone() * self.riemann.get(i, y, z, j).clone();
                        b = b + g_inv.get(i, j).clone() * self.riemann.get(i, z, y, j).clone();
                    }
                }
                worst = S::max_of(worst, (a - b).abs());
            }
        }
        worst
    }

    pub fn scale_of(&self) -> S {
        S::max_of(self.riemann.max_abs(), self.ricci.max_abs())
    }
}

/// Curvature of the jet's metric at its base point.
///
/// `dual` is the inverse of the complementary metric, used for `τ*`.
pub fn curvature_bundle<S: Scalar>(mj: &MetricJet2<S>, dual: &SymMatrix3<S>) -> CurvatureBundle<S> {
    let gamma = christoffel(mj);
    let d_gamma = christoffel_derivatives(mj);
    // R^m_ijk = ∂_i Γ^m_jk − ∂_j Γ^m_ik + Γ^m_il Γ^l_jk − Γ^m_jl Γ^l_ik
    let mixed: Vec<S> = {
        let mut out = Vec::with_capacity(81);
        for m in 0..DIM {
            for i in 0..DIM {
                for j in 0..DIM {
                    for k in 0..DIM {
                        let mut r = d_gamma[i].get(m, j, k).clone() - d_gamma[j].get(m, i, k).clone();
                        for l in 0..DIM {
                            r = r + gamma.get(m, i, l).clone() * gamma.get(l, j, k).clone()
                                - gamma.get(m, j, l).clone() * gamma.get(l, i, k).clone();
                        }
                        out.push(r);
                    }
                }
            }
        }
        out
    };
    let mixed_at = |m: usize, i: usize, j: usize, k: usize| &mixed[((m * DIM + i) * DIM + j) * DIM + k];
    let riemann = Rank4Tensor3::from_fn(|i, j, k, l| {
        (0..DIM).fold(S::zero(), |acc, m| {
            acc + mixed_at(m, i, j, k).clone() * mj.g.get(m, l).clone()
        })
    });
    CurvatureBundle::from_riemann(gamma, riemann, &mj.g_inv, dual)
}

/// Covariant derivative of `Q` as an array `[i][k][j]` = `(∇_i Q)^k_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct NablaQ<S> {
    values: [[[S; 3]; 3]; 3],
}

impl<S: Scalar> NablaQ<S> {
    /// `(∇_i Q)^k_j = C^k_im Q^m_j − C^m_ij Q^k_m` for constant `Q` components.
    pub fn from_connection(conn: &Connection<S>) -> Self {
        NablaQ {
            values: array::from_fn(|i| {
                array::from_fn(|k| {
                    array::from_fn(|j| {
                        let mut acc = S::zero();
                        for m in 0..DIM {
                            acc = acc + conn.get(k, i, m).clone() * QStructure::coeff::<S>(m, j)
                                - conn.get(m, i, j).clone() * QStructure::coeff::<S>(k, m);
                        }
                        acc
                    })
                })
            }),
        }
    }

    /// `(∇_i Q)^k_j`.
    pub fn get(&self, i: usize, k: usize, j: usize) -> &S {
        &self.values[i][k][j]
    }

    pub fn max_abs(&self) -> S {
        max_abs(self.values.iter().flatten().flatten())
    }
}

/// `∇Q` for the Levi-Civita connection of the jet.
pub fn nabla_q<S: Scalar>(mj: &MetricJet2<S>) -> NablaQ<S> {
    NablaQ::from_connection(&christoffel(mj))
}

/// `max |g(Q e_i, Q e_j) − g(e_i, e_j)|`.
pub fn check_compatibility<S: Scalar>(g: &SymMatrix3<S>) -> S {
    let mut worst = S::zero();
    for i in 0..DIM {
        for j in 0..DIM {
            let d = g.get(QStructure::image(i), QStructure::image(j)).clone() - g.get(i, j).clone();
            worst = S::max_of(worst, d.abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num::Zero;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn constant_jet_is_flat() {
        let cj = CirculantJet::constant(q(2), q(1));
        let mj = circulant_to_jet(&cj).unwrap();
        assert_eq!(mj.metric(), &circulant_sym(q(2), q(1)));
        let gamma = christoffel(&mj);
        assert!(gamma.max_abs().is_zero());
        let dual = associated_jet(&cj).unwrap().inverse_metric().clone();
        let b = curvature_bundle(&mj, &dual);
        assert!(b.riemann.max_abs().is_zero());
        assert!(b.ricci.max_abs().is_zero());
        assert!(b.tau.is_zero() && b.tau_star.is_zero());
        assert!(nabla_q(&mj).max_abs().is_zero());
    }

    #[test]
    fn first_derivative_is_linear_in_the_jet() {
        let mut cj = CirculantJet::constant(q(2), q(1));
        cj.da = [q(1), q(0), q(0)];
        let mj = circulant_to_jet(&cj).unwrap();
        assert_eq!(mj.first()[0], circulant_sym(q(1), q(0)));
        assert!(mj.first()[1].max_abs().is_zero());
    }

    #[test]
    fn positivity_is_enforced() {
        let cj = CirculantJet::constant(q(1), q(2));
        assert!(matches!(
            circulant_to_jet(&cj),
            Err(GeometryError::PositivityViolation { .. })
        ));
        let cj = CirculantJet::constant(q(2), q(0));
        assert!(circulant_to_jet(&cj).is_err());
    }

    #[test]
    fn associated_shapes() {
        let cj = CirculantJet::constant(q(2), q(1));
        let at = associated_jet(&cj).unwrap();
        assert_eq!(at.metric(), &circulant_sym(q(2), q(3)));
        // Lie setup A = 1, B = 0
        let lie = CirculantJet::constant(q(1), q(0));
        assert_eq!(associated_jet(&lie).unwrap().metric(), &circulant_sym(q(0), q(1)));
        assert_eq!(
            associated_jet(&CirculantJet::constant(q(1), q(1))),
            Err(GeometryError::DegenerateAssociated)
        );
        assert_eq!(
            associated_jet(&CirculantJet::constant(q(2), q(-1))),
            Err(GeometryError::DegenerateAssociated)
        );
    }

    #[test]
    fn associated_jet_is_homogeneous() {
        let mut cj = CirculantJet::constant(q(3), q(1));
        cj.da = [q(1), q(-2), q(0)];
        cj.db = [q(0), q(1), q(1)];
        cj.d2b[0][1] = q(2);
        cj.d2b[1][0] = q(2);
        let c = Rational::ratio(5, 3);
        let lhs = associated_jet(&cj.scale(&c)).unwrap();
        let rhs = associated_jet(&cj).unwrap().scale(&c).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn asymmetric_second_derivatives_are_rejected() {
        let g = SymMatrix3::<Rational>::identity();
        let mut d2g: [[SymMatrix3<Rational>; 3]; 3] = array::from_fn(|_| array::from_fn(|_| SymMatrix3::zero()));
        d2g[0][1] = circulant_sym(q(1), q(0));
        let err = MetricJet2::new(g, array::from_fn(|_| SymMatrix3::zero()), d2g, &Tolerance::default());
        assert!(matches!(err, Err(GeometryError::AsymmetricHessian { .. })));
    }

    #[test]
    fn compatibility_residuals() {
        assert!(check_compatibility(&circulant_sym(q(2), q(1))).is_zero());
        assert!(check_compatibility(&SymMatrix3::<Rational>::identity()).is_zero());
        let diag = SymMatrix3::from_fn(|i, j| if i == j { q(i as i64 + 1) } else { q(0) });
        // g(Qe3, Qe3) − g(e3, e3) = g11 − g33 = −2
        assert_eq!(check_compatibility(&diag), q(2));
    }
}
