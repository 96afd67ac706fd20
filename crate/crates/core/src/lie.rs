//! Left-invariant geometry on 3-dimensional Lie groups.
//!
//! The Lie algebra has a basis `{x1, x2, x3}` of left-invariant fields with
//! `Q x1 = x2`, `Q x2 = x3`, `Q x3 = x1`. The metric `g` is orthonormal on that
//! basis and the associated metric `g~` has `g~(x_i, x_j) = 1` for `i != j` and
//! `0` on the diagonal. Both have constant components, so the Levi-Civita
//! connection follows from the Koszul formula alone and the curvature is a
//! polynomial in the structure constants.
//!
//! Two families of brackets are provided:
//!
//! * family 1: `[x1, x2] = λ1 x1 + λ2 x2`, `[x2, x3] = λ3 x2 − λ1 x3`,
//!   `[x1, x3] = λ3 x1 + λ2 x3`;
//! * family 2: `[x1, x2] = [x2, x3] = −[x1, x3] = λ1 x1 + λ2 x2 − (λ1 + λ2) x3`.
//!
//! On the associated metric, family 1 is Einstein and in `L2` but not `L1`;
//! family 2 has `∇~Q = 0`.

use std::array;

use crate::error::GeometryError;
use crate::jet::{Connection, CurvatureBundle, NablaQ};
use crate::scalar::{max_abs, Scalar};
use crate::tensor::{circulant_sym, invert_sym3, Rank4Tensor3, SymMatrix3, Vector3, DIM};
use crate::tolerance::Tolerance;

/// Structure constants `c^k_ij` with `[x_i, x_j] = c^k_ij x_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra3<S> {
    // [i][j][k]
    c: [[[S; 3]; 3]; 3],
}

impl<S: Scalar> LieAlgebra3<S> {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn new(c: [[[S; 3]; 3]; 3], tol: &Tolerance) -> Result<Self, GeometryError> {
        let alg = LieAlgebra3 { c };
        let scale = alg.max_abs();
        let anti = alg.antisymmetry_residual();
        if !tol.judge(&anti, &scale).holds() {
            return Err(GeometryError::NotAntisymmetric {
                residual: anti.to_f64(),
            });
        }
        let jacobi = alg.jacobi_residual();
        if !tol.judge(&jacobi, &(scale.clone() * scale)).holds() {
            return Err(GeometryError::JacobiViolation {
                residual: jacobi.to_f64(),
            });
        }
        Ok(alg)
    }

    /// Builds from the three brackets `[x1, x2]`, `[x1, x3]`, `[x2, x3]`.
    pub fn from_brackets(
        b12: Vector3<S>,
        b13: Vector3<S>,
        b23: Vector3<S>,
        tol: &Tolerance,
    ) -> Result<Self, GeometryError> {
        Self::new(Self::table(b12, b13, b23), tol)
    }

    fn table(b12: Vector3<S>, b13: Vector3<S>, b23: Vector3<S>) -> [[[S; 3]; 3]; 3] {
        array::from_fn(|i| {
            array::from_fn(|j| {
                let (v, sign) = match (i, j) {
                    (0, 1) => (Some(&b12), true),
                    (1, 0) => (Some(&b12), false),
                    (0, 2) => (Some(&b13), true),
                    (2, 0) => (Some(&b13), false),
                    (1, 2) => (Some(&b23), true),
                    (2, 1) => (Some(&b23), false),
                    _ => (None, true),
                };
                array::from_fn(|k| match v {
                    Some(v) if sign => v[k].clone(),
                    Some(v) => -v[k].clone(),
                    None => S::zero(),
                })
            })
        })
    }

    /// Abelian algebra.
    pub fn abelian() -> Self {
        LieAlgebra3 {
            c: array::from_fn(|_| array::from_fn(|_| array::from_fn(|_| S::zero()))),
        }
    }

    /// `c^k_ij`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &S {
        &self.c[i][j][k]
    }

    pub fn constants(&self) -> &[[[S; 3]; 3]; 3] {
        &self.c
    }

    pub fn max_abs(&self) -> S {
        max_abs(self.c.iter().flatten().flatten())
    }

    /// `[x_i, x_j]` as a vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vector3<S> {
        Vector3::from_fn(|k| self.c[i][j][k].clone())
    }

    pub fn bracket(&self, u: &Vector3<S>, v: &Vector3<S>) -> Vector3<S> {
        Vector3::from_fn(|k| {
            let mut acc = S::zero();
            for i in 0..DIM {
                for j in 0..DIM {
                    acc = acc + u[i].clone() * v[j].clone() * self.c[i][j][k].clone();
                }
            }
            acc
        })
    }

    pub fn antisymmetry_residual(&self) -> S {
        let mut worst = S::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    let d = self.c[i][j][k].clone() + self.c[j][i][k].clone();
                    worst = S::max_of(worst, d.abs());
                }
            }
        }
        worst
    }

    /// Largest component of `[x_i,[x_j,x_k]] + [x_j,[x_k,x_i]] + [x_k,[x_i,x_j]]`.
    pub fn jacobi_residual(&self) -> S {
        let e = |i| Vector3::<S>::basis(i);
        let mut worst = S::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    let a = self.bracket(&e(i), &self.basis_bracket(j, k));
                    let b = self.bracket(&e(j), &self.basis_bracket(k, i));
                    let c = self.bracket(&e(k), &self.basis_bracket(i, j));
                    let sum = &(&a + &b) + &c;
                    worst = S::max_of(worst, sum.max_abs());
                }
            }
        }
        worst
    }

    pub fn to_f64(&self) -> LieAlgebra3<f64> {
        LieAlgebra3 {
            c: self
                .c
                .each_ref()
                .map(|r| r.each_ref().map(|v| v.each_ref().map(|x| x.to_f64()))),
        }
    }
}

/// Brackets of family 1. The Jacobi identity holds for every `λ`.
pub fn family1<S: Scalar>(l1: S, l2: S, l3: S) -> LieAlgebra3<S> {
    let z = S::zero;
    let b12 = Vector3::new(l1.clone(), l2.clone(), z());
    let b13 = Vector3::new(l3.clone(), z(), l2);
    let b23 = Vector3::new(z(), l3, -l1);
    LieAlgebra3 {
        c: LieAlgebra3::table(b12, b13, b23),
    }
}

/// Brackets of family 2. The Jacobi identity holds for every `λ`.
pub fn family2<S: Scalar>(l1: S, l2: S) -> LieAlgebra3<S> {
    let v = Vector3::new(l1.clone(), l2.clone(), -(l1 + l2));
    let minus_v = -&v;
    LieAlgebra3 {
        c: LieAlgebra3::table(v.clone(), minus_v, v),
    }
}

/// Parameters of one of the two bracket families.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyParams<S> {
    Family1([S; 3]),
    Family2([S; 2]),
}

impl<S: Scalar> FamilyParams<S> {
    pub fn family(&self) -> u8 {
        match self {
            FamilyParams::Family1(_) => 1,
            FamilyParams::Family2(_) => 2,
        }
    }

    pub fn lambdas(&self) -> Vec<S> {
        match self {
            FamilyParams::Family1(l) => l.to_vec(),
            FamilyParams::Family2(l) => l.to_vec(),
        }
    }

    pub fn algebra(&self) -> LieAlgebra3<S> {
        match self {
            FamilyParams::Family1([a, b, c]) => family1(a.clone(), b.clone(), c.clone()),
            FamilyParams::Family2([a, b]) => family2(a.clone(), b.clone()),
        }
    }
}

/// The metric pair on the left-invariant frame.
#[derive(Debug, Clone, PartialEq)]
pub struct LieMetrics<S> {
    /// `g(x_i, x_j) = δ_ij`.
    pub base: SymMatrix3<S>,
    /// `g~(x_i, x_j) = 1 − δ_ij`.
    pub associated: SymMatrix3<S>,
}

impl<S: Scalar> LieMetrics<S> {
    pub fn standard() -> Self {
        LieMetrics {
            base: SymMatrix3::identity(),
            associated: circulant_sym(S::zero(), S::one()),
        }
    }
}

/// Levi-Civita connection of a left-invariant metric with constant components:
/// `2 m(∇_i x_j, x_k) = m([x_i,x_j], x_k) + m([x_k,x_i], x_j) + m([x_k,x_j], x_i)`.
///
/// The result is stored as `C^k_ij` with `∇_{x_i} x_j = C^k_ij x_k`.
pub fn koszul_connection<S: Scalar>(
    alg: &LieAlgebra3<S>,
    metric: &SymMatrix3<S>,
) -> Result<Connection<S>, GeometryError> {
    let inv = invert_sym3(metric, &Tolerance::default())?;
    let e = |i| Vector3::<S>::basis(i);
    let lowered: [[[S; 3]; 3]; 3] = array::from_fn(|i| {
        array::from_fn(|j| {
            array::from_fn(|k| {
                S::half()
                    * (metric.bilinear(&alg.basis_bracket(i, j), &e(k))
                        + metric.bilinear(&alg.basis_bracket(k, i), &e(j))
                        + metric.bilinear(&alg.basis_bracket(k, j), &e(i)))
            })
        })
    });
    Ok(Connection::from_fn(|m, i, j| {
        (0..DIM).fold(S::zero(), |acc, k| {
            acc + inv.get(m, k).clone() * lowered[i][j][k].clone()
        })
    }))
}

/// `∇_u v` for constant-coefficient vectors.
pub fn covariant<S: Scalar>(conn: &Connection<S>, u: &Vector3<S>, v: &Vector3<S>) -> Vector3<S> {
    Vector3::from_fn(|k| {
        let mut acc = S::zero();
        for i in 0..DIM {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..DIM {
                if !v[j].is_zero() && !conn.get(k, i, j).is_zero() {
                    acc = acc + u[i].clone() * v[j].clone() * conn.get(k, i, j).clone();
                }
            }
        }
        acc
    })
}

/// `max |C^k_ij − C^k_ji − c^k_ij|`.
pub fn torsion_residual<S: Scalar>(conn: &Connection<S>, alg: &LieAlgebra3<S>) -> S {
    let mut worst = S::zero();
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                let d = conn.get(k, i, j).clone() - conn.get(k, j, i).clone() - alg.constant(i, j, k).clone();
                worst = S::max_of(worst, d.abs());
            }
        }
    }
    worst
}

/// `max |m(∇_i x_j, x_k) + m(x_j, ∇_i x_k)|`.
pub fn metric_residual<S: Scalar>(conn: &Connection<S>, metric: &SymMatrix3<S>) -> S {
    let e = |i| Vector3::<S>::basis(i);
    let mut worst = S::zero();
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                let d = metric.bilinear(&covariant(conn, &e(i), &e(j)), &e(k))
                    + metric.bilinear(&e(j), &covariant(conn, &e(i), &e(k)));
                worst = S::max_of(worst, d.abs());
            }
        }
    }
    worst
}

/// Curvature of a left-invariant connection, computed algebraically from
/// `R(x_i, x_j) x_k = ∇_i ∇_j x_k − ∇_j ∇_i x_k − ∇_[x_i, x_j] x_k`.
///
/// `metric` lowers the tensor and builds `ρ`, `τ`; `dual` is the inverse of
/// the complementary metric and gives `τ*`.
pub fn invariant_curvature<S: Scalar>(
    conn: &Connection<S>,
    alg: &LieAlgebra3<S>,
    metric: &SymMatrix3<S>,
    dual: &SymMatrix3<S>,
) -> Result<CurvatureBundle<S>, GeometryError> {
    let inv = invert_sym3(metric, &Tolerance::default())?;
    let e = |i| Vector3::<S>::basis(i);
    let nab = |u: &Vector3<S>, v: &Vector3<S>| covariant(conn, u, v);
    let columns: [[Vector3<S>; 3]; 3] = array::from_fn(|i| array::from_fn(|j| nab(&e(i), &e(j))));
    let vectors: Vec<Vector3<S>> = (0..27)
        .map(|n| {
            let (i, j, k) = (n / 9, (n / 3) % 3, n % 3);
            &(&nab(&e(i), &columns[j][k]) - &nab(&e(j), &columns[i][k])) - &nab(&alg.basis_bracket(i, j), &e(k))
        })
        .collect();
    let riemann = Rank4Tensor3::from_fn(|i, j, k, l| metric.bilinear(&vectors[(i * 3 + j) * 3 + k], &e(l)));
    Ok(CurvatureBundle::from_riemann(conn.clone(), riemann, &inv, dual))
}

/// `(∇_{x_i} Q) x_j = ∇_{x_i}(Q x_j) − Q ∇_{x_i} x_j` for all `i, j`.
pub fn nabla_q_invariant_array<S: Scalar>(conn: &Connection<S>) -> NablaQ<S> {
    NablaQ::from_connection(conn)
}

/// Largest component of `∇Q` for a left-invariant connection.
pub fn nabla_q_invariant<S: Scalar>(conn: &Connection<S>) -> S {
    NablaQ::from_connection(conn).max_abs()
}

/// Both metrics' connections and curvatures for one algebra.
#[derive(Debug, Clone)]
pub struct LieInstance<S> {
    pub algebra: LieAlgebra3<S>,
    pub metrics: LieMetrics<S>,
    pub base_connection: Connection<S>,
    pub associated_connection: Connection<S>,
    pub base: CurvatureBundle<S>,
    pub associated: CurvatureBundle<S>,
}

impl<S: Scalar> LieInstance<S> {
    pub fn new(algebra: LieAlgebra3<S>) -> Result<Self, GeometryError> {
        let metrics = LieMetrics::standard();
        let g_inv = invert_sym3(&metrics.base, &Tolerance::default())?;
        let gt_inv = invert_sym3(&metrics.associated, &Tolerance::default())?;
        let base_connection = koszul_connection(&algebra, &metrics.base)?;
        let associated_connection = koszul_connection(&algebra, &metrics.associated)?;
        let base = invariant_curvature(&base_connection, &algebra, &metrics.base, &gt_inv)?;
        let associated = invariant_curvature(&associated_connection, &algebra, &metrics.associated, &g_inv)?;
        Ok(LieInstance {
            algebra,
            metrics,
            base_connection,
            associated_connection,
            base,
            associated,
        })
    }
}

/// Closed-form values on the associated metric for family 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Family1Oracle<S> {
    /// Common value of `R~_1212 = R~_2323 = R~_1313 = R~_2321 = R~_1213 = R~_1323`.
    pub r_value: S,
    /// `ρ~_12 = ρ~_13 = ρ~_23`; the diagonal vanishes.
    pub rho12: S,
    pub tau: S,
    pub tau_star: S,
    /// Sectional curvature of every basic plane `{x_i, x_j}`.
    pub k: S,
}

impl<S: Scalar> Family1Oracle<S> {
    /// The full expected tensor: the six listed components, with
    /// `R~_1223 = −R~_2321`.
    pub fn riemann(&self) -> Rank4Tensor3<S> {
        let p = self.r_value.clone();
        Rank4Tensor3::from_independent([p.clone(), p.clone(), p.clone(), p.clone(), -p.clone(), p])
    }

    pub fn ricci(&self) -> SymMatrix3<S> {
        circulant_sym(S::zero(), self.rho12.clone())
    }
}

pub fn family1_oracle<S: Scalar>(params: &FamilyParams<S>) -> Result<Family1Oracle<S>, GeometryError> {
    let FamilyParams::Family1([l1, l2, l3]) = params else {
        return Err(GeometryError::WrongFamily {
            expected: 1,
            got: params.family(),
        });
    };
    let sq = l1.clone() * l1.clone() + l2.clone() * l2.clone() + l3.clone() * l3.clone();
    let mixed = l1.clone() * l2.clone() + l2.clone() * l3.clone() - l1.clone() * l3.clone();
    let two = S::from_i64(2);
    let r_value = S::half() * sq.clone() + mixed.clone();
    let rho12 = sq.clone() + two * mixed.clone();
    Ok(Family1Oracle {
        tau: S::from_i64(3) * sq.clone() + S::from_i64(6) * mixed.clone(),
        tau_star: S::zero(),
        k: -S::half() * sq - mixed,
        r_value,
        rho12,
    })
}

/// Closed-form values on the associated metric for family 2, in terms of
/// `s = λ1² + λ2² + λ1 λ2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Family2Oracle<S> {
    /// `R~_1212 = R~_2323 = R~_1313 = −R~_1213 = −R~_2123 = −R~_1323 = −2s`.
    pub r1212: S,
    /// `ρ~_11 = ρ~_22 = ρ~_33 = −4s`.
    pub rho11: S,
    /// `ρ~_12 = ρ~_13 = ρ~_23 = 2s`.
    pub rho12: S,
    pub tau: S,
    pub tau_star: S,
    pub k: S,
}

impl<S: Scalar> Family2Oracle<S> {
    pub fn riemann(&self) -> Rank4Tensor3<S> {
        let p = self.r1212.clone();
        // R~_2123 = −R~_1223, so R~_1223 = p
        Rank4Tensor3::from_independent([p.clone(), p.clone(), p.clone(), -p.clone(), p.clone(), -p])
    }

    pub fn ricci(&self) -> SymMatrix3<S> {
        circulant_sym(self.rho11.clone(), self.rho12.clone())
    }
}

pub fn family2_oracle<S: Scalar>(params: &FamilyParams<S>) -> Result<Family2Oracle<S>, GeometryError> {
    let FamilyParams::Family2([l1, l2]) = params else {
        return Err(GeometryError::WrongFamily {
            expected: 2,
            got: params.family(),
        });
    };
    let s = l1.clone() * l1.clone() + l2.clone() * l2.clone() + l1.clone() * l2.clone();
    let n = |k: i64| S::from_i64(k) * s.clone();
    Ok(Family2Oracle {
        r1212: n(-2),
        rho11: n(-4),
        rho12: n(2),
        tau: n(12),
        tau_star: n(-12),
        k: n(2),
    })
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
    fn abelian_is_flat() {
        let alg = LieAlgebra3::<Rational>::abelian();
        assert_eq!(family1(q(0), q(0), q(0)), alg);
        assert_eq!(family2(q(0), q(0)), alg);
        let inst = LieInstance::new(alg).unwrap();
        assert!(inst.associated_connection.max_abs().is_zero());
        assert!(inst.associated.riemann.max_abs().is_zero());
        assert!(nabla_q_invariant(&inst.associated_connection).is_zero());
    }

    #[test]
    fn family1_structure_constants() {
        let alg = family1(q(1), q(0), q(0));
        assert_eq!(*alg.constant(0, 1, 0), q(1));
        assert_eq!(*alg.constant(1, 2, 2), q(-1));
        assert_eq!(*alg.constant(1, 0, 0), q(-1));
        assert!(alg.jacobi_residual().is_zero());
    }

    #[test]
    fn family2_brackets_share_one_vector() {
        let alg = family2(q(1), q(0));
        let v = Vector3::new(q(1), q(0), q(-1));
        assert_eq!(alg.basis_bracket(0, 1), v);
        assert_eq!(alg.basis_bracket(1, 2), v);
        assert_eq!(alg.basis_bracket(0, 2), -&v);
        assert!(alg.jacobi_residual().is_zero());
    }

    #[test]
    fn jacobi_violation_is_detected() {
        // [x1,x2] = x3, [x2,x3] = x2, [x1,x3] = 0 fails the Jacobi identity
        let z = Vector3::<Rational>::zero;
        let err = LieAlgebra3::from_brackets(Vector3::basis(2), z(), Vector3::basis(1), &Tolerance::default());
        assert!(matches!(err, Err(GeometryError::JacobiViolation { .. })));
        // so(3) passes
        let ok = LieAlgebra3::from_brackets(
            Vector3::basis(2),
            -&Vector3::<Rational>::basis(1),
            Vector3::basis(0),
            &Tolerance::default(),
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn family1_connection_table() {
        // 2∇~_{x1} x2 = (λ1−λ2−λ3) x1 + (λ1+λ2−λ3) x2 − (λ1−λ2−λ3) x3
        let (l1, l2, l3) = (q(2), q(3), q(5));
        let alg = family1(l1.clone(), l2.clone(), l3.clone());
        let conn = koszul_connection(&alg, &LieMetrics::standard().associated).unwrap();
        let e = |i| Vector3::<Rational>::basis(i);
        let two = q(2);
        assert_eq!(covariant(&conn, &e(0), &e(0)), e(0).scale(&-l2.clone()));
        assert_eq!(covariant(&conn, &e(1), &e(1)), e(1).scale(&l1));
        assert_eq!(covariant(&conn, &e(2), &e(2)), e(2).scale(&l3));
        let a = l1.clone() - l2.clone() - l3.clone();
        let b = l1.clone() + l2.clone() - l3.clone();
        let c = l1.clone() + l2.clone() + l3.clone();
        let want = |v: [Rational; 3]| Vector3(v);
        assert_eq!(
            covariant(&conn, &e(0), &e(1)).scale(&two),
            want([a.clone(), b.clone(), -a.clone()])
        );
        assert_eq!(
            covariant(&conn, &e(0), &e(2)).scale(&two),
            want([-b.clone(), b.clone(), -a.clone()])
        );
        assert_eq!(
            covariant(&conn, &e(1), &e(0)).scale(&two),
            want([-c.clone(), a.clone(), -a.clone()])
        );
        assert_eq!(
            covariant(&conn, &e(1), &e(2)).scale(&two),
            want([-c.clone(), c.clone(), -a.clone()])
        );
        assert_eq!(
            covariant(&conn, &e(2), &e(0)).scale(&two),
            want([-c.clone(), b.clone(), -b.clone()])
        );
        assert_eq!(covariant(&conn, &e(2), &e(1)).scale(&two), want([-c.clone(), b, c]));
    }

    #[test]
    fn family2_connection_table() {
        let (l1, l2) = (q(3), q(-7));
        let alg = family2(l1.clone(), l2.clone());
        let conn = koszul_connection(&alg, &LieMetrics::standard().associated).unwrap();
        let e = |i| Vector3::<Rational>::basis(i);
        let s = l1.clone() + l2.clone();
        let d = |a: usize, b: usize| &e(a) - &e(b);
        assert_eq!(covariant(&conn, &e(0), &e(0)), d(2, 1).scale(&l1));
        assert_eq!(covariant(&conn, &e(0), &e(1)), d(0, 2).scale(&l1));
        assert_eq!(covariant(&conn, &e(0), &e(2)), d(1, 0).scale(&l1));
        assert_eq!(covariant(&conn, &e(1), &e(0)), d(2, 1).scale(&l2));
        assert_eq!(covariant(&conn, &e(1), &e(1)), d(0, 2).scale(&l2));
        assert_eq!(covariant(&conn, &e(1), &e(2)), d(1, 0).scale(&l2));
        assert_eq!(covariant(&conn, &e(2), &e(0)), d(1, 2).scale(&s));
        // printed without a tilde in the source table; same value either way
        assert_eq!(covariant(&conn, &e(2), &e(1)), d(2, 0).scale(&s));
        assert_eq!(covariant(&conn, &e(2), &e(2)), d(0, 1).scale(&s));
    }

    #[test]
    fn koszul_output_is_torsion_free_and_compatible() {
        let m = LieMetrics::<Rational>::standard();
        for alg in [family1(q(1), q(-2), q(3)), family2(q(4), q(1))] {
            for metric in [&m.base, &m.associated] {
                let conn = koszul_connection(&alg, metric).unwrap();
                assert!(torsion_residual(&conn, &alg).is_zero());
                assert!(metric_residual(&conn, metric).is_zero());
            }
        }
    }

    #[test]
    fn oracles_reject_the_other_family() {
        let p1 = FamilyParams::Family1([q(1), q(0), q(0)]);
        let p2 = FamilyParams::Family2([q(1), q(0)]);
        assert_eq!(
            family2_oracle(&p1),
            Err(GeometryError::WrongFamily { expected: 2, got: 1 })
        );
        assert!(family1_oracle(&p2).is_err());
    }

    #[test]
    fn oracle_spot_values() {
        let o = family1_oracle(&FamilyParams::Family1([q(1), q(0), q(0)])).unwrap();
        assert_eq!(o.r_value, Rational::ratio(1, 2));
        assert_eq!((o.rho12, o.tau, o.k), (q(1), q(3), Rational::ratio(-1, 2)));
        let o = family1_oracle(&FamilyParams::Family1([q(1), q(1), q(1)])).unwrap();
        assert_eq!(o.r_value, Rational::ratio(5, 2));
        let zero = family1_oracle(&FamilyParams::Family1([q(0), q(0), q(0)])).unwrap();
        assert!(zero.r_value.is_zero() && zero.tau.is_zero() && zero.k.is_zero());

        let o = family2_oracle(&FamilyParams::Family2([q(1), q(0)])).unwrap();
        assert_eq!((o.tau.clone(), o.k.clone(), o.rho11.clone()), (q(12), q(2), q(-4)));
        let o2 = family2_oracle(&FamilyParams::Family2([q(1), q(-1)])).unwrap();
        assert_eq!(o, o2);
    }
}
