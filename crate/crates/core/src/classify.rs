//! Class membership, Einstein-type decompositions and the curvature identities
//! that hold for circulant metrics and their associated metrics.
//!
//! The classes are nested, `L0 ⊂ L1 ⊂ L2`:
//!
//! * `L0`: `∇Q = 0`;
//! * `L1`: `R(x, y, Qz, Qu) = R(x, y, z, u)`;
//! * `L2`: `R(Qx, Qy, Qz, Qu) = R(x, y, z, u)`.
//!
//! Each predicate returns a [`Check`], whose verdict is `Holds` when the class
//! condition is satisfied.

use std::collections::BTreeMap;

use crate::error::GeometryError;
use crate::jet::{christoffel, nabla_q, CirculantJet, CurvatureBundle, MetricJet2};
use crate::sample;
use crate::scalar::{max_abs, Scalar};
use crate::tensor::{apply_q, Rank4Tensor3, SymMatrix3, DIM};
use crate::tolerance::{Check, Tolerance, Verdict};

/// Sample count of the quantified predicates when none is given.
pub const DEFAULT_SAMPLES: usize = 64;

/// Which metric of the pair a computation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// The positive definite circulant metric `g`.
    Base,
    /// The associated metric `g~`.
    Associated,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Base => "base",
            Side::Associated => "associated",
        }
    }
}

fn spread<S: Scalar>(values: &[S]) -> S {
    let mut worst = S::zero();
    for a in values {
        for b in values {
            worst = S::max_of(worst, (a.clone() - b.clone()).abs());
        }
    }
    worst
}

/// `R_1212 = R_1313 = R_2323` and `R_1213 = R_1323 = −R_1223`.
pub fn is_l2_components<S: Scalar>(r: &Rank4Tensor3<S>, tol: &Tolerance) -> Check<S> {
    let diag = [
        r.at1(1, 2, 1, 2).clone(),
        r.at1(1, 3, 1, 3).clone(),
        r.at1(2, 3, 2, 3).clone(),
    ];
    let off = [
        r.at1(1, 2, 1, 3).clone(),
        r.at1(1, 3, 2, 3).clone(),
        -r.at1(1, 2, 2, 3).clone(),
    ];
    let residual = S::max_of(spread(&diag), spread(&off));
    tol.judge(&residual, &r.max_abs())
}

/// `R_1212 = R_1313 = R_2323 = −R_1213 = −R_1323 = R_1223`.
pub fn is_l1_components<S: Scalar>(r: &Rank4Tensor3<S>, tol: &Tolerance) -> Check<S> {
    let all = [
        r.at1(1, 2, 1, 2).clone(),
        r.at1(1, 3, 1, 3).clone(),
        r.at1(2, 3, 2, 3).clone(),
        -r.at1(1, 2, 1, 3).clone(),
        -r.at1(1, 3, 2, 3).clone(),
        r.at1(1, 2, 2, 3).clone(),
    ];
    tol.judge(&spread(&all), &r.max_abs())
}

fn quantified<S: Scalar>(r: &Rank4Tensor3<S>, samples: usize, seed: u64, tol: &Tolerance, all_slots: bool) -> Check<S> {
    let mut rng = sample::rng(seed);
    let mut residual = S::zero();
    let mut scale = S::zero();
    for _ in 0..samples {
        let [x, y, z, u] = [0; 4].map(|_| sample::int_vector::<S, _>(&mut rng, -3, 3));
        let lhs = if all_slots {
            r.eval(&apply_q(&x), &apply_q(&y), &apply_q(&z), &apply_q(&u))
        } else {
            r.eval(&x, &y, &apply_q(&z), &apply_q(&u))
        };
        let rhs = r.eval(&x, &y, &z, &u);
        residual = S::max_of(residual, (lhs.clone() - rhs.clone()).abs());
        scale = S::max_of(scale, S::max_of(lhs.abs(), rhs.abs()));
    }
    // the tensor itself sets the scale when the sampled values are tiny
    tol.judge(&residual, &S::max_of(scale, r.max_abs()))
}

/// Evaluates `R(x, y, Qz, Qu) = R(x, y, z, u)` on `samples` random tuples.
pub fn is_l1_quantified<S: Scalar>(r: &Rank4Tensor3<S>, samples: usize, seed: u64, tol: &Tolerance) -> Check<S> {
    quantified(r, samples, seed, tol, false)
}

/// Evaluates `R(Qx, Qy, Qz, Qu) = R(x, y, z, u)` on `samples` random tuples.
pub fn is_l2_quantified<S: Scalar>(r: &Rank4Tensor3<S>, samples: usize, seed: u64, tol: &Tolerance) -> Check<S> {
    quantified(r, samples, seed, tol, true)
}

/// `M` with `grad A = grad B · M` for metrics in `L0`.
pub const L0_MATRIX: [[i64; 3]; 3] = [[-1, 1, 1], [1, -1, 1], [1, 1, -1]];

fn l0_image<S: Scalar>(db: &[S; 3]) -> [S; 3] {
    std::array::from_fn(|i| (0..DIM).fold(S::zero(), |acc, k| acc + db[k].clone() * S::from_i64(L0_MATRIX[k][i])))
}

/// `A_1 = −B_1 + B_2 + B_3`, `A_2 = B_1 − B_2 + B_3`, `A_3 = B_1 + B_2 − B_3`.
pub fn is_l0_gradient<S: Scalar>(cj: &CirculantJet<S>, tol: &Tolerance) -> Check<S> {
    let want = l0_image(&cj.db);
    let residual = max_abs(
        cj.da
            .iter()
            .zip(&want)
            .map(|(a, w)| a.clone() - w.clone())
            .collect::<Vec<_>>()
            .iter(),
    );
    let scale = S::max_of(max_abs(&cj.da), max_abs(&cj.db));
    tol.judge(&residual, &scale)
}

/// `max |(∇_i Q)^k_j|` for the Levi-Civita connection of `mj`.
pub fn is_l0_nabla<S: Scalar>(mj: &MetricJet2<S>, tol: &Tolerance) -> Check<S> {
    let residual = nabla_q(mj).max_abs();
    tol.judge(&residual, &christoffel(mj).max_abs())
}

/// Builds a jet in `L0`: `grad A` from the first-order condition and
/// `∂²A = M ∂²B`, with two diagonal entries of `∂²B` solved so that
/// `∂²A` is symmetric.
///
/// Symmetry of `M H` for symmetric `H` holds exactly when all row sums of `H`
/// agree, so `d2b[1][1]` and `d2b[2][2]` are overwritten to match the first
/// row sum; the other entries of `d2b` are kept.
pub fn construct_l0_jet<S: Scalar>(a: S, b: S, db: [S; 3], d2b: [[S; 3]; 3]) -> CirculantJet<S> {
    let mut h = d2b;
    // keep the input symmetric from its upper triangle
    for i in 0..DIM {
        for j in 0..i {
            h[i][j] = h[j][i].clone();
        }
    }
    let r = h[0][0].clone() + h[0][1].clone() + h[0][2].clone();
    h[1][1] = r.clone() - h[0][1].clone() - h[1][2].clone();
    h[2][2] = r - h[0][2].clone() - h[1][2].clone();
    let d2a = std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..DIM).fold(S::zero(), |acc, k| acc + S::from_i64(L0_MATRIX[i][k]) * h[k][j].clone()))
    });
    CirculantJet {
        a,
        b,
        da: l0_image(&db),
        db,
        d2a,
        d2b: h,
    }
}

/// `ρ = α g + β g~` together with the reconstruction error.
#[derive(Debug, Clone, PartialEq)]
pub struct EinsteinDecomposition<S> {
    pub alpha: S,
    pub beta: S,
    pub residual: S,
}

/// `ρ_11 = ρ_22 = ρ_33` and `ρ_12 = ρ_13 = ρ_23`.
pub fn circulant_ricci_residual<S: Scalar>(rho: &SymMatrix3<S>) -> S {
    let diag = [rho.get(0, 0).clone(), rho.get(1, 1).clone(), rho.get(2, 2).clone()];
    let off = [rho.get(0, 1).clone(), rho.get(0, 2).clone(), rho.get(1, 2).clone()];
    S::max_of(spread(&diag), spread(&off))
}

/// Solves `ρ_11 = αA + 2βB`, `ρ_12 = αB + β(A + B)` for `g = circulant(A, B)`.
///
/// The system has determinant `(A − B)(A + 2B)`, which is positive for
/// `A > B > 0`. A Ricci tensor that is not circulant has no such
/// decomposition and is rejected.
pub fn einstein_decompose<S: Scalar>(
    rho: &SymMatrix3<S>,
    g: &SymMatrix3<S>,
    gt: &SymMatrix3<S>,
    tol: &Tolerance,
) -> Result<EinsteinDecomposition<S>, GeometryError> {
    let circ = circulant_ricci_residual(rho);
    if !tol.judge(&circ, &rho.max_abs()).holds() {
        return Err(GeometryError::NotCirculantRicci {
            residual: circ.to_f64(),
        });
    }
    let (a, b) = (g.get(0, 0).clone(), g.get(0, 1).clone());
    let two = S::from_i64(2);
    let det = (a.clone() - b.clone()) * (a.clone() + two.clone() * b.clone());
    if det.is_zero() {
        return Err(GeometryError::SingularMatrix {
            det: 0.0,
            threshold: 0.0,
        });
    }
    let (r11, r12) = (rho.get(0, 0).clone(), rho.get(0, 1).clone());
    let alpha = (r11.clone() * (a.clone() + b.clone()) - two * b.clone() * r12.clone()) / det.clone();
    let beta = (a * r12 - b * r11) / det;
    let fit = &g.scale(&alpha) + &gt.scale(&beta);
    let residual = (rho - &fit).max_abs();
    Ok(EinsteinDecomposition { alpha, beta, residual })
}

/// Einstein means `ρ` is a multiple of the metric of its own side: `β = 0`
/// for the base metric, `α = 0` for the associated one.
pub fn is_einstein<S: Scalar>(
    dec: &EinsteinDecomposition<S>,
    bundle: &CurvatureBundle<S>,
    side: Side,
    tol: &Tolerance,
) -> Check<S> {
    let off = match side {
        Side::Base => &dec.beta,
        Side::Associated => &dec.alpha,
    };
    let scale = S::max_of(bundle.ricci.max_abs(), S::max_of(dec.alpha.abs(), dec.beta.abs()));
    tol.judge(off, &scale)
}

/// Residual of
/// `ρ~ = ρ + ⅓(τ~* − τ) g + ⅙(2τ~ − 2τ* + τ~* − τ) g~`.
pub fn check_con_ae<S: Scalar>(
    gside: &CurvatureBundle<S>,
    gtside: &CurvatureBundle<S>,
    g: &SymMatrix3<S>,
    gt: &SymMatrix3<S>,
    tol: &Tolerance,
) -> Check<S> {
    let (tau, tau_s) = (gside.tau.clone(), gside.tau_star.clone());
    let (taut, taut_s) = (gtside.tau.clone(), gtside.tau_star.clone());
    let c1 = (taut_s.clone() - tau.clone()) / S::from_i64(3);
    let two = S::from_i64(2);
    let c2 = (two.clone() * taut.clone() - two * tau_s.clone() + taut_s.clone() - tau.clone()) / S::from_i64(6);
    let rhs = &(&gside.ricci + &g.scale(&c1)) + &gt.scale(&c2);
    let residual = (&gtside.ricci - &rhs).max_abs();
    let scalars = max_abs([&tau, &tau_s, &taut, &taut_s]);
    let metric_scale = S::max_of(S::one(), S::max_of(g.max_abs(), gt.max_abs()));
    let scale = S::max_of(
        S::max_of(gside.ricci.max_abs(), gtside.ricci.max_abs()),
        scalars * metric_scale,
    );
    tol.judge(&residual, &scale)
}

/// Dimension-3 curvature from Ricci tensor, scalar curvature and metric:
/// `R_ijkl = −g_ik ρ_jl − g_jl ρ_ik + g_jk ρ_il + g_il ρ_jk + (τ/2)(g_ik g_jl − g_jk g_il)`.
pub fn reconstruct_r<S: Scalar>(rho: &SymMatrix3<S>, tau: &S, g: &SymMatrix3<S>) -> Rank4Tensor3<S> {
    let half_tau = S::half() * tau.clone();
    Rank4Tensor3::from_fn(|i, j, k, l| {
        let gg = |a: usize, b: usize| g.get(a, b).clone();
        let rr = |a: usize, b: usize| rho.get(a, b).clone();
        -gg(i, k) * rr(j, l) - gg(j, l) * rr(i, k)
            + gg(j, k) * rr(i, l)
            + gg(i, l) * rr(j, k)
            + half_tau.clone() * (gg(i, k) * gg(j, l) - gg(j, k) * gg(i, l))
    })
}

/// `(π~1, π~2)` with
/// `π~1(x,y,z,u) = g~(y,z) g~(x,u) − g~(x,z) g~(y,u)` and
/// `π~2(x,y,z,u) = g(y,z) g~(x,u) + g(x,u) g~(y,z) − g(x,z) g~(y,u) − g(y,u) g~(x,z)`.
pub fn kulkarni_terms<S: Scalar>(g: &SymMatrix3<S>, gt: &SymMatrix3<S>) -> (Rank4Tensor3<S>, Rank4Tensor3<S>) {
    let a = |i: usize, j: usize| g.get(i, j).clone();
    let t = |i: usize, j: usize| gt.get(i, j).clone();
    let pi1 = Rank4Tensor3::from_fn(|x, y, z, u| t(y, z) * t(x, u) - t(x, z) * t(y, u));
    let pi2 = Rank4Tensor3::from_fn(|x, y, z, u| {
        a(y, z) * t(x, u) + a(x, u) * t(y, z) - a(x, z) * t(y, u) - a(y, u) * t(x, z)
    });
    (pi1, pi2)
}

/// `(τ~*/3 + τ~/6) π~1 + (τ~*/3) π~2`, the curvature of an associated
/// manifold in `L2`.
pub fn l2_associated_curvature<S: Scalar>(
    tau_t: &S,
    tau_star_t: &S,
    g: &SymMatrix3<S>,
    gt: &SymMatrix3<S>,
) -> Rank4Tensor3<S> {
    let (pi1, pi2) = kulkarni_terms(g, gt);
    let third = tau_star_t.clone() / S::from_i64(3);
    let c1 = third.clone() + tau_t.clone() / S::from_i64(6);
    &pi1.scale(&c1) + &pi2.scale(&third)
}

/// Closed-form `(R~_1212, R~_1213)` of an associated manifold in `L2` with
/// `g = circulant(A, B)`.
pub fn l2_associated_components<S: Scalar>(tau_t: &S, tau_star_t: &S, a: &S, b: &S) -> (S, S) {
    let t3 = tau_star_t.clone() / S::from_i64(3);
    let t6 = tau_t.clone() / S::from_i64(6);
    let (a, b) = (a.clone(), b.clone());
    let two = S::from_i64(2);
    let three = S::from_i64(3);
    let r1212 = t3.clone() * (a.clone() * a.clone() - b.clone() * b.clone())
        + t6.clone() * (a.clone() * a.clone() + two * a.clone() * b.clone() - three * b.clone() * b.clone());
    let r1213 = t3 * (a.clone() * b.clone() - b.clone() * b.clone()) + t6 * (a.clone() * a - b.clone() * b);
    (r1212, r1213)
}

/// `τ~* = −τ~`, valid as an `L1` test once `R~` is known to be in `L2`.
pub fn check_l1_scalar_relation<S: Scalar>(
    bundle_gt: &CurvatureBundle<S>,
    tol: &Tolerance,
) -> Result<Check<S>, GeometryError> {
    let l2 = is_l2_components(&bundle_gt.riemann, tol);
    if !l2.holds() {
        return Err(GeometryError::NotInL2 {
            residual: l2.residual.to_f64(),
        });
    }
    let residual = bundle_gt.tau_star.clone() + bundle_gt.tau.clone();
    let scale = S::max_of(bundle_gt.tau.abs(), bundle_gt.tau_star.abs());
    Ok(tol.judge(&residual, &scale))
}

/// `det ρ~ = 0`.
pub fn check_l1_ricci_degenerate<S: Scalar>(rho_gt: &SymMatrix3<S>, tol: &Tolerance) -> Check<S> {
    let m = rho_gt.max_abs();
    tol.judge(&rho_gt.det(), &(m.clone() * m.clone() * m))
}

/// `ρ~_11 = (τ~/3)(B − A)` and `ρ~_12 = (τ~/6)(A − B)` on a circulant Ricci
/// tensor of an `L1` associated manifold.
pub fn check_l1_ricci_pattern<S: Scalar>(
    rho_gt: &SymMatrix3<S>,
    tau_t: &S,
    g: &SymMatrix3<S>,
    tol: &Tolerance,
) -> Check<S> {
    let d = g.get(0, 0).clone() - g.get(0, 1).clone();
    let want11 = -tau_t.clone() / S::from_i64(3) * d.clone();
    let want12 = tau_t.clone() / S::from_i64(6) * d;
    let residual = S::max_of(
        circulant_ricci_residual(rho_gt),
        S::max_of(
            (rho_gt.get(0, 0).clone() - want11).abs(),
            (rho_gt.get(0, 1).clone() - want12).abs(),
        ),
    );
    tol.judge(&residual, &rho_gt.max_abs())
}

/// Class verdicts for one metric of the pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassReport<S> {
    pub side: Side,
    pub l0: Check<S>,
    pub l1: Check<S>,
    pub l2: Check<S>,
    /// `None` when the Ricci tensor is not circulant.
    pub einstein: Option<EinsteinDecomposition<S>>,
    pub einstein_verdict: Option<Check<S>>,
    /// Secondary checks keyed by name.
    pub residuals: BTreeMap<String, Check<S>>,
}

impl<S: Scalar> ClassReport<S> {
    /// Runs every predicate on `bundle`, which is the curvature of `metric`;
    /// `other` is the complementary metric. `l0` is supplied by the caller
    /// since it needs the connection rather than the curvature.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        side: Side,
        l0: Check<S>,
        bundle: &CurvatureBundle<S>,
        metric: &SymMatrix3<S>,
        other: &SymMatrix3<S>,
        samples: usize,
        seed: u64,
        tol: &Tolerance,
    ) -> Self {
        let r = &bundle.riemann;
        let l1 = is_l1_components(r, tol);
        let l2 = is_l2_components(r, tol);
        let mut residuals = BTreeMap::new();
        residuals.insert("l1-quantified".to_string(), is_l1_quantified(r, samples, seed, tol));
        residuals.insert("l2-quantified".to_string(), is_l2_quantified(r, samples, seed, tol));
        residuals.insert(
            "circulant-ricci".to_string(),
            tol.judge(&circulant_ricci_residual(&bundle.ricci), &bundle.ricci.max_abs()),
        );
        let (g, gt) = match side {
            Side::Base => (metric, other),
            Side::Associated => (other, metric),
        };
        let einstein = einstein_decompose(&bundle.ricci, g, gt, tol).ok();
        let einstein_verdict = einstein.as_ref().map(|dec| is_einstein(dec, bundle, side, tol));
        ClassReport {
            side,
            l0,
            l1,
            l2,
            einstein,
            einstein_verdict,
            residuals,
        }
    }

    pub fn decomposition_valid(&self) -> bool {
        self.einstein.is_some()
    }

    /// `L0 ⇒ L1 ⇒ L2` on the `Holds` verdicts.
    pub fn nesting_holds(&self) -> bool {
        (!self.l0.holds() || self.l1.holds()) && (!self.l1.holds() || self.l2.holds())
    }

    /// Component and sampled predicates reach the same verdict.
    pub fn predicates_agree(&self) -> bool {
        let same = |a: &Check<S>, key: &str| {
            self.residuals
                .get(key)
                .is_none_or(|b| (a.verdict == Verdict::Holds) == (b.verdict == Verdict::Holds))
        };
        same(&self.l1, "l1-quantified") && same(&self.l2, "l2-quantified")
    }
}
