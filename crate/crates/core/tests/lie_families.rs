use circulant_geometry::classify::{
    check_con_ae, check_l1_ricci_degenerate, check_l1_ricci_pattern, check_l1_scalar_relation, einstein_decompose,
    is_einstein, is_l1_components, is_l1_quantified, is_l2_components, is_l2_quantified, l2_associated_curvature,
    reconstruct_r, Side,
};
use circulant_geometry::lie::{
    family1, family1_oracle, family2, family2_oracle, metric_residual, nabla_q_invariant, torsion_residual,
    FamilyParams, LieInstance,
};
use circulant_geometry::qgeom::{
    degenerate_numerator_closed_form, degenerate_plane_numerator, q_basis_data, q_plane_curvature_closed_form,
    sectional_curvature,
};
use circulant_geometry::sample;
use circulant_geometry::{Rational, Scalar, Tolerance, Vector3};
use num::Zero;

fn q(n: i64) -> Rational {
    <Rational as Scalar>::from_i64(n)
}

fn exact() -> Tolerance {
    Tolerance::default()
}

#[test]
fn family1_matches_oracle_on_random_parameters() {
    let mut rng = sample::rng(101);
    for _ in 0..25 {
        let l: [Rational; 3] = std::array::from_fn(|_| sample::scalar(&mut rng, -3, 3));
        let params = FamilyParams::Family1(l.clone());
        let inst = LieInstance::new(params.algebra()).unwrap();
        let oracle = family1_oracle(&params).unwrap();
        let b = &inst.associated;
        assert_eq!(b.riemann, oracle.riemann());
        assert_eq!(b.ricci, oracle.ricci());
        assert_eq!(b.tau, oracle.tau);
        assert!(b.tau_star.is_zero());
        let e = |i| Vector3::<Rational>::basis(i);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let k = sectional_curvature(&b.riemann, &inst.metrics.associated, &e(i), &e(j), &exact());
            assert_eq!(k.unwrap(), oracle.k);
        }
    }
}

#[test]
fn family2_matches_oracle_on_random_parameters() {
    let mut rng = sample::rng(202);
    for _ in 0..25 {
        let l: [Rational; 2] = std::array::from_fn(|_| sample::scalar(&mut rng, -3, 3));
        let params = FamilyParams::Family2(l.clone());
        let inst = LieInstance::new(params.algebra()).unwrap();
        let oracle = family2_oracle(&params).unwrap();
        let b = &inst.associated;
        assert!(nabla_q_invariant(&inst.associated_connection).is_zero());
        assert!(nabla_q_invariant(&inst.base_connection).is_zero());
        assert_eq!(inst.base_connection, inst.associated_connection);
        assert_eq!(b.riemann, oracle.riemann());
        assert_eq!(b.ricci, oracle.ricci());
        assert_eq!(
            (b.tau.clone(), b.tau_star.clone()),
            (oracle.tau.clone(), oracle.tau_star.clone())
        );
        let k = sectional_curvature(
            &b.riemann,
            &inst.metrics.associated,
            &Vector3::basis(0),
            &Vector3::basis(1),
            &exact(),
        );
        assert_eq!(k.unwrap(), oracle.k);
    }
}

#[test]
fn base_metric_tables() {
    // g side of family 1: R_1212 = R_1313 = R_2323 = Σλ², the rest vanish
    let inst = LieInstance::new(family1(q(1), q(2), q(-1))).unwrap();
    let s = q(6);
    let comps = inst.base.riemann.independent_components();
    let values: Vec<Rational> = comps.iter().map(|c| c.1.clone()).collect();
    assert_eq!(values, vec![s.clone(), s.clone(), s.clone(), q(0), q(0), q(0)]);
    assert_eq!(inst.base.tau, q(-36));
    assert_eq!(inst.base.tau_star, q(18));

    let inst = LieInstance::new(family2(q(1), q(1))).unwrap();
    assert_eq!(*inst.base.riemann.at1(1, 2, 1, 2), q(6));
    assert_eq!(inst.base.tau, q(-36));
    assert_eq!(inst.base.tau_star, q(36));
}

#[test]
fn koszul_connections_are_levi_civita() {
    for inst in [
        LieInstance::new(family1(q(2), q(-1), q(3))).unwrap(),
        LieInstance::new(family2(q(-2), q(5))).unwrap(),
    ] {
        assert!(torsion_residual(&inst.base_connection, &inst.algebra).is_zero());
        assert!(torsion_residual(&inst.associated_connection, &inst.algebra).is_zero());
        assert!(metric_residual(&inst.base_connection, &inst.metrics.base).is_zero());
        assert!(metric_residual(&inst.associated_connection, &inst.metrics.associated).is_zero());
        assert!(inst.base.riemann.symmetry_residual().is_zero());
        assert!(inst.associated.riemann.symmetry_residual().is_zero());
    }
}

#[test]
fn class_verdicts() {
    let tol = exact();
    let f1 = LieInstance::new(family1(q(1), q(0), q(0))).unwrap();
    let r1 = &f1.associated.riemann;
    assert!(is_l2_components(r1, &tol).holds());
    assert!(is_l2_quantified(r1, 100, 7, &tol).holds());
    assert!(is_l1_components(r1, &tol).fails());
    assert!(is_l1_quantified(r1, 100, 7, &tol).fails());
    assert!(nabla_q_invariant(&f1.associated_connection) > q(0));

    let f2 = LieInstance::new(family2(q(1), q(0))).unwrap();
    let r2 = &f2.associated.riemann;
    assert!(is_l1_components(r2, &tol).holds());
    assert!(is_l1_quantified(r2, 100, 7, &tol).holds());
    assert!(is_l2_components(r2, &tol).holds());
}

#[test]
fn einstein_and_l1_theorems() {
    let tol = exact();
    let m = circulant_geometry::lie::LieMetrics::<Rational>::standard();

    let f1 = LieInstance::new(family1(q(1), q(0), q(0))).unwrap();
    let dec = einstein_decompose(&f1.associated.ricci, &m.base, &m.associated, &tol).unwrap();
    assert!(dec.alpha.is_zero());
    assert_eq!(dec.beta, f1.associated.tau.clone() / q(3));
    assert!(is_einstein(&dec, &f1.associated, Side::Associated, &tol).holds());
    assert!(!check_l1_scalar_relation(&f1.associated, &tol).unwrap().holds());

    let f2 = LieInstance::new(family2(q(1), q(0))).unwrap();
    let dec = einstein_decompose(&f2.associated.ricci, &m.base, &m.associated, &tol).unwrap();
    assert!(is_einstein(&dec, &f2.associated, Side::Associated, &tol).fails());
    assert!(check_l1_scalar_relation(&f2.associated, &tol).unwrap().holds());
    assert!(check_l1_ricci_degenerate(&f2.associated.ricci, &tol).holds());
    assert!(check_l1_ricci_pattern(&f2.associated.ricci, &f2.associated.tau, &m.base, &tol).holds());
    assert_eq!(*f2.associated.ricci.get(0, 0), q(-4));
}

#[test]
fn curvature_identities_hold_exactly_on_both_families() {
    let tol = exact();
    let m = circulant_geometry::lie::LieMetrics::<Rational>::standard();
    let mut rng = sample::rng(303);
    for n in 0..20 {
        let params = if n % 2 == 0 {
            FamilyParams::Family1(std::array::from_fn(|_| sample::scalar(&mut rng, -2, 2)))
        } else {
            FamilyParams::Family2(std::array::from_fn(|_| sample::scalar(&mut rng, -2, 2)))
        };
        let inst = LieInstance::new(params.algebra()).unwrap();
        assert!(check_con_ae(&inst.base, &inst.associated, &m.base, &m.associated, &tol).holds());
        for (b, metric) in [(&inst.base, &m.base), (&inst.associated, &m.associated)] {
            assert_eq!(reconstruct_r(&b.ricci, &b.tau, metric), b.riemann);
        }
        let a = &inst.associated;
        assert_eq!(
            l2_associated_curvature(&a.tau, &a.tau_star, &m.base, &m.associated),
            a.riemann
        );
    }
}

#[test]
fn q_plane_closed_form_on_families() {
    let tol = exact();
    let m = circulant_geometry::lie::LieMetrics::<Rational>::standard();
    let inst = LieInstance::new(family2(q(2), q(-1))).unwrap();
    let a = &inst.associated;
    let mut rng = sample::rng(404);
    for _ in 0..30 {
        let x: Vector3<Rational> = sample::vector(&mut rng, -2, 2);
        let Ok(qb) = q_basis_data(&x, &m.base, &tol) else {
            continue;
        };
        let Ok(closed) = q_plane_curvature_closed_form(&a.tau, &a.tau_star, &qb.cos_phi) else {
            continue;
        };
        for (u, v) in [(&qb.x, &qb.qx), (&qb.qx, &qb.q2x), (&qb.x, &qb.q2x)] {
            let k = sectional_curvature(&a.riemann, &m.associated, u, v, &tol).unwrap();
            assert_eq!(k, closed);
        }
    }
    // degenerate plane: R~(x, Qx, x, Qx) = (8τ~*/27) g(x,x)²
    let x = Vector3::new(q(1), q(1), q(-1));
    let qb = q_basis_data(&x, &m.base, &tol).unwrap();
    assert_eq!(
        degenerate_plane_numerator(&a.riemann, &qb).unwrap(),
        degenerate_numerator_closed_form(&a.tau_star, &qb.norm_g)
    );
    let f1 = LieInstance::new(family1(q(1), q(0), q(0))).unwrap();
    assert!(degenerate_plane_numerator(&f1.associated.riemann, &qb)
        .unwrap()
        .is_zero());
}
