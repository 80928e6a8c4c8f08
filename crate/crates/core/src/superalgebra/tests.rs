use super::*;
use crate::scalar::Backend;

fn q(n: i64) -> Scalar {
    Scalar::from_i64(Backend::Rational, n)
}

fn m2() -> StandardAlgebra {
    build_standard_algebra(&StandardKind::Matrix(2), Backend::Rational).unwrap()
}

fn e(alg: &BasedSuperAlgebra, label: &str) -> Element {
    alg.basis_element(alg.id_of(label).unwrap()).unwrap()
}

#[test]
fn matrix_units_multiply() {
    let a = m2().algebra;
    assert_eq!(a.mul(&e(&a, "E11"), &e(&a, "E12")).unwrap(), e(&a, "E12"));
    assert!(a.mul(&e(&a, "E12"), &e(&a, "E11")).unwrap().is_zero());
    let x = &e(&a, "E21") + &e(&a, "E12").scale(&q(3));
    assert_eq!(a.mul(&x, &a.unit()).unwrap(), x);
}

#[test]
fn torus_commutation_relation() {
    let t = build_standard_algebra(&StandardKind::QuantumTorus(0.3), Backend::Approx).unwrap();
    let (u, v) = (t.element("U").unwrap(), t.element("V").unwrap());
    let uv = t.algebra.mul(u, v).unwrap();
    let vu = t.algebra.mul(v, u).unwrap();
    let lambda = Scalar::Approx(num_complex::Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * 0.3));
    assert!(uv.distance(&vu.scale(&lambda)) < 1e-14);
    assert_eq!(uv.support().collect::<Vec<_>>(), vec![BasisId::Z2(1, 1)]);
}

#[test]
fn super_commutator_examples() {
    let a = m2().algebra;
    assert_eq!(a.super_commutator(&e(&a, "E11"), &e(&a, "E12")).unwrap(), e(&a, "E12"));
    let g = build_standard_algebra(&StandardKind::GradedEndomorphisms(1, 1), Backend::Rational).unwrap().algebra;
    let odd = &e(&g, "E12") + &e(&g, "E21").scale(&q(5));
    let sq = g.mul(&odd, &odd).unwrap();
    assert_eq!(g.super_commutator(&odd, &odd).unwrap(), sq.scale(&q(2)));
    assert!(g.super_commutator(&g.unit(), &odd).unwrap().is_zero());
}

#[test]
fn derivation_examples() {
    let a = m2().algebra;
    let ad = SuperDerivation::inner("ad", &a, e(&a, "E11")).unwrap();
    assert_eq!(ad.apply(&a, &e(&a, "E21")).unwrap(), -&e(&a, "E21"));
    assert!(ad.apply(&a, &a.unit()).unwrap().is_zero());

    let t = build_standard_algebra(&StandardKind::QuantumTorus(0.3), Backend::Approx).unwrap();
    let x = t.derivation("X").unwrap();
    assert_eq!(x.two_pi, 1);
    let img = x.apply(&t.algebra, t.element("U").unwrap()).unwrap();
    assert_eq!(img, Element::monomial(BasisId::Z2(1, 0), Scalar::approx(0.0, 1.0)));
    assert!(x.apply(&t.algebra, &t.algebra.unit()).unwrap().is_zero());
}

#[test]
fn leibniz_examples() {
    let a = m2().algebra;
    let z = &e(&a, "E12") + &e(&a, "E22").scale(&q(-2));
    let ad = SuperDerivation::inner("ad", &a, z).unwrap();
    let basis: Vec<Element> = a.basis().unwrap().into_iter().map(|b| Element::basis(a.backend(), b)).collect();
    let pairs: Vec<_> = basis.iter().flat_map(|x| basis.iter().map(move |y| (x.clone(), y.clone()))).collect();
    assert_eq!(check_leibniz(&a, &ad, &pairs).unwrap(), 0.0);

    let t = build_standard_algebra(&StandardKind::QuantumTorus(0.3), Backend::Approx).unwrap();
    let (u, v) = (t.element("U").unwrap().clone(), t.element("V").unwrap().clone());
    let samples = vec![(u.clone(), v.clone()), (v.clone(), u.clone())];
    for name in ["X", "Y"] {
        assert!(check_leibniz(&t.algebra, t.derivation(name).unwrap(), &samples).unwrap() < 1e-12);
    }
    let bad = SuperDerivation::table(
        "bad",
        Parity::Even,
        BTreeMap::from([(BasisId::Z2(1, 0), Element::basis(Backend::Approx, BasisId::Z2(2, 0)))]),
    );
    assert!(check_leibniz(&t.algebra, &bad, &[(u.clone(), u)]).unwrap() > 0.5);
}

#[test]
fn odd_derivation_leibniz() {
    let g = build_standard_algebra(&StandardKind::GradedEndomorphisms(2, 1), Backend::Rational).unwrap().algebra;
    let z = &e(&g, "E13") + &e(&g, "E32").scale(&q(3));
    let d = SuperDerivation::inner("d", &g, z).unwrap();
    assert_eq!(d.parity, Parity::Odd);
    let basis: Vec<Element> = g.basis().unwrap().into_iter().map(|b| Element::basis(g.backend(), b)).collect();
    let pairs: Vec<_> = basis.iter().flat_map(|x| basis.iter().map(move |y| (x.clone(), y.clone()))).collect();
    assert_eq!(check_leibniz(&g, &d, &pairs).unwrap(), 0.0);
}

#[test]
fn ideal_power_examples() {
    let p = build_standard_algebra(&StandardKind::TruncatedPolynomial(3), Backend::Rational).unwrap();
    let a = &p.algebra;
    let x = p.element("x").unwrap().clone();
    let j2 = ideal_power_basis(a, std::slice::from_ref(&x), 2).unwrap();
    assert_eq!(j2.dim(), Some(1));
    assert!(j2.contains(a, &e(a, "x^2")).unwrap());
    assert!(!j2.contains(a, &x).unwrap());
    let j3 = ideal_power_basis(a, &[x], 3).unwrap();
    assert_eq!(j3.dim(), Some(0));

    let whole = ideal_power_basis(a, &[a.unit()], 4).unwrap();
    assert!(whole.is_whole());

    let m = m2().algebra;
    let j = ideal_power_basis(&m, &[e(&m, "E12")], 1).unwrap();
    assert!(j.is_whole());
}

#[test]
fn ideal_power_rejects_bad_input() {
    let m = m2().algebra;
    assert!(ideal_power_basis(&m, &[e(&m, "E12")], 0).is_err());
    let c = build_standard_algebra(&StandardKind::CircleLaurent, Backend::Gaussian).unwrap();
    assert!(ideal_power_basis(&c.algebra, &[c.algebra.unit()], 2).unwrap().is_whole());
    let two_terms = &c.algebra.unit() + c.element("z").unwrap();
    assert!(matches!(ideal_power_basis(&c.algebra, &[two_terms], 1), Err(AlgebraError::NotFinite(_))));
}

#[test]
fn partial_trace_examples() {
    let m = m2();
    let jp = IdealPower::whole_finite(&m.algebra, 1).unwrap();
    let traces = partial_trace_space(&m.algebra, &jp).unwrap();
    assert_eq!(traces.len(), 1);
    // Proportional to the matrix trace.
    let t = &traces[0];
    let ratio = t.eval(&e(&m.algebra, "E11"));
    assert!(!ratio.is_zero());
    assert_eq!(t.eval(&e(&m.algebra, "E22")), ratio);
    assert!(t.eval(&e(&m.algebra, "E12")).is_zero());

    let p = build_standard_algebra(&StandardKind::TruncatedPolynomial(3), Backend::Rational).unwrap();
    let j2 = ideal_power_basis(&p.algebra, &[p.element("x").unwrap().clone()], 2).unwrap();
    assert_eq!(partial_trace_space(&p.algebra, &j2).unwrap().len(), 1);

    let g = build_standard_algebra(&StandardKind::GradedEndomorphisms(1, 1), Backend::Rational).unwrap();
    let jp = IdealPower::whole_finite(&g.algebra, 1).unwrap();
    let space = partial_trace_space(&g.algebra, &jp).unwrap();
    assert_eq!(space.len(), 1);
    let str_ = g.trace("str").unwrap();
    assert_eq!(str_.commutator_residual(&g.algebra, &jp).unwrap(), 0.0);
    let k = space[0].eval(&e(&g.algebra, "E11"));
    for id in g.algebra.basis().unwrap() {
        let b = Element::basis(Backend::Rational, id);
        assert_eq!(space[0].eval(&b), &str_.eval(&b) * &k);
    }
    for t in space {
        assert_eq!(t.commutator_residual(&g.algebra, &jp).unwrap(), 0.0);
    }
}

#[test]
fn standard_equipment() {
    let t = build_standard_algebra(&StandardKind::QuantumTorus(0.3), Backend::Approx).unwrap();
    let tau = t.trace("tau").unwrap();
    assert!(tau.eval(&t.algebra.unit()).is_one());
    assert!(tau.eval(t.element("U").unwrap()).is_zero());
    let g = build_standard_algebra(&StandardKind::GradedEndomorphisms(1, 1), Backend::Rational).unwrap();
    assert!(g.trace("str").unwrap().eval(&g.algebra.unit()).is_zero());
    let f = g.element("F").unwrap();
    assert_eq!(g.algebra.mul(f, f).unwrap(), g.algebra.unit());
    assert_eq!(g.algebra.element_parity(f).unwrap(), Some(Parity::Odd));

    assert!(build_standard_algebra(&StandardKind::QuantumTorus(1.0), Backend::Approx).is_err());
    assert!(build_standard_algebra(&StandardKind::Matrix(0), Backend::Rational).is_err());
    assert!(build_standard_algebra(&StandardKind::TruncatedPolynomial(0), Backend::Rational).is_err());
    assert!(build_standard_algebra(&StandardKind::CircleLaurent, Backend::Rational).is_err());
}

#[test]
fn construction_rejects_broken_tables() {
    let b = Backend::Rational;
    let one = Element::basis(b, BasisId::Idx(0));
    // Parity violation: odd · odd lands in an odd element.
    let err = BasedSuperAlgebra::finite("bad", b, vec!["1".into(), "o".into()], vec![Parity::Even, Parity::Odd], one.clone(), |i, j| match (i, j) {
        (0, k) | (k, 0) => Element::basis(b, BasisId::Idx(k)),
        _ => Element::basis(b, BasisId::Idx(1)),
    });
    assert!(matches!(err, Err(AlgebraError::Axiom { axiom: "parity additivity", .. })));
    // Unit that is not a unit.
    let err = BasedSuperAlgebra::finite("bad", b, vec!["1".into(), "x".into()], vec![Parity::Even; 2], one.clone(), |_, _| Element::zero(b));
    assert!(matches!(err, Err(AlgebraError::Axiom { axiom: "unit law", .. })));
}

#[test]
fn torus_derivations_commute() {
    let t = build_standard_algebra(&StandardKind::QuantumTorus(0.37), Backend::Approx).unwrap();
    let (x, y) = (t.derivation("X").unwrap(), t.derivation("Y").unwrap());
    let a = Element::from_terms(
        Backend::Approx,
        [(BasisId::Z2(2, -1), Scalar::approx(0.5, 1.0)), (BasisId::Z2(-3, 4), Scalar::approx(-2.0, 0.25))],
    )
    .unwrap();
    let xy = x.apply(&t.algebra, &y.apply(&t.algebra, &a).unwrap()).unwrap();
    let yx = y.apply(&t.algebra, &x.apply(&t.algebra, &a).unwrap()).unwrap();
    assert!(xy.distance(&yx) < 1e-14);
}

#[test]
fn subalgebra_of_an_idempotent() {
    let g = build_standard_algebra(&StandardKind::GradedEndomorphisms(1, 1), Backend::Rational).unwrap();
    let idem = e(&g.algebra, "E11");
    let sub = generated_subalgebra(&g.algebra, std::slice::from_ref(&idem)).unwrap();
    assert_eq!(sub.dim(), 2);
    let r = sub.restrict(&g.algebra, &idem).unwrap().unwrap();
    assert_eq!(sub.algebra.mul(&r, &r).unwrap(), r);
    assert_eq!(sub.include(&g.algebra, &r), idem);
    assert!(sub.restrict(&g.algebra, &e(&g.algebra, "E12")).unwrap().is_none());
}

#[test]
fn dense_roundtrip_and_star() {
    let a = m2().algebra;
    let x = &e(&a, "E21") + &e(&a, "E11").scale(&q(-4));
    assert_eq!(a.from_dense(&a.to_dense(&x).unwrap()).unwrap(), x);
    let t = BasedSuperAlgebra::quantum_torus(0.3).unwrap();
    let u = Element::basis(Backend::Approx, BasisId::Z2(1, 1));
    let s = t.star(&u).unwrap();
    assert!(t.mul(&u, &s).unwrap().distance(&t.unit()) < 1e-14);
}
