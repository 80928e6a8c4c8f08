use super::*;
use crate::demos::contexts::{gl11, graded_odd, matrix_inner, truncated_polynomial, MatrixAction};
use crate::hochschild::{certify_tensor_in_ker_b, BVariant};
use crate::lie_rinehart::{lr_boundary, LGenerator};
use crate::sampling::{random_chain, rng};
use crate::superalgebra::{build_standard_algebra, StandardKind};

fn q(n: i64) -> Scalar {
    Scalar::from_i64(Backend::Rational, n)
}

fn contexts(p: usize) -> Vec<(&'static str, PairingContext)> {
    let mut out = vec![
        ("M2 gl2", matrix_inner(Backend::Rational, MatrixAction::Gl2, p).unwrap()),
        ("M2 sl2", matrix_inner(Backend::Rational, MatrixAction::Sl2, p).unwrap()),
        ("End(1|1) d", graded_odd(Backend::Rational, 1, p).unwrap()),
        ("gl(1|1)", gl11(Backend::Rational, p).unwrap()),
    ];
    if p <= 2 {
        out.push(("Q[x]/x^3", truncated_polynomial(p).unwrap()));
    }
    out
}

#[test]
fn hand_evaluated_matrix_pairing() {
    let m2 = build_standard_algebra(&StandardKind::Matrix(2), Backend::Rational).unwrap();
    let e11 = m2.algebra.basis_element(m2.algebra.id_of("E11").unwrap()).unwrap();
    let lr = SuperLieRinehart::inner(&m2.algebra, &[("X", e11)]).unwrap();
    let ctx = PairingContext::with_traces(m2.algebra.clone(), &[], 1, lr, vec![m2.trace("trace").unwrap().clone()]).unwrap();
    let tau = LRChain::monomial(ctx.lr(), 0, &[0]);
    let id = |l: &str| m2.algebra.id_of(l).unwrap();
    let c = HochschildChain::basis_tuple(Backend::Rational, vec![id("E12"), id("E21")]);
    assert_eq!(pair(&ctx, &tau, &c).unwrap().value, q(-1));
    let one = m2.algebra.unit();
    assert!(pair_tensor(&ctx, &tau, &[one.clone(), one]).unwrap().is_zero());
}

#[test]
fn admissible_contexts() {
    for p in 1..=2 {
        for (name, ctx) in contexts(p) {
            let r = ctx.check_admissible().unwrap();
            assert!(r.is_admissible(0.0), "{name}: {r:?}");
        }
    }
}

#[test]
fn degree_mismatch_is_rejected() {
    let ctx = matrix_inner(Backend::Rational, MatrixAction::Gl2, 1).unwrap();
    let tau = LRChain::monomial(ctx.lr(), 0, &[0]);
    let c = HochschildChain::basis_tuple(Backend::Rational, vec![BasisId::Idx(0)]);
    assert!(matches!(pair(&ctx, &tau, &c), Err(PairingError::Degree(_))));
}

#[test]
fn lemma_one_vanishes() {
    let mut r = rng(1);
    for p in 1..=2 {
        for (name, ctx) in contexts(p) {
            for _ in 0..15 {
                let tau = random_tau_chain(&ctx, &mut r, 3);
                let c = random_chain(ctx.source(), &mut r, p + 1, 3).unwrap();
                assert!(residual_lemma1(&ctx, &tau, &c).unwrap().is_zero(), "{name}, p = {p}");
            }
        }
    }
}

#[test]
fn lemma_two_holds_with_frozen_sign() {
    let mut r = rng(2);
    let mut nonzero = 0;
    for p in 1..=3 {
        for (name, ctx) in contexts(p) {
            for _ in 0..10 {
                let tau = random_tau_chain(&ctx, &mut r, 3);
                let c = random_chain(ctx.source(), &mut r, p, 3).unwrap();
                let (lhs, rhs) = lemma2_sides(&ctx, &tau, &c).unwrap();
                assert_eq!(lhs, rhs.scale(&q(ETA_2)), "{name}, p = {p}");
                if !lhs.is_zero() {
                    nonzero += 1;
                }
            }
        }
    }
    assert!(nonzero > 10, "the sign is only pinned by nonzero samples");
}

#[test]
fn stokes_holds_for_both_models_of_b() {
    let mut r = rng(3);
    let mut nonzero = 0;
    for variant in [BVariant::Full, BVariant::Normalized] {
        for p in 1..=3 {
            for (name, ctx) in contexts(p) {
                for _ in 0..10 {
                    let tau = random_tau_chain(&ctx, &mut r, 3);
                    let c = random_chain(ctx.source(), &mut r, p - 1, 3).unwrap();
                    let (lhs, rhs) = stokes_sides(&ctx, &tau, &c, variant).unwrap();
                    assert_eq!(lhs, rhs.scale(&q(ETA_3)), "{name}, p = {p}, {variant}");
                    if !lhs.is_zero() {
                        nonzero += 1;
                    }
                }
            }
        }
    }
    assert!(nonzero > 10);
}

#[test]
fn lazy_boundary_matches_module_boundary_when_j_is_everything() {
    let mut r = rng(4);
    for p in 1..=2 {
        for (name, ctx) in contexts(p).into_iter().filter(|(n, _)| !n.starts_with('Q')) {
            for _ in 0..10 {
                let tau = random_tau_chain(&ctx, &mut r, 3);
                let c = random_chain(ctx.source(), &mut r, p - 1, 3).unwrap();
                let bd = lr_boundary(ctx.lr(), ctx.module(), &tau).unwrap();
                let lazy = pair_boundary(&ctx, &tau, &c).unwrap();
                // The boundary lies in degree p − 1; pair it in a context of that degree.
                let lower = match name {
                    "M2 gl2" => matrix_inner(Backend::Rational, MatrixAction::Gl2, p - 1),
                    "M2 sl2" => matrix_inner(Backend::Rational, MatrixAction::Sl2, p - 1),
                    "End(1|1) d" => graded_odd(Backend::Rational, 1, p - 1),
                    _ => gl11(Backend::Rational, p - 1),
                }
                .unwrap();
                assert_eq!(pair(&lower, &bd, &c).unwrap(), lazy, "{name}");
            }
        }
    }
}

#[test]
fn pairing_is_bilinear() {
    let mut r = rng(5);
    for (name, ctx) in contexts(2) {
        let t1 = random_tau_chain(&ctx, &mut r, 2);
        let t2 = random_tau_chain(&ctx, &mut r, 2);
        let c1 = random_chain(ctx.source(), &mut r, 2, 2).unwrap();
        let c2 = random_chain(ctx.source(), &mut r, 2, 2).unwrap();
        let k = q(3);
        let mut lin = t1.scale(&k);
        lin.add_scaled(&t2, &q(1));
        let lhs = pair(&ctx, &lin, &c1).unwrap();
        let rhs = pair(&ctx, &t1, &c1).unwrap().scale(&k).add(&pair(&ctx, &t2, &c1).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "{name}");
        let sum = &c1.scale(&k) + &c2;
        let lhs = pair(&ctx, &t1, &sum).unwrap();
        let rhs = pair(&ctx, &t1, &c1).unwrap().scale(&k).add(&pair(&ctx, &t1, &c2).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "{name}");
    }
}

#[test]
fn tensor_and_chain_pairings_agree() {
    let ctx = graded_odd(Backend::Rational, 1, 2).unwrap();
    let b = ctx.target();
    let e = b.basis_element(b.id_of("E11").unwrap()).unwrap();
    let f = &b.basis_element(b.id_of("E12").unwrap()).unwrap() + &b.basis_element(b.id_of("E22").unwrap()).unwrap();
    let tau = LRChain::monomial(ctx.lr(), 0, &[0, 0]);
    let factors = [e.clone(), f.clone(), e.clone()];
    let c = HochschildChain::from_tensor(&factors).unwrap();
    assert_eq!(pair_tensor(&ctx, &tau, &factors).unwrap(), pair(&ctx, &tau, &c).unwrap());
}

#[test]
fn fredholm_model_pairing() {
    let ctx = graded_odd(Backend::Rational, 1, 2).unwrap();
    let b = ctx.target();
    let e = b.basis_element(b.id_of("E11").unwrap()).unwrap();
    let rep = certify_tensor_in_ker_b(b, &[e.clone(), e.clone(), e.clone()], BVariant::Full).unwrap();
    let cycle = LRChain::monomial(ctx.lr(), 0, &[0, 0]);
    let v = pair_classes(&ctx, &cycle, &rep).unwrap();
    // str(e [F,e] [F,e]) = −1, counted once per ordering of d ∧ d.
    assert_eq!(v.value, q(-2));
}

#[test]
fn negative_control_with_a_non_trace() {
    let m2 = build_standard_algebra(&StandardKind::Matrix(2), Backend::Rational).unwrap().algebra;
    let lr = SuperLieRinehart::lie_algebra(Backend::Rational, Vec::<LGenerator>::new(), &[]).unwrap();
    let not_trace = PartialTrace::new("E12*", BasisFunctional::from([(m2.id_of("E12").unwrap(), q(1))]));
    let ctx = PairingContext::with_traces(m2.clone(), &[], 0, lr, vec![not_trace]).unwrap();
    assert!(!ctx.check_admissible().unwrap().is_admissible(0.0));
    let tau = LRChain::monomial(ctx.lr(), 0, &[]);
    let id = |l: &str| m2.id_of(l).unwrap();
    let c = HochschildChain::basis_tuple(Backend::Rational, vec![id("E11"), id("E12")]);
    assert!(!residual_lemma1(&ctx, &tau, &c).unwrap().is_zero());
}

#[test]
fn escaping_products_are_errors() {
    let b = build_standard_algebra(&StandardKind::TruncatedPolynomial(3), Backend::Rational).unwrap().algebra;
    let x = |k: usize| Element::basis(Backend::Rational, BasisId::Idx(k));
    // d/dx does not map the algebra into J = (x).
    let dx = SuperDerivation::table("D", Parity::Even, BTreeMap::from([(BasisId::Idx(1), x(0)), (BasisId::Idx(2), x(1).scale(&q(2)))]));
    let lr = SuperLieRinehart::lie_algebra(Backend::Rational, vec![LGenerator::new("D", Parity::Even)], &[])
        .unwrap()
        .with_action(BTreeMap::from([("D".to_string(), dx)]))
        .unwrap();
    let traces = vec![
        PartialTrace::new("x*", BasisFunctional::from([(BasisId::Idx(1), q(1))])),
        PartialTrace::new("x^2*", BasisFunctional::from([(BasisId::Idx(2), q(1))])),
    ];
    let ctx = PairingContext::with_traces(b, &[x(1)], 1, lr, traces).unwrap();
    assert!(ctx.check_admissible().unwrap().derivations_into_j > 0.0);
    let tau = LRChain::monomial(ctx.lr(), 0, &[0]);
    assert!(matches!(pair_tensor(&ctx, &tau, &[x(0), x(1)]), Err(PairingError::Escapes(1))));
}
