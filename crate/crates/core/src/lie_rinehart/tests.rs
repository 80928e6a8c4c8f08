use super::*;
use crate::linalg::SparseRow;
use crate::sampling::{rng, small_scalar};
use crate::superalgebra::{build_standard_algebra, ideal_power_basis, IdealPower, StandardKind};
use rand::Rng;

fn q(n: i64) -> Scalar {
    Scalar::from_i64(Backend::Rational, n)
}

fn abelian(names: &[(&str, Parity)]) -> SuperLieRinehart {
    let gens = names.iter().map(|(n, p)| LGenerator::new(*n, *p)).collect();
    SuperLieRinehart::lie_algebra(Backend::Rational, gens, &[]).unwrap()
}

pub(crate) fn sl2() -> SuperLieRinehart {
    let gens = ["e", "f", "h"].iter().map(|n| LGenerator::new(*n, Parity::Even)).collect();
    SuperLieRinehart::lie_algebra(
        Backend::Rational,
        gens,
        &[("e", "f", vec![("h", q(1))]), ("h", "e", vec![("e", q(2))]), ("h", "f", vec![("f", q(-2))])],
    )
    .unwrap()
}

/// Action Lie–Rinehart algebra of `g = span{x∂, x²∂}` on ℚ[x]/x³, in the
/// basis `X₁ = x∂`, `X₂ = (1+x)x²∂` so that brackets have non-constant coefficients.
pub(crate) fn truncated_lr() -> (SuperLieRinehart, RightModule) {
    let r = build_standard_algebra(&StandardKind::TruncatedPolynomial(3), Backend::Rational).unwrap().algebra;
    let b = Backend::Rational;
    let x = |k: usize| Element::basis(b, BasisId::Idx(k));
    // X1(x^k) = k x^k;  X2(x^k) = k (1+x) x^{k+1}.
    let a1 = BTreeMap::from([(BasisId::Idx(1), x(1)), (BasisId::Idx(2), x(2).scale(&q(2)))]);
    let a2 = BTreeMap::from([(BasisId::Idx(1), x(2))]);
    let d1 = SuperDerivation::table("X1", Parity::Even, a1);
    let d2 = SuperDerivation::table("X2", Parity::Even, a2);
    // [X1, X2] = (1 + x − x²) X2 in R = ℚ[x]/x³.
    let coeff = &(&x(0) + &x(1)) - &x(2);
    let lr = SuperLieRinehart::new(
        r,
        vec![LGenerator::new("X1", Parity::Even), LGenerator::new("X2", Parity::Even)],
        vec![BracketEntry { left: "X1".into(), right: "X2".into(), result: vec![("X2".into(), coeff)] }],
        BTreeMap::from([("X1".to_string(), d1), ("X2".to_string(), d2)]),
        BTreeMap::new(),
    )
    .unwrap();
    // m·X2 = ((1+x)m)·F with m·F = −F(m) gives χ(X2) = −x².
    let m = RightModule::base_ring(&lr, &[x(0), x(2).scale(&q(-1))]).unwrap();
    (lr, m)
}

fn gl11() -> (SuperLieRinehart, BasedSuperAlgebra) {
    let g = build_standard_algebra(&StandardKind::GradedEndomorphisms(1, 1), Backend::Rational).unwrap().algebra;
    let el = |l: &str| g.basis_element(g.id_of(l).unwrap()).unwrap();
    let lr = SuperLieRinehart::inner(&g, &[("E11", el("E11")), ("E12", el("E12")), ("E21", el("E21")), ("E22", el("E22"))]).unwrap();
    (lr, g)
}

#[test]
fn wedge_examples() {
    let lr = abelian(&[("X", Parity::Even), ("Y", Parity::Even), ("d", Parity::Odd)]);
    let (x, y, d) = (lr.index_of("X").unwrap(), lr.index_of("Y").unwrap(), lr.index_of("d").unwrap());
    assert!(LRChain::monomial(&lr, 0, &[x, x]).is_zero());
    let dd = LRChain::monomial(&lr, 0, &[d, d]);
    assert_eq!(dd.coeff(0, &[d, d]), q(1));
    assert_eq!(LRChain::monomial(&lr, 0, &[y, x]).coeff(0, &[x, y]), q(-1));
    // Odd past even is still antisymmetric in the super-exterior algebra.
    assert_eq!(LRChain::monomial(&lr, 0, &[d, x]).coeff(0, &[x, d]), q(-1));
}

#[test]
fn wedge_sign_matches_pairwise_swaps() {
    let lr = abelian(&[("a", Parity::Even), ("b", Parity::Odd), ("c", Parity::Odd), ("d", Parity::Even)]);
    let mut r = rng(3);
    for _ in 0..200 {
        let len = r.gen_range(0..6);
        let seq: Vec<usize> = (0..len).map(|_| r.gen_range(0..4)).collect();
        let mut sorted = seq.clone();
        let got = wedge_sign(&lr, &mut sorted);
        // Count inversions with their individual swap signs.
        let mut negate = false;
        for i in 0..len {
            for j in i + 1..len {
                if seq[i] > seq[j] && !lr.parity(seq[i]).koszul(lr.parity(seq[j])) {
                    negate = !negate;
                }
            }
        }
        let vanishes = sorted.windows(2).any(|w| w[0] == w[1] && lr.parity(w[0]) == Parity::Even);
        assert_eq!(got, if vanishes { None } else { Some(negate) });
        if got.is_some() {
            let mut again = sorted.clone();
            assert_eq!(wedge_sign(&lr, &mut again), Some(false));
            assert_eq!(again, sorted);
        }
    }
}

#[test]
fn boundary_examples() {
    let lr = abelian(&[("X", Parity::Even), ("Y", Parity::Even)]);
    let m = RightModule::trivial(&lr).unwrap();
    assert!(lr_boundary(&lr, &m, &LRChain::monomial(&lr, 0, &[0])).unwrap().is_zero());

    let s = sl2();
    let m = RightModule::trivial(&s).unwrap();
    let (e, f, h) = (s.index_of("e").unwrap(), s.index_of("f").unwrap(), s.index_of("h").unwrap());
    let d = lr_boundary(&s, &m, &LRChain::monomial(&s, 0, &[e, f])).unwrap();
    assert_eq!(d, LRChain::monomial(&s, 0, &[h]));
    assert!(lr_boundary(&s, &m, &LRChain::monomial(&s, 0, &[e, f, h])).unwrap().is_zero());

    let odd = abelian(&[("d", Parity::Odd)]);
    let m = RightModule::trivial(&odd).unwrap();
    assert!(lr_boundary(&odd, &m, &LRChain::monomial(&odd, 0, &[0, 0])).unwrap().is_zero());
    assert!(matches!(lr_boundary(&odd, &m, &LRChain::zero(Backend::Rational, 0)), Err(LrError::Degree(_))));
}

#[test]
fn homology_examples() {
    let lr = abelian(&[("X", Parity::Even), ("Y", Parity::Even)]);
    let m = RightModule::trivial(&lr).unwrap();
    let dims: Vec<usize> = (0..=2).map(|p| lr_homology_dim(&lr, &m, p).unwrap()).collect();
    assert_eq!(dims, vec![1, 2, 1]);
    let s = sl2();
    assert_eq!(lr_homology_dim(&s, &RightModule::trivial(&s).unwrap(), 1).unwrap(), 0);
    let odd = abelian(&[("d", Parity::Odd)]);
    let m = RightModule::trivial(&odd).unwrap();
    for p in 0..=4 {
        assert_eq!(chain_basis(&odd, &m, p).len(), 1);
        assert_eq!(lr_homology_dim(&odd, &m, p).unwrap(), 1);
    }
}

fn random_lr_chain(lr: &SuperLieRinehart, m: &RightModule, p: usize, r: &mut crate::sampling::SampleRng) -> LRChain {
    let basis = chain_basis(lr, m, p);
    let mut c = LRChain::zero(lr.backend(), p);
    if basis.is_empty() {
        return c;
    }
    for _ in 0..4 {
        let (a, gens) = &basis[r.gen_range(0..basis.len())];
        c.add_scaled(&LRChain::monomial(lr, *a, gens), &small_scalar(r, lr.backend()));
    }
    c
}

#[test]
fn boundary_squares_to_zero() {
    let mut r = rng(11);
    let (gl, g) = gl11();
    let dual = RightModule::dual_of_action(&gl, &g).unwrap();
    let adj = RightModule::adjoint(&gl).unwrap();
    let s = sl2();
    let sadj = RightModule::adjoint(&s).unwrap();
    let (tr, tm) = truncated_lr();
    let cases: Vec<(&SuperLieRinehart, &RightModule)> = vec![(&gl, &dual), (&gl, &adj), (&s, &sadj), (&tr, &tm)];
    for (lr, m) in cases {
        for p in 2..=4 {
            for _ in 0..10 {
                let c = random_lr_chain(lr, m, p, &mut r);
                let dd = lr_boundary(lr, m, &lr_boundary(lr, m, &c).unwrap()).unwrap();
                assert!(dd.is_zero(), "∂² ≠ 0 for {} in degree {p}", m.name);
            }
        }
    }
}

#[test]
fn classification() {
    let odd = abelian(&[("d", Parity::Odd)]);
    let m = RightModule::trivial(&odd).unwrap();
    assert_eq!(classify_chain(&odd, &m, &LRChain::monomial(&odd, 0, &[0, 0])).unwrap(), ChainClass::CycleNotBoundary);
    let s = sl2();
    let m = RightModule::adjoint(&s).unwrap();
    let c = LRChain::monomial(&s, 1, &[0, 2]);
    let bd = lr_boundary(&s, &m, &c).unwrap();
    assert_eq!(classify_chain(&s, &m, &bd).unwrap(), ChainClass::Boundary);
    let lr = abelian(&[("X", Parity::Even), ("Y", Parity::Even)]);
    let m = RightModule::trivial(&lr).unwrap();
    assert!(classify_chain(&lr, &m, &LRChain::monomial(&lr, 0, &[0, 1])).unwrap().is_cycle());
}

#[test]
fn invariant_examples() {
    let lr = abelian(&[("X", Parity::Even)]);
    assert_eq!(invariants(&lr, &RightModule::trivial(&lr).unwrap()).unwrap().len(), 1);
    let s = sl2();
    assert!(invariants(&s, &RightModule::adjoint(&s).unwrap()).unwrap().is_empty());

    let t = build_standard_algebra(&StandardKind::QuantumTorus(0.3), Backend::Approx).unwrap();
    let lr = SuperLieRinehart::lie_algebra(Backend::Approx, vec![LGenerator::new("X", Parity::Even), LGenerator::new("Y", Parity::Even)], &[])
        .unwrap()
        .with_action(t.derivations.iter().map(|d| (d.name.clone(), d.clone())).collect())
        .unwrap();
    let m = trace_module_from(&t.algebra, t.traces.clone(), &lr).unwrap();
    assert_eq!(invariants(&lr, &m).unwrap().len(), 1);
}

#[test]
fn trace_module_examples() {
    let m2 = build_standard_algebra(&StandardKind::Matrix(2), Backend::Rational).unwrap().algebra;
    let el = |l: &str| m2.basis_element(m2.id_of(l).unwrap()).unwrap();
    let h = &el("E11") - &el("E22");
    let s = SuperLieRinehart::inner(&m2, &[("e", el("E12")), ("f", el("E21")), ("h", h)]).unwrap();
    let jp = IdealPower::whole_finite(&m2, 1).unwrap();
    let tm = trace_module(&m2, &jp, &s).unwrap();
    assert_eq!(tm.dim(), 1);
    assert_eq!(invariants(&s, &tm).unwrap().len(), 1);

    let g = build_standard_algebra(&StandardKind::GradedEndomorphisms(1, 1), Backend::Rational).unwrap();
    let d = g.derivation("d").unwrap().clone();
    let lr = SuperLieRinehart::lie_algebra(Backend::Rational, vec![LGenerator::new("d", Parity::Odd)], &[])
        .unwrap()
        .with_action(BTreeMap::from([("d".to_string(), d)]))
        .unwrap();
    let tm = trace_module(&g.algebra, &IdealPower::whole_finite(&g.algebra, 2).unwrap(), &lr).unwrap();
    assert_eq!(tm.dim(), 1);
    assert!(tm.act(0, 0).is_empty());
}

#[test]
fn trace_module_rejects_escaping_action() {
    let p = build_standard_algebra(&StandardKind::TruncatedPolynomial(3), Backend::Rational).unwrap();
    let x = p.element("x").unwrap().clone();
    let j2 = ideal_power_basis(&p.algebra, &[x], 2).unwrap();
    // d/dx-like map x² ↦ x leaves J².
    let bad = SuperDerivation::table(
        "D",
        Parity::Even,
        BTreeMap::from([(BasisId::Idx(2), Element::basis(Backend::Rational, BasisId::Idx(1)))]),
    );
    let lr = SuperLieRinehart::lie_algebra(Backend::Rational, vec![LGenerator::new("D", Parity::Even)], &[])
        .unwrap()
        .with_action(BTreeMap::from([("D".to_string(), bad)]))
        .unwrap();
    assert!(matches!(trace_module(&p.algebra, &j2, &lr), Err(LrError::NotPreserved(_))));
}

#[test]
fn rejects_inconsistent_structure() {
    let gens = ["a", "b", "c"].iter().map(|n| LGenerator::new(*n, Parity::Even)).collect::<Vec<_>>();
    // [a,b] = a, [b,c] = b, [a,c] = 0 violates Jacobi.
    let err = SuperLieRinehart::lie_algebra(
        Backend::Rational,
        gens.clone(),
        &[("a", "b", vec![("a", q(1))]), ("b", "c", vec![("b", q(1))]), ("a", "c", vec![("c", q(1))])],
    );
    assert!(matches!(err, Err(LrError::Axiom { axiom: "graded Jacobi identity", .. })));
    let err = SuperLieRinehart::lie_algebra(Backend::Rational, gens.clone(), &[("a", "a", vec![("b", q(1))])]);
    assert!(matches!(err, Err(LrError::Axiom { axiom: "graded antisymmetry", .. })));
    let err = SuperLieRinehart::lie_algebra(Backend::Rational, gens, &[("a", "z", vec![])]);
    assert!(matches!(err, Err(LrError::UnknownGenerator(_))));
}

#[test]
fn module_axioms_are_checked() {
    let s = sl2();
    // A random action is not a representation.
    let bad = vec![vec![SparseRow::from([(0, q(1))])]; 3];
    assert!(matches!(RightModule::new(&s, "bad", vec!["m".into()], vec![Parity::Even], bad, None), Err(LrError::Axiom { .. })));
}
