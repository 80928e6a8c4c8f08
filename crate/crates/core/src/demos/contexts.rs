//! Small admissible pairing contexts used by the lemma sweeps, the CLI and the tests.

use std::collections::BTreeMap;

use crate::lie_rinehart::{LGenerator, SuperLieRinehart};
use crate::pairing::{PairingContext, PairingError};
use crate::scalar::{Backend, Scalar};
use crate::superalgebra::{build_standard_algebra, BasisId, Element, Parity, StandardKind, SuperDerivation};

/// Which Lie algebra acts on `M₂` by inner derivations.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum MatrixAction {
    Gl2,
    Sl2,
}

/// `M₂` with `gl₂` or `sl₂` acting by commutators, `J = M₂`, partial traces on `M₂`.
pub fn matrix_inner(backend: Backend, action: MatrixAction, p: usize) -> Result<PairingContext, PairingError> {
    let m2 = build_standard_algebra(&StandardKind::Matrix(2), backend)?.algebra;
    let el = |l: &str| m2.basis_element(m2.id_of(l).expect("matrix unit"));
    let gens = match action {
        MatrixAction::Gl2 => vec![("E11", el("E11")?), ("E12", el("E12")?), ("E21", el("E21")?), ("E22", el("E22")?)],
        MatrixAction::Sl2 => vec![("e", el("E12")?), ("f", el("E21")?), ("h", &el("E11")? - &el("E22")?)],
    };
    let lr = SuperLieRinehart::inner(&m2, &gens)?;
    PairingContext::with_partial_traces(m2, &[], p, lr)
}

/// `ℚ[x]/x³` with `J = (x)` and the Lie algebra `{E = x∂, F = x²∂}`, `[E, F] = F`.
pub fn truncated_polynomial(p: usize) -> Result<PairingContext, PairingError> {
    let b = Backend::Rational;
    let std = build_standard_algebra(&StandardKind::TruncatedPolynomial(3), b)?;
    let e = std.derivation("E").expect("Euler derivation").clone();
    let x2 = Element::basis(b, BasisId::Idx(2));
    let f = SuperDerivation::table("F", Parity::Even, BTreeMap::from([(BasisId::Idx(1), x2)]));
    let lr = SuperLieRinehart::lie_algebra(
        b,
        vec![LGenerator::new("E", Parity::Even), LGenerator::new("F", Parity::Even)],
        &[("E", "F", vec![("F", Scalar::one(b))])],
    )?
    .with_action(BTreeMap::from([("E".to_string(), e), ("F".to_string(), f)]))?;
    let x = std.element("x").expect("generator x").clone();
    PairingContext::with_partial_traces(std.algebra, &[x], p, lr)
}

/// Graded endomorphisms of `k^{n|n}` with the odd generator `d = [F, −]` and the supertrace.
pub fn graded_odd(backend: Backend, n: usize, p: usize) -> Result<PairingContext, PairingError> {
    let std = build_standard_algebra(&StandardKind::GradedEndomorphisms(n, n), backend)?;
    let d = std.derivation("d").expect("odd derivation").clone();
    let lr = SuperLieRinehart::lie_algebra(backend, vec![LGenerator::new("d", Parity::Odd)], &[])?
        .with_action(BTreeMap::from([("d".to_string(), d)]))?;
    let str_ = std.trace("str").expect("supertrace").clone();
    PairingContext::with_traces(std.algebra, &[], p, lr, vec![str_])
}

/// `gl(1|1)` acting on `End(1|1)` by supercommutators, with the supertrace.
pub fn gl11(backend: Backend, p: usize) -> Result<PairingContext, PairingError> {
    let g = build_standard_algebra(&StandardKind::GradedEndomorphisms(1, 1), backend)?.algebra;
    let el = |l: &str| g.basis_element(g.id_of(l).expect("matrix unit"));
    let lr = SuperLieRinehart::inner(&g, &[("E11", el("E11")?), ("E12", el("E12")?), ("E21", el("E21")?), ("E22", el("E22")?)])?;
    PairingContext::with_partial_traces(g, &[], p, lr)
}
