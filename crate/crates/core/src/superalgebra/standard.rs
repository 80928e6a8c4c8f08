use std::collections::BTreeMap;

use super::{AlgebraError, BasedSuperAlgebra, BasisFunctional, BasisId, Element, Parity, PartialTrace, SuperDerivation};
use crate::scalar::{Backend, Scalar};

/// The families of algebras that come with standard equipment.
#[derive(Clone, Debug, PartialEq)]
pub enum StandardKind {
    GroundField,
    Matrix(usize),
    GradedEndomorphisms(usize, usize),
    QuantumTorus(f64),
    CircleLaurent,
    TruncatedPolynomial(usize),
}

/// An algebra together with its named derivations, traces and distinguished elements.
#[derive(Clone, Debug)]
pub struct StandardAlgebra {
    pub algebra: BasedSuperAlgebra,
    pub derivations: Vec<SuperDerivation>,
    pub traces: Vec<PartialTrace>,
    pub elements: BTreeMap<String, Element>,
}

impl StandardAlgebra {
    fn bare(algebra: BasedSuperAlgebra) -> Self {
        Self { algebra, derivations: Vec::new(), traces: Vec::new(), elements: BTreeMap::new() }
    }

    pub fn derivation(&self, name: &str) -> Option<&SuperDerivation> {
        self.derivations.iter().find(|d| d.name == name)
    }

    pub fn trace(&self, name: &str) -> Option<&PartialTrace> {
        self.traces.iter().find(|t| t.name == name)
    }

    pub fn element(&self, name: &str) -> Option<&Element> {
        self.elements.get(name)
    }
}

/// Builds one of the standard algebras.
///
/// `backend` selects the scalars of the finite families and of the circle; the
/// quantum torus always uses the approximate backend.
pub fn build_standard_algebra(kind: &StandardKind, backend: Backend) -> Result<StandardAlgebra, AlgebraError> {
    match *kind {
        StandardKind::GroundField => {
            let alg = BasedSuperAlgebra::ground_field(backend);
            let mut out = StandardAlgebra::bare(alg);
            out.traces.push(PartialTrace::new("id", BasisFunctional::from([(BasisId::Idx(0), Scalar::one(backend))])));
            Ok(out)
        }
        StandardKind::Matrix(n) => {
            positive(n, "matrix size")?;
            let alg = matrix_units(format!("M{n}"), backend, n, &vec![Parity::Even; n])?;
            let mut out = StandardAlgebra::bare(alg);
            let values = (0..n).map(|i| (BasisId::Idx(i * n + i), Scalar::one(backend))).collect();
            out.traces.push(PartialTrace::new("trace", values));
            Ok(out)
        }
        StandardKind::GradedEndomorphisms(n0, n1) => {
            positive(n0 + n1, "graded dimension")?;
            let n = n0 + n1;
            let degrees: Vec<Parity> = (0..n).map(|i| if i < n0 { Parity::Even } else { Parity::Odd }).collect();
            let alg = matrix_units(format!("End({n0}|{n1})"), backend, n, &degrees)?;
            let mut out = StandardAlgebra::bare(alg);
            let values = (0..n).map(|i| (BasisId::Idx(i * n + i), Scalar::from_i64(backend, if i < n0 { 1 } else { -1 }))).collect();
            out.traces.push(PartialTrace::new("str", values));
            if n0 == n1 {
                // F swaps the two halves: F e_i = e_{i+n0}, F e_{i+n0} = e_i.
                let one = Scalar::one(backend);
                let f = Element::from_terms(
                    backend,
                    (0..n0).flat_map(|i| [(BasisId::Idx((i + n0) * n + i), one.clone()), (BasisId::Idx(i * n + i + n0), one.clone())]),
                )?;
                let d = SuperDerivation::inner("d", &out.algebra, f.clone())?;
                out.derivations.push(d);
                out.elements.insert("F".into(), f);
            }
            Ok(out)
        }
        StandardKind::QuantumTorus(theta) => {
            let alg = BasedSuperAlgebra::quantum_torus(theta)?;
            let b = alg.backend();
            let mut out = StandardAlgebra::bare(alg);
            out.derivations.push(SuperDerivation::lattice("X", 0));
            out.derivations.push(SuperDerivation::lattice("Y", 1));
            out.traces.push(PartialTrace::new("tau", BasisFunctional::from([(BasisId::Z2(0, 0), Scalar::one(b))])));
            out.elements.insert("U".into(), Element::basis(b, BasisId::Z2(1, 0)));
            out.elements.insert("V".into(), Element::basis(b, BasisId::Z2(0, 1)));
            Ok(out)
        }
        StandardKind::CircleLaurent => {
            Scalar::imaginary_unit(backend)?;
            let alg = BasedSuperAlgebra::laurent(backend);
            let mut out = StandardAlgebra::bare(alg);
            out.derivations.push(SuperDerivation::lattice("X", 0));
            out.traces.push(PartialTrace::new("tau", BasisFunctional::from([(BasisId::Z(0), Scalar::one(backend))])));
            out.elements.insert("z".into(), Element::basis(backend, BasisId::Z(1)));
            Ok(out)
        }
        StandardKind::TruncatedPolynomial(n) => {
            positive(n, "truncation order")?;
            let labels = (0..n)
                .map(|k| match k {
                    0 => "1".to_string(),
                    1 => "x".to_string(),
                    _ => format!("x^{k}"),
                })
                .collect();
            let alg = BasedSuperAlgebra::finite(
                format!("Q[x]/x^{n}"),
                backend,
                labels,
                vec![Parity::Even; n],
                Element::basis(backend, BasisId::Idx(0)),
                |i, j| if i + j < n { Element::basis(backend, BasisId::Idx(i + j)) } else { Element::zero(backend) },
            )?;
            let mut out = StandardAlgebra::bare(alg);
            // Euler derivation x d/dx.
            let images = (1..n).map(|k| (BasisId::Idx(k), Element::monomial(BasisId::Idx(k), Scalar::from_i64(backend, k as i64)))).collect();
            out.derivations.push(SuperDerivation::table("E", Parity::Even, images));
            if n > 1 {
                out.elements.insert("x".into(), Element::basis(backend, BasisId::Idx(1)));
            }
            Ok(out)
        }
    }
}

fn positive(n: usize, what: &str) -> Result<(), AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::InvalidParameter(format!("{what} must be positive")));
    }
    Ok(())
}

/// Matrix units `E_ij` (index `i·n + j`) with parity `deg(i) + deg(j)`.
fn matrix_units(name: String, backend: Backend, n: usize, degrees: &[Parity]) -> Result<BasedSuperAlgebra, AlgebraError> {
    let label = |i: usize, j: usize| if n < 10 { format!("E{}{}", i + 1, j + 1) } else { format!("E{}_{}", i + 1, j + 1) };
    let labels = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| label(i, j)).collect();
    let parities = (0..n * n).map(|k| degrees[k / n] + degrees[k % n]).collect();
    let one = Scalar::one(backend);
    let unit = Element::from_terms(backend, (0..n).map(|i| (BasisId::Idx(i * n + i), one.clone())))?;
    BasedSuperAlgebra::finite(name, backend, labels, parities, unit, |a, b| {
        let (i, j) = (a / n, a % n);
        let (k, l) = (b / n, b % n);
        if j == k {
            Element::basis(backend, BasisId::Idx(i * n + l))
        } else {
            Element::zero(backend)
        }
    })
}
