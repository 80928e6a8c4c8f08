//! JSON description of algebras: an explicit basis with a product table, or a
//! reference to one of the standard families.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    build_standard_algebra, AlgebraError, BasedSuperAlgebra, BasisFunctional, BasisId, Element, Parity, PartialTrace, StandardAlgebra,
    StandardKind, SuperDerivation,
};
use crate::scalar::{Backend, Scalar, ScalarError};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read {0}: {1}")]
    Io(String, String),
    #[error("scalar literal {0:?}: {1}")]
    Scalar(String, ScalarError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{0}")]
    Invalid(String),
}

pub type Coeffs = BTreeMap<String, String>;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standard: Option<StandardSpec>,
    /// Forces a backend; otherwise the widest backend among the literals is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<Backend>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<BasisEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub unit: Coeffs,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub products: Vec<ProductEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derivations: Vec<DerivationEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub traces: Vec<TraceEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub id: String,
    pub parity: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub result: Coeffs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivationEntry {
    pub name: String,
    #[serde(default)]
    pub parity: u8,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub action: BTreeMap<String, Coeffs>,
    /// `[z, −]` for a homogeneous `z`; replaces `action` and `parity`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<Coeffs>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub two_pi_power: u32,
}

fn is_zero(n: &u32) -> bool {
    *n == 0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub name: String,
    pub values: Coeffs,
}

/// `{"kind": "matrix", "n": 2}` and friends.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StandardSpec {
    GroundField,
    Matrix { n: usize },
    GradedEndomorphisms { n0: usize, n1: usize },
    QuantumTorus { theta: f64 },
    CircleLaurent,
    TruncatedPolynomial { n: usize },
}

impl From<&StandardSpec> for StandardKind {
    fn from(s: &StandardSpec) -> Self {
        match *s {
            StandardSpec::GroundField => StandardKind::GroundField,
            StandardSpec::Matrix { n } => StandardKind::Matrix(n),
            StandardSpec::GradedEndomorphisms { n0, n1 } => StandardKind::GradedEndomorphisms(n0, n1),
            StandardSpec::QuantumTorus { theta } => StandardKind::QuantumTorus(theta),
            StandardSpec::CircleLaurent => StandardKind::CircleLaurent,
            StandardSpec::TruncatedPolynomial { n } => StandardKind::TruncatedPolynomial(n),
        }
    }
}

pub fn parse_literal(s: &str) -> Result<Scalar, SpecError> {
    s.parse::<Scalar>().map_err(|e| SpecError::Scalar(s.to_string(), e))
}

/// Parses a literal and promotes it to `backend`.
pub fn literal_in(s: &str, backend: Backend) -> Result<Scalar, SpecError> {
    let x = parse_literal(s)?;
    x.promote(backend).ok_or_else(|| SpecError::Scalar(s.to_string(), ScalarError::Mixed(backend, x.backend())))
}

/// Widest backend among a collection of literals (rational when empty).
pub fn widest_backend<'a, I: IntoIterator<Item = &'a String>>(literals: I) -> Result<Backend, SpecError> {
    let mut b = Backend::Rational;
    for s in literals {
        b = b.join(parse_literal(s)?.backend());
    }
    Ok(b)
}

impl AlgebraSpec {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialises")
    }

    fn literals(&self) -> impl Iterator<Item = &String> {
        self.unit
            .values()
            .chain(self.products.iter().flat_map(|p| p.result.values()))
            .chain(self.derivations.iter().flat_map(|d| d.action.values().flat_map(|m| m.values())))
            .chain(self.traces.iter().flat_map(|t| t.values.values()))
    }

    /// Builds the algebra with its derivations and traces.
    pub fn build(&self) -> Result<StandardAlgebra, SpecError> {
        if let Some(std) = &self.standard {
            let backend = self.backend.unwrap_or(match std {
                StandardSpec::CircleLaurent | StandardSpec::GradedEndomorphisms { .. } => Backend::Gaussian,
                StandardSpec::QuantumTorus { .. } => Backend::Approx,
                _ => Backend::Rational,
            });
            let mut out = build_standard_algebra(&std.into(), backend)?;
            let (ds, ts) = self.equipment(&out.algebra)?;
            out.derivations.extend(ds);
            out.traces.extend(ts);
            return Ok(out);
        }
        let backend = match self.backend {
            Some(b) => b,
            None => widest_backend(self.literals())?,
        };
        let index: BTreeMap<&str, usize> = self.basis.iter().enumerate().map(|(i, b)| (b.id.as_str(), i)).collect();
        if index.len() != self.basis.len() {
            return Err(SpecError::Invalid("duplicate basis id".into()));
        }
        let id = |s: &str| index.get(s).copied().ok_or_else(|| SpecError::Invalid(format!("unknown basis id {s:?}")));
        let element = |c: &Coeffs| -> Result<Element, SpecError> {
            let mut e = Element::zero(backend);
            for (k, v) in c {
                e.add_term(BasisId::Idx(id(k)?), literal_in(v, backend)?);
            }
            Ok(e)
        };
        let parities = self
            .basis
            .iter()
            .map(|b| match b.parity {
                0 => Ok(Parity::Even),
                1 => Ok(Parity::Odd),
                p => Err(SpecError::Invalid(format!("parity {p} of {:?} is not 0 or 1", b.id))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let n = self.basis.len();
        let mut table = vec![Element::zero(backend); n * n];
        for p in &self.products {
            table[id(&p.left)? * n + id(&p.right)?] = element(&p.result)?;
        }
        let unit = element(&self.unit)?;
        let labels = self.basis.iter().map(|b| b.id.clone()).collect();
        let algebra = BasedSuperAlgebra::finite("custom", backend, labels, parities, unit, |i, j| table[i * n + j].clone())?;
        let (derivations, traces) = self.equipment(&algebra)?;
        Ok(StandardAlgebra { algebra, derivations, traces, elements: BTreeMap::new() })
    }

    /// The file's derivations and traces, resolved against `alg`'s labels.
    fn equipment(&self, alg: &BasedSuperAlgebra) -> Result<(Vec<SuperDerivation>, Vec<PartialTrace>), SpecError> {
        let mut derivations = Vec::new();
        for d in &self.derivations {
            let mut der = match &d.inner {
                Some(z) => {
                    if !d.action.is_empty() {
                        return Err(SpecError::Invalid(format!("derivation {:?} has both \"inner\" and \"action\"", d.name)));
                    }
                    SuperDerivation::inner(d.name.clone(), alg, element_from_coeffs(alg, z)?)?
                }
                None => {
                    let mut images = BTreeMap::new();
                    for (k, v) in &d.action {
                        images.insert(id_of(alg, k)?, element_from_coeffs(alg, v)?);
                    }
                    let parity = match d.parity {
                        0 | 1 => Parity::from_bit(d.parity),
                        p => return Err(SpecError::Invalid(format!("parity {p} of {:?} is not 0 or 1", d.name))),
                    };
                    SuperDerivation::table(d.name.clone(), parity, images)
                }
            };
            der.two_pi = d.two_pi_power;
            derivations.push(der);
        }
        let mut traces = Vec::new();
        for t in &self.traces {
            let mut values = BasisFunctional::new();
            for (k, v) in &t.values {
                values.insert(id_of(alg, k)?, literal_in(v, alg.backend())?);
            }
            traces.push(PartialTrace::new(t.name.clone(), values));
        }
        Ok((derivations, traces))
    }

    /// Explicit table form of a finite algebra with its equipment.
    pub fn from_algebra(std: &StandardAlgebra) -> Result<Self, SpecError> {
        let alg = &std.algebra;
        let ids = alg.basis()?;
        let coeffs = |e: &Element| -> Coeffs { e.terms().map(|(id, c)| (alg.label(*id), c.to_string())).collect() };
        let basis = ids.iter().map(|&i| Ok(BasisEntry { id: alg.label(i), parity: alg.parity(i)?.bit() })).collect::<Result<_, AlgebraError>>()?;
        let mut products = Vec::new();
        for &x in &ids {
            for &y in &ids {
                let r = alg.mul_basis(x, y);
                if !r.is_zero() {
                    products.push(ProductEntry { left: alg.label(x), right: alg.label(y), result: coeffs(&r) });
                }
            }
        }
        let mut derivations = Vec::new();
        for d in &std.derivations {
            let mut action = BTreeMap::new();
            for &x in &ids {
                let img = d.apply_basis(alg, x)?;
                if !img.is_zero() {
                    action.insert(alg.label(x), coeffs(&img));
                }
            }
            derivations.push(DerivationEntry { name: d.name.clone(), parity: d.parity.bit(), action, inner: None, two_pi_power: d.two_pi });
        }
        let traces = std
            .traces
            .iter()
            .map(|t| TraceEntry { name: t.name.clone(), values: t.values.iter().map(|(id, c)| (alg.label(*id), c.to_string())).collect() })
            .collect();
        Ok(Self { standard: None, backend: Some(alg.backend()), basis, unit: coeffs(&alg.unit()), products, derivations, traces })
    }
}

/// A basis id from its label.
pub fn id_of(alg: &BasedSuperAlgebra, label: &str) -> Result<BasisId, SpecError> {
    let id = alg.id_of(label).or_else(|| parse_lattice_label(label)).ok_or_else(|| SpecError::Invalid(format!("unknown basis id {label:?}")))?;
    if !alg.contains_id(id) {
        return Err(SpecError::Invalid(format!("basis id {label:?} does not belong to {}", alg.name())));
    }
    Ok(id)
}

/// Parses `{id: literal}` against an algebra's labels.
pub fn element_from_coeffs(alg: &BasedSuperAlgebra, c: &Coeffs) -> Result<Element, SpecError> {
    let mut e = Element::zero(alg.backend());
    for (k, v) in c {
        e.add_term(id_of(alg, k)?, literal_in(v, alg.backend())?);
    }
    Ok(e)
}

/// Labels of countable bases: `z^n` and `U^mV^n`.
fn parse_lattice_label(s: &str) -> Option<BasisId> {
    if let Some(rest) = s.strip_prefix("z^") {
        return rest.parse().ok().map(BasisId::Z);
    }
    let rest = s.strip_prefix("U^")?;
    let (m, n) = rest.split_once("V^")?;
    Some(BasisId::Z2(m.parse().ok()?, n.parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_field_roundtrip() {
        let text = r#"{"basis":[{"id":"1","parity":0}],"unit":{"1":"1"},
            "products":[{"left":"1","right":"1","result":{"1":"1"}}]}"#;
        let spec = AlgebraSpec::from_json(text).unwrap();
        let a = spec.build().unwrap();
        assert_eq!(a.algebra.dim(), Some(1));
        assert_eq!(a.algebra.backend(), Backend::Rational);
        let again = AlgebraSpec::from_algebra(&a).unwrap();
        assert_eq!(again.products.len(), 1);
    }

    #[test]
    fn table_roundtrip_preserves_structure() {
        let m2 = build_standard_algebra(&StandardKind::GradedEndomorphisms(1, 1), Backend::Gaussian).unwrap();
        let spec = AlgebraSpec::from_algebra(&m2).unwrap();
        let back = AlgebraSpec::from_json(&spec.to_json()).unwrap().build().unwrap();
        let ids = back.algebra.basis().unwrap();
        for &x in &ids {
            assert_eq!(back.algebra.parity(x).unwrap(), m2.algebra.parity(x).unwrap());
            for &y in &ids {
                assert_eq!(back.algebra.mul_basis(x, y), m2.algebra.mul_basis(x, y));
            }
            assert_eq!(back.derivations[0].apply_basis(&back.algebra, x).unwrap(), m2.derivations[0].apply_basis(&m2.algebra, x).unwrap());
        }
        assert_eq!(back.traces, m2.traces);
    }

    #[test]
    fn literals_are_promoted_to_the_widest_backend() {
        let text = r#"{"basis":[{"id":"1","parity":0}],"unit":{"1":"1"},
            "products":[{"left":"1","right":"1","result":{"1":"1"}}],
            "traces":[{"name":"t","values":{"1":"1/2+1 i"}}]}"#;
        let a = AlgebraSpec::from_json(text).unwrap().build().unwrap();
        assert_eq!(a.algebra.backend(), Backend::Gaussian);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(AlgebraSpec::from_json("{\"basis\": 3}"), Err(SpecError::Json(_))));
        let text = r#"{"basis":[{"id":"1","parity":0}],"unit":{"q":"1"}}"#;
        assert!(matches!(AlgebraSpec::from_json(text).unwrap().build(), Err(SpecError::Invalid(_))));
        // Non-associative table.
        let text = r#"{"basis":[{"id":"1","parity":0},{"id":"a","parity":0},{"id":"b","parity":0}],
            "unit":{"1":"1"},
            "products":[{"left":"1","right":"1","result":{"1":"1"}},{"left":"1","right":"a","result":{"a":"1"}},
            {"left":"a","right":"1","result":{"a":"1"}},{"left":"1","right":"b","result":{"b":"1"}},
            {"left":"b","right":"1","result":{"b":"1"}},{"left":"a","right":"a","result":{"b":"1"}}]}"#;
        let err = AlgebraSpec::from_json(text).unwrap().build();
        assert!(err.is_ok(), "a² = b with b·anything = 0 is associative");
        let text = text.replace(r#"{"left":"a","right":"a","result":{"b":"1"}}"#, r#"{"left":"a","right":"a","result":{"b":"1"}},{"left":"a","right":"b","result":{"a":"1"}}"#);
        assert!(matches!(AlgebraSpec::from_json(&text).unwrap().build(), Err(SpecError::Algebra(AlgebraError::Axiom { .. }))));
    }

    #[test]
    fn lattice_labels() {
        assert_eq!(parse_lattice_label("z^-3"), Some(BasisId::Z(-3)));
        assert_eq!(parse_lattice_label("U^1V^-2"), Some(BasisId::Z2(1, -2)));
        assert_eq!(parse_lattice_label("E11"), None);
    }
}
