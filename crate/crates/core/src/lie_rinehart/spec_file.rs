//! JSON description of Lie–Rinehart pairs and their modules.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BracketEntry, LGenerator, LrError, RightModule, SuperLieRinehart};
use crate::linalg::SparseRow;
use crate::scalar::Backend;
use crate::superalgebra::spec_file::{element_from_coeffs, literal_in, parse_literal, AlgebraSpec, BasisEntry, Coeffs, SpecError};
use crate::superalgebra::{BasedSuperAlgebra, Element, IdealPower, Parity, StandardAlgebra, SuperDerivation};

/// `"ground_field"` or an inline algebra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseSpec {
    Named(String),
    Inline(Box<AlgebraSpec>),
}

impl Default for BaseSpec {
    fn default() -> Self {
        BaseSpec::Named("ground_field".into())
    }
}

/// A bracket or character coefficient: a scalar literal, or an element of R.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Scalar(String),
    Ring(Coeffs),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LBracketEntry {
    pub left: String,
    pub right: String,
    pub result: BTreeMap<String, Coefficient>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LieRinehartSpec {
    #[serde(rename = "R", default)]
    pub r: BaseSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<Backend>,
    #[serde(rename = "L_basis")]
    pub l_basis: Vec<BasisEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bracket: Vec<LBracketEntry>,
    /// Generator id to the name of a derivation of R.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub anchor: BTreeMap<String, String>,
    /// Generator id to the name of a derivation of the auxiliary algebra.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub action: BTreeMap<String, String>,
    /// The auxiliary algebra the action refers to, when not supplied by a pairing setup.
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<AlgebraSpec>,
}

fn parity_of(p: u8) -> Result<Parity, SpecError> {
    match p {
        0 | 1 => Ok(Parity::from_bit(p)),
        _ => Err(SpecError::Invalid(format!("parity must be 0 or 1, got {p}"))),
    }
}

fn coefficient_literals(c: &Coefficient) -> Vec<&String> {
    match c {
        Coefficient::Scalar(s) => vec![s],
        Coefficient::Ring(m) => m.values().collect(),
    }
}

fn coefficient_in(alg: &BasedSuperAlgebra, c: &Coefficient) -> Result<Element, SpecError> {
    match c {
        Coefficient::Scalar(s) => Ok(alg.unit().scale(&literal_in(s, alg.backend())?)),
        Coefficient::Ring(m) => element_from_coeffs(alg, m),
    }
}

fn lr_err(e: LrError) -> SpecError {
    SpecError::Invalid(e.to_string())
}

impl LieRinehartSpec {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialises")
    }

    fn literal_backend(&self) -> Result<Backend, SpecError> {
        let mut b = self.backend.unwrap_or(Backend::Rational);
        for e in &self.bracket {
            for c in e.result.values() {
                for s in coefficient_literals(c) {
                    b = b.join(parse_literal(s)?.backend());
                }
            }
        }
        Ok(b)
    }

    /// Builds the auxiliary algebra named in the file, if any.
    pub fn build_b(&self) -> Result<Option<StandardAlgebra>, SpecError> {
        self.b.as_ref().map(AlgebraSpec::build).transpose()
    }

    /// Builds the pair. The action is resolved against `b` (or the file's own
    /// auxiliary algebra); all data is promoted to the widest backend involved.
    pub fn build(&self, b: Option<&StandardAlgebra>) -> Result<SuperLieRinehart, SpecError> {
        let own_b;
        let b = match (b, &self.b) {
            (Some(b), _) => Some(b),
            (None, Some(_)) => {
                own_b = self.build_b()?;
                own_b.as_ref()
            }
            (None, None) => None,
        };
        let mut backend = self.literal_backend()?;
        if let Some(b) = b {
            backend = backend.join(b.algebra.backend());
        }
        let base = match &self.r {
            BaseSpec::Named(n) if n == "ground_field" => StandardAlgebra {
                algebra: BasedSuperAlgebra::ground_field(backend),
                derivations: Vec::new(),
                traces: Vec::new(),
                elements: BTreeMap::new(),
            },
            BaseSpec::Named(n) => return Err(SpecError::Invalid(format!("unknown base ring {n:?}"))),
            BaseSpec::Inline(spec) => {
                let first = spec.build()?;
                if first.algebra.backend() == backend.join(first.algebra.backend()) || spec.backend.is_some() {
                    first
                } else {
                    let mut forced = (**spec).clone();
                    forced.backend = Some(backend);
                    forced.build()?
                }
            }
        };
        let backend = base.algebra.backend();
        if let Some(b) = b {
            if b.algebra.backend() != backend {
                return Err(SpecError::Invalid(format!("auxiliary algebra uses {} but the pair uses {}", b.algebra.backend(), backend)));
            }
        }
        let gens = self.l_basis.iter().map(|e| Ok(LGenerator::new(e.id.clone(), parity_of(e.parity)?))).collect::<Result<Vec<_>, SpecError>>()?;
        let brackets = self
            .bracket
            .iter()
            .map(|e| {
                let result =
                    e.result.iter().map(|(g, c)| Ok((g.clone(), coefficient_in(&base.algebra, c)?))).collect::<Result<Vec<_>, SpecError>>()?;
                Ok(BracketEntry { left: e.left.clone(), right: e.right.clone(), result })
            })
            .collect::<Result<Vec<_>, SpecError>>()?;
        let resolve = |names: &BTreeMap<String, String>, alg: &StandardAlgebra, what: &str| -> Result<BTreeMap<String, SuperDerivation>, SpecError> {
            names
                .iter()
                .map(|(g, d)| {
                    let der = alg.derivation(d).ok_or_else(|| SpecError::Invalid(format!("{what} {d:?} is not a derivation of {}", alg.algebra.name())))?;
                    Ok((g.clone(), der.clone()))
                })
                .collect()
        };
        // Derivations of the ground field vanish.
        let anchor = if base.algebra.dim() == Some(1) { BTreeMap::new() } else { resolve(&self.anchor, &base, "anchor")? };
        let action = match b {
            Some(b) => resolve(&self.action, b, "action")?,
            None if self.action.is_empty() => BTreeMap::new(),
            None => return Err(SpecError::Invalid("the action needs an auxiliary algebra".into())),
        };
        SuperLieRinehart::new(base.algebra, gens, brackets, anchor, action).map_err(lr_err)
    }
}

/// Coefficient modules selectable from files and the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleSpec {
    Trivial,
    Adjoint,
    /// R with `m·X = −X(m) + χ(X)m`.
    BaseRing {
        #[serde(default)]
        character: BTreeMap<String, Coefficient>,
    },
    /// All functionals on the auxiliary algebra.
    Dual,
    /// Partial traces on `Jᵖ` for the ideal generated by `generators`.
    Traces {
        #[serde(default)]
        generators: Vec<Coeffs>,
        p: usize,
    },
    /// Explicit matrices over the ground field: `action[X][m] = m·X`.
    Explicit {
        basis: Vec<BasisEntry>,
        #[serde(default)]
        action: BTreeMap<String, BTreeMap<String, Coeffs>>,
    },
}

impl ModuleSpec {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Accepts a bare kind name (`trivial`, `adjoint`, `dual`, `base_ring`) or JSON.
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let t = text.trim();
        if t.starts_with('{') {
            return Self::from_json(t);
        }
        Self::from_json(&format!("{{\"kind\":{}}}", serde_json::to_string(t)?))
    }

    pub fn build(&self, lr: &SuperLieRinehart, b: Option<&StandardAlgebra>) -> Result<RightModule, SpecError> {
        let need_b = || b.ok_or_else(|| SpecError::Invalid("this module needs the auxiliary algebra".into()));
        match self {
            ModuleSpec::Trivial => RightModule::trivial(lr).map_err(lr_err),
            ModuleSpec::Adjoint => RightModule::adjoint(lr).map_err(lr_err),
            ModuleSpec::BaseRing { character } => {
                if let Some(bad) = character.keys().find(|k| lr.index_of(k).is_none()) {
                    return Err(SpecError::Invalid(format!("unknown generator {bad:?}")));
                }
                let chi = lr
                    .generators()
                    .iter()
                    .map(|g| match character.get(&g.name) {
                        Some(c) => coefficient_in(lr.base(), c),
                        None => Ok(Element::zero(lr.backend())),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                RightModule::base_ring(lr, &chi).map_err(lr_err)
            }
            ModuleSpec::Dual => RightModule::dual_of_action(lr, &need_b()?.algebra).map_err(lr_err),
            ModuleSpec::Traces { generators, p } => {
                let b = need_b()?;
                let jp = if generators.is_empty() {
                    IdealPower::whole_finite(&b.algebra, *p)?
                } else {
                    let gens = generators.iter().map(|c| element_from_coeffs(&b.algebra, c)).collect::<Result<Vec<_>, _>>()?;
                    crate::superalgebra::ideal_power_basis(&b.algebra, &gens, *p)?
                };
                super::trace_module(&b.algebra, &jp, lr).map_err(lr_err)
            }
            ModuleSpec::Explicit { basis, action } => {
                let index: BTreeMap<&str, usize> = basis.iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect();
                let mut maps = vec![vec![SparseRow::new(); basis.len()]; lr.rank()];
                for (g, rows) in action {
                    let gi = lr.index_of(g).ok_or_else(|| SpecError::Invalid(format!("unknown generator {g:?}")))?;
                    for (m, img) in rows {
                        let a = *index.get(m.as_str()).ok_or_else(|| SpecError::Invalid(format!("unknown module basis id {m:?}")))?;
                        for (k, v) in img {
                            let j = *index.get(k.as_str()).ok_or_else(|| SpecError::Invalid(format!("unknown module basis id {k:?}")))?;
                            let x = literal_in(v, lr.backend())?;
                            if !x.is_zero() {
                                maps[gi][a].insert(j, x);
                            }
                        }
                    }
                }
                let labels = basis.iter().map(|e| e.id.clone()).collect();
                let parities = basis.iter().map(|e| parity_of(e.parity)).collect::<Result<_, _>>()?;
                RightModule::new(lr, "explicit", labels, parities, maps, None).map_err(lr_err)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_rinehart::lr_homology_dim;

    #[test]
    fn sl2_from_json() {
        let text = r#"{"R":"ground_field","L_basis":[{"id":"e","parity":0},{"id":"f","parity":0},{"id":"h","parity":0}],
            "bracket":[{"left":"e","right":"f","result":{"h":"1"}},{"left":"h","right":"e","result":{"e":"2"}},
                       {"left":"h","right":"f","result":{"f":"-2"}}]}"#;
        let lr = LieRinehartSpec::from_json(text).unwrap().build(None).unwrap();
        let m = ModuleSpec::parse("trivial").unwrap().build(&lr, None).unwrap();
        assert_eq!(lr_homology_dim(&lr, &m, 1).unwrap(), 0);
        assert_eq!(lr_homology_dim(&lr, &m, 3).unwrap(), 1);
        let adj = ModuleSpec::parse("adjoint").unwrap().build(&lr, None).unwrap();
        assert_eq!(adj.dim(), 3);
    }

    #[test]
    fn truncated_polynomial_pair_from_json() {
        let text = r#"{"R":{"standard":{"kind":"truncated_polynomial","n":3}},
            "L_basis":[{"id":"X","parity":0}],"anchor":{"X":"E"}}"#;
        let lr = LieRinehartSpec::from_json(text).unwrap().build(None).unwrap();
        let m = ModuleSpec::from_json(r#"{"kind":"base_ring","character":{"X":"1"}}"#).unwrap().build(&lr, None).unwrap();
        assert_eq!(m.dim(), 3);
        // m·X = m − E(m) kills exactly the constants.
        assert_eq!(lr_homology_dim(&lr, &m, 0).unwrap(), 1);
    }

    #[test]
    fn action_resolves_against_auxiliary_algebra() {
        let text = r#"{"L_basis":[{"id":"d","parity":1}],"action":{"d":"d"},
            "B":{"standard":{"kind":"graded_endomorphisms","n0":1,"n1":1}}}"#;
        let spec = LieRinehartSpec::from_json(text).unwrap();
        let b = spec.build_b().unwrap().unwrap();
        let lr = spec.build(Some(&b)).unwrap();
        assert_eq!(lr.backend(), Backend::Gaussian);
        let m = ModuleSpec::from_json(r#"{"kind":"traces","p":2}"#).unwrap().build(&lr, Some(&b)).unwrap();
        assert_eq!(m.dim(), 1);
        let dual = ModuleSpec::parse("dual").unwrap().build(&lr, Some(&b)).unwrap();
        assert_eq!(dual.dim(), 4);
        let roundtrip = LieRinehartSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(roundtrip, spec);
    }

    #[test]
    fn explicit_module_and_errors() {
        let text = r#"{"L_basis":[{"id":"X","parity":0}]}"#;
        let lr = LieRinehartSpec::from_json(text).unwrap().build(None).unwrap();
        let m = ModuleSpec::from_json(r#"{"kind":"explicit","basis":[{"id":"a","parity":0},{"id":"b","parity":0}],"action":{"X":{"a":{"b":"1"}}}}"#)
            .unwrap()
            .build(&lr, None)
            .unwrap();
        assert_eq!(lr_homology_dim(&lr, &m, 0).unwrap(), 1);
        assert!(LieRinehartSpec::from_json(r#"{"L_basis":[{"id":"X","parity":0}],"action":{"X":"d"}}"#).unwrap().build(None).is_err());
        assert!(LieRinehartSpec::from_json(r#"{"R":"nope","L_basis":[]}"#).unwrap().build(None).is_err());
        assert!(ModuleSpec::parse("bogus").is_err());
    }
}
