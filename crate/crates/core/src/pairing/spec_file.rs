//! JSON pairing setups: the algebras, the pair acting on B, the ideal, the
//! degree, the partial traces and the two chains to pair.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::PairingContext;
use crate::hochschild::HochschildChain;
use crate::lie_rinehart::spec_file::LieRinehartSpec;
use crate::lie_rinehart::LRChain;
use crate::superalgebra::spec_file::{element_from_coeffs, id_of, literal_in, AlgebraSpec, Coeffs, SpecError, TraceEntry};
use crate::superalgebra::{BasisFunctional, Element, PartialTrace, StandardAlgebra};

/// A file path (relative to the setup file) or the object itself.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Source<T> {
    Path(String),
    Inline(T),
}

impl<T: DeserializeOwned + Clone> Source<T> {
    fn resolve(&self, dir: &Path) -> Result<T, SpecError> {
        match self {
            Source::Inline(t) => Ok(t.clone()),
            Source::Path(p) => {
                let path = dir.join(p);
                let text = std::fs::read_to_string(&path).map_err(|e| SpecError::Io(path.display().to_string(), e.to_string()))?;
                Ok(serde_json::from_str(&text)?)
            }
        }
    }
}

/// `"partial_traces"` for the whole space `H⁰(B, (Jᵖ)*)`, or a list of traces
/// given by name (from B's file) or by values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TraceSelection {
    Keyword(String),
    List(Vec<TraceChoice>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TraceChoice {
    Name(String),
    Explicit(TraceEntry),
}

/// One term `coeff · (m ⊗ X₁∧…∧X_p)`; `m` is a module label (a trace name).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieTerm {
    pub trace: String,
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default = "one")]
    pub coeff: String,
}

fn one() -> String {
    "1".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleTerm {
    pub tuple: Vec<String>,
    #[serde(default = "one")]
    pub coeff: String,
}

/// An elementary tensor `x₀ ⊗ … ⊗ x_p` or a sum of basis tuples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HochschildSpec {
    Tensor(Vec<Coeffs>),
    Terms(Vec<TupleTerm>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingSetup {
    /// Source algebra; omitted means `A = B` with the identity map.
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Source<AlgebraSpec>>,
    #[serde(rename = "B")]
    pub b: Source<AlgebraSpec>,
    /// Images of A's basis in B.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<BTreeMap<String, Coeffs>>,
    pub lie_rinehart: Source<LieRinehartSpec>,
    /// Generators of J; empty means `J = B`.
    #[serde(rename = "J_generators", default)]
    pub j_generators: Vec<Coeffs>,
    pub p: usize,
    pub trace: TraceSelection,
    pub lie_chain: Vec<LieTerm>,
    pub hochschild: HochschildSpec,
}

/// The Hochschild argument, kept as a tensor when given as one.
#[derive(Clone, Debug)]
pub enum HochschildInput {
    Tensor(Vec<Element>),
    Chain(HochschildChain),
}

impl HochschildInput {
    pub fn chain(&self) -> Result<HochschildChain, SpecError> {
        match self {
            HochschildInput::Chain(c) => Ok(c.clone()),
            HochschildInput::Tensor(f) => HochschildChain::from_tensor(f).map_err(|e| SpecError::Invalid(e.to_string())),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            HochschildInput::Chain(c) => c.degree(),
            HochschildInput::Tensor(f) => f.len().saturating_sub(1),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LoadedSetup {
    pub ctx: PairingContext,
    pub b: StandardAlgebra,
    pub lie_chain: LRChain,
    pub hochschild: HochschildInput,
}

fn invalid(e: impl std::fmt::Display) -> SpecError {
    SpecError::Invalid(e.to_string())
}

impl PairingSetup {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("setup serialises")
    }

    /// Reads and builds a setup file; relative paths inside resolve against its directory.
    pub fn load(path: &Path) -> Result<(Self, LoadedSetup), SpecError> {
        let text = std::fs::read_to_string(path).map_err(|e| SpecError::Io(path.display().to_string(), e.to_string()))?;
        let setup = Self::from_json(&text)?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
        let loaded = setup.build(&dir)?;
        Ok((setup, loaded))
    }

    pub fn build(&self, dir: &Path) -> Result<LoadedSetup, SpecError> {
        let lr_spec = self.lie_rinehart.resolve(dir)?;
        let mut b_spec = self.b.resolve(dir)?;
        let first = b_spec.build()?;
        let lr = lr_spec.build(Some(&first))?;
        // The pair may force a wider backend than B's own literals.
        let b = if lr.backend() != first.algebra.backend() {
            b_spec.backend = Some(lr.backend());
            let b = b_spec.build()?;
            lr_spec.build(Some(&b))?;
            b
        } else {
            first
        };
        let lr = lr_spec.build(Some(&b))?;
        let alg = &b.algebra;
        let backend = alg.backend();
        let j_gens = self.j_generators.iter().map(|c| element_from_coeffs(alg, c)).collect::<Result<Vec<_>, _>>()?;

        let (a, phi) = match (&self.a, &self.phi) {
            (None, None) => (None, None),
            (Some(a), Some(map)) => {
                let mut a_spec = a.resolve(dir)?;
                a_spec.backend = Some(backend);
                let a_alg = a_spec.build()?.algebra;
                let mut images = BTreeMap::new();
                for (k, v) in map {
                    images.insert(id_of(&a_alg, k)?, element_from_coeffs(alg, v)?);
                }
                (Some(a_alg), Some(images))
            }
            _ => return Err(SpecError::Invalid("\"A\" and \"phi\" must be given together".into())),
        };

        let ctx = match &self.trace {
            TraceSelection::Keyword(k) if k == "partial_traces" => {
                if a.is_some() {
                    let jp = if j_gens.is_empty() {
                        crate::superalgebra::IdealPower::whole_finite(alg, self.p)?
                    } else {
                        crate::superalgebra::ideal_power_basis(alg, &j_gens, self.p)?
                    };
                    let module = crate::lie_rinehart::trace_module(alg, &jp, &lr).map_err(invalid)?;
                    PairingContext::new(a, alg.clone(), phi, &j_gens, self.p, lr, module).map_err(invalid)?
                } else {
                    PairingContext::with_partial_traces(alg.clone(), &j_gens, self.p, lr).map_err(invalid)?
                }
            }
            TraceSelection::Keyword(k) => return Err(SpecError::Invalid(format!("unknown trace selection {k:?}"))),
            TraceSelection::List(list) => {
                let mut traces = Vec::new();
                for t in list {
                    traces.push(match t {
                        TraceChoice::Name(n) => b.trace(n).cloned().ok_or_else(|| SpecError::Invalid(format!("B has no trace named {n:?}")))?,
                        TraceChoice::Explicit(e) => {
                            let mut values = BasisFunctional::new();
                            for (k, v) in &e.values {
                                values.insert(id_of(alg, k)?, literal_in(v, backend)?);
                            }
                            PartialTrace::new(e.name.clone(), values)
                        }
                    });
                }
                let module = crate::lie_rinehart::trace_module_from(alg, traces, &lr).map_err(invalid)?;
                PairingContext::new(a, alg.clone(), phi, &j_gens, self.p, lr, module).map_err(invalid)?
            }
        };

        let mut lie_chain = LRChain::zero(backend, self.p);
        for t in &self.lie_chain {
            let m = ctx.module().index_of(&t.trace).ok_or_else(|| {
                SpecError::Invalid(format!("{:?} is not a module label; available: {}", t.trace, ctx.module().labels().join(", ")))
            })?;
            if t.generators.len() != self.p {
                return Err(SpecError::Invalid(format!("a Lie chain term needs {} generators", self.p)));
            }
            let gens = t
                .generators
                .iter()
                .map(|g| ctx.lr().index_of(g).ok_or_else(|| SpecError::Invalid(format!("unknown generator {g:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            lie_chain.add_scaled(&LRChain::monomial(ctx.lr(), m, &gens), &literal_in(&t.coeff, backend)?);
        }

        let source = ctx.source();
        let hochschild = match &self.hochschild {
            HochschildSpec::Tensor(fs) => HochschildInput::Tensor(fs.iter().map(|c| element_from_coeffs(source, c)).collect::<Result<_, _>>()?),
            HochschildSpec::Terms(ts) => {
                let degree = ts.first().map(|t| t.tuple.len().saturating_sub(1)).unwrap_or(self.p);
                let mut c = HochschildChain::zero(backend, degree);
                for t in ts {
                    if t.tuple.len() != degree + 1 {
                        return Err(SpecError::Invalid("all tuples must have the same length".into()));
                    }
                    let tuple = t.tuple.iter().map(|l| id_of(source, l)).collect::<Result<Vec<_>, _>>()?;
                    c.add_term(tuple, literal_in(&t.coeff, backend)?);
                }
                HochschildInput::Chain(c)
            }
        };
        Ok(LoadedSetup { ctx, b, lie_chain, hochschild })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::{pair, pair_tensor};
    use crate::scalar::{Backend, Scalar};

    fn build(text: &str) -> Result<LoadedSetup, SpecError> {
        PairingSetup::from_json(text)?.build(Path::new("."))
    }

    #[test]
    fn matrix_setup_pairs_to_minus_one() {
        let text = r#"{
            "B": {"standard": {"kind": "matrix", "n": 2}, "derivations": [{"name": "ad", "inner": {"E11": "1"}}]},
            "lie_rinehart": {"L_basis": [{"id": "X", "parity": 0}], "action": {"X": "ad"}},
            "p": 1,
            "trace": ["trace"],
            "lie_chain": [{"trace": "trace", "generators": ["X"]}],
            "hochschild": {"tensor": [{"E12": "1"}, {"E21": "1"}]}
        }"#;
        let s = build(text).unwrap();
        let HochschildInput::Tensor(f) = &s.hochschild else { panic!() };
        let v = pair_tensor(&s.ctx, &s.lie_chain, f).unwrap();
        assert_eq!(v.value, Scalar::from_i64(Backend::Rational, -1));
        let terms = r#"{
            "B": {"standard": {"kind": "matrix", "n": 2}, "derivations": [{"name": "ad", "inner": {"E11": "1"}}]},
            "lie_rinehart": {"L_basis": [{"id": "X", "parity": 0}], "action": {"X": "ad"}},
            "p": 1,
            "trace": [{"name": "t", "values": {"E11": "1", "E22": "1"}}],
            "lie_chain": [{"trace": "t", "generators": ["X"], "coeff": "2"}],
            "hochschild": {"terms": [{"tuple": ["E12", "E21"]}]}
        }"#;
        let s = build(terms).unwrap();
        let v = pair(&s.ctx, &s.lie_chain, &s.hochschild.chain().unwrap()).unwrap();
        assert_eq!(v.value, Scalar::from_i64(Backend::Rational, -2));
    }

    #[test]
    fn round_trips_and_rejects() {
        let text = r#"{"B": "missing.json", "lie_rinehart": {"L_basis": []}, "p": 0, "trace": "partial_traces",
            "lie_chain": [], "hochschild": {"tensor": [{"1": "1"}]}}"#;
        let s = PairingSetup::from_json(text).unwrap();
        assert_eq!(PairingSetup::from_json(&s.to_json()).unwrap(), s);
        assert!(matches!(s.build(Path::new("/nonexistent")), Err(SpecError::Io(..))));
        let bad = r#"{"B": {"standard": {"kind": "matrix", "n": 2}}, "lie_rinehart": {"L_basis": []}, "p": 0,
            "trace": "everything", "lie_chain": [], "hochschild": {"tensor": [{"E11": "1"}]}}"#;
        assert!(build(bad).is_err());
    }
}
