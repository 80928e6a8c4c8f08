//! Super Lie–Rinehart pairs `(L, R)`, right modules, the chain spaces
//! `M ⊗_R Λᵖ_R L` and their boundary.

mod chains;
mod module;
pub mod spec_file;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::linalg::{coordinates_in_span, LinalgError};
use crate::scalar::{Backend, Scalar, ScalarError};
use crate::superalgebra::{AlgebraError, BasedSuperAlgebra, BasisId, Element, Parity, SuperDerivation};

pub use chains::{
    boundary_matrix, chain_basis, classify_chain, invariants, lr_boundary, lr_homology_dim, wedge_normalize, wedge_sign, ChainClass,
    LRChain,
};
pub(crate) use chains::{boundary_terms, BoundaryFactor};
pub use module::{trace_module, trace_module_from, ModuleMap, RightModule};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LrError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("{axiom} fails: {detail}")]
    Axiom { axiom: &'static str, detail: String },
    #[error("degree error: {0}")]
    Degree(String),
    #[error("module does not match the pair: {0}")]
    Module(String),
    #[error("homology solvers need an even base ring; {0} has odd elements")]
    OddBase(String),
    #[error("action does not preserve the ideal power: {0}")]
    NotPreserved(String),
    #[error("the action does not preserve vanishing on supercommutators: {0}")]
    NotWellDefined(String),
}

/// A homogeneous basis element of `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LGenerator {
    pub name: String,
    pub parity: Parity,
}

impl LGenerator {
    pub fn new(name: impl Into<String>, parity: Parity) -> Self {
        Self { name: name.into(), parity }
    }
}

/// An element of `L` as R-coefficients on the generators.
pub type LElement = BTreeMap<usize, Element>;

/// `[X, Y] = Σ c·Z` given by generator names.
pub type NamedBracket<'a> = (&'a str, &'a str, Vec<(&'a str, Scalar)>);

/// A super Lie–Rinehart pair with free `L` on homogeneous generators.
///
/// Generators are kept sorted by `(parity, name)`; that order is the normal
/// form order of wedge monomials.
#[derive(Clone, Debug)]
pub struct SuperLieRinehart {
    base: BasedSuperAlgebra,
    gens: Vec<LGenerator>,
    bracket: BTreeMap<(usize, usize), LElement>,
    anchor: Vec<Option<SuperDerivation>>,
    action: Vec<Option<SuperDerivation>>,
}

/// Bracket data `[left, right] = Σ coeff · gen` with coefficients in R.
#[derive(Clone, Debug)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub result: Vec<(String, Element)>,
}

impl SuperLieRinehart {
    pub fn new(
        base: BasedSuperAlgebra,
        mut gens: Vec<LGenerator>,
        brackets: Vec<BracketEntry>,
        mut anchor: BTreeMap<String, SuperDerivation>,
        mut action: BTreeMap<String, SuperDerivation>,
    ) -> Result<Self, LrError> {
        gens.sort_by(|a, b| (a.parity, &a.name).cmp(&(b.parity, &b.name)));
        for w in gens.windows(2) {
            if w[0].name == w[1].name {
                return Err(LrError::Axiom { axiom: "distinct generators", detail: w[0].name.clone() });
            }
        }
        let index = |n: &str| gens.iter().position(|g| g.name == n).ok_or_else(|| LrError::UnknownGenerator(n.to_string()));
        let mut bracket: BTreeMap<(usize, usize), LElement> = BTreeMap::new();
        for entry in &brackets {
            let (i, j) = (index(&entry.left)?, index(&entry.right)?);
            let mut value = LElement::new();
            for (name, coeff) in &entry.result {
                base.check_element(coeff)?;
                let k = index(name)?;
                let slot = value.entry(k).or_insert_with(|| Element::zero(base.backend()));
                *slot = &*slot + coeff;
            }
            value.retain(|_, c| !c.is_zero());
            let swapped = scale_l(&value, &Scalar::from_i64(base.backend(), swap_factor(gens[i].parity, gens[j].parity)));
            for (key, v) in [((i, j), value), ((j, i), swapped)] {
                match bracket.get(&key) {
                    Some(old) if !same_l(old, &v) => {
                        return Err(LrError::Axiom {
                            axiom: "graded antisymmetry",
                            detail: format!("[{}, {}] given inconsistently", gens[key.0].name, gens[key.1].name),
                        })
                    }
                    _ => {
                        if !v.is_empty() {
                            bracket.insert(key, v);
                        }
                    }
                }
            }
        }
        let take = |m: &mut BTreeMap<String, SuperDerivation>| -> Result<Vec<Option<SuperDerivation>>, LrError> {
            if let Some(extra) = m.keys().find(|k| index(k).is_err()) {
                return Err(LrError::UnknownGenerator(extra.clone()));
            }
            Ok(gens.iter().map(|g| m.remove(&g.name)).collect())
        };
        let anchor = take(&mut anchor)?;
        let action = take(&mut action)?;
        let lr = Self { base, gens, bracket, anchor, action };
        lr.validate()?;
        Ok(lr)
    }

    /// An ordinary or super Lie algebra over the ground field.
    pub fn lie_algebra(backend: Backend, gens: Vec<LGenerator>, brackets: &[NamedBracket]) -> Result<Self, LrError> {
        let base = BasedSuperAlgebra::ground_field(backend);
        let one = BasisId::Idx(0);
        let entries = brackets
            .iter()
            .map(|(l, r, res)| BracketEntry {
                left: l.to_string(),
                right: r.to_string(),
                result: res.iter().map(|(n, c)| (n.to_string(), Element::monomial(one, c.clone()))).collect(),
            })
            .collect();
        Self::new(base, gens, entries, BTreeMap::new(), BTreeMap::new())
    }

    /// The Lie superalgebra spanned by homogeneous elements of a finite algebra
    /// under the supercommutator, acting on that algebra by inner derivations.
    pub fn inner(alg: &BasedSuperAlgebra, elements: &[(&str, Element)]) -> Result<Self, LrError> {
        let backend = alg.backend();
        let dense: Vec<Vec<Scalar>> = elements.iter().map(|(_, e)| alg.to_dense(e)).collect::<Result<_, _>>()?;
        let mut gens = Vec::new();
        let mut action = BTreeMap::new();
        for (name, e) in elements {
            let d = SuperDerivation::inner(*name, alg, e.clone())?;
            gens.push(LGenerator::new(*name, d.parity));
            action.insert(name.to_string(), d);
        }
        let one = BasisId::Idx(0);
        let mut brackets = Vec::new();
        for (a, x) in elements {
            for (b, y) in elements {
                let c = alg.super_commutator(x, y)?;
                let coords = coordinates_in_span(&alg.to_dense(&c)?, &dense)?.ok_or_else(|| LrError::Axiom {
                    axiom: "closure under the supercommutator",
                    detail: format!("[{a}, {b}] leaves the span"),
                })?;
                let result = elements
                    .iter()
                    .zip(coords)
                    .filter(|(_, k)| !k.is_zero())
                    .map(|((n, _), k)| (n.to_string(), Element::monomial(one, k)))
                    .collect();
                brackets.push(BracketEntry { left: a.to_string(), right: b.to_string(), result });
            }
        }
        Self::new(BasedSuperAlgebra::ground_field(backend), gens, brackets, BTreeMap::new(), action)
    }

    /// Attaches (or replaces) the action of generators on an auxiliary algebra.
    pub fn with_action(mut self, action: BTreeMap<String, SuperDerivation>) -> Result<Self, LrError> {
        let mut action = action;
        if let Some(extra) = action.keys().find(|k| self.index_of(k).is_none()) {
            return Err(LrError::UnknownGenerator(extra.clone()));
        }
        self.action = self.gens.iter().map(|g| action.remove(&g.name)).collect();
        Ok(self)
    }

    pub fn base(&self) -> &BasedSuperAlgebra {
        &self.base
    }

    pub fn backend(&self) -> Backend {
        self.base.backend()
    }

    pub fn generators(&self) -> &[LGenerator] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.gens[i].parity
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn action(&self, i: usize) -> Option<&SuperDerivation> {
        self.action[i].as_ref()
    }

    pub fn anchor(&self, i: usize) -> Option<&SuperDerivation> {
        self.anchor[i].as_ref()
    }

    /// Whether the base ring is the ground field.
    pub fn over_ground_field(&self) -> bool {
        self.base.dim() == Some(1)
    }

    /// `[X_i, X_j]` on generators.
    pub fn bracket_gens(&self, i: usize, j: usize) -> LElement {
        self.bracket.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Anchor of a generator applied to an element of R.
    pub fn anchor_apply(&self, i: usize, r: &Element) -> Result<Element, LrError> {
        match &self.anchor[i] {
            Some(d) => Ok(d.apply(&self.base, r)?),
            None => Ok(Element::zero(self.backend())),
        }
    }

    fn l_anchor_apply(&self, x: &LElement, r: &Element) -> Result<Element, LrError> {
        let mut out = Element::zero(self.backend());
        for (i, c) in x {
            out = &out + &self.base.mul(c, &self.anchor_apply(*i, r)?)?;
        }
        Ok(out)
    }

    /// Bracket of arbitrary elements over an even base ring:
    /// `[rX, sY] = rs[X,Y] + r X(s) Y − (−1)^{|X||Y|} s Y(r) X`.
    pub fn bracket(&self, a: &LElement, b: &LElement) -> Result<LElement, LrError> {
        let mut out = LElement::new();
        for (i, r) in a {
            for (j, s) in b {
                let rs = self.base.mul(r, s)?;
                for (k, c) in self.bracket_gens(*i, *j) {
                    add_l(&mut out, k, &self.base.mul(&rs, &c)?);
                }
                add_l(&mut out, *j, &self.base.mul(r, &self.anchor_apply(*i, s)?)?);
                let y_r = self.base.mul(s, &self.anchor_apply(*j, r)?)?;
                let sign = swap_factor(self.parity(*i), self.parity(*j));
                add_l(&mut out, *i, &y_r.scale(&Scalar::from_i64(self.backend(), sign)));
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    fn gen(&self, i: usize) -> LElement {
        LElement::from([(i, self.base.unit())])
    }

    fn validate(&self) -> Result<(), LrError> {
        let n = self.rank();
        let r_basis = self.base.basis()?;
        let even_base = r_basis.iter().all(|b| self.base.parity(*b) == Ok(Parity::Even));
        for i in 0..n {
            if !self.parity(i).is_odd() && !self.bracket_gens(i, i).is_empty() {
                return Err(LrError::Axiom { axiom: "graded antisymmetry", detail: format!("[{0}, {0}] ≠ 0 for even {0}", self.gens[i].name) });
            }
        }
        if !even_base {
            // Jacobi and anchor checks below assume an even base ring.
            return Ok(());
        }
        let sign = |a: usize, b: usize| Scalar::from_i64(self.backend(), if self.parity(a).koszul(self.parity(b)) { -1 } else { 1 });
        for i in 0..n {
            for j in 0..n {
                let xy = self.bracket(&self.gen(i), &self.gen(j))?;
                for k in 0..n {
                    // [X,[Y,Z]] = [[X,Y],Z] + (−1)^{|X||Y|}[Y,[X,Z]]
                    let lhs = self.bracket(&self.gen(i), &self.bracket(&self.gen(j), &self.gen(k))?)?;
                    let mut rhs = self.bracket(&xy, &self.gen(k))?;
                    let third = self.bracket(&self.gen(j), &self.bracket(&self.gen(i), &self.gen(k))?)?;
                    for (g, c) in third {
                        add_l(&mut rhs, g, &c.scale(&sign(i, j)));
                    }
                    rhs.retain(|_, c| !c.is_zero());
                    if !same_l(&lhs, &rhs) {
                        return Err(LrError::Axiom {
                            axiom: "graded Jacobi identity",
                            detail: format!("on ({}, {}, {})", self.gens[i].name, self.gens[j].name, self.gens[k].name),
                        });
                    }
                }
                for &b in &r_basis {
                    let r = Element::basis(self.backend(), b);
                    let lhs = self.l_anchor_apply(&xy, &r)?;
                    let xy_r = self.anchor_apply(i, &self.anchor_apply(j, &r)?)?;
                    let yx_r = self.anchor_apply(j, &self.anchor_apply(i, &r)?)?;
                    let rhs = &xy_r - &yx_r.scale(&sign(i, j));
                    if !self.base.same(&lhs, &rhs) {
                        return Err(LrError::Axiom {
                            axiom: "anchor is a homomorphism",
                            detail: format!("on ({}, {})", self.gens[i].name, self.gens[j].name),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// `−(−1)^{|X||Y|}` as an integer.
fn swap_factor(a: Parity, b: Parity) -> i64 {
    if a.koszul(b) {
        1
    } else {
        -1
    }
}

fn scale_l(x: &LElement, k: &Scalar) -> LElement {
    x.iter().map(|(g, c)| (*g, c.scale(k))).filter(|(_, c)| !c.is_zero()).collect()
}

fn add_l(x: &mut LElement, g: usize, c: &Element) {
    if c.is_zero() {
        return;
    }
    let slot = x.entry(g).or_insert_with(|| Element::zero(c.backend()));
    *slot = &*slot + c;
}

fn same_l(a: &LElement, b: &LElement) -> bool {
    let nz = |x: &LElement| x.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (*k, c.clone())).collect::<Vec<_>>();
    nz(a) == nz(b)
}

#[cfg(test)]
mod tests;
