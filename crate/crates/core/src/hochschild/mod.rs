//! Hochschild chains with Koszul signs, the cyclic operators `b, t, N, s, B`,
//! and Hochschild/cyclic homology of finite algebras.

mod complex;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::LinalgError;
use crate::scalar::{Backend, Scalar, ScalarError};
use crate::superalgebra::{AlgebraError, BasedSuperAlgebra, BasisId, Element};

pub use complex::{
    b_matrix, certify_in_ker_b, certify_tensor_in_ker_b, chain_from_vector, chain_to_vector, hc_dim, hh_dim, is_cyclic_boundary, ker_b_in_hc,
    operator_matrix, tuple_count, CyclicClassRep,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HochschildError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("cyclic homology needs an exact backend")]
    ApproxBackend,
    #[error("chain is not a cycle of the cyclic complex")]
    NotCyclicCycle,
    #[error("B of the chain is not a Hochschild boundary")]
    NotInKerB,
    #[error("computation too large: {0}")]
    TooLarge(String),
}

/// Which chain-level model of Connes' operator to use.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BVariant {
    /// `B = (1 − t) s N`.
    #[default]
    Full,
    /// `B = s N`, the normalized-complex formula.
    Normalized,
}

impl fmt::Display for BVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BVariant::Full => "full",
            BVariant::Normalized => "normalized",
        })
    }
}

pub type Tuple = Vec<BasisId>;

/// Element of `A^{⊗(p+1)}` as a coefficient map on basis tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct HochschildChain {
    degree: usize,
    backend: Backend,
    terms: BTreeMap<Tuple, Scalar>,
}

impl HochschildChain {
    pub fn zero(backend: Backend, degree: usize) -> Self {
        Self { degree, backend, terms: BTreeMap::new() }
    }

    /// A single basis tensor with coefficient one.
    pub fn basis_tuple(backend: Backend, tuple: Tuple) -> Self {
        assert!(!tuple.is_empty(), "a Hochschild tuple has at least one factor");
        let mut c = Self::zero(backend, tuple.len() - 1);
        c.add_term(tuple, Scalar::one(backend));
        c
    }

    /// Multilinear expansion of `x₀ ⊗ … ⊗ x_p`.
    pub fn from_tensor(factors: &[Element]) -> Result<Self, HochschildError> {
        let Some(first) = factors.first() else {
            return Err(HochschildError::Degree("empty tensor".into()));
        };
        let backend = first.backend();
        let mut partial: Vec<(Tuple, Scalar)> = vec![(Vec::new(), Scalar::one(backend))];
        for f in factors {
            if f.backend() != backend {
                return Err(ScalarError::Mixed(backend, f.backend()).into());
            }
            let mut next = Vec::with_capacity(partial.len() * f.len());
            for (tup, c) in &partial {
                for (id, x) in f.terms() {
                    let mut t = tup.clone();
                    t.push(*id);
                    next.push((t, c * x));
                }
            }
            partial = next;
        }
        let mut out = Self::zero(backend, factors.len() - 1);
        for (t, c) in partial {
            out.add_term(t, c);
        }
        Ok(out)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tuple, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, tuple: &[BasisId]) -> Scalar {
        self.terms.get(tuple).cloned().unwrap_or_else(|| Scalar::zero(self.backend))
    }

    pub fn add_term(&mut self, tuple: Tuple, c: Scalar) {
        assert_eq!(tuple.len(), self.degree + 1, "tuple length must be degree + 1");
        if c.is_zero() {
            return;
        }
        assert_eq!(c.backend(), self.backend, "scalar backend mismatch");
        match self.terms.get_mut(&tuple) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&tuple);
                }
            }
            None => {
                self.terms.insert(tuple, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &HochschildChain, k: &Scalar) {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        for (t, c) in &other.terms {
            self.add_term(t.clone(), c * k);
        }
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        let mut out = Self::zero(self.backend, self.degree);
        out.add_scaled(self, k);
        out
    }

    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Verifies backend and basis membership against an algebra.
    pub fn check(&self, alg: &BasedSuperAlgebra) -> Result<(), HochschildError> {
        if self.backend != alg.backend() {
            return Err(ScalarError::Mixed(alg.backend(), self.backend).into());
        }
        for t in self.terms.keys() {
            for id in t {
                if !alg.contains_id(*id) {
                    return Err(AlgebraError::UnknownBasis(id.to_string(), alg.name().to_string()).into());
                }
            }
        }
        Ok(())
    }

    /// Each term as a list of basis elements with its coefficient.
    pub fn monomials(&self) -> impl Iterator<Item = (Vec<Element>, &Scalar)> + '_ {
        self.terms.iter().map(move |(t, c)| (t.iter().map(|id| Element::basis(self.backend, *id)).collect(), c))
    }

    /// Applies a map on basis tuples producing weighted tuples.
    fn map_terms<F>(&self, degree: usize, mut f: F) -> Self
    where
        F: FnMut(&[BasisId], &mut dyn FnMut(Tuple, Scalar)),
    {
        let mut out = Self::zero(self.backend, degree);
        for (t, c) in &self.terms {
            f(t, &mut |tup, x| out.add_term(tup, c * &x));
        }
        out
    }
}

impl<'a> Add<&'a HochschildChain> for &'a HochschildChain {
    type Output = HochschildChain;
    fn add(self, rhs: &'a HochschildChain) -> HochschildChain {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one(self.backend));
        out
    }
}

impl<'a> Sub<&'a HochschildChain> for &'a HochschildChain {
    type Output = HochschildChain;
    fn sub(self, rhs: &'a HochschildChain) -> HochschildChain {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::from_i64(self.backend, -1));
        out
    }
}

fn parity_bits(alg: &BasedSuperAlgebra, ids: &[BasisId]) -> Result<u32, AlgebraError> {
    let mut s = 0;
    for id in ids {
        s += alg.parity(*id)?.bit() as u32;
    }
    Ok(s)
}

/// Sign `(−1)^p ε` of moving the last factor to the front.
fn rotation_negates(alg: &BasedSuperAlgebra, t: &[BasisId]) -> Result<bool, AlgebraError> {
    let p = t.len() - 1;
    let last = alg.parity(t[p])?.bit() as u32;
    let rest = parity_bits(alg, &t[..p])?;
    Ok((p as u32 + last * rest) % 2 == 1)
}

/// Hochschild boundary `b`.
pub fn hoch_b(alg: &BasedSuperAlgebra, c: &HochschildChain) -> Result<HochschildChain, HochschildError> {
    if c.degree == 0 {
        return Err(HochschildError::Degree("b is not defined on degree 0".into()));
    }
    c.check(alg)?;
    let p = c.degree;
    let mut failure = None;
    let out = c.map_terms(p - 1, |t, emit| {
        for i in 0..p {
            for (id, x) in alg.mul_basis(t[i], t[i + 1]).terms() {
                let mut nt = Vec::with_capacity(p);
                nt.extend_from_slice(&t[..i]);
                nt.push(*id);
                nt.extend_from_slice(&t[i + 2..]);
                emit(nt, x.clone().signed(i % 2 == 1));
            }
        }
        match rotation_negates(alg, t) {
            Ok(neg) => {
                for (id, x) in alg.mul_basis(t[p], t[0]).terms() {
                    let mut nt = Vec::with_capacity(p);
                    nt.push(*id);
                    nt.extend_from_slice(&t[1..p]);
                    emit(nt, x.clone().signed(neg));
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(out),
    }
}

/// Cyclic operator `t(a₀⊗…⊗a_p) = (−1)^p ε a_p⊗a₀⊗…⊗a_{p−1}`.
pub fn cyclic_t(alg: &BasedSuperAlgebra, c: &HochschildChain) -> Result<HochschildChain, HochschildError> {
    c.check(alg)?;
    let p = c.degree;
    let one = Scalar::one(c.backend);
    let mut failure = None;
    let out = c.map_terms(p, |t, emit| match rotation_negates(alg, t) {
        Ok(neg) => {
            let mut nt = Vec::with_capacity(p + 1);
            nt.push(t[p]);
            nt.extend_from_slice(&t[..p]);
            emit(nt, one.clone().signed(neg));
        }
        Err(e) => failure = Some(e),
    });
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(out),
    }
}

/// `N = Σ_{k=0}^{p} t^k`.
pub fn norm_n(alg: &BasedSuperAlgebra, c: &HochschildChain) -> Result<HochschildChain, HochschildError> {
    let mut acc = c.clone();
    let mut cur = c.clone();
    for _ in 0..c.degree {
        cur = cyclic_t(alg, &cur)?;
        acc = &acc + &cur;
    }
    Ok(acc)
}

/// Extra degeneracy `s(a₀⊗…⊗a_p) = 1⊗a₀⊗…⊗a_p`.
pub fn extra_degeneracy_s(alg: &BasedSuperAlgebra, c: &HochschildChain) -> Result<HochschildChain, HochschildError> {
    c.check(alg)?;
    let unit = alg.unit();
    Ok(c.map_terms(c.degree + 1, |t, emit| {
        for (id, x) in unit.terms() {
            let mut nt = Vec::with_capacity(t.len() + 1);
            nt.push(*id);
            nt.extend_from_slice(t);
            emit(nt, x.clone());
        }
    }))
}

/// Connes' operator in the selected chain model.
pub fn connes_b(alg: &BasedSuperAlgebra, c: &HochschildChain, variant: BVariant) -> Result<HochschildChain, HochschildError> {
    let sn = extra_degeneracy_s(alg, &norm_n(alg, c)?)?;
    match variant {
        BVariant::Normalized => Ok(sn),
        BVariant::Full => Ok(&sn - &cyclic_t(alg, &sn)?),
    }
}

/// `(1 − t) c`.
pub fn one_minus_t(alg: &BasedSuperAlgebra, c: &HochschildChain) -> Result<HochschildChain, HochschildError> {
    Ok(c - &cyclic_t(alg, c)?)
}
