use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::BasisId;
use crate::scalar::{Backend, Scalar, ScalarError};

/// Finite linear combination of basis elements with zero coefficients pruned.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    backend: Backend,
    terms: BTreeMap<BasisId, Scalar>,
}

impl Element {
    pub fn zero(backend: Backend) -> Self {
        Self { backend, terms: BTreeMap::new() }
    }

    pub fn basis(backend: Backend, id: BasisId) -> Self {
        Self::monomial(id, Scalar::one(backend))
    }

    pub fn monomial(id: BasisId, coeff: Scalar) -> Self {
        let mut e = Self::zero(coeff.backend());
        e.add_term(id, coeff);
        e
    }

    pub fn from_terms<I>(backend: Backend, terms: I) -> Result<Self, ScalarError>
    where
        I: IntoIterator<Item = (BasisId, Scalar)>,
    {
        let mut e = Self::zero(backend);
        for (id, c) in terms {
            if c.backend() != backend {
                return Err(ScalarError::Mixed(backend, c.backend()));
            }
            e.add_term(id, c);
        }
        Ok(e)
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

    pub fn terms(&self) -> impl Iterator<Item = (&BasisId, &Scalar)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = BasisId> + '_ {
        self.terms.keys().copied()
    }

    pub fn coeff(&self, id: BasisId) -> Scalar {
        self.terms.get(&id).cloned().unwrap_or_else(|| Scalar::zero(self.backend))
    }

    /// Adds `c · id`. Panics on a backend mismatch.
    pub fn add_term(&mut self, id: BasisId, c: Scalar) {
        if c.is_zero() {
            return;
        }
        assert_eq!(c.backend(), self.backend, "scalar backend mismatch");
        match self.terms.get_mut(&id) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&id);
                }
            }
            None => {
                self.terms.insert(id, c);
            }
        }
    }

    /// `self += k · other`.
    pub fn add_scaled(&mut self, other: &Element, k: &Scalar) {
        for (id, c) in &other.terms {
            self.add_term(*id, c * k);
        }
    }

    pub fn scale(&self, k: &Scalar) -> Element {
        let mut out = Element::zero(self.backend);
        out.add_scaled(self, k);
        out
    }

    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude of `self − other`.
    pub fn distance(&self, other: &Element) -> f64 {
        (self - other).max_magnitude()
    }

    /// Drops coefficients below `tol` in magnitude.
    pub fn pruned(&self, tol: f64) -> Element {
        Element {
            backend: self.backend,
            terms: self.terms.iter().filter(|(_, c)| !c.is_negligible(tol)).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    /// Converts every coefficient to `target`, if representable.
    pub fn promote(&self, target: Backend) -> Option<Element> {
        let mut out = Element::zero(target);
        for (id, c) in &self.terms {
            out.add_term(*id, c.promote(target)?);
        }
        Some(out)
    }
}

impl<'a> Add<&'a Element> for &'a Element {
    type Output = Element;
    fn add(self, rhs: &'a Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one(self.backend));
        out
    }
}

impl<'a> Sub<&'a Element> for &'a Element {
    type Output = Element;
    fn sub(self, rhs: &'a Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::from_i64(self.backend, -1));
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&Scalar::from_i64(self.backend, -1))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (id, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {id}")?;
        }
        Ok(())
    }
}
