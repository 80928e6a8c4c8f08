//! Based ℤ/2-graded associative algebras and the data living on them:
//! elements, super-derivations, ideal powers and partial traces.

mod derivation;
mod element;
mod ideal;
pub mod spec_file;
mod standard;
mod subalgebra;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{LinalgError, SparseRow};
use crate::scalar::{Backend, Scalar, ScalarError};

pub use derivation::{check_leibniz, DerivationRule, SuperDerivation};
pub use element::Element;
pub use ideal::{ideal_power_basis, partial_trace_space, IdealPower, PartialTrace};
pub use standard::{build_standard_algebra, StandardAlgebra, StandardKind};
pub use subalgebra::{generated_subalgebra, Subalgebra};

/// ℤ/2 degree of a homogeneous symbol.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Self {
        if bit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Whether transposing two symbols of these parities produces a minus sign.
    pub fn koszul(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

/// Identifier of a basis element.
///
/// Finite algebras use positional indices; the quantum torus uses `U^m V^n ↦ Z2(m, n)`
/// and the Laurent polynomial algebra `z^n ↦ Z(n)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisId {
    Idx(usize),
    Z(i64),
    Z2(i64, i64),
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisId::Idx(i) => write!(f, "#{i}"),
            BasisId::Z(n) => write!(f, "z^{n}"),
            BasisId::Z2(m, n) => write!(f, "U^{m}V^{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("basis element {0} does not belong to algebra {1}")]
    UnknownBasis(String, String),
    #[error("operation requires a finite-dimensional algebra, {0} is not")]
    NotFinite(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{axiom} fails: {detail}")]
    Axiom { axiom: &'static str, detail: String },
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("element is not in the ideal power J^{0}")]
    NotInIdeal(usize),
    #[error("derivation {0} cannot be applied here: {1}")]
    Derivation(String, String),
}

#[derive(Clone, Debug)]
struct FiniteTable {
    labels: Vec<String>,
    parities: Vec<Parity>,
    unit: Element,
    /// Product of basis elements `i · j` at index `i * n + j`.
    products: Vec<Element>,
}

#[derive(Clone, Debug)]
enum Structure {
    Finite(FiniteTable),
    /// `U V = e^{2πiθ} V U`, basis `U^m V^n`.
    QuantumTorus { theta: f64 },
    /// Laurent polynomials `ℂ[z, z⁻¹]`, basis `z^n`.
    Laurent,
}

/// A ℤ/2-graded associative algebra presented by a basis and a product rule.
#[derive(Clone, Debug)]
pub struct BasedSuperAlgebra {
    name: String,
    backend: Backend,
    structure: Structure,
}

impl BasedSuperAlgebra {
    /// Finite-dimensional algebra from a product table. Validates the unit
    /// laws, parity additivity and associativity on every basis triple.
    pub fn finite<F>(
        name: impl Into<String>,
        backend: Backend,
        labels: Vec<String>,
        parities: Vec<Parity>,
        unit: Element,
        product: F,
    ) -> Result<Self, AlgebraError>
    where
        F: Fn(usize, usize) -> Element,
    {
        let n = labels.len();
        if parities.len() != n {
            return Err(AlgebraError::InvalidParameter("labels and parities differ in length".into()));
        }
        if n == 0 {
            return Err(AlgebraError::InvalidParameter("empty basis".into()));
        }
        let mut products = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                products.push(product(i, j));
            }
        }
        let alg = Self {
            name: name.into(),
            backend,
            structure: Structure::Finite(FiniteTable { labels, parities, unit, products }),
        };
        alg.validate()?;
        Ok(alg)
    }

    /// The ground field as a one-dimensional algebra with basis `1`.
    pub fn ground_field(backend: Backend) -> Self {
        Self::finite("ground_field", backend, vec!["1".into()], vec![Parity::Even], Element::basis(backend, BasisId::Idx(0)), |_, _| {
            Element::basis(backend, BasisId::Idx(0))
        })
        .expect("ground field is an algebra")
    }

    pub fn quantum_torus(theta: f64) -> Result<Self, AlgebraError> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(AlgebraError::InvalidParameter(format!("theta = {theta} must lie in (0, 1)")));
        }
        Ok(Self { name: format!("quantum_torus({theta})"), backend: Backend::Approx, structure: Structure::QuantumTorus { theta } })
    }

    pub fn laurent(backend: Backend) -> Self {
        Self { name: "circle_laurent".into(), backend, structure: Structure::Laurent }
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let Structure::Finite(t) = &self.structure else { return Ok(()) };
        let n = t.labels.len();
        let check_elem = |e: &Element| -> Result<(), AlgebraError> {
            self.check_element(e)
        };
        check_elem(&t.unit)?;
        for e in &t.products {
            check_elem(e)?;
        }
        for i in 0..n {
            for j in 0..n {
                let expected = t.parities[i] + t.parities[j];
                for id in t.products[i * n + j].support() {
                    let BasisId::Idx(k) = id else { unreachable!() };
                    if t.parities[k] != expected {
                        return Err(AlgebraError::Axiom {
                            axiom: "parity additivity",
                            detail: format!("{}·{} contains {}", t.labels[i], t.labels[j], t.labels[k]),
                        });
                    }
                }
            }
        }
        for i in 0..n {
            let x = Element::basis(self.backend, BasisId::Idx(i));
            if !self.same(&self.mul(&t.unit, &x)?, &x) || !self.same(&self.mul(&x, &t.unit)?, &x) {
                return Err(AlgebraError::Axiom { axiom: "unit law", detail: format!("fails on {}", t.labels[i]) });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = &t.products[i * n + j];
                for k in 0..n {
                    let z = Element::basis(self.backend, BasisId::Idx(k));
                    let left = self.mul(ij, &z)?;
                    let jk = &t.products[j * n + k];
                    let right = self.mul(&Element::basis(self.backend, BasisId::Idx(i)), jk)?;
                    if !self.same(&left, &right) {
                        return Err(AlgebraError::Axiom {
                            axiom: "associativity",
                            detail: format!("({} {}) {} ≠ {} ({} {})", t.labels[i], t.labels[j], t.labels[k], t.labels[i], t.labels[j], t.labels[k]),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn dim(&self) -> Option<usize> {
        match &self.structure {
            Structure::Finite(t) => Some(t.labels.len()),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.dim().is_some()
    }

    pub fn theta(&self) -> Option<f64> {
        match self.structure {
            Structure::QuantumTorus { theta } => Some(theta),
            _ => None,
        }
    }

    /// Basis of a finite-dimensional algebra.
    pub fn basis(&self) -> Result<Vec<BasisId>, AlgebraError> {
        let n = self.require_finite()?;
        Ok((0..n).map(BasisId::Idx).collect())
    }

    pub fn require_finite(&self) -> Result<usize, AlgebraError> {
        self.dim().ok_or_else(|| AlgebraError::NotFinite(self.name.clone()))
    }

    pub fn contains_id(&self, id: BasisId) -> bool {
        match (&self.structure, id) {
            (Structure::Finite(t), BasisId::Idx(i)) => i < t.labels.len(),
            (Structure::QuantumTorus { .. }, BasisId::Z2(..)) => true,
            (Structure::Laurent, BasisId::Z(_)) => true,
            _ => false,
        }
    }

    pub fn label(&self, id: BasisId) -> String {
        match (&self.structure, id) {
            (Structure::Finite(t), BasisId::Idx(i)) if i < t.labels.len() => t.labels[i].clone(),
            _ => id.to_string(),
        }
    }

    pub fn id_of(&self, label: &str) -> Option<BasisId> {
        match &self.structure {
            Structure::Finite(t) => t.labels.iter().position(|l| l == label).map(BasisId::Idx),
            _ => None,
        }
    }

    pub fn parity(&self, id: BasisId) -> Result<Parity, AlgebraError> {
        match (&self.structure, id) {
            (Structure::Finite(t), BasisId::Idx(i)) if i < t.labels.len() => Ok(t.parities[i]),
            (Structure::QuantumTorus { .. }, BasisId::Z2(..)) | (Structure::Laurent, BasisId::Z(_)) => Ok(Parity::Even),
            _ => Err(self.unknown(id)),
        }
    }

    fn unknown(&self, id: BasisId) -> AlgebraError {
        AlgebraError::UnknownBasis(id.to_string(), self.name.clone())
    }

    /// Checks backend and basis membership of an element.
    pub fn check_element(&self, a: &Element) -> Result<(), AlgebraError> {
        if a.backend() != self.backend {
            return Err(ScalarError::Mixed(self.backend, a.backend()).into());
        }
        match a.support().find(|id| !self.contains_id(*id)) {
            Some(id) => Err(self.unknown(id)),
            None => Ok(()),
        }
    }

    pub fn unit(&self) -> Element {
        match &self.structure {
            Structure::Finite(t) => t.unit.clone(),
            Structure::QuantumTorus { .. } => Element::basis(self.backend, BasisId::Z2(0, 0)),
            Structure::Laurent => Element::basis(self.backend, BasisId::Z(0)),
        }
    }

    pub fn basis_element(&self, id: BasisId) -> Result<Element, AlgebraError> {
        if !self.contains_id(id) {
            return Err(self.unknown(id));
        }
        Ok(Element::basis(self.backend, id))
    }

    /// Product of two basis elements. Ids must belong to the algebra.
    pub fn mul_basis(&self, x: BasisId, y: BasisId) -> Element {
        match (&self.structure, x, y) {
            (Structure::Finite(t), BasisId::Idx(i), BasisId::Idx(j)) => t.products[i * t.labels.len() + j].clone(),
            (Structure::QuantumTorus { theta }, BasisId::Z2(m, n), BasisId::Z2(m2, n2)) => {
                // V^n U^{m'} = λ^{-n m'} U^{m'} V^n with λ = e^{2πiθ}.
                Element::monomial(BasisId::Z2(m + m2, n + n2), Scalar::Approx(torus_phase(*theta, -(n * m2))))
            }
            (Structure::Laurent, BasisId::Z(a), BasisId::Z(b)) => Element::basis(self.backend, BasisId::Z(a + b)),
            _ => panic!("basis ids {x}, {y} do not belong to {}", self.name),
        }
    }

    /// Bilinear extension of the basis product.
    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero(self.backend);
        for (x, ca) in a.terms() {
            for (y, cb) in b.terms() {
                let coeff = ca * cb;
                out.add_scaled(&self.mul_basis(*x, *y), &coeff);
            }
        }
        out
    }

    /// Product of a sequence of elements, left to right.
    pub fn product<'a, I>(&self, factors: I) -> Result<Element, AlgebraError>
    where
        I: IntoIterator<Item = &'a Element>,
    {
        let mut acc = self.unit();
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    /// Splits an element into its even and odd parts.
    pub fn homogeneous_parts(&self, a: &Element) -> Result<[Element; 2], AlgebraError> {
        let mut even = Element::zero(self.backend);
        let mut odd = Element::zero(self.backend);
        for (id, c) in a.terms() {
            match self.parity(*id)? {
                Parity::Even => even.add_term(*id, c.clone()),
                Parity::Odd => odd.add_term(*id, c.clone()),
            }
        }
        Ok([even, odd])
    }

    /// Parity of a nonzero homogeneous element; `None` for zero.
    pub fn element_parity(&self, a: &Element) -> Result<Option<Parity>, AlgebraError> {
        let mut found = None;
        for id in a.support() {
            let p = self.parity(id)?;
            match found {
                None => found = Some(p),
                Some(q) if q != p => return Err(AlgebraError::Inhomogeneous),
                _ => {}
            }
        }
        Ok(found)
    }

    /// `ab − (−1)^{|a||b|} ba`, extended bilinearly over homogeneous parts.
    pub fn super_commutator(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.check_element(a)?;
        self.check_element(b)?;
        let mut out = Element::zero(self.backend);
        let pa = self.homogeneous_parts(a)?;
        let pb = self.homogeneous_parts(b)?;
        for (i, x) in pa.iter().enumerate() {
            for (j, y) in pb.iter().enumerate() {
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                let xy = self.mul_unchecked(x, y);
                let yx = self.mul_unchecked(y, x);
                out = &out + &xy;
                if i == 1 && j == 1 {
                    out = &out + &yx;
                } else {
                    out = &out - &yx;
                }
            }
        }
        Ok(out)
    }

    /// Coordinates of an element in a finite algebra's basis.
    pub fn to_dense(&self, a: &Element) -> Result<Vec<Scalar>, AlgebraError> {
        let n = self.require_finite()?;
        self.check_element(a)?;
        let mut v = vec![Scalar::zero(self.backend); n];
        for (id, c) in a.terms() {
            if let BasisId::Idx(i) = id {
                v[*i] = c.clone();
            }
        }
        Ok(v)
    }

    pub fn from_dense(&self, v: &[Scalar]) -> Result<Element, AlgebraError> {
        let n = self.require_finite()?;
        if v.len() != n {
            return Err(LinalgError::Length { expected: n, got: v.len() }.into());
        }
        Element::from_terms(self.backend, v.iter().enumerate().map(|(i, c)| (BasisId::Idx(i), c.clone())))
            .map_err(AlgebraError::from)
    }

    /// Adjoint for the matrix-unit and torus algebras: conjugates coefficients
    /// and reverses products of generators. `None` when no involution is known.
    pub fn star(&self, a: &Element) -> Option<Element> {
        match &self.structure {
            Structure::QuantumTorus { .. } => {
                let mut out = Element::zero(self.backend);
                for (id, c) in a.terms() {
                    let BasisId::Z2(m, n) = *id else { return None };
                    // (U^m V^n)* = V^{-n} U^{-m}
                    let prod = self.mul_basis(BasisId::Z2(0, -n), BasisId::Z2(-m, 0));
                    out.add_scaled(&prod, &c.conj());
                }
                Some(out)
            }
            Structure::Laurent => {
                let mut out = Element::zero(self.backend);
                for (id, c) in a.terms() {
                    let BasisId::Z(n) = *id else { return None };
                    out.add_term(BasisId::Z(-n), c.conj());
                }
                Some(out)
            }
            Structure::Finite(_) => None,
        }
    }

    /// Coordinates of an element of a finite algebra as a sparse row.
    pub fn to_row(&self, a: &Element) -> Result<SparseRow, AlgebraError> {
        self.require_finite()?;
        self.check_element(a)?;
        Ok(a.terms()
            .map(|(id, c)| match id {
                BasisId::Idx(i) => (*i, c.clone()),
                _ => unreachable!("checked membership"),
            })
            .collect())
    }

    pub fn from_row(&self, row: &SparseRow) -> Element {
        let mut out = Element::zero(self.backend);
        for (i, c) in row {
            out.add_term(BasisId::Idx(*i), c.clone());
        }
        out
    }

    /// Equality up to the approximate backend's tolerance.
    pub(crate) fn same(&self, a: &Element, b: &Element) -> bool {
        if self.backend.is_exact() {
            a == b
        } else {
            a.distance(b) <= 1e-9 * a.max_magnitude().max(b.max_magnitude()).max(1.0)
        }
    }
}

pub(crate) fn torus_phase(theta: f64, k: i64) -> Complex64 {
    // Reduce θk modulo 1 before the trigonometric evaluation.
    let x = (theta * k as f64).rem_euclid(1.0);
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x)
}

/// Values of a finitely supported functional on basis elements.
pub type BasisFunctional = BTreeMap<BasisId, Scalar>;

#[cfg(test)]
mod tests;
