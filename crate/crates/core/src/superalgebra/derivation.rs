use std::collections::BTreeMap;

use super::{AlgebraError, BasedSuperAlgebra, BasisFunctional, BasisId, Element, Parity};
use crate::scalar::Scalar;

/// How a derivation acts on basis elements.
#[derive(Clone, Debug)]
pub enum DerivationRule {
    /// Explicit images of basis elements; absent ids map to zero.
    Table(BTreeMap<BasisId, Element>),
    /// `x ↦ [z, x]` for a homogeneous `z` of the derivation's parity.
    Inner(Element),
    /// Lattice-weight derivation `b ↦ i·w(b)·b` on torus or Laurent bases,
    /// with `w` the exponent along `axis`. The factor 2π is kept in the tag.
    LatticeWeight { axis: usize },
}

/// Graded derivation of a based superalgebra.
///
/// The stored action omits a symbolic factor `(2π)^two_pi`; a torus derivation
/// with `X(U) = 2πi·U` stores `U ↦ i·U` and `two_pi = 1`.
#[derive(Clone, Debug)]
pub struct SuperDerivation {
    pub name: String,
    pub parity: Parity,
    pub two_pi: u32,
    pub rule: DerivationRule,
}

impl SuperDerivation {
    pub fn table(name: impl Into<String>, parity: Parity, images: BTreeMap<BasisId, Element>) -> Self {
        Self { name: name.into(), parity, two_pi: 0, rule: DerivationRule::Table(images) }
    }

    /// Inner derivation `ad(z) = [z, −]`. `z` must be homogeneous.
    pub fn inner(name: impl Into<String>, alg: &BasedSuperAlgebra, z: Element) -> Result<Self, AlgebraError> {
        alg.check_element(&z)?;
        let parity = alg.element_parity(&z)?.unwrap_or(Parity::Even);
        Ok(Self { name: name.into(), parity, two_pi: 0, rule: DerivationRule::Inner(z) })
    }

    pub fn lattice(name: impl Into<String>, axis: usize) -> Self {
        Self { name: name.into(), parity: Parity::Even, two_pi: 1, rule: DerivationRule::LatticeWeight { axis } }
    }

    fn err(&self, msg: impl Into<String>) -> AlgebraError {
        AlgebraError::Derivation(self.name.clone(), msg.into())
    }

    pub fn apply_basis(&self, alg: &BasedSuperAlgebra, id: BasisId) -> Result<Element, AlgebraError> {
        let backend = alg.backend();
        match &self.rule {
            DerivationRule::Table(images) => Ok(images.get(&id).cloned().unwrap_or_else(|| Element::zero(backend))),
            DerivationRule::Inner(z) => alg.super_commutator(z, &alg.basis_element(id)?),
            DerivationRule::LatticeWeight { axis } => {
                let w = match (id, axis) {
                    (BasisId::Z(n), 0) => n,
                    (BasisId::Z2(m, _), 0) => m,
                    (BasisId::Z2(_, n), 1) => n,
                    _ => return Err(self.err(format!("no lattice axis {axis} on {id}"))),
                };
                let i = Scalar::imaginary_unit(backend)?;
                Ok(Element::monomial(id, i.scale_i64(w)))
            }
        }
    }

    /// Linear extension of the basis action.
    pub fn apply(&self, alg: &BasedSuperAlgebra, a: &Element) -> Result<Element, AlgebraError> {
        alg.check_element(a)?;
        let mut out = Element::zero(alg.backend());
        for (id, c) in a.terms() {
            out.add_scaled(&self.apply_basis(alg, *id)?, c);
        }
        Ok(out)
    }

    /// The functional `f ∘ D` for a finitely supported `f`.
    pub fn pullback(&self, alg: &BasedSuperAlgebra, f: &BasisFunctional) -> Result<BasisFunctional, AlgebraError> {
        let mut out = BasisFunctional::new();
        if let DerivationRule::LatticeWeight { .. } = self.rule {
            // Diagonal action: only the support of f contributes.
            for (id, v) in f {
                let img = self.apply_basis(alg, *id)?;
                let c = img.coeff(*id) * v;
                if !c.is_zero() {
                    out.insert(*id, c);
                }
            }
            return Ok(out);
        }
        for id in alg.basis().map_err(|_| self.err("pullback on an infinite basis needs a diagonal rule"))? {
            let img = self.apply_basis(alg, id)?;
            let mut acc = Scalar::zero(alg.backend());
            for (k, c) in img.terms() {
                if let Some(v) = f.get(k) {
                    acc += &(c * v);
                }
            }
            if !acc.is_zero() {
                out.insert(id, acc);
            }
        }
        Ok(out)
    }
}

/// Largest coefficient of `D(xy) − D(x)y − (−1)^{|D||x|} x D(y)` over the samples.
/// Inhomogeneous `x` is split into parity components.
pub fn check_leibniz(
    alg: &BasedSuperAlgebra,
    d: &SuperDerivation,
    samples: &[(Element, Element)],
) -> Result<f64, AlgebraError> {
    let mut worst: f64 = 0.0;
    for (x, y) in samples {
        let lhs = d.apply(alg, &alg.mul(x, y)?)?;
        let mut rhs = alg.mul(&d.apply(alg, x)?, y)?;
        let dy = d.apply(alg, y)?;
        let parts = alg.homogeneous_parts(x)?;
        for (bit, part) in parts.iter().enumerate() {
            let term = alg.mul(part, &dy)?;
            if d.parity.is_odd() && bit == 1 {
                rhs = &rhs - &term;
            } else {
                rhs = &rhs + &term;
            }
        }
        worst = worst.max(lhs.distance(&rhs));
    }
    Ok(worst)
}
