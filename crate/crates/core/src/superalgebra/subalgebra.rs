use std::collections::BTreeMap;

use super::{AlgebraError, BasedSuperAlgebra, BasisId, Element};
use crate::linalg::{Echelon, SparseRow};

/// A unital subalgebra presented on its own basis together with the inclusion.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub algebra: BasedSuperAlgebra,
    /// Echelon rows of the subalgebra inside the ambient algebra, keyed by pivot.
    rows: BTreeMap<usize, SparseRow>,
}

impl Subalgebra {
    /// Image of a subalgebra element in the ambient algebra.
    pub fn include(&self, ambient: &BasedSuperAlgebra, x: &Element) -> Element {
        let mut out = Element::zero(ambient.backend());
        for (id, c) in x.terms() {
            let BasisId::Idx(k) = id else { unreachable!() };
            let row = self.rows.values().nth(*k).expect("subalgebra basis index");
            out.add_scaled(&ambient.from_row(row), c);
        }
        out
    }

    /// Preimage of an ambient element, if it lies in the subalgebra.
    pub fn restrict(&self, ambient: &BasedSuperAlgebra, x: &Element) -> Result<Option<Element>, AlgebraError> {
        let row = ambient.to_row(x)?;
        let mut out = Element::zero(ambient.backend());
        for (k, pc) in self.rows.keys().enumerate() {
            if let Some(c) = row.get(pc) {
                out.add_term(BasisId::Idx(k), c.clone());
            }
        }
        Ok(ambient.same(&self.include(ambient, &out), x).then_some(out))
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// The unital subalgebra generated by homogeneous elements of a finite algebra.
pub fn generated_subalgebra(alg: &BasedSuperAlgebra, gens: &[Element]) -> Result<Subalgebra, AlgebraError> {
    alg.require_finite()?;
    let mut ech = Echelon::new(alg.backend());
    let mut kept: Vec<Element> = Vec::new();
    let mut queue = Vec::new();
    let mut seeds = vec![alg.unit()];
    for g in gens {
        alg.element_parity(g)?;
        seeds.push(g.clone());
    }
    for s in seeds {
        if ech.insert(alg.to_row(&s)?) {
            kept.push(s.clone());
            queue.push(s);
        }
    }
    while let Some(x) = queue.pop() {
        let snapshot = kept.clone();
        for y in snapshot {
            for z in [alg.mul_unchecked(&x, &y), alg.mul_unchecked(&y, &x)] {
                if ech.insert(alg.to_row(&z)?) {
                    kept.push(z.clone());
                    queue.push(z);
                }
            }
        }
    }
    let rows = ech.into_rref();
    let pivots: Vec<usize> = rows.keys().copied().collect();
    let elems: Vec<Element> = rows.values().map(|r| alg.from_row(r)).collect();
    let coords = |e: &Element| -> Element {
        let mut out = Element::zero(alg.backend());
        for (k, pc) in pivots.iter().enumerate() {
            out.add_term(BasisId::Idx(k), e.coeff(BasisId::Idx(*pc)));
        }
        out
    };
    let mut parities = Vec::with_capacity(elems.len());
    for e in &elems {
        parities.push(alg.element_parity(e)?.expect("echelon rows are nonzero"));
    }
    let labels = (0..elems.len()).map(|k| format!("s{k}")).collect();
    let unit = coords(&alg.unit());
    let sub = BasedSuperAlgebra::finite(format!("sub({})", alg.name()), alg.backend(), labels, parities, unit, |i, j| {
        coords(&alg.mul_unchecked(&elems[i], &elems[j]))
    })?;
    Ok(Subalgebra { algebra: sub, rows })
}
