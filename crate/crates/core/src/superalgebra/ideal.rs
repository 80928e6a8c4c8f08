use std::collections::BTreeMap;

use super::{AlgebraError, BasedSuperAlgebra, BasisFunctional, BasisId, Element};
use crate::linalg::{kernel_basis, Echelon, SparseMatrix, SparseRow, DEFAULT_RELATIVE_PIVOT};
use crate::scalar::Scalar;

/// Span of the `p`-th power of a two-sided ideal.
#[derive(Clone, Debug)]
pub enum IdealPower {
    /// The whole algebra (the based infinite case).
    Whole { p: usize },
    /// Reduced row-echelon basis of `Jᵖ` inside a finite algebra, keyed by pivot index.
    Span { p: usize, rows: BTreeMap<usize, SparseRow>, ambient: usize },
}

impl IdealPower {
    pub fn degree(&self) -> usize {
        match self {
            IdealPower::Whole { p } | IdealPower::Span { p, .. } => *p,
        }
    }

    /// The whole finite algebra as an ideal power.
    pub fn whole_finite(alg: &BasedSuperAlgebra, p: usize) -> Result<Self, AlgebraError> {
        let n = alg.require_finite()?;
        let one = Scalar::one(alg.backend());
        let rows = (0..n).map(|i| (i, SparseRow::from([(i, one.clone())]))).collect();
        Ok(IdealPower::Span { p, rows, ambient: n })
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            IdealPower::Whole { .. } => None,
            IdealPower::Span { rows, .. } => Some(rows.len()),
        }
    }

    pub fn is_whole(&self) -> bool {
        match self {
            IdealPower::Whole { .. } => true,
            IdealPower::Span { rows, ambient, .. } => rows.len() == *ambient,
        }
    }

    /// Spanning elements (the echelon rows) of a finite ideal power.
    pub fn spanning_set(&self, alg: &BasedSuperAlgebra) -> Result<Vec<Element>, AlgebraError> {
        match self {
            IdealPower::Whole { .. } => Err(AlgebraError::NotFinite(alg.name().to_string())),
            IdealPower::Span { rows, .. } => Ok(rows.values().map(|r| alg.from_row(r)).collect()),
        }
    }

    /// Largest coefficient of `x` left after reduction modulo the span (zero on `Whole`).
    pub fn residual(&self, alg: &BasedSuperAlgebra, x: &Element) -> Result<f64, AlgebraError> {
        alg.check_element(x)?;
        match self {
            IdealPower::Whole { .. } => Ok(0.0),
            IdealPower::Span { rows, .. } => {
                let mut rest = alg.to_row(x)?;
                for (pc, row) in rows {
                    if let Some(c) = rest.get(pc).cloned() {
                        for (col, v) in row {
                            let delta = &c * v;
                            let slot = rest.entry(*col).or_insert_with(|| Scalar::zero(alg.backend()));
                            *slot -= &delta;
                        }
                    }
                }
                Ok(rest.values().map(Scalar::magnitude).fold(0.0, f64::max))
            }
        }
    }

    /// Whether `x` lies in the span (within tolerance for the approximate backend).
    pub fn contains(&self, alg: &BasedSuperAlgebra, x: &Element) -> Result<bool, AlgebraError> {
        let r = self.residual(alg, x)?;
        let tol = if alg.backend().is_exact() { 0.0 } else { DEFAULT_RELATIVE_PIVOT * x.max_magnitude().max(1.0) };
        Ok(r <= tol)
    }
}

/// Spanning set of `Jᵖ` for the two-sided ideal `J` generated by homogeneous `j_gens`.
///
/// On a countable-basis algebra only the whole algebra is supported: some generator
/// must be a nonzero multiple of a basis monomial, all of which are invertible there.
pub fn ideal_power_basis(alg: &BasedSuperAlgebra, j_gens: &[Element], p: usize) -> Result<IdealPower, AlgebraError> {
    if p == 0 {
        return Err(AlgebraError::InvalidParameter("ideal power degree must be at least 1".into()));
    }
    for g in j_gens {
        alg.check_element(g)?;
        alg.element_parity(g)?;
    }
    let Some(n) = alg.dim() else {
        if j_gens.iter().any(|g| g.len() == 1) {
            return Ok(IdealPower::Whole { p });
        }
        return Err(AlgebraError::NotFinite(alg.name().to_string()));
    };
    let basis: Vec<Element> = (0..n).map(|i| Element::basis(alg.backend(), BasisId::Idx(i))).collect();
    let j = two_sided_closure(alg, &basis, j_gens.to_vec())?;
    let mut power = j.clone();
    for _ in 1..p {
        let mut products = Vec::new();
        for x in &power {
            for y in &j {
                products.push(alg.mul_unchecked(x, y));
            }
        }
        power = two_sided_closure(alg, &basis, products)?;
    }
    let mut ech = new_echelon(alg, &power);
    for x in &power {
        ech.insert(alg.to_row(x)?);
    }
    Ok(IdealPower::Span { p, rows: ech.into_rref(), ambient: n })
}

fn new_echelon(alg: &BasedSuperAlgebra, elems: &[Element]) -> Echelon {
    let scale = elems.iter().map(Element::max_magnitude).fold(1.0, f64::max);
    Echelon::with_threshold(alg.backend(), DEFAULT_RELATIVE_PIVOT * scale)
}

/// Independent elements spanning the closure of `seed` under multiplication by
/// basis elements on both sides.
fn two_sided_closure(alg: &BasedSuperAlgebra, basis: &[Element], seed: Vec<Element>) -> Result<Vec<Element>, AlgebraError> {
    let mut ech = new_echelon(alg, &seed);
    let mut kept = Vec::new();
    let mut queue = Vec::new();
    for x in seed {
        if ech.insert(alg.to_row(&x)?) {
            kept.push(x.clone());
            queue.push(x);
        }
    }
    while let Some(x) = queue.pop() {
        for b in basis {
            for y in [alg.mul_unchecked(b, &x), alg.mul_unchecked(&x, b)] {
                if ech.insert(alg.to_row(&y)?) {
                    kept.push(y.clone());
                    queue.push(y);
                }
            }
        }
    }
    Ok(kept)
}

/// A functional on `span(Jᵖ)` vanishing on `[B, Jᵖ]`, stored by its values on basis ids.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialTrace {
    pub name: String,
    pub values: BasisFunctional,
}

impl PartialTrace {
    pub fn new(name: impl Into<String>, values: BasisFunctional) -> Self {
        Self { name: name.into(), values }
    }

    pub fn eval(&self, x: &Element) -> Scalar {
        let mut acc = Scalar::zero(x.backend());
        for (id, c) in x.terms() {
            if let Some(v) = self.values.get(id) {
                acc += &(c * v);
            }
        }
        acc
    }

    /// Evaluates on `x` after checking membership in `Jᵖ`.
    pub fn eval_in(&self, alg: &BasedSuperAlgebra, jp: &IdealPower, x: &Element) -> Result<Scalar, AlgebraError> {
        if !jp.contains(alg, x)? {
            return Err(AlgebraError::NotInIdeal(jp.degree()));
        }
        Ok(self.eval(x))
    }

    /// Largest `|τ([b, j])|` over basis `b` and spanning `j`.
    pub fn commutator_residual(&self, alg: &BasedSuperAlgebra, jp: &IdealPower) -> Result<f64, AlgebraError> {
        let mut worst: f64 = 0.0;
        for b in alg.basis()? {
            let b = Element::basis(alg.backend(), b);
            for j in jp.spanning_set(alg)? {
                worst = worst.max(self.eval(&alg.super_commutator(&b, &j)?).magnitude());
            }
        }
        Ok(worst)
    }
}

/// Basis of `(Jᵖ / [B, Jᵖ])*`, each functional supported on the pivot ids of `Jᵖ`.
pub fn partial_trace_space(alg: &BasedSuperAlgebra, jp: &IdealPower) -> Result<Vec<PartialTrace>, AlgebraError> {
    let IdealPower::Span { rows, .. } = jp else {
        return Err(AlgebraError::NotFinite(alg.name().to_string()));
    };
    let pivots: Vec<usize> = rows.keys().copied().collect();
    let col_of: BTreeMap<usize, usize> = pivots.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let backend = alg.backend();
    // A functional on the echelon basis is determined by its values on pivots,
    // and the coordinates of v ∈ Jᵖ are its entries at pivot columns.
    let mut triplets = Vec::new();
    let mut r = 0;
    for b in alg.basis()? {
        let b = Element::basis(backend, b);
        for row in rows.values() {
            let comm = alg.super_commutator(&b, &alg.from_row(row))?;
            if comm.is_zero() {
                continue;
            }
            for (id, c) in comm.terms() {
                let BasisId::Idx(i) = id else { unreachable!() };
                if let Some(&k) = col_of.get(i) {
                    triplets.push((r, k, c.clone()));
                }
            }
            r += 1;
        }
    }
    let m = SparseMatrix::from_triplets(r, pivots.len(), backend, triplets)?;
    Ok(kernel_basis(&m)
        .into_iter()
        .enumerate()
        .map(|(t, v)| {
            let values = pivots.iter().zip(v).filter(|(_, x)| !x.is_zero()).map(|(&c, x)| (BasisId::Idx(c), x)).collect();
            PartialTrace::new(format!("trace_{t}"), values)
        })
        .collect())
}
