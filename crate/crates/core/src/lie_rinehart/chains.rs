use std::collections::BTreeMap;

use crate::linalg::{homology_dimension, kernel_basis, Echelon, SparseMatrix, SparseRow};
use crate::scalar::{Backend, Scalar};
use crate::superalgebra::{Element, Parity};

use super::{LrError, RightModule, SuperLieRinehart};

/// Element of `M ⊗_R Λᵖ_R L`: coefficients on (module basis index, sorted generator indices).
#[derive(Clone, Debug, PartialEq)]
pub struct LRChain {
    degree: usize,
    backend: Backend,
    terms: BTreeMap<(usize, Vec<usize>), Scalar>,
}

impl LRChain {
    pub fn zero(backend: Backend, degree: usize) -> Self {
        Self { degree, backend, terms: BTreeMap::new() }
    }

    /// `m_a ⊗ X_{i₁} ∧ … ∧ X_{i_p}` normalised.
    pub fn monomial(lr: &SuperLieRinehart, module_index: usize, gens: &[usize]) -> Self {
        wedge_normalize(lr, gens.len(), &[(SparseRow::from([(module_index, Scalar::one(lr.backend()))]), gens.to_vec(), Scalar::one(lr.backend()))])
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

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, Vec<usize>), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, module_index: usize, gens: &[usize]) -> Scalar {
        self.terms.get(&(module_index, gens.to_vec())).cloned().unwrap_or_else(|| Scalar::zero(self.backend))
    }

    /// Adds a term that is already in normal form.
    fn add_normal(&mut self, key: (usize, Vec<usize>), c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LRChain, k: &Scalar) {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        for (key, c) in &other.terms {
            self.add_normal(key.clone(), c * k);
        }
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        let mut out = Self::zero(self.backend, self.degree);
        out.add_scaled(self, k);
        out
    }

    pub fn add(&self, other: &LRChain) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one(self.backend));
        out
    }

    pub fn sub(&self, other: &LRChain) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_i64(self.backend, -1));
        out
    }

    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    fn to_row(&self, index: &BTreeMap<(usize, Vec<usize>), usize>) -> SparseRow {
        self.terms.iter().map(|(k, c)| (index[k], c.clone())).collect()
    }
}

/// Sorts a generator sequence into normal form. Returns `None` when the
/// monomial vanishes (a repeated even generator), otherwise whether the
/// coefficient changes sign. Each adjacent swap of `X, Y` contributes
/// `−(−1)^{|X||Y|}`.
pub fn wedge_sign(lr: &SuperLieRinehart, gens: &mut [usize]) -> Option<bool> {
    let mut negate = false;
    for i in 1..gens.len() {
        let mut j = i;
        while j > 0 && gens[j - 1] > gens[j] {
            if !lr.parity(gens[j - 1]).koszul(lr.parity(gens[j])) {
                negate = !negate;
            }
            gens.swap(j - 1, j);
            j -= 1;
        }
    }
    for w in gens.windows(2) {
        if w[0] == w[1] && lr.parity(w[0]) == Parity::Even {
            return None;
        }
    }
    Some(negate)
}

/// Canonical chain from raw `(module vector, generator sequence, coefficient)` terms.
pub fn wedge_normalize(lr: &SuperLieRinehart, degree: usize, raw: &[(SparseRow, Vec<usize>, Scalar)]) -> LRChain {
    let mut out = LRChain::zero(lr.backend(), degree);
    for (m, gens, c) in raw {
        assert_eq!(gens.len(), degree, "generator sequence of the wrong length");
        let mut g = gens.clone();
        let Some(negate) = wedge_sign(lr, &mut g) else { continue };
        let c = c.clone().signed(negate);
        for (a, x) in m {
            out.add_normal((*a, g.clone()), &c * x);
        }
    }
    out
}

fn check_pair(lr: &SuperLieRinehart, module: &RightModule) -> Result<(), LrError> {
    if module.rank() != lr.rank() {
        return Err(LrError::Module(format!("module acts by {} generators, pair has {}", module.rank(), lr.rank())));
    }
    if module.backend() != lr.backend() {
        return Err(LrError::Module(format!("backend {} vs {}", module.backend(), lr.backend())));
    }
    Ok(())
}

fn require_even_base(lr: &SuperLieRinehart) -> Result<(), LrError> {
    let base = lr.base();
    for b in base.basis()? {
        if base.parity(b)? == Parity::Odd {
            return Err(LrError::OddBase(base.name().to_string()));
        }
    }
    Ok(())
}

/// The module factor of a raw boundary term, before it is evaluated.
#[derive(Clone, Debug)]
pub(crate) enum BoundaryFactor {
    /// `m_a · X_g`.
    Act { a: usize, g: usize },
    /// `r · m_a` for an R-coefficient of a bracket.
    Scale { a: usize, r: Element },
}

/// Terms of the boundary
/// `∂(m ⊗ X₁∧…∧X_p) = Σ_i (−1)^i ε_i (m·X_i) ⊗ …X̂_i… + Σ_{i<j} (−1)^{i+j−1} ε_ij m ⊗ [X_i,X_j] ∧ …X̂_i…X̂_j…`
/// with `ε` the Koszul signs of moving `X_i` (then `X_j`) to the front.
pub(crate) fn boundary_terms(lr: &SuperLieRinehart, c: &LRChain) -> Result<Vec<(BoundaryFactor, Vec<usize>, Scalar)>, LrError> {
    if c.degree == 0 {
        return Err(LrError::Degree("∂ is not defined on degree 0".into()));
    }
    require_even_base(lr)?;
    let p = c.degree;
    let mut raw = Vec::new();
    for ((a, gens), coeff) in &c.terms {
        let odd = |k: usize| lr.parity(gens[k]).is_odd();
        for i in 0..p {
            // 1-based position i+1.
            let eps = (0..i).filter(|&k| odd(i) && odd(k)).count();
            let negate = (i + 1 + eps) % 2 == 1;
            let rest: Vec<usize> = gens.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, g)| *g).collect();
            raw.push((BoundaryFactor::Act { a: *a, g: gens[i] }, rest, coeff.clone().signed(negate)));
        }
        for i in 0..p {
            for j in i + 1..p {
                let eps_i = (0..i).filter(|&k| odd(i) && odd(k)).count();
                let eps_j = (0..j).filter(|&k| k != i && odd(j) && odd(k)).count();
                let negate = ((i + 1) + (j + 1) - 1 + eps_i + eps_j) % 2 == 1;
                let rest: Vec<usize> = gens.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, g)| *g).collect();
                for (g, r) in lr.bracket_gens(gens[i], gens[j]) {
                    let mut seq = Vec::with_capacity(p - 1);
                    seq.push(g);
                    seq.extend_from_slice(&rest);
                    raw.push((BoundaryFactor::Scale { a: *a, r }, seq, coeff.clone().signed(negate)));
                }
            }
        }
    }
    Ok(raw)
}

/// The boundary `∂: C_p → C_{p−1}`; R-coefficients of brackets act on the module factor.
pub fn lr_boundary(lr: &SuperLieRinehart, module: &RightModule, c: &LRChain) -> Result<LRChain, LrError> {
    check_pair(lr, module)?;
    let raw = boundary_terms(lr, c)?
        .into_iter()
        .map(|(f, gens, k)| {
            let m = match f {
                BoundaryFactor::Act { a, g } => module.act(a, g).clone(),
                BoundaryFactor::Scale { a, r } => module.r_act(&r, a)?,
            };
            Ok((m, gens, k))
        })
        .collect::<Result<Vec<_>, LrError>>()?;
    Ok(wedge_normalize(lr, c.degree - 1, &raw))
}

/// Normal-form basis of `C_p`: module index × generator multisets (even generators at most once).
pub fn chain_basis(lr: &SuperLieRinehart, module: &RightModule, p: usize) -> Vec<(usize, Vec<usize>)> {
    let mut seqs = Vec::new();
    let mut cur = Vec::with_capacity(p);
    fn rec(lr: &SuperLieRinehart, p: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for g in start..lr.rank() {
            cur.push(g);
            let next = if lr.parity(g).is_odd() { g } else { g + 1 };
            rec(lr, p, next, cur, out);
            cur.pop();
        }
    }
    rec(lr, p, 0, &mut cur, &mut seqs);
    (0..module.dim()).flat_map(|a| seqs.iter().map(move |s| (a, s.clone()))).collect()
}

/// Matrix of `∂: C_p → C_{p−1}`; zero map into the zero space for `p = 0`.
pub fn boundary_matrix(lr: &SuperLieRinehart, module: &RightModule, p: usize) -> Result<SparseMatrix, LrError> {
    let cols = chain_basis(lr, module, p);
    if p == 0 {
        return Ok(SparseMatrix::zeros(0, cols.len(), lr.backend()));
    }
    let rows = chain_basis(lr, module, p - 1);
    let index: BTreeMap<_, _> = rows.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let mut triplets = Vec::new();
    for (j, (a, gens)) in cols.iter().enumerate() {
        let img = lr_boundary(lr, module, &LRChain::monomial(lr, *a, gens))?;
        for (key, c) in img.terms() {
            triplets.push((index[key], j, c.clone()));
        }
    }
    Ok(SparseMatrix::from_triplets(rows.len(), cols.len(), lr.backend(), triplets)?)
}

/// `dim H_p(L, R; M)`.
pub fn lr_homology_dim(lr: &SuperLieRinehart, module: &RightModule, p: usize) -> Result<usize, LrError> {
    if !lr.backend().is_exact() {
        return Err(LrError::Module("homology dimensions need an exact backend".into()));
    }
    Ok(homology_dimension(&boundary_matrix(lr, module, p + 1)?, &boundary_matrix(lr, module, p)?)?)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ChainClass {
    NotCycle,
    CycleNotBoundary,
    /// A boundary (in particular a cycle).
    Boundary,
}

impl ChainClass {
    pub fn is_cycle(self) -> bool {
        self != ChainClass::NotCycle
    }
}

pub fn classify_chain(lr: &SuperLieRinehart, module: &RightModule, c: &LRChain) -> Result<ChainClass, LrError> {
    if c.degree > 0 && !lr_boundary(lr, module, c)?.is_zero() {
        return Ok(ChainClass::NotCycle);
    }
    let image = boundary_matrix(lr, module, c.degree + 1)?;
    let index: BTreeMap<_, _> = chain_basis(lr, module, c.degree).into_iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut ech = Echelon::new(lr.backend());
    for col in image.column_maps() {
        if !col.is_empty() {
            ech.insert(col);
        }
    }
    Ok(if ech.contains(&c.to_row(&index)) { ChainClass::Boundary } else { ChainClass::CycleNotBoundary })
}

/// Basis of `{m : m·X = 0 for every generator X}`.
pub fn invariants(lr: &SuperLieRinehart, module: &RightModule) -> Result<Vec<Vec<Scalar>>, LrError> {
    check_pair(lr, module)?;
    let n = module.dim();
    let mut triplets = Vec::new();
    for g in 0..lr.rank() {
        for a in 0..n {
            for (b, x) in module.act(a, g) {
                triplets.push((g * n + b, a, x.clone()));
            }
        }
    }
    let m = SparseMatrix::from_triplets(lr.rank() * n, n, lr.backend(), triplets)?;
    Ok(kernel_basis(&m))
}
