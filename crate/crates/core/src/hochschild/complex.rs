use crate::linalg::{homology_dimension, kernel_basis_sparse, rank, Echelon, SparseMatrix, SparseRow};
use crate::scalar::Scalar;
use crate::superalgebra::{generated_subalgebra, BasedSuperAlgebra, BasisId, Element, Subalgebra};

use super::{connes_b, hoch_b, norm_n, BVariant, HochschildChain, HochschildError, Tuple};

/// Largest chain space the dense-index solvers will enumerate.
const MAX_TUPLES: usize = 1 << 21;

/// Number of basis tuples in degree `p` of an `n`-dimensional algebra.
pub fn tuple_count(n: usize, p: usize) -> Result<usize, HochschildError> {
    let mut k: usize = 1;
    for _ in 0..=p {
        k = k.checked_mul(n).filter(|&k| k <= MAX_TUPLES).ok_or_else(|| {
            HochschildError::TooLarge(format!("{n}^{} basis tuples in degree {p}", p + 1))
        })?;
    }
    Ok(k)
}

fn index_of(t: &[BasisId], n: usize) -> usize {
    t.iter().fold(0, |acc, id| match id {
        BasisId::Idx(i) => acc * n + i,
        _ => unreachable!("finite algebras use positional ids"),
    })
}

fn tuple_of(mut idx: usize, n: usize, p: usize) -> Tuple {
    let mut t = vec![BasisId::Idx(0); p + 1];
    for slot in t.iter_mut().rev() {
        *slot = BasisId::Idx(idx % n);
        idx /= n;
    }
    t
}

/// Coordinates of a chain in the lexicographic tuple basis.
pub fn chain_to_vector(alg: &BasedSuperAlgebra, c: &HochschildChain) -> Result<SparseRow, HochschildError> {
    let n = alg.require_finite()?;
    c.check(alg)?;
    Ok(c.terms().map(|(t, x)| (index_of(t, n), x.clone())).collect())
}

pub fn chain_from_vector(alg: &BasedSuperAlgebra, p: usize, v: &SparseRow) -> Result<HochschildChain, HochschildError> {
    let n = alg.require_finite()?;
    let mut c = HochschildChain::zero(alg.backend(), p);
    for (i, x) in v {
        c.add_term(tuple_of(*i, n, p), x.clone());
    }
    Ok(c)
}

/// Matrix of a linear operator from degree `p_in` to degree `p_out` chains.
pub fn operator_matrix<F>(alg: &BasedSuperAlgebra, p_in: usize, p_out: usize, op: F) -> Result<SparseMatrix, HochschildError>
where
    F: Fn(&HochschildChain) -> Result<HochschildChain, HochschildError>,
{
    let n = alg.require_finite()?;
    let cols = tuple_count(n, p_in)?;
    let rows = tuple_count(n, p_out)?;
    let mut triplets = Vec::new();
    for j in 0..cols {
        let image = op(&HochschildChain::basis_tuple(alg.backend(), tuple_of(j, n, p_in)))?;
        for (t, x) in image.terms() {
            triplets.push((index_of(t, n), j, x.clone()));
        }
    }
    Ok(SparseMatrix::from_triplets(rows, cols, alg.backend(), triplets)?)
}

/// Matrix of `b: C_p → C_{p−1}`; for `p = 0` the zero map to the zero space.
pub fn b_matrix(alg: &BasedSuperAlgebra, p: usize) -> Result<SparseMatrix, HochschildError> {
    let n = alg.require_finite()?;
    if p == 0 {
        return Ok(SparseMatrix::zeros(0, n, alg.backend()));
    }
    operator_matrix(alg, p, p - 1, |c| hoch_b(alg, c))
}

fn one_minus_t_matrix(alg: &BasedSuperAlgebra, p: usize) -> Result<SparseMatrix, HochschildError> {
    operator_matrix(alg, p, p, |c| super::one_minus_t(alg, c))
}

/// `dim HH_p(A)`.
pub fn hh_dim(alg: &BasedSuperAlgebra, p: usize) -> Result<usize, HochschildError> {
    Ok(homology_dimension(&b_matrix(alg, p + 1)?, &b_matrix(alg, p)?)?)
}

fn require_exact(alg: &BasedSuperAlgebra) -> Result<(), HochschildError> {
    if alg.backend().is_exact() {
        Ok(())
    } else {
        Err(HochschildError::ApproxBackend)
    }
}

/// Spanning set of `{x ∈ C_p : b x ∈ im(1 − t)}`.
fn lambda_cycles(alg: &BasedSuperAlgebra, p: usize) -> Result<Vec<SparseRow>, HochschildError> {
    let n = alg.require_finite()?;
    let dim = tuple_count(n, p)?;
    if p == 0 {
        let one = Scalar::one(alg.backend());
        return Ok((0..dim).map(|i| SparseRow::from([(i, one.clone())])).collect());
    }
    let m = b_matrix(alg, p)?.hstack(&one_minus_t_matrix(alg, p - 1)?.scaled(&Scalar::from_i64(alg.backend(), -1)))?;
    let mut ech = Echelon::new(alg.backend());
    let mut out = Vec::new();
    for v in kernel_basis_sparse(&m) {
        let x: SparseRow = v.into_iter().filter(|(i, _)| *i < dim).collect();
        if !x.is_empty() && ech.insert(x.clone()) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Echelon form of `im b_{p+1} + im (1 − t)` inside `C_p`.
fn lambda_boundaries(alg: &BasedSuperAlgebra, p: usize) -> Result<Echelon, HochschildError> {
    let mut ech = Echelon::new(alg.backend());
    for col in b_matrix(alg, p + 1)?.column_maps().into_iter().chain(one_minus_t_matrix(alg, p)?.column_maps()) {
        if !col.is_empty() {
            ech.insert(col);
        }
    }
    Ok(ech)
}

/// `dim HC_p(A)` from Connes' complex `C_p / im(1 − t)`.
pub fn hc_dim(alg: &BasedSuperAlgebra, p: usize) -> Result<usize, HochschildError> {
    require_exact(alg)?;
    let n = alg.require_finite()?;
    let bt = b_matrix(alg, p + 1)?.hstack(&one_minus_t_matrix(alg, p)?)?;
    let boundaries = rank(&bt);
    let cycles = if p == 0 {
        n
    } else {
        let m = b_matrix(alg, p)?.hstack(&one_minus_t_matrix(alg, p - 1)?)?;
        let t = one_minus_t_matrix(alg, p - 1)?;
        (m.cols() - rank(&m)) - (t.cols() - rank(&t))
    };
    Ok(cycles - boundaries)
}

/// A cyclic cycle whose class lies in the kernel of `B: HC_p → HH_{p+1}`.
#[derive(Clone, Debug)]
pub struct CyclicClassRep {
    chain: HochschildChain,
    factors: Option<Vec<Element>>,
}

impl CyclicClassRep {
    pub fn chain(&self) -> &HochschildChain {
        &self.chain
    }

    pub fn degree(&self) -> usize {
        self.chain.degree()
    }

    /// The elementary tensor the representative was certified from, if any.
    pub fn factors(&self) -> Option<&[Element]> {
        self.factors.as_deref()
    }

    pub fn into_chain(self) -> HochschildChain {
        self.chain
    }
}

/// Representatives of a basis of `ker(B: HC_p(A) → HH_{p+1}(A))`.
pub fn ker_b_in_hc(alg: &BasedSuperAlgebra, p: usize, variant: BVariant) -> Result<Vec<CyclicClassRep>, HochschildError> {
    require_exact(alg)?;
    let z = lambda_cycles(alg, p)?;
    if z.is_empty() {
        return Ok(Vec::new());
    }
    let n = alg.require_finite()?;
    let rows = tuple_count(n, p + 1)?;
    let mut triplets = Vec::new();
    for (k, x) in z.iter().enumerate() {
        let bx = connes_b(alg, &chain_from_vector(alg, p, x)?, variant)?;
        for (i, v) in chain_to_vector(alg, &bx)? {
            triplets.push((i, k, v));
        }
    }
    let bz = SparseMatrix::from_triplets(rows, z.len(), alg.backend(), triplets)?;
    let system = bz.hstack(&b_matrix(alg, p + 2)?.scaled(&Scalar::from_i64(alg.backend(), -1)))?;
    let mut quotient = lambda_boundaries(alg, p)?;
    let mut reps = Vec::new();
    for v in kernel_basis_sparse(&system) {
        let mut x = SparseRow::new();
        for (k, a) in v.iter().filter(|(k, _)| **k < z.len()) {
            for (i, c) in &z[*k] {
                let slot = x.entry(*i).or_insert_with(|| Scalar::zero(alg.backend()));
                *slot += &(a * c);
            }
        }
        x.retain(|_, c| !c.is_zero());
        if quotient.insert(x.clone()) {
            reps.push(CyclicClassRep { chain: chain_from_vector(alg, p, &x)?, factors: None });
        }
    }
    Ok(reps)
}

/// Certifies that `chain` is a cyclic cycle with `B[chain] = 0` in `HH_{p+1}`.
///
/// The check runs in the subalgebra generated by the basis elements in the
/// chain's support; inclusion of subalgebras carries the witnesses over.
pub fn certify_in_ker_b(alg: &BasedSuperAlgebra, chain: &HochschildChain, variant: BVariant) -> Result<CyclicClassRep, HochschildError> {
    require_exact(alg)?;
    chain.check(alg)?;
    let mut gens: Vec<BasisId> = chain.terms().flat_map(|(t, _)| t.iter().copied()).collect();
    gens.sort();
    gens.dedup();
    let gens: Vec<Element> = gens.into_iter().map(|id| Element::basis(alg.backend(), id)).collect();
    let sub = generated_subalgebra(alg, &gens)?;
    let mut local = HochschildChain::zero(alg.backend(), chain.degree());
    for (factors, c) in chain.monomials() {
        local.add_scaled(&HochschildChain::from_tensor(&restrict_all(alg, &sub, &factors)?)?, c);
    }
    certify_local(&sub.algebra, &local, variant)?;
    Ok(CyclicClassRep { chain: chain.clone(), factors: None })
}

/// Certifies an elementary tensor `x₀ ⊗ … ⊗ x_p` of homogeneous elements.
pub fn certify_tensor_in_ker_b(alg: &BasedSuperAlgebra, factors: &[Element], variant: BVariant) -> Result<CyclicClassRep, HochschildError> {
    require_exact(alg)?;
    let mut gens = Vec::new();
    for f in factors {
        for part in alg.homogeneous_parts(f)? {
            if !part.is_zero() {
                gens.push(part);
            }
        }
    }
    let sub = generated_subalgebra(alg, &gens)?;
    let local = HochschildChain::from_tensor(&restrict_all(alg, &sub, factors)?)?;
    certify_local(&sub.algebra, &local, variant)?;
    Ok(CyclicClassRep { chain: HochschildChain::from_tensor(factors)?, factors: Some(factors.to_vec()) })
}

fn restrict_all(alg: &BasedSuperAlgebra, sub: &Subalgebra, xs: &[Element]) -> Result<Vec<Element>, HochschildError> {
    xs.iter()
        .map(|x| sub.restrict(alg, x)?.ok_or_else(|| HochschildError::Degree("factor outside its generated subalgebra".into())))
        .collect()
}

fn certify_local(alg: &BasedSuperAlgebra, x: &HochschildChain, variant: BVariant) -> Result<(), HochschildError> {
    let p = x.degree();
    if p > 0 && !norm_n(alg, &hoch_b(alg, x)?)?.is_zero() {
        // In characteristic zero ker N = im(1 − t).
        return Err(HochschildError::NotCyclicCycle);
    }
    let bx = chain_to_vector(alg, &connes_b(alg, x, variant)?)?;
    let mut ech = Echelon::new(alg.backend());
    for col in b_matrix(alg, p + 2)?.column_maps() {
        if !col.is_empty() {
            ech.insert(col);
        }
    }
    if ech.contains(&bx) {
        Ok(())
    } else {
        Err(HochschildError::NotInKerB)
    }
}

/// Whether `x` represents zero in `HC_p`, i.e. lies in `im b + im(1 − t)`.
pub fn is_cyclic_boundary(alg: &BasedSuperAlgebra, x: &HochschildChain) -> Result<bool, HochschildError> {
    require_exact(alg)?;
    Ok(lambda_boundaries(alg, x.degree())?.contains(&chain_to_vector(alg, x)?))
}

