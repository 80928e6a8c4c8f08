use std::collections::BTreeMap;

use serde::Serialize;

use super::DemoError;
use crate::hochschild::{certify_tensor_in_ker_b, BVariant};
use crate::lie_rinehart::{LGenerator, LRChain, SuperLieRinehart};
use crate::linalg::{rank, SparseMatrix};
use crate::pairing::{pair_classes, PairValue, PairingContext};
use crate::report::Report;
use crate::scalar::{Backend, Scalar};
use crate::superalgebra::{build_standard_algebra, BasedSuperAlgebra, BasisId, Element, PartialTrace, StandardKind, SuperDerivation};

pub type Matrix = Vec<Vec<Scalar>>;

/// A finite even Fredholm module: `H = H₀ ⊕ H₁`, an odd involution `F` and an even projection `e`.
#[derive(Clone, Debug, Serialize)]
pub struct FredholmModel {
    pub n0: usize,
    pub n1: usize,
    pub f: Matrix,
    pub e: Matrix,
    pub p: usize,
}

impl FredholmModel {
    /// `F` swapping `H₀ = kⁿ` and `H₁ = kⁿ`, and `e` diagonal with the given 0/1 entries.
    pub fn diagonal(n: usize, e_diag: &[i64], p: usize) -> Result<Self, DemoError> {
        if e_diag.len() != 2 * n {
            return Err(DemoError::Invalid(format!("e needs {} diagonal entries", 2 * n)));
        }
        let b = Backend::Gaussian;
        let zero = Scalar::zero(b);
        let mut f = vec![vec![zero.clone(); 2 * n]; 2 * n];
        let mut e = vec![vec![zero; 2 * n]; 2 * n];
        for i in 0..n {
            f[i][i + n] = Scalar::one(b);
            f[i + n][i] = Scalar::one(b);
        }
        for (i, x) in e_diag.iter().enumerate() {
            e[i][i] = Scalar::from_i64(b, *x);
        }
        let m = Self { n0: n, n1: n, f, e, p };
        m.validate()?;
        Ok(m)
    }

    fn dim(&self) -> usize {
        self.n0 + self.n1
    }

    fn odd(&self, i: usize) -> bool {
        i >= self.n0
    }

    pub fn validate(&self) -> Result<(), DemoError> {
        let n = self.dim();
        let square = |m: &Matrix| m.len() == n && m.iter().all(|r| r.len() == n);
        if !square(&self.f) || !square(&self.e) {
            return Err(DemoError::Invalid(format!("F and e must be {n}×{n}")));
        }
        if self.p % 2 == 1 {
            return Err(DemoError::Invalid("the degree p must be even".into()));
        }
        let backend = self.e[0][0].backend();
        if !backend.is_exact() {
            return Err(DemoError::Invalid("the Fredholm demo runs in exact arithmetic".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if self.odd(i) == self.odd(j) && !self.f[i][j].is_zero() {
                    return Err(DemoError::Invalid("F must be odd".into()));
                }
                if self.odd(i) != self.odd(j) && !self.e[i][j].is_zero() {
                    return Err(DemoError::Invalid("e must be even".into()));
                }
                if self.f[i][j] != self.f[j][i].conj() || self.e[i][j] != self.e[j][i].conj() {
                    return Err(DemoError::Invalid("F and e must be self-adjoint".into()));
                }
            }
        }
        let id: Matrix = (0..n).map(|i| (0..n).map(|j| if i == j { Scalar::one(backend) } else { Scalar::zero(backend) }).collect()).collect();
        if mat_mul(&self.f, &self.f) != id {
            return Err(DemoError::Invalid("F² must be 1".into()));
        }
        if mat_mul(&self.e, &self.e) != self.e {
            return Err(DemoError::Invalid("e² must be e".into()));
        }
        Ok(())
    }

    /// `Index(e₁₁ F₁₀ e₀₀ : e₀₀H₀ → e₁₁H₁) = dim ker − dim coker`.
    pub fn index(&self) -> Result<i64, DemoError> {
        let (n0, n1) = (self.n0, self.n1);
        let block = |m: &Matrix, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>| -> Matrix {
            rows.map(|i| cols.clone().map(|j| m[i][j].clone()).collect()).collect()
        };
        let e00 = block(&self.e, 0..n0, 0..n0);
        let e11 = block(&self.e, n0..n0 + n1, n0..n0 + n1);
        let f10 = block(&self.f, n0..n0 + n1, 0..n0);
        let t = mat_mul(&mat_mul(&e11, &f10), &e00);
        let backend = self.e[0][0].backend();
        let r = |m: &Matrix| -> Result<i64, DemoError> { Ok(rank(&SparseMatrix::from_dense(backend, m)?) as i64) };
        let rt = r(&t)?;
        Ok((r(&e00)? - rt) - (r(&e11)? - rt))
    }
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let backend = a[0][0].backend();
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| {
                    let mut acc = Scalar::zero(backend);
                    for k in 0..b.len() {
                        acc += &(&a[i][k] * &b[k][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn element_of(alg: &BasedSuperAlgebra, m: &Matrix) -> Element {
    let n = m.len();
    let mut e = Element::zero(alg.backend());
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            e.add_term(BasisId::Idx(i * n + j), x.clone());
        }
    }
    e
}

#[derive(Clone, Debug, Serialize)]
pub struct FredholmValues {
    pub pairing: PairValue,
    pub index: i64,
    /// `pairing / index` when the index is nonzero.
    pub ratio: Option<Scalar>,
}

/// `[str ⊗ d∧…∧d] · [e⊗…⊗e]` and the index of `e₁₁F₁₀e₀₀`.
pub fn fredholm_values(model: &FredholmModel) -> Result<FredholmValues, DemoError> {
    model.validate()?;
    let backend = model.e[0][0].backend();
    let std = build_standard_algebra(&StandardKind::GradedEndomorphisms(model.n0, model.n1), backend)?;
    let alg = std.algebra;
    let f = element_of(&alg, &model.f);
    let e = element_of(&alg, &model.e);
    let d = SuperDerivation::inner("d", &alg, f)?;
    let lr = SuperLieRinehart::lie_algebra(backend, vec![LGenerator::new("d", d.parity)], &[])?.with_action(BTreeMap::from([("d".to_string(), d)]))?;
    let str_: PartialTrace = std.traces.into_iter().find(|t| t.name == "str").expect("supertrace");
    let ctx = PairingContext::with_traces(alg.clone(), &[], model.p, lr, vec![str_])?;
    let cycle = LRChain::monomial(ctx.lr(), 0, &vec![0; model.p]);
    let pairing = if e.is_zero() {
        PairValue::zero(backend)
    } else {
        let rep = certify_tensor_in_ker_b(&alg, &vec![e; model.p + 1], BVariant::Full)?;
        pair_classes(&ctx, &cycle, &rep)?
    };
    let index = model.index()?;
    let ratio = if index != 0 { pairing.value.checked_div(&Scalar::from_i64(backend, index)).ok() } else { None };
    Ok(FredholmValues { pairing, index, ratio })
}

pub fn demo_fredholm(model: &FredholmModel) -> Result<Report, DemoError> {
    let v = fredholm_values(model)?;
    let mut r = Report::new("demo fredholm");
    r.input("n0", model.n0).input("n1", model.n1).input("p", model.p).input("F", &model.f).input("e", &model.e);
    r.output("pairing", &v.pairing).output("index", v.index).output("ratio", &v.ratio);
    // The pairing and the index vanish together.
    r.flag("zero_pairing_iff_zero_index", v.pairing.is_zero() == (v.index == 0));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> Scalar {
        Scalar::from_i64(Backend::Gaussian, n)
    }

    #[test]
    fn indices_and_constant_ratio() {
        let cases = [(1, vec![1, 0], 1), (1, vec![0, 1], -1), (2, vec![1, 1, 0, 0], 2), (2, vec![1, 0, 0, 0], 1)];
        for (n, diag, index) in cases {
            let v = fredholm_values(&FredholmModel::diagonal(n, &diag, 2).unwrap()).unwrap();
            assert_eq!(v.index, index);
            assert_eq!(v.ratio, Some(g(-2)), "{diag:?}");
        }
    }

    #[test]
    fn commuting_projections_pair_to_zero() {
        for diag in [vec![1, 1], vec![0, 0]] {
            let v = fredholm_values(&FredholmModel::diagonal(1, &diag, 2).unwrap()).unwrap();
            assert_eq!(v.index, 0);
            assert!(v.pairing.is_zero());
        }
    }

    #[test]
    fn degree_four() {
        let v = fredholm_values(&FredholmModel::diagonal(1, &[1, 0], 4).unwrap()).unwrap();
        assert_eq!(v.index, 1);
        assert!(!v.pairing.is_zero());
    }

    #[test]
    fn rejects_bad_models() {
        assert!(FredholmModel::diagonal(1, &[1, 0], 1).is_err());
        assert!(FredholmModel::diagonal(1, &[2, 0], 2).is_err());
        assert!(FredholmModel::diagonal(1, &[1], 2).is_err());
        let mut m = FredholmModel::diagonal(1, &[1, 0], 2).unwrap();
        m.f[0][0] = g(1);
        assert!(m.validate().is_err());
    }
}
