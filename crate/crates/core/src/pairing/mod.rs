//! The pairing between Lie–Rinehart chains with partial-trace coefficients and
//! Hochschild chains, admissibility checks, lemma residuals and the class-level pairing.

mod lemmas;
pub mod spec_file;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::hochschild::{CyclicClassRep, HochschildChain, HochschildError};
use crate::lie_rinehart::{boundary_terms, classify_chain, BoundaryFactor, LRChain, LrError, RightModule, SuperLieRinehart};
use crate::scalar::{Backend, Scalar, ScalarError};
use crate::superalgebra::{
    ideal_power_basis, AlgebraError, BasedSuperAlgebra, BasisFunctional, BasisId, Element, IdealPower, Parity, PartialTrace,
    SuperDerivation,
};

pub use lemmas::{
    lemma2_sides, random_tau_chain, residual_lemma1, residual_lemma2, residual_stokes, rotate_and_multiply, stokes_sides, ETA_2, ETA_3,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PairingError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error(transparent)]
    Lr(#[from] LrError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("the evaluated product leaves J^{0}; the context is not admissible")]
    Escapes(usize),
    #[error("invalid context: {0}")]
    Context(String),
    #[error("values carry different powers of 2π ({0} and {1})")]
    MixedTwoPi(u32, u32),
    #[error("not a Lie–Rinehart cycle")]
    NotCycle,
}

/// A pairing value `value · (2π)^two_pi_power`, with the transcendental factor kept symbolic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairValue {
    pub value: Scalar,
    pub two_pi_power: u32,
}

impl PairValue {
    pub fn zero(backend: Backend) -> Self {
        Self { value: Scalar::zero(backend), two_pi_power: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Adds `k · value · (2π)^power`; zero contributions adopt any power.
    pub fn add_term(&mut self, value: &Scalar, power: u32) -> Result<(), PairingError> {
        if value.is_zero() {
            return Ok(());
        }
        if self.value.is_zero() {
            self.two_pi_power = power;
        } else if self.two_pi_power != power {
            return Err(PairingError::MixedTwoPi(self.two_pi_power, power));
        }
        self.value += value;
        if self.value.is_zero() {
            self.two_pi_power = 0;
        }
        Ok(())
    }

    pub fn add(&self, other: &PairValue) -> Result<PairValue, PairingError> {
        let mut out = self.clone();
        out.add_term(&other.value, other.two_pi_power)?;
        Ok(out)
    }

    pub fn scale(&self, k: &Scalar) -> PairValue {
        let value = &self.value * k;
        let two_pi_power = if value.is_zero() { 0 } else { self.two_pi_power };
        PairValue { value, two_pi_power }
    }

    pub fn sub(&self, other: &PairValue) -> Result<PairValue, PairingError> {
        self.add(&other.scale(&Scalar::from_i64(other.value.backend(), -1)))
    }

    /// Numerical value with the `2π` factors multiplied in.
    pub fn to_complex(&self) -> Complex64 {
        self.value.to_complex() * (2.0 * PI).powi(self.two_pi_power as i32)
    }

    pub fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }
}

/// The data `A → B`, `J ⊆ B`, `(L, k)` acting on `B`, and partial traces on `Jᵖ`.
#[derive(Clone, Debug)]
pub struct PairingContext {
    a: BasedSuperAlgebra,
    b: BasedSuperAlgebra,
    /// Images of the basis of A; `None` for the identity of `A = B`.
    phi: Option<BTreeMap<BasisId, Element>>,
    j: IdealPower,
    jp: IdealPower,
    lr: SuperLieRinehart,
    module: RightModule,
}

impl PairingContext {
    /// Builds a context. `j_gens` empty means `J = B`. The module must carry
    /// its functionals (see `trace_module`).
    pub fn new(
        a: Option<BasedSuperAlgebra>,
        b: BasedSuperAlgebra,
        phi: Option<BTreeMap<BasisId, Element>>,
        j_gens: &[Element],
        p: usize,
        lr: SuperLieRinehart,
        module: RightModule,
    ) -> Result<Self, PairingError> {
        let (j, jp) = ideal_powers(&b, j_gens, p)?;
        if !lr.over_ground_field() {
            return Err(PairingError::Context("the pairing is implemented for pairs over the ground field".into()));
        }
        if lr.backend() != b.backend() || module.backend() != b.backend() {
            return Err(ScalarError::Mixed(b.backend(), lr.backend()).into());
        }
        for g in 0..lr.rank() {
            if lr.action(g).is_none() {
                return Err(PairingError::Context(format!("generator {} has no action on {}", lr.generators()[g].name, b.name())));
            }
        }
        let Some(fs) = module.functionals() else {
            return Err(PairingError::Context("the coefficient module must consist of functionals on J^p".into()));
        };
        if fs.len() != module.dim() {
            return Err(PairingError::Context("one functional per module basis vector".into()));
        }
        let a = match (a, &phi) {
            (Some(a), Some(map)) => {
                if a.backend() != b.backend() {
                    return Err(ScalarError::Mixed(b.backend(), a.backend()).into());
                }
                for id in a.basis()? {
                    let img = map.get(&id).ok_or_else(|| PairingError::Context(format!("phi has no image for {}", a.label(id))))?;
                    b.check_element(img)?;
                }
                a
            }
            (Some(_), None) => return Err(PairingError::Context("a separate source algebra needs phi".into())),
            (None, Some(_)) => return Err(PairingError::Context("phi needs a source algebra".into())),
            (None, None) => b.clone(),
        };
        Ok(Self { a, b, phi, j, jp, lr, module })
    }

    /// `A = B` with the trace module of all partial traces on `Jᵖ`.
    pub fn with_partial_traces(b: BasedSuperAlgebra, j_gens: &[Element], p: usize, lr: SuperLieRinehart) -> Result<Self, PairingError> {
        let (_, jp) = ideal_powers(&b, j_gens, p)?;
        let module = crate::lie_rinehart::trace_module(&b, &jp, &lr)?;
        Self::new(None, b, None, j_gens, p, lr, module)
    }

    /// `A = B` with the module spanned by the given traces.
    pub fn with_traces(
        b: BasedSuperAlgebra,
        j_gens: &[Element],
        p: usize,
        lr: SuperLieRinehart,
        traces: Vec<PartialTrace>,
    ) -> Result<Self, PairingError> {
        let module = crate::lie_rinehart::trace_module_from(&b, traces, &lr)?;
        Self::new(None, b, None, j_gens, p, lr, module)
    }

    pub fn source(&self) -> &BasedSuperAlgebra {
        &self.a
    }

    pub fn target(&self) -> &BasedSuperAlgebra {
        &self.b
    }

    pub fn lr(&self) -> &SuperLieRinehart {
        &self.lr
    }

    pub fn module(&self) -> &RightModule {
        &self.module
    }

    pub fn degree(&self) -> usize {
        self.jp.degree()
    }

    pub fn ideal(&self) -> &IdealPower {
        &self.j
    }

    pub fn ideal_power(&self) -> &IdealPower {
        &self.jp
    }

    pub fn backend(&self) -> Backend {
        self.b.backend()
    }

    /// `φ(x)` for an element of A.
    pub fn phi(&self, x: &Element) -> Result<Element, PairingError> {
        self.a.check_element(x)?;
        match &self.phi {
            None => Ok(x.clone()),
            Some(map) => {
                let mut out = Element::zero(self.b.backend());
                for (id, c) in x.terms() {
                    out.add_scaled(&map[id], c);
                }
                Ok(out)
            }
        }
    }

    fn functional(&self, a: usize) -> &PartialTrace {
        &self.module.functionals().expect("checked at construction")[a]
    }

    fn action(&self, g: usize) -> &SuperDerivation {
        self.lr.action(g).expect("checked at construction")
    }

    /// Residuals of the admissibility conditions. Basis pairs of A are
    /// checked exhaustively when A is finite and on a window otherwise.
    pub fn check_admissible(&self) -> Result<AdmissibilityReport, PairingError> {
        let a_basis = sample_basis(&self.a);
        let mut homomorphism: f64 = 0.0;
        let mut unit: f64 = 0.0;
        if self.phi.is_some() {
            for &x in &a_basis {
                for &y in &a_basis {
                    let lhs = self.phi(&self.a.mul_basis(x, y))?;
                    let rhs = self.b.mul(&self.phi(&self.a.basis_element(x)?)?, &self.phi(&self.a.basis_element(y)?)?)?;
                    homomorphism = homomorphism.max(lhs.distance(&rhs));
                }
            }
            unit = self.phi(&self.a.unit())?.distance(&self.b.unit());
        }
        let mut derivations_into_j: f64 = 0.0;
        for g in 0..self.lr.rank() {
            for &x in &a_basis {
                let img = self.action(g).apply(&self.b, &self.phi(&self.a.basis_element(x)?)?)?;
                derivations_into_j = derivations_into_j.max(self.j.residual(&self.b, &img)?);
            }
        }
        let mut traces_vanish_on_commutators: f64 = 0.0;
        let fs = self.module.functionals().expect("checked at construction");
        match &self.jp {
            IdealPower::Span { .. } => {
                for t in fs {
                    traces_vanish_on_commutators = traces_vanish_on_commutators.max(t.commutator_residual(&self.b, &self.jp)?);
                }
            }
            IdealPower::Whole { .. } => {
                let window = sample_basis(&self.b);
                for t in fs {
                    for &x in &window {
                        for &y in &window {
                            let c = self.b.super_commutator(&self.b.basis_element(x)?, &self.b.basis_element(y)?)?;
                            traces_vanish_on_commutators = traces_vanish_on_commutators.max(t.eval(&c).magnitude());
                        }
                    }
                }
            }
        }
        Ok(AdmissibilityReport { homomorphism, unit, derivations_into_j, traces_vanish_on_commutators })
    }
}

fn ideal_powers(b: &BasedSuperAlgebra, j_gens: &[Element], p: usize) -> Result<(IdealPower, IdealPower), PairingError> {
    if j_gens.is_empty() {
        if b.is_finite() {
            return Ok((IdealPower::whole_finite(b, 1)?, IdealPower::whole_finite(b, p)?));
        }
        return Ok((IdealPower::Whole { p: 1 }, IdealPower::Whole { p }));
    }
    Ok((ideal_power_basis(b, j_gens, 1)?, ideal_power_basis(b, j_gens, p)?))
}

/// All basis ids of a finite algebra, or a small lattice window otherwise.
fn sample_basis(alg: &BasedSuperAlgebra) -> Vec<BasisId> {
    if let Ok(b) = alg.basis() {
        return b;
    }
    let mut out = Vec::new();
    for m in -2..=2 {
        if alg.contains_id(BasisId::Z(m)) {
            out.push(BasisId::Z(m));
        }
        for n in -2..=2 {
            if alg.contains_id(BasisId::Z2(m, n)) {
                out.push(BasisId::Z2(m, n));
            }
        }
    }
    out
}

/// Per-condition maximal residuals; all exactly zero for an admissible exact context.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub homomorphism: f64,
    pub unit: f64,
    pub derivations_into_j: f64,
    pub traces_vanish_on_commutators: f64,
}

impl AdmissibilityReport {
    pub fn worst(&self) -> f64 {
        [self.homomorphism, self.unit, self.derivations_into_j, self.traces_vanish_on_commutators].into_iter().fold(0.0, f64::max)
    }

    pub fn is_admissible(&self, tolerance: f64) -> bool {
        self.worst() <= tolerance
    }
}

/// The functional applied to the final product.
enum Functional<'a> {
    Trace(&'a PartialTrace),
    /// `τ ∘ X`: the right action evaluated on the product itself.
    Acted(&'a PartialTrace, &'a SuperDerivation),
}

struct Evaluator<'c> {
    ctx: &'c PairingContext,
}

impl<'c> Evaluator<'c> {
    fn two_pi(&self, f: &Functional) -> u32 {
        match f {
            Functional::Trace(_) => 0,
            Functional::Acted(_, d) => d.two_pi,
        }
    }

    /// `f(prefix · last)`, checking that the argument of the trace lies in `Jᵖ`.
    fn eval(&self, f: &Functional, prefix: &Element, last: &Element) -> Result<Scalar, PairingError> {
        let b = &self.ctx.b;
        let jp = &self.ctx.jp;
        match jp {
            IdealPower::Span { .. } => {
                let y = b.mul(prefix, last)?;
                let (t, y) = match f {
                    Functional::Trace(t) => (*t, y),
                    Functional::Acted(t, d) => (*t, d.apply(b, &y)?),
                };
                t.eval_in(b, jp, &y).map_err(|e| match e {
                    AlgebraError::NotInIdeal(p) => PairingError::Escapes(p),
                    e => e.into(),
                })
            }
            IdealPower::Whole { .. } => {
                let values = match f {
                    Functional::Trace(t) => t.values.clone(),
                    Functional::Acted(t, d) => d.pullback(b, &t.values)?,
                };
                restricted_product_value(b, &values, prefix, last)
            }
        }
    }
}

/// `f(x · y)` on a countable lattice basis, touching only the products that land in the support of `f`.
fn restricted_product_value(b: &BasedSuperAlgebra, f: &BasisFunctional, x: &Element, y: &Element) -> Result<Scalar, PairingError> {
    let mut acc = Scalar::zero(b.backend());
    for (w, fw) in f {
        for (s, xs) in x.terms() {
            let t = match (w, s) {
                (BasisId::Z(w), BasisId::Z(s)) => BasisId::Z(w - s),
                (BasisId::Z2(w0, w1), BasisId::Z2(s0, s1)) => BasisId::Z2(w0 - s0, w1 - s1),
                _ => return Err(PairingError::Context("restricted products need a lattice basis".into())),
            };
            let yt = y.coeff(t);
            if yt.is_zero() {
                continue;
            }
            let c = b.mul_basis(*s, t).coeff(*w);
            acc += &(&(&c * xs) * &(&yt * fw));
        }
    }
    Ok(acc)
}

/// `−(−1)^{|X||Y|}` as a sign flag.
fn wedge_swap_negates(x: Parity, y: Parity) -> bool {
    !x.koszul(y)
}

fn permutations(p: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(p), &mut vec![false; p], &mut out);
    out
}

/// A Hochschild monomial mapped into B: images of the factors, their parities in A, and a coefficient.
struct Tensor {
    factors: Vec<Element>,
    parities: Vec<Parity>,
    coeff: Scalar,
}

impl PairingContext {
    fn tensors_of_chain(&self, c: &HochschildChain) -> Result<Vec<Tensor>, PairingError> {
        c.check(&self.a)?;
        let mut out = Vec::with_capacity(c.len());
        for (t, k) in c.terms() {
            let factors = t.iter().map(|id| self.phi(&Element::basis(self.a.backend(), *id))).collect::<Result<Vec<_>, _>>()?;
            let parities = t.iter().map(|id| self.a.parity(*id)).collect::<Result<Vec<_>, _>>()?;
            out.push(Tensor { factors, parities, coeff: k.clone() });
        }
        Ok(out)
    }

    fn tensor_of_elements(&self, xs: &[Element]) -> Result<Option<Tensor>, PairingError> {
        let mut parities = Vec::with_capacity(xs.len());
        for x in xs {
            match self.a.element_parity(x)? {
                Some(p) => parities.push(p),
                None => return Ok(None),
            }
        }
        let factors = xs.iter().map(|x| self.phi(x)).collect::<Result<Vec<_>, _>>()?;
        Ok(Some(Tensor { factors, parities, coeff: Scalar::one(self.backend()) }))
    }

    /// `Σ_σ ε(σ) f(a₀ · X_{σ1}(a₁) ⋯ X_{σp}(a_p))` for one wedge word and one tensor.
    fn pair_word(&self, f: &Functional, gens: &[usize], tensor: &Tensor, out: &mut PairValue, k: &Scalar) -> Result<(), PairingError> {
        let p = gens.len();
        if tensor.factors.len() != p + 1 {
            return Err(PairingError::Degree(format!("Lie–Rinehart degree {p} against Hochschild degree {}", tensor.factors.len() - 1)));
        }
        let ev = Evaluator { ctx: self };
        let power = gens.iter().map(|g| self.action(*g).two_pi).sum::<u32>() + ev.two_pi(f);
        // images[i][k] = X_{gens[i]}(a_{k+1})
        let mut images = Vec::with_capacity(p);
        for &g in gens {
            let d = self.action(g);
            images.push(tensor.factors[1..].iter().map(|x| d.apply(&self.b, x)).collect::<Result<Vec<_>, _>>()?);
        }
        let gpar: Vec<Parity> = gens.iter().map(|g| self.lr.parity(*g)).collect();
        let unit = self.b.unit();
        let mut total = Scalar::zero(self.backend());
        for sigma in permutations(p) {
            let mut negate = false;
            for s in 0..p {
                for r in s + 1..p {
                    if sigma[s] > sigma[r] && wedge_swap_negates(gpar[sigma[s]], gpar[sigma[r]]) {
                        negate = !negate;
                    }
                }
                // X_{σ(s)} moves left past a₀ … a_s.
                if gpar[sigma[s]].is_odd() && tensor.parities[..=s].iter().filter(|q| q.is_odd()).count() % 2 == 1 {
                    negate = !negate;
                }
            }
            let mut prefix = tensor.factors[0].clone();
            let mut vanished = prefix.is_zero();
            for s in 0..p.saturating_sub(1) {
                if vanished {
                    break;
                }
                prefix = self.b.mul(&prefix, &images[sigma[s]][s])?;
                vanished = prefix.is_zero();
            }
            if vanished {
                continue;
            }
            let last = if p == 0 { &unit } else { &images[sigma[p - 1]][p - 1] };
            if last.is_zero() {
                continue;
            }
            let v = ev.eval(f, &prefix, last)?;
            total += &v.signed(negate);
        }
        out.add_term(&(&total * &(k * &tensor.coeff)), power)
    }

    fn check_degrees(&self, lr_degree: usize, hoch_degree: usize) -> Result<(), PairingError> {
        if lr_degree != hoch_degree {
            return Err(PairingError::Degree(format!("Lie–Rinehart degree {lr_degree} against Hochschild degree {hoch_degree}")));
        }
        Ok(())
    }

    fn pair_tensors(&self, tau: &LRChain, tensors: &[Tensor]) -> Result<PairValue, PairingError> {
        let mut out = PairValue::zero(self.backend());
        for ((a, gens), k) in tau.terms() {
            let f = Functional::Trace(self.functional(*a));
            for t in tensors {
                self.pair_word(&f, gens, t, &mut out, k)?;
            }
        }
        Ok(out)
    }

    fn pair_boundary_tensors(&self, tau: &LRChain, tensors: &[Tensor]) -> Result<PairValue, PairingError> {
        let mut out = PairValue::zero(self.backend());
        for (factor, gens, k) in boundary_terms(&self.lr, tau)? {
            let (f, k) = match factor {
                BoundaryFactor::Act { a, g } => (Functional::Acted(self.functional(a), self.action(g)), k),
                // Over the ground field bracket coefficients are scalars.
                BoundaryFactor::Scale { a, r } => (Functional::Trace(self.functional(a)), &k * &r.coeff(BasisId::Idx(0))),
            };
            for t in tensors {
                self.pair_word(&f, &gens, t, &mut out, &k)?;
            }
        }
        Ok(out)
    }
}

/// The bilinear pairing of a Lie–Rinehart chain over the trace module with a Hochschild chain of A.
pub fn pair(ctx: &PairingContext, tau: &LRChain, hoch: &HochschildChain) -> Result<PairValue, PairingError> {
    ctx.check_degrees(tau.degree(), hoch.degree())?;
    check_tau(ctx, tau)?;
    ctx.pair_tensors(tau, &ctx.tensors_of_chain(hoch)?)
}

/// The pairing with an elementary tensor of homogeneous elements of A, without expanding it.
pub fn pair_tensor(ctx: &PairingContext, tau: &LRChain, factors: &[Element]) -> Result<PairValue, PairingError> {
    if factors.is_empty() {
        return Err(PairingError::Degree("a tensor needs at least one factor".into()));
    }
    ctx.check_degrees(tau.degree(), factors.len() - 1)?;
    check_tau(ctx, tau)?;
    for x in factors {
        ctx.a.check_element(x)?;
    }
    if factors.iter().any(Element::is_zero) {
        return Ok(PairValue::zero(ctx.backend()));
    }
    let mut tensors = Vec::new();
    let mut split = vec![Vec::new()];
    // Inhomogeneous factors are split into parity components.
    for x in factors {
        let parts: Vec<Element> = ctx.a.homogeneous_parts(x)?.into_iter().filter(|e| !e.is_zero()).collect();
        split = split.into_iter().flat_map(|prefix: Vec<Element>| parts.iter().map(move |q| [prefix.clone(), vec![q.clone()]].concat())).collect();
    }
    for xs in split {
        if let Some(t) = ctx.tensor_of_elements(&xs)? {
            tensors.push(t);
        }
    }
    ctx.pair_tensors(tau, &tensors)
}

/// `∂(τ-chain) · c`, with the right action evaluated on the product itself: the
/// term `(τ·X) ⊗ …` contributes `τ(X(a₀ ⋯))`, which is defined whenever the
/// Leibniz expansion lands in `Jᵖ` even if `a₀ ⋯` does not.
pub fn pair_boundary(ctx: &PairingContext, tau: &LRChain, hoch: &HochschildChain) -> Result<PairValue, PairingError> {
    if tau.degree() == 0 {
        return Err(PairingError::Degree("∂ is not defined on degree 0".into()));
    }
    ctx.check_degrees(tau.degree() - 1, hoch.degree())?;
    check_tau(ctx, tau)?;
    ctx.pair_boundary_tensors(tau, &ctx.tensors_of_chain(hoch)?)
}

fn check_tau(ctx: &PairingContext, tau: &LRChain) -> Result<(), PairingError> {
    if tau.backend() != ctx.backend() {
        return Err(ScalarError::Mixed(ctx.backend(), tau.backend()).into());
    }
    for ((a, gens), _) in tau.terms() {
        if *a >= ctx.module.dim() || gens.iter().any(|g| *g >= ctx.lr.rank()) {
            return Err(PairingError::Context("chain does not belong to the context's module".into()));
        }
    }
    Ok(())
}

/// The class-level pairing `[τ-cycle] · [x]` for a certified representative of a class in `ker B`.
pub fn pair_classes(ctx: &PairingContext, lr_cycle: &LRChain, rep: &CyclicClassRep) -> Result<PairValue, PairingError> {
    if lr_cycle.degree() > 0 {
        let is_cycle = if ctx.backend().is_exact() {
            classify_chain(&ctx.lr, &ctx.module, lr_cycle)?.is_cycle()
        } else {
            let bd = crate::lie_rinehart::lr_boundary(&ctx.lr, &ctx.module, lr_cycle)?;
            bd.max_magnitude() <= crate::linalg::DEFAULT_RELATIVE_PIVOT * lr_cycle.max_magnitude().max(1.0)
        };
        if !is_cycle {
            return Err(PairingError::NotCycle);
        }
    }
    match rep.factors() {
        Some(f) => pair_tensor(ctx, lr_cycle, f),
        None => pair(ctx, lr_cycle, rep.chain()),
    }
}

#[cfg(test)]
mod tests;
