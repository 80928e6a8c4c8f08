use super::{pair, pair_boundary, PairValue, PairingContext, PairingError};
use crate::hochschild::{connes_b, cyclic_t, hoch_b, one_minus_t, BVariant, HochschildChain};
use crate::lie_rinehart::LRChain;
use crate::sampling::{random_lr_chain, SampleRng};
use crate::scalar::Scalar;
use crate::superalgebra::BasedSuperAlgebra;

/// Sign relating `(τ⊗X)·(1−t)c` to `∂(τ⊗X)·rotate_and_multiply(c)`.
pub const ETA_2: i64 = 1;

/// Sign relating `(τ⊗X)·B(c)` to `p·∂(τ⊗X)·c`; the same for both models of B.
pub const ETA_3: i64 = -1;

/// `d₀ ∘ t`: `a₀⊗…⊗a_p ↦ ±a_p a₀ ⊗ a₁ ⊗ … ⊗ a_{p−1}` with the sign of `t`.
pub fn rotate_and_multiply(alg: &BasedSuperAlgebra, c: &HochschildChain) -> Result<HochschildChain, PairingError> {
    if c.degree() == 0 {
        return Err(PairingError::Degree("rotate_and_multiply needs degree at least 1".into()));
    }
    let t = cyclic_t(alg, c)?;
    let mut out = HochschildChain::zero(alg.backend(), c.degree() - 1);
    for (tuple, k) in t.terms() {
        for (id, x) in alg.mul_basis(tuple[0], tuple[1]).terms() {
            let mut nt = Vec::with_capacity(tuple.len() - 1);
            nt.push(*id);
            nt.extend_from_slice(&tuple[2..]);
            out.add_term(nt, k * x);
        }
    }
    Ok(out)
}

/// `(τ⊗X) · b(c)` for `c` of degree `p + 1`.
pub fn residual_lemma1(ctx: &PairingContext, tau: &LRChain, c: &HochschildChain) -> Result<PairValue, PairingError> {
    pair(ctx, tau, &hoch_b(ctx.source(), c)?)
}

/// Both sides `((τ⊗X)·(1−t)c, ∂(τ⊗X)·rotate_and_multiply(c))`.
pub fn lemma2_sides(ctx: &PairingContext, tau: &LRChain, c: &HochschildChain) -> Result<(PairValue, PairValue), PairingError> {
    let lhs = pair(ctx, tau, &one_minus_t(ctx.source(), c)?)?;
    let rhs = pair_boundary(ctx, tau, &rotate_and_multiply(ctx.source(), c)?)?;
    Ok((lhs, rhs))
}

pub fn residual_lemma2(ctx: &PairingContext, tau: &LRChain, c: &HochschildChain) -> Result<PairValue, PairingError> {
    let (lhs, rhs) = lemma2_sides(ctx, tau, c)?;
    lhs.sub(&rhs.scale(&Scalar::from_i64(ctx.backend(), ETA_2)))
}

/// Both sides `((τ⊗X)·B(c), p·∂(τ⊗X)·c)` for `c` of degree `p − 1`.
pub fn stokes_sides(ctx: &PairingContext, tau: &LRChain, c: &HochschildChain, variant: BVariant) -> Result<(PairValue, PairValue), PairingError> {
    let lhs = pair(ctx, tau, &connes_b(ctx.source(), c, variant)?)?;
    let rhs = pair_boundary(ctx, tau, c)?.scale(&Scalar::from_i64(ctx.backend(), tau.degree() as i64));
    Ok((lhs, rhs))
}

pub fn residual_stokes(ctx: &PairingContext, tau: &LRChain, c: &HochschildChain, variant: BVariant) -> Result<PairValue, PairingError> {
    let (lhs, rhs) = stokes_sides(ctx, tau, c, variant)?;
    lhs.sub(&rhs.scale(&Scalar::from_i64(ctx.backend(), ETA_3)))
}

/// Random chain of the context's degree over its trace module.
pub fn random_tau_chain(ctx: &PairingContext, rng: &mut SampleRng, terms: usize) -> LRChain {
    random_lr_chain(ctx.lr(), ctx.module(), rng, ctx.degree(), terms)
}
