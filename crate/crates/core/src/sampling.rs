//! Seeded random elements and chains for property sweeps.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hochschild::HochschildChain;
use crate::lie_rinehart::{chain_basis, LRChain, RightModule, SuperLieRinehart};
use crate::scalar::{Backend, Scalar};
use crate::superalgebra::{AlgebraError, BasedSuperAlgebra, BasisId, Element};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small nonzero coefficient in the given backend.
pub fn small_scalar(rng: &mut SampleRng, backend: Backend) -> Scalar {
    fn pick(rng: &mut SampleRng) -> i64 {
        loop {
            let k: i64 = rng.gen_range(-3..=3);
            if k != 0 {
                return k;
            }
        }
    }
    match backend {
        Backend::Rational => Scalar::from_ratio(backend, pick(rng), rng.gen_range(1..=2)),
        Backend::Gaussian => {
            let re = Scalar::from_i64(backend, pick(rng));
            if rng.gen_bool(0.5) {
                let im = Scalar::imaginary_unit(backend).expect("gaussian has i").scale_i64(pick(rng));
                &re + &im
            } else {
                re
            }
        }
        Backend::Approx => Scalar::approx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
    }
}

/// Random combination of up to `terms` basis elements of a finite algebra.
pub fn random_element(alg: &BasedSuperAlgebra, rng: &mut SampleRng, terms: usize) -> Result<Element, AlgebraError> {
    let basis = alg.basis()?;
    let mut e = Element::zero(alg.backend());
    for _ in 0..terms {
        let id = *basis.choose(rng).expect("nonempty basis");
        e.add_term(id, small_scalar(rng, alg.backend()));
    }
    Ok(e)
}

/// Random homogeneous element of the requested parity (zero if none exists).
pub fn random_homogeneous(alg: &BasedSuperAlgebra, rng: &mut SampleRng, odd: bool, terms: usize) -> Result<Element, AlgebraError> {
    let e = random_element(alg, rng, terms)?;
    let [even, o] = alg.homogeneous_parts(&e)?;
    Ok(if odd { o } else { even })
}

/// Random chain of degree `p` with up to `terms` basis tuples.
pub fn random_chain(alg: &BasedSuperAlgebra, rng: &mut SampleRng, p: usize, terms: usize) -> Result<HochschildChain, AlgebraError> {
    let basis = alg.basis()?;
    let mut c = HochschildChain::zero(alg.backend(), p);
    for _ in 0..terms {
        let t: Vec<BasisId> = (0..=p).map(|_| *basis.choose(rng).expect("nonempty basis")).collect();
        c.add_term(t, small_scalar(rng, alg.backend()));
    }
    Ok(c)
}

/// Random chain in `M ⊗ Λᵖ L` with up to `terms` basis monomials.
pub fn random_lr_chain(lr: &SuperLieRinehart, module: &RightModule, rng: &mut SampleRng, p: usize, terms: usize) -> LRChain {
    let basis = chain_basis(lr, module, p);
    let mut c = LRChain::zero(lr.backend(), p);
    if basis.is_empty() {
        return c;
    }
    for _ in 0..terms {
        let (a, gens) = basis.choose(rng).expect("nonempty chain basis");
        c.add_scaled(&LRChain::monomial(lr, *a, gens), &small_scalar(rng, lr.backend()));
    }
    c
}
