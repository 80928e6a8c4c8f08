use serde::Serialize;

use super::DemoError;
use crate::hochschild::hoch_b;
use crate::hochschild::HochschildChain;
use crate::lie_rinehart::{LGenerator, LRChain, SuperLieRinehart};
use crate::pairing::{pair_tensor, PairValue, PairingContext};
use crate::report::Report;
use crate::scalar::{Backend, Scalar};
use crate::superalgebra::{build_standard_algebra, BasisId, Element, Parity, StandardKind};

#[derive(Clone, Debug, Serialize)]
pub struct CircleValues {
    pub pairing: PairValue,
    /// `pairing / 2πi`, exact.
    pub winding: Scalar,
}

/// `[τ ⊗ X] · [z^{−n} ⊗ z^n]` on the Laurent polynomials with `X(z) = 2πi z`.
pub fn circle_values(n: i64) -> Result<CircleValues, DemoError> {
    let b = Backend::Gaussian;
    let std = build_standard_algebra(&StandardKind::CircleLaurent, b)?;
    let x = std.derivation("X").expect("circle derivation").clone();
    let lr = SuperLieRinehart::lie_algebra(b, vec![LGenerator::new("X", Parity::Even)], &[])?.with_action([("X".to_string(), x)].into())?;
    let tau = std.trace("tau").expect("circle trace").clone();
    let ctx = PairingContext::with_traces(std.algebra.clone(), &[], 1, lr, vec![tau])?;
    let chain = LRChain::monomial(ctx.lr(), 0, &[0]);
    let factors = [Element::basis(b, BasisId::Z(-n)), Element::basis(b, BasisId::Z(n))];
    let pairing = pair_tensor(&ctx, &chain, &factors)?;
    // One factor 2π is symbolic; the stored derivation carries the i.
    let i = Scalar::imaginary_unit(b)?;
    let winding = match pairing.two_pi_power {
        0 if pairing.is_zero() => Scalar::zero(b),
        1 => pairing.value.checked_div(&i)?,
        k => return Err(DemoError::Invalid(format!("unexpected power (2π)^{k}"))),
    };
    Ok(CircleValues { pairing, winding })
}

pub fn demo_circle(n: i64) -> Result<Report, DemoError> {
    let v = circle_values(n)?;
    let b = Backend::Gaussian;
    let std = build_standard_algebra(&StandardKind::CircleLaurent, b)?;
    let cycle = HochschildChain::from_tensor(&[Element::basis(b, BasisId::Z(-n)), Element::basis(b, BasisId::Z(n))])?;
    let cycle_residual = hoch_b(&std.algebra, &cycle)?.max_magnitude();
    let mut r = Report::new("demo circle");
    r.input("n", n);
    r.output("pairing", &v.pairing).output("winding", &v.winding);
    r.check("hochschild_cycle", cycle_residual, 0.0);
    r.flag("winding_equals_n", v.winding == Scalar::from_i64(b, n));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn winding_numbers() {
        for n in -3..=3 {
            assert_eq!(circle_values(n).unwrap().winding, Scalar::from_i64(Backend::Gaussian, n));
        }
        assert!(demo_circle(2).unwrap().passed());
    }
}
