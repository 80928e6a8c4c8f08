use lrcyclic::demos::contexts::{graded_odd, matrix_inner, MatrixAction};
use lrcyclic::hochschild::{connes_b, HochschildChain, cyclic_t, hoch_b, one_minus_t, BVariant};
use lrcyclic::lie_rinehart::{lr_boundary, LGenerator, RightModule, SuperLieRinehart};
use lrcyclic::pairing::{pair, random_tau_chain, PairingContext};
use lrcyclic::sampling::{random_chain, random_lr_chain, rng};
use lrcyclic::scalar::{Backend, Scalar};
use lrcyclic::superalgebra::{build_standard_algebra, Parity, StandardKind};
use proptest::prelude::*;

fn q(n: i64) -> Scalar {
    Scalar::from_i64(Backend::Rational, n)
}

fn context(which: u8, p: usize) -> PairingContext {
    match which {
        0 => matrix_inner(Backend::Rational, MatrixAction::Gl2, p).unwrap(),
        1 => matrix_inner(Backend::Rational, MatrixAction::Sl2, p).unwrap(),
        _ => graded_odd(Backend::Rational, 1, p).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pairing_is_bilinear(seed in any::<u64>(), which in 0u8..3, p in 0usize..3, k in -5i64..6) {
        let ctx = context(which, p);
        let mut r = rng(seed);
        let tau = random_tau_chain(&ctx, &mut r, 2);
        let sigma = random_tau_chain(&ctx, &mut r, 2);
        let c1 = random_chain(ctx.source(), &mut r, p, 3).unwrap();
        let c2 = random_chain(ctx.source(), &mut r, p, 3).unwrap();
        let mut c = c1.clone();
        c.add_scaled(&c2, &q(k));
        let lhs = pair(&ctx, &tau, &c).unwrap();
        let rhs = pair(&ctx, &tau, &c1).unwrap().add(&pair(&ctx, &tau, &c2).unwrap().scale(&q(k))).unwrap();
        prop_assert_eq!(lhs, rhs);
        let mut ts = tau.clone();
        ts.add_scaled(&sigma, &q(k));
        let lhs = pair(&ctx, &ts, &c1).unwrap();
        let rhs = pair(&ctx, &tau, &c1).unwrap().add(&pair(&ctx, &sigma, &c1).unwrap().scale(&q(k))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn hochschild_identities(seed in any::<u64>(), kind in 0u8..3, p in 0usize..4) {
        let kind = [StandardKind::TruncatedPolynomial(3), StandardKind::Matrix(2), StandardKind::GradedEndomorphisms(1, 1)][kind as usize].clone();
        let a = build_standard_algebra(&kind, Backend::Rational).unwrap().algebra;
        let c = random_chain(&a, &mut rng(seed), p, 4).unwrap();
        let b = |x: &HochschildChain| hoch_b(&a, x).unwrap();
        let full = |x: &HochschildChain| connes_b(&a, x, BVariant::Full).unwrap();
        prop_assert!(full(&full(&c)).is_zero());
        if p >= 1 {
            let mut anti = b(&full(&c));
            anti.add_scaled(&full(&b(&c)), &q(1));
            prop_assert!(anti.is_zero());
        }
        if p >= 2 {
            prop_assert!(b(&b(&c)).is_zero());
        }
        // t has order p + 1.
        let mut t = c.clone();
        for _ in 0..=p {
            t = cyclic_t(&a, &t).unwrap();
        }
        prop_assert_eq!(t, c.clone());
        let fixed = one_minus_t(&a, &c).unwrap();
        prop_assert_eq!(cyclic_t(&a, &fixed).unwrap().degree(), p);
    }

    #[test]
    fn lie_rinehart_boundary_squares_to_zero(seed in any::<u64>(), p in 2usize..5, odd in any::<bool>()) {
        let parity = if odd { Parity::Odd } else { Parity::Even };
        let gens = vec![LGenerator::new("e", Parity::Even), LGenerator::new("f", Parity::Even), LGenerator::new("h", Parity::Even), LGenerator::new("s", parity)];
        let lr = SuperLieRinehart::lie_algebra(
            Backend::Rational,
            gens,
            &[("e", "f", vec![("h", q(1))]), ("h", "e", vec![("e", q(2))]), ("h", "f", vec![("f", q(-2))])],
        )
        .unwrap();
        let m = RightModule::adjoint(&lr).unwrap();
        let c = random_lr_chain(&lr, &m, &mut rng(seed), p, 4);
        let d = lr_boundary(&lr, &m, &c).unwrap();
        prop_assert!(lr_boundary(&lr, &m, &d).unwrap().is_zero());
    }

    #[test]
    fn rational_scalars_form_a_field(a in -50i64..50, b in -50i64..50, c in 1i64..50) {
        let (a, b, c) = (q(a), q(b), q(c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &c) * &c.inv().unwrap(), a.clone());
    }
}
