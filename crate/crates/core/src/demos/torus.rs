use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::DemoError;
use crate::lie_rinehart::{LGenerator, LRChain, SuperLieRinehart};
use crate::pairing::{pair_tensor, PairingContext};
use crate::report::Report;
use crate::scalar::{Backend, Scalar};
use crate::superalgebra::{build_standard_algebra, BasedSuperAlgebra, BasisId, Element, Parity, StandardAlgebra, StandardKind};

/// Shape of the increasing ramp `[0, 1] → [0, 1]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ramp {
    /// `3x² − 2x³`.
    Smoothstep,
    /// `φ(x) / (φ(x) + φ(1 − x))` with `φ(x) = exp(−1/x)`.
    Bump,
}

impl Ramp {
    fn eval(self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        match self {
            Ramp::Smoothstep => x * x * (3.0 - 2.0 * x),
            Ramp::Bump => {
                let phi = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
                let (a, b) = (phi(x), phi(1.0 - x));
                a / (a + b)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RieffelSpec {
    pub theta: f64,
    pub delta: f64,
    pub ramp: Ramp,
    /// Fourier modes `|k| ≤ truncation` are kept.
    pub truncation: usize,
    /// Trapezoid points; at least `8 · truncation` are used.
    pub quadrature: usize,
}

impl RieffelSpec {
    pub fn new(theta: f64, delta: f64, truncation: usize) -> Self {
        Self { theta, delta, ramp: Ramp::Bump, truncation, quadrature: 8 * truncation }
    }

    pub fn validate(&self) -> Result<(), DemoError> {
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(DemoError::Invalid(format!("theta = {} must lie in (0, 1)", self.theta)));
        }
        if !(self.delta > 0.0 && self.delta < self.theta.min(1.0 - self.theta)) {
            return Err(DemoError::Invalid(format!("delta = {} must lie in (0, min(θ, 1 − θ))", self.delta)));
        }
        if self.truncation == 0 {
            return Err(DemoError::Invalid("truncation must be positive".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> usize {
        self.quadrature.max(8 * self.truncation)
    }

    /// The profile `f`: ramps up on `[0, δ]`, equals 1 on `[δ, θ]`, ramps down on `[θ, θ + δ]`.
    pub fn f(&self, t: f64) -> f64 {
        let t = t.rem_euclid(1.0);
        let r = |x: f64| self.ramp.eval(x / self.delta);
        if t < self.delta {
            r(t)
        } else if t < self.theta {
            1.0
        } else if t < self.theta + self.delta {
            1.0 - r(t - self.theta)
        } else {
            0.0
        }
    }

    /// `g = √(f(1 − f))` on `[θ, θ + δ]`, zero elsewhere.
    pub fn g(&self, t: f64) -> f64 {
        let t = t.rem_euclid(1.0);
        if t >= self.theta && t < self.theta + self.delta {
            let f = self.f(t);
            (f * (1.0 - f)).max(0.0).sqrt()
        } else {
            0.0
        }
    }

    /// Fourier coefficients `ĥ_k = ∫ h(t) e^{−2πikt} dt`, `|k| ≤ N`, by the trapezoid rule.
    fn coefficients(&self, h: impl Fn(f64) -> f64) -> Vec<(i64, Complex64)> {
        let m = self.points();
        let samples: Vec<f64> = (0..m).map(|j| h(j as f64 / m as f64)).collect();
        let n = self.truncation as i64;
        (-n..=n)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, v) in samples.iter().enumerate() {
                    if *v != 0.0 {
                        // Reduce kj mod m so the phase argument stays small.
                        let r = (k * j as i64).rem_euclid(m as i64) as f64 / m as f64;
                        acc += Complex64::from_polar(*v, -2.0 * PI * r);
                    }
                }
                (k, acc / m as f64)
            })
            .collect()
    }
}

/// The projection `e = g(U)V + f(U) + V*g(U)` with its idempotency residual `max |(e² − e)_{mn}|`.
pub fn rieffel_projection(spec: &RieffelSpec) -> Result<(Element, f64), DemoError> {
    spec.validate()?;
    let alg = BasedSuperAlgebra::quantum_torus(spec.theta)?;
    let e = projection_in(&alg, spec)?;
    let residual = idempotency_residual(&alg, &e)?;
    Ok((e, residual))
}

fn projection_in(alg: &BasedSuperAlgebra, spec: &RieffelSpec) -> Result<Element, DemoError> {
    let b = Backend::Approx;
    let in_u = |coeffs: Vec<(i64, Complex64)>| {
        Element::from_terms(b, coeffs.into_iter().map(|(k, c)| (BasisId::Z2(k, 0), Scalar::Approx(c)))).map(|e| e.pruned(0.0))
    };
    let f = in_u(spec.coefficients(|t| spec.f(t)))?;
    let g = in_u(spec.coefficients(|t| spec.g(t)))?;
    let v = Element::basis(b, BasisId::Z2(0, 1));
    let v_inv = Element::basis(b, BasisId::Z2(0, -1));
    let gv = alg.mul(&g, &v)?;
    let vg = alg.mul(&v_inv, &g)?;
    Ok(&(&gv + &f) + &vg)
}

fn idempotency_residual(alg: &BasedSuperAlgebra, e: &Element) -> Result<f64, DemoError> {
    let e2 = alg.mul(e, e)?;
    Ok((&e2 - e).max_magnitude())
}

/// Integers `(p̂, q̂)` with `τ(e) ≈ p̂ − q̂θ` and `chern ≈ q̂`.
#[derive(Clone, Debug, Serialize)]
pub struct TorusValues {
    pub trace: Complex64,
    pub p0: Complex64,
    pub p2: Complex64,
    pub chern: Complex64,
    pub p_hat: i64,
    pub q_hat: i64,
    pub idempotency_residual: f64,
    pub terms: usize,
}

fn torus_contexts(std: &StandardAlgebra) -> Result<(PairingContext, PairingContext), DemoError> {
    let alg = std.algebra.clone();
    let lr = SuperLieRinehart::lie_algebra(Backend::Approx, vec![LGenerator::new("X", Parity::Even), LGenerator::new("Y", Parity::Even)], &[])?
        .with_action(std.derivations.iter().map(|d| (d.name.clone(), d.clone())).collect())?;
    let tau = std.trace("tau").expect("torus trace").clone();
    let p0 = PairingContext::with_traces(alg.clone(), &[], 0, lr.clone(), vec![tau.clone()])?;
    let p2 = PairingContext::with_traces(alg, &[], 2, lr, vec![tau])?;
    Ok((p0, p2))
}

/// `P₀ = τ(e)`, `P₂ = (τ ⊗ X∧Y) · (e⊗e⊗e)` and the recovered integers for a given element.
pub fn torus_values(theta: f64, e: &Element, idempotency_residual: f64) -> Result<TorusValues, DemoError> {
    let std = build_standard_algebra(&StandardKind::QuantumTorus(theta), Backend::Approx)?;
    let (ctx0, ctx2) = torus_contexts(&std)?;
    let tau0 = LRChain::monomial(ctx0.lr(), 0, &[]);
    let x = ctx2.lr().index_of("X").expect("X");
    let y = ctx2.lr().index_of("Y").expect("Y");
    let tau2 = LRChain::monomial(ctx2.lr(), 0, &[x, y]);
    let p0 = pair_tensor(&ctx0, &tau0, std::slice::from_ref(e))?.to_complex();
    let p2 = pair_tensor(&ctx2, &tau2, &[e.clone(), e.clone(), e.clone()])?.to_complex();
    let chern = p2 / Complex64::new(0.0, 2.0 * PI);
    let q_hat = chern.re.round() as i64;
    let p_hat = (p0.re + q_hat as f64 * theta).round() as i64;
    Ok(TorusValues { trace: e.coeff(BasisId::Z2(0, 0)).to_complex(), p0, p2, chern, p_hat, q_hat, idempotency_residual, terms: e.len() })
}

pub const IDEMPOTENCY_TOLERANCE: f64 = 1e-6;
pub const TRACE_TOLERANCE: f64 = 1e-6;
pub const INTEGRALITY_TOLERANCE: f64 = 1e-4;

pub fn demo_nctorus(spec: &RieffelSpec) -> Result<Report, DemoError> {
    let (e, idem) = rieffel_projection(spec)?;
    let v = torus_values(spec.theta, &e, idem)?;
    let mut r = Report::new("demo nctorus");
    r.input("theta", spec.theta).input("delta", spec.delta).input("ramp", spec.ramp).input("truncation", spec.truncation).input("quadrature", spec.points());
    r.output("terms", v.terms)
        .output("trace", complex_json(v.p0))
        .output("p2", complex_json(v.p2))
        .output("chern", complex_json(v.chern))
        .output("p_hat", v.p_hat)
        .output("q_hat", v.q_hat);
    r.check("idempotency", v.idempotency_residual, IDEMPOTENCY_TOLERANCE);
    r.check("trace_equals_theta", (v.trace - spec.theta).norm(), TRACE_TOLERANCE);
    r.check("chern_integrality", (v.chern - Complex64::new(v.q_hat as f64, 0.0)).norm(), INTEGRALITY_TOLERANCE);
    r.flag("chern_nonzero", v.q_hat.abs() == 1);
    r.check("joint_consistency", (v.p0 - Complex64::new(v.p_hat as f64 - v.q_hat as f64 * spec.theta, 0.0)).norm(), INTEGRALITY_TOLERANCE);
    Ok(r)
}

fn complex_json(z: Complex64) -> [f64; 2] {
    // Round away representation noise below the reported precision so reports are byte-stable.
    let clean = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    [clean(z.re), clean(z.im)]
}
