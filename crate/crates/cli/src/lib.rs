//! The `lrcyclic` command line: homology dimensions, pairings, lemma sweeps and
//! the worked examples, each printed as a report.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use lrcyclic::demos::{demo_circle, demo_fredholm, demo_nctorus, DemoError, FredholmModel, Ramp, RieffelSpec};
use lrcyclic::hochschild::{certify_in_ker_b, certify_tensor_in_ker_b, hc_dim, hh_dim, BVariant};
use lrcyclic::lie_rinehart::spec_file::{LieRinehartSpec, ModuleSpec};
use lrcyclic::lie_rinehart::{chain_basis, classify_chain, lr_homology_dim, ChainClass};
use lrcyclic::pairing::spec_file::{HochschildInput, LoadedSetup, PairingSetup};
use lrcyclic::pairing::{
    pair, pair_classes, pair_tensor, random_tau_chain, residual_lemma1, residual_lemma2, residual_stokes, PairValue, ETA_2, ETA_3,
};
use lrcyclic::report::Report;
use lrcyclic::sampling::{random_chain, rng};
use lrcyclic::superalgebra::spec_file::{AlgebraSpec, SpecError};

#[derive(Debug, Parser)]
#[command(name = "lrcyclic", version, about = "Pairings between Lie-Rinehart homology and cyclic homology")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Replaces the tolerance of every numeric check.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Variant::Full)]
    pub b_variant: Variant,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Omit `elapsed_ms` so that reports are byte-stable.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Full,
    Normalized,
}

impl From<Variant> for BVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Full => BVariant::Full,
            Variant::Normalized => BVariant::Normalized,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension of Hochschild homology HH_p.
    Hh {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        degree: usize,
    },
    /// Dimension of cyclic homology HC_p.
    Hc {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        degree: usize,
    },
    /// Dimension of Lie-Rinehart homology H_p(L, R; M).
    LieHomology {
        #[arg(long)]
        lr: PathBuf,
        /// A module kind (trivial, adjoint, base_ring, dual), inline JSON or a JSON file.
        #[arg(long, default_value = "trivial")]
        module: String,
        #[arg(long)]
        degree: usize,
    },
    /// Evaluates the pairing described by a setup file.
    Pair {
        #[arg(long)]
        setup: PathBuf,
    },
    /// Lemma residuals on random chains in the context of a setup file.
    Lemmas {
        #[arg(long)]
        setup: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Worked examples.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Finite Fredholm module with a diagonal projection.
    Fredholm {
        /// `H₀ = H₁ = kⁿ`, F swaps them.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Diagonal of e, 2n entries in {0, 1}.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 0])]
        e: Vec<i64>,
        #[arg(long, default_value_t = 2)]
        p: usize,
    },
    /// Powers-Rieffel projection on the noncommutative torus.
    Nctorus {
        #[arg(long, default_value_t = 0.3)]
        theta: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 128)]
        truncation: usize,
        /// Defaults to 8 × truncation.
        #[arg(long)]
        quadrature: Option<usize>,
        #[arg(long, value_enum, default_value_t = RampArg::Bump)]
        ramp: RampArg,
    },
    /// Winding number of z^n on the circle.
    Circle {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        n: i64,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RampArg {
    Smoothstep,
    Bump,
}

/// What the process prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Computation(String),
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::Io(..) | SpecError::Json(_) => Failure::Usage(e.to_string()),
            other => Failure::Computation(other.to_string()),
        }
    }
}

fn computation(e: impl std::fmt::Display) -> Failure {
    Failure::Computation(e.to_string())
}

impl From<DemoError> for Failure {
    fn from(e: DemoError) -> Self {
        computation(e)
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let start = Instant::now();
    match execute(&cli) {
        Ok(mut report) => {
            if let Some(t) = cli.tolerance {
                report.override_tolerance(t);
            }
            report.set_elapsed(if cli.no_timing { None } else { Some(start.elapsed().as_secs_f64() * 1e3) });
            let stdout = match cli.format {
                Format::Json => report.to_json() + "\n",
                Format::Text => report.to_text(),
            };
            Outcome { code: if report.passed() { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(Failure::Usage(m)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Computation(m)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {m}\n") },
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    let variant: BVariant = cli.b_variant.into();
    match &cli.command {
        Command::Hh { algebra, degree } => homology_report("hh", algebra, *degree, |a, p| hh_dim(a, p).map_err(computation)),
        Command::Hc { algebra, degree } => homology_report("hc", algebra, *degree, |a, p| hc_dim(a, p).map_err(computation)),
        Command::LieHomology { lr, module, degree } => lie_homology(lr, module, *degree),
        Command::Pair { setup } => pair_report(setup, variant),
        Command::Lemmas { setup, samples } => lemmas_report(setup, *samples, cli.seed, variant),
        Command::Demo { demo } => match demo {
            Demo::Fredholm { n, e, p } => Ok(demo_fredholm(&FredholmModel::diagonal(*n, e, *p)?)?),
            Demo::Nctorus { theta, delta, truncation, quadrature, ramp } => {
                let ramp = match ramp {
                    RampArg::Bump => Ramp::Bump,
                    RampArg::Smoothstep => Ramp::Smoothstep,
                };
                let spec = RieffelSpec {
                    theta: *theta,
                    delta: *delta,
                    ramp,
                    truncation: *truncation,
                    quadrature: quadrature.unwrap_or(8 * truncation),
                };
                Ok(demo_nctorus(&spec)?)
            }
            Demo::Circle { n } => Ok(demo_circle(*n)?),
        },
    }
}

fn homology_report(
    name: &str,
    path: &Path,
    degree: usize,
    dim: impl Fn(&lrcyclic::superalgebra::BasedSuperAlgebra, usize) -> Result<usize, Failure>,
) -> Result<Report, Failure> {
    let std = AlgebraSpec::from_json(&read(path)?)?.build()?;
    let alg = &std.algebra;
    let d = dim(alg, degree)?;
    let mut r = Report::new(name);
    r.input("algebra", path.display().to_string()).input("degree", degree).input("backend", alg.backend());
    r.output("algebra_dimension", alg.dim()).output("dimension", d);
    Ok(r)
}

fn lie_homology(path: &Path, module: &str, degree: usize) -> Result<Report, Failure> {
    let spec = LieRinehartSpec::from_json(&read(path)?)?;
    let b = spec.build_b()?;
    let lr = spec.build(b.as_ref())?;
    let module_text = if Path::new(module).is_file() { read(Path::new(module))? } else { module.to_string() };
    let m = ModuleSpec::parse(&module_text)?.build(&lr, b.as_ref())?;
    let d = lr_homology_dim(&lr, &m, degree).map_err(computation)?;
    let mut r = Report::new("lie-homology");
    r.input("lr", path.display().to_string()).input("module", module).input("degree", degree);
    r.output("rank", lr.rank()).output("module_dimension", m.dim()).output("chain_dimension", chain_basis(&lr, &m, degree).len()).output("dimension", d);
    Ok(r)
}

fn default_tolerance(exact: bool) -> f64 {
    if exact {
        0.0
    } else {
        1e-9
    }
}

fn load(path: &Path) -> Result<LoadedSetup, Failure> {
    Ok(PairingSetup::load(path)?.1)
}

fn numeric(v: &PairValue) -> [f64; 2] {
    let z = v.to_complex();
    [z.re, z.im]
}

fn pair_report(path: &Path, variant: BVariant) -> Result<Report, Failure> {
    let s = load(path)?;
    let ctx = &s.ctx;
    let exact = ctx.backend().is_exact();
    let tol = default_tolerance(exact);
    let mut r = Report::new("pair");
    r.input("setup", path.display().to_string()).input("degree", ctx.degree()).input("backend", ctx.backend()).input("b_variant", variant);
    let adm = ctx.check_admissible().map_err(computation)?;
    r.check("homomorphism", adm.homomorphism, tol);
    r.check("unit", adm.unit, tol);
    r.check("derivations_into_j", adm.derivations_into_j, tol);
    r.check("traces_vanish_on_commutators", adm.traces_vanish_on_commutators, tol);
    if !adm.is_admissible(tol) {
        return Ok(r);
    }
    let value = match &s.hochschild {
        HochschildInput::Tensor(f) => pair_tensor(ctx, &s.lie_chain, f),
        HochschildInput::Chain(c) => pair(ctx, &s.lie_chain, c),
    }
    .map_err(computation)?;
    r.output("value", &value).output("value_numeric", numeric(&value));
    if !(exact && ctx.source().is_finite()) {
        return Ok(r);
    }
    let class = classify_chain(ctx.lr(), ctx.module(), &s.lie_chain).map_err(computation)?;
    r.output(
        "lie_chain",
        match class {
            ChainClass::NotCycle => "not a cycle",
            ChainClass::CycleNotBoundary => "cycle",
            ChainClass::Boundary => "boundary",
        },
    );
    let rep = match &s.hochschild {
        HochschildInput::Tensor(f) => certify_tensor_in_ker_b(ctx.source(), f, variant),
        HochschildInput::Chain(c) => certify_in_ker_b(ctx.source(), c, variant),
    };
    match rep {
        Ok(rep) if class.is_cycle() => {
            let v = pair_classes(ctx, &s.lie_chain, &rep).map_err(computation)?;
            r.output("hochschild_chain", "cyclic cycle in ker B").output("class_value", &v);
        }
        Ok(_) => {
            r.output("hochschild_chain", "cyclic cycle in ker B");
        }
        Err(e) => {
            r.output("hochschild_chain", e.to_string());
        }
    }
    Ok(r)
}

fn lemmas_report(path: &Path, samples: usize, seed: u64, variant: BVariant) -> Result<Report, Failure> {
    let s = load(path)?;
    let ctx = &s.ctx;
    let alg = ctx.source();
    if !alg.is_finite() {
        return Err(Failure::Computation("lemma sweeps need a finite-dimensional source algebra".into()));
    }
    let p = ctx.degree();
    let tol = default_tolerance(ctx.backend().is_exact());
    let mut g = rng(seed);
    let (mut l1, mut l2, mut l3) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let tau = random_tau_chain(ctx, &mut g, 3);
        let c = random_chain(alg, &mut g, p + 1, 3).map_err(computation)?;
        l1 = l1.max(residual_lemma1(ctx, &tau, &c).map_err(computation)?.magnitude());
        if p >= 1 {
            let c = random_chain(alg, &mut g, p, 3).map_err(computation)?;
            l2 = l2.max(residual_lemma2(ctx, &tau, &c).map_err(computation)?.magnitude());
            let c = random_chain(alg, &mut g, p - 1, 3).map_err(computation)?;
            l3 = l3.max(residual_stokes(ctx, &tau, &c, variant).map_err(computation)?.magnitude());
        }
    }
    let mut r = Report::new("lemmas");
    r.input("setup", path.display().to_string())
        .input("degree", p)
        .input("samples", samples)
        .input("seed", seed)
        .input("b_variant", variant)
        .input("backend", ctx.backend());
    r.output("eta2", ETA_2).output("eta3", ETA_3);
    r.check("lemma1", l1, tol);
    if p >= 1 {
        r.check("lemma2", l2, tol);
        r.check("stokes", l3, tol);
    }
    Ok(r)
}
