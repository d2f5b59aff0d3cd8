use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use orbit_atlas::cotangent::{self, CotangentPoint};
use orbit_atlas::flagprod::{self, FlagPair, NestedFlag};
use orbit_atlas::harness::{self, Suite, SuiteConfig};
use orbit_atlas::lagrangian::{self, GraphSpec};
use orbit_atlas::liealg::AlgebraCtx;
use orbit_atlas::mat::{self, CMat, C64};
use orbit_atlas::orbit::{self, Characteristic};
use orbit_atlas::repmodel::{self, ExteriorRep, RepElement};
use orbit_atlas::weylgrp::ThetaSet;
use orbit_atlas::{Error, Result};

#[derive(Parser)]
#[command(name = "atlas", version, about = "Numerical certificates for adjoint orbits of sl(n,C)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites and print one JSON line per check.
    Verify(VerifyArgs),
    /// Adjoint orbit factorization and projection.
    #[command(subcommand)]
    Orbit(OrbitCmd),
    /// Cotangent bundle model of the orbit.
    #[command(subcommand)]
    Cotangent(CotangentCmd),
    /// Orbit as an open subset of a product of flags.
    #[command(subcommand)]
    Product(ProductCmd),
    /// Exterior power model.
    #[command(subcommand)]
    Rep(RepCmd),
    /// Graph of R_w0 and its residuals.
    #[command(subcommand)]
    Lagrangian(LagrangianCmd),
}

#[derive(Args, Clone)]
struct Shape {
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Simple roots in Theta (1-based, comma separated).
    #[arg(long, value_delimiter = ',')]
    theta: Vec<usize>,
}

impl Shape {
    fn characteristic(&self) -> Result<Characteristic> {
        Characteristic::canonical(self.n, &ThetaSet::new(self.n, self.theta.iter().cloned())?)
    }
}

#[derive(Args, Clone)]
struct Io {
    /// JSON input file.
    #[arg(long)]
    input: PathBuf,
    /// Write the result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Sampling {
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, value_delimiter = ',')]
    theta: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long = "tol-exact", default_value_t = 1e-8)]
    tol_exact: f64,
    #[arg(long = "tol-fd", default_value_t = 1e-4)]
    tol_fd: f64,
    /// "all" or a comma list of liealg, weyl, orbit, cotangent, product, rep, lagrangian.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Write the full JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OrbitCmd {
    /// Y -> (k, X) with Y = k (H0 + X) k*.
    Factorize {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        io: Io,
    },
    /// Y -> Ad(k) H0.
    Project {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Subcommand)]
enum CotangentCmd {
    /// Orbit element Y -> covector (base, W).
    Iota {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        io: Io,
    },
    /// Covector {"base", "w"} -> orbit element.
    Mu {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        io: Io,
    },
    /// Integrate theta(Z) from {"base", "w", "z"} for time t.
    Flow {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
    },
    /// Run only this module's suite.
    Verify(SuiteArgs),
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, value_delimiter = ',')]
    theta: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Subcommand)]
enum ProductCmd {
    /// g -> (g.x0, g.w0~ y0) as frames.
    Embed {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        io: Io,
    },
    /// {"first": frame, "second": frame} -> transversality.
    Transversal {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        io: Io,
    },
    /// Product complex structure residual at Y.
    Residual {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Subcommand)]
enum RepCmd {
    /// Moment map of {"g"} (acting on v0 x eps0) or {"v", "eps"}.
    Moment {
        #[command(flatten)]
        rep: RepShape,
        #[command(flatten)]
        io: Io,
    },
    /// Height function at H, from {"g"} or {"v", "eps"} plus {"h"}.
    Height {
        #[command(flatten)]
        rep: RepShape,
        #[command(flatten)]
        io: Io,
    },
    /// Element -> pair of normalized projective representatives.
    Phi {
        #[command(flatten)]
        rep: RepShape,
        #[command(flatten)]
        io: Io,
    },
    /// Run only this module's suite.
    Verify(SuiteArgs),
}

#[derive(Args, Clone)]
struct RepShape {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
}

#[derive(Subcommand)]
enum LagrangianCmd {
    /// Lagrangean residual of the plain graph of R_w0 and of a random k1 R_w0 k2.
    Residual {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Largest |R_w0* J + J R_w0*| over samples.
    Antiholo {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Largest metric defect of R_w0 over samples.
    Isometry {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Fixed lines of r and m R_w on CP^1 (SL(2)).
    FixedPoints,
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// The matrix under `key`, or the whole document when it is a bare matrix.
fn matrix_field(v: &Value, key: &str) -> Result<CMat> {
    match v.get(key) {
        Some(m) => mat::matrix_from_json(m),
        None if v.is_array() => mat::matrix_from_json(v),
        None => Err(Error::Contract(format!("missing field '{key}'"))),
    }
}

fn emit(out: &Option<PathBuf>, v: &Value) -> Result<()> {
    let text = serde_json::to_string(v).map_err(|e| Error::Io(e.to_string()))?;
    match out {
        Some(p) => fs::write(p, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn flag_json(f: &NestedFlag) -> Value {
    json!({ "frame": mat::matrix_to_json(&f.frame), "dims": f.dims })
}

fn pair_json(p: &FlagPair) -> Value {
    json!({
        "first": flag_json(&p.first),
        "second": flag_json(&p.second),
        "transversal": flagprod::transversal(p),
        "margin": flagprod::transversality_margin(p),
    })
}

fn point_json(p: &CotangentPoint) -> Value {
    json!({ "base": mat::matrix_to_json(&p.base), "w": mat::matrix_to_json(&p.w) })
}

fn rep_element(rep: &ExteriorRep, v: &Value) -> Result<RepElement> {
    if let Some(g) = v.get("g") {
        return rep.act(&mat::matrix_from_json(g)?, &rep.base_element());
    }
    let field = |k: &str| {
        v.get(k)
            .ok_or_else(|| Error::Contract(format!("missing field '{k}'")))
            .and_then(mat::vector_from_json)
    };
    let el = RepElement { v: field("v")?, eps: field("eps")? };
    if el.v.len() != rep.dim() || el.eps.len() != rep.dim() {
        return Err(Error::Contract(format!("vectors must have length {}", rep.dim())));
    }
    Ok(el)
}

fn run_verify(cfg: SuiteConfig, report: &Option<PathBuf>) -> Result<bool> {
    let stdout = std::io::stdout();
    let mut sink = |c: &harness::CheckResult| {
        let mut lock = stdout.lock();
        let _ = writeln!(lock, "{}", serde_json::to_string(c).unwrap_or_default());
    };
    let r = harness::run_suite_streaming(&cfg, &mut sink)?;
    if let Some(p) = report {
        let text = serde_json::to_string_pretty(&r).map_err(|e| Error::Io(e.to_string()))?;
        fs::write(p, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
    }
    for f in r.failures() {
        eprintln!("FAIL {}: residual {:e} > tol {:e}", f.name, f.max_residual, f.tol);
    }
    Ok(r.pass)
}

fn suite_config(a: &SuiteArgs, suite: Suite) -> SuiteConfig {
    SuiteConfig {
        n: a.n,
        theta: a.theta.clone(),
        k: a.k,
        samples: a.samples,
        seed: a.seed,
        suites: vec![suite],
        ..SuiteConfig::default()
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Verify(a) => {
            let cfg = SuiteConfig {
                n: a.n,
                theta: a.theta,
                k: a.k,
                samples: a.samples,
                seed: a.seed,
                tol_exact: a.tol_exact,
                tol_fd: a.tol_fd,
                suites: Suite::parse(&a.suite)?,
            };
            run_verify(cfg, &a.report)
        }
        Cmd::Orbit(OrbitCmd::Factorize { shape, io }) => {
            let ch = shape.characteristic()?;
            let y = matrix_field(&read_json(&io.input)?, "y")?;
            let p = orbit::factorize(&ch, &y)?;
            emit(&io.output, &json!({
                "h0": ch.h0,
                "k": mat::matrix_to_json(&p.k),
                "x": mat::matrix_to_json(&p.x),
                "residual": mat::dist(&p.recompose(&ch), &y),
            }))?;
            Ok(true)
        }
        Cmd::Orbit(OrbitCmd::Project { shape, io }) => {
            let ch = shape.characteristic()?;
            let y = matrix_field(&read_json(&io.input)?, "y")?;
            emit(&io.output, &json!({ "x": mat::matrix_to_json(&orbit::project_pi(&ch, &y)?) }))?;
            Ok(true)
        }
        Cmd::Cotangent(CotangentCmd::Iota { shape, io }) => {
            let ch = shape.characteristic()?;
            let y = matrix_field(&read_json(&io.input)?, "y")?;
            emit(&io.output, &point_json(&cotangent::iota_raw(&ch, &y)?))?;
            Ok(true)
        }
        Cmd::Cotangent(CotangentCmd::Mu { shape, io }) => {
            let ch = shape.characteristic()?;
            let ctx = AlgebraCtx::new(shape.n)?;
            let v = read_json(&io.input)?;
            let xi = CotangentPoint::new(&ch, &matrix_field(&v, "base")?, &matrix_field(&v, "w")?)?;
            emit(&io.output, &json!({ "mu": mat::matrix_to_json(&cotangent::mu(&ctx, &ch, &xi)) }))?;
            Ok(true)
        }
        Cmd::Cotangent(CotangentCmd::Flow { shape, io, t, steps }) => {
            let ch = shape.characteristic()?;
            let ctx = AlgebraCtx::new(shape.n)?;
            let v = read_json(&io.input)?;
            let xi = CotangentPoint::new(&ch, &matrix_field(&v, "base")?, &matrix_field(&v, "w")?)?;
            let z = matrix_field(&v, "z")?;
            let end = cotangent::flow(&ctx, &ch, &z, &xi, t, steps)?;
            emit(&io.output, &point_json(&end))?;
            Ok(true)
        }
        Cmd::Cotangent(CotangentCmd::Verify(a)) => run_verify(suite_config(&a, Suite::Cotangent), &None),
        Cmd::Product(ProductCmd::Embed { shape, io }) => {
            let ch = shape.characteristic()?;
            let g = matrix_field(&read_json(&io.input)?, "g")?;
            emit(&io.output, &pair_json(&flagprod::embed(&ch, &g)?))?;
            Ok(true)
        }
        Cmd::Product(ProductCmd::Transversal { shape, io }) => {
            let ch = shape.characteristic()?;
            let v = read_json(&io.input)?;
            let pair = FlagPair {
                first: NestedFlag::new(matrix_field(&v, "first")?, ch.flag_dims())?,
                second: NestedFlag::new(matrix_field(&v, "second")?, ch.dual().flag_dims())?,
            };
            emit(&io.output, &json!({
                "transversal": flagprod::transversal(&pair),
                "margin": flagprod::transversality_margin(&pair),
            }))?;
            Ok(true)
        }
        Cmd::Product(ProductCmd::Residual { shape, io }) => {
            let ch = shape.characteristic()?;
            let ctx = AlgebraCtx::new(shape.n)?;
            let y = matrix_field(&read_json(&io.input)?, "y")?;
            let r = flagprod::product_complex_structure_residual(&ctx, &ch, &y)?;
            emit(&io.output, &json!({ "residual": r }))?;
            Ok(true)
        }
        Cmd::Rep(RepCmd::Moment { rep, io }) => {
            let ctx = AlgebraCtx::new(rep.n)?;
            let r = ExteriorRep::new(rep.n, rep.k)?;
            let el = rep_element(&r, &read_json(&io.input)?)?;
            let m = repmodel::moment_rep(&ctx, &r, &el);
            emit(&io.output, &json!({ "m": mat::matrix_to_json(&m) }))?;
            Ok(true)
        }
        Cmd::Rep(RepCmd::Height { rep, io }) => {
            let r = ExteriorRep::new(rep.n, rep.k)?;
            let v = read_json(&io.input)?;
            let el = rep_element(&r, &v)?;
            let h = matrix_field(&v, "h")?;
            let (a, b) = repmodel::height_rep(&r, &el, &h);
            emit(&io.output, &json!({ "pairing": [a.re, a.im], "trace": [b.re, b.im] }))?;
            Ok(true)
        }
        Cmd::Rep(RepCmd::Phi { rep, io }) => {
            let r = ExteriorRep::new(rep.n, rep.k)?;
            let el = rep_element(&r, &read_json(&io.input)?)?;
            let (v, e) = repmodel::phi(&el)?;
            emit(&io.output, &json!({ "v": mat::vector_to_json(&v), "eps": mat::vector_to_json(&e) }))?;
            Ok(true)
        }
        Cmd::Rep(RepCmd::Verify(a)) => run_verify(suite_config(&a, Suite::Rep), &None),
        Cmd::Lagrangian(LagrangianCmd::Residual { shape, sampling }) => {
            let ch = shape.characteristic()?;
            let plain = lagrangian::lagrangian_residual(&ch, &GraphSpec::plain(shape.n), sampling.samples, sampling.seed)?;
            let mut rng = orbit_atlas::sampling::sample_rng(sampling.seed, 0, 0);
            let spec = GraphSpec::random(&mut rng, shape.n);
            let random = lagrangian::lagrangian_residual(&ch, &spec, sampling.samples, sampling.seed)?;
            println!("{}", json!({ "plain": plain, "random": random }));
            Ok(true)
        }
        Cmd::Lagrangian(LagrangianCmd::Antiholo { shape, sampling }) => {
            let ch = shape.characteristic()?;
            let r = lagrangian::antiholomorphy_residual(&ch, sampling.samples, sampling.seed)?;
            println!("{}", json!({ "residual": r }));
            Ok(true)
        }
        Cmd::Lagrangian(LagrangianCmd::Isometry { shape, sampling }) => {
            let ch = shape.characteristic()?;
            let r = lagrangian::isometry_residual(&ch, sampling.samples, sampling.seed)?;
            println!("{}", json!({ "residual": r }));
            Ok(true)
        }
        Cmd::Lagrangian(LagrangianCmd::FixedPoints) => {
            let line = |l: &(C64, C64)| json!([[l.0.re, l.0.im], [l.1.re, l.1.im]]);
            let r: Vec<Value> = lagrangian::fixed_lines_grid(lagrangian::sl2_r).iter().map(line).collect();
            println!("{}", json!({ "r": r }));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
