use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use fockweyl::algebra::{parse_poly_xy, parse_poly_z};
use fockweyl::correspondences::{berezin_symbol, weyl0_symbol_trace, weyl1_symbol};
use fockweyl::gaussian::GaussianKernelOp;
use fockweyl::group::GroupElement;
use fockweyl::orbit::psi_map;
use fockweyl::representation::{mehler_kernel, pi_kernel, rho_kernel, sigma_kernel, SchrodingerGaussianKernel};
use fockweyl::star::{moyal, star0, star1, star_exp_closed, star_exp_series, QuadraticSpec};
use fockweyl::verify::{run_suite, Config, RunOptions};
use fockweyl::{Error, Result, C64};

#[derive(Parser)]
#[command(name = "fockweyl", version, about = "Fock-space representations, symbol correspondences and star products")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// JSON config file (weights, λ, seed, quadrature, tolerances).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    quad_order: Option<usize>,
    /// Truncation degree of the Fock basis.
    #[arg(long, global = true)]
    degree: Option<u32>,
    /// Write the JSON output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a report; exit code 1 if any check fails.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        jobs: Option<usize>,
        /// Record wall time per check.
        #[arg(long)]
        timings: bool,
    },
    /// Print the Gaussian kernel of a representation operator.
    Kernel {
        kind: KernelKind,
        /// Group element JSON `{"t": [..], "z0": [[re, im], ..], "c0": r}`.
        #[arg(long)]
        g: String,
    },
    /// Evaluate a symbol of a kernel operator at a point.
    Symbol {
        #[arg(long)]
        kind: SymbolKind,
        /// Kernel JSON: Fock kernel for berezin/weyl0, Schrödinger kernel for weyl1.
        #[arg(long)]
        op: String,
        /// Point: `[[re, im], ..]`, `[x, ..]`, or one number repeated n times.
        #[arg(long)]
        at: String,
    },
    /// Star product of two polynomials.
    Star {
        #[arg(long)]
        product: Product,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Star exponential `exp_∗₀` of `ic0 + āz − az̄ + iΣ b_k|z_k|²` at a point.
    StarExp {
        #[arg(long, allow_hyphen_values = true)]
        c0: f64,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Also print the ∗₀ series coefficients up to this order.
        #[arg(long)]
        series_order: Option<usize>,
    },
    /// Moment map ψ(z).
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelKind {
    Pi,
    Rho,
    Sigma,
    Mehler,
}

#[derive(Clone, Copy, ValueEnum)]
enum SymbolKind {
    Berezin,
    Weyl0,
    Weyl1,
}

#[derive(Clone, Copy, ValueEnum)]
enum Product {
    Moyal,
    Star0,
    Star1,
}

fn load_config(global: &Global) -> Result<Config> {
    let mut config = match &global.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            Config::from_json(&text)?
        }
        None => Config::default(),
    };
    if let Some(seed) = global.seed {
        config.seed = seed;
    }
    if global.quad_order.is_some() {
        config.quad_order = global.quad_order;
    }
    if let Some(degree) = global.degree {
        config.truncation_degree = degree;
    }
    config.validate()?;
    Ok(config)
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn complex_entry(what: &str, v: &Value) -> Result<C64> {
    match v {
        Value::Number(x) => Ok(C64::new(x.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(pair) if pair.len() == 2 => match (pair[0].as_f64(), pair[1].as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(Error::Parse(format!("{what}: expected [re, im]"))),
        },
        _ => Err(Error::Parse(format!("{what}: expected a number or [re, im]"))),
    }
}

/// A complex vector of length `n`, or a single number repeated.
fn parse_cvec(what: &str, s: &str, n: usize) -> Result<Vec<C64>> {
    let v: Value = parse_json(what, s)?;
    let out = match &v {
        Value::Number(_) => vec![complex_entry(what, &v)?; n],
        Value::Array(items) => items.iter().map(|x| complex_entry(what, x)).collect::<Result<_>>()?,
        _ => return Err(Error::Parse(format!("{what}: expected a number or an array"))),
    };
    if out.len() != n {
        return Err(Error::DimensionMismatch(format!("{what} has {} entries, expected {n}", out.len())));
    }
    Ok(out)
}

fn parse_rvec(what: &str, s: &str, n: usize) -> Result<Vec<f64>> {
    let v = parse_cvec(what, s, n)?;
    if let Some(k) = v.iter().position(|z| z.im != 0.0) {
        return Err(Error::Parse(format!("{what}[{k}] must be real")));
    }
    Ok(v.into_iter().map(|z| z.re).collect())
}

fn cjson(z: C64) -> Value {
    json!([z.re, z.im])
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn check_group_element(g: &GroupElement, config: &Config) -> Result<()> {
    if g.t.len() != config.m || g.z0.len() != config.n {
        return Err(Error::DimensionMismatch(format!(
            "g has t of length {} and z0 of length {}, config has m = {} and n = {}",
            g.t.len(),
            g.z0.len(),
            config.m,
            config.n
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(Value, bool)> {
    let config = load_config(&cli.global)?;
    let n = config.n;
    let lambda = config.lambda;
    match cli.command {
        Command::Verify { suite, jobs, timings } => {
            let report = run_suite(&suite, &config, RunOptions { jobs, timings })?;
            let pass = report.passed();
            Ok((to_value(&report), pass))
        }
        Command::Kernel { kind, g } => {
            let ws = config.weights()?;
            let g: GroupElement = parse_json("--g", &g)?;
            check_group_element(&g, &config)?;
            let value = match kind {
                KernelKind::Pi => to_value(&pi_kernel(&g, &ws)),
                KernelKind::Rho => to_value(&rho_kernel(&g.z0, g.c0, lambda)),
                KernelKind::Sigma => to_value(&sigma_kernel(&g.t, &ws)),
                KernelKind::Mehler => to_value(&mehler_kernel(&g.t, &ws)?),
            };
            Ok((value, true))
        }
        Command::Symbol { kind, op, at } => {
            let z = parse_cvec("--at", &at, n)?;
            let value = match kind {
                SymbolKind::Berezin => berezin_symbol(&parse_kernel(&op, &config)?, &z),
                SymbolKind::Weyl0 => weyl0_symbol_trace(&parse_kernel(&op, &config)?, &z)?,
                SymbolKind::Weyl1 => {
                    let k: SchrodingerGaussianKernel = parse_json("--op", &op)?;
                    let a: Vec<f64> = z.iter().map(|v| v.re).collect();
                    let b: Vec<f64> = z.iter().map(|v| v.im).collect();
                    weyl1_symbol(&k, &a, &b, lambda)?
                }
            };
            Ok((json!({ "value": cjson(value) }), true))
        }
        Command::Star { product, f, g } => {
            let value = match product {
                Product::Moyal => to_value(&moyal(&parse_poly_xy(&f, n)?, &parse_poly_xy(&g, n)?)),
                Product::Star1 => to_value(&star1(&parse_poly_xy(&f, n)?, &parse_poly_xy(&g, n)?, lambda)),
                Product::Star0 => to_value(&star0(&parse_poly_z(&f, n)?, &parse_poly_z(&g, n)?, lambda)),
            };
            Ok((json!({ "product": value }), true))
        }
        Command::StarExp { c0, a, b, at, series_order } => {
            let spec = QuadraticSpec {
                c0,
                a: parse_cvec("--a", &a, n)?,
                b: parse_rvec("--b", &b, n)?,
            };
            let z = parse_cvec("--at", &at, n)?;
            let mut out = json!({ "value": cjson(star_exp_closed(&spec, &z, lambda)?) });
            if let Some(order) = series_order {
                let series = star_exp_series(&spec.polynomial(), order, |f, g| star0(f, g, lambda))?;
                let coefs: Vec<Value> = series.coefficients.iter().map(|p| cjson(p.eval(&z))).collect();
                out["series_coefficients"] = Value::Array(coefs);
            }
            Ok((out, true))
        }
        Command::Orbit { z } => {
            let ws = config.weights()?;
            let z = parse_cvec("--z", &z, n)?;
            Ok((to_value(&psi_map(&z, &ws)), true))
        }
    }
}

fn parse_kernel(s: &str, config: &Config) -> Result<GaussianKernelOp> {
    let k: GaussianKernelOp = parse_json("--op", s)?;
    let k = GaussianKernelOp::new(k.c, k.a, k.b, k.q, k.lambda)?;
    if k.dim() != config.n {
        return Err(Error::DimensionMismatch(format!("--op has dimension {}, config has n = {}", k.dim(), config.n)));
    }
    Ok(k)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.global.out.clone();
    match run(cli) {
        Ok((value, pass)) => {
            let text = serde_json::to_string_pretty(&value).expect("serializable");
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => println!("{text}"),
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
