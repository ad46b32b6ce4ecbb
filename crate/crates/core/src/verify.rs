//! Verification suites: every closed form in the crate checked against an
//! independent oracle on random samples, with a JSON report.
//!
//! Each check draws from its own ChaCha stream, seeded from the config seed and
//! the check name, so reports are reproducible and independent of `jobs`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{weyl_quantize_poly, MultiIndex, PolyXY, PolyZ};
use crate::correspondences::{
    berezin_dpi, berezin_of_diffop, berezin_symbol, sw_axioms_check, weyl0_apq_closed, weyl0_apq_integral, weyl0_dpi,
    weyl0_of_diffop, weyl0_pi_closed, weyl0_pi_closed_factored, weyl0_symbol_integral, weyl0_symbol_trace,
    weyl1_of_diffop, weyl1_symbol, weyl1_symbol_trace, QuadMode, SwTolerances,
};
use crate::cplx::{c, r, C64, I};
use crate::fock::{
    hermite_function, integrate_cn_gaussian, kernel_to_matrix, FockBasisSpec,
};
use crate::gaussian::{gaussian_integral, GaussianKernelOp};
use crate::group::{max_abs_diff, GroupElement, WeightSystem};
use crate::orbit::{psi_equivariance_check, psi_map, psi_pairing_poly, w0_prime};
use crate::representation::{
    conjugated_kernel_quadrature, dpi_symbolic, mehler_kernel, pi_kernel, pi_prime_kernel, sigma_kernel,
};
use crate::sample::{self, dist_to_lattice};
use crate::star::{
    gaussian_star0_series_residual, moyal, moyal_pl, star0, star_exp_closed, star_exp_closed_taylor,
    star_exp_series, QuadraticSpec,
};
use crate::{Error, Result};

pub const SCHEMA: u32 = 1;

/// Quadrature order used where the grid is fitted to a complex contour and the
/// integrand is an exact Gaussian.
pub const CONTOUR_ORDER: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub lambda: f64,
    pub n: usize,
    pub m: usize,
    pub alpha: Vec<Vec<f64>>,
    pub beta: Vec<f64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_degree")]
    pub truncation_degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_order: Option<usize>,
    /// Keys are a suite name or `suite.check`; the more specific key wins.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

fn default_seed() -> u64 {
    20240607
}

fn default_degree() -> u32 {
    24
}

impl Default for Config {
    fn default() -> Self {
        Config {
            lambda: 1.0,
            n: 1,
            m: 1,
            alpha: vec![vec![0.8]],
            beta: vec![0.0],
            seed: default_seed(),
            truncation_degree: default_degree(),
            quad_order: None,
            tolerances: BTreeMap::new(),
        }
    }
}

impl Config {
    pub fn from_json(s: &str) -> Result<Self> {
        let config: Config = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::Config("n and m must be at least 1".into()));
        }
        if self.alpha.len() != self.m || self.alpha.iter().any(|row| row.len() != self.n) {
            return Err(Error::Config(format!("alpha must be a {}x{} matrix", self.m, self.n)));
        }
        if self.beta.len() != self.m {
            return Err(Error::Config(format!("beta must have {} entries", self.m)));
        }
        if let Some(order) = self.quad_order {
            if order < 2 {
                return Err(Error::Config("quad_order must be at least 2".into()));
            }
        }
        if self.truncation_degree == 0 || self.truncation_degree > 60 {
            return Err(Error::Config("truncation_degree must be in 1..=60".into()));
        }
        for (key, tol) in &self.tolerances {
            let suite = key.split('.').next().unwrap_or_default();
            suite.parse::<Suite>().map_err(|_| Error::Config(format!("tolerance key `{key}` names no suite")))?;
            if !(tol.is_finite() && *tol >= 0.0) {
                return Err(Error::Config(format!("tolerance `{key}` must be a non-negative number")));
            }
        }
        self.weights().map(|_| ()).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn weights(&self) -> Result<WeightSystem> {
        WeightSystem::new(self.lambda, self.alpha.clone(), self.beta.clone())
    }

    /// `quad_order`, defaulting to 60 for `n = 1` and 40 otherwise.
    pub fn resolved_quad_order(&self) -> usize {
        self.quad_order.unwrap_or(if self.n == 1 { 60 } else { 40 })
    }

    fn tolerance(&self, suite: Suite, check: &str, default: f64) -> f64 {
        let specific = format!("{suite}.{check}");
        self.tolerances
            .get(&specific)
            .or_else(|| self.tolerances.get(suite.name()))
            .copied()
            .unwrap_or(default)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Group,
    Gaussian,
    Representation,
    Correspondences,
    SwAxioms,
    Orbit,
    Star,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Group,
        Suite::Gaussian,
        Suite::Representation,
        Suite::Correspondences,
        Suite::SwAxioms,
        Suite::Orbit,
        Suite::Star,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Group => "group",
            Suite::Gaussian => "gaussian",
            Suite::Representation => "representation",
            Suite::Correspondences => "correspondences",
            Suite::SwAxioms => "sw-axioms",
            Suite::Orbit => "orbit",
            Suite::Star => "star",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.into()))
    }
}

/// Parses a suite selector: a suite name or `all`.
pub fn select_suites(name: &str) -> Result<Vec<Suite>> {
    if name == "all" {
        Ok(Suite::ALL.to_vec())
    } else {
        Ok(vec![name.parse()?])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub samples: usize,
    pub max_abs_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub checks: Vec<CheckRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub config: Config,
    pub suites: Vec<SuiteReport>,
    pub summary: Summary,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.summary.pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn check(&self, suite: &str, name: &str) -> Option<&CheckRecord> {
        self.suites
            .iter()
            .find(|s| s.name == suite)
            .and_then(|s| s.checks.iter().find(|c| c.name == name))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
    /// Record wall time per check (breaks byte-identical reports).
    pub timings: bool,
}

/// Result of one check body: sample count, worst residual, quadrature order.
struct Outcome {
    samples: usize,
    residual: f64,
    quad_order: Option<usize>,
}

impl Outcome {
    fn new(samples: usize, residual: f64) -> Self {
        Outcome { samples, residual, quad_order: None }
    }

    fn with_order(mut self, order: usize) -> Self {
        self.quad_order = Some(order);
        self
    }
}

struct Ctx {
    config: Config,
    ws: WeightSystem,
}

type Body = fn(&Ctx, &mut ChaCha8Rng) -> Result<Outcome>;

struct CheckDef {
    suite: Suite,
    name: &'static str,
    tolerance: f64,
    body: Body,
}

fn def(suite: Suite, name: &'static str, tolerance: f64, body: Body) -> CheckDef {
    CheckDef { suite, name, tolerance, body }
}

/// Relative difference `|a − b| / max(1, |b|)`.
fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

fn rel_coords(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
        .fold(0.0, f64::max)
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| if v.is_nan() { f64::NAN } else { m.max(v) })
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3))
}

fn admissible_pi(ws: &WeightSystem, rng: &mut ChaCha8Rng) -> GroupElement {
    sample::group_element_where(rng, ws, |a| a.iter().all(|&x| dist_to_lattice(x, PI, 2.0 * PI) > 0.1))
}

fn admissible_mehler(ws: &WeightSystem, rng: &mut ChaCha8Rng) -> GroupElement {
    sample::group_element_where(rng, ws, |a| a.iter().all(|&x| dist_to_lattice(x, 0.0, PI) > 0.25))
}

fn real_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| sample::uniform(rng, -1.0, 1.0)).collect()
}

// group

fn group_exp_additivity(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let samples = 200;
    let res = worst((0..samples).map(|i| {
        let mut x = sample::lie_element(rng, ws);
        if i % 4 == 0 {
            // Small |α(t)s| exercises the series branch.
            x.t.iter_mut().for_each(|t| *t *= 1e-7);
        }
        let (s1, s2) = (sample::uniform(rng, -2.0, 2.0), sample::uniform(rng, -2.0, 2.0));
        let lhs = ws.exp(&x, s1 + s2);
        let rhs = ws.multiply(&ws.exp(&x, s1), &ws.exp(&x, s2));
        rel_coords(&rhs.coords(), &lhs.coords())
    }));
    Ok(Outcome::new(samples, res))
}

fn group_associativity(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let samples = 200;
    let res = worst((0..samples).map(|_| {
        let (a, b, c) = (sample::group_element(rng, ws), sample::group_element(rng, ws), sample::group_element(rng, ws));
        let lhs = ws.multiply(&ws.multiply(&a, &b), &c);
        let rhs = ws.multiply(&a, &ws.multiply(&b, &c));
        rel_coords(&lhs.coords(), &rhs.coords())
    }));
    Ok(Outcome::new(samples, res))
}

fn group_inverse(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let samples = 200;
    let e = ws.identity().coords();
    let res = worst((0..samples).map(|_| {
        let g = sample::group_element(rng, ws);
        let gi = ws.inverse(&g);
        max_abs_diff(&ws.multiply(&g, &gi).coords(), &e).max(max_abs_diff(&ws.multiply(&gi, &g).coords(), &e))
    }));
    Ok(Outcome::new(samples, res))
}

fn group_coadjoint_pairing(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let samples = 200;
    let res = worst((0..samples).map(|_| {
        let g = sample::group_element(rng, ws);
        let x = sample::lie_element(rng, ws);
        let xi = sample::covector(rng, ws);
        let lhs = ws.pairing(&ws.coadjoint(&g, &xi), &ws.adjoint(&g, &x));
        let rhs = ws.pairing(&xi, &x);
        (lhs - rhs).abs() / rhs.abs().max(1.0)
    }));
    Ok(Outcome::new(samples, res))
}

// gaussian

fn gaussian_lemma_vs_quadrature(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = ctx.config.n;
    let order = ctx.config.resolved_quad_order();
    let samples = 50;
    let mut res = 0.0f64;
    for _ in 0..samples {
        let spec = sample::integrable_spec(rng, n);
        let exact = gaussian_integral(&spec)?;
        let quad = integrate_cn_gaussian(order, n, |w| spec.exponent(w), |_| r(1.0))?;
        res = res.max((quad - exact).norm() / exact.norm());
    }
    Ok(Outcome::new(samples, res).with_order(order))
}

fn gaussian_trace_cyclicity(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (n, lambda) = (ctx.config.n, ctx.config.lambda);
    let samples = 50;
    let mut res = 0.0f64;
    for _ in 0..samples {
        let a = sample::gaussian_kernel(rng, n, lambda);
        let b = sample::gaussian_kernel(rng, n, lambda);
        let ab = a.compose(&b)?.trace()?;
        let ba = b.compose(&a)?.trace()?;
        res = res.max(rel(ab, ba));
    }
    Ok(Outcome::new(samples, res))
}

fn gaussian_truncated_trace(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let lambda = ctx.config.lambda;
    let samples = 10;
    let spec = FockBasisSpec::new(1, lambda, 30);
    let mut res = 0.0f64;
    for _ in 0..samples {
        let k = sample::tame_gaussian_kernel(rng, 1, lambda);
        let exact = k.trace()?;
        res = res.max((kernel_to_matrix(&k, &spec)?.trace() - exact).norm() / exact.norm());
    }
    Ok(Outcome::new(samples, res))
}

fn gaussian_compression_convergence(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let lambda = ctx.config.lambda;
    let samples = 10;
    let spec = FockBasisSpec::new(1, lambda, ctx.config.truncation_degree);
    let mut res = 0.0f64;
    for _ in 0..samples {
        let k1 = sample::tame_gaussian_kernel(rng, 1, lambda);
        let k2 = sample::tame_gaussian_kernel(rng, 1, lambda);
        let prod = kernel_to_matrix(&k1.compose(&k2)?, &spec)?.entries;
        let split = kernel_to_matrix(&k1, &spec)?.entries * kernel_to_matrix(&k2, &spec)?.entries;
        res = res.max((&prod - split).norm() / prod.norm());
    }
    Ok(Outcome::new(samples, res))
}

fn gaussian_adjoint_matrix(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (n, lambda) = (ctx.config.n, ctx.config.lambda);
    let samples = 10;
    let spec = FockBasisSpec::new(n, lambda, 8);
    let mut res = 0.0f64;
    for _ in 0..samples {
        let k = sample::gaussian_kernel(rng, n, lambda);
        let m = kernel_to_matrix(&k, &spec)?.entries;
        let ma = kernel_to_matrix(&k.adjoint(), &spec)?.entries;
        res = res.max((ma - m.adjoint()).norm() / m.norm().max(1.0));
    }
    Ok(Outcome::new(samples, res))
}

// representation

fn rep_homomorphism(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let samples = 200;
    let mut res = 0.0f64;
    for _ in 0..samples {
        let g = sample::group_element(rng, ws);
        let h = sample::group_element(rng, ws);
        let prod = pi_kernel(&g, ws).compose(&pi_kernel(&h, ws))?;
        res = res.max(prod.param_distance(&pi_kernel(&ws.multiply(&g, &h), ws)));
    }
    Ok(Outcome::new(samples, res))
}

fn rep_adjoint_inverse(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let samples = 200;
    let res = worst((0..samples).map(|_| {
        let g = sample::group_element(rng, ws);
        pi_kernel(&g, ws).adjoint().param_distance(&pi_kernel(&ws.inverse(&g), ws))
    }));
    Ok(Outcome::new(samples, res))
}

fn rep_dpi_bracket(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let samples = 50;
    let mut res = 0.0f64;
    for _ in 0..samples {
        let x = sample::lie_element(rng, ws);
        let y = sample::lie_element(rng, ws);
        let lhs = dpi_symbolic(&x, ws).commutator(&dpi_symbolic(&y, ws))?;
        res = res.max(lhs.max_abs_diff(&dpi_symbolic(&ws.bracket(&x, &y), ws)));
    }
    Ok(Outcome::new(samples, res))
}

fn rep_dpi_derivative(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let n = ws.n;
    let samples = 20;
    let mut res = 0.0f64;
    for _ in 0..samples {
        let x = sample::lie_element(rng, ws);
        let f = sample::poly::<crate::algebra::ZVars, _>(rng, n, 3, 4);
        let holo = PolyZ::from_terms(
            n,
            f.terms().filter(|(m, _)| m.q.is_zero()).map(|(m, c)| (m.clone(), *c)),
        )?;
        let z = sample::complex_vec(rng, n);
        let exact = dpi_symbolic(&x, ws).apply(&holo)?.eval(&z);
        let eval = |w: &[C64]| holo.eval_pair(w, &vec![r(0.0); n]);
        let diff = |h: f64| {
            (pi_kernel(&ws.exp(&x, h), ws).apply_fn(eval, &z) - pi_kernel(&ws.exp(&x, -h), ws).apply_fn(eval, &z))
                / (2.0 * h)
        };
        let h = 1e-3;
        let numeric = (diff(h / 2.0) * 4.0 - diff(h)) / 3.0;
        res = res.max(rel(numeric, exact));
    }
    Ok(Outcome::new(samples, res))
}

fn rep_mehler_vs_quadrature(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let n = ws.n;
    let order = 24;
    let mut samples = 0;
    let mut res = 0.0f64;
    for _ in 0..20 {
        let t = admissible_mehler(ws, rng).t;
        let k = mehler_kernel(&t, ws)?;
        let sigma = sigma_kernel(&t, ws);
        for _ in 0..10 {
            let (x, y) = (real_vec(rng, n), real_vec(rng, n));
            let oracle = conjugated_kernel_quadrature(&sigma, &x, &y, order)?;
            res = res.max((k.evaluate(&x, &y) - oracle).norm());
            samples += 1;
        }
    }
    Ok(Outcome::new(samples, res).with_order(order))
}

fn rep_hermite_eigen(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let n = ws.n;
    let order = 24;
    let mut samples = 0;
    let mut res = 0.0f64;
    for _ in 0..20 {
        let t = admissible_mehler(ws, rng).t;
        let k = mehler_kernel(&t, ws)?;
        let alpha = ws.angles(&t);
        let x = real_vec(rng, n);
        for p in MultiIndex::all_up_to(n, 3) {
            let v = k.apply_hermite(&p, ws.lambda, &x, order)?;
            let phase: f64 = p.entries().iter().zip(&alpha).map(|(&e, a)| f64::from(e) * a).sum();
            let expected = ws.chi(&t) * (-I * phase).exp() * hermite_function(&p, ws.lambda, &x);
            res = res.max((v - expected).norm());
            samples += 1;
        }
    }
    Ok(Outcome::new(samples, res).with_order(order))
}

fn rep_pi_prime_vs_quadrature(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let n = ws.n;
    let order = 24;
    let mut samples = 0;
    let mut res = 0.0f64;
    for _ in 0..20 {
        let g = admissible_mehler(ws, rng);
        let k = pi_prime_kernel(&g, ws)?;
        let fock = pi_kernel(&g, ws);
        for _ in 0..10 {
            let (x, y) = (real_vec(rng, n), real_vec(rng, n));
            let oracle = conjugated_kernel_quadrature(&fock, &x, &y, order)?;
            res = res.max((k.evaluate(&x, &y) - oracle).norm());
            samples += 1;
        }
    }
    Ok(Outcome::new(samples, res).with_order(order))
}

// correspondences

fn corr_trace_vs_closed(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let samples = 100;
    let mut res = 0.0f64;
    for _ in 0..samples {
        let g = admissible_pi(ws, rng);
        let z = sample::complex_vec(rng, ws.n);
        let trace = weyl0_symbol_trace(&pi_kernel(&g, ws), &z)?;
        res = res.max(rel(trace, weyl0_pi_closed(&g, &z, ws)?));
    }
    Ok(Outcome::new(samples, res))
}

fn corr_closed_forms_agree(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let samples = 100;
    let mut res = 0.0f64;
    for _ in 0..samples {
        let g = admissible_pi(ws, rng);
        let z = sample::complex_vec(rng, ws.n);
        res = res.max(rel(weyl0_pi_closed_factored(&g, &z, ws)?, weyl0_pi_closed(&g, &z, ws)?));
    }
    Ok(Outcome::new(samples, res))
}

fn corr_integral_vs_closed(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let samples = 100;
    let mut res = 0.0f64;
    for _ in 0..samples {
        let g = admissible_pi(ws, rng);
        let z = sample::complex_vec(rng, ws.n);
        let quad = weyl0_symbol_integral(&pi_kernel(&g, ws), &z, CONTOUR_ORDER, QuadMode::Contour)?;
        res = res.max(rel(quad, weyl0_pi_closed(&g, &z, ws)?));
    }
    Ok(Outcome::new(samples, res).with_order(CONTOUR_ORDER))
}

fn corr_apq(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (n, lambda) = (ctx.config.n, ctx.config.lambda);
    let order = 12;
    let indices = MultiIndex::all_up_to(n, 3);
    let mut samples = 0;
    let mut res = 0.0f64;
    for p in &indices {
        for q in &indices {
            let z = sample::complex_vec(rng, n);
            let closed = weyl0_apq_closed(p, q, lambda).eval(&z);
            let quad = weyl0_apq_integral(p, q, &z, lambda, order, QuadMode::Fitted)?;
            res = res.max(rel(quad, closed));
            samples += 1;
        }
    }
    Ok(Outcome::new(samples, res).with_order(order))
}

fn covariance_samples(ctx: &Ctx, rng: &mut ChaCha8Rng, symbol: impl Fn(&GaussianKernelOp, &[C64]) -> Result<C64>) -> Result<Outcome> {
    let ws = &ctx.ws;
    let samples = 50;
    let mut res = 0.0f64;
    for _ in 0..samples {
        let g = sample::group_element(rng, ws);
        let a = pi_kernel(&admissible_pi(ws, rng), ws);
        let z = sample::complex_vec(rng, ws.n);
        let conjugated = pi_kernel(&ws.inverse(&g), ws).compose(&a)?.compose(&pi_kernel(&g, ws))?;
        res = res.max(rel(symbol(&conjugated, &z)?, symbol(&a, &ws.act(&g, &z))?));
    }
    Ok(Outcome::new(samples, res))
}

fn corr_covariance_berezin(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    covariance_samples(ctx, rng, |k, z| Ok(berezin_symbol(k, z)))
}

fn corr_covariance_weyl0(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    covariance_samples(ctx, rng, weyl0_symbol_trace)
}

fn corr_dpi_symbols(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let samples = 50;
    let res = worst((0..samples).map(|_| {
        let x = sample::lie_element(rng, ws);
        let d = dpi_symbolic(&x, ws);
        let w = weyl0_of_diffop(&d, ws.lambda).max_abs_diff(&weyl0_dpi(&x, ws));
        let s = berezin_of_diffop(&d, ws.lambda).max_abs_diff(&berezin_dpi(&x, ws));
        w.max(s)
    }));
    Ok(Outcome::new(samples, res))
}

fn corr_dpi_derivative(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let samples = 50;
    let mut res = 0.0f64;
    for _ in 0..samples {
        let x = sample::lie_element(rng, ws);
        let z = sample::complex_vec(rng, ws.n);
        let diff = |h: f64| -> Result<C64> {
            Ok((weyl0_pi_closed(&ws.exp(&x, h), &z, ws)? - weyl0_pi_closed(&ws.exp(&x, -h), &z, ws)?) / (2.0 * h))
        };
        let h = 1e-3;
        let numeric = (diff(h / 2.0)? * 4.0 - diff(h)?) / 3.0;
        res = res.max(rel(numeric, weyl0_dpi(&x, ws).eval(&z)));
    }
    Ok(Outcome::new(samples, res))
}

fn corr_weyl1_cross_model(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let n = ws.n;
    let samples = 20;
    let mut res = 0.0f64;
    for _ in 0..samples {
        let g = admissible_mehler(ws, rng);
        let k = pi_prime_kernel(&g, ws)?;
        let (a, b) = (real_vec(rng, n), real_vec(rng, n));
        let z: Vec<C64> = a.iter().zip(&b).map(|(x, y)| c(*x, *y)).collect();
        let expected = weyl0_pi_closed(&g, &z, ws)?;
        res = res
            .max(rel(weyl1_symbol(&k, &a, &b, ws.lambda)?, expected))
            .max(rel(weyl1_symbol_trace(&k, &a, &b, ws.lambda)?, expected));
    }
    Ok(Outcome::new(samples, res))
}

// sw-axioms

fn axioms_report(ctx: &Ctx, rng: &mut ChaCha8Rng) -> crate::correspondences::SwAxiomsReport {
    let ws = &ctx.ws;
    let mut ops: Vec<GaussianKernelOp> = (0..9).map(|_| sample::gaussian_kernel(rng, ws.n, ws.lambda)).collect();
    ops.push(GaussianKernelOp::coherent_projector(&vec![r(0.0); ws.n], ws.lambda));
    let gs: Vec<GroupElement> = (0..50).map(|_| sample::group_element(rng, ws)).collect();
    let zs: Vec<Vec<C64>> = (0..10).map(|_| sample::complex_vec(rng, ws.n)).collect();
    let c = &ctx.config;
    let defaults = SwTolerances::default();
    let tol = SwTolerances {
        unit: c.tolerance(Suite::SwAxioms, "unit", defaults.unit),
        reality: c.tolerance(Suite::SwAxioms, "reality", defaults.reality),
        covariance: defaults.covariance,
        traciality: c.tolerance(Suite::SwAxioms, "traciality", defaults.traciality),
    };
    sw_axioms_check(&ops, &gs, &zs, ws, &tol, CONTOUR_ORDER)
}

fn projector_self_traciality(ctx: &Ctx, _rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let p = GaussianKernelOp::coherent_projector(&vec![r(0.0); ctx.ws.n], ctx.ws.lambda);
    let quad = crate::correspondences::traciality_integral(&p, &p, CONTOUR_ORDER, QuadMode::Contour)?;
    let exact = p.compose(&p)?.trace()?;
    Ok(Outcome::new(1, (quad - 1.0).norm().max((exact - 1.0).norm())).with_order(CONTOUR_ORDER))
}

// orbit

fn orbit_pairing(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let samples = 100;
    let res = worst((0..samples).map(|_| {
        let x = sample::lie_element(rng, ws);
        psi_pairing_poly(&x, ws).max_abs_diff(&weyl0_dpi(&x, ws))
    }));
    Ok(Outcome::new(samples, res))
}

fn orbit_equivariance(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let samples = 200;
    let res = worst((0..samples).map(|_| {
        let g = sample::group_element(rng, ws);
        let z = sample::complex_vec(rng, ws.n);
        let central = (psi_map(&ws.act(&g, &z), ws).d - ws.lambda).abs();
        psi_equivariance_check(&g, &z, ws).max(central)
    }));
    Ok(Outcome::new(samples, res))
}

fn orbit_w0_prime(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let ws = &ctx.ws;
    let samples = 20;
    let mut res = 0.0f64;
    for _ in 0..samples {
        let k = sample::gaussian_kernel(rng, ws.n, ws.lambda);
        let z = sample::complex_vec(rng, ws.n);
        res = res.max(rel(w0_prime(&k, &psi_map(&z, ws), ws)?, weyl0_symbol_trace(&k, &z)?));
    }
    Ok(Outcome::new(samples, res))
}

// star

fn scaled_diff<V: crate::algebra::Vars>(a: &crate::algebra::Poly<V>, b: &crate::algebra::Poly<V>) -> f64 {
    a.max_abs_diff(b) / b.max_abs_coeff().max(1.0)
}

fn random_xy(rng: &mut ChaCha8Rng, n: usize) -> PolyXY {
    let degree = rng.random_range(1..=4);
    sample::poly(rng, n, degree, 4)
}

fn star_associativity(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = ctx.config.n.min(2);
    let samples = 100;
    let res = worst((0..samples).map(|_| {
        let (f, g, h) = (random_xy(rng, n), random_xy(rng, n), random_xy(rng, n));
        scaled_diff(&moyal(&moyal(&f, &g), &h), &moyal(&f, &moyal(&g, &h)))
    }));
    Ok(Outcome::new(samples, res))
}

fn star_weyl_homomorphism(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = ctx.config.n.min(2);
    let samples = 100;
    let mut res = 0.0f64;
    for _ in 0..samples {
        let (f, g) = (random_xy(rng, n), random_xy(rng, n));
        let lhs = weyl_quantize_poly(&moyal(&f, &g));
        let rhs = weyl_quantize_poly(&f).compose(&weyl_quantize_poly(&g))?;
        let scale = rhs.terms().map(|(_, c)| c.norm()).fold(1.0, f64::max);
        res = res.max(lhs.max_abs_diff(&rhs) / scale);
    }
    Ok(Outcome::new(samples, res))
}

fn star_antisymmetry(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = ctx.config.n.min(2);
    let samples = 100;
    let res = worst((0..samples).map(|_| {
        let (f, g) = (random_xy(rng, n), random_xy(rng, n));
        (0..=4u32)
            .map(|l| {
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                scaled_diff(&moyal_pl(&f, &g, l), &moyal_pl(&g, &f, l).scale(r(sign)))
            })
            .fold(0.0, f64::max)
    }));
    Ok(Outcome::new(samples, res))
}

fn star_weyl1_of_weyl(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = ctx.config.n.min(2);
    let lambda = ctx.config.lambda;
    let samples = 50;
    let res = worst((0..samples).map(|_| {
        let f = random_xy(rng, n);
        scaled_diff(&weyl1_of_diffop(&weyl_quantize_poly(&f), lambda), &f.scale_y(lambda))
    }));
    Ok(Outcome::new(samples, res))
}

fn star_gaussian_series(ctx: &Ctx, _rng: &mut ChaCha8Rng) -> Result<Outcome> {
    Ok(Outcome::new(1, gaussian_star0_series_residual(ctx.config.lambda, 6)))
}

fn random_quadratic(rng: &mut ChaCha8Rng, n: usize, lambda: f64) -> QuadraticSpec {
    QuadraticSpec {
        c0: sample::uniform(rng, -1.0, 1.0),
        a: sample::complex_vec(rng, n).into_iter().map(|a| a * 0.5).collect(),
        b: (0..n)
            .map(|_| {
                let s = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                s * sample::uniform(rng, 0.1, 1.0) * lambda
            })
            .collect(),
    }
}

fn star_exp_taylor(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = ctx.config.n.min(2);
    let lambda = ctx.config.lambda;
    let order = 8;
    let mut samples = 0;
    let mut res = 0.0f64;
    for _ in 0..4 {
        let spec = random_quadratic(rng, n, lambda);
        let series = star_exp_series(&spec.polynomial(), order, |f, g| star0(f, g, lambda))?;
        for _ in 0..2 {
            let z: Vec<C64> = sample::complex_vec(rng, n).into_iter().map(|v| v * 0.7).collect();
            let taylor = star_exp_closed_taylor(&spec, &z, lambda, order)?;
            for (k, tk) in taylor.iter().enumerate() {
                res = res.max(rel(*tk, series.coefficients[k].eval(&z)));
            }
            samples += 1;
        }
    }
    Ok(Outcome::new(samples, res))
}

fn star_exp_pure_quadratic(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let lambda = ctx.config.lambda;
    let samples = 20;
    let mut res = 0.0f64;
    for _ in 0..samples {
        let b = sample::uniform(rng, 0.1, 1.4) * lambda;
        let spec = QuadraticSpec { c0: 0.0, a: vec![r(0.0)], b: vec![b] };
        let z = [sample::complex_normal(rng)];
        let expected = (I * lambda * z[0].norm_sqr() * (b / lambda).tan()).exp() / (b / lambda).cos();
        res = res.max(rel(star_exp_closed(&spec, &z, lambda)?, expected));
    }
    Ok(Outcome::new(samples, res))
}

/// The star exponential against `W₀(π(exp X))` with `α_k(t) = −2b_k/λ`,
/// `u = 2a/λ`, `c = c₀/λ + Σb_k/λ²`, `χ ≡ 1`.
fn star_exp_vs_group(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = ctx.config.n;
    let lambda = ctx.config.lambda;
    let ws = WeightSystem::new(
        lambda,
        (0..n).map(|j| (0..n).map(|k| if j == k { 1.0 } else { 0.0 }).collect()).collect(),
        vec![0.0; n],
    )?;
    let samples = 20;
    let mut res = 0.0f64;
    for _ in 0..samples {
        let spec = random_quadratic(rng, n, lambda);
        let x = crate::group::LieElement::new(
            spec.b.iter().map(|b| -2.0 * b / lambda).collect(),
            spec.a.iter().map(|a| a * (2.0 / lambda)).collect(),
            spec.c0 / lambda + spec.b.iter().sum::<f64>() / (lambda * lambda),
        );
        let z = sample::complex_vec(rng, n);
        res = res.max(rel(star_exp_closed(&spec, &z, lambda)?, weyl0_pi_closed(&ws.exp(&x, 1.0), &z, &ws)?));
    }
    Ok(Outcome::new(samples, res))
}

fn registry(n: usize) -> Vec<CheckDef> {
    use Suite::*;
    let lemma_tol = if n == 1 { 1e-8 } else { 1e-7 };
    vec![
        def(Group, "exp-additivity", 1e-12, group_exp_additivity),
        def(Group, "associativity", 1e-12, group_associativity),
        def(Group, "inverse", 1e-12, group_inverse),
        def(Group, "coadjoint-pairing", 1e-10, group_coadjoint_pairing),
        def(Gaussian, "lemma-vs-quadrature", lemma_tol, gaussian_lemma_vs_quadrature),
        def(Gaussian, "trace-cyclicity", 1e-10, gaussian_trace_cyclicity),
        def(Gaussian, "truncated-trace", 1e-8, gaussian_truncated_trace),
        def(Gaussian, "compression-convergence", 1e-6, gaussian_compression_convergence),
        def(Gaussian, "adjoint-matrix", 1e-12, gaussian_adjoint_matrix),
        def(Representation, "homomorphism", 1e-10, rep_homomorphism),
        def(Representation, "adjoint-inverse", 1e-12, rep_adjoint_inverse),
        def(Representation, "dpi-bracket", 1e-11, rep_dpi_bracket),
        def(Representation, "dpi-derivative", 1e-6, rep_dpi_derivative),
        def(Representation, "mehler-vs-quadrature", 1e-6, rep_mehler_vs_quadrature),
        def(Representation, "hermite-eigen", 1e-7, rep_hermite_eigen),
        def(Representation, "pi-prime-vs-quadrature", 1e-6, rep_pi_prime_vs_quadrature),
        def(Correspondences, "weyl0-trace-vs-closed", 1e-10, corr_trace_vs_closed),
        def(Correspondences, "weyl0-closed-forms-agree", 1e-12, corr_closed_forms_agree),
        def(Correspondences, "weyl0-integral-vs-closed", 1e-7, corr_integral_vs_closed),
        def(Correspondences, "apq-closed-vs-integral", 1e-8, corr_apq),
        def(Correspondences, "covariance-berezin", 1e-9, corr_covariance_berezin),
        def(Correspondences, "covariance-weyl0", 1e-9, corr_covariance_weyl0),
        def(Correspondences, "dpi-symbols", 1e-12, corr_dpi_symbols),
        def(Correspondences, "dpi-derivative", 1e-6, corr_dpi_derivative),
        def(Correspondences, "weyl1-cross-model", 1e-10, corr_weyl1_cross_model),
        def(SwAxioms, "projector-self-traciality", 1e-12, projector_self_traciality),
        def(Orbit, "pairing-identity", 1e-12, orbit_pairing),
        def(Orbit, "equivariance", 1e-9, orbit_equivariance),
        def(Orbit, "w0-prime-round-trip", 1e-12, orbit_w0_prime),
        def(Star, "moyal-associativity", 1e-12, star_associativity),
        def(Star, "weyl-homomorphism", 1e-12, star_weyl_homomorphism),
        def(Star, "antisymmetry", 1e-12, star_antisymmetry),
        def(Star, "weyl1-of-weyl", 1e-10, star_weyl1_of_weyl),
        def(Star, "gaussian-star0-series", 1e-10, star_gaussian_series),
        def(Star, "star-exp-taylor", 1e-9, star_exp_taylor),
        def(Star, "star-exp-pure-quadratic", 1e-12, star_exp_pure_quadratic),
        def(Star, "star-exp-vs-group", 1e-10, star_exp_vs_group),
    ]
}

fn check_rng(config: &Config, suite: Suite, name: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed ^ fnv1a(&format!("{suite}.{name}")))
}

fn run_check(ctx: &Ctx, check: &CheckDef, timings: bool) -> CheckRecord {
    let tolerance = ctx.config.tolerance(check.suite, check.name, check.tolerance);
    let mut rng = check_rng(&ctx.config, check.suite, check.name);
    let start = Instant::now();
    let outcome = (check.body)(ctx, &mut rng);
    let wall_time = timings.then(|| start.elapsed().as_secs_f64());
    match outcome {
        Ok(o) => CheckRecord {
            name: check.name.into(),
            samples: o.samples,
            max_abs_residual: o.residual,
            tolerance,
            pass: o.residual <= tolerance,
            quad_order: o.quad_order,
            error: None,
            wall_time,
        },
        Err(e) => CheckRecord {
            name: check.name.into(),
            samples: 0,
            max_abs_residual: f64::NAN,
            tolerance,
            pass: false,
            quad_order: None,
            error: Some(e.to_string()),
            wall_time,
        },
    }
}

fn run_axioms(ctx: &Ctx, timings: bool) -> Vec<CheckRecord> {
    let mut rng = check_rng(&ctx.config, Suite::SwAxioms, "axioms");
    let start = Instant::now();
    let report = axioms_report(ctx, &mut rng);
    let wall_time = timings.then(|| start.elapsed().as_secs_f64());
    report
        .checks
        .into_iter()
        .map(|a| {
            let tolerance = ctx.config.tolerance(Suite::SwAxioms, &a.name, a.tolerance);
            let error = (!a.errors.is_empty()).then(|| a.errors.join("; "));
            CheckRecord {
                pass: error.is_none() && a.max_residual <= tolerance,
                name: a.name,
                samples: a.samples,
                max_abs_residual: a.max_residual,
                tolerance,
                quad_order: a.quad_order,
                error,
                wall_time,
            }
        })
        .collect()
}

/// Runs the named suite (or `all`) and assembles the report.
pub fn run_suite(name: &str, config: &Config, options: RunOptions) -> Result<Report> {
    config.validate()?;
    let selected = select_suites(name)?;
    let ctx = Ctx {
        config: config.clone(),
        ws: config.weights()?,
    };
    let checks: Vec<CheckDef> = registry(config.n)
        .into_iter()
        .filter(|c| selected.contains(&c.suite))
        .collect();
    let work = || -> (Vec<CheckRecord>, Vec<CheckRecord>) {
        rayon::join(
            || checks.par_iter().map(|c| run_check(&ctx, c, options.timings)).collect(),
            || {
                if selected.contains(&Suite::SwAxioms) {
                    run_axioms(&ctx, options.timings)
                } else {
                    Vec::new()
                }
            },
        )
    };
    let (records, axioms) = match options.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work),
        None => work(),
    };
    let mut suites = Vec::new();
    for suite in Suite::ALL {
        if !selected.contains(&suite) {
            suites.push(SuiteReport {
                name: suite.name().into(),
                status: "skipped".into(),
                reason: Some("not selected".into()),
                checks: Vec::new(),
            });
            continue;
        }
        let mut list: Vec<CheckRecord> = if suite == Suite::SwAxioms { axioms.clone() } else { Vec::new() };
        list.extend(
            checks
                .iter()
                .zip(&records)
                .filter(|(c, _)| c.suite == suite)
                .map(|(_, r)| r.clone()),
        );
        suites.push(SuiteReport {
            name: suite.name().into(),
            status: "ran".into(),
            reason: None,
            checks: list,
        });
    }
    let total = suites.iter().map(|s| s.checks.len()).sum();
    let passed = suites.iter().flat_map(|s| &s.checks).filter(|c| c.pass).count();
    Ok(Report {
        schema: SCHEMA,
        config: config.clone(),
        suites,
        summary: Summary {
            checks: total,
            passed,
            failed: total - passed,
            pass: passed == total,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip_and_validation() {
        let c = Config::default();
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(Config::from_json(&json).unwrap(), c);
        assert!(matches!(
            Config::from_json(r#"{"lambda":1,"n":2,"m":1,"alpha":[[1]],"beta":[0]}"#),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            Config::from_json(r#"{"lambda":-1,"n":1,"m":1,"alpha":[[1]],"beta":[0]}"#),
            Err(Error::Config(_))
        ));
        assert_eq!(c.resolved_quad_order(), 60);
        assert!(matches!(select_suites("nope"), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn group_suite_is_deterministic() {
        let c = Config::default();
        let a = run_suite("group", &c, RunOptions::default()).unwrap();
        let b = run_suite("group", &c, RunOptions { jobs: Some(2), timings: false }).unwrap();
        assert!(a.passed(), "{}", a.to_json());
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.suites.len(), Suite::ALL.len());
        assert_eq!(a.suites.iter().filter(|s| s.status == "skipped").count(), Suite::ALL.len() - 1);
        let mut strict = c.clone();
        strict.tolerances.insert("group".into(), 1e-20);
        let failing = run_suite("group", &strict, RunOptions::default()).unwrap();
        assert!(!failing.passed());
    }
}
