//! Command-line front end.
//!
//! Machine-readable output (CSV or JSON) goes to standard output, a short
//! human summary to standard error. Every output embeds the full run
//! configuration: CSV as a leading `# config: {...}` line, JSON under the
//! `config` key.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::boundary::{outer_from_modulus, BoundaryGrid, RECONSTRUCTION_GRID};
use crate::carleson::{
    geometric_lemma_check, graded_sup, moments, square_measure, uniform_square_area,
    weighted_containment_symbol, Containment, DyadicSquare, RadialWeight, SymbolDensity, Uniform,
};
use crate::casestudy::{default_c_values, levelset_identity_check, run_experiment};
use crate::error::{Error, Result};
use crate::hardy::{containment_hp_symbol, sarason_limit_check, Membership};
use crate::series::{phi_c_series, theta_series, PowerSeries, DEFAULT_ORDER};
use crate::symbol::Symbol;
use crate::toeplitz::{hb_norm_sq, homomorphism_residual, monomial_hb_norm_sq, monomial_norm_sweep};

#[derive(Parser, Debug)]
#[command(name = "hbspace", version, about = "Norms and containment tests for de Branges-Rovnyak spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Taylor coefficients of the symbol.
    Coeffs(Common),
    /// H(b)-norm of a polynomial.
    Hbnorm {
        #[command(flatten)]
        common: Common,
        /// Use the monomial z^N.
        #[arg(long, conflicts_with = "poly_file")]
        monomial: Option<usize>,
        /// Polynomial coefficients, one `re im` pair per line.
        #[arg(long)]
        poly_file: Option<PathBuf>,
        /// Norms of all monomials up to the order.
        #[arg(long, conflicts_with_all = ["monomial", "poly_file"])]
        sweep: bool,
    },
    /// Containment of H^p, the Dirichlet space, or a Gevrey-weighted space.
    Containment {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        space: Space,
        /// Hardy exponent in [2, inf]; `inf` is accepted.
        #[arg(long, value_parser = parse_exponent)]
        p: Option<f64>,
        /// Constant of the weight exp(-c/(1-r)).
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        gevrey_c: f64,
    },
    /// Level profiles of |phi_c|^2 (or |theta phi_c|^2 with --theta) over a c grid.
    Casestudy {
        #[command(flatten)]
        common: Common,
        /// Comma-separated c values; defaults depend on --theta.
        #[arg(long, value_delimiter = ',')]
        c_values: Vec<f64>,
    },
    /// Runs the invariant suites and reports pass/fail per suite.
    Selftest(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Exponent c of (1 - z)^(-c).
    #[arg(long, allow_hyphen_values = true)]
    pub phi_c: Option<f64>,
    /// Multiply by the singular inner function.
    #[arg(long)]
    pub theta: bool,
    /// Symbol coefficients, one `re im` pair per line.
    #[arg(long, conflicts_with_all = ["phi_c", "theta"])]
    pub coeff_file: Option<PathBuf>,
    /// Series truncation order.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    /// Boundary grid size (power of two).
    #[arg(long, default_value_t = RECONSTRUCTION_GRID)]
    pub grid_m: usize,
    /// Dyadic levels, as `a..b`.
    #[arg(long, default_value = "6..14", value_parser = parse_levels)]
    pub levels: (u32, u32),
    /// Starting quadrature refinement.
    #[arg(long, default_value_t = 0)]
    pub refinement: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance override `suite=value`; repeatable.
    #[arg(long = "tol", value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Hp,
    Dirichlet,
    Gevrey,
}

fn parse_levels(s: &str) -> std::result::Result<(u32, u32), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a: u32 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: u32 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a == 0 || b < a || b > 30 {
        return Err("levels must satisfy 1 <= a <= b <= 30".into());
    }
    Ok((a, b))
}

fn parse_exponent(s: &str) -> std::result::Result<f64, String> {
    match s.trim() {
        "inf" | "infinity" | "Inf" => Ok(f64::INFINITY),
        other => other.parse().map_err(|e| format!("{e}")),
    }
}

fn parse_tol(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected suite=value")?;
    let v: f64 = v.parse().map_err(|e| format!("{e}"))?;
    Ok((k.trim().to_string(), v))
}

/// Everything that determines a run's output.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub phi_c: Option<f64>,
    pub theta: bool,
    pub coeff_file: Option<PathBuf>,
    pub order: usize,
    pub grid_m: usize,
    pub levels: (u32, u32),
    pub refinement: u32,
    pub format: Format,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, serde_json::Value>,
}

impl RunConfig {
    fn new(subcommand: &str, c: &Common) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            phi_c: c.phi_c,
            theta: c.theta,
            coeff_file: c.coeff_file.clone(),
            order: c.order,
            grid_m: c.grid_m,
            levels: c.levels,
            refinement: c.refinement,
            format: c.format,
            seed: c.seed,
            tolerances: c.tol.iter().cloned().collect(),
            extra: BTreeMap::new(),
        }
    }

    fn with(mut self, key: &str, value: serde_json::Value) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }

    fn header(&self) -> String {
        format!("# config: {}\n", serde_json::to_string(self).expect("config serializes"))
    }
}

/// Reads `re im` pairs, one per line; blank lines and `#` comments skipped.
pub fn read_coefficients(path: &Path) -> Result<PowerSeries> {
    let text = std::fs::read_to_string(path)?;
    let mut coeffs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("{}:{}: bad number {s:?}", path.display(), i + 1)))
        };
        let value = match parts.as_slice() {
            [re] => Complex64::new(parse(re)?, 0.0),
            [re, im] => Complex64::new(parse(re)?, parse(im)?),
            _ => {
                return Err(Error::Parse(format!(
                    "{}:{}: expected `re im`",
                    path.display(),
                    i + 1
                )))
            }
        };
        coeffs.push(value);
    }
    if coeffs.is_empty() {
        return Err(Error::Parse(format!("{}: no coefficients", path.display())));
    }
    Ok(PowerSeries::new(coeffs))
}

fn resolve_symbol(c: &Common) -> Result<Symbol> {
    if let Some(path) = &c.coeff_file {
        return Ok(Symbol::Series { series: read_coefficients(path)? });
    }
    match (c.phi_c, c.theta) {
        (Some(v), _) if !(v > 0.0) => Err(Error::NonPositiveExponent(v)),
        (Some(v), false) => Ok(Symbol::PhiC { c: v }),
        (Some(v), true) => Ok(Symbol::ThetaPhiC { c: v }),
        (None, true) => Ok(Symbol::Theta),
        (None, false) => Err(Error::Parse(
            "a symbol is required: --phi-c, --theta, or --coeff-file".into(),
        )),
    }
}

/// Result of a subcommand: stdout payload, stderr summary, success flag.
struct Outcome {
    stdout: String,
    summary: String,
    ok: bool,
}

fn emit<T: Serialize>(config: &RunConfig, result: &T, csv: String) -> Result<String> {
    Ok(match config.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json!({ "config": config, "result": result }))?;
            s.push('\n');
            s
        }
        Format::Csv => config.header() + &csv,
    })
}

fn csv_rows<I, R>(header: &[&str], rows: I) -> Result<String>
where
    I: IntoIterator<Item = R>,
    R: Serialize,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn cmd_coeffs(common: &Common) -> Result<Outcome> {
    let symbol = resolve_symbol(common)?;
    let config = RunConfig::new("coeffs", common);
    let series = symbol.series(common.order);
    let rows: Vec<(usize, f64, f64)> = series
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| (n, c.re, c.im))
        .collect();
    let csv = csv_rows(&["n", "re", "im"], &rows)?;
    Ok(Outcome {
        stdout: emit(&config, &json!({ "symbol": symbol, "coefficients": rows }), csv)?,
        summary: format!("{}: {} coefficients\n", symbol.label(), rows.len()),
        ok: true,
    })
}

fn cmd_hbnorm(
    common: &Common,
    monomial: Option<usize>,
    poly_file: Option<&Path>,
    sweep: bool,
) -> Result<Outcome> {
    let symbol = resolve_symbol(common)?;
    let phi = symbol.series(common.order);
    let config = RunConfig::new("hbnorm", common)
        .with("monomial", json!(monomial))
        .with("poly_file", json!(poly_file))
        .with("sweep", json!(sweep));
    if sweep {
        let rows: Vec<(usize, f64)> = monomial_norm_sweep(&phi).into_iter().enumerate().collect();
        let csv = csv_rows(&["n", "norm_sq"], &rows)?;
        let last = rows.last().map_or(f64::NAN, |r| r.1);
        return Ok(Outcome {
            stdout: emit(&config, &json!({ "symbol": symbol, "monomial_norms_sq": rows }), csv)?,
            summary: format!("{}: ||z^{}||^2 = {last}\n", symbol.label(), common.order),
            ok: true,
        });
    }
    let p = match (monomial, poly_file) {
        (Some(n), _) => PowerSeries::monomial(n),
        (None, Some(path)) => read_coefficients(path)?,
        (None, None) => {
            return Err(Error::Parse("hbnorm needs --monomial, --poly-file, or --sweep".into()))
        }
    };
    let norm_sq = match monomial {
        Some(n) => monomial_hb_norm_sq(&phi, n)?,
        None => hb_norm_sq(&phi, &p)?,
    };
    let csv = csv_rows(&["norm_sq"], [(norm_sq,)])?;
    Ok(Outcome {
        stdout: emit(&config, &json!({ "symbol": symbol, "norm_sq": norm_sq }), csv)?,
        summary: format!("{}: ||p||^2 = {norm_sq}\n", symbol.label()),
        ok: true,
    })
}

fn cmd_containment(common: &Common, space: Space, p: Option<f64>, gevrey_c: f64) -> Result<Outcome> {
    let symbol = resolve_symbol(common)?;
    let config = RunConfig::new("containment", common)
        .with("space", json!(space))
        .with("p", json!(p.map(|v| if v.is_infinite() { "inf".to_string() } else { v.to_string() })));
    match space {
        Space::Hp => {
            let p = p.ok_or_else(|| Error::Parse("--space hp needs --p".into()))?;
            let report = containment_hp_symbol(&symbol, p)?;
            let csv = csv_rows(&["r", "mean"], &report.evidence.evidence)?;
            let ok = report.verdict != Membership::Inconclusive;
            Ok(Outcome {
                stdout: emit(&config, &report, csv)?,
                summary: format!(
                    "{}: H^{} in H(b): {} (exponent {:.3})\n",
                    symbol.label(),
                    p,
                    report.verdict.as_str(),
                    report.evidence.growth_exponent
                ),
                ok,
            })
        }
        Space::Dirichlet | Space::Gevrey => {
            let weight = match space {
                Space::Gevrey => {
                    if !(gevrey_c > 0.0) {
                        return Err(Error::NonPositiveExponent(gevrey_c));
                    }
                    RadialWeight::Gevrey { c: gevrey_c }
                }
                _ => RadialWeight::Unweighted,
            };
            let config = config.with("weight", json!(weight));
            let result = weighted_containment_symbol(&symbol, weight, common.levels, common.refinement);
            let csv = result.report.to_csv()?;
            Ok(Outcome {
                summary: format!(
                    "{}: {} (slope {:.3}, {}){}\n",
                    symbol.label(),
                    result.containment.as_str(),
                    result.report.slope,
                    result.report.caveat,
                    if result.report.flagged { " [flagged]" } else { "" }
                ),
                ok: !result.report.flagged,
                stdout: emit(&config, &result, csv)?,
            })
        }
    }
}

fn cmd_casestudy(common: &Common, c_values: &[f64]) -> Result<Outcome> {
    let cs = if c_values.is_empty() {
        default_c_values(common.theta)
    } else {
        c_values.to_vec()
    };
    let config = RunConfig::new("casestudy", common).with("c_values", json!(cs));
    let experiment = run_experiment(&cs, common.theta, common.levels, common.refinement)?;
    let mut summary = String::new();
    for row in &experiment.rows {
        let _ = writeln!(
            summary,
            "c = {}{}: {} (slope {:.3})",
            row.c,
            if common.theta { " with theta" } else { "" },
            row.verdict.as_str(),
            row.report.slope
        );
    }
    if experiment.flagged {
        summary.push_str("some quadrature estimates did not converge\n");
    }
    Ok(Outcome {
        stdout: emit(&config, &experiment, experiment.to_csv()?)?,
        summary,
        ok: !experiment.flagged,
    })
}

/// One invariant suite: `metric ≤ tolerance` passes.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub metric: f64,
    pub tolerance: f64,
    pub passed: bool,
}

type SuiteFn = fn(&Common) -> Result<f64>;

/// Names, default tolerances, and metrics of the self-test suites.
pub fn suites() -> Vec<(&'static str, f64, SuiteFn)> {
    vec![
        ("homomorphism", 1e-12, suite_homomorphism as SuiteFn),
        ("norms", 1e-12, suite_norms),
        ("pythagorean", 1e-8, suite_pythagorean),
        ("outer", 1e-3, suite_outer),
        ("hardy", 0.0, suite_hardy),
        ("uniform_area", 1e-8, suite_uniform_area),
        ("dirichlet", 0.0, suite_dirichlet),
        ("theta_dirichlet", 0.0, suite_theta_dirichlet),
        ("levelset", 1e-12, suite_levelset),
        ("lemma", 0.0, suite_lemma),
        ("gevrey", 0.05, suite_gevrey),
        ("moments", 1e-10, suite_moments),
        ("sarason", 0.0, suite_sarason),
    ]
}

fn random_series(rng: &mut ChaCha8Rng, order: usize) -> PowerSeries {
    PowerSeries::new(
        (0..=order)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
}

/// Largest residual, relative to the size of `T_{φψ} p`, over 100 random
/// triples of order 64.
fn suite_homomorphism(c: &Common) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let (phi, psi, p) = (random_series(&mut rng, 64), random_series(&mut rng, 64), random_series(&mut rng, 64));
        let scale = crate::toeplitz::CoToeplitz::new(phi.mul(&psi, 64)).apply(&p)?.max_abs().max(1.0);
        worst = worst.max(homomorphism_residual(&phi, &psi, &p)? / scale);
    }
    Ok(worst)
}

fn suite_norms(c: &Common) -> Result<f64> {
    let order = c.order.max(1);
    let mut worst = 0.0_f64;
    for phi in [phi_c_series(0.5, order)?, phi_c_series(1.0, order)?, theta_series(order)] {
        for n in 0..=order {
            let a = monomial_hb_norm_sq(&phi, n)?;
            let b = hb_norm_sq(&phi, &PowerSeries::monomial(n))?;
            worst = worst.max(((a - b) / a).abs());
        }
    }
    let phi1 = phi_c_series(1.0, order)?;
    for n in 0..=order {
        if monomial_hb_norm_sq(&phi1, n)? != n as f64 + 2.0 {
            return Ok(f64::INFINITY);
        }
    }
    Ok(worst)
}

fn suite_pythagorean(c: &Common) -> Result<f64> {
    let mut worst = 0.0_f64;
    for symbol in [Symbol::PhiC { c: 0.25 }, Symbol::PhiC { c: 0.5 }, Symbol::ThetaPhiC { c: 1.0 }] {
        let triple = match crate::boundary::symbol_from_phi_with_tol(&symbol, c.grid_m, 64, f64::INFINITY) {
            Ok(t) => t,
            Err(_) => return Ok(f64::INFINITY),
        };
        if !(triple.a_at_zero().re > 0.0) {
            return Ok(f64::INFINITY);
        }
        worst = worst.max(triple.residual);
    }
    Ok(worst)
}

fn outer_error(m: usize) -> Result<f64> {
    let grid = BoundaryGrid::sample_real(m, |a| Symbol::PhiC { c: 0.25 }.boundary_value(a).norm())?;
    let outer = outer_from_modulus(&grid, 16)?;
    Ok(outer.max_deviation(&phi_c_series(0.25, 16)?))
}

fn suite_outer(c: &Common) -> Result<f64> {
    let coarse = outer_error(c.grid_m)?;
    let fine = outer_error(2 * c.grid_m)?;
    Ok(if fine < coarse { coarse } else { f64::INFINITY })
}

/// Number of wrong H^p verdicts.
fn suite_hardy(_: &Common) -> Result<f64> {
    let cases = [
        (0.1, 4.0, Membership::Yes),
        (0.4, 4.0, Membership::No),
        (0.2, f64::INFINITY, Membership::Yes),
        (0.6, f64::INFINITY, Membership::No),
    ];
    let mut wrong = 0;
    for (cv, p, expected) in cases {
        if containment_hp_symbol(&Symbol::PhiC { c: cv }, p)?.verdict != expected {
            wrong += 1;
        }
    }
    Ok(wrong as f64)
}

fn suite_uniform_area(_: &Common) -> Result<f64> {
    let mut worst = 0.0_f64;
    for n in 1..=12 {
        let exact = uniform_square_area(n);
        let got = square_measure(&Uniform, &DyadicSquare::new(n, 1)?, 0).value;
        worst = worst.max(((got - exact) / exact).abs());
    }
    Ok(worst)
}

fn regime_errors(with_theta: bool, c: &Common) -> Result<f64> {
    let e = run_experiment(&default_c_values(with_theta), with_theta, c.levels, c.refinement)?;
    let expected = [
        Containment::CompactlyContained,
        Containment::ContainedNotCompact,
        Containment::NotContained,
    ];
    let wrong = e.rows.iter().zip(expected).filter(|(r, v)| r.verdict != *v).count();
    Ok(wrong as f64 + if e.flagged { 1.0 } else { 0.0 })
}

fn suite_dirichlet(c: &Common) -> Result<f64> {
    regime_errors(false, c)
}

fn suite_theta_dirichlet(c: &Common) -> Result<f64> {
    regime_errors(true, c)
}

fn suite_levelset(_: &Common) -> Result<f64> {
    let mut worst = 0.0_f64;
    for cv in [1.0, 2.0] {
        for k in [1.0f64, 2.0] {
            let check = levelset_identity_check(cv, (-k).exp(), 100)?;
            if check.tangency_gap != 0.0 {
                return Ok(f64::INFINITY);
            }
            worst = worst.max(check.max_deviation);
        }
    }
    Ok(worst)
}

fn suite_lemma(c: &Common) -> Result<f64> {
    Ok([4u32, 8]
        .iter()
        .filter(|&&n| !geometric_lemma_check(n, 10_000, c.seed.wrapping_add(n as u64)))
        .count() as f64)
}

/// Largest relative change of the graded-grid supremum under doubling.
fn suite_gevrey(_: &Common) -> Result<f64> {
    let mut worst = 0.0_f64;
    for cv in [0.5, 1.0, 2.0] {
        for cp in [0.5, 1.0] {
            let d = SymbolDensity { symbol: Symbol::PhiC { c: cv }, weight: RadialWeight::Gevrey { c: cp } };
            let coarse = graded_sup(&d, 0);
            let fine = graded_sup(&d, 1);
            if !fine.is_finite() {
                return Ok(f64::INFINITY);
            }
            worst = worst.max(((fine - coarse) / fine).abs());
        }
    }
    Ok(worst)
}

fn suite_moments(_: &Common) -> Result<f64> {
    let mut worst = 0.0_f64;
    for n in 0..=32 {
        worst = worst.max((moments(|_| 1.0, n)? - 1.0 / (n as f64 + 1.0)).abs());
    }
    Ok(worst)
}

fn suite_sarason(c: &Common) -> Result<f64> {
    let order = c.order.max(8);
    let mut wrong = 0;
    if sarason_limit_check(&phi_c_series(0.2, order)?).convergent != Membership::Yes {
        wrong += 1;
    }
    let one = sarason_limit_check(&phi_c_series(1.0, order)?);
    if one.convergent != Membership::No {
        wrong += 1;
    }
    if one.partial_sums.iter().enumerate().any(|(n, s)| *s != n as f64 + 2.0) {
        wrong += 1;
    }
    Ok(wrong as f64)
}

pub fn run_suites(common: &Common) -> Result<Vec<SuiteResult>> {
    let overrides: BTreeMap<String, f64> = common.tol.iter().cloned().collect();
    let names: Vec<&str> = suites().iter().map(|s| s.0).collect();
    if let Some(bad) = overrides.keys().find(|k| !names.contains(&k.as_str())) {
        return Err(Error::Parse(format!("unknown suite {bad:?} in --tol")));
    }
    suites()
        .into_iter()
        .map(|(name, default, f)| {
            let tolerance = overrides.get(name).copied().unwrap_or(default);
            let metric = f(common)?;
            Ok(SuiteResult {
                suite: name.to_string(),
                metric,
                tolerance,
                passed: metric <= tolerance,
            })
        })
        .collect()
}

fn cmd_selftest(common: &Common) -> Result<Outcome> {
    let config = RunConfig::new("selftest", common);
    let results = run_suites(common)?;
    let mut summary = String::new();
    for r in &results {
        let _ = writeln!(
            summary,
            "[{}] {}: {:e} (tolerance {:e})",
            if r.passed { "PASS" } else { "FAIL" },
            r.suite,
            r.metric,
            r.tolerance
        );
    }
    let ok = results.iter().all(|r| r.passed);
    let rows: Vec<_> = results.iter().map(|r| (&r.suite, r.metric, r.tolerance, r.passed)).collect();
    let csv = csv_rows(&["suite", "metric", "tolerance", "passed"], &rows)?;
    Ok(Outcome {
        stdout: emit(&config, &json!({ "suites": results, "passed": ok }), csv)?,
        summary,
        ok,
    })
}

/// Exit status for usage errors.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for failed suites, flagged estimates, or runtime errors.
pub const EXIT_FAILURE: i32 = 1;

/// Runs a parsed command, writing machine output to `out` and the summary
/// to `err`. Returns the process exit status.
pub fn run<O: Write, E: Write>(cli: &Cli, out: &mut O, err: &mut E) -> i32 {
    let outcome = match &cli.command {
        Command::Coeffs(c) => cmd_coeffs(c),
        Command::Hbnorm { common, monomial, poly_file, sweep } => {
            cmd_hbnorm(common, *monomial, poly_file.as_deref(), *sweep)
        }
        Command::Containment { common, space, p, gevrey_c } => cmd_containment(common, *space, *p, *gevrey_c),
        Command::Casestudy { common, c_values } => cmd_casestudy(common, c_values),
        Command::Selftest(c) => cmd_selftest(c),
    };
    match outcome {
        Ok(o) => {
            let _ = out.write_all(o.stdout.as_bytes());
            let _ = err.write_all(o.summary.as_bytes());
            if o.ok {
                0
            } else {
                EXIT_FAILURE
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Parse(_) | Error::NonPositiveExponent(_) | Error::ExponentBelowTwo(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
    }
}

/// Parses `std::env::args` and runs.
pub fn main_from_env() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(&cli, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("hbspace").chain(args.iter().copied())).unwrap()
    }

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let cli = parse(args);
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(&cli, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn parsers() {
        assert_eq!(parse_levels("6..14"), Ok((6, 14)));
        assert!(parse_levels("14..6").is_err());
        assert_eq!(parse_exponent("inf"), Ok(f64::INFINITY));
        assert_eq!(parse_tol("norms=1e-3"), Ok(("norms".to_string(), 1e-3)));
    }

    #[test]
    fn coeffs_examples() {
        let (code, out, _) = run_args(&["coeffs", "--phi-c", "1", "--order", "3"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines[0].starts_with("# config: {"));
        assert_eq!(lines[1], "n,re,im");
        assert_eq!(&lines[2..], ["0,1.0,0.0", "1,1.0,0.0", "2,1.0,0.0", "3,1.0,0.0"]);

        let (_, out, _) = run_args(&["coeffs", "--phi-c", "0.5", "--order", "2", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let re: Vec<f64> = v["result"]["coefficients"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r[1].as_f64().unwrap())
            .collect();
        assert_eq!(re, [1.0, 0.5, 0.375]);
        assert_eq!(v["config"]["order"], 2);
    }

    #[test]
    fn missing_symbol_is_usage_error() {
        let (code, _, err) = run_args(&["coeffs"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("symbol"));
        let (code, _, _) = run_args(&["coeffs", "--phi-c", "-1"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn hbnorm_monomial() {
        let (code, out, _) = run_args(&["hbnorm", "--phi-c", "1", "--monomial", "5"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().last(), Some("7.0"));
    }
}
