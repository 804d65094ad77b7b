//! Command-line front end.
//!
//! [`run`] parses arguments, executes one command and writes CSV or JSON to
//! `out`; warnings, notes and the verification summary go to `err`. Exit
//! codes: 0 when every check passes, 1 when a check fails, 2 on usage or
//! precondition errors.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ffi::OsString;
use std::fmt;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::cauchy::{
    angular_count_for, bound_constant, compare_discpoly, exterior_inner_product_images,
    exterior_norm_sq_monomial_image, exterior_norm_sq_power, exterior_norm_sq_power_numeric,
    laurent_norm_sq, transform_numeric, transform_polyanalytic_closed,
    LaurentTail,
};
use crate::discpoly::{
    disc_poly_expand, eval_disc_poly, inner_product_fns, random_polyanalytic, DiscPolyIndex,
    MonomialIndex, PolyanalyticFn,
};
use crate::error::{Error, Result};
use crate::quad::{annulus_integral, AnnulusRule, QuadratureRule};
use crate::range::{default_sample_points, numeric_rank_oracle, printed_dimension, range_profile};
use crate::scalar::beta_fn;
use crate::weights::{
    moment_numeric, v_functional, w_functional, w_upper_bound, ExteriorWeight, Finiteness,
    WeightParams,
};

/// Aliasing target used when sizing angular grids to the evaluation point.
const ALIAS_TOL: f64 = 1e-16;
const LEMMA_TOL: f64 = 1e-11;
const GRAM_TOL: f64 = 1e-12;
const IMAGE_ORTHO_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-8;
/// Truncation tail allowed in annulus oracles.
const TAIL_TOL: f64 = 1e-10;
const QUANTIZATION_WARN: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "polybergman",
    version,
    about = "Disc polynomials and the weighted solid Cauchy transform: evaluation, verification and range analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate R^γ_{m,n}(z) for |z| < 1.
    Eval(EvalArgs),
    /// Compare the quadrature transform of R^γ_{m,n} at z with its closed form.
    Transform(TransformArgs),
    /// Run a verification suite and stream one CSV row per check.
    Verify(VerifyArgs),
    /// Tabulate range dimensions with the numeric rank oracle.
    Range(RangeArgs),
    /// Report the boundedness functionals V, W and the bound constant.
    Bound(BoundArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemma,
    Propnorm,
    Propaction,
    Orthogonality,
    Bound,
    All,
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("bad number '{p}': {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected RE,IM, got '{s}'")),
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EvalArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub n: u32,
    /// Evaluation point as RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Complex64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct TransformArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub n: u32,
    /// Exterior point as RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Complex64,
    /// Radial Gauss–Jacobi nodes.
    #[arg(long, default_value_t = 64)]
    pub nodes: usize,
    /// Minimum angular count; raised until the aliasing error at z is negligible.
    #[arg(long, default_value_t = 256)]
    pub angular: usize,
    /// PASS threshold on |numeric − closed| / max(1, |closed|).
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Largest m and n in the transform sweep.
    #[arg(long, default_value_t = 6)]
    pub max_mn: u32,
    #[arg(long, default_value_t = 64)]
    pub nodes: usize,
    #[arg(long, default_value_t = 256)]
    pub angular: usize,
    /// Random functions in the bound suite.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// PASS threshold of the transform sweep.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Interior exponent of the bound suite.
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    /// Transform exponent of the bound suite.
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    /// Exterior weight exponent a of B(t) = t^a (t−1)^b.
    #[arg(long, default_value_t = -4.0)]
    pub a: f64,
    /// Exterior weight exponent b of B(t) = t^a (t−1)^b.
    #[arg(long, default_value_t = 2.0)]
    pub b: f64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct RangeArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub alpha: f64,
    /// Largest level n in the table.
    #[arg(long, default_value_t = 6)]
    pub n_max: u32,
    #[arg(long, default_value_t = 64)]
    pub nodes: usize,
    #[arg(long, default_value_t = 256)]
    pub angular: usize,
    /// Relative singular-value threshold of the rank oracle.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct BoundArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match execute(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(std::io::Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "output: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn execute(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> std::result::Result<i32, Failure> {
    match cmd {
        Command::Eval(a) => cmd_eval(a, out),
        Command::Transform(a) => cmd_transform(a, out, err),
        Command::Verify(a) => cmd_verify(a, out, err),
        Command::Range(a) => cmd_range(a, out, err),
        Command::Bound(a) => cmd_bound(a, out, err),
    }
}

/// A table cell; floats are printed with 17 significant digits in CSV.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => fmt_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) if x.is_finite() => json!(x + 0.0),
            Cell::Float(x) => json!(x.to_string()),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

/// Fixed 17-significant-digit scientific notation; `-0` prints as `0`.
pub fn fmt_float(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

struct Table {
    title: &'static str,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(title: &'static str, columns: &[&'static str]) -> Self {
        Self { title, columns: columns.to_vec(), rows: Vec::new() }
    }

    fn write(&self, format: Format, out: &mut dyn Write) -> std::result::Result<(), Failure> {
        match format {
            Format::Csv => {
                writeln!(out, "# polybergman {}; floats in %.16e (17 significant digits)", self.title)?;
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                w.flush()?;
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), v.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut *out, &json!({ "command": self.title, "rows": rows }))?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

fn complex_cells(z: Complex64) -> [Cell; 2] {
    [Cell::Float(z.re), Cell::Float(z.im)]
}

fn warn_near_quantized(gamma: f64, alpha: f64, err: &mut dyn Write) -> std::io::Result<()> {
    let d = alpha - gamma;
    let k = d.round();
    let gap = (d - k).abs();
    if k >= 0.0 && gap > 0.0 && gap <= QUANTIZATION_WARN {
        writeln!(
            err,
            "warning: alpha - gamma = {d} is within {gap:e} of the integer {k}; \
             range results are ill-conditioned here"
        )?;
    }
    Ok(())
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let value = eval_disc_poly(a.gamma, DiscPolyIndex::new(a.m, a.n), a.z)?;
    let mut t = Table::new("eval", &["gamma", "m", "n", "z_re", "z_im", "value_re", "value_im"]);
    let mut row = vec![Cell::Float(a.gamma), Cell::Int(a.m.into()), Cell::Int(a.n.into())];
    row.extend(complex_cells(a.z));
    row.extend(complex_cells(value));
    t.rows.push(row);
    t.write(a.format.unwrap_or(Format::Csv), out)?;
    Ok(0)
}

fn cmd_transform(a: &TransformArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::result::Result<i32, Failure> {
    warn_near_quantized(a.gamma, a.alpha, err)?;
    let angular = angular_count_for(a.z, a.angular, ALIAS_TOL);
    let rule = QuadratureRule::new(a.nodes, a.alpha, angular)?;
    let report = compare_discpoly(a.gamma, a.alpha, DiscPolyIndex::new(a.m, a.n), a.z, &rule)?;
    let verdict = if report.within(a.tol) { Verdict::Pass } else { Verdict::Fail };
    let mut t = Table::new(
        "transform",
        &[
            "gamma", "alpha", "m", "n", "z_re", "z_im", "nodes", "angular", "numeric_re", "numeric_im",
            "closed_re", "closed_im", "abs_err", "rel_err", "verdict",
        ],
    );
    let mut row = vec![
        Cell::Float(a.gamma),
        Cell::Float(a.alpha),
        Cell::Int(a.m.into()),
        Cell::Int(a.n.into()),
    ];
    row.extend(complex_cells(a.z));
    row.push(Cell::Int(a.nodes as i64));
    row.push(Cell::Int(angular as i64));
    row.extend(complex_cells(report.numeric));
    row.extend(complex_cells(report.closed));
    row.push(Cell::Float(report.abs_err));
    row.push(report.rel_err.map_or(Cell::Empty, Cell::Float));
    row.push(Cell::Text(verdict.to_string()));
    t.rows.push(row);
    t.write(a.format.unwrap_or(Format::Csv), out)?;
    Ok(i32::from(verdict == Verdict::Fail))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Divergent,
    Skipped,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Divergent => "DIVERGENT",
            Verdict::Skipped => "SKIPPED",
        })
    }
}

/// One row of a verification suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub case: String,
    pub value: Option<Complex64>,
    pub reference: Option<Complex64>,
    pub verdict: Verdict,
}

impl Check {
    fn compared(suite: &'static str, case: String, value: Complex64, reference: Complex64, pass: bool) -> Self {
        let verdict = if pass { Verdict::Pass } else { Verdict::Fail };
        Self { suite, case, value: Some(value), reference: Some(reference), verdict }
    }

    fn real(suite: &'static str, case: String, value: f64, reference: f64, pass: bool) -> Self {
        Self::compared(suite, case, Complex64::new(value, 0.0), Complex64::new(reference, 0.0), pass)
    }

    fn divergent(suite: &'static str, case: String) -> Self {
        Self { suite, case, value: None, reference: None, verdict: Verdict::Divergent }
    }

    fn skipped(suite: &'static str, case: String) -> Self {
        Self { suite, case, value: None, reference: None, verdict: Verdict::Skipped }
    }

    fn cells(&self) -> Vec<Cell> {
        let pair = |z: Option<Complex64>| match z {
            Some(z) => complex_cells(z).to_vec(),
            None => vec![Cell::Empty, Cell::Empty],
        };
        let mut row = vec![Cell::Text(self.suite.into()), Cell::Text(self.case.clone())];
        row.extend(pair(self.value));
        row.extend(pair(self.reference));
        match (self.value, self.reference) {
            (Some(v), Some(r)) => {
                let abs = (v - r).norm();
                row.push(Cell::Float(abs));
                row.push(if r.norm() > 0.0 { Cell::Float(abs / r.norm()) } else { Cell::Empty });
            }
            _ => row.extend([Cell::Empty, Cell::Empty]),
        }
        row.push(Cell::Text(self.verdict.to_string()));
        row
    }
}

/// Tallies of a suite run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub divergent: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(checks: &[Check]) -> Self {
        let mut s = Self::default();
        for c in checks {
            match c.verdict {
                Verdict::Pass => s.passed += 1,
                Verdict::Fail => s.failed += 1,
                Verdict::Divergent => s.divergent += 1,
                Verdict::Skipped => s.skipped += 1,
            }
        }
        s
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} passed / {} failed / {} divergent / {} skipped",
            self.passed, self.failed, self.divergent, self.skipped
        )
    }
}

fn fmt_z(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

const SWEEP_EXPONENTS: [f64; 4] = [0.0, 0.5, 1.0, 2.5];

fn sweep_points() -> [Complex64; 4] {
    [
        Complex64::new(1.5, 0.0),
        Complex64::from_polar(2.0, PI / 3.0),
        Complex64::new(-3.0, 0.5),
        Complex64::new(1.01, 0.0),
    ]
}

/// Rules keyed by `(alpha bits, angular count)`, built once per sweep.
struct RuleCache {
    rules: BTreeMap<(u64, usize), QuadratureRule>,
}

impl RuleCache {
    fn build(nodes: usize, keys: impl IntoIterator<Item = (f64, usize)>) -> Result<Self> {
        let mut rules = BTreeMap::new();
        for (alpha, angular) in keys {
            let key = (alpha.to_bits(), angular);
            if let std::collections::btree_map::Entry::Vacant(slot) = rules.entry(key) {
                slot.insert(QuadratureRule::new(nodes, alpha, angular)?);
            }
        }
        Ok(Self { rules })
    }

    fn get(&self, alpha: f64, angular: usize) -> &QuadratureRule {
        &self.rules[&(alpha.to_bits(), angular)]
    }
}

/// `C_α(e^ℓ_{k+m,k})` vanishes for `m ≥ 1`.
pub fn suite_lemma(nodes: usize, angular: usize) -> Result<Vec<Check>> {
    let points = [Complex64::new(1.5, 0.0), Complex64::new(-0.4, 2.1)];
    let mut cases = Vec::new();
    for &alpha in &SWEEP_EXPONENTS {
        for m in 1..=4u32 {
            for k in 0..=3u32 {
                for l in 0..=3u32 {
                    for &z in &points {
                        cases.push((alpha, m, k, l, z, angular_count_for(z, angular, ALIAS_TOL)));
                    }
                }
            }
        }
    }
    let cache = RuleCache::build(nodes, cases.iter().map(|c| (c.0, c.5)))?;
    cases
        .par_iter()
        .map(|&(alpha, m, k, l, z, ang)| {
            let f = PolyanalyticFn::from_terms([(Complex64::new(1.0, 0.0), MonomialIndex::new(k + m, k, l))]);
            let v = transform_numeric(&f, alpha, z, cache.get(alpha, ang))?;
            let case = format!("alpha={alpha};j={};k={k};l={l};z={}", k + m, fmt_z(z));
            Ok(Check::compared("lemma", case, v, Complex64::new(0.0, 0.0), v.norm() <= LEMMA_TOL))
        })
        .collect()
}

/// Quadrature transform of `R^γ_{m,n}` against `c^{γ,ω_α}_{m,n} z^{m−n−1}`.
pub fn suite_propaction(max_mn: u32, nodes: usize, angular: usize, tol: f64) -> Result<Vec<Check>> {
    let mut cases = Vec::new();
    for &gamma in &SWEEP_EXPONENTS {
        for &alpha in &SWEEP_EXPONENTS {
            for m in 0..=max_mn {
                for n in 0..=max_mn {
                    for z in sweep_points() {
                        cases.push((gamma, alpha, m, n, z, angular_count_for(z, angular, ALIAS_TOL)));
                    }
                }
            }
        }
    }
    let cache = RuleCache::build(nodes, cases.iter().map(|c| (c.1, c.5)))?;
    cases
        .par_iter()
        .map(|&(gamma, alpha, m, n, z, ang)| {
            let r = compare_discpoly(gamma, alpha, DiscPolyIndex::new(m, n), z, cache.get(alpha, ang))?;
            let case = format!("gamma={gamma};alpha={alpha};m={m};n={n};z={}", fmt_z(z));
            Ok(Check::compared("propaction", case, r.numeric, r.closed, r.within(tol)))
        })
        .collect()
}

/// Outer radius at which the annulus tail of `|z|^{−2p} B` drops below [`TAIL_TOL`].
fn truncation_radius(p: u32, weight: ExteriorWeight) -> f64 {
    let decay = 2.0 * (f64::from(p) - weight.a - weight.b - 1.0);
    (TAIL_TOL * decay / (2.0 * PI)).powf(-1.0 / decay).max(4.0)
}

/// Exterior norms of `z^{−p}` and of monomial images against annulus quadrature.
pub fn suite_propnorm(weight: ExteriorWeight, nodes: usize) -> Result<(Vec<Check>, Vec<String>)> {
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    let mut numeric = BTreeMap::new();
    let wcase = format!("a={};b={}", weight.a, weight.b);
    for p in 1..=5u32 {
        let case = format!("power;p={p};{wcase}");
        match exterior_norm_sq_power(p, weight)? {
            Finiteness::Divergent(at) => checks.push(Check::divergent("propnorm", format!("{case};at={at}"))),
            Finiteness::Finite(closed) => {
                if weight.b < 0.0 {
                    checks.push(Check::skipped("propnorm", format!("{case};no-tail-bound")));
                    continue;
                }
                let (value, tail) = exterior_norm_sq_power_numeric(p, weight, truncation_radius(p, weight), 32)?;
                numeric.insert(p, value);
                let pass = (value - closed).abs() <= tail + NORM_TOL * closed.abs().max(1.0);
                checks.push(Check::real("propnorm", case, value, closed, pass));
            }
        }
    }
    if let Some(&oracle) = numeric.get(&1) {
        // the u^{p} variant of the power integral, for comparison only
        let x = 1.0 + 1.0 - weight.a - weight.b;
        if x > 0.0 && weight.b > -1.0 {
            notes.push(format!(
                "note: with u^(k-j+1) in place of u^(k-j-1) the p=1 norm would be {} against the quadrature value {}",
                fmt_float(PI * beta_fn(x, weight.b + 1.0)?),
                fmt_float(oracle)
            ));
        }
    }
    let radial: Vec<(f64, QuadratureRule)> = [0.0, 0.5]
        .into_iter()
        .map(|alpha| Ok((alpha, QuadratureRule::new(nodes, alpha, 1)?)))
        .collect::<Result<_>>()?;
    for (alpha, rule) in &radial {
        for k in 0..=3u32 {
            for j in 0..=k {
                for l in 0..=2u32 {
                    let idx = MonomialIndex::new(j, k, l);
                    let case = format!("image;alpha={alpha};j={j};k={k};l={l};{wcase}");
                    match exterior_norm_sq_monomial_image(idx, *alpha, weight)? {
                        Finiteness::Divergent(at) => {
                            checks.push(Check::divergent("propnorm", format!("{case};at={at}")))
                        }
                        Finiteness::Finite(closed) => match numeric.get(&(k - j + 1)) {
                            Some(&power) => {
                                let mom = moment_numeric(k, l, *alpha, rule)?;
                                let value = mom * mom * power;
                                let pass = (value - closed).abs() <= NORM_TOL * closed.abs().max(1.0);
                                checks.push(Check::real("propnorm", case, value, closed, pass));
                            }
                            None => checks.push(Check::skipped("propnorm", case)),
                        },
                    }
                }
            }
        }
    }
    Ok((checks, notes))
}

/// Interior Gram matrix of disc polynomials and exterior orthogonality of images.
pub fn suite_orthogonality(weight: ExteriorWeight) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for gamma in [0.0, 0.5, 2.0] {
        let idx: Vec<DiscPolyIndex> = (0..=5)
            .flat_map(|m| (0..=5).map(move |n| DiscPolyIndex::new(m, n)))
            .collect();
        let basis: Vec<PolyanalyticFn> = idx
            .iter()
            .map(|&i| disc_poly_expand(gamma, i))
            .collect::<Result<_>>()?;
        let diag: Vec<f64> = basis
            .iter()
            .map(|f| Ok(inner_product_fns(f, f, gamma)?.re))
            .collect::<Result<_>>()?;
        for a in 0..basis.len() {
            for b in a + 1..basis.len() {
                let ip = inner_product_fns(&basis[a], &basis[b], gamma)?;
                let scale = (diag[a] * diag[b]).sqrt();
                let case = format!(
                    "gram;gamma={gamma};m={};n={};m2={};n2={}",
                    idx[a].m, idx[a].n, idx[b].m, idx[b].n
                );
                checks.push(Check::compared(
                    "orthogonality",
                    case,
                    ip / scale,
                    Complex64::new(0.0, 0.0),
                    ip.norm() <= GRAM_TOL * scale,
                ));
            }
        }
    }

    let annulus = AnnulusRule::new(1.0, 1e3, 16, 32)?;
    let alpha = 0.0;
    let one = Complex64::new(1.0, 0.0);
    let mut pairs = Vec::new();
    for k in 0..=3u32 {
        let items: Vec<MonomialIndex> = (0..=k)
            .flat_map(|j| (0..=2).map(move |s| MonomialIndex::new(j, k, s)))
            .collect();
        for a in 0..items.len() {
            for b in a + 1..items.len() {
                if items[a].j != items[b].j {
                    pairs.push((items[a], items[b]));
                }
            }
        }
    }
    let image_checks: Vec<Check> = pairs
        .par_iter()
        .map(|&(e1, e2)| {
            let case = format!(
                "image;k={};j={};s={};j2={};s2={};a={};b={}",
                e1.k, e1.j, e1.l, e2.j, e2.l, weight.a, weight.b
            );
            let closed = exterior_inner_product_images(e1, e2, alpha, weight)?;
            let p1 = e1.k - e1.j + 1;
            let p2 = e2.k - e2.j + 1;
            let both_finite =
                exterior_norm_sq_power(p1, weight)?.is_finite() && exterior_norm_sq_power(p2, weight)?.is_finite();
            if !both_finite {
                return Ok(Check::divergent("orthogonality", case));
            }
            let t1 = transform_polyanalytic_closed(&PolyanalyticFn::from_terms([(one, e1)]), alpha)?;
            let t2 = transform_polyanalytic_closed(&PolyanalyticFn::from_terms([(one, e2)]), alpha)?;
            let value = annulus_integral(
                |z| t1.eval(z) * t2.eval(z).conj() * weight.eval(z.norm_sqr()),
                &annulus,
            );
            let reference = Complex64::new(closed.value().unwrap_or(f64::NAN), 0.0);
            let pass = value.norm() <= IMAGE_ORTHO_TOL && reference.norm() <= IMAGE_ORTHO_TOL;
            Ok(Check::compared("orthogonality", case, value, reference, pass))
        })
        .collect::<Result<_>>()?;
    checks.extend(image_checks);
    Ok(checks)
}

/// `‖C_α f‖²_B ≤ (2/π) V W ‖f‖²_γ` for seeded random `f`.
pub fn suite_bound(
    params: WeightParams,
    weight: ExteriorWeight,
    trials: usize,
    seed: u64,
) -> Result<Vec<Check>> {
    let constant = match bound_constant(params, weight)? {
        Finiteness::Finite(c) => c,
        Finiteness::Divergent(at) => {
            return Ok(vec![Check::divergent(
                "bound",
                format!(
                    "constant;gamma={};alpha={};a={};b={};at={at}",
                    params.gamma, params.alpha, weight.a, weight.b
                ),
            )])
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::with_capacity(trials);
    for trial in 0..trials {
        let f = random_polyanalytic(&mut rng, 4, 6);
        let case = format!("trial={trial};seed={seed};terms={}", f.len());
        let tail: LaurentTail = transform_polyanalytic_closed(&f, params.alpha)?;
        match laurent_norm_sq(&tail, weight)? {
            Finiteness::Divergent(at) => checks.push(Check::divergent("bound", format!("{case};at={at}"))),
            Finiteness::Finite(lhs) => {
                let rhs = constant * inner_product_fns(&f, &f, params.gamma)?.re;
                checks.push(Check::real("bound", case, lhs, rhs, lhs <= rhs));
            }
        }
    }
    Ok(checks)
}

/// Runs `suite` with the sweep settings of `a`; notes are informational lines.
pub fn run_suite(a: &VerifyArgs) -> Result<(Vec<Check>, Vec<String>)> {
    let weight = ExteriorWeight::new(a.a, a.b);
    let params = WeightParams::new(a.gamma, a.alpha)?;
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    let all = a.suite == Suite::All;
    if all || a.suite == Suite::Lemma {
        checks.extend(suite_lemma(a.nodes, a.angular)?);
    }
    if all || a.suite == Suite::Propnorm {
        let (c, n) = suite_propnorm(weight, a.nodes)?;
        checks.extend(c);
        notes.extend(n);
    }
    if all || a.suite == Suite::Propaction {
        checks.extend(suite_propaction(a.max_mn, a.nodes, a.angular, a.tol)?);
    }
    if all || a.suite == Suite::Orthogonality {
        checks.extend(suite_orthogonality(weight)?);
    }
    if all || a.suite == Suite::Bound {
        checks.extend(suite_bound(params, weight, a.trials, a.seed)?);
    }
    Ok((checks, notes))
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let (checks, notes) = run_suite(a)?;
    let mut t = Table::new(
        "verify",
        &[
            "suite", "case", "value_re", "value_im", "reference_re", "reference_im", "abs_err", "rel_err",
            "verdict",
        ],
    );
    t.rows = checks.iter().map(Check::cells).collect();
    t.write(a.format.unwrap_or(Format::Csv), out)?;
    for n in &notes {
        writeln!(err, "{n}")?;
    }
    let summary = Summary::of(&checks);
    writeln!(err, "summary: {summary}")?;
    Ok(i32::from(summary.failed > 0))
}

fn cmd_range(a: &RangeArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::result::Result<i32, Failure> {
    warn_near_quantized(a.gamma, a.alpha, err)?;
    // validates the boundedness precondition before any quadrature work
    range_profile(a.gamma, a.alpha, 0)?;
    let rule = QuadratureRule::new(a.nodes, a.alpha, a.angular)?;
    let rows: Vec<(u32, crate::range::RangeProfile, usize, usize)> = (0..=a.n_max)
        .into_par_iter()
        .map(|n| {
            let profile = range_profile(a.gamma, a.alpha, n)?;
            let oracle = numeric_rank_oracle(a.gamma, a.alpha, n, &rule, &default_sample_points(n), a.tol)?;
            Ok((n, profile, printed_dimension(a.gamma, a.alpha, n), oracle))
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(
        "range",
        &[
            "gamma", "alpha", "n", "quantized", "derived_dimension", "printed_dimension", "oracle_dimension",
            "kernel_ms", "range_exponents", "discrepancy",
        ],
    );
    let join = |it: &mut dyn Iterator<Item = u32>| it.map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
    let mut mismatched = false;
    for (n, profile, printed, oracle) in &rows {
        let mut flags = Vec::new();
        if profile.dimension != *oracle {
            flags.push("derived");
            mismatched = true;
        }
        if printed != oracle {
            flags.push("printed");
        }
        t.rows.push(vec![
            Cell::Float(a.gamma),
            Cell::Float(a.alpha),
            Cell::Int((*n).into()),
            Cell::Text(profile.quantized.to_string()),
            Cell::Int(profile.dimension as i64),
            Cell::Int(*printed as i64),
            Cell::Int(*oracle as i64),
            Cell::Text(join(&mut profile.kernel_ms.iter().copied())),
            Cell::Text(join(&mut profile.range_exponents.iter().copied())),
            Cell::Text(flags.join("+")),
        ]);
    }
    t.write(a.format.unwrap_or(Format::Csv), out)?;
    Ok(i32::from(mismatched))
}

fn finiteness_json(f: Finiteness) -> (Value, Value) {
    match f {
        Finiteness::Finite(v) => (json!(v), Value::Null),
        Finiteness::Divergent(at) => (json!("divergent"), json!(at.to_string())),
    }
}

/// JSON object reported by the `bound` command.
pub fn bound_report(gamma: f64, alpha: f64, a: f64, b: f64) -> Result<Value> {
    let params = WeightParams::new(gamma, alpha)?;
    let weight = ExteriorWeight::new(a, b);
    let v = v_functional(params);
    let w = w_functional(weight, crate::cauchy::W_TOL)?;
    let upper = w_upper_bound(weight)?;
    let k = bound_constant(params, weight)?;
    let (v_val, v_at) = finiteness_json(v);
    let (w_val, w_at) = finiteness_json(w);
    let (u_val, _) = finiteness_json(upper);
    let (k_val, _) = finiteness_json(k);
    let stated = weight.stated_condition();
    let note = format!(
        "W is finite iff b > 1 and a + b < 0 (here {}); the condition -a < b < -1 is {} and never yields a finite W",
        w.is_finite(),
        stated
    );
    Ok(json!({
        "gamma": gamma,
        "alpha": alpha,
        "a": a,
        "b": b,
        "V": v_val,
        "V_finite": v.is_finite(),
        "V_divergent_at": v_at,
        "W": w_val,
        "W_finite": w.is_finite(),
        "W_divergent_at": w_at,
        "W_upper_bound": u_val,
        "bound_constant": k_val,
        "bounded_transform": params.is_bounded(),
        "stated_condition": stated,
        "condition_note": note,
    }))
}

fn cmd_bound(a: &BoundArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::result::Result<i32, Failure> {
    warn_near_quantized(a.gamma, a.alpha, err)?;
    let report = bound_report(a.gamma, a.alpha, a.a, a.b)?;
    match a.format.unwrap_or(Format::Json) {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &report)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut t = Table::new("bound", &["key", "value"]);
            if let Value::Object(map) = &report {
                // preserve_order is off, so keys come out sorted
                for (key, v) in map {
                    let cell = match v {
                        Value::Number(x) => Cell::Float(x.as_f64().unwrap_or(f64::NAN)),
                        Value::Null => Cell::Empty,
                        Value::String(s) => Cell::Text(s.clone()),
                        other => Cell::Text(other.to_string()),
                    };
                    t.rows.push(vec![Cell::Text(key.clone()), cell]);
                }
            }
            t.write(Format::Csv, out)?;
        }
    }
    Ok(0)
}
