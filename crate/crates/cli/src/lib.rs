//! `omega` command-line front end.
//!
//! Every output begins with `#` comment lines (tool version, seed, config
//! hash), followed by a CSV header and rows, or a single JSON document.
//! Output depends only on the command and its parameters, never on the
//! thread count.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use omega_core::bounds::{max_ratio, ratio_scan, reference_bound, AlphaSource, BoundKind};
use omega_core::circle::{
    default_arc_nodes, fit_coeffs, fit_standard, log_grid, major_arc_integral, minor_arc_integral, singular_series,
    CoeffTable, FitReport, STANDARD_FIT_LIMIT,
};
use omega_core::convolve::{r_omega_direct_table, r_omega_transform, ConvolutionMethod};
use omega_core::diophantine::ArcSystem;
use omega_core::verify::run_suite;
use omega_core::{AdditiveFunction, Error, FactorTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

/// Environment variable that sets the default thread count.
pub const THREADS_ENV: &str = "OMEGA_THREADS";

#[derive(Parser, Debug, Clone)]
#[command(name = "omega", version, about = "Exponential sums of additive functions and the ternary r_Omega problem")]
pub struct RunConfig {
    /// Worker threads; output is identical for every value.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Build the factor table and report prime statistics.
    Sieve(SieveArgs),
    /// Measure |S_f(alpha; X)| against a bound over a set of alphas.
    Scan(ScanArgs),
    /// Evaluate a bound on an (X, q) grid.
    Bounds(BoundsArgs),
    /// Exact r_Omega(N) table.
    Rq(RqArgs),
    /// Major-arc integrals, optionally with the minor-arc complement.
    Arcs(ArcsArgs),
    /// Truncated singular series with tail estimates.
    Sseries(SseriesArgs),
    /// Fit the congruence-sum coefficient table (JSON).
    Fit(FitArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Sieve(_) => "sieve",
            Command::Scan(_) => "scan",
            Command::Bounds(_) => "bounds",
            Command::Rq(_) => "rq",
            Command::Arcs(_) => "arcs",
            Command::Sseries(_) => "sseries",
            Command::Fit(_) => "fit",
            Command::Verify(_) => "verify",
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Command::Scan(a) => a.seed,
            Command::Verify(_) => Some(omega_core::verify::SUITE_SEED),
            _ => None,
        }
    }
}

/// `omega` (ω), `Omega` (Ω), or `omega_k:K` (Ω_K).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionChoice {
    SmallOmega,
    BigOmega,
    OmegaK(u32),
}

impl FunctionChoice {
    fn build(self) -> AdditiveFunction {
        match self {
            FunctionChoice::SmallOmega => AdditiveFunction::small_omega(),
            FunctionChoice::BigOmega => AdditiveFunction::big_omega(),
            FunctionChoice::OmegaK(k) => AdditiveFunction::omega_k(k),
        }
    }
}

fn parse_function(s: &str) -> Result<FunctionChoice, String> {
    match s {
        "omega" => Ok(FunctionChoice::SmallOmega),
        "Omega" => Ok(FunctionChoice::BigOmega),
        _ => match s.strip_prefix("omega_k:") {
            Some(k) => k.parse().map(FunctionChoice::OmegaK).map_err(|e| format!("bad k in {s}: {e}")),
            None => Err(format!("unknown function {s}; use omega, Omega or omega_k:K")),
        },
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundChoice {
    Main,
    Upsilon,
    Vinogradov,
    Drzz,
    Semiprime,
    Madhudas,
}

#[derive(Args, Debug, Clone)]
pub struct BoundParams {
    #[arg(long, value_enum, default_value_t = BoundChoice::Main)]
    pub bound: BoundChoice,
    #[arg(long, default_value_t = 0.25)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub upsilon: f64,
    /// R for the madhudas bound.
    #[arg(long, default_value_t = 2.0)]
    pub r: f64,
}

impl BoundParams {
    fn kind(&self) -> BoundKind {
        match self.bound {
            BoundChoice::Main => BoundKind::MainF0 { delta: self.delta },
            BoundChoice::Upsilon => BoundKind::Upsilon { delta: self.delta, upsilon: self.upsilon },
            BoundChoice::Vinogradov => BoundKind::Vinogradov,
            BoundChoice::Drzz => BoundKind::Drzz,
            BoundChoice::Semiprime => BoundKind::Semiprime,
            BoundChoice::Madhudas => BoundKind::Madhudas { r: self.r },
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SieveArgs {
    #[arg(long)]
    pub limit: u64,
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    #[arg(long = "f", value_parser = parse_function, default_value = "Omega")]
    pub function: FunctionChoice,
    #[command(flatten)]
    pub bound: BoundParams,
    /// Summation limits X (comma separated).
    #[arg(long = "x", value_delimiter = ',', required = true)]
    pub xs: Vec<u64>,
    /// Include all Farey fractions of this order.
    #[arg(long)]
    pub farey: Option<u64>,
    /// Include this many uniform random alphas (needs --seed).
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Include the convergent-stress set of this order.
    #[arg(long)]
    pub stress: Option<u64>,
    /// Explicit alphas (comma separated).
    #[arg(long = "alpha", value_delimiter = ',')]
    pub alphas: Vec<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub bound: BoundParams,
    /// F_f(X) is measured from this function.
    #[arg(long = "f", value_parser = parse_function, default_value = "Omega")]
    pub function: FunctionChoice,
    #[arg(long = "x", value_delimiter = ',', required = true)]
    pub xs: Vec<u64>,
    #[arg(long = "q", value_delimiter = ',', required = true)]
    pub qs: Vec<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct RqArgs {
    #[arg(long)]
    pub nmax: u64,
    /// Weight function; integer valued.
    #[arg(long = "f", value_parser = parse_function, default_value = "Omega")]
    pub function: FunctionChoice,
    #[arg(long, default_value_t = 1)]
    pub nmin: u64,
    #[arg(long, value_enum, default_value_t = MethodChoice::Transform)]
    pub method: MethodChoice,
    /// Recompute by the other route and fail on any mismatch.
    #[arg(long)]
    pub check_direct: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Direct,
    Transform,
}

#[derive(Args, Debug, Clone)]
pub struct CoeffSource {
    /// Coefficient table (JSON); fitted on the standard grid when absent.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
}

#[derive(Args, Debug, Clone)]
pub struct ArcsArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[command(flatten)]
    pub coeffs: CoeffSource,
    /// Quadrature nodes per major arc (default: resolves the integrand).
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Also integrate the minor arcs and check the decomposition.
    #[arg(long)]
    pub minor: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SseriesArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 200)]
    pub q: u64,
    #[command(flatten)]
    pub coeffs: CoeffSource,
}

#[derive(Args, Debug, Clone)]
pub struct FitArgs {
    /// Fit moduli 1..=MODULI.
    #[arg(long, default_value_t = 200)]
    pub moduli: u64,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 1000)]
    pub xmin: u64,
    #[arg(long, default_value_t = STANDARD_FIT_LIMIT)]
    pub xmax: u64,
    #[arg(long, default_value_t = 8)]
    pub per_decade: u32,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Small exhaustive ranges only.
    #[arg(long)]
    pub quick: bool,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn config(msg: impl Into<String>) -> Self {
        Self { code: EXIT_CONFIG, message: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Precision(_) => EXIT_PRECISION,
            _ => EXIT_CONFIG,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::config(e.to_string())
    }
}

enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => i64::try_from(*v).map(Value::from).unwrap_or_else(|_| Value::from(v.to_string())),
            Cell::Float(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

/// Tabular output plus `#` notes.
struct Table {
    notes: Vec<String>,
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self { notes: Vec::new(), header: header.to_vec(), rows: Vec::new() }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

/// A finished command: the document plus its exit code.
struct Outcome {
    body: Body,
    code: i32,
}

enum Body {
    Table(Table),
    Json(Value),
}

fn config_hash(cfg: &RunConfig) -> String {
    let canonical = format!("{:?}|{:?}", cfg.command, cfg.format);
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn render(cfg: &RunConfig, outcome: &Outcome) -> String {
    let mut out = String::new();
    let seed = cfg.command.seed().map_or_else(|| "none".to_string(), |s| s.to_string());
    let meta = [
        ("omega-cli", env!("CARGO_PKG_VERSION").to_string()),
        ("command", cfg.command.name().to_string()),
        ("seed", seed),
        ("config-sha256", config_hash(cfg)),
    ];
    for (k, v) in &meta {
        let _ = writeln!(out, "# {k}: {v}");
    }
    match &outcome.body {
        Body::Table(t) => match cfg.format {
            Format::Csv => {
                for n in &t.notes {
                    let _ = writeln!(out, "# {n}");
                }
                let _ = writeln!(out, "{}", t.header.join(","));
                for row in &t.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    let _ = writeln!(out, "{}", cells.join(","));
                }
            }
            Format::Json => {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| {
                        let obj: serde_json::Map<String, Value> =
                            t.header.iter().zip(r).map(|(h, c)| (h.to_string(), c.json())).collect();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = json!({ "notes": t.notes, "rows": rows });
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap());
            }
        },
        Body::Json(v) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).unwrap());
        }
    }
    out
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_CONFIG
            } else {
                EXIT_OK
            }
        }
    }
}

/// Runs one command and writes its output; returns the exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    match run_inner(cfg) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("omega: {}", f.message);
            f.code
        }
    }
}

fn run_inner(cfg: &RunConfig) -> Result<i32, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        if n == 0 {
            return Err(Failure::config("--threads must be positive"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Failure::config(e.to_string()))?;
    let outcome = pool.install(|| dispatch(&cfg.command))?;
    let text = render(cfg, &outcome);
    match &cfg.output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(outcome.code)
}

fn dispatch(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Sieve(a) => sieve(a),
        Command::Scan(a) => scan(a),
        Command::Bounds(a) => bounds(a),
        Command::Rq(a) => rq(a),
        Command::Arcs(a) => arcs(a),
        Command::Sseries(a) => sseries(a),
        Command::Fit(a) => fit(a),
        Command::Verify(a) => verify(a),
    }
}

fn ok(t: Table) -> Result<Outcome, Failure> {
    Ok(Outcome { body: Body::Table(t), code: EXIT_OK })
}

fn sieve(a: &SieveArgs) -> Result<Outcome, Failure> {
    let t = FactorTable::new(a.limit)?;
    let largest = t.primes().last().map_or(0, |&p| p as i128);
    let mut sum_omega: i128 = 0;
    if a.limit >= 2 {
        let v = AdditiveFunction::big_omega().value_table(&t, a.limit)?;
        sum_omega = v.as_slice().iter().map(|&x| x as i128).sum();
    }
    let mut tab = Table::new(&["limit", "prime_count", "largest_prime", "sum_Omega"]);
    tab.rows.push(vec![
        Cell::Int(a.limit as i128),
        Cell::Int(t.primes().len() as i128),
        Cell::Int(largest),
        Cell::Int(sum_omega),
    ]);
    ok(tab)
}

fn scan(a: &ScanArgs) -> Result<Outcome, Failure> {
    let mut parts = Vec::new();
    if let Some(order) = a.farey {
        parts.push(AlphaSource::Farey(order));
    }
    if let Some(count) = a.random {
        let seed = a.seed.ok_or_else(|| Failure::config("--random needs --seed"))?;
        parts.push(AlphaSource::Random { count, seed });
    }
    if let Some(order) = a.stress {
        parts.push(AlphaSource::ConvergentStress(order));
    }
    if !a.alphas.is_empty() {
        parts.push(AlphaSource::Explicit(a.alphas.clone()));
    }
    if parts.is_empty() {
        return Err(Failure::config("no alphas: give --farey, --random, --stress or --alpha"));
    }
    let x_max = *a.xs.iter().max().unwrap();
    let t = FactorTable::new(x_max)?;
    let f = a.function.build();
    let values = f.value_table(&t, x_max)?;
    let recs = ratio_scan(values.as_slice(), &f, &t, &a.xs, &AlphaSource::Union(parts), a.bound.kind())?;
    let mut tab = Table::new(&["alpha", "a", "q", "X", "abs_S", "bound", "ratio"]);
    tab.note(format!("function: {}", f.name()));
    tab.note(format!("max_ratio: {:.16e}", max_ratio(&recs)));
    for r in recs {
        tab.rows.push(vec![
            Cell::Float(r.alpha),
            Cell::Int(r.a as i128),
            Cell::Int(r.q as i128),
            Cell::Int(r.x as i128),
            Cell::Float(r.abs_s),
            Cell::Float(r.bound),
            Cell::Float(r.ratio),
        ]);
    }
    ok(tab)
}

fn bounds(a: &BoundsArgs) -> Result<Outcome, Failure> {
    let x_max = *a.xs.iter().max().unwrap();
    let t = FactorTable::new(x_max)?;
    let f = a.function.build();
    let mut xs = a.xs.clone();
    xs.sort_unstable();
    xs.dedup();
    let mut qs = a.qs.clone();
    qs.sort_unstable();
    qs.dedup();
    let mut tab = Table::new(&["X", "q", "F_f", "bound"]);
    tab.note(format!("bound: {:?}", a.bound.kind()));
    for &x in &xs {
        let cap = f.cap(&t, x)?;
        for &q in &qs {
            let b = reference_bound(a.bound.kind(), x, q, cap)?;
            tab.rows.push(vec![Cell::Int(x as i128), Cell::Int(q as i128), Cell::Float(cap), Cell::Float(b)]);
        }
    }
    ok(tab)
}

fn rq(a: &RqArgs) -> Result<Outcome, Failure> {
    if a.nmin > a.nmax {
        return Err(Failure::config("--nmin exceeds --nmax"));
    }
    let t = FactorTable::new(a.nmax.max(1))?;
    let v = a.function.build().value_table(&t, a.nmax.max(1))?.to_integers()?;
    let (primary, other) = match a.method {
        MethodChoice::Transform => (ConvolutionMethod::Transform, ConvolutionMethod::Direct),
        MethodChoice::Direct => (ConvolutionMethod::Direct, ConvolutionMethod::Transform),
    };
    let table = |m: ConvolutionMethod| -> Result<Vec<i128>, Failure> {
        Ok(match m {
            ConvolutionMethod::Direct => r_omega_direct_table(&v, a.nmax)?,
            ConvolutionMethod::Transform => r_omega_transform(&v, a.nmax)?,
        })
    };
    let r = table(primary)?;
    let mut code = EXIT_OK;
    let mut tab = Table::new(&["N", "r_omega", "method"]);
    if a.check_direct {
        let check = table(other)?;
        let bad = (a.nmin..=a.nmax).filter(|&n| r[n as usize] != check[n as usize]).count();
        tab.note(format!("check: {} vs {}: {bad} mismatches", primary.as_str(), other.as_str()));
        if bad > 0 {
            code = EXIT_VERIFY;
        }
    }
    for n in a.nmin..=a.nmax {
        tab.rows.push(vec![Cell::Int(n as i128), Cell::Int(r[n as usize]), Cell::Text(primary.as_str().into())]);
    }
    Ok(Outcome { body: Body::Table(tab), code })
}

/// Loads a table from disk or fits moduli `1..=q_max` on the standard grid.
/// Returns the table and a factor table that covers at least `q_max`.
fn coefficients(src: &CoeffSource, q_max: u64) -> Result<(CoeffTable, FactorTable, String), Failure> {
    match &src.coeffs {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            let body: String = text.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
            let table = CoeffTable::from_json(&body)?;
            let t = FactorTable::new(q_max.max(2))?;
            Ok((table, t, format!("coefficients: file {}", path.display())))
        }
        None => {
            let t = FactorTable::new(STANDARD_FIT_LIMIT)?;
            let rep = fit_standard(&t, q_max, src.m)?;
            Ok((rep.table, t, format!("coefficients: fitted, moduli 1..={q_max}, M={}", src.m)))
        }
    }
}

fn arcs(a: &ArcsArgs) -> Result<Outcome, Failure> {
    let sys = ArcSystem::new(a.n, a.b)?;
    let (coeffs, t, source) = coefficients(&a.coeffs, sys.max_denominator())?;
    let tn = FactorTable::new(a.n)?;
    let ints = AdditiveFunction::big_omega().value_table(&tn, a.n)?.to_integers()?;
    let values: Vec<f64> = ints.iter().map(|&v| v as f64).collect();
    let k = a.nodes.unwrap_or_else(|| default_arc_nodes(&sys));
    let rep = major_arc_integral(&t, &values, &sys, a.coeffs.m, &coeffs, k)?;
    let mut tab = Table::new(&["q", "a", "lo", "hi", "re", "im", "model_re", "model_im", "u_residual"]);
    tab.note(source);
    tab.note(format!("N: {}, B: {}, Q: {:.16e}, nodes_per_arc: {}", a.n, a.b, sys.q(), rep.nodes_per_arc));
    tab.note(format!("major_total: {:.16e} {:+.16e}i", rep.total.re, rep.total.im));
    tab.note(format!("model_total: {:.16e} {:+.16e}i", rep.model_total.re, rep.model_total.im));
    let mut code = EXIT_OK;
    if a.minor {
        let minor = minor_arc_integral(&values, &sys)?;
        let exact = r_omega_transform(&ints, a.n)?[a.n as usize];
        let sum = rep.total + minor;
        let err = (sum.re - exact as f64).abs().max(sum.im.abs());
        let tol = 1e-6 * (exact as f64).max(1.0);
        tab.note(format!("minor_total: {:.16e} {:+.16e}i", minor.re, minor.im));
        tab.note(format!("r_omega: {exact}, decomposition_error: {err:.3e}, tolerance: {tol:.3e}"));
        if !(err <= tol) {
            code = EXIT_VERIFY;
        }
    }
    for arc in &rep.arcs {
        tab.rows.push(vec![
            Cell::Int(arc.q as i128),
            Cell::Int(arc.a as i128),
            Cell::Float(arc.lo),
            Cell::Float(arc.hi),
            Cell::Float(arc.value.re),
            Cell::Float(arc.value.im),
            Cell::Float(arc.model.re),
            Cell::Float(arc.model.im),
            Cell::Float(arc.u_residual),
        ]);
    }
    Ok(Outcome { body: Body::Table(tab), code })
}

fn sseries(a: &SseriesArgs) -> Result<Outcome, Failure> {
    let (coeffs, t, source) = coefficients(&a.coeffs, a.q)?;
    let s = singular_series(&t, a.n, a.coeffs.m, a.q, &coeffs)?;
    let mut tab = Table::new(&["q", "term", "partial", "tail_estimate"]);
    tab.note(source);
    tab.note(format!("N: {}, M: {}, Q: {}", a.n, a.coeffs.m, a.q));
    tab.note(format!("partial: {:.16e}", s.partial));
    tab.note(format!("prediction: {:.16e}", s.partial * (a.n as f64).powi(2) / 2.0));
    tab.note(format!("decay_constant_q^1.7: {:.16e}", s.decay_constant(1.7)));
    tab.note(format!("decay_constant_q^1.8: {:.16e}", s.decay_constant(1.8)));
    let mut acc = omega_core::numeric::CompensatedSum::new();
    for (i, &term) in s.terms.iter().enumerate() {
        acc.add(term);
        let q = i as u64 + 1;
        tab.rows.push(vec![
            Cell::Int(q as i128),
            Cell::Float(term),
            Cell::Float(acc.value()),
            Cell::Float(omega_core::circle::tail_estimate(a.n, a.coeffs.m, q)),
        ]);
    }
    ok(tab)
}

fn fit_json(rep: &FitReport, grid: &[u64]) -> Value {
    let mut doc: Value = serde_json::from_str(&rep.table.to_json()).expect("table JSON parses");
    let residuals: Vec<Value> = rep
        .residuals
        .iter()
        .zip(&rep.conditions)
        .map(|(&(g, r), &(_, c))| json!({"g": g, "residual": r, "condition": c}))
        .collect();
    doc["diagnostics"] = json!({ "xgrid": grid, "moduli": residuals });
    doc
}

fn fit(a: &FitArgs) -> Result<Outcome, Failure> {
    if a.moduli == 0 {
        return Err(Failure::config("--moduli must be positive"));
    }
    let t = FactorTable::new(a.xmax.max(a.moduli))?;
    let grid = log_grid(a.xmin.max(1), a.xmax, a.per_decade);
    let moduli: Vec<u64> = (1..=a.moduli).collect();
    let rep = fit_coeffs(&t, &moduli, a.m, &grid)?;
    Ok(Outcome { body: Body::Json(fit_json(&rep, &grid)), code: EXIT_OK })
}

fn verify(a: &VerifyArgs) -> Result<Outcome, Failure> {
    let results = run_suite(a.quick);
    let failed = results.iter().filter(|r| !r.passed).count();
    let mut tab = Table::new(&["check", "passed", "detail"]);
    tab.note(format!("mode: {}", if a.quick { "quick" } else { "full" }));
    tab.note(format!("failed: {failed} of {}", results.len()));
    for r in results {
        tab.rows.push(vec![
            Cell::Text(r.name.into()),
            Cell::Text(r.passed.to_string()),
            Cell::Text(r.detail.replace(',', ";")),
        ]);
    }
    Ok(Outcome { body: Body::Table(tab), code: if failed == 0 { EXIT_OK } else { EXIT_VERIFY } })
}
