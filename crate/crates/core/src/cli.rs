//! Command-line front end.
//!
//! [`run`] takes the argument list and returns everything the process should
//! emit, so the binary is a thin wrapper and tests can drive commands in
//! process.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::coeff::{CoefficientEngine, Method};
use crate::diagram::{
    crossing_numbers, enumerate_sequences, is_convex, BlochSequence, DEFAULT_ENUMERATION_CAP,
};
use crate::equivalence::{term_count_report, TermCountRow};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::render::{render, RenderFormat, RenderSpec};
use crate::report::{
    complex_vector, input_hash, sig17, sig17_opt, to_json, tool_info, SeriesJson, Sig17, ToolInfo,
};
use crate::series::{
    bloch_series, diagrammatic_series, energy_deviation, partial_norms, textbook_series,
    vector_deviation, CorrectionSeries, DiagrammaticOptions, Route,
};
use crate::spectral::{HamiltonianSpec, LoadOptions, DEFAULT_GAP_TOL};
use crate::verify::{log_spaced, verify, VerificationReport};

pub const CAP_ENV: &str = "BLOCH_RSPT_CAP";

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "bloch-rspt",
    version,
    about = "Rayleigh-Schroedinger perturbation theory via Bloch diagrams"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every Bloch sequence of order n with its coefficients.
    Enumerate(EnumerateArgs),
    /// Coefficients c and e of a single sequence.
    Coeff(CoeffArgs),
    /// Sequence, convex and equivalence-class counts per order.
    Count(CountArgs),
    /// Energy and eigenvector corrections of a Hamiltonian file.
    Series(SeriesArgs),
    /// Residual scaling, normalisation and route agreement checks.
    Verify(VerifyArgs),
    /// Draw staircase diagrams.
    Render(RenderArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ListFormat {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoeffMethod {
    Closed,
    Recurrence,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SingleMethod {
    Closed,
    Recurrence,
}

impl From<SingleMethod> for Method {
    fn from(m: SingleMethod) -> Self {
        match m {
            SingleMethod::Closed => Method::Closed,
            SingleMethod::Recurrence => Method::Recurrence,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Diagrammatic,
    Textbook,
    Bloch,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RenderFormatArg {
    Ascii,
    Svg,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    pub n: usize,
    #[arg(long)]
    pub convex_only: bool,
    #[arg(long, value_enum, default_value = "table")]
    pub format: ListFormat,
    #[arg(long, value_enum, default_value = "closed")]
    pub method: SingleMethod,
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    /// Comma-separated parts, e.g. 2,0,0,2.
    pub sequence: String,
    #[arg(long, value_enum, default_value = "both")]
    pub method: CoeffMethod,
    #[arg(long, value_enum, default_value = "text")]
    pub format: TextFormat,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long, default_value_t = 4)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value = "table")]
    pub format: ListFormat,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    /// Hamiltonian JSON file.
    pub file: PathBuf,
    #[arg(long)]
    pub order: usize,
    #[arg(long, value_enum, default_value = "diagrammatic")]
    pub route: RouteArg,
    /// Comma-separated eps values at which to sum the truncated series.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
    /// Evaluate one representative per equivalence class.
    #[arg(long)]
    pub group: bool,
    #[arg(long, value_enum, default_value = "closed")]
    pub method: SingleMethod,
    #[arg(long, default_value_t = DEFAULT_GAP_TOL)]
    pub gap_tol: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub order: usize,
    /// Defaults to 9 log-spaced values from 1e-4 to 1e-2.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
    /// Bound on route disagreement, equation defect and normalisation defect.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_GAP_TOL)]
    pub gap_tol: f64,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// One or more comma-separated sequences.
    #[arg(required = true)]
    pub sequences: Vec<String>,
    #[arg(long, value_enum, default_value = "ascii")]
    pub format: RenderFormatArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub annotations: bool,
}

/// What the process writes and how it exits.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Execution {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Execution {
    fn ok(stdout: String) -> Self {
        Execution {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    tool: ToolInfo,
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_RUNTIME,
        Error::Inconsistent { .. } => EXIT_INCONSISTENT,
        _ => EXIT_INVALID,
    }
}

pub fn error_json(kind: &str, message: String) -> String {
    to_json(&ErrorJson {
        tool: tool_info(),
        error: ErrorBody { kind, message },
    })
}

pub fn run<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Execution::ok(e.to_string()),
                _ => Execution {
                    stdout: String::new(),
                    stderr: error_json("Usage", e.to_string()),
                    code: EXIT_INVALID,
                },
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(exec) => exec,
        Err(err) => Execution {
            stdout: String::new(),
            stderr: error_json(err.kind(), err.to_string()),
            code: exit_code(&err),
        },
    }
}

/// Enumeration cap, from the environment when set.
pub fn enumeration_cap() -> Result<usize> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::Parse(format!(
                "{CAP_ENV} must be a nonnegative integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_ENUMERATION_CAP),
    }
}

fn dispatch(cmd: &Command) -> Result<Execution> {
    match cmd {
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Coeff(a) => cmd_coeff(a),
        Command::Count(a) => cmd_count(a),
        Command::Series(a) => cmd_series(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Render(a) => cmd_render(a),
    }
}

#[derive(Serialize)]
struct EnumerateRow {
    sequence: BlochSequence,
    c: Rational,
    e: Rational,
    convex: bool,
    crossing_numbers: crate::diagram::CrossingNumbers,
}

#[derive(Serialize)]
struct EnumerateJson {
    tool: ToolInfo,
    input_hash: String,
    order: usize,
    convex_only: bool,
    method: Method,
    rows: Vec<EnumerateRow>,
}

pub fn cmd_enumerate(a: &EnumerateArgs) -> Result<Execution> {
    let cap = enumeration_cap()?;
    let engine = CoefficientEngine::new();
    let method = Method::from(a.method);
    let rows: Vec<EnumerateRow> = enumerate_sequences(a.n, cap)?
        .into_iter()
        .filter(|s| !a.convex_only || is_convex(s))
        .map(|s| EnumerateRow {
            c: engine.c(&s, method),
            e: engine.e(&s, method),
            convex: is_convex(&s),
            crossing_numbers: crossing_numbers(&s),
            sequence: s,
        })
        .collect();
    let out = match a.format {
        ListFormat::Json => to_json(&EnumerateJson {
            tool: tool_info(),
            input_hash: input_hash(
                format!("enumerate {} {} {:?}", a.n, a.convex_only, method).as_bytes(),
            ),
            order: a.n,
            convex_only: a.convex_only,
            method,
            rows,
        }),
        ListFormat::Table => {
            let cells: Vec<[String; 5]> = rows
                .iter()
                .map(|r| {
                    [
                        r.sequence.to_string(),
                        r.c.to_string(),
                        r.e.to_string(),
                        r.convex.to_string(),
                        format!("({})", r.crossing_numbers),
                    ]
                })
                .collect();
            table(&["sequence", "c", "e", "convex", "crossing"], &cells)
        }
    };
    Ok(Execution::ok(out))
}

fn table<const K: usize>(header: &[&str; K], rows: &[[String; K]]) -> String {
    let mut widths = header.map(str::len);
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let joined: Vec<String> = cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        out.push_str(joined.join("  ").trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for r in rows {
        line(r.iter().map(String::as_str).collect());
    }
    out
}

#[derive(Serialize)]
struct CoeffJson {
    tool: ToolInfo,
    input_hash: String,
    sequence: BlochSequence,
    c: Rational,
    e: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    recurrence: Option<CoeffPair>,
    crossing_numbers: crate::diagram::CrossingNumbers,
    convex: bool,
    consistent: bool,
}

#[derive(Serialize)]
struct CoeffPair {
    c: Rational,
    e: Rational,
}

pub fn cmd_coeff(a: &CoeffArgs) -> Result<Execution> {
    let s: BlochSequence = a.sequence.parse()?;
    let engine = CoefficientEngine::new();
    let (c, e) = match a.method {
        CoeffMethod::Recurrence => (engine.c_recurrence(&s), engine.e_recurrence(&s)),
        _ => (engine.c(&s, Method::Closed), engine.e(&s, Method::Closed)),
    };
    let recurrence = (a.method == CoeffMethod::Both).then(|| CoeffPair {
        c: engine.c_recurrence(&s),
        e: engine.e_recurrence(&s),
    });
    let consistent = recurrence.as_ref().is_none_or(|r| r.c == c && r.e == e);

    let stdout = match a.format {
        TextFormat::Text => {
            let mut out = format!("c={c}\ne={e}\n");
            if !consistent {
                let r = recurrence
                    .as_ref()
                    .expect("only a two-route run can disagree");
                let _ = write!(out, "recurrence c={}\nrecurrence e={}\n", r.c, r.e);
            }
            out
        }
        TextFormat::Json => to_json(&CoeffJson {
            tool: tool_info(),
            input_hash: input_hash(s.to_string().as_bytes()),
            crossing_numbers: crossing_numbers(&s),
            convex: is_convex(&s),
            sequence: s.clone(),
            c: c.clone(),
            e: e.clone(),
            recurrence,
            consistent,
        }),
    };
    if consistent {
        Ok(Execution::ok(stdout))
    } else {
        let err = Error::Inconsistent {
            sequence: s.to_string(),
            detail: "closed form and recurrence differ".into(),
        };
        Ok(Execution {
            stdout,
            stderr: error_json(err.kind(), err.to_string()),
            code: EXIT_INCONSISTENT,
        })
    }
}

#[derive(Serialize)]
struct CountRowJson {
    order: usize,
    sequences: String,
    convex: String,
    energy_classes: usize,
    energy_terms: usize,
    vector_classes: usize,
    offdiag_vector_terms: usize,
    offdiag_energy_terms: usize,
    vector_lower_bound: String,
    energy_lower_bound: String,
    #[serde(serialize_with = "sig17")]
    asymptotic_ratio: f64,
}

impl From<TermCountRow> for CountRowJson {
    fn from(r: TermCountRow) -> Self {
        CountRowJson {
            order: r.order,
            sequences: r.sequences,
            convex: r.convex,
            energy_classes: r.energy_classes,
            energy_terms: r.energy_terms,
            vector_classes: r.vector_classes,
            offdiag_vector_terms: r.offdiag_vector_terms,
            offdiag_energy_terms: r.offdiag_energy_terms,
            vector_lower_bound: r.vector_lower_bound,
            energy_lower_bound: r.energy_lower_bound,
            asymptotic_ratio: r.asymptotic_ratio,
        }
    }
}

#[derive(Serialize)]
struct CountJson {
    tool: ToolInfo,
    input_hash: String,
    n_max: usize,
    rows: Vec<CountRowJson>,
}

pub fn cmd_count(a: &CountArgs) -> Result<Execution> {
    let cap = enumeration_cap()?;
    if a.n_max == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let engine = CoefficientEngine::new();
    let rows = term_count_report(a.n_max, &engine, cap)?;
    let out = match a.format {
        ListFormat::Json => to_json(&CountJson {
            tool: tool_info(),
            input_hash: input_hash(format!("count {}", a.n_max).as_bytes()),
            n_max: a.n_max,
            rows: rows.into_iter().map(CountRowJson::from).collect(),
        }),
        ListFormat::Table => {
            let cells: Vec<[String; 9]> = rows
                .iter()
                .map(|r| {
                    [
                        r.order.to_string(),
                        r.sequences.clone(),
                        r.convex.clone(),
                        r.vector_classes.to_string(),
                        r.energy_terms.to_string(),
                        r.offdiag_vector_terms.to_string(),
                        r.offdiag_energy_terms.to_string(),
                        format!("{}/{}", r.vector_lower_bound, r.energy_lower_bound),
                        format!("{:.6}", r.asymptotic_ratio),
                    ]
                })
                .collect();
            table(
                &[
                    "n",
                    "sequences",
                    "convex",
                    "vector",
                    "energy",
                    "offdiag_vector",
                    "offdiag_energy",
                    "bounds",
                    "asym",
                ],
                &cells,
            )
        }
    };
    Ok(Execution::ok(out))
}

fn load_spec(file: &PathBuf, gap_tol: f64) -> Result<(HamiltonianSpec, String)> {
    let bytes = std::fs::read(file)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Error::Parse(format!("{} is not UTF-8", file.display())))?;
    let opts = LoadOptions {
        gap_tol,
        ..LoadOptions::default()
    };
    Ok((
        HamiltonianSpec::from_json_with(&text, opts)?,
        input_hash(&bytes),
    ))
}

fn routes(arg: RouteArg) -> Vec<Route> {
    match arg {
        RouteArg::Diagrammatic => vec![Route::Diagrammatic],
        RouteArg::Textbook => vec![Route::Textbook],
        RouteArg::Bloch => vec![Route::BlochUnnormalised],
        RouteArg::All => vec![
            Route::Diagrammatic,
            Route::Textbook,
            Route::BlochUnnormalised,
        ],
    }
}

fn compute(
    spec: &HamiltonianSpec,
    route: Route,
    order: usize,
    opts: DiagrammaticOptions,
    engine: &CoefficientEngine,
) -> Result<CorrectionSeries> {
    match route {
        Route::Diagrammatic => diagrammatic_series(spec, order, opts, engine),
        Route::Textbook => textbook_series(spec, order),
        Route::BlochUnnormalised => bloch_series(spec, order, opts.cap),
    }
}

#[derive(Serialize)]
struct HamiltonianJson {
    dim: usize,
    target: usize,
    #[serde(serialize_with = "sig17")]
    lambda0: f64,
    #[serde(serialize_with = "sig17")]
    min_gap: f64,
    warnings: Vec<String>,
}

impl From<&HamiltonianSpec> for HamiltonianJson {
    fn from(s: &HamiltonianSpec) -> Self {
        HamiltonianJson {
            dim: s.dim(),
            target: s.target(),
            lambda0: s.lambda0(),
            min_gap: s.min_gap(),
            warnings: s.warnings().to_vec(),
        }
    }
}

#[derive(Serialize)]
struct Evaluation {
    route: String,
    #[serde(serialize_with = "sig17")]
    eps: f64,
    energy: Sig17,
    vector: Vec<[Sig17; 2]>,
}

#[derive(Serialize)]
struct DeltaJson {
    a: String,
    b: String,
    #[serde(serialize_with = "sig17")]
    energy: f64,
    #[serde(serialize_with = "sig17_opt")]
    vector: Option<f64>,
}

#[derive(Serialize)]
struct SeriesReport {
    tool: ToolInfo,
    input_hash: String,
    hamiltonian: HamiltonianJson,
    order: usize,
    series: Vec<SeriesJson>,
    evaluations: Vec<Evaluation>,
    deltas: Vec<DeltaJson>,
}

fn deltas(series: &[CorrectionSeries]) -> Vec<DeltaJson> {
    let mut out = Vec::new();
    for (i, a) in series.iter().enumerate() {
        for b in &series[i + 1..] {
            let normalised = a.route.is_normalised() && b.route.is_normalised();
            out.push(DeltaJson {
                a: a.route.to_string(),
                b: b.route.to_string(),
                energy: energy_deviation(a, b),
                vector: normalised.then(|| vector_deviation(a, b)),
            });
        }
    }
    out
}

pub fn cmd_series(a: &SeriesArgs) -> Result<Execution> {
    let cap = enumeration_cap()?;
    let (spec, hash) = load_spec(&a.file, a.gap_tol)?;
    let engine = CoefficientEngine::new();
    let opts = DiagrammaticOptions {
        grouping: a.group,
        method: a.method.into(),
        cap,
    };
    let series = routes(a.route)
        .into_iter()
        .map(|r| compute(&spec, r, a.order, opts, &engine))
        .collect::<Result<Vec<_>>>()?;
    let evaluations = series
        .iter()
        .flat_map(|s| {
            a.eps.iter().map(move |&eps| Evaluation {
                route: s.route.to_string(),
                eps,
                energy: Sig17(s.energy_at(eps)),
                vector: complex_vector(&s.vector_at(eps)),
            })
        })
        .collect();
    let report = SeriesReport {
        tool: tool_info(),
        input_hash: hash,
        hamiltonian: HamiltonianJson::from(&spec),
        order: a.order,
        deltas: deltas(&series),
        series: series.iter().map(SeriesJson::from).collect(),
        evaluations,
    };
    Ok(Execution::ok(to_json(&report)))
}

#[derive(Serialize)]
struct Check {
    name: String,
    #[serde(serialize_with = "sig17")]
    value: f64,
    #[serde(serialize_with = "sig17")]
    threshold: f64,
    pass: bool,
    /// Advisory checks are reported but do not affect the exit code.
    advisory: bool,
}

#[derive(Serialize)]
struct VerifyJson {
    tool: ToolInfo,
    input_hash: String,
    hamiltonian: HamiltonianJson,
    order: usize,
    #[serde(serialize_with = "sig17")]
    tol: f64,
    verification: VerificationReport,
    checks: Vec<Check>,
    pass: bool,
}

/// Slopes may sit this far below `N + 1` before the advisory check fails.
pub const SLOPE_TOL: f64 = 0.15;

pub fn cmd_verify(a: &VerifyArgs) -> Result<Execution> {
    let cap = enumeration_cap()?;
    let (spec, hash) = load_spec(&a.file, a.gap_tol)?;
    let engine = CoefficientEngine::new();
    let eps = if a.eps.is_empty() {
        log_spaced(1e-4, 1e-2, 9)
    } else {
        a.eps.clone()
    };
    let opts = DiagrammaticOptions {
        cap,
        ..DiagrammaticOptions::default()
    };
    let series = routes(RouteArg::All)
        .into_iter()
        .map(|r| compute(&spec, r, a.order, opts, &engine))
        .collect::<Result<Vec<_>>>()?;
    let report = verify(&spec, &series, &eps);

    let mut checks = Vec::new();
    let mut check = |name: String, value: f64, threshold: f64, advisory: bool| {
        checks.push(Check {
            name,
            value,
            threshold,
            pass: value <= threshold,
            advisory,
        })
    };
    for d in &report.deltas {
        check(format!("energy {} vs {}", d.a, d.b), d.energy, a.tol, false);
        if let Some(v) = d.vector {
            check(format!("vector {} vs {}", d.a, d.b), v, a.tol, false);
        }
    }
    for (s, r) in series.iter().zip(&report.routes) {
        let scale = s.vectors.iter().map(|v| v.norm()).fold(1.0, f64::max);
        check(
            format!("equation defect {}", s.route),
            r.equation_defect / scale,
            a.tol,
            false,
        );
        let norm_defect = if s.route.is_normalised() {
            partial_norms(s)
                .iter()
                .map(|g| (g - 1.0).norm())
                .fold(0.0, f64::max)
        } else {
            let t = spec.target();
            s.vectors[1..]
                .iter()
                .map(|v| v[t].norm())
                .fold(0.0, f64::max)
        };
        let label = if s.route.is_normalised() {
            "normalisation"
        } else {
            "target overlap"
        };
        check(format!("{label} {}", s.route), norm_defect, a.tol, false);
        // Shortfall of the fitted slope below N + 1; a missing fit counts as a failure.
        let shortfall = r
            .residual_slope
            .map_or(f64::INFINITY, |slope| (a.order as f64 + 1.0) - slope);
        check(
            format!("residual slope shortfall {}", s.route),
            shortfall,
            SLOPE_TOL,
            true,
        );
    }
    let pass = checks.iter().all(|c| c.pass || c.advisory);
    let out = to_json(&VerifyJson {
        tool: tool_info(),
        input_hash: hash,
        hamiltonian: HamiltonianJson::from(&spec),
        order: a.order,
        tol: a.tol,
        verification: report,
        checks,
        pass,
    });
    if pass {
        Ok(Execution::ok(out))
    } else {
        Ok(Execution {
            stdout: out,
            stderr: error_json(
                "VerificationFailed",
                "one or more verification checks failed".into(),
            ),
            code: EXIT_INCONSISTENT,
        })
    }
}

pub fn cmd_render(a: &RenderArgs) -> Result<Execution> {
    let sequences = a
        .sequences
        .iter()
        .map(|s| s.parse())
        .collect::<Result<Vec<BlochSequence>>>()?;
    let spec = RenderSpec {
        sequences,
        format: match a.format {
            RenderFormatArg::Ascii => RenderFormat::Ascii,
            RenderFormatArg::Svg => RenderFormat::Svg,
        },
        annotations: a.annotations,
    };
    let text = render(&spec, &CoefficientEngine::new());
    match &a.out {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(Execution::ok(String::new()))
        }
        None => Ok(Execution::ok(text)),
    }
}
