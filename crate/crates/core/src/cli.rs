//! Command-line front end: `count`, `factor`, `divpoly` and `zeta`.
//!
//! [`run`] does all the work and returns what the process should print and
//! its exit code, so the binary is a thin wrapper and tests can drive it
//! in-process.

use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::bigmod::{FieldElement, FieldError, PrimeField};
use crate::curve::{extension_counts, Curve, CurveError};
use crate::divpoly::DivisionPolynomials;
use crate::factorizer::{self, FactorError, Factorization, FactorizationResult};
use crate::poly::Poly;
use crate::schoof::{schoof_count, TraceEvent, TraceResidue};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NO_FACTOR: i32 = 3;

/// Largest q accepted by `--method naive`.
pub const NAIVE_BOUND: u64 = 10_000_000;

#[derive(Debug, Parser)]
#[command(name = "schoof", version, about = "Elliptic-curve point counting and quadratic factoring over prime fields")]
pub struct Cli {
    /// Print a single JSON record on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include the per-(l, tau) decisions of the point count.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Include wall-clock time in milliseconds (makes output nondeterministic).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count the points of Y^2 = X^3 + AX + B over F_q.
    Count(CountArgs),
    /// Factor a quadratic h over F_q.
    Factor(FactorArgs),
    /// Print the division polynomial f_m.
    Divpoly(DivpolyArgs),
    /// Print N_1..N_n, the point counts over F_{q^k}.
    Zeta(ZetaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Schoof,
    Naive,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub q: String,
    /// A,B
    #[arg(long)]
    pub curve: String,
    #[arg(long, value_enum, default_value_t = Method::Schoof)]
    pub method: Method,
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    #[arg(long)]
    pub q: String,
    /// Ascending coefficients h0,h1,h2.
    #[arg(long)]
    pub h: String,
    /// Pin the curve: alpha,beta,gamma,delta for A = alpha z + beta, B = gamma z + delta,
    /// or A,B for a curve with constant coefficients.
    #[arg(long)]
    pub curve: Option<String>,
    #[arg(long, default_value_t = factorizer::DEFAULT_BUDGET)]
    pub budget: usize,
}

#[derive(Debug, Args)]
pub struct DivpolyArgs {
    #[arg(long)]
    pub q: String,
    #[arg(long)]
    pub curve: String,
    #[arg(long)]
    pub m: u64,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    #[arg(long)]
    pub q: String,
    #[arg(long)]
    pub curve: String,
    #[arg(long)]
    pub n: usize,
}

/// What the process should emit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// A failure with its exit code and a short machine-readable kind.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn validation(kind: &'static str, message: impl ToString) -> Self {
        Self {
            code: EXIT_VALIDATION,
            kind,
            message: message.to_string(),
        }
    }

    fn internal(message: impl ToString) -> Self {
        Self {
            code: EXIT_INTERNAL,
            kind: "Internal",
            message: message.to_string(),
        }
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        let kind = match e {
            FieldError::NotPrime(_) => "NotPrime",
            FieldError::CharTooSmall(_) => "CharTooSmall",
            FieldError::ModulusTooLarge(_) => "ModulusTooLarge",
            FieldError::ZeroInverse => "ZeroInverse",
            FieldError::Parse(_) => "Parse",
        };
        Failure::validation(kind, e)
    }
}

impl<R: std::fmt::Debug> From<CurveError<R>> for Failure {
    fn from(e: CurveError<R>) -> Self {
        let kind = match e {
            CurveError::Singular => "Singular",
            CurveError::NonUnitDiscriminant(_) => "NonUnitDiscriminant",
            CurveError::NotOnCurve => "NotOnCurve",
            CurveError::HasseViolation { .. } => return Failure::internal(e),
        };
        Failure::validation(kind, e)
    }
}

/// A decimal integer emitted as a bare JSON number of any size.
fn num(n: impl ToString) -> Box<RawValue> {
    RawValue::from_string(n.to_string()).expect("decimal integers are valid JSON")
}

#[derive(Serialize)]
struct Record<I: Serialize, R: Serialize> {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    inputs: Option<I>,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<R>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorBody>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<TraceEvent>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u128>,
}

#[derive(Serialize)]
struct ErrorBody {
    kind: &'static str,
    message: String,
}

/// Everything a subcommand hands back before formatting.
struct Reply<I: Serialize, R: Serialize> {
    command: &'static str,
    inputs: I,
    outcome: Result<(R, i32), Failure>,
    text: String,
    trace: Option<Vec<TraceEvent>>,
}

fn parse_field(q: &str) -> Result<PrimeField, Failure> {
    let q: BigUint = q
        .trim()
        .parse()
        .map_err(|_| Failure::validation("Parse", format!("cannot parse q from {q:?}")))?;
    Ok(PrimeField::from_biguint(&q)?)
}

fn parse_coeffs(field: PrimeField, s: &str) -> Result<Vec<FieldElement>, Failure> {
    s.split(',')
        .map(|c| field.parse_elem(c).map_err(Failure::from))
        .collect()
}

fn parse_field_curve(field: PrimeField, s: &str) -> Result<Curve<FieldElement>, Failure> {
    match parse_coeffs(field, s)?.as_slice() {
        &[a, b] => Ok(Curve::new(a, b)?),
        _ => Err(Failure::validation("Parse", "--curve takes two coefficients A,B")),
    }
}

fn values(cs: &[FieldElement]) -> Vec<u64> {
    cs.iter().map(|c| c.value()).collect()
}

#[derive(Serialize)]
struct CurveInputs {
    q: Box<RawValue>,
    curve: Vec<u64>,
}

fn curve_inputs(field: PrimeField, curve: &Curve<FieldElement>) -> CurveInputs {
    CurveInputs {
        q: num(field.modulus()),
        curve: values(&[curve.a(), curve.b()]),
    }
}

#[derive(Serialize)]
struct CountInputs {
    #[serde(flatten)]
    curve: CurveInputs,
    method: Method,
}

#[derive(Serialize)]
struct CountResult {
    count: Box<RawValue>,
    t: Box<RawValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    l_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residues: Option<Vec<TraceResidue>>,
}

fn cmd_count(args: &CountArgs, want_trace: bool) -> Result<Reply<CountInputs, CountResult>, Failure> {
    let field = parse_field(&args.q)?;
    let curve = parse_field_curve(field, &args.curve)?;
    let q = field.modulus();
    let inputs = CountInputs {
        curve: curve_inputs(field, &curve),
        method: args.method,
    };
    let (result, text, trace) = match args.method {
        Method::Naive => {
            if q > NAIVE_BOUND {
                return Err(Failure::validation(
                    "BoundExceeded",
                    format!("q = {q} exceeds the naive bound {NAIVE_BOUND}"),
                ));
            }
            let count = curve.naive_count();
            let t = BigInt::from(q) + 1 - count;
            let text = format!("count = {count}\nt = {t}\n");
            let result = CountResult {
                count: num(count),
                t: num(t),
                l_max: None,
                residues: None,
            };
            (result, text, None)
        }
        Method::Schoof => {
            let report = schoof_count(&curve).map_err(Failure::internal)?;
            let mut text = format!("count = {}\nt = {}\nl_max = {}\n", report.count, report.t, report.l_max);
            for r in &report.residues {
                text += &format!("t = {} (mod {})\n", r.tau, r.l);
            }
            if want_trace {
                text += &trace_text(&report.trace);
            }
            let result = CountResult {
                count: num(&report.count),
                t: num(&report.t),
                l_max: Some(report.l_max),
                residues: Some(report.residues),
            };
            (result, text, want_trace.then_some(report.trace))
        }
    };
    Ok(Reply {
        command: "count",
        inputs,
        outcome: Ok((result, EXIT_OK)),
        text,
        trace,
    })
}

fn trace_text(events: &[TraceEvent]) -> String {
    let mut s = String::new();
    for e in events {
        s += &format!(
            "l = {} tau = {} {}",
            e.l,
            e.tau,
            if e.accepted { "accepted" } else { "rejected" }
        );
        if let Some(d) = e.gcd_degree {
            s += &format!(" gcd_degree = {d}");
        }
        s.push('\n');
    }
    s
}

#[derive(Serialize)]
struct FactorInputs {
    q: Box<RawValue>,
    /// h after normalization to monic.
    h: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    curve: Option<Vec<u64>>,
    budget: usize,
}

#[derive(Serialize)]
struct FactorResult {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    factors: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_location: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_l: Option<Option<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    curve_used: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    curves_tried: Option<usize>,
}

impl FactorResult {
    fn status(status: &'static str) -> Self {
        Self {
            status,
            factors: None,
            witness: None,
            witness_location: None,
            witness_l: None,
            curve_used: None,
            curves_tried: None,
        }
    }

    fn split(r: &FactorizationResult) -> Self {
        Self {
            status: "Split",
            factors: Some(r.factors.iter().map(|f| f.to_string()).collect()),
            witness: Some(r.witness.element.to_string()),
            witness_location: Some(factorizer::location_name(r.witness.location)),
            witness_l: Some(r.witness_l),
            curve_used: Some(values(&r.curve_used)),
            curves_tried: Some(r.curves_tried),
        }
    }
}

fn parse_ring_curve(field: PrimeField, s: &str) -> Result<[FieldElement; 4], Failure> {
    let zero = field.zero();
    match *parse_coeffs(field, s)?.as_slice() {
        [a, b] => Ok([zero, a, zero, b]),
        [alpha, beta, gamma, delta] => Ok([alpha, beta, gamma, delta]),
        _ => Err(Failure::validation(
            "Parse",
            "--curve takes A,B or alpha,beta,gamma,delta",
        )),
    }
}

fn cmd_factor(args: &FactorArgs) -> Result<Reply<FactorInputs, FactorResult>, Failure> {
    let field = parse_field(&args.q)?;
    let h = Poly::parse(&args.h, field).map_err(|e| Failure::validation("Parse", e))?;
    if h.degree() != Some(2) {
        return Err(Failure::validation("NotQuadratic", format!("h = {h} must have degree 2")));
    }
    let h = h.monic().expect("nonzero leading coefficient");
    let pinned = args
        .curve
        .as_deref()
        .map(|s| parse_ring_curve(field, s))
        .transpose()?;
    let inputs = FactorInputs {
        q: num(field.modulus()),
        h: h.to_string(),
        curve: pinned.map(|c| values(&c)),
        budget: args.budget,
    };
    let status = factorizer::validate_h(&h).map_err(Failure::internal)?;
    let outcome = match (status, pinned) {
        (factorizer::HStatus::Split, Some(c)) => {
            factorizer::factor_with_curve(&h, c).map(Factorization::Distinct)
        }
        _ => factorizer::factor(&h, args.budget),
    };
    let (result, code) = match outcome {
        Ok(Factorization::Distinct(r)) => (FactorResult::split(&r), EXIT_OK),
        Ok(Factorization::Repeated(g)) => {
            let mut r = FactorResult::status("NotSquarefree");
            r.factors = Some(vec![g.to_string(), g.to_string()]);
            (r, EXIT_OK)
        }
        Err(FactorError::Irreducible) => (FactorResult::status("Irreducible"), EXIT_OK),
        Err(FactorError::ExhaustedEnumeration { .. }) => {
            (FactorResult::status("ExhaustedEnumeration"), EXIT_NO_FACTOR)
        }
        Err(FactorError::NoSplitFound) => (FactorResult::status("NoSplitFound"), EXIT_NO_FACTOR),
        Err(FactorError::SingularCurve) => {
            return Err(Failure::validation("Singular", FactorError::SingularCurve))
        }
        Err(e) => return Err(Failure::internal(e)),
    };
    let mut text = format!("status = {}\n", result.status);
    if let Some(fs) = &result.factors {
        text += &format!("factors = {}\n", fs.join(" ; "));
    }
    if let Some(w) = &result.witness {
        text += &format!("witness = {w}\n");
    }
    if let Some(l) = result.witness_l {
        match l {
            Some(l) => text += &format!("witness_l = {l}\n"),
            None => text += "witness_l = discriminant\n",
        }
    }
    if let Some(c) = &result.curve_used {
        text += &format!("curve_used = {c:?}\n");
    }
    Ok(Reply {
        command: "factor",
        inputs,
        outcome: Ok((result, code)),
        text,
        trace: None,
    })
}

#[derive(Serialize)]
struct DivpolyInputs {
    #[serde(flatten)]
    curve: CurveInputs,
    m: u64,
}

#[derive(Serialize)]
struct DivpolyResult {
    f: String,
    degree: Option<usize>,
}

fn cmd_divpoly(args: &DivpolyArgs) -> Result<Reply<DivpolyInputs, DivpolyResult>, Failure> {
    let field = parse_field(&args.q)?;
    let curve = parse_field_curve(field, &args.curve)?;
    let m = usize::try_from(args.m).map_err(|_| Failure::validation("Parse", "m too large"))?;
    let f = DivisionPolynomials::new(curve).f(m);
    let result = DivpolyResult {
        f: f.to_string(),
        degree: f.degree(),
    };
    Ok(Reply {
        command: "divpoly",
        inputs: DivpolyInputs {
            curve: curve_inputs(field, &curve),
            m: args.m,
        },
        text: format!("{}\n", result.f),
        outcome: Ok((result, EXIT_OK)),
        trace: None,
    })
}

#[derive(Serialize)]
struct ZetaInputs {
    #[serde(flatten)]
    curve: CurveInputs,
    n: usize,
}

#[derive(Serialize)]
struct ZetaResult {
    t: Box<RawValue>,
    /// Ascending coefficients of 1 − tT + qT².
    weil_polynomial: Vec<Box<RawValue>>,
    counts: Vec<Box<RawValue>>,
}

fn cmd_zeta(args: &ZetaArgs) -> Result<Reply<ZetaInputs, ZetaResult>, Failure> {
    let field = parse_field(&args.q)?;
    let curve = parse_field_curve(field, &args.curve)?;
    let q = field.modulus();
    let report = schoof_count(&curve).map_err(Failure::internal)?;
    let counts = extension_counts(&report.t, q, args.n)?;
    let text = format!(
        "t = {}\nN = [{}]\n",
        report.t,
        counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
    );
    let result = ZetaResult {
        t: num(&report.t),
        weil_polynomial: vec![num(1), num(-&report.t), num(q)],
        counts: counts.iter().map(num).collect(),
    };
    Ok(Reply {
        command: "zeta",
        inputs: ZetaInputs {
            curve: curve_inputs(field, &curve),
            n: args.n,
        },
        outcome: Ok((result, EXIT_OK)),
        text,
        trace: None,
    })
}

fn render<I: Serialize, R: Serialize>(
    reply: Result<Reply<I, R>, Failure>,
    command: &'static str,
    json: bool,
    timing_ms: Option<u128>,
) -> Output {
    let (command, inputs, outcome, text, trace) = match reply {
        Ok(r) => (r.command, Some(r.inputs), r.outcome, r.text, r.trace),
        Err(f) => (command, None, Err(f), String::new(), None),
    };
    let (result, error, code, stderr) = match outcome {
        Ok((result, code)) => (Some(result), None, code, String::new()),
        Err(f) => {
            let stderr = format!("error: {}\n", f.message);
            let body = ErrorBody {
                kind: f.kind,
                message: f.message,
            };
            (None, Some(body), f.code, stderr)
        }
    };
    let stdout = if json {
        let record = Record {
            command,
            inputs,
            result,
            error,
            trace,
            timing_ms,
        };
        serde_json::to_string(&record).expect("records serialize") + "\n"
    } else {
        let mut text = text;
        if let Some(ms) = timing_ms {
            text += &format!("time = {ms} ms\n");
        }
        text
    };
    Output { stdout, stderr, code }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    stdout: String::new(),
                    stderr: rendered,
                    code,
                }
            } else {
                Output {
                    stdout: rendered,
                    stderr: String::new(),
                    code,
                }
            };
        }
    };
    let start = Instant::now();
    let elapsed = |on: bool| on.then(|| start.elapsed().as_millis());
    match &cli.command {
        Command::Count(a) => {
            let reply = cmd_count(a, cli.trace);
            render(reply, "count", cli.json, elapsed(cli.timing))
        }
        Command::Factor(a) => render(cmd_factor(a), "factor", cli.json, elapsed(cli.timing)),
        Command::Divpoly(a) => render(cmd_divpoly(a), "divpoly", cli.json, elapsed(cli.timing)),
        Command::Zeta(a) => render(cmd_zeta(a), "zeta", cli.json, elapsed(cli.timing)),
    }
}
