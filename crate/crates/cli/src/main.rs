//! Command-line interface for the moreau library: evaluation, envelopes,
//! proximal points, conjugates, envelope inversion, relation predicates,
//! Attouch-Wets distances, sequence classification, least squares, and CSV
//! sampling of the built-in quadratic families.
//!
//! Results are JSON on stdout with deterministic field order (CSV for
//! `sample`). Exit codes: 0 success, 2 input validation error, 3
//! mathematical infeasibility.

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use moreau::nalgebra::DVector;
use serde::Serialize;

use moreau::envinv::{invert_envelope, InversionReason};
use moreau::epiconv::{aw_distance, classify_1d, classify_sequence, envelope_coeffs_1d, LimitKind1D};
use moreau::schema::{
    builtin_family_by_name, matrix_to_rows, ExtRealJson, GlqSchema, LstsqSchema, QuadraticSchema,
    RelationSchema, SequenceSchema1D,
};
use moreau::{GlqFunction, Tolerances};

#[derive(Parser)]
#[command(name = "moreau", version, about = "Calculus of generalized linear-quadratic functions and their Moreau envelopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a GLQ function at a point
    Eval {
        /// GLQ JSON, inline or a file path
        input: String,
        /// Evaluation point as a JSON array, e.g. "[1.0, 2.0]"
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Closed-form Moreau envelope of a GLQ function
    Envelope {
        input: String,
        #[arg(long)]
        r: f64,
    },
    /// Proximal point of a GLQ function
    Prox {
        input: String,
        #[arg(long)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Fenchel conjugate of a GLQ function
    Conjugate { input: String },
    /// Decide whether a convex quadratic is a Moreau envelope and recover the objective
    InvertEnvelope {
        /// Quadratic JSON {"Q": ..., "b": ..., "c": ...}, inline or a path
        input: String,
        #[arg(long)]
        r: f64,
    },
    /// Report monotonicity, symmetry and maximality of a relation
    Check { input: String },
    /// Attouch-Wets distance between two GLQ functions
    Distance {
        input1: String,
        input2: String,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 20)]
        imax: usize,
    },
    /// Classify the epigraphical limit of a univariate quadratic sequence
    #[command(name = "classify-1d")]
    Classify1d {
        /// Sequence JSON, inline or a path
        input: String,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// Probe indices, comma separated (overrides the sequence's own)
        #[arg(long)]
        probes: Option<String>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Classify the limit of a sequence of GLQ functions (JSON list)
    ClassifySeq {
        input: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Least-squares conjugate, its domain and the minimum-norm solution
    Lstsq { input: String },
    /// Emit CSV samples x, f_k(x), e_1 f_k(x) of a built-in family
    Sample {
        #[arg(long)]
        family: String,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
        xmin: f64,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        xmax: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
    },
}

#[derive(Serialize)]
struct EvalOut {
    value: ExtRealJson,
}

#[derive(Serialize)]
struct ProxOut {
    prox: Vec<f64>,
}

#[derive(Serialize)]
struct InvertOut {
    feasible: bool,
    reason: InversionReason,
    lipschitz_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    g: Option<GlqSchema>,
}

#[derive(Serialize)]
struct CheckOut {
    n: usize,
    graph_dim: usize,
    monotone: bool,
    symmetric: bool,
    maximal_monotone: bool,
}

#[derive(Serialize)]
struct DistanceOut {
    value: f64,
    truncation_index: usize,
    tail_bound: f64,
    per_ball_sup: Vec<(usize, f64)>,
}

#[derive(Serialize)]
struct Classify1dOut {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    envelope_limit: Option<Vec<f64>>,
    evidence: Vec<f64>,
}

#[derive(Serialize)]
struct ClassifySeqOut {
    converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    limit: Option<GlqSchema>,
    final_residual: f64,
}

#[derive(Serialize)]
struct LstsqOut {
    conjugate: GlqSchema,
    domain_basis: Vec<Vec<f64>>,
    min_norm_solution: Vec<f64>,
}

struct CliError(String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

fn read_input(arg: &str) -> Result<String, CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| CliError(format!("cannot read '{arg}': {e}")))
    }
}

fn parse_point(arg: &str) -> Result<DVector<f64>, CliError> {
    let values: Vec<f64> = serde_json::from_str(arg)
        .map_err(|e| CliError(format!("point must be a JSON array of numbers: {e}")))?;
    Ok(DVector::from_row_slice(&values))
}

fn parse_glq(arg: &str, tol: Tolerances) -> Result<GlqFunction, CliError> {
    let text = read_input(arg)?;
    let schema: GlqSchema = serde_json::from_str(&text)?;
    Ok(schema.to_glq(tol)?)
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable output"));
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let tol = Tolerances::default();
    match cli.command {
        Command::Eval { input, at } => {
            let f = parse_glq(&input, tol)?;
            let x = parse_point(&at)?;
            let v = f.evaluate(&x)?;
            emit(&EvalOut { value: ExtRealJson(v) });
            Ok(0)
        }
        Command::Envelope { input, r } => {
            let f = parse_glq(&input, tol)?;
            let env = f.envelope(r)?;
            emit(&QuadraticSchema::from_quadratic(&env));
            Ok(0)
        }
        Command::Prox { input, r, at } => {
            let f = parse_glq(&input, tol)?;
            let x = parse_point(&at)?;
            let p = f.prox(r, &x)?;
            emit(&ProxOut {
                prox: p.iter().copied().collect(),
            });
            Ok(0)
        }
        Command::Conjugate { input } => {
            let f = parse_glq(&input, tol)?;
            emit(&GlqSchema::from_glq(&f.conjugate()?));
            Ok(0)
        }
        Command::InvertEnvelope { input, r } => {
            let text = read_input(&input)?;
            let schema: QuadraticSchema = serde_json::from_str(&text)?;
            let f = schema.to_quadratic(&tol)?;
            let report = invert_envelope(&f, r, &tol)?;
            let out = InvertOut {
                feasible: report.feasible,
                reason: report.reason,
                lipschitz_bound: report.lipschitz_bound,
                g: report.g.as_ref().map(GlqSchema::from_glq),
            };
            emit(&out);
            Ok(if report.feasible { 0 } else { 3 })
        }
        Command::Check { input } => {
            let text = read_input(&input)?;
            let schema: RelationSchema = serde_json::from_str(&text)?;
            let rel = schema.to_relation(tol)?;
            emit(&CheckOut {
                n: rel.n(),
                graph_dim: rel.graph().dim(),
                monotone: rel.is_monotone(&tol),
                symmetric: rel.is_symmetric(&tol),
                maximal_monotone: rel.is_maximal_monotone(&tol),
            });
            Ok(0)
        }
        Command::Distance {
            input1,
            input2,
            r,
            imax,
        } => {
            let f = parse_glq(&input1, tol)?;
            let g = parse_glq(&input2, tol)?;
            let d = aw_distance(&f, &g, r, imax)?;
            emit(&DistanceOut {
                value: d.value,
                truncation_index: d.truncation_index,
                tail_bound: d.tail_bound,
                per_ball_sup: d.per_ball_sup,
            });
            Ok(0)
        }
        Command::Classify1d {
            input,
            r,
            probes,
            tol: ctol,
        } => {
            let text = read_input(&input)?;
            let schema: SequenceSchema1D = serde_json::from_str(&text)?;
            let (seq, default_probes) = schema.to_sequence(r)?;
            let probe_list = match probes {
                None => default_probes,
                Some(p) => p
                    .split(',')
                    .map(|s| s.trim().parse::<u64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| CliError(format!("bad probe list: {e}")))?,
            };
            let out = classify_1d(&seq, &probe_list, ctol)?;
            let (kind, params) = match &out.kind {
                LimitKind1D::Affine { b, c } => ("affine", Some(serde_json::json!({"b": b, "c": c}))),
                LimitKind1D::Quadratic { a, b, c } => {
                    ("quadratic", Some(serde_json::json!({"a": a, "b": b, "c": c})))
                }
                LimitKind1D::Indicator { point, c } => {
                    ("indicator", Some(serde_json::json!({"point": point, "c": c})))
                }
                LimitKind1D::ImproperPlusInfinity => ("improper_plus_infinity", None),
                LimitKind1D::ImproperMinusInfinity => ("improper_minus_infinity", None),
                LimitKind1D::Undetermined => ("undetermined", None),
            };
            emit(&Classify1dOut {
                kind,
                params,
                envelope_limit: out.envelope_limit.map(|(a, b, c)| vec![a, b, c]),
                evidence: vec![out.evidence.0, out.evidence.1, out.evidence.2],
            });
            Ok(0)
        }
        Command::ClassifySeq { input, tol: ctol } => {
            let text = read_input(&input)?;
            let schemas: Vec<GlqSchema> = serde_json::from_str(&text)?;
            let terms: Result<Vec<GlqFunction>, moreau::Error> =
                schemas.iter().map(|s| s.to_glq(tol)).collect();
            let out = classify_sequence(&terms?, ctol)?;
            emit(&ClassifySeqOut {
                converged: out.converged,
                limit: out.limit.as_ref().map(GlqSchema::from_glq),
                final_residual: out.final_residual,
            });
            Ok(0)
        }
        Command::Lstsq { input } => {
            let text = read_input(&input)?;
            let schema: LstsqSchema = serde_json::from_str(&text)?;
            let problem = schema.to_problem()?;
            let conj = problem.conjugate(&tol)?;
            let dom = problem.conjugate_domain(&tol);
            let x = problem.min_norm_solution(&tol);
            emit(&LstsqOut {
                conjugate: GlqSchema::from_glq(&conj),
                domain_basis: matrix_to_rows(dom.basis()),
                min_norm_solution: x.iter().copied().collect(),
            });
            Ok(0)
        }
        Command::Sample {
            family,
            k,
            xmin,
            xmax,
            step,
        } => {
            if step <= 0.0 || step.is_nan() || xmax < xmin {
                return Err(CliError("need step > 0 and xmax >= xmin".into()));
            }
            if k == 0 {
                return Err(CliError("k must be at least 1".into()));
            }
            let fam = builtin_family_by_name(&family)?;
            let (a, b, c) = fam.term(k);
            let (alpha, beta, gamma) = envelope_coeffs_1d(a, b, c, 1.0)?;
            println!("x,f_k,e_1_f_k");
            let steps = ((xmax - xmin) / step).round() as usize;
            for i in 0..=steps {
                let x = xmin + step * i as f64;
                if x > xmax + 1e-12 {
                    break;
                }
                let fx = a * x * x + b * x + c;
                let ex = alpha * x * x + beta * x + gamma;
                println!("{x},{fx},{ex}");
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
