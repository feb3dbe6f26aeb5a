use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use lmqp::algebra::{parse_rat, parse_ratvec, Rat, RatVec};
use lmqp::format::{instance_json, parse_instance, write_instance, Instance};
use lmqp::graph::{alpha_capped, omega_capped, parse_dimacs, Graph};
use lmqp::localmin::{
    bounded_qp, certify_qp_point_capped, descent_falsifier, dyadic_bound, orthant_qp, verify_point_verdict,
    FalsifierConfig, DEFAULT_BOUND_BITS,
};
use lmqp::polyopt::{ms_max, Polytope, QpInstance, QP_DIM_CAP};
use lmqp::quartic::QuarticInstance;
use lmqp::report::{run_verify, Scope, VerdictReport, VerifyOptions};
use lmqp::Error;

#[derive(Parser)]
#[command(name = "lmqp", version, about = "Exact local-minimum reductions from stable set")]
struct Cli {
    /// Seed for every randomized component.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest dimension handed to the exact enumerators.
    #[arg(long, global = true, default_value_t = QP_DIM_CAP)]
    cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Quartic,
    QpOrthant,
    BoundedQp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Alpha,
    Omega,
    Ms,
}

#[derive(Subcommand)]
enum Command {
    /// Build a reduction instance from a DIMACS graph.
    Reduce {
        #[arg(long, value_enum)]
        kind: Kind,
        graph: PathBuf,
        #[arg(long)]
        r: usize,
        /// Explicit bound for bounded-qp.
        #[arg(long, conflicts_with = "c")]
        t: Option<String>,
        /// Bound base for bounded-qp: t is the dyadic rounding of 3cⁿ√n.
        #[arg(long)]
        c: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BOUND_BITS)]
        bound_bits: u32,
        /// Write the instance here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cross-check every decision path over a set of instances.
    Verify {
        /// A single DIMACS graph.
        #[arg(long, conflicts_with_all = ["all", "random"])]
        graph: Option<PathBuf>,
        /// Restrict a single-graph run to this r.
        #[arg(long, requires = "graph")]
        r: Option<usize>,
        /// Every labeled graph with at most N vertices.
        #[arg(long, value_name = "N", conflicts_with = "random")]
        all: Option<usize>,
        /// Random graphs with this many vertices.
        #[arg(long, value_name = "N")]
        random: Option<usize>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Edge probability for random graphs.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Record per-instance wall-clock time (breaks byte-reproducibility).
        #[arg(long)]
        timings: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Stable set, clique or Motzkin-Straus value of a graph.
    Oracle {
        graph: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Decide whether a point is a local minimizer of an instance.
    Certify {
        instance: PathBuf,
        /// Comma or space separated rationals, e.g. "1,0" or "1/2 1/2".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Re-render an instance file as JSON or canonical text.
    Export {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Io(_) => 2,
            Error::Dimension(_) | Error::Invalid(_) | Error::Infeasible(_) => 3,
            Error::CapExceeded { .. } => 4,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure { code: 2, msg: format!("{}: {e}", path.display()) })
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure { code: 2, msg: format!("{}: {e}", p.display()) }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(parse_dimacs(&read(path)?)?)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Reduce { kind, graph, r, t, c, bound_bits, output } => {
            let g = load_graph(&graph)?;
            let (inst, bound): (Instance, Option<Rat>) = match kind {
                Kind::Quartic => (Instance::Quartic(QuarticInstance::for_stable_set(&g, r)?), None),
                Kind::QpOrthant => (Instance::Qp(orthant_qp(&g, r)?), None),
                Kind::BoundedQp => {
                    let t = match (t, c) {
                        (Some(t), _) => parse_rat(&t)?,
                        (None, Some(c)) => dyadic_bound(&parse_rat(&c)?, g.n(), bound_bits)?,
                        (None, None) => return Err(Error::Invalid("bounded-qp needs --t or --c".into()).into()),
                    };
                    (Instance::Qp(bounded_qp(&g, r, t.clone())?), Some(t))
                }
            };
            let k = Rat::from_integer(r.into()) - Rat::new(1.into(), 2.into());
            let bound = bound.map_or("-".to_string(), |b| b.to_string());
            let echo = format!("n={} k={k} bound={bound}", g.n());
            emit(&write_instance(&inst), output.as_deref())?;
            if output.is_some() {
                println!("{echo}");
            } else {
                eprintln!("{echo}");
            }
            Ok(0)
        }
        Command::Verify { graph, r, all, random, count, p, timings, output } => {
            let scope = match (graph, all, random) {
                (Some(path), None, None) => Scope::Graph { graph: load_graph(&path)?, r },
                (None, Some(n), None) => Scope::Exhaustive { max_n: n },
                (None, None, Some(n)) => Scope::Random { n, count, p },
                _ => return Err(Error::Invalid("choose exactly one of --graph, --all, --random".into()).into()),
            };
            let opts = VerifyOptions { seed: cli.seed, cap: cli.cap, timings };
            let report = run_verify(&scope, &opts)?;
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            emit(&text, output.as_deref())?;
            Ok(if !report.all_agree() {
                1
            } else if report.summary.incomplete {
                4
            } else {
                0
            })
        }
        Command::Oracle { graph, which } => {
            let g = load_graph(&graph)?;
            let (name, value, witness) = match which {
                Which::Alpha => {
                    let (a, s) = alpha_capped(&g, cli.cap.max(lmqp::graph::ORACLE_LIMIT))?;
                    ("alpha", a.to_string(), json!(s))
                }
                Which::Omega => {
                    let (w, s) = omega_capped(&g, cli.cap.max(lmqp::graph::ORACLE_LIMIT))?;
                    ("omega", w.to_string(), json!(s))
                }
                Which::Ms => {
                    if g.n() > cli.cap {
                        return Err(Error::CapExceeded { what: "simplex minimization", size: g.n(), cap: cli.cap }.into());
                    }
                    let (v, x) = ms_max(&g)?;
                    ("ms", v.to_string(), json!(x))
                }
            };
            let text = match cli.format {
                Format::Json => json_text(&json!({"which": name, "value": value, "witness": witness})),
                Format::Text => format!("{name} = {value}\nwitness = {witness}\n"),
            };
            emit(&text, None)?;
            Ok(0)
        }
        Command::Certify { instance, point } => {
            let inst = parse_instance(&read(&instance)?)?;
            let x = parse_ratvec(&point)?;
            // p(x) = q(x²): a quartic point is certified through the orthant program.
            let (qp, y, question) = match &inst {
                Instance::Qp(qp) => (qp.clone(), x.clone(), format!("is {x} a local minimizer of the QP")),
                Instance::Quartic(q) => {
                    let qp = QpInstance::form(q.matrix().clone(), Polytope::orthant(q.n()), "quartic via x²")?;
                    (qp, x.squared(), format!("is {x} a local minimizer of the quartic form"))
                }
            };
            if y.dim() != qp.dim() {
                return Err(Error::Dimension(format!("point has {} entries, instance has {}", y.dim(), qp.dim())).into());
            }
            let verdict = certify_qp_point_capped(&qp, &y, cli.cap)?;
            let rechecked = verify_point_verdict(&qp, &y, &verdict);
            let falsifier = descent_falsifier(&qp, &y.to_f64(), &FalsifierConfig { seed: cli.seed, ..Default::default() });
            let mut cross = BTreeMap::new();
            cross.insert("certificate_rechecked", json!(rechecked));
            cross.insert("falsifier_improved", json!(falsifier.improved()));
            if let Instance::Quartic(_) = inst {
                cross.insert("certified_point", json!(RatVec(y.0.clone())));
            }
            let consistent = rechecked && !(verdict.is_local_min() && falsifier.improved());
            let report = VerdictReport {
                instance: instance_json(&inst),
                question,
                answer: verdict.is_local_min(),
                certificate: verdict,
                oracle_crosschecks: cross,
                seed: cli.seed,
            };
            let text = match cli.format {
                Format::Json => json_text(&report),
                Format::Text => format!(
                    "{}: {}\n",
                    report.question,
                    if report.answer { "local minimizer" } else { "not a local minimizer" }
                ),
            };
            emit(&text, None)?;
            Ok(if consistent { 0 } else { 1 })
        }
        Command::Export { instance, output } => {
            let inst = parse_instance(&read(&instance)?)?;
            let text = match cli.format {
                Format::Json => json_text(&instance_json(&inst)),
                Format::Text => write_instance(&inst),
            };
            emit(&text, output.as_deref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
