//! `commgroup`: JSON front end for the commutation group toolkit.
//!
//! Exit codes: 0 answered, 2 invalid input, 3 search bound exhausted.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use commgroup::contextuality::{
    classify_z2, parse_bracketing, search_contextual_word, value_assignment, AssignmentEntry,
    Classification, CompatibilityGraph, SearchOutcome, ValueOutcome,
};
use commgroup::darboux::{darboux_form, decide_darboux, is_darboux, standard_form, CogredientResult, Decision};
use commgroup::group::DEFAULT_ENUMERATION_CAP;
use commgroup::representation::{
    verify_representation, VerifyMode, DEFAULT_DENSE_CAP,
};
use commgroup::rewrite::normalize_traced;
use commgroup::{
    normalize, parse_word, represent, to_dense, verify_contextual_word, CommutatorMatrix, Error,
    Group, NormalForm, Verdict,
};

const REDUCTION_WARNING: &str = "the matrix was reduced by a change of generators; \
a contextual word for the reduced matrix need not correspond to one over the original generators";

#[derive(Parser)]
#[command(name = "commgroup", version, about = "Commutation groups over Z_d")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct MatrixArg {
    /// Matrix file: {"d": .., "labels": [..], "mu": [[..]]}
    #[arg(long)]
    matrix: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of a word.
    Normalize {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Include every rewrite step.
        #[arg(long)]
        trace: bool,
    },
    /// Whether two words are equal in the group.
    Equal {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Verifies a contextual word given by its bracketing.
    CheckWord {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long)]
        bracketing: String,
        /// Expected flattening; defaults to the bracketing's own.
        #[arg(long)]
        word: Option<String>,
    },
    /// Bounded breadth-first search for a contextual word.
    Search {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// Value assignment on the compatible monoid, or a contextual word.
    Assign {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u64,
    },
    /// Contextuality over Z_2 through induced subgraphs.
    Classify {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u64,
    },
    /// Cogredient reduction to block-diagonal (or tridiagonal) form.
    Darboux {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Stop at the tridiagonal form.
        #[arg(long)]
        standard: bool,
        /// Include the base change matrix.
        #[arg(long)]
        emit_basis: bool,
    },
    /// Contextuality of a block-diagonal matrix by relative parity.
    Decide {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Reduce a non-block-diagonal matrix first.
        #[arg(long)]
        reduce: bool,
        #[arg(long)]
        emit_basis: bool,
    },
    /// Clock and shift image of a word.
    Represent {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long, default_value = "")]
        word: String,
        /// Include the dense matrix as rows of [re, im] pairs.
        #[arg(long)]
        dense: bool,
        #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
        dense_cap: u64,
        /// Check the representation over the whole group.
        #[arg(long, value_enum)]
        verify: Option<Verify>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The commutation graph of the compatible monoid.
    Graph {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Verify {
    Exhaustive,
    Sampled,
}

enum Output {
    Json(Value),
    Text(String),
}

struct Answer {
    output: Output,
    code: u8,
}

impl From<Value> for Answer {
    fn from(value: Value) -> Self {
        Answer {
            output: Output::Json(value),
            code: 0,
        }
    }
}

enum Failure {
    Input(String),
    Module(Error),
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Module(e.into())
    }
}

impl Failure {
    fn to_json(&self) -> Value {
        match self {
            Failure::Input(detail) => json!({"error": "invalid_input", "detail": detail}),
            Failure::Module(e) => json!({"error": e.kind(), "detail": e.to_string()}),
        }
    }
}

fn load(arg: &MatrixArg) -> Result<CommutatorMatrix, Failure> {
    let text = fs::read_to_string(&arg.matrix)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", arg.matrix.display())))?;
    Ok(CommutatorMatrix::from_json(&text)?)
}

fn normal_form_json(nf: &NormalForm, mu: &CommutatorMatrix) -> Value {
    json!({
        "phase": nf.phase.value(),
        "exponents": nf.exponents.as_slice(),
        "normal_form": nf.render(mu.labels()),
    })
}

fn assignment_json(entries: Vec<AssignmentEntry>) -> Value {
    serde_json::to_value(entries).expect("entries serialize")
}

fn cogredient_json(r: &CogredientResult, emit_basis: bool) -> Value {
    let mut out = json!({ "matrix": r.result.to_file() });
    if emit_basis {
        out["basis"] = json!(r.base.rows());
        out["determinant"] = json!(r.base.determinant().value());
    }
    out
}

fn run(cli: Cli) -> Result<Answer, Failure> {
    match cli.command {
        Command::Normalize {
            matrix,
            word,
            trace,
        } => {
            let mu = load(&matrix)?;
            let w = parse_word(&word, &mu)?;
            let mut out = if trace {
                let (nf, steps) = normalize_traced(&w, &mu);
                let mut out = normal_form_json(&nf, &mu);
                out["steps"] = steps
                    .iter()
                    .map(|s| {
                        json!({
                            "rule": s.rule.tag(),
                            "before": commgroup::format_word(&s.before, mu.labels()),
                            "after": commgroup::format_word(&s.after, mu.labels()),
                        })
                    })
                    .collect();
                out
            } else {
                normal_form_json(&normalize(&w, &mu), &mu)
            };
            out["word"] = json!(word);
            Ok(out.into())
        }
        Command::Equal {
            matrix,
            left,
            right,
        } => {
            let mu = load(&matrix)?;
            let l = normalize(&parse_word(&left, &mu)?, &mu);
            let r = normalize(&parse_word(&right, &mu)?, &mu);
            Ok(json!({
                "equal": l == r,
                "left": normal_form_json(&l, &mu),
                "right": normal_form_json(&r, &mu),
            })
            .into())
        }
        Command::CheckWord {
            matrix,
            bracketing,
            word,
        } => {
            let mu = load(&matrix)?;
            let b = parse_bracketing(&bracketing, &mu)?;
            let w = match word {
                Some(text) => parse_word(&text, &mu)?,
                None => b.flatten(),
            };
            let out = match verify_contextual_word(&w, &b, &mu)? {
                Verdict::Contextual(k) => json!({"contextual": true, "phase": k.value()}),
                Verdict::Rejected(why) => json!({
                    "contextual": false,
                    "failed": why.tag(),
                    "reason": why.describe(mu.labels()),
                }),
            };
            Ok(out.into())
        }
        Command::Search { matrix, max_len } => {
            let mu = load(&matrix)?;
            match search_contextual_word(&Group::new(mu.clone()), max_len) {
                SearchOutcome::Found(w) => Ok(json!({
                    "status": "found",
                    "word": w.record(mu.labels()),
                })
                .into()),
                SearchOutcome::Exhausted {
                    max_len,
                    explored,
                    complete,
                } => Ok(Answer {
                    output: Output::Json(json!({
                        "status": "exhausted",
                        "max_len": max_len,
                        "explored": explored,
                        "complete": complete,
                    })),
                    code: 3,
                }),
            }
        }
        Command::Assign { matrix, cap } => {
            let mu = load(&matrix)?;
            let out = match value_assignment(&Group::new(mu.clone()), cap)? {
                ValueOutcome::Assignment(l) => json!({
                    "status": "non_contextual",
                    "assignment": assignment_json(l.entries()),
                }),
                ValueOutcome::Contextual(w) => json!({
                    "status": "contextual",
                    "word": w.record(mu.labels()),
                }),
            };
            Ok(out.into())
        }
        Command::Classify { matrix, cap } => {
            let mu = load(&matrix)?;
            let group = Group::new(mu.clone());
            let out = match classify_z2(&group, cap)? {
                Classification::Contextual { word, pattern } => json!({
                    "status": "contextual",
                    "pattern": pattern.map(|p| p.kind.tag()),
                    "word": word.record(mu.labels()),
                }),
                Classification::NonContextual(l) => json!({
                    "status": "non_contextual",
                    "assignment": assignment_json(l.entries()),
                }),
            };
            Ok(out.into())
        }
        Command::Darboux {
            matrix,
            standard,
            emit_basis,
        } => {
            let mu = load(&matrix)?;
            let r = if standard {
                standard_form(&mu)
            } else {
                darboux_form(&mu)
            };
            Ok(cogredient_json(&r, emit_basis).into())
        }
        Command::Decide {
            matrix,
            reduce,
            emit_basis,
        } => {
            let original = load(&matrix)?;
            let mut out = json!({});
            let mu = if reduce && !is_darboux(&original) {
                let r = darboux_form(&original);
                out["warning"] = json!(REDUCTION_WARNING);
                out["reduced"] = cogredient_json(&r, emit_basis);
                r.result
            } else {
                original
            };
            match decide_darboux(&mu)? {
                Decision::Contextual { word, blocks } => {
                    out["contextual"] = json!(true);
                    out["blocks"] = json!([blocks.0, blocks.1]);
                    out["word"] = json!(word.record(mu.labels()));
                }
                Decision::NonContextual { odd_blocks } => {
                    out["contextual"] = json!(false);
                    out["odd_blocks"] = json!(odd_blocks);
                }
            }
            Ok(out.into())
        }
        Command::Represent {
            matrix,
            word,
            dense,
            dense_cap,
            verify,
            samples,
            seed,
        } => {
            let mu = load(&matrix)?;
            let group = Group::new(mu.clone());
            let g = group.evaluate(&parse_word(&word, &mu)?);
            let rho = represent(&g, &mu);
            let mut out = json!({
                "word": word,
                "element": g.record(),
                "operator": rho.to_pauli_string(),
                "phase": rho.phase.value(),
                "shift": rho.shift.as_slice(),
                "clock": rho.clock.as_slice(),
            });
            if dense {
                out["dense"] = to_dense(&rho, dense_cap)?.to_json();
            }
            if let Some(v) = verify {
                let mode = match v {
                    Verify::Exhaustive => VerifyMode::Exhaustive,
                    Verify::Sampled => VerifyMode::Sampled {
                        pairs: samples,
                        seed,
                    },
                };
                let report = verify_representation(&mu, mode, DEFAULT_ENUMERATION_CAP, dense_cap)?;
                out["verification"] = serde_json::to_value(report).expect("report serializes");
            }
            Ok(out.into())
        }
        Command::Graph {
            matrix,
            format,
            cap,
        } => {
            let mu = load(&matrix)?;
            let graph = CompatibilityGraph::of_group(&Group::new(mu.clone()), cap)?;
            match format {
                Format::Dot => Ok(Answer {
                    output: Output::Text(graph.to_dot()),
                    code: 0,
                }),
                Format::Json => {
                    let monoid = graph.monoid();
                    let group = monoid.group();
                    let label = |i: usize| group.to_normal_form(&monoid.element(i)).render(mu.labels());
                    let vertices: Vec<Value> = graph
                        .vertices()
                        .iter()
                        .map(|&i| json!({"id": i, "label": label(i)}))
                        .collect();
                    let mut edges = Vec::new();
                    for (a, &i) in graph.vertices().iter().enumerate() {
                        for &j in &graph.vertices()[a + 1..] {
                            if graph.adjacent(i, j) {
                                edges.push(json!([i, j]));
                            }
                        }
                    }
                    let pattern = graph.find_pattern().map(|p| {
                        json!({
                            "kind": p.kind.tag(),
                            "elements": p.elements.iter().map(|&i| label(i)).collect::<Vec<_>>(),
                        })
                    });
                    Ok(json!({
                        "vertices": vertices,
                        "edges": edges,
                        "centre": graph.centre().iter().map(|&i| label(i)).collect::<Vec<_>>(),
                        "cluster_graph": graph.is_cluster_graph(),
                        "pattern": pattern,
                    })
                    .into())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            eprintln!("{e}");
            let detail = e.render().to_string();
            let first = detail.lines().next().unwrap_or_default().trim_start_matches("error: ");
            println!("{}", json!({"error": "usage", "detail": first}));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(answer) => {
            let text = match answer.output {
                Output::Json(v) => serde_json::to_string_pretty(&v).expect("json") + "\n",
                Output::Text(t) => t,
            };
            // A closed pipe downstream is not an error of ours.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(answer.code)
        }
        Err(failure) => {
            let v = failure.to_json();
            eprintln!("error: {}", v["detail"].as_str().unwrap_or_default());
            println!("{v}");
            ExitCode::from(2)
        }
    }
}
