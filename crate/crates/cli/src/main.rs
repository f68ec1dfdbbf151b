//! `subdivlab` command-line runner.
//!
//! Every subcommand writes JSON or CSV to `--out` (or stdout). Failures print
//! `{"error": kind, "message": ...}` on stderr and exit with 2 for bad input,
//! 3 for an exhausted search budget and 4 for internal failures.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use subdivlab::construct::{self, Extremal};
use subdivlab::distances::{self, ViolationOptions};
use subdivlab::exponents;
use subdivlab::incidence::{self, PlanarConfig};
use subdivlab::patterns::{self, SearchOptions, DEFAULT_NODE_BUDGET};
use subdivlab::regularize;
use subdivlab::scalar::parse_decimal;
use subdivlab::{Bigraph, Error, PointSet, Rational, SubdividedPattern};

#[derive(Parser)]
#[command(
    name = "subdivlab",
    version,
    about = "Subdivision patterns, regularization, incidences and distances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search a host graph for a sided copy of a subdivision pattern.
    Detect {
        #[arg(long)]
        host: PathBuf,
        /// Part sizes, e.g. `2,3`.
        #[arg(long)]
        parts: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run the two-phase regularization and emit its trace and certificate.
    Regularize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value = "1")]
        delta: String,
        /// Constant the conditions are checked against; defaults to 2^-(⌈s ln s⌉+6).
        #[arg(long)]
        constant: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    #[command(subcommand)]
    Construct(ConstructCmd),
    #[command(subcommand)]
    Incidence(IncidenceCmd),
    #[command(subcommand)]
    Distances(DistancesCmd),
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    out: Option<PathBuf>,
    /// Search node budget.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
}

impl Common {
    fn search(&self) -> SearchOptions {
        SearchOptions {
            node_budget: self.budget,
        }
    }
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Random deletion construction over a list of sizes, as CSV.
    Scan {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        /// `n = ⌊m^exp⌋`; decimal or `p/q`.
        #[arg(long = "exp")]
        exponent: String,
        #[arg(long)]
        m: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1")]
        epsilon: String,
        #[command(flatten)]
        common: Common,
    },
    /// A single random construction, as JSON.
    Graph {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1")]
        epsilon: String,
        #[command(flatten)]
        common: Common,
    },
    /// Double-counting certificate for `K_{s,t}`-freeness of a graph.
    Kst {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Exact extremal number for a tiny grid of sizes.
    Extremal {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        parts: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum IncidenceCmd {
    /// Find an `s`-by-`s` grid in a point-line configuration.
    Grid {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        s: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Find a triangle in a point-line configuration.
    Triangle {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Grid exponents as CSV; `--s` takes a list such as `2`, `1,3` or `1..10`.
    Exponents {
        #[arg(long)]
        s: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum DistancesCmd {
    /// Distance classes and energy of a point set.
    Energy {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check that every `p` points determine at least `q` distances.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = distances::DEFAULT_SUBSET_BUDGET)]
        subsets: u128,
        #[command(flatten)]
        common: Common,
    },
    /// Extract `p` points with few distinct distances from a copy in the lift.
    Violate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = distances::DEFAULT_ATTEMPTS)]
        attempts: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
    Json(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn report(&self) -> (u8, serde_json::Value) {
        match self {
            Failure::Lib(e) => {
                let code = match e {
                    Error::Budget { .. } => 3,
                    Error::Structural(_) => 4,
                    _ => 2,
                };
                (code, json!({"error": e.kind(), "message": e.to_string()}))
            }
            Failure::Io(m) => (2, json!({"error": "io", "message": m})),
            Failure::Json(m) => (2, json!({"error": "json", "message": m})),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Outcome {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => io::stdout().write_all(bytes).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Outcome {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Json(e.to_string()))?;
    text.push('\n');
    emit(out, text.as_bytes())
}

fn parse_list(text: &str) -> std::result::Result<Vec<usize>, Failure> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let bad = || Failure::Lib(Error::Input(format!("malformed list item {item:?}")));
        match item.split_once("..") {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                out.extend(a..=b);
            }
            None => out.push(item.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(Failure::Lib(Error::Input("empty list".into())));
    }
    Ok(out)
}

fn parse_graph(path: &Path) -> std::result::Result<Bigraph, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Json(format!("{}: {e}", path.display())))
}

fn parse_points(path: &Path) -> std::result::Result<PointSet, Failure> {
    Ok(PointSet::from_json(&read(path)?)?)
}

fn rational(text: &str) -> std::result::Result<Rational, Failure> {
    Ok(parse_decimal(text)?)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Detect { host, parts, common } => {
            let graph = parse_graph(&host)?;
            let pattern = SubdividedPattern::new(parse_list(&parts)?)?;
            let emb = patterns::find_embedding_with(&graph, &pattern, &common.search())?;
            emit_json(
                &common.out,
                &json!({"parts": pattern.parts(), "found": emb.is_some(), "embedding": emb}),
            )
        }
        Command::Regularize {
            input,
            s,
            delta,
            constant,
            common,
        } => {
            let graph = parse_graph(&input)?;
            let r = regularize::reduce(&graph, s, &rational(&delta)?)?;
            let report = regularize::verify_conditions(&r.certificate, constant);
            emit_json(
                &common.out,
                &json!({"trace": r.trace, "certificate": r.certificate, "verification": report}),
            )
        }
        Command::Construct(cmd) => construct_cmd(cmd),
        Command::Incidence(cmd) => incidence_cmd(cmd),
        Command::Distances(cmd) => distances_cmd(cmd),
    }
}

fn construct_cmd(cmd: ConstructCmd) -> Outcome {
    match cmd {
        ConstructCmd::Scan {
            s,
            t,
            exponent,
            m,
            trials,
            seed,
            epsilon,
            common,
        } => {
            let rows = construct::threshold_scan(
                s,
                t,
                &rational(&exponent)?,
                &parse_list(&m)?,
                trials,
                seed,
                &rational(&epsilon)?,
                &common.search(),
            )?;
            let mut writer = csv::Writer::from_writer(Vec::new());
            if rows.is_empty() {
                writer
                    .write_record([
                        "m",
                        "n",
                        "s",
                        "t",
                        "exponent",
                        "trial",
                        "seed",
                        "p",
                        "edges_before",
                        "copies",
                        "edges_after",
                        "ratio",
                    ])
                    .map_err(|e| Failure::Io(e.to_string()))?;
            }
            for row in &rows {
                writer.serialize(row).map_err(|e| Failure::Io(e.to_string()))?;
            }
            let bytes = writer.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
            emit(&common.out, &bytes)
        }
        ConstructCmd::Graph {
            m,
            n,
            s,
            t,
            seed,
            epsilon,
            common,
        } => {
            let c = construct::random_lower_bound_graph(m, n, s, t, &rational(&epsilon)?, seed, &common.search())?;
            emit_json(&common.out, &json!({"graph": c.graph, "report": c.report}))
        }
        ConstructCmd::Kst { input, s, t, common } => {
            let graph = parse_graph(&input)?;
            emit_json(&common.out, &construct::kst_certificate(&graph, s, t)?)
        }
        ConstructCmd::Extremal { m, n, parts, common } => {
            let pattern = SubdividedPattern::new(parse_list(&parts)?)?;
            let value: Extremal = construct::brute_extremal(m, n, &pattern, common.budget)?;
            emit_json(
                &common.out,
                &json!({"m": m, "n": n, "parts": pattern.parts(), "value": value}),
            )
        }
    }
}

fn incidence_cmd(cmd: IncidenceCmd) -> Outcome {
    match cmd {
        IncidenceCmd::Grid { input, s, common } => {
            let witness = match PlanarConfig::<Rational>::from_json(&read(&input)?)? {
                PlanarConfig::Real(c) => incidence::detect_grid(&c.points, &c.lines, s, &common.search())?,
                PlanarConfig::Complex(c) => incidence::detect_grid(&c.points, &c.lines, s, &common.search())?,
            };
            emit_json(
                &common.out,
                &json!({"s": s, "found": witness.is_some(), "witness": witness}),
            )
        }
        IncidenceCmd::Triangle { input, common } => {
            let witness = match PlanarConfig::<Rational>::from_json(&read(&input)?)? {
                PlanarConfig::Real(c) => incidence::detect_triangle(&c.points, &c.lines),
                PlanarConfig::Complex(c) => incidence::detect_triangle(&c.points, &c.lines),
            };
            emit_json(&common.out, &json!({"found": witness.is_some(), "witness": witness}))
        }
        IncidenceCmd::Exponents { s, common } => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Failure::Io(e.to_string());
            writer
                .write_record(["s", "m_exponent", "n_exponent", "total_exponent"])
                .map_err(io)?;
            for s in parse_list(&s)? {
                let s = s as i64;
                let (a, b) = exponents::grid2flat_exponents::<i64>(s)?;
                let total = exponents::grid_total_exponent::<i64>(s)?;
                writer
                    .write_record([s.to_string(), a.to_string(), b.to_string(), total.to_string()])
                    .map_err(|e| Failure::Io(e.to_string()))?;
            }
            let bytes = writer.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
            emit(&common.out, &bytes)
        }
    }
}

fn distances_cmd(cmd: DistancesCmd) -> Outcome {
    match cmd {
        DistancesCmd::Energy { input, common } => {
            let pts = parse_points(&input)?;
            let report = distances::energy(&pts);
            emit_json(
                &common.out,
                &json!({"n": pts.len(), "distinct": report.classes.len(), "energy": report.energy.to_string(), "classes": report.classes}),
            )
        }
        DistancesCmd::Check {
            input,
            p,
            q,
            subsets,
            common,
        } => {
            let pts = parse_points(&input)?;
            emit_json(&common.out, &distances::check_local_condition(&pts, p, q, subsets)?)
        }
        DistancesCmd::Violate {
            input,
            p,
            s,
            seed,
            attempts,
            common,
        } => {
            let pts = parse_points(&input)?;
            let options = ViolationOptions {
                attempts,
                search: common.search(),
            };
            let q = distances::q_formula(p, s)?;
            let value = match distances::find_violation(&pts, p, s, seed, &options)? {
                Some(v) => {
                    let coords: Vec<[String; 2]> =
                        v.a.iter()
                            .map(|&i| {
                                let pt = &pts.points()[i];
                                [pt.x.to_string(), pt.y.to_string()]
                            })
                            .collect();
                    json!({"A": v.a, "points": coords, "distinct": v.distinct, "q": v.q, "seed": seed,
                           "lift_seed": v.lift_seed, "attempt": v.attempt, "trace": v.trace})
                }
                None => json!({"A": null, "distinct": null, "q": q, "seed": seed}),
            };
            emit_json(&common.out, &value)
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("SUBDIVLAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // A second initialisation only fails if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = json!({"error": "usage", "message": e.to_string()});
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    configure_threads();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, body) = f.report();
            eprintln!("{body}");
            ExitCode::from(code)
        }
    }
}
