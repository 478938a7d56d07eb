//! `dpcolor` command-line front end. Every command prints one JSON document
//! (or a table with `--format table`) and exits with 0 for a positive
//! outcome, 1 for a negative one and 2 on errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use dpcolor::chromatic::{self, ChromaticError, Limits};
use dpcolor::constructible::is_constructible;
use dpcolor::cover::{find_p_transversal, is_p_critical_cover};
use dpcolor::graph::graph6::{from_graph6, to_graph6};
use dpcolor::graph::connected_graphs;
use dpcolor::theorems::{self, BoundMode, Criticality, TheoremError};
use dpcolor::{ConfigError, Configuration, Cover, Graph, JsonInputError, PropertyOracle};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "dpcolor", version, about = "DP-colouring toolkit for small graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Colour-class property: O (edgeless) or Dk (k-degenerate).
    #[arg(long, global = true, default_value = "O")]
    property: String,
    /// Largest base graph order accepted by the exhaustive searches.
    #[arg(long, global = true, default_value_t = 10)]
    max_order: usize,
    /// Largest fiber size accepted for input covers.
    #[arg(long, global = true, default_value_t = 8)]
    max_fiber: usize,
    /// Worker threads for corpus sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Leave witnesses and certificates out of the output.
    #[arg(long, global = true)]
    no_witness: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Graph6,
}

#[derive(Subcommand)]
enum Command {
    /// Find a strictly f-degenerate transversal of a configuration.
    SolveConfig { input: PathBuf },
    /// Validate a cover and look for a P-transversal.
    CheckCover { input: PathBuf },
    /// P-chromatic number of a graph.
    Chi { input: PathBuf },
    /// P-choice number of a graph.
    ChiList { input: PathBuf },
    /// P-DP-chromatic number of a graph.
    ChiDp { input: PathBuf },
    /// Decompose an uncolourable degree-feasible configuration.
    Recognize { input: PathBuf },
    /// Check one of the structural results on an input.
    Verify {
        #[arg(value_enum)]
        theorem: TheoremArg,
        /// Graph file for brooks, gallai, dirac and mihok; cover file for
        /// low-vertex and ert.
        #[arg(long)]
        input: PathBuf,
        /// For gallai and dirac: a critical cover certifying the input.
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Generate a graph family member.
    Gen {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        k: usize,
        /// Sizes of B1 and B2, as `a,b`.
        #[arg(long, default_value = "1,2")]
        split: String,
    },
    /// Run a check over all connected graphs up to an order.
    CorpusSweep {
        #[arg(long, value_enum)]
        check: SweepCheck,
        #[arg(long, default_value_t = 5)]
        order: usize,
    },
    /// Count bad k-covers of a Dir(k) graph and look for ones not coming
    /// from the constant list assignment.
    DiracCoverScan {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value = "1,2")]
        split: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    Brooks,
    LowVertex,
    Ert,
    Gallai,
    Dirac,
    Mihok,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Dirac,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepCheck {
    /// chi <= chi_list <= chi_DP
    Chain,
    Brooks,
}

/// An error with a stable code.
struct Failure {
    code: &'static str,
    message: String,
}

impl Failure {
    fn new(code: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<ChromaticError> for Failure {
    fn from(e: ChromaticError) -> Self {
        Failure::new("TooLarge", e.to_string())
    }
}

impl From<TheoremError> for Failure {
    fn from(e: TheoremError) -> Self {
        let code = match &e {
            TheoremError::NotCritical => "NotCritical",
            TheoremError::PreconditionFailed(_) => "PreconditionFailed",
            TheoremError::BadSplit(_) => "BadSplit",
            TheoremError::Chromatic(_) => "TooLarge",
            TheoremError::Property(_) => "PropertyError",
        };
        Failure::new(code, e.to_string())
    }
}

impl From<JsonInputError> for Failure {
    fn from(e: JsonInputError) -> Self {
        let code = match &e {
            JsonInputError::Cover(_) => "InvalidCover",
            _ => "ParseError",
        };
        Failure::new(code, e.to_string())
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::new("InternalError", e.to_string())
    }
}

/// Outcome of a command: the JSON body and whether it is positive.
struct Outcome {
    body: Map<String, Value>,
    positive: bool,
}

struct Ctx {
    property: PropertyOracle,
    limits: Limits,
    max_fiber: usize,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new("IoError", format!("{}: {e}", path.display())))
}

/// Reads a graph in graph6 or edge-list form.
fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = read(path)?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    let edge_list = first.contains(char::is_whitespace) || first.chars().all(|c| c.is_ascii_digit());
    let parsed = if edge_list {
        Graph::parse_edge_list(&text)
    } else {
        from_graph6(first)
    };
    parsed.map_err(|e| Failure::new("ParseError", format!("{}: {e}", path.display())))
}

impl Ctx {
    fn check_graph(&self, g: &Graph) -> Result<(), Failure> {
        if g.order() > self.limits.max_order {
            return Err(Failure::new(
                "TooLarge",
                format!("order {} exceeds --max-order {}", g.order(), self.limits.max_order),
            ));
        }
        Ok(())
    }

    fn check_cover(&self, c: &Cover) -> Result<(), Failure> {
        self.check_graph(c.base())?;
        if c.max_fiber() > self.max_fiber {
            return Err(Failure::new(
                "TooLarge",
                format!("fiber size {} exceeds --max-fiber {}", c.max_fiber(), self.max_fiber),
            ));
        }
        Ok(())
    }

    fn read_cover(&self, path: &Path) -> Result<Cover, Failure> {
        let c = Cover::from_json(&read(path)?)?;
        self.check_cover(&c)?;
        Ok(c)
    }

    fn read_config(&self, path: &Path) -> Result<Configuration, Failure> {
        let c = Configuration::from_json(&read(path)?)?;
        self.check_cover(c.cover())?;
        Ok(c)
    }

    fn read_graph(&self, path: &Path) -> Result<Graph, Failure> {
        let g = read_graph(path)?;
        self.check_graph(&g)?;
        Ok(g)
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("output types serialize")
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("json! object literal"),
    }
}

fn parse_split(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::new("BadSplit", format!("split {s:?} is not of the form a,b"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let property: PropertyOracle = cli
        .property
        .parse()
        .map_err(|e: dpcolor::PropertyError| Failure::new("ParseError", e.to_string()))?;
    let mut limits = Limits {
        max_order: cli.max_order.min(64),
        ..Limits::default()
    };
    if let Ok(w) = std::env::var("DPCOLOR_MAX_WORK") {
        limits.max_work = w
            .trim()
            .parse()
            .map_err(|_| Failure::new("ParseError", format!("DPCOLOR_MAX_WORK={w:?} is not a number")))?;
    }
    let ctx = Ctx {
        property,
        limits,
        max_fiber: cli.max_fiber,
    };
    let p = &ctx.property;
    match &cli.command {
        Command::SolveConfig { input } => {
            let c = ctx.read_config(input)?;
            let solution = c.solve_cross_checked()?;
            let cert = if solution.is_none() {
                is_constructible(&c)
            } else {
                None
            };
            Ok(Outcome {
                positive: solution.is_some(),
                body: object(json!({
                    "colorable": solution.is_some(),
                    "degree_feasible": c.is_degree_feasible(),
                    "transversal": solution.map(|t| t.choice),
                    "constructible": cert.is_some(),
                    "certificate": cert.map(|x| to_value(&x)),
                })),
            })
        }
        Command::CheckCover { input } => {
            let c = ctx.read_cover(input)?;
            let t = find_p_transversal(&c, p);
            let critical = t.is_none() && is_p_critical_cover(&c, p);
            Ok(Outcome {
                positive: t.is_some(),
                body: object(json!({
                    "valid": true,
                    "has_transversal": t.is_some(),
                    "critical": critical,
                    "transversal": t.map(|t| t.choice),
                })),
            })
        }
        Command::Chi { input } | Command::ChiList { input } | Command::ChiDp { input } => {
            let g = ctx.read_graph(input)?;
            let result = match &cli.command {
                Command::Chi { .. } => chromatic::chi_with(&g, p, &ctx.limits)?,
                Command::ChiList { .. } => chromatic::chi_list(&g, p, &ctx.limits)?,
                _ => chromatic::chi_dp(&g, p, &ctx.limits)?,
            };
            let mut body = object(json!({
                "graph6": to_graph6(&g),
                "value": result.value,
                "witness": to_value(&result.witness),
            }));
            if matches!(cli.command, Command::ChiDp { .. }) {
                body.insert("bad_cover_at_k".into(), json!(result.value.checked_sub(1)));
            }
            Ok(Outcome { positive: true, body })
        }
        Command::Recognize { input } => {
            let c = ctx.read_config(input)?;
            let cert = is_constructible(&c);
            Ok(Outcome {
                positive: cert.is_some(),
                body: object(json!({
                    "constructible": cert.is_some(),
                    "certificate": cert.map(|x| to_value(&x)),
                })),
            })
        }
        Command::Verify { theorem, input, cover, k } => {
            let need_k = || k.ok_or_else(|| Failure::new("ParseError", "--k is required for this check"));
            let report = match theorem {
                TheoremArg::Brooks => theorems::verify_brooks(&ctx.read_graph(input)?, p, &ctx.limits)?,
                TheoremArg::LowVertex => theorems::verify_low_vertex_blocks(&ctx.read_cover(input)?, p)?,
                TheoremArg::Ert => {
                    let c = ctx.read_cover(input)?;
                    theorems::verify_ert(c.base(), &c, p)?
                }
                TheoremArg::Gallai | TheoremArg::Dirac | TheoremArg::Mihok => {
                    let g = ctx.read_graph(input)?;
                    let certificate = cover.as_deref().map(|path| ctx.read_cover(path)).transpose()?;
                    let context = match &certificate {
                        Some(c) => Criticality::Cover(c),
                        None => Criticality::DpCritical,
                    };
                    let mode = match theorem {
                        TheoremArg::Gallai => BoundMode::Gallai,
                        TheoremArg::Dirac => BoundMode::Dirac,
                        _ => BoundMode::Mihok,
                    };
                    theorems::check_edge_bounds(&g, p, need_k()?, mode, context, &ctx.limits)?
                }
            };
            Ok(Outcome {
                positive: report.holds,
                body: object(to_value(&report)),
            })
        }
        Command::Gen { family: Family::Dirac, k, split } => {
            let d = theorems::gen_dirac(*k, parse_split(split)?)?;
            Ok(Outcome {
                positive: true,
                body: object(json!({
                    "graph6": to_graph6(&d.graph),
                    "order": d.graph.order(),
                    "size": d.graph.size(),
                    "parts": {"a": d.a, "b1": d.b1, "b2": d.b2, "v1": d.v1, "v2": d.v2},
                })),
            })
        }
        Command::CorpusSweep { check, order } => sweep(&ctx, *check, *order, cli.workers),
        Command::DiracCoverScan { k, split } => {
            let d = theorems::gen_dirac(*k, parse_split(split)?)?;
            let census = chromatic::bad_cover_census(&d.graph, p, *k, &ctx.limits)?;
            Ok(Outcome {
                positive: true,
                body: object(json!({
                    "graph6": to_graph6(&d.graph),
                    "census": to_value(&census),
                })),
            })
        }
    }
}

fn sweep(ctx: &Ctx, check: SweepCheck, order: usize, workers: usize) -> Result<Outcome, Failure> {
    if order > ctx.limits.max_order {
        return Err(Failure::new("TooLarge", format!("sweep order {order} exceeds --max-order")));
    }
    let graphs: Vec<Graph> = (1..=order).flat_map(connected_graphs).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Failure::new("InternalError", e.to_string()))?;
    let p = &ctx.property;
    let rows: Vec<Result<(Value, bool), Failure>> = pool.install(|| {
        graphs
            .par_iter()
            .map(|g| -> Result<(Value, bool), Failure> {
                match check {
                    SweepCheck::Chain => {
                        let chi = chromatic::chi_with(g, p, &ctx.limits)?.value;
                        let list = chromatic::chi_list(g, p, &ctx.limits)?.value;
                        let dp = chromatic::chi_dp(g, p, &ctx.limits)?.value;
                        let ok = chi <= list && list <= dp;
                        Ok((json!({"graph6": to_graph6(g), "chi": chi, "chi_list": list, "chi_dp": dp, "ok": ok}), ok))
                    }
                    SweepCheck::Brooks => {
                        let r = theorems::verify_brooks(g, p, &ctx.limits)?;
                        let row = json!({
                            "graph6": to_graph6(g),
                            "holds": r.holds,
                            "exception_class": to_value(&r.exception_class),
                            "numbers": to_value(&r.numbers),
                        });
                        Ok((row, r.holds))
                    }
                }
            })
            .collect()
    });
    let mut out = Vec::with_capacity(rows.len());
    let mut violations = Vec::new();
    for row in rows {
        let (row, ok) = row?;
        if !ok {
            violations.push(row["graph6"].clone());
        }
        out.push(row);
    }
    let check_name = match check {
        SweepCheck::Chain => "chain",
        SweepCheck::Brooks => "brooks",
    };
    Ok(Outcome {
        positive: violations.is_empty(),
        body: object(json!({
            "check": check_name,
            "property": p.name(),
            "order": order,
            "graphs": out.len(),
            "violations": violations,
            "rows": out,
        })),
    })
}

const WITNESS_KEYS: [&str; 4] = ["witness", "certificate", "transversal", "rows"];

fn render_table(body: &Map<String, Value>) -> String {
    let width = body.keys().map(|k| k.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in body {
        let shown = match v {
            Value::String(t) => t.clone(),
            other => other.to_string(),
        };
        s.push_str(&format!("{k:<width$}  {shown}\n"));
    }
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mut body, code) = match run(&cli) {
        Ok(outcome) => (outcome.body, if outcome.positive { 0 } else { 1 }),
        Err(f) => {
            eprintln!("error [{}]: {}", f.code, f.message);
            (object(json!({"error": {"code": f.code, "message": f.message}})), 2)
        }
    };
    if cli.no_witness {
        for key in WITNESS_KEYS {
            body.remove(key);
        }
    }
    let is_gen = matches!(cli.command, Command::Gen { .. });
    let format = cli.format.unwrap_or(if is_gen && code == 0 { Format::Graph6 } else { Format::Json });
    match format {
        Format::Graph6 => match body.get("graph6") {
            Some(Value::String(g6)) => println!("{g6}"),
            _ => println!("{}", render_table(&body)),
        },
        Format::Table => print!("{}", render_table(&body)),
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
            doc.extend(body);
            println!("{}", serde_json::to_string_pretty(&Value::Object(doc)).expect("json"));
        }
    }
    ExitCode::from(code)
}
