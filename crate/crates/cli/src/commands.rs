//! Argument definitions and the implementation of each subcommand.
//!
//! Every command produces a [`ResultDocument`] for standard output and a
//! one-line human summary for standard error. Input and precondition
//! problems are [`CliError`]s (exit code 2); a paradox or danger found
//! under the matching `--fail-on-*` flag exits with code 3.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use semdep::danger::{dangerous_orientation_exists, is_dangerous};
use semdep::formula::DEFAULT_RELEVANCE_CAP;
use semdep::generators::{
    gen_chain, gen_only_negative, gen_random_simply_connected, gen_tree_to_root, gen_yablo, gen_ygpp, gen_ygprime,
    yg_collapse_map,
};
use semdep::solve::{
    induced_andnot_system, solve_brute, solve_chain_with, solve_simply_connected, solve_topological_with,
    yablo_like_check,
};
use semdep::system::parse_system;
use semdep::{
    ChainForm, DangerLimits, DenotationSystem, DiGraph, SolveError, SolveStats, TruncationPolicy, YabloLikeVerdict,
};

use crate::document::{self, digest, ResultDocument, TOOL_VERSION};
use crate::dot::to_dot;
use crate::formats::{self, InputKind};

pub const EXIT_FOUND: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "semdep",
    version,
    about = "Analyse semantic dependency systems: solve, check danger, generate families"
)]
pub struct Cli {
    /// Accept denotations that mention their own vertex.
    #[arg(long, global = true)]
    pub allow_loops: bool,
    /// Largest graph the danger search accepts.
    #[arg(long, global = true, default_value_t = 5)]
    pub budget_vertices: usize,
    /// Largest out-degree the danger search accepts.
    #[arg(long, global = true, default_value_t = 3)]
    pub budget_outdegree: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a system file and echo it in canonical form.
    Parse { path: PathBuf },
    /// Find an acceptable valuation or report the system paradoxical.
    Solve {
        /// A system file, or a graph file read as its negated-conjunction system.
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Value given to free variables by the topo and chain solvers.
        #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
        free_choice: bool,
        /// Exit with code 3 when the system is paradoxical.
        #[arg(long)]
        fail_on_paradox: bool,
    },
    /// Decide whether a digraph (or a system's dependency graph) is dangerous.
    Danger {
        path: PathBuf,
        /// Exit with code 3 when the graph is dangerous.
        #[arg(long)]
        fail_on_danger: bool,
    },
    /// Search the orientations of an undirected graph for a dangerous one.
    Orientations {
        path: PathBuf,
        /// Exit with code 3 when a dangerous orientation exists.
        #[arg(long)]
        fail_on_danger: bool,
    },
    /// Write a member of one of the built-in families as a system file.
    Generate {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Policy::Clip)]
        policy: Policy,
        /// Chain forms, comma separated: next, not_next, const_true, const_false.
        #[arg(long, value_delimiter = ',')]
        spec: Vec<ChainForm>,
        /// Leave the chain open: the last vertex refers to a free variable.
        #[arg(long)]
        open_end: bool,
        #[arg(long)]
        branching: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Nesting bound for random formulas.
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
        #[arg(short, long)]
        out: PathBuf,
        /// For ygprime: also write the collapse map onto ygpp.
        #[arg(long)]
        map_out: Option<PathBuf>,
    },
    /// Check that a vertex map is a homomorphism between two graphs.
    CheckHom { g: PathBuf, h: PathBuf, map: PathBuf },
    /// Write the image of a graph under a vertex map.
    Collapse {
        g: PathBuf,
        map: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Write a system or graph as Graphviz DOT.
    ExportDot {
        path: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Mark edges whose target occurs negated in the source's denotation.
        #[arg(long)]
        negation_marks: bool,
    },
    /// Report occurring and relevant successors of every vertex.
    Relevance { path: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Brute,
    Topo,
    Simply,
    Chain,
    YabloLike,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Yablo,
    Ygprime,
    Ygpp,
    OnlyNegative,
    Chain,
    Tree,
    RandomSc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Clip,
    GroundTrue,
    GroundFalse,
}

impl From<Policy> for TruncationPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Clip => TruncationPolicy::Clip,
            Policy::GroundTrue => TruncationPolicy::GroundTrue,
            Policy::GroundFalse => TruncationPolicy::GroundFalse,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: String, source: semdep::ParseError },
    #[error("{path}: expected {expected}")]
    WrongInput { path: String, expected: &'static str },
    #[error("precondition of `{method}` violated: {reason}")]
    Precondition { method: &'static str, reason: String },
    #[error("missing --{0}")]
    MissingArg(&'static str),
    #[error("{0}")]
    Invalid(String),
}

/// A finished command.
#[derive(Debug)]
pub struct Completed {
    pub document: ResultDocument,
    pub summary: String,
    pub exit_code: u8,
}

struct Input {
    path: String,
    text: String,
}

fn read(path: &Path) -> Result<Input, CliError> {
    let p = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: p.clone(),
        source,
    })?;
    Ok(Input { path: p, text })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

impl Input {
    fn parse_err(&self, source: semdep::ParseError) -> CliError {
        CliError::Parse {
            path: self.path.clone(),
            source,
        }
    }

    fn kind(&self) -> Result<InputKind, CliError> {
        formats::detect(&self.text).map_err(|e| self.parse_err(e))
    }

    fn system(&self, allow_loops: bool) -> Result<DenotationSystem, CliError> {
        match self.kind()? {
            InputKind::System => parse_system(&self.text, allow_loops).map_err(|e| self.parse_err(e)),
            _ => Err(CliError::WrongInput {
                path: self.path.clone(),
                expected: "a system file (`name = formula` lines)",
            }),
        }
    }

    /// A graph file, or the dependency graph (free variables included) of a
    /// system file.
    fn graph(&self, allow_loops: bool) -> Result<(DiGraph, Option<DenotationSystem>), CliError> {
        match self.kind()? {
            InputKind::System => {
                let sys = self.system(allow_loops)?;
                let g = sys
                    .dependency_graph(true)
                    .map_err(|e| CliError::Invalid(e.to_string()))?;
                Ok((g, Some(sys)))
            }
            InputKind::Graph => Ok((formats::parse_graph(&self.text).map_err(|e| self.parse_err(e))?, None)),
            _ => Err(CliError::WrongInput {
                path: self.path.clone(),
                expected: "a directed graph (`a -> b`) or system file",
            }),
        }
    }
}

pub fn run(cli: &Cli) -> Result<Completed, CliError> {
    let start = Instant::now();
    let (name, inputs, payload, summary, exit_code) = dispatch(cli)?;
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let document = ResultDocument {
        tool_version: TOOL_VERSION.to_string(),
        command: name.to_string(),
        input_digest: digest(inputs.iter().map(Vec::as_slice)),
        payload,
        timing_ms: (elapsed * 1000.0).round() / 1000.0,
    };
    Ok(Completed {
        document,
        summary,
        exit_code,
    })
}

type Dispatched = (&'static str, Vec<Vec<u8>>, Value, String, u8);

fn dispatch(cli: &Cli) -> Result<Dispatched, CliError> {
    let limits = DangerLimits {
        max_vertices: cli.budget_vertices,
        max_out_degree: cli.budget_outdegree,
    };
    match &cli.command {
        Command::Parse { path } => {
            let input = read(path)?;
            let (payload, summary) = parse(&input, cli.allow_loops)?;
            Ok(("parse", vec![input.text.into_bytes()], payload, summary, 0))
        }
        Command::Solve {
            path,
            method,
            free_choice,
            fail_on_paradox,
        } => {
            let input = read(path)?;
            let (payload, summary, paradox) = solve(&input, cli.allow_loops, *method, *free_choice)?;
            let code = if paradox && *fail_on_paradox { EXIT_FOUND } else { 0 };
            Ok(("solve", vec![input.text.into_bytes()], payload, summary, code))
        }
        Command::Danger { path, fail_on_danger } => {
            let input = read(path)?;
            let (g, _) = input.graph(true)?;
            let report = is_dangerous(&g, limits).map_err(|e| CliError::Invalid(e.to_string()))?;
            let summary = format!(
                "{}: {} ({} candidates)",
                input.path,
                if report.dangerous { "dangerous" } else { "not dangerous" },
                report.candidates_tried
            );
            let code = if report.dangerous && *fail_on_danger {
                EXIT_FOUND
            } else {
                0
            };
            Ok((
                "danger",
                vec![input.text.clone().into_bytes()],
                document::danger_json(&g, &report),
                summary,
                code,
            ))
        }
        Command::Orientations { path, fail_on_danger } => {
            let input = read(path)?;
            if input.kind()? != InputKind::UndirectedGraph {
                return Err(CliError::WrongInput {
                    path: input.path,
                    expected: "an undirected graph (`a -- b`)",
                });
            }
            let u = formats::parse_undirected(&input.text).map_err(|e| input.parse_err(e))?;
            let report = dangerous_orientation_exists(&u, limits).map_err(|e| CliError::Invalid(e.to_string()))?;
            let summary = format!(
                "{}: {} ({} orientations tried)",
                input.path,
                if report.exists {
                    "has a dangerous orientation"
                } else {
                    "no dangerous orientation"
                },
                report.orientations_tried
            );
            let code = if report.exists && *fail_on_danger {
                EXIT_FOUND
            } else {
                0
            };
            Ok((
                "orientations",
                vec![input.text.into_bytes()],
                document::orientation_json(&report, &limits),
                summary,
                code,
            ))
        }
        Command::Generate { .. } => generate(&cli.command),
        Command::CheckHom { g, h, map } => {
            let (gi, hi, mi) = (read(g)?, read(h)?, read(map)?);
            let (gg, _) = gi.graph(cli.allow_loops)?;
            let (hg, _) = hi.graph(cli.allow_loops)?;
            let f = map_file(&mi)?;
            let violation = gg
                .homomorphism_violation(&hg, &f)
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            let payload = json!({
                "homomorphism": violation.is_none(),
                "violation": violation.as_ref().map(|(a, b)| json!({
                    "from": a.as_str(),
                    "to": b.as_str(),
                    "image_from": f[a].as_str(),
                    "image_to": f[b].as_str(),
                })),
            });
            let summary = match &violation {
                None => "map is a homomorphism".to_string(),
                Some((a, b)) => format!("edge {a} -> {b} maps to the non-edge {} -> {}", f[a], f[b]),
            };
            let inputs = vec![gi.text.into_bytes(), hi.text.into_bytes(), mi.text.into_bytes()];
            Ok(("check-hom", inputs, payload, summary, 0))
        }
        Command::Collapse { g, map, out } => {
            let (gi, mi) = (read(g)?, read(map)?);
            let (gg, _) = gi.graph(cli.allow_loops)?;
            let f = map_file(&mi)?;
            let image = gg.collapse(&f).map_err(|e| CliError::Invalid(e.to_string()))?;
            write(out, &formats::write_graph(&image))?;
            let payload = json!({
                "vertices": image.vertex_count(),
                "edges": image.edge_count(),
                "graph": document::edges_json(&image),
            });
            let summary = format!(
                "collapsed to {} vertices, {} edges",
                image.vertex_count(),
                image.edge_count()
            );
            Ok((
                "collapse",
                vec![gi.text.into_bytes(), mi.text.into_bytes()],
                payload,
                summary,
                0,
            ))
        }
        Command::ExportDot {
            path,
            out,
            negation_marks,
        } => {
            let input = read(path)?;
            let (g, sys) = input.graph(cli.allow_loops)?;
            let name = sys.as_ref().and_then(|s| s.name()).unwrap_or("G").to_string();
            let (text, marked) = to_dot(&name, &g, if *negation_marks { sys.as_ref() } else { None });
            write(out, &text)?;
            let payload = json!({
                "nodes": g.vertex_count(),
                "edges": g.edge_count(),
                "negation_marked": marked,
            });
            let summary = format!(
                "{} nodes, {} edges, {} negation-marked",
                g.vertex_count(),
                g.edge_count(),
                marked
            );
            let mut inputs = vec![input.text.into_bytes()];
            inputs.push(vec![u8::from(*negation_marks)]);
            Ok(("export-dot", inputs, payload, summary, 0))
        }
        Command::Relevance { path } => {
            let input = read(path)?;
            let sys = input.system(cli.allow_loops)?;
            let mut vertices = Map::new();
            for (v, f) in sys.definitions() {
                let occurring = f.occurring();
                let relevant = f
                    .relevant(DEFAULT_RELEVANCE_CAP)
                    .map_err(|e| CliError::Invalid(format!("{v}: {e}")))?;
                let names = |it: &mut dyn Iterator<Item = &semdep::VarId>| -> Vec<String> {
                    it.map(|x| x.as_str().to_string()).collect()
                };
                vertices.insert(
                    v.as_str().to_string(),
                    json!({
                        "occurring": names(&mut occurring.iter()),
                        "relevant": names(&mut relevant.iter()),
                        "irrelevant": names(&mut occurring.difference(&relevant)),
                    }),
                );
            }
            let irrelevant: usize = vertices
                .values()
                .map(|v| v["irrelevant"].as_array().map_or(0, Vec::len))
                .sum();
            let summary = format!("{} vertices, {} irrelevant occurrences", sys.len(), irrelevant);
            Ok((
                "relevance",
                vec![input.text.into_bytes()],
                json!({ "vertices": vertices }),
                summary,
                0,
            ))
        }
    }
}

fn map_file(input: &Input) -> Result<semdep::graph::VertexMap, CliError> {
    if input.kind()? != InputKind::Map {
        return Err(CliError::WrongInput {
            path: input.path.clone(),
            expected: "a vertex map (`a => b`)",
        });
    }
    formats::parse_map(&input.text).map_err(|e| input.parse_err(e))
}

fn parse(input: &Input, allow_loops: bool) -> Result<(Value, String), CliError> {
    let sys = input.system(allow_loops)?;
    let g = sys
        .dependency_graph(true)
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let free: Vec<String> = sys.free_vars().iter().map(|v| v.as_str().to_string()).collect();
    let payload = json!({
        "name": sys.name(),
        "source": sys.to_source(),
        "vertices": sys.len(),
        "edges": g.edge_count(),
        "status": if sys.is_closed() { "closed" } else { "open" },
        "free_vars": free,
    });
    let summary = format!(
        "{}: {} vertices, {} edges, {}",
        input.path,
        sys.len(),
        g.edge_count(),
        if sys.is_closed() {
            "closed".to_string()
        } else {
            format!("open ({} free)", free.len())
        }
    );
    Ok((payload, summary))
}

/// Shape of the dependency graph, most specific first.
fn auto_method(g: &DiGraph) -> Method {
    if !g.is_cycle_free() {
        return Method::Brute;
    }
    let chain = g
        .vertices()
        .iter()
        .all(|v| g.succ(v).is_ok_and(|s| s.len() <= 1) && g.pred(v).is_ok_and(|p| p.len() <= 1));
    if chain {
        Method::Chain
    } else if g.is_simply_connected() {
        Method::Simply
    } else {
        Method::Topo
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Auto => "auto",
        Method::Brute => "brute",
        Method::Topo => "topo",
        Method::Simply => "simply",
        Method::Chain => "chain",
        Method::YabloLike => "yablo-like",
    }
}

fn solve(
    input: &Input,
    allow_loops: bool,
    method: Method,
    free_choice: bool,
) -> Result<(Value, String, bool), CliError> {
    let sys = match input.kind()? {
        InputKind::Graph => induced_andnot_system(&formats::parse_graph(&input.text).map_err(|e| input.parse_err(e))?),
        _ => input.system(allow_loops)?,
    };
    let g = sys
        .dependency_graph(true)
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let method = if method == Method::Auto {
        auto_method(&g)
    } else {
        method
    };
    let precondition = |e: SolveError| CliError::Precondition {
        method: method_name(method),
        reason: e.to_string(),
    };
    let order = sys.variables();

    if method == Method::YabloLike {
        let induced = induced_andnot_system(&g);
        if let Some((v, _)) = sys
            .definitions()
            .find(|(v, f)| induced.formula(v).map(|g| g.simplify()) != Some(f.simplify()))
        {
            return Err(CliError::Precondition {
                method: "yablo-like",
                reason: format!("`{v}` does not denote the conjunction of its negated successors"),
            });
        }
        let verdict = yablo_like_check(&g).map_err(precondition)?;
        let (payload, summary, paradox) = match verdict {
            YabloLikeVerdict::ParadoxWitness(x) => (
                json!({
                    "status": "paradoxical",
                    "method": "yablo-like",
                    "valuation": null,
                    "witness": x.as_str(),
                    "stats": document::stats_json(&SolveStats::default()),
                }),
                format!("paradoxical (yablo-like): every successor of `{x}` has a successor"),
                true,
            ),
            YabloLikeVerdict::SafeValuation(v) => (
                json!({
                    "status": "acceptable",
                    "method": "yablo-like",
                    "valuation": document::valuation_json(&order, &v),
                    "witness": null,
                    "stats": document::stats_json(&SolveStats::default()),
                }),
                "acceptable (yablo-like): true exactly at the sinks".to_string(),
                false,
            ),
        };
        return Ok((payload, summary, paradox));
    }

    let choice = move |_: &semdep::VarId| free_choice;
    let outcome = match method {
        Method::Brute => solve_brute(&sys),
        Method::Topo => solve_topological_with(&sys, &choice),
        Method::Simply => solve_simply_connected(&sys),
        Method::Chain => solve_chain_with(&sys, &choice),
        Method::Auto | Method::YabloLike => unreachable!("resolved above"),
    }
    .map_err(precondition)?;
    let mut payload = document::outcome_json(&order, &outcome);
    if let Some(v) = &outcome.valuation {
        let report = sys.check_acceptable(v).map_err(|e| CliError::Invalid(e.to_string()))?;
        payload["acceptability"] = json!({
            "acceptable": report.acceptable,
            "violations": report.violations.iter().map(|x| x.vertex.as_str()).collect::<Vec<_>>(),
        });
    }
    let summary = format!(
        "{} ({}): {} variables",
        document::status_tag(outcome.status),
        outcome.method.tag(),
        order.len()
    );
    Ok((payload, summary, !outcome.is_acceptable()))
}

fn generate(command: &Command) -> Result<Dispatched, CliError> {
    let Command::Generate {
        family,
        n,
        policy,
        spec,
        open_end,
        branching,
        depth,
        seed,
        max_depth,
        out,
        map_out,
    } = command
    else {
        unreachable!("called for generate only")
    };
    let need = |v: Option<usize>, name: &'static str| v.ok_or(CliError::MissingArg(name));
    let invalid = |e: semdep::GenError| CliError::Invalid(e.to_string());
    let tp = TruncationPolicy::from(*policy);
    let policy_name = policy
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    let (sys, params) = match family {
        Family::Yablo => {
            let n = need(*n, "n")?;
            (
                gen_yablo(n, tp).map_err(invalid)?,
                json!({ "n": n, "policy": policy_name }),
            )
        }
        Family::Ygprime => {
            let n = need(*n, "n")?;
            (
                gen_ygprime(n, tp).map_err(invalid)?,
                json!({ "n": n, "policy": policy_name }),
            )
        }
        Family::Ygpp => {
            let n = need(*n, "n")?;
            (gen_ygpp(n).map_err(invalid)?, json!({ "n": n }))
        }
        Family::OnlyNegative => {
            let n = need(*n, "n")?;
            (
                gen_only_negative(n, tp).map_err(invalid)?,
                json!({ "n": n, "policy": policy_name }),
            )
        }
        Family::Chain => {
            if spec.is_empty() {
                return Err(CliError::MissingArg("spec"));
            }
            let tags: Vec<&str> = spec.iter().map(|f| f.tag()).collect();
            (
                gen_chain(spec, *open_end).map_err(invalid)?,
                json!({ "spec": tags, "open_end": open_end }),
            )
        }
        Family::Tree => {
            let (b, d) = (need(*branching, "branching")?, need(*depth, "depth")?);
            (
                gen_tree_to_root(b, d).map_err(invalid)?,
                json!({ "branching": b, "depth": d }),
            )
        }
        Family::RandomSc => {
            let n = need(*n, "n")?;
            (
                gen_random_simply_connected(n, *seed, *max_depth).map_err(invalid)?,
                json!({ "n": n, "seed": seed, "max_depth": max_depth }),
            )
        }
    };
    if map_out.is_some() && *family != Family::Ygprime {
        return Err(CliError::Invalid("--map-out only applies to ygprime".into()));
    }
    let source = sys.to_source();
    write(out, &source)?;
    if let Some(path) = map_out {
        let map = yg_collapse_map(need(*n, "n")?).map_err(invalid)?;
        write(path, &formats::write_map(&map))?;
    }
    let g = sys
        .dependency_graph(true)
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let family_name = family
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    let payload = json!({
        "family": family_name,
        "params": params,
        "name": sys.name(),
        "vertices": sys.len(),
        "edges": g.edge_count(),
        "free_vars": sys.free_vars().len(),
        "map_written": map_out.is_some(),
    });
    let summary = format!(
        "{}: {} vertices, {} edges",
        sys.name().unwrap_or("system"),
        sys.len(),
        g.edge_count()
    );
    let key = format!("{family_name} {params}").into_bytes();
    Ok(("generate", vec![key], payload, summary, 0))
}
