//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 violation or condition fails, 2 usage or input
//! error, 3 inconclusive, 4 the two condition checkers disagree.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::condition::{check_condition, check_condition_bruteforce_bounded, max_tolerable_f, ConditionError, BRUTEFORCE_DEFAULT_BOUND};
use crate::engine::{
    parse_scenario, run_async, run_sync, search_violation, EngineError, SearchConfig, SearchOutcome, Termination,
};
use crate::graph::{generate, parse_fault_domain, parse_graph, serialize_graph, Digraph, FaultDomain, FaultModel, GraphError, GraphKind};
use crate::protocol::{ProtocolKind, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_ORACLE_DISAGREES: i32 = 4;

/// Default directory for JSON reports.
pub const REPORT_DIR_ENV: &str = "CPA_REPORT_DIR";

#[derive(Debug, Parser)]
#[command(name = "cpa", version, about = "Certified propagation: topology conditions, simulation and violation search")]
pub struct Cli {
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock time in the report (makes it non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Also write the JSON report here.
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the topology condition holds.
    Check {
        /// Graph file.
        graph: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        /// Cross-check with the partition enumerator.
        #[arg(long)]
        oracle: bool,
        /// Largest graph the partition enumerator accepts.
        #[arg(long, default_value_t = BRUTEFORCE_DEFAULT_BOUND)]
        oracle_bound: usize,
    },
    /// Largest f for which the f-local condition holds.
    Maxf {
        /// Graph file.
        graph: PathBuf,
    },
    /// Run a scenario file.
    Simulate {
        /// Scenario file.
        scenario: PathBuf,
        /// Write the event trace, one JSON object per line.
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
    },
    /// Exhaustively search for a scenario that breaks the protocol.
    Search {
        /// Graph file.
        graph: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum)]
        protocol: ProtocolArg,
        /// Maximum number of executions.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Only search fault sets up to this size.
        #[arg(long)]
        max_faults: Option<usize>,
        /// Rounds covered by scripted adversaries.
        #[arg(long, default_value_t = 3)]
        depth: u32,
        /// Refuse fault sets with more adversary assignments than this.
        #[arg(long, default_value_t = 1 << 20)]
        family_cap: u128,
        /// Value domain, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        values: Vec<u32>,
        /// Schedule seed for async-cpa.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write a violating scenario here, ready for `simulate`.
        #[arg(long, value_name = "PATH")]
        witness: Option<PathBuf>,
    },
    /// Generate a graph file.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Exactly one fault model; there is no default.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ModelArgs {
    /// f-local bound.
    #[arg(long)]
    pub f: Option<usize>,
    /// Fault-domain file: `{"sets": [[node, ...], ...]}`.
    #[arg(long, value_name = "PATH")]
    pub domain: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProtocolArg {
    Cpa,
    CpaP,
    CpaG,
    RadioBb,
    AsyncCpa,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Complete,
    Ring,
    Star,
    GridTorus,
    Random,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Graph {
        path: String,
        #[source]
        source: GraphError,
    },
    #[error(transparent)]
    Condition(#[from] ConditionError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Self-contained record of one command.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub summary: String,
    pub result: Json,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.summary);
        s.push_str(&format!("command: {}\n", self.command.join(" ")));
        for i in &self.inputs {
            s.push_str(&format!("input: {} sha256={}\n", i.path, i.sha256));
        }
        if let Some(seed) = self.seed {
            s.push_str(&format!("seed: {seed}\n"));
        }
        flatten("", &self.result, &mut s);
        s.push_str(&format!("exit_code: {}\n", self.exit_code));
        if let Some(ms) = self.elapsed_ms {
            s.push_str(&format!("elapsed_ms: {ms}\n"));
        }
        s
    }
}

/// `key.sub: value` lines; arrays of scalars stay inline.
fn flatten(prefix: &str, v: &Json, out: &mut String) {
    match v {
        Json::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Json::Array(items) if items.iter().any(|i| i.is_object() || i.is_array() && !is_scalar_list(i)) => {
            for (k, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{k}]"), v, out);
            }
        }
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

fn is_scalar_list(v: &Json) -> bool {
    v.as_array().is_some_and(|a| a.iter().all(|x| !x.is_object() && !x.is_array()))
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

struct Inputs(Vec<InputDigest>);

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.0.push(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(text.as_bytes()),
        });
        Ok(text)
    }

    fn graph(&mut self, path: &Path) -> Result<Digraph, CliError> {
        let text = self.read(path)?;
        parse_graph(&text).map_err(|source| CliError::Graph {
            path: path.display().to_string(),
            source,
        })
    }

    fn model(&mut self, g: &Digraph, args: &ModelArgs) -> Result<FaultModel, CliError> {
        match (args.f, &args.domain) {
            (Some(f), None) => Ok(FaultModel::f_local(f)),
            (None, Some(path)) => {
                let text = self.read(path)?;
                let domain = parse_fault_domain(&text, g.n()).map_err(|source| CliError::Graph {
                    path: path.display().to_string(),
                    source,
                })?;
                Ok(FaultModel::generalized(domain))
            }
            _ => Err(CliError::Usage("give exactly one of --f or --domain".into())),
        }
    }
}

fn model_label(model: &FaultModel) -> String {
    match model {
        FaultModel::FLocal { f } => format!("f-local f={f}"),
        FaultModel::Generalized { domain } => format!("fault domain with {} set(s)", domain.sets.len()),
    }
}

struct Outcome {
    summary: String,
    result: Json,
    exit_code: i32,
    seed: Option<u64>,
    /// Raw output that replaces the report on stdout (`gen` without `-o`).
    raw: Option<String>,
}

fn cmd_check(inputs: &mut Inputs, graph: &Path, model: &ModelArgs, oracle: bool, bound: usize) -> Result<Outcome, CliError> {
    let g = inputs.graph(graph)?;
    let model = inputs.model(&g, model)?;
    let report = check_condition(&g, &model)?;
    let mut summary = format!(
        "condition {} under {}",
        if report.holds { "holds" } else { "fails" },
        model_label(&model)
    );
    let mut exit_code = if report.holds { EXIT_OK } else { EXIT_FAIL };
    let mut result = json!({ "model": model, "report": report });
    if oracle {
        match check_condition_bruteforce_bounded(&g, &model, bound) {
            Ok(brute) => {
                let agrees = brute.holds == report.holds;
                result["oracle"] = json!({ "holds": brute.holds, "agrees": agrees });
                if agrees {
                    summary.push_str(" (oracle-confirmed)");
                } else {
                    summary = format!(
                        "CHECKERS DISAGREE: closure says {}, partition enumeration says {}",
                        report.holds, brute.holds
                    );
                    exit_code = EXIT_ORACLE_DISAGREES;
                }
            }
            Err(ConditionError::BoundExceeded { n, bound }) => {
                result["oracle"] = json!({ "refused": format!("{n} nodes exceeds the bound of {bound}") });
                summary.push_str(" (oracle refused: graph too large)");
                exit_code = EXIT_INCONCLUSIVE;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Outcome {
        summary,
        result,
        exit_code,
        seed: None,
        raw: None,
    })
}

fn cmd_maxf(inputs: &mut Inputs, graph: &Path) -> Result<Outcome, CliError> {
    let g = inputs.graph(graph)?;
    let m = max_tolerable_f(&g);
    let summary = if m.all_f {
        "tolerates every f: the source reaches all nodes directly".to_string()
    } else if m.f < 0 {
        "tolerates no f: some node is unreachable from the source".to_string()
    } else {
        format!("max tolerable f = {}", m.f)
    };
    Ok(Outcome {
        summary,
        result: json!({ "max_f": m }),
        exit_code: EXIT_OK,
        seed: None,
        raw: None,
    })
}

fn cmd_simulate(inputs: &mut Inputs, path: &Path, trace_out: Option<&Path>) -> Result<Outcome, CliError> {
    let text = inputs.read(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    // digest a referenced graph file too
    if let Ok(Json::Object(obj)) = serde_json::from_str::<Json>(&text) {
        if let Some(Json::String(g)) = obj.get("graph") {
            inputs.read(&base.join(g))?;
        }
    }
    let scn = parse_scenario(&text, base)?;
    let ex = if scn.protocol.is_async() { run_async(&scn)? } else { run_sync(&scn)? };
    let trace_text = ex.trace.to_text();
    if let Some(out) = trace_out {
        std::fs::write(out, &trace_text).map_err(|source| CliError::Io {
            path: out.display().to_string(),
            source,
        })?;
    }
    let v = &ex.verdict;
    let (exit_code, summary) = match (&v.termination, v.is_ok()) {
        (_, true) => (EXIT_OK, format!("{}: no violation", scn.protocol.name())),
        (Termination::EventCapReached { .. } | Termination::ScheduleExhausted { .. }, _)
            if !matches!(v.validity, crate::engine::Validity::Violated { .. })
                && !matches!(v.agreement, crate::engine::Agreement::Violated { .. }) =>
        {
            (EXIT_INCONCLUSIVE, format!("{}: run stopped before quiescence", scn.protocol.name()))
        }
        _ => (EXIT_FAIL, format!("{}: violation", scn.protocol.name())),
    };
    let commits: Vec<Json> = ex
        .trace
        .commits
        .iter()
        .enumerate()
        .filter_map(|(node, c)| c.map(|c| json!({ "node": node, "value": c.value, "round": c.round })))
        .collect();
    Ok(Outcome {
        summary,
        result: json!({
            "protocol": scn.protocol,
            "verdict": v,
            "halt": ex.trace.halt,
            "steps": ex.trace.steps,
            "commits": commits,
            "trace_sha256": sha256_hex(trace_text.as_bytes()),
        }),
        exit_code,
        seed: scn.protocol.is_async().then_some(scn.seed),
        raw: None,
    })
}

fn protocol_for(arg: ProtocolArg, g: &Digraph, model: &FaultModel) -> Result<ProtocolKind, CliError> {
    let need_f = |name: &str| match model {
        FaultModel::FLocal { f } => Ok(*f),
        FaultModel::Generalized { .. } => Err(CliError::Usage(format!("{name} needs --f, not --domain"))),
    };
    Ok(match arg {
        ProtocolArg::Cpa => ProtocolKind::Cpa { f: need_f("cpa")? },
        ProtocolArg::RadioBb => ProtocolKind::RadioBb { f: need_f("radio-bb")? },
        ProtocolArg::AsyncCpa => ProtocolKind::AsyncCpa { f: need_f("async-cpa")? },
        ProtocolArg::CpaP => ProtocolKind::CpaP,
        ProtocolArg::CpaG => ProtocolKind::CpaG {
            domain: match model {
                FaultModel::FLocal { f } => FaultDomain::cardinality(g.n(), *f),
                FaultModel::Generalized { domain } => domain.clone(),
            },
        },
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    inputs: &mut Inputs,
    graph: &Path,
    model: &ModelArgs,
    protocol: ProtocolArg,
    config: SearchConfig,
    witness: Option<&Path>,
) -> Result<Outcome, CliError> {
    let g = inputs.graph(graph)?;
    let model = inputs.model(&g, model)?;
    let protocol = protocol_for(protocol, &g, &model)?;
    let outcome = search_violation(&g, &model, &protocol, &config)?;
    let (exit_code, summary) = match &outcome {
        SearchOutcome::Violation { scenarios_run, .. } => {
            (EXIT_FAIL, format!("{}: violation found after {scenarios_run} execution(s)", protocol.name()))
        }
        SearchOutcome::NoViolation {
            scenarios_run,
            fault_sets_skipped,
            ..
        } => {
            let mut s = format!("{}: no violation in {scenarios_run} execution(s)", protocol.name());
            if *fault_sets_skipped > 0 {
                s.push_str(&format!("; {fault_sets_skipped} larger fault set(s) not searched"));
            }
            (EXIT_OK, s)
        }
        SearchOutcome::Inconclusive { reason, .. } => (EXIT_INCONCLUSIVE, format!("{}: inconclusive, {reason}", protocol.name())),
    };
    if let (Some(path), SearchOutcome::Violation { scenario, .. }) = (witness, &outcome) {
        let text = serde_json::to_string_pretty(scenario).expect("scenario serializes");
        std::fs::write(path, text + "\n").map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    let values: Vec<Value> = config.value_domain.clone();
    Ok(Outcome {
        summary,
        result: json!({
            "model": model,
            "protocol": protocol,
            "config": {
                "values": values,
                "depth": config.depth_bound,
                "max_faults": config.max_fault_size,
                "family_cap": config.family_cap.to_string(),
                "budget": config.budget,
            },
            "outcome": outcome,
        }),
        exit_code,
        seed: protocol.is_async().then_some(config.async_seed),
        raw: None,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    kind: GenKind,
    n: Option<usize>,
    p: Option<f64>,
    rows: Option<usize>,
    cols: Option<usize>,
    seed: u64,
    output: Option<&Path>,
) -> Result<Outcome, CliError> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::Usage(format!("{flag} is required for this kind")));
    let kind = match kind {
        GenKind::Complete => GraphKind::Complete { n: need(n, "--n")? },
        GenKind::Ring => GraphKind::Ring { n: need(n, "--n")? },
        GenKind::Star => GraphKind::Star { n: need(n, "--n")? },
        GenKind::GridTorus => GraphKind::GridTorus {
            rows: need(rows, "--rows")?,
            cols: need(cols, "--cols")?,
        },
        GenKind::Random => GraphKind::RandomDigraph {
            n: need(n, "--n")?,
            p: p.ok_or_else(|| CliError::Usage("--p is required for random".into()))?,
        },
    };
    let g = generate(kind.clone(), seed).map_err(|source| CliError::Graph {
        path: "<generated>".into(),
        source,
    })?;
    let text = serialize_graph(&g) + "\n";
    let result = json!({
        "kind": kind,
        "n": g.n(),
        "edges": g.edge_count(),
        "sha256": sha256_hex(text.as_bytes()),
    });
    let summary = format!("generated {} nodes, {} edges", g.n(), g.edge_count());
    match output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            Ok(Outcome {
                summary: format!("{summary} -> {}", path.display()),
                result,
                exit_code: EXIT_OK,
                seed: Some(seed),
                raw: None,
            })
        }
        None => Ok(Outcome {
            summary,
            result,
            exit_code: EXIT_OK,
            seed: Some(seed),
            raw: Some(text),
        }),
    }
}

fn dispatch(cli: &Cli, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Check {
            graph,
            model,
            oracle,
            oracle_bound,
        } => cmd_check(inputs, graph, model, *oracle, *oracle_bound),
        Command::Maxf { graph } => cmd_maxf(inputs, graph),
        Command::Simulate { scenario, trace } => cmd_simulate(inputs, scenario, trace.as_deref()),
        Command::Search {
            graph,
            model,
            protocol,
            budget,
            max_faults,
            depth,
            family_cap,
            values,
            seed,
            witness,
        } => {
            if values.is_empty() {
                return Err(CliError::Usage("--values must not be empty".into()));
            }
            let config = SearchConfig {
                value_domain: values.iter().map(|v| Value::Data(*v)).collect(),
                depth_bound: *depth,
                max_fault_size: *max_faults,
                family_cap: *family_cap,
                budget: *budget,
                async_seed: *seed,
                max_rounds: None,
            };
            cmd_search(inputs, graph, model, *protocol, config, witness.as_deref())
        }
        Command::Gen {
            kind,
            n,
            p,
            rows,
            cols,
            seed,
            output,
        } => cmd_gen(*kind, *n, *p, *rows, *cols, *seed, output.as_deref()),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Maxf { .. } => "maxf",
        Command::Simulate { .. } => "simulate",
        Command::Search { .. } => "search",
        Command::Gen { .. } => "gen",
    }
}

/// Runs one command. `args` excludes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("cpa".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let start = Instant::now();
    let mut inputs = Inputs(Vec::new());
    let outcome = match dispatch(&cli, &mut inputs) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let report = RunReport {
        command: std::iter::once("cpa".to_string()).chain(args).collect(),
        inputs: inputs.0,
        seed: outcome.seed,
        summary: outcome.summary,
        result: outcome.result,
        exit_code: outcome.exit_code,
        elapsed_ms: cli.timing.then(|| start.elapsed().as_millis()),
    };
    let json_text = report.to_json() + "\n";
    let printed = match (&outcome.raw, cli.json) {
        (Some(raw), _) => out.write_all(raw.as_bytes()),
        (None, true) => out.write_all(json_text.as_bytes()),
        (None, false) => out.write_all(report.to_text().as_bytes()),
    };
    if let Err(e) = printed {
        let _ = writeln!(err, "error: writing output: {e}");
        return EXIT_USAGE;
    }
    let report_path = cli.report.clone().or_else(|| {
        std::env::var_os(REPORT_DIR_ENV).map(|dir| {
            let digest = sha256_hex(report.command.join("\0").as_bytes());
            PathBuf::from(dir).join(format!("{}-{}.json", command_name(&cli.command), &digest[..12]))
        })
    });
    if let Some(path) = report_path {
        if let Err(e) = std::fs::write(&path, &json_text) {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    report.exit_code
}
