//! `ban` — command-line analysis of Boolean automata networks.
//!
//! Exit codes: 0 on success, 1 when a flagged analysis finding fires
//! (`monotone --strict`, `lint --forbid`), 2 on input or limit errors.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ban_core::{audit, dynamics, perspective};
use ban_core::{BitOrder, GraphOptions, Network, Schedule, UpdateMode};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "ban", version, about = "Boolean automata network workbench")]
struct Cli {
    /// Truth-table limit for symbolic analyses (essential variables, signs,
    /// simplification).
    #[arg(long, global = true, default_value_t = ban_core::DEFAULT_MAX_SUPPORT)]
    max_support: usize,

    /// State-count limit (log2) for exhaustive enumerations.
    #[arg(long, global = true, default_value_t = ban_core::DEFAULT_MAX_EXHAUSTIVE)]
    max_exhaustive: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export the signed interaction digraph.
    Graph {
        #[arg(long)]
        net: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
    },
    /// Classify the network as monotone or not, with a witness.
    Monotone {
        #[arg(long)]
        net: PathBuf,
        /// Exit with status 1 when the network is not monotone.
        #[arg(long)]
        strict: bool,
    },
    /// Run a schedule from an initial state and print the trajectory.
    Simulate {
        #[arg(long)]
        net: PathBuf,
        /// Initial state as a coordinate-1-first bit-string, e.g. 110001.
        #[arg(long)]
        x0: String,
        /// Schedule text, e.g. "3,2,4,1*" or "{1,2},{3}".
        #[arg(long)]
        sched: String,
        /// Block applications to run; defaults to one pass of the schedule.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Export the exhaustive transition graph.
    Transitions {
        #[arg(long)]
        net: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Schedule text (required with --mode schedule).
        #[arg(long)]
        sched: Option<String>,
        #[arg(long, value_enum, default_value_t = TransFormat::Dot)]
        format: TransFormat,
        /// Add self-loops on stable states in asynchronous graphs.
        #[arg(long)]
        self_loops: bool,
        /// DOT node label order.
        #[arg(long, value_enum, default_value_t = LabelOrder::MsbFirst)]
        label_order: LabelOrder,
    },
    /// List attractors under a mode.
    Attractors {
        #[arg(long)]
        net: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        sched: Option<String>,
    },
    /// Derive the observed network under an observation spec and verify it.
    Project {
        #[arg(long)]
        net: PathBuf,
        /// Observation spec file, e.g. `hidden=4; rhythm=1,4; micro=4,1;
        /// propagate=off`.
        #[arg(long)]
        spec: PathBuf,
    },
    /// Synchronism consistency report and schedule census.
    Audit {
        #[arg(long)]
        net: PathBuf,
        /// Also list conflicting pairs with witness states.
        #[arg(long)]
        witnesses: bool,
        /// Classify this schedule against the network.
        #[arg(long)]
        sched: Option<String>,
        /// Emit one JSON document instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Report which connectors each local function uses.
    Lint {
        #[arg(long)]
        net: PathBuf,
        /// Comma-separated connectors to forbid, from ! & ^ | const.
        #[arg(long)]
        forbid: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Jsonl,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransFormat {
    Dot,
    Jsonl,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Parallel,
    Async,
    Schedule,
}

#[derive(Clone, Copy, ValueEnum)]
enum LabelOrder {
    MsbFirst,
    Coord1First,
}

impl From<LabelOrder> for BitOrder {
    fn from(order: LabelOrder) -> BitOrder {
        match order {
            LabelOrder::MsbFirst => BitOrder::MsbFirst,
            LabelOrder::Coord1First => BitOrder::Coord1First,
        }
    }
}

fn main() -> ExitCode {
    // Dying quietly on a closed pipe beats a panic trace under `head`.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Limit errors name the flag that raises them.
fn explain(e: ban_core::Error) -> String {
    match &e {
        ban_core::Error::SupportTooLarge { .. } => format!("{e} (raise --max-support)"),
        ban_core::Error::TooManyStates { .. } => format!("{e} (raise --max-exhaustive)"),
        _ => e.to_string(),
    }
}

fn load_network(path: &Path) -> Result<Network, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Network::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_schedule(text: &str) -> Result<Schedule, String> {
    text.parse().map_err(|e| format!("schedule: {e}"))
}

fn resolve_mode(mode: ModeArg, sched: Option<&str>) -> Result<UpdateMode, String> {
    match mode {
        ModeArg::Parallel => Ok(UpdateMode::Parallel),
        ModeArg::Async => Ok(UpdateMode::Asynchronous),
        ModeArg::Schedule => {
            let text = sched.ok_or("--mode schedule requires --sched")?;
            Ok(UpdateMode::Scheduled(parse_schedule(text)?))
        }
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    let max_support = cli.max_support;
    let max_exhaustive = cli.max_exhaustive;
    match cli.command {
        Command::Graph { net, format } => {
            let net = load_network(&net)?;
            let digraph = net
                .interaction_digraph_with_limit(max_support)
                .map_err(explain)?;
            match format {
                GraphFormat::Dot => print!("{}", digraph.to_dot()),
                GraphFormat::Text => {
                    for arc in &digraph.arcs {
                        println!("{} -> {} [{}]", arc.source, arc.target, arc.sign.symbol());
                    }
                }
                GraphFormat::Jsonl => {
                    let stdout = std::io::stdout();
                    let mut out = stdout.lock();
                    for arc in &digraph.arcs {
                        let line = serde_json_line(arc)?;
                        writeln!(out, "{line}").map_err(|e| e.to_string())?;
                    }
                }
            }
            Ok(false)
        }
        Command::Monotone { net, strict } => {
            let net = load_network(&net)?;
            let report = net.is_monotone_with_limit(max_support).map_err(explain)?;
            if report.monotone {
                println!("monotone");
                Ok(false)
            } else {
                let w = report.witness.expect("non-monotone comes with a witness");
                println!("non-monotone");
                println!("witness arc: {} -> {}", w.source, w.target);
                println!("raises at: {}", w.raises_at);
                println!("lowers at: {}", w.lowers_at);
                Ok(strict)
            }
        }
        Command::Simulate {
            net,
            x0,
            sched,
            steps,
        } => {
            let net = load_network(&net)?;
            let x0 = net.state_from_str(&x0).map_err(|e| format!("--x0: {e}"))?;
            let sched = parse_schedule(&sched)?;
            let steps = match steps {
                Some(steps) => steps,
                None if sched.is_periodic() => {
                    return Err("a periodic schedule needs an explicit --steps".into())
                }
                None => sched.len(),
            };
            let trajectory = dynamics::run_schedule(&net, &x0, &sched, steps).map_err(explain)?;
            for state in trajectory {
                println!("{state}");
            }
            Ok(false)
        }
        Command::Transitions {
            net,
            mode,
            sched,
            format,
            self_loops,
            label_order,
        } => {
            let net = load_network(&net)?;
            let mode = resolve_mode(mode, sched.as_deref())?;
            let options = GraphOptions {
                self_loops,
                max_states: max_exhaustive,
            };
            let graph = dynamics::transition_graph_with(&net, mode, &options).map_err(explain)?;
            match format {
                TransFormat::Dot => print!("{}", graph.to_dot(label_order.into())),
                TransFormat::Jsonl => {
                    let stdout = std::io::stdout();
                    let mut out = stdout.lock();
                    graph.write_jsonl(&mut out).map_err(|e| e.to_string())?;
                }
            }
            Ok(false)
        }
        Command::Attractors { net, mode, sched } => {
            let net = load_network(&net)?;
            let mode = resolve_mode(mode, sched.as_deref())?;
            let options = GraphOptions {
                self_loops: false,
                max_states: max_exhaustive,
            };
            let attractors = dynamics::attractors_with(&net, mode, &options).map_err(explain)?;
            for (k, attractor) in attractors.iter().enumerate() {
                match attractor.kind {
                    ban_core::AttractorKind::FixedPoint => {
                        println!("attractor {}: fixed point", k + 1)
                    }
                    ban_core::AttractorKind::Cycle => println!(
                        "attractor {}: cycle (length {})",
                        k + 1,
                        attractor.states.len()
                    ),
                    ban_core::AttractorKind::Complex => println!(
                        "attractor {}: complex ({} states)",
                        k + 1,
                        attractor.states.len()
                    ),
                }
                for state in &attractor.states {
                    println!("  {state}");
                }
            }
            Ok(false)
        }
        Command::Project { net, spec } => {
            let net = load_network(&net)?;
            let text =
                std::fs::read_to_string(&spec).map_err(|e| format!("{}: {e}", spec.display()))?;
            let spec: perspective::ObservationSpec = text
                .trim()
                .parse()
                .map_err(|e| format!("observation spec: {e}"))?;
            let projection =
                perspective::project_with_limit(&net, &spec, max_support).map_err(explain)?;
            let report = if net.n() <= max_exhaustive {
                Some(
                    perspective::verify_projection_with_limit(
                        &net,
                        &spec,
                        &projection,
                        max_exhaustive,
                    )
                    .map_err(explain)?,
                )
            } else {
                None
            };
            print!(
                "{}",
                perspective::render_projection(&projection, report.as_ref())
            );
            if report.is_none() {
                println!(
                    "# verification skipped: {} automata exceed --max-exhaustive {}",
                    net.n(),
                    max_exhaustive
                );
            }
            Ok(false)
        }
        Command::Audit {
            net,
            witnesses,
            sched,
            json,
        } => {
            let net = load_network(&net)?;
            let report = audit::sync_conflicts_with_limit(&net, max_exhaustive).map_err(explain)?;
            let census = audit::schedule_census(net.n() as u32);
            let classified = match &sched {
                Some(text) => {
                    let sched = parse_schedule(text)?;
                    Some((
                        sched.to_string(),
                        audit::classify_schedule_with_limit(&sched, &net, max_exhaustive)
                            .map_err(explain)?,
                    ))
                }
                None => None,
            };
            if json {
                let mut doc = report.to_json();
                doc["n"] = (net.n() as u64).into();
                doc["census"] = census.to_string().into();
                if let Some((text, audit)) = &classified {
                    doc["schedule"] = text.as_str().into();
                    doc["class"] = audit.class.to_string().into();
                    doc["hazard"] = hazard_json(&audit.hazard);
                }
                println!("{doc}");
                return Ok(false);
            }
            print!("{report}");
            if witnesses {
                for ((i, j), state) in &report.witnesses {
                    println!("pair {{{i},{j}}}: witness {state}");
                }
            }
            println!("schedule census (n={}): {census}", net.n());
            if let Some((text, audit)) = classified {
                match audit.hazard {
                    audit::SyncHazard::Found { block, pair, state } => println!(
                        "schedule {text}: {}; block {} jointly updates {},{} unstable at {state}",
                        audit.class,
                        block + 1,
                        pair.0,
                        pair.1
                    ),
                    audit::SyncHazard::NoneFound => println!(
                        "schedule {text}: {}; no synchronous instability exercised",
                        audit.class
                    ),
                    audit::SyncHazard::NotEvaluated => println!(
                        "schedule {text}: {}; instability check skipped (state space too large)",
                        audit.class
                    ),
                }
            }
            Ok(false)
        }
        Command::Lint { net, forbid } => {
            let net = load_network(&net)?;
            let mut findings = false;
            for (id, f) in net.functions() {
                println!("{id}: {}", usage_line(&f.connectors()));
            }
            println!("network: {}", usage_line(&net.connectors()));
            if let Some(forbidden) = forbid {
                let usage = net.connectors();
                for symbol in forbidden
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                {
                    let used = match symbol {
                        "!" => usage.not,
                        "&" => usage.and,
                        "^" => usage.xor,
                        "|" => usage.or,
                        "const" => usage.constants,
                        other => return Err(format!("unknown connector `{other}`")),
                    };
                    if used {
                        let offenders: Vec<String> = net
                            .functions()
                            .filter(|(_, f)| {
                                let u = f.connectors();
                                match symbol {
                                    "!" => u.not,
                                    "&" => u.and,
                                    "^" => u.xor,
                                    "|" => u.or,
                                    _ => u.constants,
                                }
                            })
                            .map(|(id, _)| id.to_string())
                            .collect();
                        println!(
                            "forbidden connector {symbol} used by automata {}",
                            offenders.join(",")
                        );
                        findings = true;
                    }
                }
            }
            Ok(findings)
        }
    }
}

fn usage_line(usage: &ban_core::ConnectorUsage) -> String {
    let mut parts = usage.symbols();
    if usage.constants {
        parts.push("const");
    }
    if parts.is_empty() {
        "-".to_string()
    } else {
        parts.join(" ")
    }
}

fn hazard_json(hazard: &audit::SyncHazard) -> serde_json::Value {
    match hazard {
        audit::SyncHazard::NotEvaluated => "not-evaluated".into(),
        audit::SyncHazard::NoneFound => "none".into(),
        audit::SyncHazard::Found { block, pair, state } => {
            let mut text = String::new();
            let _ = write!(
                text,
                "block {} pair {},{} at {state}",
                block + 1,
                pair.0,
                pair.1
            );
            text.into()
        }
    }
}

fn serde_json_line<T: serde::Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}
