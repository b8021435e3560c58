//! Command-line front end. All results go to standard output as JSON; the
//! optional human-readable summary goes to standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::constructions::{build_tinf_approx, build_tn_with, tent};
use crate::error::{Error, Result};
use crate::forcing::{
    cover_graph, even_period_witness, lemma1_witnesses, orbit_context_with_budget,
    unified_witnesses, verify_tail_property, CoverGraph,
};
use crate::laps::{iterate_laps, DEFAULT_PIECE_BUDGET};
use crate::orbits::{enumerate_from_laps, IdentityCache, Orbit, OrbitSelection};
use crate::order::{precedes, tail};
use crate::plmap::PLMap;
use crate::rational::Rational;
use crate::report::{BudgetUsage, ErrorBody, ErrorReport, Report};

pub const BUDGET_ENV: &str = "IDL_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "idl",
    version,
    about = "Exact periodic-orbit analysis of piecewise-linear interval maps"
)]
struct Cli {
    /// Print a human-readable summary to standard error.
    #[arg(long, short, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct BudgetArg {
    /// Maximum number of laps of any iterate (default: $IDL_BUDGET or 2000000).
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Period set up to a bound and the Sharkovsky tail verdict.
    Analyze {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        max_period: u64,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// All orbits of one least period.
    Orbits {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        period: u64,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Forced-period witnesses of an orbit.
    Witnesses(WitnessArgs),
    /// Witnesses and covering graphs.
    Force {
        #[command(subcommand)]
        command: ForceCommand,
    },
    /// The Sharkovsky ordering.
    Order {
        #[command(subcommand)]
        command: OrderCommand,
    },
    /// Explicit maps.
    Construct {
        #[command(subcommand)]
        command: ConstructCommand,
    },
    /// Covering graph of an orbit.
    Graph(GraphArgs),
}

#[derive(Debug, Args)]
struct WitnessArgs {
    #[arg(long)]
    map: PathBuf,
    /// Comma-separated canonical rationals, e.g. "2/7,4/7,6/7".
    #[arg(long)]
    orbit: String,
    /// Largest index of the witness families.
    #[arg(long, default_value_t = 6)]
    max: u64,
    #[command(flatten)]
    budget: BudgetArg,
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// Comma-separated orbit points; the successor is read off the map.
    #[arg(
        long,
        conflicts_with = "orbit_pattern",
        required_unless_present = "orbit_pattern"
    )]
    orbit: Option<String>,
    /// Map the orbit belongs to (default: the tent map).
    #[arg(long, requires = "orbit")]
    map: Option<PathBuf>,
    /// Cyclic pattern such as "1>2,2>3,3>1".
    #[arg(long)]
    orbit_pattern: Option<String>,
}

#[derive(Debug, Subcommand)]
enum ForceCommand {
    Witnesses(WitnessArgs),
    Graph(GraphArgs),
}

#[derive(Debug, Subcommand)]
enum OrderCommand {
    /// Whether m precedes n.
    Compare { m: u64, n: u64 },
    /// Periods forced by n, up to a bound.
    Tail {
        n: u64,
        #[arg(long)]
        bound: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Selection {
    SmallestMax,
    LargestMin,
}

#[derive(Debug, Subcommand)]
enum ConstructCommand {
    Tent,
    /// Truncated tent map with exactly the periods forced by n.
    Tn {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Selection::SmallestMax)]
        select: Selection,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Depth-limited approximant of the map with only power-of-two periods.
    Tinf {
        #[arg(long)]
        depth: u32,
        #[command(flatten)]
        budget: BudgetArg,
    },
}

enum Output {
    Report(Report),
    Bare(Value),
}

fn resolve_budget(arg: &BudgetArg) -> Result<usize> {
    if let Some(b) = arg.budget {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| Error::Parse {
            position: BUDGET_ENV.into(),
            message: format!("{text:?} is not a positive integer"),
        }),
        Err(_) => Ok(DEFAULT_PIECE_BUDGET),
    }
}

fn load_map(path: &PathBuf) -> Result<PLMap> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        position: path.display().to_string(),
        message: e.to_string(),
    })?;
    PLMap::from_json(&text).map_err(|e| match e {
        Error::Parse { position, message } => Error::Parse {
            position: format!("{}: {position}", path.display()),
            message,
        },
        other => other,
    })
}

fn parse_points(list: &str) -> Result<Vec<Rational>> {
    list.split(',')
        .enumerate()
        .map(|(i, s)| {
            s.trim().parse::<Rational>().map_err(|e| Error::Parse {
                position: format!("orbit entry {i}"),
                message: e.to_string(),
            })
        })
        .collect()
}

fn orbit_json(o: &Orbit) -> Value {
    json!({ "period": o.period(), "points": o.points(), "successor": o.successor() })
}

fn report(
    command: &str,
    inputs: Value,
    results: Value,
    limit: usize,
    laps_used: Option<usize>,
) -> Output {
    Output::Report(Report {
        command: command.into(),
        inputs,
        results,
        budget: BudgetUsage { limit, laps_used },
    })
}

fn graph_json(g: &CoverGraph) -> Value {
    json!({
        "intervals": g.intervals,
        "adjacency": g.edges,
    })
}

fn run_graph(args: &GraphArgs) -> Result<(Output, String)> {
    let (graph, inputs) = match (&args.orbit_pattern, &args.orbit) {
        (Some(pattern), _) => (
            CoverGraph::from_pattern(pattern)?,
            json!({ "orbit_pattern": pattern }),
        ),
        (None, Some(list)) => {
            let map = match &args.map {
                Some(path) => load_map(path)?,
                None => tent(),
            };
            let orbit = Orbit::from_points(&map, parse_points(list)?)?;
            (
                cover_graph(&orbit),
                json!({ "orbit": list, "map": args.map }),
            )
        }
        (None, None) => unreachable!("clap requires one of --orbit and --orbit-pattern"),
    };
    let summary = format!(
        "cover graph on {} intervals: {:?}",
        graph.len(),
        graph.edges
    );
    Ok((
        report("graph", inputs, graph_json(&graph), 0, None),
        summary,
    ))
}

fn run_witnesses(args: &WitnessArgs) -> Result<(Output, String)> {
    let budget = resolve_budget(&args.budget)?;
    let map = load_map(&args.map)?;
    let orbit = Orbit::from_points(&map, parse_points(&args.orbit)?)?;
    let m = orbit.period() as u64;
    let context = orbit_context_with_budget(&map, &orbit, budget)?;
    let graph = cover_graph(&orbit);
    let mut results = json!({
        "orbit": orbit_json(&orbit),
        "context": context,
        "cover_graph": graph_json(&graph),
    });
    let mut summary = format!(
        "orbit of period {m}: b = {}, v = {}, z0 = {}",
        context.b, context.v, context.z0
    );
    if m % 2 == 1 {
        let unified = unified_witnesses(&map, &orbit, args.max, budget)?;
        let even: Vec<_> = (0..=args.max)
            .map(|n| even_period_witness(&map, &orbit, n, budget))
            .collect::<Result<_>>()?;
        // on f², v is pushed past z after (m+1)/2 steps
        let square = iterate_laps(&map, 2, budget)?.as_map().clone();
        let lemma = lemma1_witnesses(
            &square,
            &context.v,
            &context.z,
            m.div_ceil(2),
            args.max,
            budget,
        )?;
        results["unified"] = json!({
            "y": unified.y,
            "p_m2": { "period": m + 2, "point": unified.p_m2 },
            "c": unified.c.iter().map(|(n, x)| json!({ "n": n, "period": 2 * n, "point": x })).collect::<Vec<_>>(),
        });
        results["even_period"] = serde_json::to_value(&even).expect("serializable");
        results["lemma1_on_square"] = serde_json::to_value(&lemma).expect("serializable");
        summary.push_str(&format!(
            "; period-2 point {}, period-{} point {}, {} even-period witnesses",
            unified.y,
            m + 2,
            unified.p_m2,
            even.len()
        ));
    }
    let inputs = json!({ "map": args.map, "orbit": args.orbit, "max": args.max });
    Ok((report("witnesses", inputs, results, budget, None), summary))
}

fn dispatch(cli: &Cli) -> Result<(Output, String)> {
    match &cli.command {
        Command::Analyze {
            map: path,
            max_period,
            budget,
        } => {
            let budget = resolve_budget(budget)?;
            let map = load_map(path)?;
            let r = verify_tail_property(&map, *max_period, budget)?;
            let summary = format!(
                "periods <= {max_period}: {:?}, tail: {}",
                r.periods, r.is_tail
            );
            let inputs = json!({ "map": path, "max_period": max_period });
            let results = json!({ "periods": r.periods, "is_tail": r.is_tail });
            Ok((
                report("analyze", inputs, results, budget, Some(r.peak_laps)),
                summary,
            ))
        }
        Command::Orbits {
            map: path,
            period,
            budget,
        } => {
            let budget = resolve_budget(budget)?;
            let map = load_map(path)?;
            let laps = iterate_laps(&map, *period, budget)?;
            let orbits = enumerate_from_laps(&map, &laps, &mut IdentityCache::new(&map, budget))?;
            let summary = format!("{} orbits of least period {period}", orbits.len());
            let inputs = json!({ "map": path, "period": period });
            let results = json!({ "orbits": orbits.iter().map(orbit_json).collect::<Vec<_>>() });
            Ok((
                report("orbits", inputs, results, budget, Some(laps.lap_count())),
                summary,
            ))
        }
        Command::Witnesses(args)
        | Command::Force {
            command: ForceCommand::Witnesses(args),
        } => run_witnesses(args),
        Command::Graph(args)
        | Command::Force {
            command: ForceCommand::Graph(args),
        } => run_graph(args),
        Command::Order {
            command: OrderCommand::Compare { m, n },
        } => {
            if *m == 0 || *n == 0 {
                return Err(Error::PreconditionViolated(
                    "periods must be positive".into(),
                ));
            }
            let p = precedes(*m, *n);
            Ok((
                Output::Bare(json!({ "precedes": p })),
                format!("{m} {} {n}", if p { "≺" } else { "⊀" }),
            ))
        }
        Command::Order {
            command: OrderCommand::Tail { n, bound },
        } => {
            if *n == 0 || *bound == 0 {
                return Err(Error::PreconditionViolated(
                    "n and bound must be positive".into(),
                ));
            }
            let t = tail(*n, *bound);
            let summary = format!("{} periods forced by {n} up to {bound}", t.len());
            Ok((Output::Bare(json!(t)), summary))
        }
        Command::Construct { command } => construct(command),
    }
}

fn construct(command: &ConstructCommand) -> Result<(Output, String)> {
    match command {
        ConstructCommand::Tent => {
            let map = tent();
            let results = json!({ "map": map.to_file(), "provenance": { "kind": "tent" } });
            Ok((
                report("construct tent", json!({}), results, 0, None),
                "tent map on [0, 1]".into(),
            ))
        }
        ConstructCommand::Tn { n, select, budget } => {
            if *n == 0 {
                return Err(Error::PreconditionViolated("n must be positive".into()));
            }
            let budget = resolve_budget(budget)?;
            let selection = match select {
                Selection::SmallestMax => OrbitSelection::SmallestMax,
                Selection::LargestMin => OrbitSelection::LargestMin,
            };
            let t = build_tn_with(*n, selection, budget)?;
            let summary = format!("T_{n}: tent clamped to [{}, {}]", t.band.0, t.band.1);
            let results = json!({
                "map": t.map.to_file(),
                "provenance": { "kind": "truncated-tent", "orbit": orbit_json(&t.orbit), "band": t.band, "selection": selection },
            });
            Ok((
                report("construct tn", json!({ "n": n }), results, budget, None),
                summary,
            ))
        }
        ConstructCommand::Tinf { depth, budget } => {
            let budget = resolve_budget(budget)?;
            let a = build_tinf_approx(*depth, budget)?;
            let summary = format!("T_inf approximant at depth {depth}: [{}, {}]", a.q0, a.q1);
            let results = json!({
                "map": a.map.to_file(),
                "provenance": {
                    "kind": "tinf-approximant",
                    "q0": a.q0,
                    "q1": a.q1,
                    "chain": a.chain.iter().map(orbit_json).collect::<Vec<_>>(),
                },
            });
            Ok((
                report(
                    "construct tinf",
                    json!({ "depth": depth }),
                    results,
                    budget,
                    None,
                ),
                summary,
            ))
        }
    }
}

fn command_name(cli: &Cli) -> &'static str {
    match &cli.command {
        Command::Analyze { .. } => "analyze",
        Command::Orbits { .. } => "orbits",
        Command::Witnesses(_)
        | Command::Force {
            command: ForceCommand::Witnesses(_),
        } => "witnesses",
        Command::Graph(_)
        | Command::Force {
            command: ForceCommand::Graph(_),
        } => "graph",
        Command::Order { .. } => "order",
        Command::Construct { .. } => "construct",
    }
}

fn error_class(e: &Error) -> &'static str {
    match e {
        Error::Domain { .. } => "domain",
        Error::BudgetExceeded { .. } => "budget-exceeded",
        Error::IdentitySegment { .. } => "identity-segment",
        Error::NotPeriodic { .. } => "not-periodic",
        Error::NoSuchOrbit { .. } => "no-such-orbit",
        Error::MalformedOrbit(_) => "malformed-orbit",
        Error::NotACycle { .. } => "not-a-cycle",
        Error::CoverageFailure { .. } => "coverage-failure",
        Error::WitnessNotFound(_) => "witness-not-found",
        Error::PreconditionViolated(_) => "precondition-violated",
        Error::NotFixed(_) => "not-fixed",
        Error::ContinuityError { .. } => "continuity",
        Error::InvalidMap(_) => "invalid-map",
        Error::Parse { .. } => "parse",
    }
}

/// Runs one command. Returns the process exit status: 0 on success, 2 on
/// usage, parse and precondition errors, 3 when a lap budget is exhausted.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok((output, summary)) => {
            let text = match output {
                Output::Report(r) => r.to_json(),
                Output::Bare(v) => serde_json::to_string(&v).expect("json value"),
            };
            let _ = writeln!(stdout, "{text}");
            if cli.verbose {
                let _ = writeln!(stderr, "{summary}");
            }
            0
        }
        Err(e) => {
            let code = e.exit_code();
            let body = ErrorReport {
                command: command_name(&cli).into(),
                error: ErrorBody {
                    class: error_class(&e).into(),
                    message: e.to_string(),
                    exit_code: code,
                },
            };
            let _ = writeln!(
                stdout,
                "{}",
                serde_json::to_string_pretty(&body).expect("error report")
            );
            let _ = writeln!(stderr, "error: {e}");
            code
        }
    }
}
