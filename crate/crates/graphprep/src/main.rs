//! Command-line front end: analyze graphs, synthesize preparation
//! schedules, verify them, solve press games, and enumerate orbits.

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphprep::bits::BitVec;
use graphprep::planner::{self, Budgets, PlanRequest};
use graphprep::schedule::{MeasureOrder, Schedule};
use graphprep::verifier::{self, VerifyMode};
use graphprep::{locmin, sigma, Graph, GraphFormat};
use serde_json::json;
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "graphprep",
    about = "Graph-state preparation: analysis, scheduling, verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    EdgeList,
    Graph6,
}

#[derive(Args)]
struct InputArgs {
    /// Input path, or - for stdin.
    #[arg(long, default_value = "-")]
    input: String,
    /// Input graph format.
    #[arg(long, value_enum, default_value = "edge-list")]
    format: FormatArg,
}

#[derive(Args)]
struct OutputArgs {
    /// Output path, or - for stdout.
    #[arg(long, default_value = "-")]
    output: String,
    /// Human-readable summary instead of JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct BudgetArgs {
    /// Orbit enumeration budget (members); env GRAPHPREP_BUDGET overrides
    /// the default.
    #[arg(long)]
    orbit_budget: Option<usize>,
    /// Vertex limit for the exact minimal-degree search.
    #[arg(long, default_value_t = locmin::DEFAULT_EXACT_LIMIT)]
    delta_loc_limit: usize,
}

impl BudgetArgs {
    fn budgets(&self) -> Budgets {
        let env = std::env::var("GRAPHPREP_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok());
        Budgets {
            delta_loc_limit: self.delta_loc_limit,
            orbit_limit: self.orbit_budget.or(env).unwrap_or(200_000),
            ..Budgets::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Degree, coloring, and minimal-degree analysis of a graph.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Synthesize a preparation schedule for a cost measure.
    Plan {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Lexicographic cost order: one of snl, sln, lsn, lns, nsl, nls.
        #[arg(long)]
        measure: String,
        /// Restrict the schedule to projective measurements.
        #[arg(long)]
        measurements_only: bool,
        /// Search the local-complementation orbit for a cheaper equivalent
        /// graph before planning.
        #[arg(long)]
        lc_optimize: bool,
        /// Seed for the pre-emission verification pass.
        #[arg(long, default_value_t = 0xC0FFEE)]
        seed: u64,
    },
    /// Replay a schedule and certify it.
    Verify {
        /// Schedule JSON path, or - for stdin.
        #[arg(long, default_value = "-")]
        schedule: String,
        #[command(flatten)]
        output: OutputArgs,
        /// Branch mode: exhaustive or sampled.
        #[arg(long, default_value = "sampled")]
        mode: String,
        #[arg(long, default_value_t = 0xC0FFEE)]
        seed: u64,
        #[arg(long, default_value_t = verifier::DEFAULT_SAMPLE_COUNT)]
        samples: usize,
    },
    /// Solve a press game: reach a flip pattern on a vertex set by
    /// pressing only outside it.
    Sigma {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Comma-separated vertex set D.
        #[arg(long)]
        d_set: String,
        /// Comma-separated 0/1 flip pattern over D in ascending vertex order.
        #[arg(long)]
        target: String,
    },
    /// Enumerate the local-complementation orbit of a graph.
    Orbit {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Cap on the number of members listed (0 = all).
        #[arg(long, default_value_t = 0)]
        list_limit: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| e.to_string())?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn write_output(path: &str, text: &str) -> Result<(), String> {
    if path == "-" {
        println!("{text}");
        Ok(())
    } else {
        std::fs::write(path, format!("{text}\n")).map_err(|e| format!("{path}: {e}"))
    }
}

fn load_graph(args: &InputArgs) -> Result<Graph, String> {
    let text = read_input(&args.input)?;
    let format = match args.format {
        FormatArg::EdgeList => GraphFormat::EdgeList,
        FormatArg::Graph6 => GraphFormat::Graph6,
    };
    Graph::parse(&text, format).map_err(|e| e.to_string())
}

fn parse_vertex_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| format!("bad vertex {t:?}")))
        .collect()
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Analyze {
            input,
            output,
            budget,
        } => {
            let g = load_graph(&input)?;
            let budgets = budget.budgets();
            let report = analyze(&g, &budgets)?;
            let text = if output.pretty {
                pretty_analyze(&report)
            } else {
                report.to_string()
            };
            write_output(&output.output, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Plan {
            input,
            output,
            budget,
            measure,
            measurements_only,
            lc_optimize,
            seed,
        } => {
            let g = load_graph(&input)?;
            let measure = MeasureOrder::parse(&measure).ok_or_else(|| {
                format!("bad measure {measure:?}; use snl, sln, lsn, lns, nsl, or nls")
            })?;
            let req = PlanRequest {
                measure,
                allow_unitaries: !measurements_only,
                lc_optimize,
                budgets: budget.budgets(),
            };
            let schedule = planner::plan(&g, &req).map_err(|e| e.to_string())?;
            // never emit an unverified schedule
            let report = verifier::verify(
                &schedule,
                VerifyMode::Sampled {
                    seed,
                    count: verifier::DEFAULT_SAMPLE_COUNT,
                },
            )
            .map_err(|e| e.to_string())?;
            if !report.ok {
                return Err(format!(
                    "planned schedule failed verification: {}",
                    serde_json::to_string(&report.failures).unwrap()
                ));
            }
            let text = if output.pretty {
                pretty_schedule(&schedule)
            } else {
                schedule.to_json()
            };
            write_output(&output.output, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            schedule,
            output,
            mode,
            seed,
            samples,
        } => {
            let text = read_input(&schedule)?;
            let schedule = Schedule::from_json(&text).map_err(|e| e.to_string())?;
            let mode = match mode.as_str() {
                "exhaustive" => VerifyMode::Exhaustive,
                "sampled" => VerifyMode::Sampled {
                    seed,
                    count: samples,
                },
                other => return Err(format!("bad mode {other:?}; use exhaustive or sampled")),
            };
            let report = verifier::verify(&schedule, mode).map_err(|e| e.to_string())?;
            let ok = report.ok;
            let text = if output.pretty {
                format!(
                    "{}: {} branches checked ({}), metrics {:?}",
                    if ok { "OK" } else { "FAILED" },
                    report.branches_checked,
                    if report.exhaustive {
                        "exhaustive"
                    } else {
                        "sampled"
                    },
                    report.measured_metrics,
                )
            } else {
                serde_json::to_string(&report).unwrap()
            };
            write_output(&output.output, &text)?;
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Sigma {
            input,
            output,
            d_set,
            target,
        } => {
            let g = load_graph(&input)?;
            let d_verts = parse_vertex_list(&d_set)?;
            for &v in &d_verts {
                if v >= g.n() {
                    return Err(format!("vertex {v} out of range"));
                }
            }
            let d = BitVec::from_indices(g.n(), &d_verts);
            let bits = parse_vertex_list(&target)?;
            if bits.len() != d.count_ones() || bits.iter().any(|&b| b > 1) {
                return Err("target must list one 0/1 bit per D vertex".into());
            }
            let mut t = BitVec::zeros(bits.len());
            for (i, &b) in bits.iter().enumerate() {
                t.set(i, b == 1);
            }
            let result = sigma::solve_press_outside(&g, &d, &t).map_err(|e| e.to_string())?;
            let payload = match result {
                Some(r) => json!({
                    "status": "ok",
                    "press": r.ones(),
                    "reachable_all": sigma::reachable_all(&g, &d),
                }),
                None => json!({
                    "status": "unreachable",
                    "reachable_all": sigma::reachable_all(&g, &d),
                }),
            };
            let text = if output.pretty {
                if payload["status"] == "ok" {
                    format!("press vertices {}", payload["press"])
                } else {
                    "unreachable".to_string()
                }
            } else {
                payload.to_string()
            };
            write_output(&output.output, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Orbit {
            input,
            output,
            budget,
            list_limit,
        } => {
            let g = load_graph(&input)?;
            let budgets = budget.budgets();
            let orbit = locmin::lc_orbit_with_limit(&g, budgets.orbit_limit)
                .map_err(|e| e.to_string())?;
            let cap = if list_limit == 0 {
                orbit.len()
            } else {
                list_limit.min(orbit.len())
            };
            let members: Vec<serde_json::Value> = (0..cap)
                .map(|i| {
                    json!({
                        "graph6": orbit.member(i).to_graph6(),
                        "path": orbit.path_to(i),
                    })
                })
                .collect();
            let payload = json!({ "size": orbit.len(), "members": members });
            let text = if output.pretty {
                format!("orbit size {}", orbit.len())
            } else {
                payload.to_string()
            };
            write_output(&output.output, &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn analyze(g: &Graph, budgets: &Budgets) -> Result<serde_json::Value, String> {
    let n = g.n();
    let m = g.edge_count();
    let exact = m <= budgets.exact_coloring_limit;
    let coloring =
        graphprep::graph::edge_coloring_with_limit(g, exact, budgets.exact_coloring_limit)
            .map_err(|e| e.to_string())?;
    let dl =
        locmin::delta_loc_with_limit(g, budgets.delta_loc_limit).map_err(|e| e.to_string())?;
    let rank_bound = locmin::delta_loc_rank_bound(g);
    let adjacency_rank = {
        use graphprep::gf2::Gf2Matrix;
        let rows: Vec<BitVec> = (0..n).map(|v| g.neighbors(v).clone()).collect();
        Gf2Matrix::from_rows(rows, n).rank()
    };
    Ok(json!({
        "n": n,
        "m": m,
        "min_degree": g.min_degree(),
        "max_degree": g.max_degree(),
        "chi_prime": { "value": coloring.num_colors, "exact": exact },
        "delta_loc": {
            "value": dl.value,
            "witness_k": dl.witness.k_set().ones(),
            "witness_d": dl.witness.d_set().ones(),
            "reduction": dl.reduction,
        },
        "adjacency_rank": adjacency_rank,
        "rank_bound": rank_bound,
        "rank_bound_holds": dl.value <= rank_bound,
    }))
}

fn pretty_analyze(report: &serde_json::Value) -> String {
    format!(
        "n = {}, m = {}\nmin degree {} / max degree {}\nedge chromatic number {} ({})\nminimal degree under local complementation: {} (witness K = {})\nadjacency rank {} (bound {})",
        report["n"],
        report["m"],
        report["min_degree"],
        report["max_degree"],
        report["chi_prime"]["value"],
        if report["chi_prime"]["exact"].as_bool().unwrap_or(false) {
            "exact"
        } else {
            "greedy bound"
        },
        report["delta_loc"]["value"],
        report["delta_loc"]["witness_k"],
        report["adjacency_rank"],
        report["rank_bound"],
    )
}

fn pretty_schedule(s: &Schedule) -> String {
    let m = s.metrics();
    format!(
        "target {} ({} vertices, {} edges)\nprefix {:?}\n{} ops over {} layers; ancillas {}, max op size {}",
        s.target.to_graph6(),
        s.target.n(),
        s.target.edge_count(),
        s.lc_prefix,
        s.ops.len(),
        m.l_depth,
        m.n_ancilla,
        m.s_max,
    )
}
