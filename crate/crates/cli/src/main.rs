//! `recon`: evaluate, solve and benchmark reconnaissance plans.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use recon_core::bench::{self, BenchCase};
use recon_core::exact::{solve_exact, ExactError};
use recon_core::genetic::{run_ga, GaConfig, GaError, MutationSet, ReturnMetric};
use recon_core::milp::{build_milp, export_lp, import_solution, parse_solution, ImportError, SendReset};
use recon_core::mission::{make_hardness_instance, make_path_instance, PlanSet};
use recon_core::{delivery_probabilities, expected_value_multi, expected_value_single, instances};
use recon_core::{Mission, MultiPlan};

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  invalid input (unreadable or malformed files, invalid mission or plan, bad options)
  3  exact search too large for the state-space limit
  4  imported solution inconsistent with the model or the evaluator";

#[derive(Parser)]
#[command(name = "recon", version, about = "Route and transmission planning for reconnaissance drones", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the expected value, survival and per-vertex deliveries of a plan.
    Evaluate {
        /// Mission file, or a bundled name (fig1, k6, k10).
        mission: String,
        /// Plan file: one plan object or an array of them (one per drone).
        plan: PathBuf,
    },
    /// Find a plan with the exact search or the genetic algorithm.
    Solve(SolveArgs),
    /// Write the mixed-integer model in LP format.
    ExportMilp {
        mission: String,
        #[arg(long)]
        horizon: usize,
        /// Use the send reset as originally printed instead of the corrected one.
        #[arg(long)]
        literal_reset: bool,
        /// Output LP file.
        out: PathBuf,
    },
    /// Rebuild a plan from a solver's `name value` solution file.
    ImportSolution {
        mission: String,
        /// Horizon the model was exported with.
        #[arg(long)]
        horizon: usize,
        #[arg(long)]
        literal_reset: bool,
        solution: PathBuf,
        /// Write the reconstructed plan here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the seeded benchmark grid and report success rates.
    Bench(BenchArgs),
    /// List the bundled instances and their reference values.
    Instances,
    /// Write a generated mission file.
    Generate {
        #[command(subcommand)]
        kind: Generate,
    },
}

#[derive(Subcommand)]
enum Generate {
    /// Path graph on `n` vertices with crossing probability 1/sqrt(n).
    Path {
        #[arg(long)]
        n: usize,
        out: PathBuf,
    },
    /// Uniform instance of a graph; prints the decision threshold.
    Hardness {
        #[arg(long)]
        n: usize,
        /// Edges as `i-j` pairs separated by commas.
        #[arg(long, value_delimiter = ',')]
        edges: Vec<String>,
        #[arg(long)]
        q: f64,
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Ga,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mutations {
    NoMutation,
    SendFlip,
    VertexFlip,
    AddedWalk,
    Combination,
}

impl From<Mutations> for MutationSet {
    fn from(m: Mutations) -> Self {
        match m {
            Mutations::NoMutation => MutationSet::None,
            Mutations::SendFlip => MutationSet::SendFlip,
            Mutations::VertexFlip => MutationSet::VertexFlip,
            Mutations::AddedWalk => MutationSet::AddedWalk,
            Mutations::Combination => MutationSet::Combination,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Survival,
    Hops,
}

#[derive(Args)]
struct SolveArgs {
    mission: String,
    #[arg(long, value_enum, default_value = "ga")]
    method: Method,
    #[arg(long, default_value_t = 1)]
    drones: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exact search horizon; defaults to n^2 - 1.
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long, value_enum, default_value = "combination")]
    mutations: Mutations,
    /// Path used to bring a walk back to its target.
    #[arg(long, value_enum, default_value = "survival")]
    return_metric: Metric,
    #[arg(long)]
    l_min: Option<usize>,
    #[arg(long)]
    l_max: Option<usize>,
    /// Write the best plan here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the per-generation trace CSV here (genetic algorithm only).
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    /// Ablation, multi-drone and generated cases.
    Paper,
    Ablation,
    Multi,
    Generated,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "paper")]
    suite: Suite,
    #[arg(long, default_value_t = 100)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
    /// Override every case's population.
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    /// Write the report as CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

enum Failure {
    Invalid(String),
    Capacity(String),
    Inconsistent(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Capacity(_) => 3,
            Failure::Inconsistent(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Invalid(m) | Failure::Capacity(m) | Failure::Inconsistent(m) => f.write_str(m),
        }
    }
}

fn invalid(e: impl fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

type Outcome = Result<(), Failure>;

fn load_mission(arg: &str) -> Result<Mission, Failure> {
    let path = Path::new(arg);
    let m = if path.exists() {
        Mission::load(path).map_err(invalid)?
    } else {
        instances::by_file(arg).ok_or_else(|| Failure::Invalid(format!("{arg}: no such file or bundled instance")))?
    };
    m.validate().map_err(|v| Failure::Invalid(format!("{arg}: {v}")))?;
    Ok(m)
}

fn save_plan(path: &Path, mp: &MultiPlan) -> Outcome {
    PlanSet::from_multi(mp).save(path).map_err(invalid)
}

fn write_file(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn print_plan(mp: &MultiPlan) {
    for (d, p) in mp.plans.iter().enumerate() {
        let prefix = if mp.drones() > 1 { format!("drone {}: ", d + 1) } else { String::new() };
        println!("{prefix}route {:?} send {:?}", p.route, p.send_bits());
    }
}

fn evaluate(mission: &str, plan: &Path) -> Outcome {
    let m = load_mission(mission)?;
    let mp = PlanSet::load(plan).map_err(invalid)?.into_multi().map_err(invalid)?;
    mp.validate(&m).map_err(|v| Failure::Invalid(format!("{}: {v}", plan.display())))?;
    if let [single] = mp.plans.as_slice() {
        let b = expected_value_single(&m, single).map_err(invalid)?;
        println!("expected value: {:.6}", b.expected_value);
        println!("survival: {:.6}", b.survival);
        println!("delivery probabilities:");
        for (v, d) in b.per_vertex_delivery.iter().enumerate() {
            println!("  {v}: {d:.6}");
        }
    } else {
        let value = expected_value_multi(&m, &mp).map_err(invalid)?;
        println!("expected value: {value:.6} ({} drones)", mp.drones());
        for (d, p) in mp.plans.iter().enumerate() {
            let b = expected_value_single(&m, p).map_err(invalid)?;
            let deliveries = delivery_probabilities(&m, p).map_err(invalid)?;
            let text: Vec<String> = deliveries.iter().map(|x| format!("{x:.6}")).collect();
            println!(
                "drone {}: alone {:.6}, survival {:.6}, deliveries [{}]",
                d + 1,
                b.expected_value,
                b.survival,
                text.join(", ")
            );
        }
    }
    Ok(())
}

fn solve(args: &SolveArgs) -> Outcome {
    let m = load_mission(&args.mission)?;
    let (best, value) = match args.method {
        Method::Exact => {
            if args.drones != 1 {
                return Err(Failure::Invalid("the exact search handles one drone only".into()));
            }
            let sol = solve_exact(&m, args.horizon).map_err(|e| match e {
                ExactError::Capacity { .. } => Failure::Capacity(e.to_string()),
                other => invalid(other),
            })?;
            (MultiPlan::from(sol.plan), sol.value)
        }
        Method::Ga => {
            let defaults = GaConfig::default();
            let config = GaConfig {
                population: args.population.unwrap_or(defaults.population),
                generations: args.generations.unwrap_or(defaults.generations),
                drones: args.drones,
                seed: args.seed,
                l_min: args.l_min,
                l_max: args.l_max,
                return_metric: match args.return_metric {
                    Metric::Survival => ReturnMetric::Survival,
                    Metric::Hops => ReturnMetric::Hops,
                },
                ..defaults
            }
            .with_mutations(args.mutations.into());
            let result = run_ga(&m, &config).map_err(|e: GaError| invalid(e))?;
            if let Some(path) = &args.trace {
                write_file(path, &result.trace.to_csv())?;
            }
            (result.best, result.value)
        }
    };
    println!("expected value: {value:.6}");
    print_plan(&best);
    if let Some(path) = &args.out {
        save_plan(path, &best)?;
    }
    Ok(())
}

fn reset(literal: bool) -> SendReset {
    if literal {
        SendReset::Literal
    } else {
        SendReset::Corrected
    }
}

fn export_milp(mission: &str, horizon: usize, literal: bool, out: &Path) -> Outcome {
    let m = load_mission(mission)?;
    let model = build_milp(&m, horizon, reset(literal)).map_err(invalid)?;
    write_file(out, &export_lp(&model))?;
    println!(
        "{} variables, {} constraints written to {}",
        model.vars.len(),
        model.constraints.len(),
        out.display()
    );
    Ok(())
}

fn import(mission: &str, horizon: usize, literal: bool, solution: &Path, out: Option<&Path>) -> Outcome {
    let m = load_mission(mission)?;
    let model = build_milp(&m, horizon, reset(literal)).map_err(invalid)?;
    let text = std::fs::read_to_string(solution).map_err(|e| Failure::Invalid(format!("{}: {e}", solution.display())))?;
    let assignment = parse_solution(&text).map_err(invalid)?;
    let imported = import_solution(&m, &model, &assignment).map_err(|e| match e {
        ImportError::Syntax { .. } => invalid(e),
        other => Failure::Inconsistent(other.to_string()),
    })?;
    println!("model objective: {:.6}", imported.milp_objective);
    println!("evaluated value: {:.6}", imported.evaluated);
    let mp = MultiPlan::from(imported.plan);
    print_plan(&mp);
    if let Some(path) = out {
        save_plan(path, &mp)?;
    }
    Ok(())
}

fn run_bench(args: &BenchArgs) -> Outcome {
    let mut cases: Vec<BenchCase> = match args.suite {
        Suite::Paper => bench::paper_suite(),
        Suite::Ablation => bench::ablation_cases(),
        Suite::Multi => vec![bench::k6_two_drone_case(), bench::k10_two_drone_case()],
        Suite::Generated => bench::generated_cases(),
    };
    for case in &mut cases {
        if let Some(p) = args.population {
            case.config.population = p;
        }
        if let Some(g) = args.generations {
            case.config.generations = g;
        }
    }
    let report = bench::run_suite(&cases, args.runs, args.seed_base).map_err(invalid)?;
    print!("{}", report.to_table());
    if let Some(path) = &args.csv {
        write_file(path, &report.to_csv())?;
    }
    Ok(())
}

fn list_instances() -> Outcome {
    println!("{:<10} {:<10} {:>6} {:>10}", "name", "file", "drones", "reference");
    for e in instances::manifest().instance {
        println!("{:<10} {:<10} {:>6} {:>10.6}", e.name, e.file, e.drones, e.reference);
    }
    Ok(())
}

fn parse_edge(s: &str) -> Result<(usize, usize), Failure> {
    let parsed = s
        .split_once('-')
        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
    parsed.ok_or_else(|| Failure::Invalid(format!("edge `{s}` is not of the form i-j")))
}

fn generate(kind: &Generate) -> Outcome {
    let (m, out) = match kind {
        Generate::Path { n, out } => (make_path_instance(*n).map_err(invalid)?, out),
        Generate::Hardness { n, edges, q, out } => {
            let edges = edges.iter().map(|e| parse_edge(e)).collect::<Result<Vec<_>, _>>()?;
            let h = make_hardness_instance(*n, &edges, *q).map_err(invalid)?;
            println!("threshold: {:.6}", h.threshold);
            (h.mission, out)
        }
    };
    m.save(out).map_err(invalid)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Evaluate { mission, plan } => evaluate(&mission, &plan),
        Command::Solve(args) => solve(&args),
        Command::ExportMilp {
            mission,
            horizon,
            literal_reset,
            out,
        } => export_milp(&mission, horizon, literal_reset, &out),
        Command::ImportSolution {
            mission,
            horizon,
            literal_reset,
            solution,
            out,
        } => import(&mission, horizon, literal_reset, &solution, out.as_deref()),
        Command::Bench(args) => run_bench(&args),
        Command::Instances => list_instances(),
        Command::Generate { kind } => generate(&kind),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
