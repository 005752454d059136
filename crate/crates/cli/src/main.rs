use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use seplab::closed_forms::{expectation_triangulation, moment_report, OriginVariant};
use seplab::graph::{erdos_renyi, Graph, SimParams};
use seplab::harness::{clt, p_grid, sweep, to_csv, to_json, OrderPolicy, SweepRow};
use seplab::oracle::{enumerate_edges, MAX_EXHAUSTIVE_NODES};
use seplab::rng::{self, Purpose};
use seplab::stein::check_gradient_bounds;
use seplab::{acceptance, Model};

#[derive(Parser, Debug)]
#[command(name = "seplab", version, about = "Edge statistics of random symmetric edge polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form expectation and variance principal terms
    Exact(ExactArgs),
    /// Monte Carlo ensemble at one (n, p)
    Simulate(SimulateArgs),
    /// Ensembles over a grid of p
    Sweep(SweepArgs),
    /// Kolmogorov distances and Stein-bound estimates over a list of n
    Clt(CltArgs),
    /// Sampled checks of the first- and second-gradient bounds
    Gradients(GradientArgs),
    /// Geometric verification of the combinatorial edge test
    Oracle(OracleArgs),
    /// Run the acceptance suite
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Polytope,
    Triangulation,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Polytope => Model::Polytope,
            ModelArg::Triangulation => Model::Triangulation,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderArg {
    Fixed,
    Fresh,
}

impl From<OrderArg> for OrderPolicy {
    fn from(o: OrderArg) -> OrderPolicy {
        match o {
            OrderArg::Fixed => OrderPolicy::Fixed,
            OrderArg::Fresh => OrderPolicy::FreshPerReplicate,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    #[value(name = "proof_p")]
    ProofP,
    #[value(name = "theorem_p2")]
    TheoremP2,
}

impl From<VariantArg> for OriginVariant {
    fn from(v: VariantArg) -> OriginVariant {
        match v {
            VariantArg::ProofP => OriginVariant::ProofP,
            VariantArg::TheoremP2 => OriginVariant::TheoremP2,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct Output {
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads (results do not depend on it)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct Ensemble {
    #[arg(long, value_enum, default_value = "polytope")]
    model: ModelArg,
    #[arg(long, default_value_t = 1000)]
    reps: u64,
    #[arg(long, env = "SEPLAB_SEED", default_value_t = 1)]
    seed: u64,
    /// Arc orders for the triangulation model
    #[arg(long, value_enum, default_value = "fresh")]
    order: OrderArg,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, value_enum, default_value = "polytope")]
    model: ModelArg,
    #[arg(long, value_enum, default_value = "proof_p")]
    origin_variant: VariantArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[command(flatten)]
    ensemble: Ensemble,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    n: usize,
    /// Explicit grid, comma separated (alternative to --p-start/--p-end/--p-step)
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["p_start", "p_end", "p_step"])]
    p: Vec<f64>,
    #[arg(long, requires_all = ["p_end", "p_step"])]
    p_start: Option<f64>,
    #[arg(long)]
    p_end: Option<f64>,
    #[arg(long)]
    p_step: Option<f64>,
    #[command(flatten)]
    ensemble: Ensemble,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct CltArgs {
    /// Node counts, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long)]
    p: f64,
    /// Replicates for each Stein-bound estimate (0 skips it)
    #[arg(long, default_value_t = 200)]
    stein_reps: u64,
    #[command(flatten)]
    ensemble: Ensemble,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct GradientArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, value_enum, default_value = "polytope")]
    model: ModelArg,
    /// Number of sampled (g, e, f) instances
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    #[arg(long, env = "SEPLAB_SEED", default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    n: usize,
    /// Check every graph on n nodes
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    /// Number of random graphs to check
    #[arg(long, default_value_t = 100)]
    samples: u64,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, env = "SEPLAB_SEED", default_value_t = 1)]
    seed: u64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run only these criteria, comma separated
    #[arg(long, value_delimiter = ',')]
    criteria: Vec<u8>,
}

enum Failure {
    Invalid(String),
    Check(String),
}

impl From<seplab::Error> for Failure {
    fn from(e: seplab::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Exact(a) => exact(a),
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Clt(a) => run_clt(a),
        Command::Gradients(a) => gradients(a),
        Command::Oracle(a) => oracle(a),
        Command::Verify(a) => verify(a),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Outcome {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn write_rows(rows: &[SweepRow], config: Value, output: &Output) -> Outcome {
    let text = match output.format {
        Format::Csv => to_csv(rows, &config),
        Format::Json => to_json(rows, &config),
    };
    emit(&text, output.out.as_ref())
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

/// Everything that determines the output; `--out` and `--threads` do not.
fn ensemble_config(command: &str, e: &Ensemble, output: &Output) -> serde_json::Map<String, Value> {
    let model: Model = e.model.into();
    let policy: OrderPolicy = e.order.into();
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("model".into(), json!(model));
    m.insert("reps".into(), json!(e.reps));
    m.insert("seed".into(), json!(e.seed));
    m.insert("order".into(), json!(policy));
    m.insert("format".into(), json!(format_name(output.format)));
    m
}

fn exact(a: ExactArgs) -> Outcome {
    let model: Model = a.model.into();
    let variant: OriginVariant = a.origin_variant.into();
    let report = moment_report(a.n, a.p)?;
    let tri = expectation_triangulation(a.n, a.p, variant)?;
    let doc = match model {
        Model::Polytope => json!({
            "n": a.n, "p": a.p, "model": model,
            "expectation": report.expectation,
            "variance_case1": report.variance_principal,
            "regime": report.regime_label,
        }),
        Model::Triangulation => json!({
            "n": a.n, "p": a.p, "model": model, "origin_variant": variant,
            "expectation": tri,
        }),
    };
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&doc).expect("serializable")),
        Format::Csv => {
            println!("model = {model}, n = {}, p = {}", a.n, a.p);
            match model {
                Model::Polytope => {
                    println!("expectation = {}", report.expectation);
                    println!("variance_case1 = {}", report.variance_principal);
                    println!("regime = {}", report.regime_label);
                }
                Model::Triangulation => println!("expectation = {tri} (origin variant {})", variant_name(variant)),
            }
        }
    }
    Ok(())
}

fn variant_name(v: OriginVariant) -> &'static str {
    match v {
        OriginVariant::ProofP => "proof_p",
        OriginVariant::TheoremP2 => "theorem_p2",
    }
}

fn simulate(a: SimulateArgs) -> Outcome {
    let mut config = ensemble_config("simulate", &a.ensemble, &a.output);
    config.insert("n".into(), json!(a.n));
    config.insert("p".into(), json!(a.p));
    let e = &a.ensemble;
    let rows = sweep(a.n, &[a.p], e.model.into(), e.reps, e.order.into(), e.seed, a.output.threads)?;
    write_rows(&rows, Value::Object(config), &a.output)
}

fn run_sweep(a: SweepArgs) -> Outcome {
    let grid = match (a.p_start, a.p_end, a.p_step) {
        (Some(s), Some(e), Some(st)) => p_grid(s, e, st)?,
        _ if !a.p.is_empty() => a.p.clone(),
        _ => return Err(Failure::Invalid("give --p or --p-start/--p-end/--p-step".into())),
    };
    let mut config = ensemble_config("sweep", &a.ensemble, &a.output);
    config.insert("n".into(), json!(a.n));
    config.insert("p".into(), json!(grid));
    let e = &a.ensemble;
    let rows = sweep(a.n, &grid, e.model.into(), e.reps, e.order.into(), e.seed, a.output.threads)?;
    write_rows(&rows, Value::Object(config), &a.output)
}

fn run_clt(a: CltArgs) -> Outcome {
    let mut config = ensemble_config("clt", &a.ensemble, &a.output);
    config.insert("n".into(), json!(a.n));
    config.insert("p".into(), json!(a.p));
    config.insert("stein_reps".into(), json!(a.stein_reps));
    let e = &a.ensemble;
    let rows = clt(&a.n, a.p, e.model.into(), e.reps, e.order.into(), a.stein_reps, e.seed, a.output.threads)?;
    write_rows(&rows, Value::Object(config), &a.output)
}

fn gradients(a: GradientArgs) -> Outcome {
    let model: Model = a.model.into();
    let mut rng = rng::stream(a.seed, Purpose::Sampling, 0);
    let check = check_gradient_bounds(a.n, a.p, &[model], a.samples, &mut rng)?;
    let doc = json!({
        "n": a.n, "p": a.p, "model": model, "seed": a.seed,
        "instances": check.instances,
        "violations": check.violations,
        "max_ratio_first": check.max_ratio_first,
        "max_ratio_second_adjacent": check.max_ratio_adjacent,
        "max_ratio_second_disjoint": check.max_ratio_disjoint,
    });
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    if check.violations > 0 {
        return Err(Failure::Check(format!("{} bound violations", check.violations)));
    }
    Ok(())
}

fn oracle(a: OracleArgs) -> Outcome {
    let graphs: Vec<Graph> = if a.exhaustive {
        if a.n > MAX_EXHAUSTIVE_NODES {
            return Err(Failure::Invalid(format!("--exhaustive supports n <= {MAX_EXHAUSTIVE_NODES}")));
        }
        let m = a.n * a.n.saturating_sub(1) / 2;
        (0..1u64 << m).map(|mask| Graph::from_mask(a.n, mask)).collect::<Result<_, _>>()?
    } else {
        let params = SimParams::new(a.n, a.p, a.seed)?;
        (0..a.samples).map(|r| erdos_renyi(&params, r)).collect()
    };
    let mut matched = 0usize;
    let mut mismatches = Vec::new();
    for g in &graphs {
        if g.arc_count() == 0 {
            matched += 1;
            continue;
        }
        let r = enumerate_edges(g)?;
        if r.combinatorial_match {
            matched += 1;
        } else {
            mismatches.push(g.to_edge_list());
        }
    }
    let summary = format!("{matched}/{} graphs matched", graphs.len());
    let doc = json!({
        "n": a.n, "exhaustive": a.exhaustive, "graphs": graphs.len(), "matched": matched,
        "mismatches": mismatches,
    });
    println!("{summary}");
    let report = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
    match &a.out {
        Some(path) => std::fs::write(path, report)?,
        None => print!("{report}"),
    }
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(summary))
    }
}

fn verify(a: VerifyArgs) -> Outcome {
    let ids: Vec<u8> = if a.criteria.is_empty() { acceptance::CRITERIA.to_vec() } else { a.criteria };
    if let Some(bad) = ids.iter().find(|id| !acceptance::CRITERIA.contains(id)) {
        return Err(Failure::Invalid(format!("unknown criterion {bad}")));
    }
    let mut failed = Vec::new();
    for id in ids {
        let outcome = acceptance::run(id);
        println!("{outcome}");
        if !outcome.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("criteria {failed:?} failed")))
    }
}
