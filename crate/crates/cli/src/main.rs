use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};

use tarski::dynamics::{
    check_hodge_tarski, conjecture_report, dirichlet_energy, gossip, heat_flow, write_trace_csv, BroadcastSequence,
    EdgeMetric, GossipConfig, TraceRow,
};
use tarski::experiment::{run_experiment, write_experiment_csv, ExperimentConfig, ScheduleKind};
use tarski::galois::maxplus::alternating_method;
use tarski::semantics::reference::{galois_rows, laplacian_rows};
use tarski::semantics::KripkeModel;
use tarski::sheaf::{h1_bruteforce, sections_bruteforce, Cochain0, TarskiSheaf};
use tarski::spec_file::{LoadedSpec, ScheduleSpec, SpecFile};
use tarski::{Error, Exec};

#[derive(Parser)]
#[command(name = "tarski", version, about = "Lattice-valued sheaves, Tarski Laplacians and gossip")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the global sections of a sheaf.
    Sections(SpecArg),
    /// List the 1-cochains with matching coboundary adjoints.
    H1(SpecArg),
    /// Run heat flow from the spec file's initial cochain; emits an energy CSV.
    Heat(RunArgs),
    /// Run gossip from the spec file's initial cochain; emits an energy CSV.
    Gossip(GossipArgs),
    /// Compare the suffix points, the sections and the fixed points of L ∧ id.
    Hodge(SpecArg),
    /// Compare the prefix points of the Helmholtzian with H¹.
    Helmholtz(HelmholtzArgs),
    /// Gossip on random Kripke sheaves over random geometric graphs.
    Experiment(ExperimentArgs),
    /// Recompute the Alice/Bob/Eve tables and flag rows that differ from the reference tables.
    KripkeDemo,
    /// Run the alternating method on the spec file's max-plus section.
    Maxplus(SpecArg),
}

#[derive(Args)]
struct SpecArg {
    #[arg(long)]
    spec: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    spec: PathBuf,
    /// hamming or hasse; defaults to hamming on powerset stalks.
    #[arg(long)]
    metric: Option<EdgeMetric>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GossipArgs {
    #[command(flatten)]
    run: RunArgs,
    /// sync, uniform1, round-robin or file:PATH; the spec file's schedule when absent.
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: usize,
}

#[derive(Args)]
struct HelmholtzArgs {
    #[arg(long)]
    spec: PathBuf,
    /// CSV comparison destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 40)]
    nodes: usize,
    #[arg(long, default_value_t = 0.08)]
    radius: f64,
    #[arg(long, default_value_t = 10)]
    states: usize,
    #[arg(long, default_value_t = 0.9)]
    p_diag: f64,
    #[arg(long, default_value_t = 0.1)]
    p_off: f64,
    /// sync, uniform1, round-robin or file:PATH.
    #[arg(long, default_value = "uniform1")]
    schedule: String,
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: usize,
    #[arg(long)]
    metric: Option<EdgeMetric>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit status for a failure: 2 for non-convergence, 3 for a size guard, 1 otherwise.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::NotConverged(_)) => 2,
        Some(Error::TooLarge { .. }) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Sections(a) => cmd_sections(&a.spec),
        Command::H1(a) => cmd_h1(&a.spec),
        Command::Heat(a) => cmd_heat(&a),
        Command::Gossip(a) => cmd_gossip(&a),
        Command::Hodge(a) => cmd_hodge(&a.spec),
        Command::Helmholtz(a) => cmd_helmholtz(&a),
        Command::Experiment(a) => cmd_experiment(&a),
        Command::KripkeDemo => cmd_kripke_demo(),
        Command::Maxplus(a) => cmd_maxplus(&a.spec),
    }
}

fn load(path: &Path) -> anyhow::Result<LoadedSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec = SpecFile::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(spec.load()?)
}

fn load_sheaf(path: &Path) -> anyhow::Result<(TarskiSheaf, LoadedSpec)> {
    let mut loaded = load(path)?;
    let sheaf = loaded.sheaf.take().ok_or_else(|| anyhow!("{} has no graph", path.display()))?;
    Ok((sheaf, loaded))
}

fn output(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn labels(values: &[usize], label: impl Fn(usize, usize) -> String) -> String {
    let parts: Vec<String> = values.iter().enumerate().map(|(i, &v)| label(i, v)).collect();
    format!("[{}]", parts.join(", "))
}

fn node_labels(sheaf: &TarskiSheaf, x: &Cochain0) -> String {
    labels(&x.0, |i, v| sheaf.node_stalk(i).label(v))
}

fn edge_labels(sheaf: &TarskiSheaf, y: &[usize]) -> String {
    labels(y, |e, v| sheaf.edge_stalk(e).label(v))
}

fn cmd_sections(path: &Path) -> anyhow::Result<()> {
    let (sheaf, _) = load_sheaf(path)?;
    let sections = sections_bruteforce(&sheaf)?;
    for x in &sections {
        println!("{}", node_labels(&sheaf, x));
    }
    println!("count: {}", sections.len());
    Ok(())
}

fn cmd_h1(path: &Path) -> anyhow::Result<()> {
    let (sheaf, _) = load_sheaf(path)?;
    let h1 = h1_bruteforce(&sheaf)?;
    for y in &h1 {
        println!("{}", edge_labels(&sheaf, &y.0));
    }
    println!("count: {}", h1.len());
    Ok(())
}

fn initial_state(sheaf: &TarskiSheaf, loaded: &LoadedSpec) -> Cochain0 {
    loaded.initial.clone().unwrap_or_else(|| sheaf.top_cochain())
}

fn cmd_heat(args: &RunArgs) -> anyhow::Result<()> {
    let (sheaf, loaded) = load_sheaf(&args.spec)?;
    let metric = args.metric.unwrap_or_else(|| EdgeMetric::default_for(&sheaf));
    let flow = heat_flow(&sheaf, &initial_state(&sheaf, &loaded))?;
    let rows = flow
        .trajectory
        .iter()
        .enumerate()
        .map(|(t, x)| {
            Ok(TraceRow {
                t,
                fired: Vec::new(),
                energy: dirichlet_energy(&sheaf, metric, x)?,
            })
        })
        .collect::<tarski::Result<Vec<_>>>()?;
    let mut out = output(&args.out)?;
    write_trace_csv(&mut out, &rows)?;
    out.flush()?;
    eprintln!("fixpoint after {} steps", flow.steps());
    eprintln!("final: {}", node_labels(&sheaf, flow.final_state()));
    Ok(())
}

/// `uniform1` from the command line draws from `--seed`; a file carries its own seed.
fn parse_schedule(text: &str) -> anyhow::Result<ScheduleKind> {
    Ok(match text {
        "sync" => ScheduleKind::Synchronous,
        "uniform1" => ScheduleKind::UniformSingle,
        "round-robin" => ScheduleKind::RoundRobin,
        _ => match text.strip_prefix("file:") {
            Some(path) => {
                let body = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
                match ScheduleSpec::parse(&body).with_context(|| format!("parsing {path}"))? {
                    ScheduleSpec::Sync => ScheduleKind::Synchronous,
                    ScheduleSpec::RoundRobin => ScheduleKind::RoundRobin,
                    other => ScheduleKind::Fixed(other.to_sequence(0)),
                }
            }
            None => bail!("unknown schedule `{text}` (expected sync, uniform1, round-robin or file:PATH)"),
        },
    })
}

fn cmd_gossip(args: &GossipArgs) -> anyhow::Result<()> {
    let (sheaf, loaded) = load_sheaf(&args.run.spec)?;
    let n = sheaf.graph().node_count();
    let schedule = match &args.schedule {
        Some(text) => match parse_schedule(text)? {
            ScheduleKind::Synchronous => BroadcastSequence::Synchronous,
            ScheduleKind::UniformSingle => BroadcastSequence::UniformSingle { seed: args.seed },
            ScheduleKind::RoundRobin => BroadcastSequence::round_robin(n),
            ScheduleKind::Fixed(seq) => seq,
        },
        None => loaded.schedule.clone().unwrap_or(BroadcastSequence::Synchronous),
    };
    let config = GossipConfig {
        max_steps: args.max_steps,
        metric: args.run.metric,
        record_states: false,
    };
    let result = gossip(&sheaf, &initial_state(&sheaf, &loaded), &schedule, &config);
    let run = match &result {
        Ok(run) => run,
        Err(Error::NotConverged(run)) => run.as_ref(),
        Err(_) => return Err(result.unwrap_err().into()),
    };
    let mut out = output(&args.run.out)?;
    write_trace_csv(&mut out, &run.trace)?;
    out.flush()?;
    eprintln!("final: {}", node_labels(&sheaf, &run.final_state));
    match result {
        Ok(run) => {
            eprintln!("converged after {} steps", run.steps);
            Ok(())
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_hodge(path: &Path) -> anyhow::Result<()> {
    let (sheaf, _) = load_sheaf(path)?;
    let report = check_hodge_tarski(&sheaf)?;
    println!("sections: {}", report.sections);
    println!("suffix points: {}", report.suffix_points);
    println!("fixed points: {}", report.fixed_points);
    match &report.witness {
        None => println!("equal: yes"),
        Some(x) => println!("equal: no, witness {}", node_labels(&sheaf, x)),
    }
    Ok(())
}

fn cmd_helmholtz(args: &HelmholtzArgs) -> anyhow::Result<()> {
    let (sheaf, _) = load_sheaf(&args.spec)?;
    let report = conjecture_report(&sheaf)?;
    let mut all: Vec<&Vec<usize>> = report.prefix_points.iter().chain(&report.h1).map(|y| &y.0).collect();
    all.sort();
    all.dedup();
    let mut out = output(&args.out)?;
    writeln!(out, "cochain,prefix,h1")?;
    for y in all {
        let in_prefix = report.prefix_points.iter().any(|p| &p.0 == y);
        let in_h1 = report.h1.iter().any(|p| &p.0 == y);
        writeln!(out, "\"{}\",{},{}", edge_labels(&sheaf, y), in_prefix as u8, in_h1 as u8)?;
    }
    out.flush()?;
    eprintln!(
        "prefix points: {}, H1: {}, equal: {}",
        report.prefix_points.len(),
        report.h1.len(),
        if report.sets_equal() { "yes" } else { "no" }
    );
    Ok(())
}

fn cmd_experiment(args: &ExperimentArgs) -> anyhow::Result<()> {
    let config = ExperimentConfig {
        seed: args.seed,
        nodes: args.nodes,
        radius: args.radius,
        states: args.states,
        p_diag: args.p_diag,
        p_off: args.p_off,
        schedule: parse_schedule(&args.schedule)?,
        max_steps: args.max_steps,
        metric: args.metric,
        trials: args.trials,
    };
    let (instance, outcomes) = run_experiment(&config, Exec::default())?;
    let mut out = output(&args.out)?;
    write_experiment_csv(&mut out, &outcomes)?;
    out.flush()?;
    eprintln!(
        "graph: {} nodes, {} edges, connected: {}",
        instance.graph.node_count(),
        instance.graph.edge_count(),
        instance.graph.is_connected()
    );
    let mut stalled = 0;
    for o in &outcomes {
        eprintln!(
            "trial {}: steps {}, final energy {}, section {}, converged {}",
            o.trial,
            o.run.steps,
            o.final_energy(),
            o.final_is_section,
            o.converged
        );
        stalled += usize::from(!o.converged);
    }
    if stalled > 0 {
        let first = outcomes.into_iter().find(|o| !o.converged).expect("counted above");
        return Err(Error::NotConverged(Box::new(first.run)).into());
    }
    Ok(())
}

fn cmd_kripke_demo() -> anyhow::Result<()> {
    let model = KripkeModel::alice_bob_eve();
    let names = ["Alice", "Bob", "Eve"];
    let label = |e: usize| model.event_label(e);
    println!("{:<8} {:<6} {:<10} {:<10} {:<10} {:<10}", "event", "agent", "K∃", "K∃ ref", "K∀", "K∀ ref");
    for row in galois_rows(&model)? {
        println!(
            "{:<8} {:<6} {:<10} {:<10} {:<10} {:<10}{}",
            label(row.event),
            names[row.agent],
            label(row.exists),
            label(row.reference_exists),
            label(row.forall),
            label(row.reference_forall),
            if row.agrees() { "" } else { "  differs from reference table" }
        );
    }
    println!();
    println!("Laplacian on the path Alice - Bob - Eve");
    for row in laplacian_rows(&model)? {
        let show = |xs: &[usize]| labels(xs, |_, v| label(v));
        println!(
            "{} -> {}  reference {}{}",
            show(&row.input),
            show(&row.output),
            show(&row.reference),
            if row.agrees() { "" } else { "  differs from reference table" }
        );
    }
    Ok(())
}

fn cmd_maxplus(path: &Path) -> anyhow::Result<()> {
    let loaded = load(path)?;
    let mp = loaded.maxplus.ok_or_else(|| anyhow!("{} has no maxplus section", path.display()))?;
    let outcome = alternating_method(&mp.a, &mp.b, &mp.x0, &mp.y0, mp.max_iterations)?;
    let show = |v: &[tarski::galois::maxplus::ExtendedReal]| {
        let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        format!("[{}]", parts.join(", "))
    };
    println!("x: {}", show(&outcome.x));
    println!("y: {}", show(&outcome.y));
    println!("iterations: {}", outcome.iterations);
    println!("converged: {}", outcome.converged);
    println!("synchronized: {}", outcome.synchronized);
    Ok(())
}
