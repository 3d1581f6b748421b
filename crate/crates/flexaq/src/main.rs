use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use flexaq::bench::{benchmark, write_report, BenchConfig};
use flexaq::engine::{prepare, run_sql, EngineError, Mode, RunConfig};
use flexaq::fixture::generate_fixture;
use flexaq::ingest::load_dir;
use flexaq::kbfile::{build_kb, load_kb, save_kb, AttrSpec};
use flexaq_core::exec::DEFAULT_ALPHA;
use flexaq_core::fca::DEFAULT_MAX_CELLS;
use flexaq_core::query::{IntervalKind, DEFAULT_CONFIDENCE};

#[derive(Parser)]
#[command(name = "flexaq", version, about = "Approximate evaluation of fuzzy aggregate queries over CSV tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Knowledge-base maintenance.
    Kb {
        #[command(subcommand)]
        command: KbCommand,
    },
    /// Run one query.
    Query(QueryArgs),
    /// Time exact and sampled runs and write a CSV report.
    Bench(BenchArgs),
    /// Write the synthetic Patient/Death tables.
    Fixture {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        rows: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum KbCommand {
    /// Partition numeric columns into linguistic terms.
    Build {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `table.column[:term,term,...]`; repeatable. Defaults to every
        /// numeric column.
        #[arg(long = "attr")]
        attrs: Vec<AttrSpec>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Approx,
}

#[derive(Clone, Copy, ValueEnum)]
enum IntervalArg {
    Conservative,
    Clt,
}

impl From<IntervalArg> for IntervalKind {
    fn from(a: IntervalArg) -> Self {
        match a {
            IntervalArg::Conservative => IntervalKind::Conservative,
            IntervalArg::Clt => IntervalKind::LargeSample,
        }
    }
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    kb: PathBuf,
    #[arg(long)]
    sql: String,
    #[arg(long, default_value_t = DEFAULT_CONFIDENCE)]
    confidence: f64,
    #[arg(long, value_enum, default_value_t = IntervalArg::Clt)]
    interval: IntervalArg,
    /// Membership threshold for fuzzy predicates.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// FROM position of the sampled table.
    #[arg(long, default_value_t = 0)]
    driving: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
    max_cells: usize,
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = ModeArg::Approx)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0.1)]
    fraction: f64,
    /// Write the concept lattice of the sample as DOT.
    #[arg(long)]
    export_lattice: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    fractions: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    #[arg(long)]
    out: PathBuf,
}

impl Common {
    fn config(&self, mode: Mode, fraction: f64) -> RunConfig {
        RunConfig {
            data_dir: self.data.clone(),
            kb_path: self.kb.clone(),
            sample_fraction: fraction,
            confidence: self.confidence,
            interval: self.interval.into(),
            alpha: self.alpha,
            seed: self.seed,
            mode,
            driving: self.driving,
            max_cells: self.max_cells,
            export_lattice: false,
        }
    }
}

fn query(args: QueryArgs) -> anyhow::Result<()> {
    let mode = match args.mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Approx => Mode::Approximate,
    };
    let config = RunConfig { export_lattice: args.export_lattice.is_some(), ..args.common.config(mode, args.fraction) };
    config.validate()?;
    let tables = load_dir(&config.data_dir)?;
    let kb = load_kb(&config.kb_path)?;
    let result = run_sql(&args.common.sql, &tables, &kb, &config)?;
    println!("{result}");
    if let Some(path) = args.export_lattice {
        match &result.lattice_dot {
            Some(dot) => fs::write(&path, dot).with_context(|| format!("writing {}", path.display()))?,
            None => eprintln!("no lattice in exact mode; {} not written", path.display()),
        }
    }
    Ok(())
}

fn bench(args: BenchArgs) -> anyhow::Result<()> {
    let run = args.common.config(Mode::Approximate, 1.0);
    run.validate()?;
    let tables = load_dir(&run.data_dir)?;
    let kb = load_kb(&run.kb_path)?;
    let (query, bound) = prepare(&args.common.sql, &tables, &kb)?;
    let config = BenchConfig { sizes: args.sizes, fractions: args.fractions, repetitions: args.reps, run };
    let report = benchmark(&query, &bound, &tables, &config)?;
    let file = fs::File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    write_report(&report, file)?;
    for r in &report {
        println!(
            "{:>8} {:<11} {:<5} {:>10.3} ms  max err {:.4}  median err {:.4}",
            r.rows, r.mode, r.fraction, r.median_ms, r.max_rel_error, r.median_rel_error
        );
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Kb { command: KbCommand::Build { data, out, k, seed, attrs } } => {
            let tables = load_dir(&data)?;
            let kb = build_kb(&tables, &attrs, k, seed)?;
            save_kb(&kb, &out)?;
            for attr in kb.attributes() {
                let names: Vec<&str> = attr.terms().iter().map(|t| t.name()).collect();
                println!("{}: {}", attr.qualified_name(), names.join(", "));
            }
        }
        Command::Query(args) => query(args)?,
        Command::Bench(args) => bench(args)?,
        Command::Fixture { rows, seed, out } => {
            generate_fixture(rows as usize, seed, &out).with_context(|| format!("writing fixture to {}", out.display()))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let validation = e.downcast_ref::<EngineError>().is_some_and(EngineError::is_validation);
            ExitCode::from(if validation { 2 } else { 3 })
        }
    }
}
