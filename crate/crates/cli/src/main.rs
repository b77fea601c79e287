use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use refquest::bench::{run_benchmark, BenchmarkSpec, Environment, System};
use refquest::dialogue::{run_dialogue, run_episode, AgentPolicy, HumanOracle, Limits};
use refquest::dnet::{FrequencyTable, QuestionCatalog};
use refquest::report::{emit_report, ReportFormat};
use refquest::worlds::{self, generate_random_world, spacecraft_world, RandomWorldSpec};
use refquest::{EpisodeRecord, World};

#[derive(Parser, Debug)]
#[command(
    name = "refquest",
    version,
    about = "Clarification questions for reference resolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run systems x environments x iterations and print a report.
    Bench(BenchArgs),
    /// Run a single episode with a simulated or human oracle.
    Episode(EpisodeArgs),
    /// Generate a random world config.
    Genworld(GenworldArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum EnvArg {
    Spacecraft,
    RandomLow,
    RandomHigh,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SystemArg {
    Baseline,
    ModelData,
    ModelEntropy,
}

impl From<SystemArg> for System {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::Baseline => System::Baseline,
            SystemArg::ModelData => System::ModelData,
            SystemArg::ModelEntropy => System::ModelEntropy,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Table,
    Delimited,
    Structured,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OracleArg {
    Sim,
    Human,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Variance {
    Low,
    High,
}

#[derive(Args, Debug)]
struct ConfigArgs {
    /// Question catalog (TOML); defaults to the shipped twelve-type catalog.
    #[arg(long)]
    questions: Option<PathBuf>,
    /// Question-type frequency table (TOML) for the data-driven model.
    #[arg(long)]
    frequencies: Option<PathBuf>,
}

impl ConfigArgs {
    fn load(&self) -> Result<(QuestionCatalog, FrequencyTable), String> {
        let catalog = match &self.questions {
            Some(p) => QuestionCatalog::from_toml(&read(p)?).map_err(|e| e.to_string())?,
            None => QuestionCatalog::spacecraft(),
        };
        let freq = match &self.frequencies {
            Some(p) => FrequencyTable::from_toml(&read(p)?).map_err(|e| e.to_string())?,
            None => FrequencyTable::spacecraft(),
        };
        Ok((catalog, freq))
    }
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Environments to run (comma separated).
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    env: Vec<EnvArg>,
    /// Systems to compare (comma separated).
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "baseline,model-data,model-entropy"
    )]
    systems: Vec<SystemArg>,
    #[arg(long, env = "REFQUEST_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = refquest::bench::DEFAULT_ITERATIONS)]
    iterations: usize,
    #[arg(long, default_value_t = refquest::bench::DEFAULT_TRIALS)]
    trials: usize,
    /// Entities per random world.
    #[arg(long, default_value_t = worlds::DEFAULT_ENTITIES)]
    entities: usize,
    /// Values per property in random worlds.
    #[arg(long, default_value_t = worlds::DEFAULT_VALUES)]
    values: usize,
    /// Entities sharing one label in random worlds.
    #[arg(long, default_value_t = worlds::DEFAULT_GROUP_SIZE)]
    group_size: usize,
    #[arg(long, default_value_t = refquest::dialogue::DEFAULT_MAX_QUESTIONS)]
    max_questions: usize,
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args, Debug)]
struct EpisodeArgs {
    /// `spacecraft` or a path to a world config.
    #[arg(long, default_value = "spacecraft")]
    world: String,
    /// Entity the simulated oracle has in mind; its label is the instruction.
    #[arg(long)]
    target: Option<String>,
    /// Instruction label (human oracle mode).
    #[arg(long)]
    label: Option<String>,
    #[arg(long, value_enum, default_value = "model-entropy")]
    agent: SystemArg,
    #[arg(long, value_enum, default_value = "sim")]
    oracle: OracleArg,
    #[arg(long, env = "REFQUEST_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = refquest::dialogue::DEFAULT_MAX_QUESTIONS)]
    max_questions: usize,
    /// Print the transcript as JSON instead of text.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args, Debug)]
struct GenworldArgs {
    #[arg(long, value_enum)]
    variance: Variance,
    #[arg(long, env = "REFQUEST_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = worlds::DEFAULT_ENTITIES)]
    entities: usize,
    #[arg(long, default_value_t = worlds::DEFAULT_PROPERTIES)]
    properties: usize,
    /// Number of varying properties; defaults to 3 (low) or all (high).
    #[arg(long)]
    varying: Option<usize>,
    #[arg(long, default_value_t = worlds::DEFAULT_VALUES)]
    values: usize,
    #[arg(long, default_value_t = worlds::DEFAULT_GROUP_SIZE)]
    group_size: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Writes `text` to `out` (via a temporary sibling, so errors never leave a
/// partial file) or to standard output.
fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let tmp = path.with_extension("partial");
            std::fs::write(&tmp, text)
                .and_then(|_| std::fs::rename(&tmp, path))
                .map_err(|e| {
                    let _ = std::fs::remove_file(&tmp);
                    Failure::Runtime(format!("{}: {e}", path.display()))
                })
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Runtime(e.to_string()))
        }
    }
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let (catalog, frequencies) = args.config.load().map_err(Failure::Usage)?;
    let mut envs = Vec::new();
    for e in &args.env {
        let add: &[EnvArg] = match e {
            EnvArg::All => &[EnvArg::Spacecraft, EnvArg::RandomLow, EnvArg::RandomHigh],
            other => std::slice::from_ref(other),
        };
        for a in add {
            if !envs.contains(a) {
                envs.push(*a);
            }
        }
    }
    let environments = envs
        .into_iter()
        .map(|e| {
            let env = match e {
                EnvArg::RandomLow => Environment::random_low(),
                EnvArg::RandomHigh => Environment::random_high(),
                _ => return Environment::Spacecraft,
            };
            match env {
                Environment::Random { name, template } => Environment::Random {
                    name,
                    template: RandomWorldSpec {
                        n_entities: args.entities,
                        values_per_property: args.values,
                        group_size: args.group_size,
                        ..template
                    },
                },
                other => other,
            }
        })
        .collect();
    let mut systems: Vec<System> = Vec::new();
    for s in &args.systems {
        if !systems.contains(&(*s).into()) {
            systems.push((*s).into());
        }
    }

    let spec = BenchmarkSpec {
        trials_per_iteration: args.trials,
        iterations: args.iterations,
        limits: Limits {
            max_questions: args.max_questions,
        },
        catalog,
        frequencies,
        ..BenchmarkSpec::new(systems, environments, args.seed)
    };
    spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let report = run_benchmark(&spec).map_err(|e| Failure::Runtime(e.to_string()))?;
    let format = match args.format {
        FormatArg::Table => ReportFormat::Table,
        FormatArg::Delimited => ReportFormat::Delimited,
        FormatArg::Structured => ReportFormat::Structured,
    };
    let text = emit_report(&report, format).map_err(|e| Failure::Runtime(e.to_string()))?;
    emit(&text, args.out.as_deref())
}

fn load_world(spec: &str) -> Result<World, Failure> {
    if spec == "spacecraft" {
        return Ok(spacecraft_world());
    }
    World::load(spec).map_err(|e| Failure::Runtime(format!("{spec}: {e}")))
}

fn print_transcript(record: &EpisodeRecord, out: &mut impl Write) -> io::Result<()> {
    match &record.target {
        Some(t) => writeln!(
            out,
            "instruction: {} (target {t})",
            record.instruction_label
        )?,
        None => writeln!(out, "instruction: {}", record.instruction_label)?,
    }
    for (i, turn) in record.transcript.iter().enumerate() {
        writeln!(
            out,
            "Q{} [{}] {} -> {}",
            i + 1,
            turn.question.type_name,
            turn.question.surface,
            turn.answer
        )?;
    }
    writeln!(
        out,
        "resolved: {} after {} question(s)",
        record.resolved, record.question_count
    )
}

fn cmd_episode(args: EpisodeArgs) -> Result<(), Failure> {
    let (catalog, frequencies) = args.config.load().map_err(Failure::Usage)?;
    let world = load_world(&args.world)?;
    let agent: AgentPolicy = System::from(args.agent).policy(&frequencies, args.seed);
    let limits = Limits {
        max_questions: args.max_questions,
    };

    let record = match args.oracle {
        OracleArg::Sim => {
            let target = args
                .target
                .as_deref()
                .ok_or_else(|| Failure::Usage("--target is required with --oracle sim".into()))?;
            run_episode(&world, target, &agent, &catalog, limits)
        }
        OracleArg::Human => {
            let label = match (&args.label, &args.target) {
                (Some(l), _) => l.clone(),
                (None, Some(t)) => world
                    .entity_index(t)
                    .map(|i| world.entities()[i].label.clone())
                    .ok_or_else(|| {
                        Failure::Runtime(format!("unknown referent: no entity has id `{t}`"))
                    })?,
                (None, None) => {
                    return Err(Failure::Usage(
                        "--label or --target is required with --oracle human".into(),
                    ))
                }
            };
            println!("instruction: {label}");
            let stdin = io::stdin().lock();
            let stdout = io::stdout();
            let mut oracle = HumanOracle::new(&world, stdin, stdout.lock());
            let r = run_dialogue(&world, &label, &agent, &catalog, &mut oracle, limits);
            drop(oracle);
            r
        }
    }
    .map_err(|e| Failure::Runtime(e.to_string()))?;

    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let res = if args.json || args.oracle == OracleArg::Human {
        // human sessions always end with the structured record
        serde_json::to_writer_pretty(&mut out, &record)
            .map_err(io::Error::from)
            .and_then(|_| writeln!(out))
    } else {
        print_transcript(&record, &mut out)
    };
    res.and_then(|_| out.flush())
        .map_err(|e| Failure::Runtime(e.to_string()))
}

fn cmd_genworld(args: GenworldArgs) -> Result<(), Failure> {
    let varying = args.varying.unwrap_or(match args.variance {
        Variance::Low => worlds::LOW_VARIANCE,
        Variance::High => args.properties,
    });
    let spec = RandomWorldSpec {
        n_entities: args.entities,
        n_properties: args.properties,
        n_varying: varying,
        values_per_property: args.values,
        group_size: args.group_size,
        seed: args.seed,
    };
    let world = generate_random_world(&spec).map_err(|e| Failure::Usage(e.to_string()))?;
    let text = world
        .to_config_string()
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    emit(&text, args.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bench(a) => cmd_bench(a),
        Command::Episode(a) => cmd_episode(a),
        Command::Genworld(a) => cmd_genworld(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
