//! Command-line surface: `seed`, `generate`, `evolve`, `analyze`.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analyzer::StyleReport;
use crate::composer::{evolve, generate, GeneratorConfig, DEFAULT_SEED};
use crate::error::Error;
use crate::io::{load_graph, load_graph_pair, save_graph, save_trace, write_melody_file};
use crate::manifest::{CurveSettings, GeneratorSettings, RunManifest};
use crate::memristor::ConductanceCurve;
use crate::seeder::seed_graphs;
use crate::{Curve, Graph};

#[derive(Debug, Parser)]
#[command(
    name = "memcompose",
    version,
    about = "Memristor-network melody generator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build pitch and tempo matrices from a seed corpus.
    Seed(SeedArgs),
    /// Generate a piece from seeded matrices.
    Generate(GenerateArgs),
    /// Run a long feedback generation and snapshot the matrices.
    Evolve(EvolveArgs),
    /// Report symmetry, reducibility and usage for state matrices.
    Analyze(AnalyzeArgs),
}

fn parse_curve(text: &str) -> Result<CurveSettings, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [g_min, g_max, kappa] = parts.as_slice() else {
        return Err("expected gmin,gmax,kappa".into());
    };
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| format!("invalid number `{s}`"))
    };
    let settings = CurveSettings {
        g_min: num(g_min)?,
        g_max: num(g_max)?,
        kappa: num(kappa)?,
    };
    ConductanceCurve::new(settings.g_min, settings.g_max, settings.kappa)
        .map_err(|e| e.to_string())?;
    Ok(settings)
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// Corpus manifest (JSON or `file, transpose` lines), directory, or `.mel` file.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Transposition for corpus entries that do not set their own.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub transpose: i32,
    /// Conductance curve as `gmin,gmax,kappa`.
    #[arg(long, value_parser = parse_curve)]
    pub curve: Option<CurveSettings>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Directory holding pitch-states.csv and tempo-states.csv.
    #[arg(long, conflicts_with = "corpus", required_unless_present = "corpus")]
    pub matrices: Option<PathBuf>,
    /// Seed in memory from a corpus instead of reading matrices.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub transpose: i32,
    /// Conductance curve as `gmin,gmax,kappa`.
    #[arg(long, value_parser = parse_curve)]
    pub curve: Option<CurveSettings>,
}

#[derive(Debug, Args)]
pub struct GeneratorArgs {
    /// RNG seed (defaults to a fixed constant).
    #[arg(long, conflicts_with = "entropy")]
    pub seed: Option<u64>,
    /// Draw the RNG seed from the operating system.
    #[arg(long)]
    pub entropy: bool,
    /// Notes to generate (excerpt length for `evolve`).
    #[arg(long)]
    pub notes: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub inc_step: Option<f64>,
    #[arg(long)]
    pub dec_step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub generator: GeneratorArgs,
    /// Generate without feeding spikes back into the matrices.
    #[arg(long)]
    pub no_feedback: bool,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub generator: GeneratorArgs,
    /// Ascending note counts at which to snapshot.
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
    pub snapshots: Vec<usize>,
    /// Total notes to run (defaults to the last snapshot).
    #[arg(long)]
    pub total: Option<usize>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// State CSVs (24x24 pitch or 9x9 tempo).
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Reference state CSV for drift; compared with every file of the same size.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Weight above which a transition counts as used (default: the curve's gmin).
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Conductance curve as `gmin,gmax,kappa`.
    #[arg(long, value_parser = parse_curve)]
    pub curve: Option<CurveSettings>,
    /// Directory for report.json; without it the JSON goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) | Error::InvalidCurve(_) => CliError::Usage(e.to_string()),
            other => CliError::Data(other),
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Seed(args) => cmd_seed(&args),
        Command::Generate(args) => cmd_generate(&args),
        Command::Evolve(args) => cmd_evolve(&args),
        Command::Analyze(args) => cmd_analyze(&args),
    }
}

fn make_curve(
    flag: Option<CurveSettings>,
    manifest: Option<CurveSettings>,
) -> Result<Curve, CliError> {
    match flag.or(manifest) {
        Some(c) => Ok(ConductanceCurve::new(c.g_min, c.g_max, c.kappa)?),
        None => Ok(ConductanceCurve::default()),
    }
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Data(Error::io(dir, e)))
}

fn seed_from_manifest(manifest: &RunManifest, curve: Curve) -> Result<(Graph, Graph), CliError> {
    let corpus = manifest.load_corpus()?;
    Ok(seed_graphs(&corpus.normalized(), curve, 1.0)?)
}

fn load_inputs(input: &InputArgs) -> Result<(Graph, Graph, GeneratorSettings), CliError> {
    match (&input.matrices, &input.corpus) {
        (Some(dir), _) => {
            let curve = make_curve(input.curve, None)?;
            let (p, t) = load_graph_pair(dir, curve)?;
            Ok((p, t, GeneratorSettings::default()))
        }
        (None, Some(corpus)) => {
            let manifest = RunManifest::load(corpus, input.transpose)?;
            let curve = make_curve(input.curve, manifest.curve)?;
            let (p, t) = seed_from_manifest(&manifest, curve)?;
            Ok((p, t, manifest.generator))
        }
        (None, None) => Err(CliError::Usage(
            "one of --matrices or --corpus is required".into(),
        )),
    }
}

fn make_config(
    args: &GeneratorArgs,
    manifest: &GeneratorSettings,
    feedback: bool,
) -> Result<GeneratorConfig, CliError> {
    let defaults = GeneratorConfig::default();
    let rng_seed = if args.entropy {
        let seed = rand::random::<u64>();
        eprintln!("seed: {seed}");
        seed
    } else {
        args.seed.or(manifest.seed).unwrap_or(DEFAULT_SEED)
    };
    let config = GeneratorConfig {
        rng_seed,
        gaussian_mu: args.mu.or(manifest.mu).unwrap_or(defaults.gaussian_mu),
        gaussian_sigma: args
            .sigma
            .or(manifest.sigma)
            .unwrap_or(defaults.gaussian_sigma),
        inc_step: args
            .inc_step
            .or(manifest.inc_step)
            .unwrap_or(defaults.inc_step),
        dec_step: args
            .dec_step
            .or(manifest.dec_step)
            .unwrap_or(defaults.dec_step),
        note_count: args.notes.or(manifest.notes).unwrap_or(defaults.note_count),
        feedback: feedback && manifest.feedback.unwrap_or(true),
        ..defaults
    };
    config.validate()?;
    Ok(config)
}

pub fn cmd_seed(args: &SeedArgs) -> Result<(), CliError> {
    let manifest = RunManifest::load(&args.corpus, args.transpose)?;
    let curve = make_curve(args.curve, manifest.curve)?;
    let (pitch, tempo) = seed_from_manifest(&manifest, curve)?;
    create_dir(&args.out)?;
    save_graph(&args.out, &pitch)?;
    save_graph(&args.out, &tempo)?;
    println!(
        "seeded {} melodies into {}",
        manifest.entries.len(),
        args.out.display()
    );
    Ok(())
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<(), CliError> {
    let (pitch, tempo, settings) = load_inputs(&args.input)?;
    let config = make_config(&args.generator, &settings, !args.no_feedback)?;
    let piece = generate(pitch, tempo, &config)?;
    create_dir(&args.out)?;
    let melody = piece.melody(&format!("generated, seed {}", config.rng_seed));
    write_melody_file(&args.out.join("piece.mel"), &melody)?;
    save_trace(&args.out.join("trace.csv"), &piece.trace)?;
    if config.feedback {
        let final_dir = args.out.join("final");
        save_graph(&final_dir, &piece.pitch_graph)?;
        save_graph(&final_dir, &piece.tempo_graph)?;
    }
    println!(
        "generated {} notes into {}",
        piece.events.len(),
        args.out.display()
    );
    Ok(())
}

pub fn cmd_evolve(args: &EvolveArgs) -> Result<(), CliError> {
    if args.snapshots.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(
            "--snapshots must be strictly ascending".into(),
        ));
    }
    let last = args.snapshots.last().copied().unwrap_or(0);
    let total = args.total.unwrap_or(last);
    if total < last {
        return Err(CliError::Usage(format!(
            "--total {total} is below the last snapshot {last}"
        )));
    }
    let (pitch, tempo, settings) = load_inputs(&args.input)?;
    let config = make_config(&args.generator, &settings, true)?;
    let evolution = evolve(pitch, tempo, &config, total, &args.snapshots)?;
    create_dir(&args.out)?;
    for snap in &evolution.snapshots {
        let dir = args.out.join(format!("snapshot-{:06}", snap.at));
        save_graph(&dir, &snap.pitch)?;
        save_graph(&dir, &snap.tempo)?;
        let melody = snap.excerpt.melody(&format!(
            "excerpt after {} notes, seed {}",
            snap.at, config.rng_seed
        ));
        write_melody_file(&dir.join("excerpt.mel"), &melody)?;
        save_trace(&dir.join("excerpt-trace.csv"), &snap.excerpt.trace)?;
    }
    println!(
        "ran {total} notes, wrote {} snapshots into {}",
        evolution.snapshots.len(),
        args.out.display()
    );
    Ok(())
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let curve = make_curve(args.curve, None)?;
    let reference = args
        .reference
        .as_deref()
        .map(|p| load_graph(p, curve))
        .transpose()?;
    let mut stdout = std::io::stdout().lock();
    let mut reports = Vec::new();
    for file in &args.files {
        let graph = load_graph(file, curve)?;
        let reference = reference
            .as_ref()
            .filter(|r| r.alphabet() == graph.alphabet());
        if args.reference.is_some() && reference.is_none() {
            return Err(CliError::Data(Error::format(
                file,
                "reference matrix has a different size",
            )));
        }
        let report = StyleReport::for_graph(&graph, args.threshold, reference)
            .map_err(|e| CliError::Data(Error::format(file, e.to_string())))?;
        // A closed stdout (e.g. piped into `head`) is not an error.
        let _ = write!(stdout, "{}\n{report}", file.display());
        reports.push(report);
    }
    let json = serde_json::to_string_pretty(&reports).expect("report serializes");
    match &args.out {
        Some(dir) => {
            create_dir(dir)?;
            let path = dir.join("report.json");
            fs::write(&path, json + "\n").map_err(|e| CliError::Data(Error::io(&path, e)))?;
        }
        None => {
            let _ = writeln!(stdout, "{json}");
        }
    }
    Ok(())
}

/// Parses `args` and runs, returning the process exit code.
pub fn main_with_args<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
