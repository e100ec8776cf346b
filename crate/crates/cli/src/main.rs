//! Batch front end for the bag-of-genres pipeline.
//!
//! Every subcommand is a thin wrapper over `bog_core::pipeline`: parse
//! arguments, load the configuration and the artifacts a stage needs, run
//! it, and report what was written. Exit codes: 0 on success, 1 for invalid
//! input or configuration, 2 for I/O and file-format failures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bog_core::manifest::Split;
use bog_core::pipeline::{
    run_compare, run_encode, run_evaluate, run_extract, run_train, run_train_sweep, OutputLayout,
    RunConfig,
};
use bog_core::synth::{generate, SynthSpec};
use bog_core::{classifier, DatasetManifest, Error, FeatureCache, Result};

#[derive(Parser)]
#[command(name = "bog", version, about = "Bag-of-genres video retrieval pipeline")]
struct Cli {
    /// Experiment configuration (TOML); built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Overrides the seed from the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Directory for produced artifacts.
    #[arg(long, global = true, default_value = "out")]
    output: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render a synthetic genre-colored dataset with a manifest.
    Synth(SynthArgs),
    /// Extract frame descriptors into a resumable cache.
    Extract(ExtractArgs),
    /// Train the genre dictionary on cached train-split features.
    Train(TrainArgs),
    /// Encode videos into bag-of-genres histograms.
    Encode(EncodeArgs),
    /// Run replicated retrieval and write evaluation reports.
    Evaluate(EvaluateArgs),
    /// Compare two per-class score files with paired intervals.
    Compare(CompareArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SplitArg {
    Train,
    Test,
    All,
}

impl SplitArg {
    fn splits(self) -> Vec<Split> {
        match self {
            SplitArg::Train => vec![Split::Train],
            SplitArg::Test => vec![Split::Test],
            SplitArg::All => vec![Split::Train, Split::Test],
        }
    }

    fn single(self) -> Split {
        match self {
            SplitArg::Train => Split::Train,
            SplitArg::Test => Split::Test,
            SplitArg::All => unreachable!("validated by clap value_parser"),
        }
    }
}

#[derive(Args)]
struct SynthArgs {
    /// Directory to render the dataset into.
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, default_value_t = SynthSpec::default().genres)]
    genres: usize,
    #[arg(long, default_value_t = SynthSpec::default().videos_per_genre)]
    videos_per_genre: usize,
    #[arg(long, default_value_t = SynthSpec::default().frames_per_video)]
    frames_per_video: usize,
    /// Appearance noise in [0, 1]: hue jitter, clutter shapes, pixel noise.
    #[arg(long, default_value_t = SynthSpec::default().noise)]
    noise: f64,
    #[arg(long, default_value_t = SynthSpec::default().frame_size)]
    frame_size: usize,
    /// Fraction of each genre's videos assigned to the train split.
    #[arg(long, default_value_t = SynthSpec::default().train_fraction)]
    train_fraction: f64,
    /// Overwrite into a non-empty dataset directory.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct ExtractArgs {
    /// Dataset manifest CSV.
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, value_enum, default_value_t = SplitArg::All)]
    split: SplitArg,
}

#[derive(Args)]
struct TrainArgs {
    /// Dataset manifest CSV.
    #[arg(long)]
    manifest: PathBuf,
    /// Overrides frames_per_genre from the configuration.
    #[arg(long)]
    frames_per_genre: Option<usize>,
    /// Trains one model per value (e.g. `--sweep 100,500,800`) and writes an
    /// accuracy row for each.
    #[arg(long, value_delimiter = ',')]
    sweep: Vec<usize>,
    /// Also score the model on the test split's cached frames.
    #[arg(long)]
    with_test_accuracy: bool,
}

#[derive(Args)]
struct EncodeArgs {
    /// Dataset manifest CSV.
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, value_enum, default_value_t = SplitArg::Test)]
    split: SplitArg,
    /// Also write the histograms as CSV.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Dataset manifest CSV.
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, value_enum, default_value_t = SplitArg::Test)]
    split: SplitArg,
}

#[derive(Args)]
struct CompareArgs {
    /// Per-class score CSV for the first system.
    #[arg(long)]
    a: PathBuf,
    /// Per-class score CSV for the second system.
    #[arg(long)]
    b: PathBuf,
    #[arg(long, default_value = "a")]
    name_a: String,
    #[arg(long, default_value = "b")]
    name_b: String,
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.train.seed = seed;
    }
    Ok(cfg)
}

/// Writes the exact configuration a stage ran under next to its outputs.
fn write_sidecar(cfg: &RunConfig, layout: &OutputLayout) -> Result<()> {
    cfg.save(layout.config_sidecar())
}

fn require_split(arg: SplitArg, what: &str) -> Result<Split> {
    if arg == SplitArg::All {
        return Err(Error::invalid_input(format!(
            "{what} operates on one split; pass --split train or --split test"
        )));
    }
    Ok(arg.single())
}

fn cmd_synth(cli: &Cli, args: &SynthArgs) -> Result<()> {
    let spec = SynthSpec {
        genres: args.genres,
        videos_per_genre: args.videos_per_genre,
        frames_per_video: args.frames_per_video,
        noise: args.noise,
        seed: cli.seed.unwrap_or(SynthSpec::default().seed),
        frame_size: args.frame_size,
        train_fraction: args.train_fraction,
    };
    let manifest = generate(&spec, &args.dataset, args.force)?;
    println!(
        "synthesized {} videos ({} genres, {} frames each) under {}",
        manifest.videos.len(),
        spec.genres,
        spec.frames_per_video,
        args.dataset.display()
    );
    println!("manifest: {}", args.dataset.join("manifest.csv").display());
    Ok(())
}

fn cmd_extract(cli: &Cli, args: &ExtractArgs) -> Result<()> {
    let cfg = load_config(cli)?;
    let manifest = DatasetManifest::load(&args.manifest)?;
    let layout = OutputLayout::new(&cli.output, cfg.descriptor);
    for split in args.split.splits() {
        let path = layout.feature_cache(split);
        let (cache, summary) = run_extract(&manifest, &cfg, split, &path)?;
        println!(
            "{split}: extracted {} frames, reused {} cached, {} feature vectors in {}",
            summary.extracted,
            summary.skipped,
            cache.len(),
            path.display()
        );
        for (frame, why) in &summary.errors {
            eprintln!("warning: skipped frame {}: {why}", frame.display());
        }
    }
    write_sidecar(&cfg, &layout)
}

fn cmd_train(cli: &Cli, args: &TrainArgs) -> Result<()> {
    let mut cfg = load_config(cli)?;
    if let Some(n) = args.frames_per_genre {
        cfg.train.frames_per_genre = n;
    }
    let manifest = DatasetManifest::load(&args.manifest)?;
    let layout = OutputLayout::new(&cli.output, cfg.descriptor);
    let cache_path = layout.feature_cache(Split::Train);
    if !cache_path.exists() {
        return Err(Error::invalid_input(format!(
            "feature cache {} not found; run `bog extract --split train` first",
            cache_path.display()
        )));
    }
    let cache = FeatureCache::load(&cache_path)?;
    let test_cache = if args.with_test_accuracy {
        Some(FeatureCache::load(layout.feature_cache(Split::Test))?)
    } else {
        None
    };
    if !args.sweep.is_empty() {
        let reports = run_train_sweep(
            &manifest,
            &cache,
            &cfg,
            test_cache.as_ref(),
            &args.sweep,
            &layout,
        )?;
        for (n, report) in args.sweep.iter().zip(&reports) {
            let acc = report
                .held_out_accuracy
                .map(|a| format!("{a:.4}"))
                .unwrap_or_else(|| "n/a".into());
            println!(
                "N={n}: trained on {} frames, held-out accuracy {acc}, model {}",
                report.train_frames,
                layout.model_for_n(*n).display()
            );
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
        }
        println!("sweep rows: {}", layout.train_sweep_csv().display());
        return write_sidecar(&cfg, &layout);
    }
    let (_, report) = run_train(
        &manifest,
        &cache,
        &cfg,
        test_cache.as_ref(),
        &layout.model(),
        Some(&layout.train_report()),
    )?;
    println!(
        "trained {} dictionary on {} frames ({} per genre requested)",
        report.descriptor, report.train_frames, report.frames_per_genre
    );
    if let Some(acc) = report.held_out_accuracy {
        println!(
            "held-out frame accuracy: {acc:.4} over {} frames",
            report.held_out_frames
        );
    }
    if let Some(acc) = report.test_accuracy {
        println!("test frame accuracy: {acc:.4}");
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!("model: {}", layout.model().display());
    println!("report: {}", layout.train_report().display());
    write_sidecar(&cfg, &layout)
}

fn cmd_encode(cli: &Cli, args: &EncodeArgs) -> Result<()> {
    let cfg = load_config(cli)?;
    let manifest = DatasetManifest::load(&args.manifest)?;
    let layout = OutputLayout::new(&cli.output, cfg.descriptor);
    let split = require_split(args.split, "encode")?;
    let cache = FeatureCache::load(layout.feature_cache(split))?;
    let model = classifier::load_model(layout.model())?;
    let bog_path = layout.bog(split);
    let csv_path = layout.bog_csv(split);
    let (file, summary) = run_encode(
        &manifest,
        &cache,
        &model,
        &layout.model(),
        split,
        &bog_path,
        args.csv.then_some(csv_path.as_path()),
    )?;
    println!(
        "encoded {} videos into {}-bin histograms: {}",
        summary.encoded,
        file.dim(),
        bog_path.display()
    );
    if args.csv {
        println!("csv: {}", csv_path.display());
    }
    for (video, why) in &summary.errors {
        eprintln!("warning: video {video} not encoded: {why}");
    }
    write_sidecar(&cfg, &layout)
}

fn cmd_evaluate(cli: &Cli, args: &EvaluateArgs) -> Result<()> {
    let cfg = load_config(cli)?;
    let manifest = DatasetManifest::load(&args.manifest)?;
    let layout = OutputLayout::new(&cli.output, cfg.descriptor);
    let split = require_split(args.split, "evaluate")?;
    let bog = bog_core::cache::BogFile::load(layout.bog(split))?;
    let report = run_evaluate(&manifest, &bog, &cfg, &layout)?;
    let inner = &report.report;
    println!(
        "MAP {:.4} [{:.4}, {:.4}], P@{} {:.4} [{:.4}, {:.4}] over {} replications",
        inner.map_mean,
        inner.map_ci.0,
        inner.map_ci.1,
        cfg.k,
        inner.p10_mean,
        inner.p10_ci.0,
        inner.p10_ci.1,
        cfg.replication_seeds.len()
    );
    for w in &report.report.warnings {
        eprintln!("warning: {w}");
    }
    println!("report: {}", layout.eval_json().display());
    println!("csv: {}", layout.eval_csv().display());
    println!(
        "trec runs: {} .. {}",
        layout.trec_run(0).display(),
        layout.trec_run(cfg.replication_seeds.len() - 1).display()
    );
    write_sidecar(&cfg, &layout)
}

fn cmd_compare(cli: &Cli, args: &CompareArgs) -> Result<()> {
    let cfg = load_config(cli)?;
    let out = cli.output.join("comparison.md");
    let rows = run_compare(
        &args.a,
        &args.b,
        &args.name_a,
        &args.name_b,
        cfg.confidence_level,
        &out,
    )?;
    for row in &rows {
        println!(
            "{}: difference in [{:+.4}, {:+.4}], {}",
            row.metric,
            row.lo,
            row.hi,
            if row.significant {
                "significant"
            } else {
                "not significant"
            }
        );
    }
    println!("table: {}", out.display());
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Synth(args) => cmd_synth(cli, args),
        Command::Extract(args) => cmd_extract(cli, args),
        Command::Train(args) => cmd_train(cli, args),
        Command::Encode(args) => cmd_encode(cli, args),
        Command::Evaluate(args) => cmd_evaluate(cli, args),
        Command::Compare(args) => cmd_compare(cli, args),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes, usage mistakes are
            // invalid input.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
