use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use acdaa::ensemble::{concordance, is_degenerate, run_external, uniformity, EnsembleConfig};
use acdaa::input::{input_formats, Dataset, FormatOptions};
use acdaa::matrix_io::labels_to_csv;
use acdaa::methods::{methods, MethodOptions};
use acdaa::synthetic::{parse_shape, SyntheticData};
use acdaa::{Classification, SolutionSet};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "acdaa", version, about = "Automatic classification by frequency minimax graph dichotomy")]
struct Cli {
    /// Worker threads for parallel runs (defaults to all cores).
    #[arg(long, env = "ACDAA_THREADS", global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the ensemble and report the distinct classifications.
    Classify(ClassifyArgs),
    /// Complexity over a grid of k and r values.
    Sweep(SweepArgs),
    /// Concordance of repeated solutions against K-means restarts.
    CompareKmeans(CompareArgs),
    /// Write a synthetic dataset and its planted labels.
    Gen(GenArgs),
}

#[derive(Args)]
struct InputArgs {
    /// CSV file to read.
    #[arg(long)]
    input: PathBuf,
    /// One of: dissimilarity, votes, points.
    #[arg(long, default_value = "dissimilarity")]
    format: String,
    /// The first line of a vote file is a header.
    #[arg(long)]
    header: bool,
}

#[derive(Args)]
struct RunArgs {
    /// Repetitions (random paths) per dichotomy.
    #[arg(short = 'T', long = "repetitions", default_value_t = 2000)]
    repetitions: usize,
    /// Master seed; a random one is drawn and logged when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Nearest neighbors per object in the neighborhood graph.
    #[arg(long, default_value_t = 4)]
    neighbors: usize,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Dichotomies per run.
    #[arg(short, default_value_t = 10)]
    k: usize,
    /// Number of runs.
    #[arg(short, default_value_t = 10)]
    r: usize,
    /// Write the solution set JSON to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the solution set JSON instead of the summary table.
    #[arg(long)]
    json: bool,
    /// Hide classifications with a class of at most two objects.
    #[arg(long)]
    exclude_degenerate: bool,
    /// Hide classifications whose largest/smallest class ratio exceeds this.
    #[arg(long)]
    max_uniformity: Option<f64>,
    /// Only show classifications with this many classes.
    #[arg(long)]
    num_classes: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Range of k, as `lo-hi` or a single value.
    #[arg(long, default_value = "5-10", value_parser = parse_range)]
    ks: RangeInclusive<usize>,
    /// Range of r, as `lo-hi` or a single value.
    #[arg(long, default_value = "5-10", value_parser = parse_range)]
    rs: RangeInclusive<usize>,
    /// Write the CSV grid to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Number of classes for both methods.
    #[arg(short = 'K', long = "classes", default_value_t = 4)]
    classes: usize,
    /// K-means restarts, and runs of the divisive-agglomerative method.
    #[arg(long, default_value_t = 5)]
    restarts: usize,
    /// Maximal Lloyd iterations per K-means restart.
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    /// Print a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Shape spec: `name` or `name:p1,p2,...`.
    shape: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Data CSV path; labels go next to it as `<stem>.labels.csv`.
    #[arg(long)]
    out: PathBuf,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (lo, hi) = s.split_once('-').unwrap_or((s, s));
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("`{t}` is not a count"));
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo == 0 || lo > hi {
        return Err(format!("range {lo}-{hi} must satisfy 1 <= lo <= hi"));
    }
    Ok(lo..=hi)
}

fn load(args: &InputArgs) -> Result<Dataset> {
    let format = input_formats().create(&args.format, &FormatOptions { header: args.header })?;
    let text = fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let data = format
        .parse(&text)
        .with_context(|| format!("parsing {} as {}", args.input.display(), format.name()))?;
    log::info!("loaded {} objects from {}", data.len(), args.input.display());
    Ok(data)
}

fn seed(run: &RunArgs) -> u64 {
    run.seed.unwrap_or_else(|| {
        let s = rand::random();
        log::warn!("no --seed given, using {s}");
        s
    })
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn profile(c: &Classification) -> String {
    let sizes: Vec<String> = c.size_profile().iter().map(|s| s.to_string()).collect();
    sizes.join(" ")
}

fn summary(set: &SolutionSet, args: &ClassifyArgs) -> String {
    let mut out = format!(
        "k={} r={} T={} seed={}  distinct={}  complexity={:.6}\n",
        set.config.k,
        set.config.runs,
        set.config.repetitions,
        set.config.seed,
        set.distinct.len(),
        set.complexity
    );
    out.push_str(&format!(
        "{:>4} {:>7} {:>12} {:>9} {:>10} {:>10}  sizes\n",
        "id", "classes", "multiplicity", "stability", "degenerate", "uniformity"
    ));
    for (id, sol) in set.distinct.iter().enumerate() {
        let c = &sol.classification;
        let u = uniformity(c);
        if (args.exclude_degenerate && is_degenerate(c))
            || args.max_uniformity.is_some_and(|m| u > m)
            || args.num_classes.is_some_and(|n| c.num_classes() != n)
        {
            continue;
        }
        out.push_str(&format!(
            "{:>4} {:>7} {:>12} {:>9.4} {:>10} {:>10.3}  {}\n",
            id,
            c.num_classes(),
            sol.multiplicity,
            sol.stability,
            is_degenerate(c),
            u,
            profile(c)
        ));
    }
    out
}

fn classify(args: &ClassifyArgs) -> Result<()> {
    let data = load(&args.input)?;
    let config = EnsembleConfig {
        k: args.k,
        runs: args.r,
        repetitions: args.run.repetitions,
        seed: seed(&args.run),
        neighbors: args.run.neighbors,
    };
    let set = run_external(&data.dissimilarity, config)?;
    let json = set.to_json()?;
    if let Some(path) = &args.out {
        write_out(path, &format!("{json}\n"))?;
    }
    if args.json {
        println!("{json}");
    } else {
        print!("{}", summary(&set, args));
    }
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let data = load(&args.input)?;
    let base = EnsembleConfig {
        repetitions: args.run.repetitions,
        seed: seed(&args.run),
        neighbors: args.run.neighbors,
        ..Default::default()
    };
    let grid = acdaa::sweep::sweep(&data.dissimilarity, args.ks.clone(), args.rs.clone(), base)?;
    match &args.out {
        Some(path) => write_out(path, &grid.to_csv()),
        None => {
            print!("{}", grid.to_csv());
            Ok(())
        }
    }
}

fn compare_kmeans(args: &CompareArgs) -> Result<()> {
    if args.restarts == 0 {
        bail!("--restarts must be at least 1");
    }
    let data = load(&args.input)?;
    if data.vectors.is_none() {
        bail!("compare-kmeans needs vector input (votes or points), not a dissimilarity matrix");
    }
    let options = MethodOptions {
        classes: args.classes,
        repetitions: args.run.repetitions,
        neighbors: args.run.neighbors,
        max_iters: args.max_iters,
    };
    let seed = seed(&args.run);
    let registry = methods();
    let mut report = Vec::new();
    for name in ["daa", "kmeans"] {
        let method = registry.create(name, &options)?;
        let solutions = method.solutions(&data, args.restarts, seed)?;
        report.push((name, concordance(&solutions)?, solutions));
    }

    if args.json {
        let methods: Vec<serde_json::Value> = report
            .iter()
            .map(|(name, conc, sols)| {
                serde_json::json!({
                    "method": name,
                    "concordance": conc,
                    "profiles": sols.iter().map(|c| c.size_profile()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let doc = serde_json::json!({ "classes": args.classes, "restarts": args.restarts, "seed": seed, "methods": methods });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("K={} restarts={} seed={}", args.classes, args.restarts, seed);
        for (name, conc, sols) in &report {
            println!("{name}: concordance {conc:.6}");
            for (i, c) in sols.iter().enumerate() {
                println!("  {i}: {}", profile(c));
            }
        }
    }
    Ok(())
}

fn gen(args: &GenArgs) -> Result<()> {
    let synthetic = parse_shape(&args.shape)?.generate(args.seed)?;
    let text = match &synthetic.data {
        SyntheticData::Points(p) => p.to_csv(),
        SyntheticData::Votes(v) => v.to_csv(),
    };
    write_out(&args.out, &text)?;
    let stem = args.out.file_stem().and_then(|s| s.to_str()).unwrap_or("data");
    let labels = args.out.with_file_name(format!("{stem}.labels.csv"));
    write_out(&labels, &labels_to_csv(&synthetic.labels))?;
    log::info!("wrote {} and {}", args.out.display(), labels.display());
    Ok(())
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the worker pool")?;
    }
    match &cli.command {
        Command::Classify(a) => classify(a),
        Command::Sweep(a) => sweep(a),
        Command::CompareKmeans(a) => compare_kmeans(a),
        Command::Gen(a) => gen(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
