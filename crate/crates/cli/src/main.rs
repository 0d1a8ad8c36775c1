//! Command-line front end: run seeded capacity suites, inspect single
//! trials, check the pattern generator and re-render charts.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hopcap_core::harness::{
    comparison_svg, emit_grid, emit_results, read_results_csv, run_suite, run_trial,
    verify_generator, OutputFormat, SuiteConfig, TrialConfig,
};
use hopcap_core::{Error, RecallSemantics, Result, SuiteSummary, TrialRecord, WeightingMode};

/// Largest network size accepted without the `--extended` opt-in.
const DESK_SCALE_LIMIT: usize = 2000;

#[derive(Parser)]
#[command(
    name = "hopcap",
    version,
    about = "Hopfield capacity experiments with a crosstalk stopping rule"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run Monte Carlo suites and write results to a directory
    Run(RunArgs),
    /// Run one trial and print its interference trace
    Single(SingleArgs),
    /// Sweep the pattern generator across a parameter grid and report
    /// how well measured statistics match the requested ones
    VerifyGen(VerifyGenArgs),
    /// Rebuild the model comparison chart from an existing results.csv
    Plot(PlotArgs),
}

#[derive(Args, Clone)]
struct PatternArgs {
    /// Mean of the per-trial bias draw
    #[arg(long, default_value_t = 0.5)]
    bias_mean: f64,
    /// Standard deviation of the per-trial bias draw
    #[arg(long, default_value_t = 0.0)]
    bias_std: f64,
    /// Mean of the per-trial correlation draw
    #[arg(long, default_value_t = 0.0)]
    corr_mean: f64,
    /// Standard deviation of the per-trial correlation draw
    #[arg(long, default_value_t = 0.0)]
    corr_std: f64,
    /// Master seed; trial i reads generator stream i
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Monitor mode for the headline estimate: expectation, raw or exact
    #[arg(long, default_value = "expectation", value_parser = parse_weighting)]
    weighting: WeightingMode,
    /// Recall success definition: fixed-point or relax
    #[arg(long, default_value = "fixed-point", value_parser = parse_recall)]
    recall: RecallSemantics,
    /// Hard cap on stored patterns per trial (default max(32, n/2))
    #[arg(long)]
    max_patterns: Option<usize>,
    /// Feed the monitors statistics measured on the stored prefix
    /// instead of the drawn chain parameters
    #[arg(long)]
    online_stats: bool,
}

impl PatternArgs {
    fn trial_config(&self, n: usize) -> TrialConfig {
        TrialConfig {
            n,
            bias_mean: self.bias_mean,
            bias_std: self.bias_std,
            corr_mean: self.corr_mean,
            corr_std: self.corr_std,
            seed: self.seed,
            weighting: self.weighting,
            recall: self.recall,
            max_patterns: self.max_patterns,
            online_stats: self.online_stats,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Network size; omitted, the desk-scale battery n=500 and n=1000
    /// runs (plus n=3000 with --extended)
    #[arg(long)]
    n: Option<usize>,
    /// Monte Carlo trials per suite
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[command(flatten)]
    pattern: PatternArgs,
    /// Output directory
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Output formats, comma separated
    #[arg(long, value_delimiter = ',', default_value = "csv,json,svg", value_parser = parse_format)]
    format: Vec<OutputFormat>,
    /// Allow the long n=3000 suites
    #[arg(long)]
    extended: bool,
}

#[derive(Args)]
struct SingleArgs {
    /// Network size
    #[arg(long, default_value_t = 500)]
    n: usize,
    /// Trial index within the seeded stream
    #[arg(long, default_value_t = 0)]
    trial: usize,
    #[command(flatten)]
    pattern: PatternArgs,
    /// Allow network sizes past the desk-scale limit
    #[arg(long)]
    extended: bool,
}

#[derive(Args)]
struct VerifyGenArgs {
    /// Elements per pattern
    #[arg(long, default_value_t = 500)]
    n: usize,
    /// Patterns generated per grid cell
    #[arg(long, default_value_t = 200)]
    count: usize,
    /// Seed for the grid's generator streams
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output directory
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Output formats, comma separated
    #[arg(long, value_delimiter = ',', default_value = "csv,json,svg", value_parser = parse_format)]
    format: Vec<OutputFormat>,
}

#[derive(Args)]
struct PlotArgs {
    /// results.csv file, or the directory holding it
    #[arg(default_value = "results")]
    path: PathBuf,
    /// Output SVG path; defaults to comparison.svg beside the input
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_weighting(s: &str) -> Result<WeightingMode> {
    s.parse()
}

fn parse_recall(s: &str) -> Result<RecallSemantics> {
    s.parse()
}

fn parse_format(s: &str) -> Result<OutputFormat> {
    s.parse()
}

fn check_scale(n: usize, extended: bool) -> Result<()> {
    if n > DESK_SCALE_LIMIT && !extended {
        return Err(Error::InvalidArgument(format!(
            "n = {n} runs for minutes to hours; pass --extended to confirm"
        )));
    }
    Ok(())
}

fn dedup_formats(formats: &[OutputFormat]) -> Vec<OutputFormat> {
    let mut out: Vec<OutputFormat> = Vec::new();
    for f in formats {
        if !out.contains(f) {
            out.push(*f);
        }
    }
    out
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let sizes: Vec<usize> = match args.n {
        Some(n) => vec![n],
        None if args.extended => vec![500, 1000, 3000],
        None => vec![500, 1000],
    };
    for &n in &sizes {
        check_scale(n, args.extended)?;
    }
    let mut summaries = Vec::with_capacity(sizes.len());
    for n in sizes {
        let cfg = SuiteConfig {
            trial: args.pattern.trial_config(n),
            trials: args.trials,
        };
        let summary = run_suite(&cfg)?;
        print_suite(&summary);
        summaries.push(summary);
    }
    let written = emit_results(&summaries, &args.out, &dedup_formats(&args.format))?;
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn print_suite(s: &SuiteSummary) {
    let t = &s.config.trial;
    println!(
        "suite n={} bias {:.2} +/- {:.2}, corr {:.2} +/- {:.2}, {} trials, {} weighting",
        t.n, t.bias_mean, t.bias_std, t.corr_mean, t.corr_std, s.config.trials, t.weighting
    );
    println!(
        "  patterns held without loss {:.1} +/- {:.1}, flag preceded loss in {:.0}% of trials, static pick {}",
        s.c0_mean,
        s.c0_std,
        100.0 * s.safety,
        s.static_choice
    );
    if s.censored > 0 {
        println!(
            "  note: {} trial(s) hit the pattern cap before resolving",
            s.censored
        );
    }
    println!(
        "  {:<20} {:>9} {:>9} {:>12} {:>12}",
        "model", "acc mean", "acc std", "eff mean", "eff std"
    );
    for agg in &s.aggregates {
        println!(
            "  {:<20} {:>9.3} {:>9.3} {:>12.3e} {:>12.3e}",
            agg.model, agg.accuracy_mean, agg.accuracy_std, agg.efficiency_mean, agg.efficiency_std
        );
    }
}

fn cmd_single(args: SingleArgs) -> Result<()> {
    check_scale(args.n, args.extended)?;
    let cfg = args.pattern.trial_config(args.n);
    let record = run_trial(&cfg, args.trial)?;
    print_trial(&record);
    Ok(())
}

fn print_trial(r: &TrialRecord) {
    println!("trial {} at n = {}", r.trial, r.n);
    println!(
        "  drawn bias {:.4}, correlation {:.4}; measured {:.4} and {:.4} on the stored prefix",
        r.drawn_bias, r.drawn_correlation, r.measured_bias, r.measured_correlation
    );
    println!("  pattern stream seed {}", r.pattern_seed);
    println!();
    println!("  store  expectation       raw     exact");
    for k in 0..r.traces.expectation.len() {
        let store = k + 1;
        let mut marks = Vec::new();
        if store == r.estimates.expectation {
            marks.push("expectation flag");
        }
        if store == r.estimates.raw {
            marks.push("raw flag");
        }
        if store == r.estimates.exact {
            marks.push("exact flag");
        }
        if store == r.true_capacity + 1 {
            marks.push("first loss");
        }
        let suffix = if marks.is_empty() {
            String::new()
        } else {
            format!("   <- {}", marks.join(", "))
        };
        println!(
            "  {:>5}  {:>11.4}  {:>8.4}  {:>8.4}{}",
            store, r.traces.expectation[k], r.traces.raw[k], r.traces.exact[k], suffix
        );
    }
    println!();
    println!(
        "  patterns held without loss: {}{}",
        r.true_capacity,
        if r.censored {
            " (pattern cap hit, censored)"
        } else {
            ""
        }
    );
    for s in &r.statics {
        match s.gamma {
            Some(g) => println!("  static {} = {:.1} (gamma {:.2})", s.model, s.capacity, g),
            None => println!("  static {} = {:.1}", s.model, s.capacity),
        }
    }
    println!();
    println!(
        "  {:<20} {:>6} {:>9} {:>12} {:>9}",
        "model", "stop", "accuracy", "efficiency", "recalled"
    );
    for m in &r.models {
        println!(
            "  {:<20} {:>6} {:>9.3} {:>12.3e} {:>9}",
            m.model, m.estimate, m.accuracy, m.efficiency, m.recalled_at_stop
        );
    }
}

fn cmd_verify_gen(args: VerifyGenArgs) -> Result<()> {
    let report = verify_generator(args.n, args.count, args.seed)?;
    println!(
        "generator grid: n = {}, {} patterns per cell, seed {}",
        report.n, report.count, report.seed
    );
    let prone = report.cells.iter().filter(|c| c.deviation_prone).count();
    println!(
        "  {} cells, {} flagged deviation-prone, worst clean-cell error {:.4}",
        report.cells.len(),
        prone,
        report.worst_clean_error()
    );
    for cell in &report.cells {
        let err = cell.bias_error.max(cell.corr_error);
        if err > 0.05 {
            eprintln!(
                "warning: cell bias {:.2} corr {:.1} is off by {:.3}{}",
                cell.bias,
                cell.correlation,
                err,
                if cell.deviation_prone {
                    " (deviation-prone)"
                } else {
                    ""
                }
            );
        }
    }
    let written = emit_grid(&report, &args.out, &dedup_formats(&args.format))?;
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_plot(args: PlotArgs) -> Result<()> {
    let csv = if args.path.is_dir() {
        args.path.join("results.csv")
    } else {
        args.path.clone()
    };
    if !csv.is_file() {
        return Err(Error::InvalidArgument(format!(
            "no results table at {}",
            csv.display()
        )));
    }
    let rows = read_results_csv(&csv)?;
    let svg = comparison_svg(&rows)?;
    let out = args
        .out
        .unwrap_or_else(|| csv.with_file_name("comparison.svg"));
    fs::write(&out, svg)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    // Die quietly when output is piped into head or less instead of
    // panicking on the closed pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Single(args) => cmd_single(args),
        Command::VerifyGen(args) => cmd_verify_gen(args),
        Command::Plot(args) => cmd_plot(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
