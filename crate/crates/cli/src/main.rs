use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use salgrow::eval::default_class_names;
use salgrow::model::{Connectivity, GrowConfig};
use salgrow::pipeline::{
    evaluate_predictions, load_manifest, run_pipeline, EvalStatus, RunOptions, Stage, Summary,
};

/// Dense pseudo-labels from image-level labels, class activation maps and
/// saliency maps.
#[derive(Parser, Debug)]
#[command(name = "salgrow", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract seeds only.
    Seed {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Extract seeds and grow them.
    Grow {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        seed: SeedArgs,
        #[command(flatten)]
        grow: GrowArgs,
    },
    /// Score existing `<id>_labels.png` predictions against ground truth.
    Eval {
        #[arg(long)]
        pred_dir: PathBuf,
        #[arg(long)]
        manifest: PathBuf,
        /// Also write a `name=percent` listing here.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        num_classes: u8,
    },
    /// Seed, grow and evaluate.
    Pipeline {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        seed: SeedArgs,
        #[command(flatten)]
        grow: GrowArgs,
        /// Also write a `name=percent` listing here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 20)]
    num_classes: u8,
    /// Abort on the first failing entry.
    #[arg(long)]
    strict: bool,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct SeedArgs {
    /// Fraction of pixels each class seeds.
    #[arg(long, default_value_t = 0.2)]
    seed_fraction: f64,
    /// Saliency below which unclaimed pixels seed background.
    #[arg(long = "bg-thresh", default_value_t = 0.1)]
    bg_thresh: f64,
}

#[derive(Args, Debug)]
struct GrowArgs {
    /// Growing threshold on the saliency-weighted HSV distance.
    #[arg(long, default_value_t = 10.0)]
    theta: f64,
    /// Neighbourhood used for growing: 4 or 8.
    #[arg(long, default_value_t = 4, value_parser = parse_connectivity)]
    connectivity: u32,
}

fn parse_connectivity(s: &str) -> Result<u32, String> {
    match s {
        "4" => Ok(4),
        "8" => Ok(8),
        _ => Err(format!("expected 4 or 8, got {s:?}")),
    }
}

impl GrowArgs {
    fn defaults() -> Self {
        Self {
            theta: 10.0,
            connectivity: 4,
        }
    }
}

enum Outcome {
    Ok,
    EmptyEvaluation,
}

fn config(run: &RunArgs, seed: &SeedArgs, grow: &GrowArgs) -> Result<GrowConfig> {
    let cfg = GrowConfig {
        theta: grow.theta,
        connectivity: Connectivity::from_count(grow.connectivity)?,
        seed_fraction: seed.seed_fraction,
        bg_saliency_threshold: seed.bg_thresh,
        num_classes: run.num_classes,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn write_report(path: Option<&Path>, status: &EvalStatus) -> Result<()> {
    if let (Some(path), EvalStatus::Done(ev)) = (path, status) {
        std::fs::write(path, &ev.key_values)
            .with_context(|| format!("writing report {}", path.display()))?;
    }
    Ok(())
}

fn run(
    run: RunArgs,
    seed: SeedArgs,
    grow: GrowArgs,
    stage: Stage,
    report: Option<PathBuf>,
) -> Result<Outcome> {
    let cfg = config(&run, &seed, &grow)?;
    let entries = load_manifest(&run.manifest)?;
    let mut opts = RunOptions::new(cfg, stage);
    opts.strict = run.strict;
    opts.jobs = run.jobs;

    let summary: Summary = run_pipeline(&entries, &opts, &run.out)?;
    print!("{summary}");
    write_report(report.as_deref(), &summary.evaluation)?;
    Ok(match summary.evaluation {
        EvalStatus::Empty => Outcome::EmptyEvaluation,
        _ => Outcome::Ok,
    })
}

fn execute(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Seed { run: r, seed } => run(r, seed, GrowArgs::defaults(), Stage::Seed, None),
        Command::Grow { run: r, seed, grow } => run(r, seed, grow, Stage::Grow, None),
        Command::Pipeline {
            run: r,
            seed,
            grow,
            report,
        } => run(r, seed, grow, Stage::Full, report),
        Command::Eval {
            pred_dir,
            manifest,
            report,
            num_classes,
        } => {
            let entries = load_manifest(&manifest)?;
            let names = default_class_names(num_classes);
            let status = evaluate_predictions(&entries, &pred_dir, num_classes, &names)?;
            match &status {
                EvalStatus::Done(ev) => {
                    println!("evaluation over {} images:", ev.images);
                    print!("{}", ev.report);
                    write_report(report.as_deref(), &status)?;
                    Ok(Outcome::Ok)
                }
                EvalStatus::Skipped => {
                    eprintln!("no manifest entry has ground truth");
                    Ok(Outcome::EmptyEvaluation)
                }
                EvalStatus::Empty => {
                    eprintln!("ground truth has no scorable pixels");
                    Ok(Outcome::EmptyEvaluation)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    // Exit code 2 is reserved for an impossible evaluation, so usage errors
    // report 1 instead of clap's default.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::EmptyEvaluation) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
