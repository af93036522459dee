//! The `eval` subcommand: run a classification protocol over a feature CSV
//! and report accuracy, kappa, per-class rates, and the confusion matrix.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Serialize;

use bitdesc::harness::{run_holdout, run_kfold, EvalReport, FeatureTable, HoldoutEval, KfoldEval};

#[derive(Args)]
pub struct EvalArgs {
    /// Feature CSV produced by `extract`.
    #[arg(long)]
    pub features: PathBuf,
    /// Either `holdout:<train_fraction>` or `kfold:<folds>`.
    #[arg(long)]
    pub protocol: String,
    /// Neighbors consulted by the classifier.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Seed for the stratified shuffles.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the summary as JSON to this path.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

enum Protocol {
    Holdout(f64),
    Kfold(usize),
}

fn parse_protocol(text: &str) -> Result<Protocol> {
    let (kind, arg) = text
        .split_once(':')
        .with_context(|| format!("protocol {text:?} must be holdout:<fraction> or kfold:<k>"))?;
    match kind {
        "holdout" => {
            let fraction: f64 = arg
                .parse()
                .with_context(|| format!("holdout fraction {arg:?} is not a number"))?;
            if !(fraction > 0.0 && fraction < 1.0) {
                bail!("holdout fraction must lie strictly between 0 and 1, got {fraction}");
            }
            Ok(Protocol::Holdout(fraction))
        }
        "kfold" => {
            let folds: usize = arg
                .parse()
                .with_context(|| format!("fold count {arg:?} is not an integer"))?;
            if folds < 2 {
                bail!("kfold needs at least 2 folds, got {folds}");
            }
            Ok(Protocol::Kfold(folds))
        }
        other => bail!("unknown protocol {other:?}; expected holdout or kfold"),
    }
}

#[derive(Serialize)]
struct JsonClass {
    label: String,
    sensitivity: f64,
    specificity: f64,
}

#[derive(Serialize)]
struct JsonSummary {
    accuracy: f64,
    kappa: f64,
    per_class: Vec<JsonClass>,
    confusion: Vec<Vec<u64>>,
}

impl JsonSummary {
    fn from_report(report: &EvalReport) -> Self {
        JsonSummary {
            accuracy: report.accuracy,
            kappa: report.kappa,
            per_class: report
                .labels
                .iter()
                .zip(&report.per_class)
                .map(|(label, m)| JsonClass {
                    label: label.clone(),
                    sensitivity: m.sensitivity,
                    specificity: m.specificity,
                })
                .collect(),
            confusion: report.confusion.clone(),
        }
    }
}

fn print_report(report: &EvalReport) {
    println!("accuracy: {:.4}", report.accuracy);
    if report.kappa_degenerate {
        println!("kappa:    {:.4} (degenerate: expected agreement is 1)", report.kappa);
    } else {
        println!("kappa:    {:.4}", report.kappa);
    }

    let label_width = report
        .labels
        .iter()
        .map(|l| l.len())
        .chain(std::iter::once("class".len()))
        .max()
        .unwrap_or(5);
    println!();
    println!("{:<label_width$}  sensitivity  specificity", "class");
    for (label, m) in report.labels.iter().zip(&report.per_class) {
        println!("{label:<label_width$}  {:>11.4}  {:>11.4}", m.sensitivity, m.specificity);
    }
    println!(
        "{:<label_width$}  {:>11.4}  {:>11.4}",
        "macro", report.macro_sensitivity, report.macro_specificity
    );

    println!();
    println!("confusion (rows = truth):");
    let cell = report
        .confusion
        .iter()
        .flatten()
        .map(|n| n.to_string().len())
        .chain(report.labels.iter().map(|l| l.len()))
        .max()
        .unwrap_or(1);
    print!("{:<label_width$}", "");
    for label in &report.labels {
        print!("  {label:>cell$}");
    }
    println!();
    for (label, row) in report.labels.iter().zip(&report.confusion) {
        print!("{label:<label_width$}");
        for n in row {
            print!("  {n:>cell$}");
        }
        println!();
    }
}

enum Outcome {
    Holdout(HoldoutEval),
    Kfold { folds: usize, eval: KfoldEval },
}

pub fn run(args: EvalArgs) -> Result<u8> {
    let protocol = parse_protocol(&args.protocol)?;
    let file = File::open(&args.features)
        .with_context(|| format!("opening {}", args.features.display()))?;
    let table = FeatureTable::from_csv(BufReader::new(file))?;

    let outcome = match protocol {
        Protocol::Holdout(fraction) => {
            Outcome::Holdout(run_holdout(&table, fraction, args.seed, args.k)?)
        }
        Protocol::Kfold(folds) => {
            Outcome::Kfold { folds, eval: run_kfold(&table, folds, args.seed, args.k)? }
        }
    };
    let (report, warnings) = match &outcome {
        Outcome::Holdout(eval) => (&eval.report, &eval.warnings),
        Outcome::Kfold { eval, .. } => (&eval.pooled, &eval.warnings),
    };

    // The JSON artifact lands before any stdout printing so a consumer that
    // closes the pipe early still gets the file.
    if let Some(path) = &args.json {
        let out = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        serde_json::to_writer_pretty(out, &JsonSummary::from_report(report))?;
    }
    for warning in warnings {
        eprintln!("warning: {warning}");
    }

    match &outcome {
        Outcome::Holdout(eval) => {
            println!("holdout evaluation ({} rows, k = {})", table.len(), args.k);
            println!();
            print_report(&eval.report);
        }
        Outcome::Kfold { folds, eval } => {
            println!("{folds}-fold evaluation ({} rows, k = {})", table.len(), args.k);
            println!();
            let accuracies: Vec<f64> = eval.folds.iter().map(|f| f.report.accuracy).collect();
            for (i, acc) in accuracies.iter().enumerate() {
                println!("fold {}: accuracy {acc:.4}", i + 1);
            }
            let mean = accuracies.iter().sum::<f64>() / accuracies.len() as f64;
            let var = accuracies.iter().map(|a| (a - mean).powi(2)).sum::<f64>()
                / accuracies.len() as f64;
            println!("mean accuracy: {mean:.4} +/- {:.4}", var.sqrt());
            println!();
            println!("pooled over all folds:");
            print_report(&eval.pooled);
        }
    }
    Ok(0)
}
