//! Classification metrics: accuracy, one-vs-rest sensitivity/specificity,
//! Cohen's kappa, and the confusion matrix they all derive from.

use crate::error::{Error, Result};

/// One-vs-rest metrics for a single class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassMetrics {
    pub label: String,
    pub sensitivity: f64,
    pub specificity: f64,
}

/// Metrics of one train/test evaluation. `labels` gives the row/column order
/// of `confusion` (ascending); rows are true classes, columns predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    pub macro_sensitivity: f64,
    pub macro_specificity: f64,
    pub kappa: f64,
    /// Set when chance agreement is 1 and kappa's denominator vanishes (a
    /// single-class table); kappa is then reported as 1 for perfect
    /// agreement by convention.
    pub kappa_degenerate: bool,
    pub labels: Vec<String>,
    pub confusion: Vec<Vec<u64>>,
}

/// Scores predictions against ground truth. Labels are the sorted union of
/// both sequences; a denominator-free rate (a class with no true or no
/// negative samples) is reported as 0.
pub fn evaluate(predictions: &[String], truths: &[String]) -> Result<EvalReport> {
    if predictions.len() != truths.len() {
        return Err(Error::DimensionMismatch {
            expected: truths.len(),
            got: predictions.len(),
        });
    }
    if truths.is_empty() {
        return Err(Error::invalid("cannot evaluate zero predictions"));
    }

    let labels: Vec<String> = {
        let mut set: std::collections::BTreeSet<&str> =
            truths.iter().map(String::as_str).collect();
        set.extend(predictions.iter().map(String::as_str));
        set.into_iter().map(String::from).collect()
    };
    let index_of = |l: &str| labels.iter().position(|x| x == l).expect("label in union");

    let c = labels.len();
    let mut confusion = vec![vec![0u64; c]; c];
    for (pred, truth) in predictions.iter().zip(truths) {
        confusion[index_of(truth)][index_of(pred)] += 1;
    }

    let total = truths.len() as u64;
    let correct: u64 = (0..c).map(|i| confusion[i][i]).sum();
    let accuracy = correct as f64 / total as f64;

    let mut per_class = Vec::with_capacity(c);
    for i in 0..c {
        let tp = confusion[i][i];
        let fn_ = confusion[i].iter().sum::<u64>() - tp;
        let fp = (0..c).map(|r| confusion[r][i]).sum::<u64>() - tp;
        let tn = total - tp - fn_ - fp;
        let sensitivity = if tp + fn_ > 0 { tp as f64 / (tp + fn_) as f64 } else { 0.0 };
        let specificity = if tn + fp > 0 { tn as f64 / (tn + fp) as f64 } else { 0.0 };
        per_class.push(ClassMetrics {
            label: labels[i].clone(),
            sensitivity,
            specificity,
        });
    }
    let macro_sensitivity =
        per_class.iter().map(|m| m.sensitivity).sum::<f64>() / c as f64;
    let macro_specificity =
        per_class.iter().map(|m| m.specificity).sum::<f64>() / c as f64;

    // Chance agreement from the marginals; kappa corrects accuracy by it.
    let p_e: f64 = (0..c)
        .map(|i| {
            let row: u64 = confusion[i].iter().sum();
            let col: u64 = (0..c).map(|r| confusion[r][i]).sum();
            (row as f64 / total as f64) * (col as f64 / total as f64)
        })
        .sum();
    let (kappa, kappa_degenerate) = if (1.0 - p_e).abs() < 1e-12 {
        (if (accuracy - 1.0).abs() < 1e-12 { 1.0 } else { 0.0 }, true)
    } else {
        ((accuracy - p_e) / (1.0 - p_e), false)
    };

    Ok(EvalReport {
        accuracy,
        per_class,
        macro_sensitivity,
        macro_specificity,
        kappa,
        kappa_degenerate,
        labels,
        confusion,
    })
}
