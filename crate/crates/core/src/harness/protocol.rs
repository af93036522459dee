//! Protocol runners tying the pieces together: batch extraction into a
//! feature table, and leakage-safe holdout / k-fold evaluations.

use rayon::prelude::*;

use crate::descriptor::{extract, feature_names, ExtractOptions};
use crate::ecosystem::RgbImage;
use crate::error::{Error, Result};
use crate::harness::knn::{knn_predict, knn_train};
use crate::harness::metrics::{evaluate, EvalReport};
use crate::harness::normalize::{apply_minmax, fit_minmax, NormalizationParams};
use crate::harness::split::{holdout_split, kfold_split};
use crate::harness::table::{FeatureRow, FeatureTable};

/// One image queued for batch extraction.
#[derive(Debug, Clone)]
pub struct BatchSample {
    pub sample_id: String,
    pub label: String,
    pub image: RgbImage,
}

/// Extracts descriptors for a whole dataset, optionally on a bounded worker
/// pool (`jobs = None` uses all cores). Rows are sorted by sample id, so the
/// resulting table does not depend on the degree of parallelism.
pub fn extract_batch(
    samples: &[BatchSample],
    opts: &ExtractOptions,
    jobs: Option<usize>,
) -> Result<FeatureTable> {
    let run = || -> Result<Vec<FeatureRow>> {
        samples
            .par_iter()
            .map(|s| {
                let vector = extract(&s.image, opts).map_err(|e| {
                    Error::invalid(format!("sample {:?}: {e}", s.sample_id))
                })?;
                Ok(FeatureRow {
                    sample_id: s.sample_id.clone(),
                    label: s.label.clone(),
                    features: vector.into_values(),
                })
            })
            .collect()
    };

    let mut rows = match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::invalid(format!("cannot build worker pool: {e}")))?;
            pool.install(run)?
        }
        None => run()?,
    };
    rows.sort_by(|a, b| a.sample_id.cmp(&b.sample_id));
    FeatureTable::new(feature_names(opts.gray_only), rows)
}

/// A holdout evaluation plus any stratification warnings.
#[derive(Debug, Clone)]
pub struct HoldoutEval {
    pub report: EvalReport,
    pub warnings: Vec<String>,
}

/// Splits, fits normalization on the training rows only, classifies the test
/// rows with k-NN, and scores the result.
pub fn run_holdout(
    table: &FeatureTable,
    train_fraction: f64,
    seed: u64,
    knn_k: usize,
) -> Result<HoldoutEval> {
    let split = holdout_split(table, train_fraction, seed)?;
    if split.test.is_empty() {
        return Err(Error::invalid(
            "holdout split produced an empty test set; adjust the fraction or dataset",
        ));
    }
    let report = eval_pair(&split.train, &split.test, knn_k)?.0;
    Ok(HoldoutEval { report, warnings: split.warnings })
}

/// One fold's outcome, carrying the normalization parameters that fold was
/// evaluated under so protocol hygiene is auditable.
#[derive(Debug, Clone)]
pub struct FoldEval {
    pub report: EvalReport,
    pub params: NormalizationParams,
}

/// A k-fold evaluation: per-fold reports plus a pooled report over all
/// held-out predictions.
#[derive(Debug, Clone)]
pub struct KfoldEval {
    pub folds: Vec<FoldEval>,
    pub pooled: EvalReport,
    pub warnings: Vec<String>,
}

/// Runs every fold with normalization refit on the merged training folds
/// each time, never on held-out rows.
pub fn run_kfold(
    table: &FeatureTable,
    fold_count: usize,
    seed: u64,
    knn_k: usize,
) -> Result<KfoldEval> {
    let split = kfold_split(table, fold_count, seed)?;
    let mut folds = Vec::with_capacity(split.folds.len());
    let mut pooled_preds = Vec::new();
    let mut pooled_truths = Vec::new();
    for fold in &split.folds {
        let (report, params, preds, truths) = {
            let (r, p) = eval_pair(&fold.train, &fold.test, knn_k)?;
            let preds = predictions(&fold.train, &fold.test, knn_k, &p)?;
            let truths: Vec<String> =
                fold.test.rows().iter().map(|r| r.label.clone()).collect();
            (r, p, preds, truths)
        };
        pooled_preds.extend(preds);
        pooled_truths.extend(truths);
        folds.push(FoldEval { report, params });
    }
    let pooled = evaluate(&pooled_preds, &pooled_truths)?;
    Ok(KfoldEval { folds, pooled, warnings: split.warnings })
}

fn predictions(
    train: &FeatureTable,
    test: &FeatureTable,
    knn_k: usize,
    params: &NormalizationParams,
) -> Result<Vec<String>> {
    let norm_train = apply_minmax(train, params)?;
    let norm_test = apply_minmax(test, params)?;
    let model = knn_train(&norm_train, knn_k)?;
    norm_test
        .rows()
        .iter()
        .map(|row| knn_predict(&model, &row.features))
        .collect()
}

fn eval_pair(
    train: &FeatureTable,
    test: &FeatureTable,
    knn_k: usize,
) -> Result<(EvalReport, NormalizationParams)> {
    if test.is_empty() {
        return Err(Error::invalid("evaluation needs a non-empty test set"));
    }
    let params = fit_minmax(train)?;
    let preds = predictions(train, test, knn_k, &params)?;
    let truths: Vec<String> = test.rows().iter().map(|r| r.label.clone()).collect();
    let report = evaluate(&preds, &truths)?;
    Ok((report, params))
}
