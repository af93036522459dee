//! Stratified dataset splitting, deterministic under a seed.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::harness::table::FeatureTable;

/// Result of a holdout split. `warnings` lists classes that could not be
/// split as requested (currently: single-sample classes forced into train).
#[derive(Debug, Clone)]
pub struct SplitOutcome {
    pub train: FeatureTable,
    pub test: FeatureTable,
    pub warnings: Vec<String>,
}

/// One cross-validation fold: the held-out rows and everything else.
#[derive(Debug, Clone)]
pub struct Fold {
    pub train: FeatureTable,
    pub test: FeatureTable,
}

/// All folds of a k-fold split plus stratification warnings.
#[derive(Debug, Clone)]
pub struct KfoldOutcome {
    pub folds: Vec<Fold>,
    pub warnings: Vec<String>,
}

fn rows_by_label(table: &FeatureTable) -> BTreeMap<&str, Vec<usize>> {
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, row) in table.rows().iter().enumerate() {
        groups.entry(row.label.as_str()).or_default().push(i);
    }
    groups
}

/// Splits each class separately so label proportions carry over. Per class of
/// n rows, floor(n * fraction + 0.5) go to train (round half up); a class
/// with fewer than two rows cannot be split and goes entirely to train with
/// a warning. Row order within the output tables follows the input table.
pub fn holdout_split(
    table: &FeatureTable,
    train_fraction: f64,
    seed: u64,
) -> Result<SplitOutcome> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::invalid(format!(
            "train fraction must be inside (0, 1), got {train_fraction}"
        )));
    }
    if table.is_empty() {
        return Err(Error::invalid("cannot split an empty table"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    let mut warnings = Vec::new();

    for (label, mut idxs) in rows_by_label(table) {
        idxs.shuffle(&mut rng);
        if idxs.len() < 2 {
            warnings.push(format!(
                "class {label:?} has a single sample; keeping it in the training set"
            ));
            train_idx.extend(idxs);
            continue;
        }
        let n_train = (idxs.len() as f64 * train_fraction + 0.5).floor() as usize;
        let n_train = n_train.min(idxs.len());
        train_idx.extend(&idxs[..n_train]);
        test_idx.extend(&idxs[n_train..]);
    }

    train_idx.sort_unstable();
    test_idx.sort_unstable();
    Ok(SplitOutcome {
        train: table.subset(&train_idx),
        test: table.subset(&test_idx),
        warnings,
    })
}

/// Stratified k-fold split: each class's shuffled rows are dealt round-robin
/// onto the folds (the deal position carries across classes so fold sizes
/// stay balanced). Every row lands in exactly one test fold.
pub fn kfold_split(table: &FeatureTable, k: usize, seed: u64) -> Result<KfoldOutcome> {
    if k < 2 {
        return Err(Error::invalid(format!("fold count must be at least 2, got {k}")));
    }
    if k > table.len() {
        return Err(Error::invalid(format!(
            "fold count {k} exceeds the {} available rows",
            table.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_members: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut warnings = Vec::new();
    let mut deal = 0usize;

    for (label, mut idxs) in rows_by_label(table) {
        if idxs.len() < k {
            warnings.push(format!(
                "class {label:?} has {} samples, fewer than {k} folds; some folds will miss it",
                idxs.len()
            ));
        }
        idxs.shuffle(&mut rng);
        for idx in idxs {
            fold_members[deal % k].push(idx);
            deal += 1;
        }
    }

    let folds = (0..k)
        .map(|f| {
            let mut test: Vec<usize> = fold_members[f].clone();
            let mut train: Vec<usize> = fold_members
                .iter()
                .enumerate()
                .filter(|&(g, _)| g != f)
                .flat_map(|(_, m)| m.iter().copied())
                .collect();
            test.sort_unstable();
            train.sort_unstable();
            Fold {
                train: table.subset(&train),
                test: table.subset(&test),
            }
        })
        .collect();

    Ok(KfoldOutcome { folds, warnings })
}
