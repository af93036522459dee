//! k-nearest-neighbor classification with deterministic tie handling.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::harness::table::FeatureTable;

/// A fitted k-NN model: the (already normalized) training rows plus k.
#[derive(Debug, Clone)]
pub struct ClassifierModel {
    ids: Vec<String>,
    labels: Vec<String>,
    features: Vec<Vec<f64>>,
    k: usize,
}

impl ClassifierModel {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// Stores the training rows. The caller normalizes first; the model compares
/// features as given. Rejects k outside 1..=rows.
pub fn knn_train(train: &FeatureTable, k: usize) -> Result<ClassifierModel> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if k > train.len() {
        return Err(Error::invalid(format!(
            "k = {k} exceeds the {} training rows",
            train.len()
        )));
    }
    Ok(ClassifierModel {
        ids: train.rows().iter().map(|r| r.sample_id.clone()).collect(),
        labels: train.rows().iter().map(|r| r.label.clone()).collect(),
        features: train.rows().iter().map(|r| r.features.clone()).collect(),
        k,
    })
}

/// Predicts the majority label among the k nearest training rows by Euclidean
/// distance. A tied vote resolves to the label of the single nearest neighbor
/// among the tied classes; equal distances rank by ascending sample id, so
/// every prediction is deterministic.
pub fn knn_predict(model: &ClassifierModel, features: &[f64]) -> Result<String> {
    let d = model.features[0].len();
    if features.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: features.len() });
    }

    // Squared distances order identically to true distances.
    let mut ranked: Vec<(f64, usize)> = model
        .features
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let dist2: f64 = row
                .iter()
                .zip(features)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            (dist2, i)
        })
        .collect();
    ranked.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then_with(|| model.ids[a.1].cmp(&model.ids[b.1]))
    });

    let nearest = &ranked[..model.k];
    let mut votes: BTreeMap<&str, usize> = BTreeMap::new();
    for &(_, i) in nearest {
        *votes.entry(model.labels[i].as_str()).or_insert(0) += 1;
    }
    let top = *votes.values().max().expect("k >= 1 neighbors");
    let tied: Vec<&str> = votes
        .iter()
        .filter(|&(_, &c)| c == top)
        .map(|(&l, _)| l)
        .collect();
    if tied.len() == 1 {
        return Ok(tied[0].to_string());
    }
    let winner = nearest
        .iter()
        .map(|&(_, i)| model.labels[i].as_str())
        .find(|l| tied.contains(l))
        .expect("tied labels come from the neighbor list");
    Ok(winner.to_string())
}
