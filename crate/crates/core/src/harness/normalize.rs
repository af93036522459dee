//! Min-max normalization with train/test discipline: parameters come from
//! training rows only and are applied unchanged elsewhere.

use crate::error::{Error, Result};
use crate::harness::table::{FeatureRow, FeatureTable};

/// Per-feature training minima and maxima.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationParams {
    mins: Vec<f64>,
    maxs: Vec<f64>,
}

impl NormalizationParams {
    pub fn mins(&self) -> &[f64] {
        &self.mins
    }

    pub fn maxs(&self) -> &[f64] {
        &self.maxs
    }

    pub fn feature_count(&self) -> usize {
        self.mins.len()
    }
}

/// Per-feature min/max over the training rows. Rejects an empty table so the
/// parameters are always well defined.
pub fn fit_minmax(train: &FeatureTable) -> Result<NormalizationParams> {
    if train.is_empty() {
        return Err(Error::invalid("cannot fit normalization on an empty table"));
    }
    let d = train.feature_count();
    let mut mins = vec![f64::INFINITY; d];
    let mut maxs = vec![f64::NEG_INFINITY; d];
    for row in train.rows() {
        for (j, &v) in row.features.iter().enumerate() {
            mins[j] = mins[j].min(v);
            maxs[j] = maxs[j].max(v);
        }
    }
    Ok(NormalizationParams { mins, maxs })
}

/// Rescales every value to (value - min) / (max - min). A feature constant on
/// the training set (min = max) maps to 0; values outside the training range
/// are not clamped and may leave [0, 1].
pub fn apply_minmax(table: &FeatureTable, params: &NormalizationParams) -> Result<FeatureTable> {
    if table.feature_count() != params.feature_count() {
        return Err(Error::DimensionMismatch {
            expected: params.feature_count(),
            got: table.feature_count(),
        });
    }
    let rows = table
        .rows()
        .iter()
        .map(|row| FeatureRow {
            sample_id: row.sample_id.clone(),
            label: row.label.clone(),
            features: row
                .features
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    let range = params.maxs[j] - params.mins[j];
                    if range > 0.0 {
                        (v - params.mins[j]) / range
                    } else {
                        0.0
                    }
                })
                .collect(),
        })
        .collect();
    FeatureTable::new(table.feature_names().to_vec(), rows)
}
