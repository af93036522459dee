//! Dataset-level protocol around the descriptor: feature tables with CSV io,
//! leakage-safe min-max normalization, stratified splitting, k-NN
//! classification, metrics, and the transform/invariance bench.

mod invariance;
mod knn;
mod metrics;
mod normalize;
mod protocol;
mod split;
mod table;
mod transform;

pub use invariance::{
    invariance_check, FeatureDiff, InvarianceReport, TransformCheck, RESCALE_TOLERANCE,
    SCALE_ROBUST_INDICES,
};
pub use knn::{knn_predict, knn_train, ClassifierModel};
pub use metrics::{evaluate, ClassMetrics, EvalReport};
pub use normalize::{apply_minmax, fit_minmax, NormalizationParams};
pub use protocol::{
    extract_batch, run_holdout, run_kfold, BatchSample, FoldEval, HoldoutEval, KfoldEval,
};
pub use split::{holdout_split, kfold_split, Fold, KfoldOutcome, SplitOutcome};
pub use table::{FeatureRow, FeatureTable};
pub use transform::{apply_transform, TransformSpec};
