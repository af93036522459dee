//! Invariance bench: re-extract features after each transform and report the
//! per-feature damage.

use crate::descriptor::{extract, ExtractOptions};
use crate::ecosystem::RgbImage;
use crate::error::Result;
use crate::harness::transform::{apply_transform, TransformSpec};

/// Features whose values should survive nearest-neighbor rescaling of smooth
/// content within [`RESCALE_TOLERANCE`]: they depend on abundance proportions
/// and tree shape, not pixel counts.
pub const SCALE_ROBUST_INDICES: [&str; 4] = ["d_sw", "delta_star", "e_iq", "d_nn"];

/// Relative tolerance for the scale-robust features under rescaling.
pub const RESCALE_TOLERANCE: f64 = 0.05;

/// One feature's before/after comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureDiff {
    pub name: String,
    pub original: f64,
    pub transformed: f64,
    pub abs_diff: f64,
    /// Absolute difference over |original|; 0 when both sides are 0 and
    /// infinite when only the original is.
    pub rel_diff: f64,
}

/// The program of one transform: all feature diffs plus their verdict.
#[derive(Debug, Clone)]
pub struct TransformCheck {
    pub transform: TransformSpec,
    /// True when the transform permutes pixels and no preprocessing runs, so
    /// every feature must match bit for bit.
    pub exact_expected: bool,
    pub diffs: Vec<FeatureDiff>,
    pub max_abs_diff: f64,
    pub max_rel_diff: f64,
    /// An exact-invariance expectation was broken.
    pub violation: bool,
    /// A scale-robust feature moved beyond [`RESCALE_TOLERANCE`] under a
    /// rescale (informational; not an exactness violation).
    pub rescale_breach: bool,
}

/// Results over all requested transforms.
#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub checks: Vec<TransformCheck>,
    pub any_violation: bool,
}

fn rel_diff(original: f64, transformed: f64) -> f64 {
    let abs = (original - transformed).abs();
    if abs == 0.0 {
        0.0
    } else if original == 0.0 {
        f64::INFINITY
    } else {
        abs / original.abs()
    }
}

fn is_scale_robust(name: &str) -> bool {
    SCALE_ROBUST_INDICES
        .iter()
        .any(|idx| name.ends_with(&format!("_{idx}")))
}

/// Extracts the descriptor from the image and from each transformed copy,
/// comparing feature by feature. Pixel-permuting transforms with
/// preprocessing disabled must reproduce the descriptor exactly; any
/// difference there marks the check (and the report) as a violation.
pub fn invariance_check(
    image: &RgbImage,
    transforms: &[TransformSpec],
    opts: &ExtractOptions,
) -> Result<InvarianceReport> {
    let baseline = extract(image, opts)?;
    let names = baseline.names();

    let mut checks = Vec::with_capacity(transforms.len());
    for &t in transforms {
        let transformed_img = apply_transform(image, t)?;
        let transformed = extract(&transformed_img, opts)?;

        let diffs: Vec<FeatureDiff> = names
            .iter()
            .zip(baseline.values().iter().zip(transformed.values()))
            .map(|(name, (&a, &b))| FeatureDiff {
                name: name.clone(),
                original: a,
                transformed: b,
                abs_diff: (a - b).abs(),
                rel_diff: rel_diff(a, b),
            })
            .collect();

        let max_abs_diff = diffs.iter().map(|d| d.abs_diff).fold(0.0, f64::max);
        let max_rel_diff = diffs.iter().map(|d| d.rel_diff).fold(0.0, f64::max);
        let exact_expected = t.preserves_histogram() && !opts.preprocess_enabled;
        let violation = exact_expected && max_abs_diff != 0.0;
        let rescale_breach = matches!(t, TransformSpec::Rescale(_))
            && diffs
                .iter()
                .any(|d| is_scale_robust(&d.name) && d.rel_diff > RESCALE_TOLERANCE);

        checks.push(TransformCheck {
            transform: t,
            exact_expected,
            diffs,
            max_abs_diff,
            max_rel_diff,
            violation,
            rescale_breach,
        });
    }

    let any_violation = checks.iter().any(|c| c.violation);
    Ok(InvarianceReport { checks, any_violation })
}
