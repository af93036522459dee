//! End-to-end descriptor assembly: preprocess an RGB image, compute the 14
//! indices on each of its four gray views, and concatenate them into the
//! 56-value feature vector.
//!
//! The four views are the composite gray image and the R, G, B channel
//! planes. When preprocessing is enabled the channel planes are sharpened
//! with the unsharp filter and the composite is despeckled with the Crimmins
//! filter first; the all-channel order is gray, R, G, B.

use crate::biodiversity::BiodiversityIndices;
use crate::ecosystem::{build_histogram, GrayImage, RgbImage};
use crate::error::{Error, Result};
use crate::preprocess::{crimmins, split_channels, to_gray, unsharp};
use crate::taxonomy::{build_tree, distance_matrix, TaxonomicIndices};

/// Channel prefixes in canonical order.
pub const CHANNELS: [&str; 4] = ["gray", "r", "g", "b"];

/// Per-channel index names in canonical order: the seven abundance indices,
/// then the seven tree-distance indices.
pub const INDEX_NAMES: [&str; 14] = [
    "d_mg",
    "d_mn",
    "d_bp",
    "d_f",
    "d_kt",
    "e_m",
    "d_sw",
    "delta",
    "delta_star",
    "s_pd",
    "d_nn",
    "e_eq",
    "e_iq",
    "d_tt",
];

/// Values per channel.
pub const CHANNEL_FEATURE_COUNT: usize = INDEX_NAMES.len();

/// Values in a full descriptor (4 channels x 14 indices).
pub const FEATURE_COUNT: usize = CHANNELS.len() * CHANNEL_FEATURE_COUNT;

/// Extraction parameters. Defaults enable preprocessing with unsharp radius
/// 1.0, amount 1.0 and one Crimmins iteration, and emit all four channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractOptions {
    pub preprocess_enabled: bool,
    pub unsharp_radius: f64,
    pub unsharp_amount: f64,
    pub crimmins_iterations: u32,
    /// Emit only the 14 composite-gray values instead of all 56.
    pub gray_only: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            preprocess_enabled: true,
            unsharp_radius: 1.0,
            unsharp_amount: 1.0,
            crimmins_iterations: 1,
            gray_only: false,
        }
    }
}

/// A feature vector in canonical order: 56 values (or 14 with `gray_only`),
/// all finite.
#[derive(Debug, Clone, PartialEq)]
pub struct BiTVector {
    values: Vec<f64>,
}

impl BiTVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Names aligned with `values()`.
    pub fn names(&self) -> Vec<String> {
        feature_names(self.values.len() == CHANNEL_FEATURE_COUNT)
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Feature names as `<channel>_<index>` in canonical order; with `gray_only`
/// just the 14 composite-gray names.
pub fn feature_names(gray_only: bool) -> Vec<String> {
    let channels: &[&str] = if gray_only { &CHANNELS[..1] } else { &CHANNELS };
    channels
        .iter()
        .flat_map(|c| INDEX_NAMES.iter().map(move |n| format!("{c}_{n}")))
        .collect()
}

/// The 14 index values of one gray image, abundance indices first.
fn channel_features(gray: &GrayImage) -> Result<[f64; CHANNEL_FEATURE_COUNT]> {
    let hist = build_histogram(gray);
    let bio = BiodiversityIndices::compute(&hist)?.to_array();
    let dm = distance_matrix(&build_tree(&hist));
    let tax = TaxonomicIndices::compute(&hist, &dm).to_array();
    let mut out = [0.0; CHANNEL_FEATURE_COUNT];
    out[..7].copy_from_slice(&bio);
    out[7..].copy_from_slice(&tax);
    Ok(out)
}

/// Computes the descriptor of an RGB image: split channels, build the
/// composite gray, optionally filter (unsharp on the channel planes,
/// Crimmins on the composite), then concatenate the per-view indices.
/// Images smaller than 2x2 are rejected.
pub fn extract(image: &RgbImage, opts: &ExtractOptions) -> Result<BiTVector> {
    if image.width() < 2 || image.height() < 2 {
        return Err(Error::invalid(format!(
            "image must be at least 2x2, got {}x{}",
            image.width(),
            image.height()
        )));
    }

    let composite = to_gray(image);
    let composite = if opts.preprocess_enabled {
        crimmins(&composite, opts.crimmins_iterations)?
    } else {
        composite
    };

    let mut values = Vec::with_capacity(if opts.gray_only {
        CHANNEL_FEATURE_COUNT
    } else {
        FEATURE_COUNT
    });
    values.extend(channel_features(&composite)?);

    if !opts.gray_only {
        let (r, g, b) = split_channels(image);
        for plane in [r, g, b] {
            let plane = if opts.preprocess_enabled {
                unsharp(&plane, opts.unsharp_radius, opts.unsharp_amount)?
            } else {
                plane
            };
            values.extend(channel_features(&plane)?);
        }
    }

    debug_assert!(values.iter().all(|v| v.is_finite()));
    Ok(BiTVector { values })
}
