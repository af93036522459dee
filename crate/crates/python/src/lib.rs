use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use bitdesc::biodiversity::BiodiversityIndices;
use bitdesc::descriptor::{self, ExtractOptions, INDEX_NAMES};
use bitdesc::ecosystem::{RgbImage, SpeciesHistogram};
use bitdesc::taxonomy::{build_tree, distance_matrix, TaxonomicIndices};

fn value_error(err: bitdesc::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn histogram_from_pairs(counts: Vec<(u8, u64)>) -> PyResult<SpeciesHistogram> {
    SpeciesHistogram::from_counts(counts).map_err(value_error)
}

/// Compute the descriptor for an RGB image.
///
/// `pixels` holds interleaved RGB bytes, row-major, so its length must be
/// `width * height * 3`; `bytes` from PIL's `Image.tobytes()` works directly.
/// Returns 56 floats (14 per gray/R/G/B view), or 14 when `gray_only` is set.
#[pyfunction]
#[pyo3(signature = (
    pixels,
    width,
    height,
    preprocess = true,
    unsharp_radius = 1.0,
    unsharp_amount = 1.0,
    crimmins_iterations = 1,
    gray_only = false,
))]
#[allow(clippy::too_many_arguments)]
fn extract(
    pixels: Vec<u8>,
    width: u32,
    height: u32,
    preprocess: bool,
    unsharp_radius: f64,
    unsharp_amount: f64,
    crimmins_iterations: u32,
    gray_only: bool,
) -> PyResult<Vec<f64>> {
    let expected = width as usize * height as usize * 3;
    if pixels.len() != expected {
        return Err(PyValueError::new_err(format!(
            "pixel buffer holds {} bytes but {width}x{height} RGB needs {expected}",
            pixels.len()
        )));
    }
    let triples = pixels.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
    let image = RgbImage::new(width, height, triples).map_err(value_error)?;
    let opts = ExtractOptions {
        preprocess_enabled: preprocess,
        unsharp_radius,
        unsharp_amount,
        crimmins_iterations,
        gray_only,
    };
    let vector = descriptor::extract(&image, &opts).map_err(value_error)?;
    Ok(vector.into_values())
}

/// Names matching the positions of the values `extract` returns.
#[pyfunction]
#[pyo3(signature = (gray_only = false))]
fn feature_names(gray_only: bool) -> Vec<String> {
    descriptor::feature_names(gray_only)
}

/// Compute the 14 per-view indices straight from species counts.
///
/// `counts` is a list of `(gray_level, pixel_count)` pairs. Returns a dict
/// keyed by index name (`d_mg` through `d_tt`).
#[pyfunction]
fn histogram_indices(py: Python<'_>, counts: Vec<(u8, u64)>) -> PyResult<Py<PyDict>> {
    let hist = histogram_from_pairs(counts)?;
    let bio = BiodiversityIndices::compute(&hist).map_err(value_error)?.to_array();
    let tree = build_tree(&hist);
    let dm = distance_matrix(&tree);
    let tax = TaxonomicIndices::compute(&hist, &dm).to_array();

    let dict = PyDict::new(py);
    for (name, value) in INDEX_NAMES.iter().zip(bio.into_iter().chain(tax)) {
        dict.set_item(name, value)?;
    }
    Ok(dict.unbind())
}

/// Render the binary threshold tree the taxonomic indices are computed over.
///
/// `counts` is a list of `(gray_level, pixel_count)` pairs.
#[pyfunction]
fn threshold_tree(counts: Vec<(u8, u64)>) -> PyResult<String> {
    let hist = histogram_from_pairs(counts)?;
    Ok(build_tree(&hist).render_indented())
}

/// Texture descriptor built on ecological diversity indices: gray levels act
/// as species, pixels as individuals, and each image view is summarized by
/// seven biodiversity indices plus seven taxonomic distinctness indices.
#[pymodule]
fn pybitdesc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FEATURE_COUNT", descriptor::FEATURE_COUNT)?;
    m.add("CHANNEL_FEATURE_COUNT", descriptor::CHANNEL_FEATURE_COUNT)?;
    m.add_function(wrap_pyfunction!(extract, m)?)?;
    m.add_function(wrap_pyfunction!(feature_names, m)?)?;
    m.add_function(wrap_pyfunction!(histogram_indices, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_tree, m)?)?;
    Ok(())
}
