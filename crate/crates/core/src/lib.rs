//! Bio-inspired texture descriptor.
//!
//! Treats an image as an ecosystem (distinct gray levels are species, pixels
//! are individuals) and summarizes its texture with seven ecological
//! diversity indices plus seven taxonomic distinctness indices computed over
//! a binary threshold tree of the levels. Applied to the composite gray image
//! and the three RGB channels this yields a 56-value descriptor.
//!
//! Modules:
//! - [`ecosystem`]: image containers and the species histogram.
//! - [`preprocess`]: channel split, grayscale conversion, unsharp and
//!   Crimmins enhancement filters.
//! - [`biodiversity`]: richness/abundance/evenness indices.
//! - [`taxonomy`]: threshold tree, leaf distance matrix, distinctness indices.
//! - [`descriptor`]: the end-to-end extraction pipeline.
//! - [`harness`]: feature tables, normalization, splits, kNN, metrics, and
//!   the transform/invariance bench.

pub mod biodiversity;
pub mod descriptor;
pub mod ecosystem;
mod error;
pub mod harness;
pub mod preprocess;
pub mod taxonomy;

pub use error::{Error, Result};
