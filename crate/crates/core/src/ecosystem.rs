//! Image containers and the ecosystem abstraction.
//!
//! A gray image is read as an ecosystem: each distinct gray level is a
//! species, each pixel an individual of its level's species. Every index in
//! this crate consumes the [`SpeciesHistogram`] built here, so two images
//! with the same pixel multiset are indistinguishable downstream.

use crate::error::{Error, Result};

/// 8-bit single-channel image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("image dimensions must be positive"));
        }
        let expected = width as usize * height as usize;
        if pixels.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: pixels.len(),
            });
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> u8) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("image dimensions must be positive"));
        }
        let mut pixels = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        GrayImage::new(width, height, pixels)
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    pub fn pixel_count(&self) -> u64 {
        self.width as u64 * self.height as u64
    }
}

/// 8-bit RGB image, row-major `[r, g, b]` triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: u32,
    height: u32,
    pixels: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: u32, height: u32, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("image dimensions must be positive"));
        }
        let expected = width as usize * height as usize;
        if pixels.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: pixels.len(),
            });
        }
        Ok(RgbImage {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> [u8; 3]) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("image dimensions must be positive"));
        }
        let mut pixels = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        RgbImage::new(width, height, pixels)
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> [u8; 3] {
        self.pixels[y as usize * self.width as usize + x as usize]
    }
}

/// Sparse, ascending-sorted abundance table: one `(level, count)` entry per
/// gray level present in the image.
///
/// In ecological terms the entry count is the species richness S, `total` the
/// number of individuals N, and each count an abundance n_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpeciesHistogram {
    entries: Vec<(u8, u64)>,
    total: u64,
}

impl SpeciesHistogram {
    /// Builds a histogram from raw `(level, count)` pairs. Pairs may arrive in
    /// any order; counts for a repeated level are summed. Zero counts are
    /// rejected, as is an empty input.
    pub fn from_counts(counts: impl IntoIterator<Item = (u8, u64)>) -> Result<Self> {
        let mut by_level = [0u64; 256];
        let mut any = false;
        for (level, count) in counts {
            if count == 0 {
                return Err(Error::invalid("species count must be positive"));
            }
            by_level[level as usize] += count;
            any = true;
        }
        if !any {
            return Err(Error::invalid("histogram must contain at least one species"));
        }
        let entries: Vec<(u8, u64)> = by_level
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(level, &c)| (level as u8, c))
            .collect();
        let total = entries.iter().map(|&(_, c)| c).sum();
        Ok(SpeciesHistogram { entries, total })
    }

    /// `(level, count)` pairs, levels strictly ascending.
    #[inline]
    pub fn entries(&self) -> &[(u8, u64)] {
        &self.entries
    }

    /// Number of individuals N (pixels counted).
    #[inline]
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Species richness S: the number of distinct levels present.
    #[inline]
    pub fn richness(&self) -> usize {
        self.entries.len()
    }

    /// Abundance of the most abundant species (Nmax).
    pub fn max_count(&self) -> u64 {
        self.entries.iter().map(|&(_, c)| c).max().unwrap_or(0)
    }

    /// Expands back into a pixel multiset, levels in ascending runs. Rebuilding
    /// a histogram from the result reproduces `self` exactly.
    pub fn expand(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.total as usize);
        for &(level, count) in &self.entries {
            out.extend(std::iter::repeat(level).take(count as usize));
        }
        out
    }
}

/// Counts occurrences of each gray level in the image.
pub fn build_histogram(image: &GrayImage) -> SpeciesHistogram {
    let mut by_level = [0u64; 256];
    for &p in image.pixels() {
        by_level[p as usize] += 1;
    }
    let entries: Vec<(u8, u64)> = by_level
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(level, &c)| (level as u8, c))
        .collect();
    SpeciesHistogram {
        entries,
        total: image.pixel_count(),
    }
}
