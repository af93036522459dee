//! Image transforms for the invariance bench: rotations, reflections,
//! nearest-neighbor rescale, gamma correction, and seeded pixel shuffle.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;

use crate::ecosystem::RgbImage;
use crate::error::{Error, Result};

/// A transform to apply before re-extracting features. Rotations, flips, and
/// shuffle permute pixels and leave the gray histogram untouched; rescale and
/// gamma do not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransformSpec {
    Rot90,
    Rot180,
    Rot270,
    FlipH,
    FlipV,
    /// Nearest-neighbor resample by this factor (> 0; 0.5 halves each side,
    /// 2.0 replicates each pixel into a 2x2 block).
    Rescale(f64),
    /// Per-channel intensity remap v -> round(255 (v/255)^g), g > 0.
    Gamma(f64),
    /// Seeded random permutation of pixel positions.
    Shuffle(u64),
}

impl TransformSpec {
    /// Whether the transform is a pure pixel permutation, leaving species
    /// abundances exactly unchanged.
    pub fn preserves_histogram(&self) -> bool {
        !matches!(self, TransformSpec::Rescale(_) | TransformSpec::Gamma(_))
    }

    /// Parses a CLI token: plain names for the permutations, `rescale:<f>`,
    /// `gamma:<g>`, `shuffle:<seed>`.
    pub fn parse(token: &str) -> Result<Self> {
        let spec = match token {
            "rot90" => TransformSpec::Rot90,
            "rot180" => TransformSpec::Rot180,
            "rot270" => TransformSpec::Rot270,
            "flip_h" => TransformSpec::FlipH,
            "flip_v" => TransformSpec::FlipV,
            _ => {
                let (kind, arg) = token
                    .split_once(':')
                    .ok_or_else(|| Error::invalid(format!("unknown transform {token:?}")))?;
                match kind {
                    "rescale" => TransformSpec::Rescale(arg.parse().map_err(|_| {
                        Error::invalid(format!("bad rescale factor {arg:?}"))
                    })?),
                    "gamma" => TransformSpec::Gamma(arg.parse().map_err(|_| {
                        Error::invalid(format!("bad gamma exponent {arg:?}"))
                    })?),
                    "shuffle" => TransformSpec::Shuffle(arg.parse().map_err(|_| {
                        Error::invalid(format!("bad shuffle seed {arg:?}"))
                    })?),
                    _ => return Err(Error::invalid(format!("unknown transform {token:?}"))),
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        match *self {
            TransformSpec::Rescale(f) if !(f > 0.0 && f.is_finite()) => Err(Error::invalid(
                format!("rescale factor must be positive, got {f}"),
            )),
            TransformSpec::Gamma(g) if !(g > 0.0 && g.is_finite()) => Err(Error::invalid(
                format!("gamma exponent must be positive, got {g}"),
            )),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for TransformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformSpec::Rot90 => write!(f, "rot90"),
            TransformSpec::Rot180 => write!(f, "rot180"),
            TransformSpec::Rot270 => write!(f, "rot270"),
            TransformSpec::FlipH => write!(f, "flip_h"),
            TransformSpec::FlipV => write!(f, "flip_v"),
            TransformSpec::Rescale(x) => write!(f, "rescale:{x}"),
            TransformSpec::Gamma(g) => write!(f, "gamma:{g}"),
            TransformSpec::Shuffle(s) => write!(f, "shuffle:{s}"),
        }
    }
}

/// Applies one transform. Rotation is clockwise; rescale errors if the result
/// would drop below 2x2.
pub fn apply_transform(image: &RgbImage, t: TransformSpec) -> Result<RgbImage> {
    t.validate()?;
    let (w, h) = (image.width(), image.height());
    match t {
        TransformSpec::Rot90 => RgbImage::from_fn(h, w, |x, y| image.get(y, h - 1 - x)),
        TransformSpec::Rot180 => {
            RgbImage::from_fn(w, h, |x, y| image.get(w - 1 - x, h - 1 - y))
        }
        TransformSpec::Rot270 => RgbImage::from_fn(h, w, |x, y| image.get(w - 1 - y, x)),
        TransformSpec::FlipH => RgbImage::from_fn(w, h, |x, y| image.get(w - 1 - x, y)),
        TransformSpec::FlipV => RgbImage::from_fn(w, h, |x, y| image.get(x, h - 1 - y)),
        TransformSpec::Rescale(f) => {
            let nw = (w as f64 * f).round() as i64;
            let nh = (h as f64 * f).round() as i64;
            if nw < 2 || nh < 2 {
                return Err(Error::invalid(format!(
                    "rescale by {f} shrinks {w}x{h} below the 2x2 minimum"
                )));
            }
            // Nearest source index, exact half ties resolved toward the
            // origin so integer upscale factors replicate pixels exactly.
            let nearest = |i: u32, limit: u32| -> u32 {
                let src = (i as f64 / f - 0.5).ceil() as i64;
                src.clamp(0, limit as i64 - 1) as u32
            };
            RgbImage::from_fn(nw as u32, nh as u32, |x, y| {
                image.get(nearest(x, w), nearest(y, h))
            })
        }
        TransformSpec::Gamma(g) => {
            let curve: Vec<u8> = (0..256u32)
                .map(|v| {
                    (255.0 * (v as f64 / 255.0).powf(g)).round().clamp(0.0, 255.0) as u8
                })
                .collect();
            RgbImage::from_fn(w, h, |x, y| {
                let [r, gr, b] = image.get(x, y);
                [curve[r as usize], curve[gr as usize], curve[b as usize]]
            })
        }
        TransformSpec::Shuffle(seed) => {
            let mut pixels = image.pixels().to_vec();
            pixels.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            RgbImage::new(w, h, pixels)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn numbered(w: u32, h: u32) -> RgbImage {
        RgbImage::from_fn(w, h, |x, y| {
            let v = (y * w + x) as u8;
            [v, v.wrapping_add(1), v.wrapping_add(2)]
        })
        .unwrap()
    }

    #[test]
    fn quarter_rotation_moves_corners_clockwise() {
        let img = numbered(3, 2);
        let out = apply_transform(&img, TransformSpec::Rot90).unwrap();
        assert_eq!((out.width(), out.height()), (2, 3));
        // Bottom-left corner becomes the top-left corner.
        assert_eq!(out.get(0, 0), img.get(0, 1));
        assert_eq!(out.get(1, 0), img.get(0, 0));
        assert_eq!(out.get(0, 2), img.get(2, 1));
    }

    #[test]
    fn rot180_twice_is_identity() {
        let img = numbered(5, 3);
        let once = apply_transform(&img, TransformSpec::Rot180).unwrap();
        let twice = apply_transform(&once, TransformSpec::Rot180).unwrap();
        assert_eq!(twice, img);
        assert_ne!(once, img);
    }

    #[test]
    fn three_quarter_rotation_inverts_quarter() {
        let img = numbered(4, 7);
        let r90 = apply_transform(&img, TransformSpec::Rot90).unwrap();
        let back = apply_transform(&r90, TransformSpec::Rot270).unwrap();
        assert_eq!(back, img);
    }

    #[test]
    fn flips_are_involutions() {
        let img = numbered(6, 4);
        for t in [TransformSpec::FlipH, TransformSpec::FlipV] {
            let once = apply_transform(&img, t).unwrap();
            let twice = apply_transform(&once, t).unwrap();
            assert_eq!(twice, img);
        }
    }

    #[test]
    fn half_rescale_keeps_top_left_of_each_block() {
        let img = numbered(4, 4);
        let out = apply_transform(&img, TransformSpec::Rescale(0.5)).unwrap();
        assert_eq!((out.width(), out.height()), (2, 2));
        for y in 0..2 {
            for x in 0..2 {
                assert_eq!(out.get(x, y), img.get(2 * x, 2 * y));
            }
        }
    }

    #[test]
    fn double_rescale_replicates_pixels() {
        let img = numbered(3, 2);
        let out = apply_transform(&img, TransformSpec::Rescale(2.0)).unwrap();
        assert_eq!((out.width(), out.height()), (6, 4));
        for y in 0..4 {
            for x in 0..6 {
                assert_eq!(out.get(x, y), img.get(x / 2, y / 2));
            }
        }
    }

    #[test]
    fn rescale_below_minimum_errors() {
        let img = numbered(4, 4);
        assert!(apply_transform(&img, TransformSpec::Rescale(0.25)).is_err());
        assert!(apply_transform(&img, TransformSpec::Rescale(0.0)).is_err());
    }

    #[test]
    fn gamma_one_is_identity_and_gamma_preserves_extremes() {
        let img = numbered(4, 4);
        assert_eq!(apply_transform(&img, TransformSpec::Gamma(1.0)).unwrap(), img);

        let bw = RgbImage::from_fn(2, 2, |x, _| if x == 0 { [0; 3] } else { [255; 3] }).unwrap();
        let out = apply_transform(&bw, TransformSpec::Gamma(0.5)).unwrap();
        assert_eq!(out, bw);

        // Mid-tones brighten under g < 1: 255 * (128/255)^0.5 rounds to 181.
        let mid = RgbImage::from_fn(2, 2, |_, _| [128; 3]).unwrap();
        let out = apply_transform(&mid, TransformSpec::Gamma(0.5)).unwrap();
        assert_eq!(out.get(0, 0), [181, 181, 181]);
    }

    #[test]
    fn shuffle_is_a_seeded_permutation() {
        let img = numbered(5, 5);
        let a = apply_transform(&img, TransformSpec::Shuffle(13)).unwrap();
        let b = apply_transform(&img, TransformSpec::Shuffle(13)).unwrap();
        assert_eq!(a, b);
        let c = apply_transform(&img, TransformSpec::Shuffle(14)).unwrap();
        assert_ne!(a, c);

        let mut original = img.pixels().to_vec();
        let mut shuffled = a.pixels().to_vec();
        original.sort_unstable();
        shuffled.sort_unstable();
        assert_eq!(original, shuffled);
    }

    #[test]
    fn token_parsing() {
        assert_eq!(TransformSpec::parse("rot90").unwrap(), TransformSpec::Rot90);
        assert_eq!(TransformSpec::parse("flip_h").unwrap(), TransformSpec::FlipH);
        assert_eq!(
            TransformSpec::parse("rescale:0.5").unwrap(),
            TransformSpec::Rescale(0.5)
        );
        assert_eq!(
            TransformSpec::parse("gamma:0.5").unwrap(),
            TransformSpec::Gamma(0.5)
        );
        assert_eq!(
            TransformSpec::parse("shuffle:13").unwrap(),
            TransformSpec::Shuffle(13)
        );
        for bad in ["rot45", "rescale:-1", "rescale:x", "gamma:0", "shuffle:", "spin"] {
            assert!(TransformSpec::parse(bad).is_err(), "{bad} should fail");
        }
        for t in [
            TransformSpec::Rot270,
            TransformSpec::Rescale(0.5),
            TransformSpec::Gamma(2.0),
            TransformSpec::Shuffle(7),
        ] {
            assert_eq!(TransformSpec::parse(&t.to_string()).unwrap(), t);
        }
    }

    fn arb_rgb() -> impl Strategy<Value = RgbImage> {
        (3u32..10, 3u32..10)
            .prop_flat_map(|(w, h)| {
                proptest::collection::vec(any::<[u8; 3]>(), (w * h) as usize)
                    .prop_map(move |px| RgbImage::new(w, h, px).unwrap())
            })
    }

    proptest! {
        #[test]
        fn permutations_preserve_the_pixel_multiset(img in arb_rgb(), seed in any::<u64>()) {
            for t in [
                TransformSpec::Rot90,
                TransformSpec::Rot180,
                TransformSpec::Rot270,
                TransformSpec::FlipH,
                TransformSpec::FlipV,
                TransformSpec::Shuffle(seed),
            ] {
                prop_assert!(t.preserves_histogram());
                let out = apply_transform(&img, t).unwrap();
                let mut a = img.pixels().to_vec();
                let mut b = out.pixels().to_vec();
                a.sort_unstable();
                b.sort_unstable();
                prop_assert_eq!(a, b);
            }
        }

        #[test]
        fn four_quarter_rotations_are_identity(img in arb_rgb()) {
            let mut out = img.clone();
            for _ in 0..4 {
                out = apply_transform(&out, TransformSpec::Rot90).unwrap();
            }
            prop_assert_eq!(out, img);
        }
    }
}
