//! The `extract` subcommand: walk a class-per-subdirectory dataset, compute
//! descriptors, and write the feature CSV.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use walkdir::WalkDir;

use bitdesc::descriptor::ExtractOptions;
use bitdesc::ecosystem::RgbImage;
use bitdesc::harness::{extract_batch, BatchSample};

#[derive(Args)]
pub struct ExtractArgs {
    /// Dataset root: one subdirectory per class, images inside.
    #[arg(long)]
    pub input: PathBuf,
    /// Destination CSV path.
    #[arg(long)]
    pub output: PathBuf,
    /// Skip the unsharp/despeckle filters and extract from raw pixels.
    #[arg(long)]
    pub no_preprocess: bool,
    /// Emit the 14 composite-gray features instead of all 56.
    #[arg(long)]
    pub gray_only: bool,
    /// Gaussian standard deviation of the sharpening blur.
    #[arg(long, default_value_t = 1.0)]
    pub unsharp_radius: f64,
    /// Strength of the sharpening term.
    #[arg(long, default_value_t = 1.0)]
    pub unsharp_amount: f64,
    /// Despeckle iterations on the composite gray image.
    #[arg(long, default_value_t = 1)]
    pub crimmins_iters: u32,
    /// Worker threads for extraction (default: all cores). Output does not
    /// depend on this.
    #[arg(long)]
    pub jobs: Option<usize>,
}

pub fn options(
    no_preprocess: bool,
    gray_only: bool,
    unsharp_radius: f64,
    unsharp_amount: f64,
    crimmins_iters: u32,
) -> ExtractOptions {
    ExtractOptions {
        preprocess_enabled: !no_preprocess,
        unsharp_radius,
        unsharp_amount,
        crimmins_iterations: crimmins_iters,
        gray_only,
    }
}

/// Decodes one image file into the in-memory RGB form.
pub fn load_image(path: &Path) -> Result<RgbImage> {
    let decoded = image::open(path).with_context(|| format!("decoding {}", path.display()))?;
    let rgb = decoded.to_rgb8();
    let pixels = rgb.pixels().map(|p| [p[0], p[1], p[2]]).collect();
    RgbImage::new(rgb.width(), rgb.height(), pixels)
        .with_context(|| format!("converting {}", path.display()))
}

/// Collects every regular file under each class subdirectory, sorted by
/// relative path so runs are reproducible.
fn dataset_files(root: &Path) -> Result<Vec<(String, String, PathBuf)>> {
    if !root.is_dir() {
        bail!("input {} is not a readable directory", root.display());
    }
    let mut classes: Vec<PathBuf> = std::fs::read_dir(root)
        .with_context(|| format!("reading {}", root.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    classes.sort();
    if classes.is_empty() {
        bail!("input {} contains no class subdirectories", root.display());
    }

    let mut files = Vec::new();
    for class_dir in classes {
        let label = class_dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        for entry in WalkDir::new(&class_dir).sort_by_file_name() {
            let entry = entry.with_context(|| format!("walking {}", class_dir.display()))?;
            if !entry.file_type().is_file() {
                continue;
            }
            let rel = entry
                .path()
                .strip_prefix(root)
                .expect("walked paths live under the root")
                .to_string_lossy()
                .replace(std::path::MAIN_SEPARATOR, "/");
            files.push((rel, label.clone(), entry.path().to_path_buf()));
        }
    }
    files.sort();
    Ok(files)
}

pub fn run(args: ExtractArgs) -> Result<u8> {
    let opts = options(
        args.no_preprocess,
        args.gray_only,
        args.unsharp_radius,
        args.unsharp_amount,
        args.crimmins_iters,
    );

    let mut samples = Vec::new();
    let mut skipped = 0usize;
    for (sample_id, label, path) in dataset_files(&args.input)? {
        match load_image(&path) {
            Ok(image) if image.width() >= 2 && image.height() >= 2 => {
                samples.push(BatchSample { sample_id, label, image });
            }
            Ok(image) => {
                eprintln!(
                    "warning: skipping {} ({}x{} is below the 2x2 minimum)",
                    path.display(),
                    image.width(),
                    image.height()
                );
                skipped += 1;
            }
            Err(err) => {
                eprintln!("warning: skipping {} ({err:#})", path.display());
                skipped += 1;
            }
        }
    }
    if samples.is_empty() {
        bail!("no decodable images found under {}", args.input.display());
    }

    let table = extract_batch(&samples, &opts, args.jobs)?;
    let out = File::create(&args.output)
        .with_context(|| format!("creating {}", args.output.display()))?;
    let mut out = BufWriter::new(out);
    table.to_csv(&mut out)?;
    out.flush()
        .with_context(|| format!("writing {}", args.output.display()))?;

    println!(
        "wrote {} rows ({} classes, {} features) to {}; skipped {} unusable files",
        table.len(),
        table.labels().len(),
        table.feature_count(),
        args.output.display(),
        skipped
    );
    Ok(0)
}
