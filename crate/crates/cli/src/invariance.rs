//! The `invariance` subcommand: apply a set of image transforms to one image
//! and report how much each descriptor feature moves.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;

use bitdesc::ecosystem::build_histogram;
use bitdesc::harness::{invariance_check, TransformSpec};
use bitdesc::preprocess::to_gray;
use bitdesc::taxonomy::{build_tree, distance_matrix};

use crate::extract;

#[derive(Args)]
pub struct InvarianceArgs {
    /// Image to probe.
    #[arg(long)]
    pub image: PathBuf,
    /// Comma-separated transform tokens, e.g. rot90, flip_h, rescale:0.5,
    /// gamma:0.5, shuffle:13.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "rot90,rot180,rot270,flip_h,flip_v,rescale:0.5,gamma:0.5,shuffle:13"
    )]
    pub transforms: Vec<String>,
    /// Run the enhancement filters before extraction. Filters respond to
    /// pixel arrangement, so exact invariance is no longer expected.
    #[arg(long)]
    pub preprocess: bool,
    /// Gaussian standard deviation of the sharpening blur.
    #[arg(long, default_value_t = 1.0)]
    pub unsharp_radius: f64,
    /// Strength of the sharpening term.
    #[arg(long, default_value_t = 1.0)]
    pub unsharp_amount: f64,
    /// Despeckle iterations on the composite gray image.
    #[arg(long, default_value_t = 1)]
    pub crimmins_iters: u32,
    /// Print the threshold tree of the composite gray image.
    #[arg(long)]
    pub dump_tree: bool,
    /// Print the leaf distance matrix of the composite gray image as CSV.
    #[arg(long)]
    pub dump_matrix: bool,
}

pub fn run(args: InvarianceArgs) -> Result<u8> {
    let specs = args
        .transforms
        .iter()
        .map(|token| TransformSpec::parse(token))
        .collect::<Result<Vec<_>, _>>()?;

    let image = extract::load_image(&args.image)?;
    let opts = extract::options(
        !args.preprocess,
        false,
        args.unsharp_radius,
        args.unsharp_amount,
        args.crimmins_iters,
    );

    if args.dump_tree || args.dump_matrix {
        let gray = to_gray(&image);
        let hist = build_histogram(&gray);
        let tree = build_tree(&hist);
        if args.dump_tree {
            println!("threshold tree of the composite gray image:");
            println!("{}", tree.render_indented());
        }
        if args.dump_matrix {
            println!("leaf distance matrix (edge counts):");
            let levels: Vec<u8> = hist.entries().iter().map(|&(l, _)| l).collect();
            let dm = distance_matrix(&tree);
            print!("{}", dm.to_csv(&levels));
        }
        println!();
    }

    let report = invariance_check(&image, &specs, &opts)?;

    let names = bitdesc::descriptor::feature_names(false);
    let name_width = names.iter().map(|n| n.len()).max().unwrap_or(8);
    let col = 10usize;

    print!("{:<name_width$}", "feature");
    for check in &report.checks {
        print!("  {:>col$}", check.transform.to_string());
    }
    println!();
    for (i, name) in names.iter().enumerate() {
        print!("{name:<name_width$}");
        for check in &report.checks {
            print!("  {:>col$.3e}", check.diffs[i].abs_diff);
        }
        println!();
    }

    println!();
    for check in &report.checks {
        let status = if check.violation {
            "VIOLATION"
        } else if check.exact_expected {
            "OK (exact)"
        } else {
            "OK (informational)"
        };
        let mut line = format!(
            "{:<col$}  max |diff| {:.3e}  {status}",
            check.transform.to_string(),
            check.max_abs_diff
        );
        if check.rescale_breach {
            line.push_str("  [scale-robust features moved beyond tolerance]");
        }
        println!("{line}");
    }

    if report.any_violation {
        println!();
        println!("result: VIOLATION (a histogram-preserving transform changed the descriptor)");
        Ok(1)
    } else {
        println!();
        println!("result: ok");
        Ok(0)
    }
}
