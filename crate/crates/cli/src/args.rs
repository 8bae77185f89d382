use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "koszul-hh",
    version,
    about = "Hochschild cohomology of filtered Koszul algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Presentation file.
    pub file: PathBuf,
    /// Emit the JSON report instead of text.
    #[arg(long)]
    pub json: bool,
    /// Highest degree of the Koszul dual to compute.
    #[arg(long, default_value_t = 6)]
    pub max_dual_degree: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Confluence, curved-structure, twisting-cochain and resolution checks.
    Check {
        #[command(flatten)]
        common: Common,
        /// Weights at which to verify the Koszul resolution.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "0..4")]
        resolution_weights: RangeInclusive<i64>,
    },
    /// The Koszul dual: dimensions, basis, differential and curvature.
    Dual {
        #[command(flatten)]
        common: Common,
    },
    /// Hochschild cohomology slices.
    Hh {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        slice: SliceArgs,
        /// Central element whose action on each slice is reported.
        #[arg(long)]
        central: Option<String>,
    },
    /// Cup products of cohomology classes.
    Cup {
        #[command(flatten)]
        common: Common,
        /// Coefficients; only `regular` is accepted.
        #[arg(long, default_value = "regular")]
        coeff: String,
        /// Product table `PxQ`, e.g. `deg1xdeg1` or `1x2`.
        #[arg(long, alias = "classes")]
        table: Option<String>,
        /// Rank summary `PxQtoR`, e.g. `1x2to3`.
        #[arg(long)]
        surjectivity: Option<String>,
        /// Compare the `1x1` image with `z * HH^2`.
        #[arg(long)]
        central: Option<String>,
        /// Target weights.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "0..2")]
        weights: RangeInclusive<i64>,
    },
    /// Exactness of the Koszul bimodule resolution, weight by weight.
    Resolution {
        #[command(flatten)]
        common: Common,
        /// Weights to check.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "0..4")]
        weights: RangeInclusive<i64>,
    },
}

#[derive(Debug, Args, Clone)]
pub struct SliceArgs {
    /// `regular`, `bimodule:<name>` or `enveloping`.
    #[arg(long, default_value = "regular")]
    pub coeff: String,
    /// Weight window `a..b` (inclusive); default 0..4.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub weights: Option<RangeInclusive<i64>>,
    /// Cohomological degrees `a..b` (inclusive); default 0..3.
    #[arg(long, value_parser = parse_urange)]
    pub degrees: Option<RangeInclusive<usize>>,
    /// Estimate through the length filtration pieces `F_D` and `F_{D+1}`.
    #[arg(long, value_name = "D")]
    pub truncate: Option<usize>,
}

/// `a..b` (inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|e| format!("bad bound '{t}': {e}"))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok(a..=b)
}

pub fn parse_urange(s: &str) -> Result<RangeInclusive<usize>, String> {
    let r = parse_range(s)?;
    if *r.start() < 0 {
        return Err(format!("degrees must be nonnegative, got {s}"));
    }
    Ok(*r.start() as usize..=*r.end() as usize)
}
