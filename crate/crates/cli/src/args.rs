//! Command-line flags. `--dim` is always `N`; the quaternionic families
//! S, AII and CII act on matrices of side `2N`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use stochmat_core::enumerate::{TableFamily, DEFAULT_BUDGET};
use stochmat_core::moments::Ensemble;
use stochmat_core::weingarten::Family;

#[derive(Debug, Parser)]
#[command(name = "stochmat", version, about = "Spectra of random stochastic matrices from compact groups and symmetric spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw Haar samples and write their reduced spectra as JSON lines.
    Sample(SampleArgs),
    /// Exact moment at one dimension, or as a rational function of N.
    ExactMoment(ExactArgs),
    /// Enumerate a count table and compare it with the stored copy.
    Tables(TablesArgs),
    /// Weingarten values by class.
    Weingarten(WeingartenArgs),
    /// Large-N expansion coefficients of a reduced moment.
    Asymptotics(AsymptoticsArgs),
    /// Run the acceptance checks; exits with 1 if any fails.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuantityKind {
    #[default]
    Trace,
    Singular,
}

fn parse_ensemble(s: &str) -> Result<Ensemble, String> {
    s.parse().map_err(|e: stochmat_core::Error| e.to_string())
}

fn parse_table_family(s: &str) -> Result<TableFamily, String> {
    s.parse().map_err(|e: stochmat_core::Error| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: stochmat_core::Error| e.to_string())
}

/// Which variant of the moment to report.
#[derive(Clone, Copy, Debug, Default, Args, Serialize)]
#[group(multiple = false)]
pub struct VariantFlags {
    /// Moment of the reduced spectrum (default).
    #[arg(long)]
    pub reduced: bool,
    /// Moment of the full spectrum, Perron–Frobenius eigenvalue included.
    #[arg(long)]
    pub full: bool,
    /// Reduced moment of `M − α²` (chiral families).
    #[arg(long)]
    pub shifted: bool,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long, value_parser = parse_ensemble)]
    pub ensemble: Ensemble,
    /// N; the matrix side is 2N for S, AII and CII.
    #[arg(long)]
    pub dim: usize,
    /// Signature of the chiral families; `b` defaults to `N − a`.
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub count: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// JSON lines (default) or the histogram as CSV.
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the histogram CSV here.
    #[arg(long)]
    pub histogram: Option<PathBuf>,
    /// Number of histogram bins; Freedman–Diaconis when absent.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Also write a summary JSON here.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Highest moment order in the summary.
    #[arg(long, default_value_t = 4)]
    pub max_order: usize,
    /// Include the stochastic matrix in every record.
    #[arg(long)]
    pub matrix: bool,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ExactArgs {
    #[arg(long, value_parser = parse_ensemble)]
    pub ensemble: Ensemble,
    /// Moment order.
    #[arg(long)]
    pub n: usize,
    /// N (may be rational); not needed with `--symbolic`.
    #[arg(long)]
    pub dim: Option<String>,
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub b: Option<u64>,
    /// `tr (MMᵀ)ⁿ` instead of `tr Mⁿ`.
    #[arg(long)]
    pub singular: bool,
    /// Rational function of N (along the ray `α` for chiral families).
    #[arg(long)]
    pub symbolic: bool,
    /// `α = (a − b)/N` for symbolic chiral moments, e.g. `1/2`.
    #[arg(long)]
    pub alpha: Option<String>,
    #[command(flatten)]
    pub variant: VariantFlags,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct TablesArgs {
    /// FU, GU, FO, GO, FAI, FAII, FAIII or FBDI.
    #[arg(long, value_parser = parse_table_family)]
    pub family: TableFamily,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct WeingartenArgs {
    /// U, O, Sp, AI, AII, AIII or BDI.
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    /// Order: the weight of the partitions.
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub dim: Option<String>,
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub b: Option<u64>,
    /// Rational functions of N instead of values.
    #[arg(long)]
    pub symbolic: bool,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct AsymptoticsArgs {
    #[arg(long, value_parser = parse_ensemble)]
    pub ensemble: Ensemble,
    #[arg(long, value_enum, default_value_t)]
    pub quantity: QuantityKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub alpha: Option<String>,
    /// Number of coefficients; `2n` when absent.
    #[arg(long)]
    pub count: Option<usize>,
    #[command(flatten)]
    pub variant: VariantFlags,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Skip the statistical checks (criteria 5 and 6).
    #[arg(long)]
    pub quick: bool,
    /// Run only these criteria.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u8>,
    #[arg(long, default_value_t = crate::verify::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    /// Write the full report as JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
