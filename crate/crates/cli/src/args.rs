use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use depmat_core::matrix::MatrixKind;

#[derive(Parser)]
#[command(name = "depmat", version, about = "Microservice dependency matrix analyzer")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Analyze a codebase and write the dependency report.
    Analyze(AnalyzeArgs),
    /// Compare one matrix across two versions.
    Diff(DiffArgs),
    /// List endpoints receiving many cross-service calls.
    Hotspots(HotspotsArgs),
    /// Work with extracted fact files.
    #[command(subcommand)]
    Ir(IrCommand),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Edm,
    Ddm,
    Sdm,
}

impl KindArg {
    pub fn kind(self) -> MatrixKind {
        match self {
            KindArg::Edm => MatrixKind::Edm,
            KindArg::Ddm => MatrixKind::Ddm,
            KindArg::Sdm => MatrixKind::Sdm,
        }
    }
}

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Source directory or git URL. Optional when --ir-in supplies the facts.
    pub source: Option<String>,
    /// Tag or commit to check out before analyzing.
    #[arg(long)]
    pub rev: Option<String>,
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads for source scanning.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=512))]
    pub jobs: Option<u64>,
    /// Drop ambiguous matches from the matrices.
    #[arg(long)]
    pub strict: bool,
    /// Output formats to write.
    #[arg(long, value_delimiter = ',', default_values = ["json", "csv", "svg"])]
    pub format: Vec<OutputFormat>,
    /// Analyze a previously exported fact file instead of source.
    #[arg(long)]
    pub ir_in: Option<PathBuf>,
    /// Also write the extracted facts to this path.
    #[arg(long)]
    pub ir_out: Option<PathBuf>,
}

#[derive(Args)]
pub struct DiffArgs {
    /// Old version: source directory, git URL, fact file, or analysis report.
    pub old: String,
    /// New version, same input forms.
    pub new: String,
    /// Which matrix to compare.
    #[arg(long, value_enum, default_value = "sdm")]
    pub kind: KindArg,
    /// Tag or commit for the old side.
    #[arg(long)]
    pub old_rev: Option<String>,
    /// Tag or commit for the new side.
    #[arg(long)]
    pub new_rev: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory receiving diff.json.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=512))]
    pub jobs: Option<u64>,
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args)]
pub struct HotspotsArgs {
    /// Source directory or git URL. Optional when --ir-in supplies the facts.
    pub source: Option<String>,
    /// Report endpoints with strictly more matched calls than this.
    #[arg(long)]
    pub min_calls: Option<u32>,
    #[arg(long)]
    pub rev: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Optional directory receiving hotspots.csv.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=512))]
    pub jobs: Option<u64>,
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub ir_in: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum IrCommand {
    /// Extract facts without matching and write them as JSON.
    Export(IrExportArgs),
    /// Check a fact file against the schema invariants.
    Validate(IrValidateArgs),
}

#[derive(Args)]
pub struct IrExportArgs {
    /// Source directory or git URL.
    pub source: String,
    /// Destination fact file.
    pub out: PathBuf,
    #[arg(long)]
    pub rev: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=512))]
    pub jobs: Option<u64>,
}

#[derive(Args)]
pub struct IrValidateArgs {
    /// Fact file to check.
    pub path: PathBuf,
}
