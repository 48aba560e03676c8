use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ptsusy",
    version,
    about = "Complex SUSY partner potentials: data and checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate V(+) and V(-) of an sl(2,C) family.
    Family(FamilyArgs),
    /// Tabulate the Weierstrass partner pair and the zero-mode modulus.
    Weierstrass(WeierstrassArgs),
    /// Shooting-method levels of an sl(2,C) family against the closed form.
    Spectrum(SpectrumArgs),
    /// Run every numerical check and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    #[value(name = "I", alias = "1", alias = "i")]
    I,
    #[value(name = "II", alias = "2", alias = "ii")]
    II,
    #[value(name = "III", alias = "3", alias = "iii")]
    III,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    #[value(name = "plus", alias = "+")]
    Plus,
    #[value(name = "minus", alias = "-")]
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// E_R = √3, a = 4√(2/√3): g₂ = 4, g₃ = 0.
    Fig1,
    /// E_R = √3, a = 8/3^{1/4}: the degenerate case.
    Fig2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    DecayBoth,
    DirichletBoth,
    DirichletLeftDecayRight,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyParams {
    #[arg(long, value_enum, default_value = "I")]
    pub case: CaseArg,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub m: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub br: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub bi: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub c: f64,
    /// Imaginary shift of the argument, in [-π/4, π/4).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Branch F = ±1 of case III.
    #[arg(long, value_enum, default_value = "plus", allow_hyphen_values = true)]
    pub sign: SignArg,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub xmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub xmax: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[command(flatten)]
    pub family: FamilyParams,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct WeierstrassArgs {
    #[arg(long, value_enum, conflicts_with_all = ["er", "a"])]
    pub preset: Option<Preset>,
    #[arg(long, allow_negative_numbers = true, requires = "a")]
    pub er: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "er")]
    pub a: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub c: f64,
    /// Right end of the z range in the degenerate case; default 8/√E_R.
    #[arg(long)]
    pub zmax: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub family: FamilyParams,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub emin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub emax: Option<f64>,
    #[arg(long, default_value_t = 400)]
    pub scan: usize,
    #[arg(long, value_enum, default_value = "decay-both")]
    pub boundary: BoundaryArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Machine-readable report.
    #[arg(long)]
    pub json: bool,
    /// Constant offset added to F in the constraint checks.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub perturb: f64,
}
