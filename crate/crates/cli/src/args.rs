use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qcmm", version, about = "Two-qubit entanglement in a compact Minkowski manifold")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the density-matrix invariants of a single state.
    Validate(CommonArgs),
    /// Fano parameters, spectra, PPT verdict and manifold coordinates of a state.
    Analyze(CommonArgs),
    /// Sweep a family and emit one row per grid point.
    Trajectory(CommonArgs),
    /// Speeds and quadrispeeds along a family.
    Speeds(CommonArgs),
    /// Sudden-death and revival crossings of a family.
    Crossings(CommonArgs),
}

impl Command {
    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Validate(a)
            | Command::Analyze(a)
            | Command::Trajectory(a)
            | Command::Speeds(a)
            | Command::Crossings(a) => a,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Analyze(_) => "analyze",
            Command::Trajectory(_) => "trajectory",
            Command::Speeds(_) => "speeds",
            Command::Crossings(_) => "crossings",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON state (validate, analyze) or CSV table `theta,p1z,p2z,mxx,myy,mxy,myx,mzz`.
    #[arg(long, conflicts_with = "model")]
    pub input: Option<PathBuf>,

    /// Built-in family.
    #[arg(long, value_enum)]
    pub model: Option<ModelName>,

    /// Mixing weight of a single Werner-type state.
    #[arg(long)]
    pub x: Option<f64>,

    /// How the family is parametrized; defaults to the mixing weight itself.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,

    /// Rate of the exponential in decay/growth modes.
    #[arg(long)]
    pub gamma: Option<f64>,

    #[arg(long)]
    pub lo: Option<f64>,

    #[arg(long)]
    pub hi: Option<f64>,

    /// Number of grid points (coarse scan points for `crossings`).
    #[arg(long)]
    pub n: Option<usize>,

    /// Invariant and light-like band tolerance.
    #[arg(long, default_value_t = qcmm::DEFAULT_TOL)]
    pub tol: f64,

    /// Finite-difference step; default 1e-5·max(1, |θ|).
    #[arg(long)]
    pub h: Option<f64>,

    /// Bisection width for crossing refinement.
    #[arg(long, default_value_t = qcmm::trajectory::DEFAULT_CROSSING_TOL)]
    pub bisect_tol: f64,

    /// Interpolation between table rows.
    #[arg(long, value_enum, default_value_t = InterpArg::Linear)]
    pub interp: InterpArg,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Figure-data preset (trajectory only).
    #[arg(long, value_enum)]
    pub emit: Option<Emit>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelName {
    Bew,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(alias = "parameter-x", alias = "parameter_x")]
    X,
    Decay,
    Growth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InterpArg {
    Linear,
    #[value(alias = "cubic-monotone")]
    Cubic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Cone,
}
