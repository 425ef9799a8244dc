//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "helix-otto",
    version,
    about = "Helicoid-stripe spectra and the quantum Otto cycle they drive",
    allow_negative_numbers = true
)]
pub struct Cli {
    /// JSON object of flag values for the subcommand; flags on the command line win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Curvatures, geometric potential and area of a finite helicoid.
    Geometry(GeometryArgs),
    /// Bound-state energies of the radial equation.
    Spectrum(SpectrumArgs),
    /// One Otto cycle at a single compression ratio.
    Cycle(CycleArgs),
    /// Heats, work, efficiency and COP over a range of compression ratios.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Flat sample, hard-wall levels.
    Flat,
    /// Helicoid with xi = 0.5 at the cold end and 1 at the hot end.
    CurvedUp,
    /// Helicoid with xi = 1 at the cold end and 0.5 at the hot end.
    CurvedDown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    /// Work and both heats.
    Heats,
    /// Efficiency over its Carnot value.
    Efficiency,
    /// COP over its Carnot value.
    Cop,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct GeometryArgs {
    /// Twist rate omega (radians per unit height).
    #[arg(long, conflicts_with = "omega_r", required_unless_present = "omega_r")]
    pub omega: Option<f64>,
    /// Dimensionless twist omega*R; sets omega = value / radius.
    #[arg(long)]
    pub omega_r: Option<f64>,
    /// Radial extent R of the stripe.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Height h of the stripe.
    #[arg(long, default_value_t = 1.0)]
    pub height: f64,
    /// Number of evenly spaced radii from 0 to R in the curvature table.
    #[arg(long, default_value_t = 11)]
    pub samples: usize,
    /// Second twist rate; reports the height keeping the area fixed.
    #[arg(long, conflicts_with = "omega_r2")]
    pub omega2: Option<f64>,
    /// Second dimensionless twist omega2*R.
    #[arg(long)]
    pub omega_r2: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write here (atomically) instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct SpectrumArgs {
    /// Dimensionless stripe width xi_max = omega*R.
    #[arg(long)]
    pub xi_max: f64,
    /// Largest angular number; solves l = 0..=l_max.
    #[arg(long, default_value_t = 0)]
    pub l_max: u32,
    /// Modes per angular number.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Energy samples per curve in the SVG plot.
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Working-substance selection shared by `cycle` and `sweep`.
#[derive(Debug, Args)]
pub struct SubstanceArgs {
    /// One of the three standard scenarios.
    #[arg(long, value_enum, conflicts_with_all = ["flat", "xi_cold", "xi_hot"])]
    pub preset: Option<Preset>,
    /// Flat sample instead of a helicoid.
    #[arg(long, conflicts_with_all = ["xi_cold", "xi_hot"])]
    pub flat: bool,
    /// Helicoid width xi at the cold end.
    #[arg(long, requires = "xi_hot")]
    pub xi_cold: Option<f64>,
    /// Helicoid width xi at the hot end.
    #[arg(long, requires = "xi_cold")]
    pub xi_hot: Option<f64>,
}

/// Bath and level settings shared by `cycle` and `sweep`.
#[derive(Debug, Args)]
pub struct BathArgs {
    /// Temperature ratio T_h/T_c.
    #[arg(long, default_value_t = 12.0)]
    pub theta: f64,
    /// Cold-bath inverse temperature in level units.
    #[arg(long, default_value_t = 1.0)]
    pub varsigma: f64,
    /// Number of working levels.
    #[arg(long, default_value_t = 2)]
    pub level_count: usize,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct CycleArgs {
    #[command(flatten)]
    pub substance: SubstanceArgs,
    #[command(flatten)]
    pub bath: BathArgs,
    /// Compression ratio r = rho_c/rho_h.
    #[arg(long)]
    pub r: f64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct SweepArgs {
    #[command(flatten)]
    pub substance: SubstanceArgs,
    #[command(flatten)]
    pub bath: BathArgs,
    /// Compression ratios as lo:hi:step, hi inclusive. Presets have defaults.
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Which quantity the SVG shows.
    #[arg(long, value_enum, default_value_t = PlotKind::Heats)]
    pub plot: PlotKind,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
