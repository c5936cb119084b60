use clap::{Args, Parser, Subcommand, ValueEnum};
use dirac_coulomb::{Channel, Couplings, NtildeConvention};

use crate::error::CliError;
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "dirac-coulomb", version, about = "Dirac spectrum with vector and scalar Coulomb couplings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form levels of the requested channels.
    Spectrum(SpectrumArgs),
    /// Closed form against the shooting and finite-difference oracles.
    Verify(VerifyArgs),
    /// Random-sample checks of the transformation identities and the reduction.
    Identities(IdentitiesArgs),
    /// Radial spinor components of one level.
    Wavefunction(WavefunctionArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Standard,
    PaperLiteral,
}

impl From<Convention> for NtildeConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Standard => NtildeConvention::Standard,
            Convention::PaperLiteral => NtildeConvention::PaperLiteral,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long = "ntilde-convention", value_enum, default_value_t = Convention::Standard)]
    pub convention: Convention,
}

/// `--kappa` values; repeatable and comma-separated. `--kappa=` yields an
/// explicitly empty list.
#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    #[arg(long = "kappa", value_delimiter = ',', allow_hyphen_values = true)]
    pub kappa: Option<Vec<String>>,
}

impl ChannelArgs {
    /// Channels ordered by (|K|, K), duplicates removed; `default` when the
    /// flag is absent.
    pub fn channels(&self, default: &[i32]) -> Result<Vec<Channel>, CliError> {
        let values: Vec<i32> = match &self.kappa {
            None => default.to_vec(),
            Some(raw) => raw
                .iter()
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<i32>().map_err(|_| CliError::Usage(format!("--kappa: not an integer: {s}"))))
                .collect::<Result<_, _>>()?,
        };
        if values.is_empty() {
            return Err(CliError::Usage("empty channel list".into()));
        }
        let mut channels = values
            .into_iter()
            .map(|k| Channel::from_kappa(k).map_err(CliError::from))
            .collect::<Result<Vec<_>, _>>()?;
        channels.sort_by_key(|c| (c.abs_kappa(), c.kappa()));
        channels.dedup();
        Ok(channels)
    }
}

#[derive(Debug, Clone, Args)]
pub struct CouplingArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a2: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub mass: f64,
}

impl CouplingArgs {
    pub fn couplings(&self) -> Result<Couplings, CliError> {
        Ok(Couplings::new(self.mass, self.a1, self.a2)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub couplings: CouplingArgs,
    #[command(flatten)]
    pub channels: ChannelArgs,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub nmax: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Vector strength; omitted means the grid {0, 0.2, 0.5}.
    #[arg(long, allow_hyphen_values = true)]
    pub a1: Option<f64>,
    /// Scalar strength; omitted means the grid {0, 0.2, 0.5}.
    #[arg(long, allow_hyphen_values = true)]
    pub a2: Option<f64>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub mass: f64,
    #[command(flatten)]
    pub channels: ChannelArgs,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub nmax: u32,
    #[arg(long, default_value_t = 1e-6, allow_hyphen_values = true)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mutation {
    /// Flip the sign of the A₁A₂ term in coshθ.
    FlipCoshCrossTerm,
}

#[derive(Debug, Clone, Args)]
pub struct IdentitiesArgs {
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-12, allow_hyphen_values = true)]
    pub tol: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub mass: f64,
    /// Extra point checked ahead of the samples, e.g. `K=1,a1=0.999,a2=0`.
    #[arg(long = "force-point", hide = true)]
    pub force_point: Vec<String>,
    #[arg(long, value_enum, hide = true)]
    pub mutate: Option<Mutation>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub couplings: CouplingArgs,
    #[command(flatten)]
    pub channels: ChannelArgs,
    /// Principal quantum number; defaults to the lowest level of the channel.
    #[arg(long)]
    pub n: Option<u32>,
    /// Root branch; defaults to the only root of a nodeless level, else plus.
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    /// Outer radius; defaults to 40 decay lengths.
    #[arg(long, allow_hyphen_values = true)]
    pub rmax: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}
