// SPDX-License-Identifier: Apache-2.0

//! Command-line schema and TOML config merging. Every subcommand field is
//! optional at parse time so a config file can supply it; explicit flags win.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "primordial-qg",
    version,
    about = "Gravitational decoherence of primordial massive particles"
)]
pub struct Cli {
    /// TOML file with defaults; explicit flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output file; standard output when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Output format [default: csv].
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Seed for random initial states [default: 0].
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Purity-decay bound Γ₀ and t_0.01 for one mass and temperature.
    Gamma(GammaArgs),
    /// Γ₀ and t_0.01 over a log-spaced temperature range.
    Sweep(SweepArgs),
    /// Evolve a momentum-grid density matrix under the master equation.
    Evolve(EvolveArgs),
    /// Free wavepacket spread after a given time.
    Spread(SpreadArgs),
    /// Levels and lines of a gravitational atom.
    Spectrum(SpectrumArgs),
    /// Lensing intensity profiles for a superposed lens.
    Lensing(LensingArgs),
    /// Reduced purity of a two-particle state.
    Witness(WitnessArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gamma(_) => "gamma",
            Command::Sweep(_) => "sweep",
            Command::Evolve(_) => "evolve",
            Command::Spread(_) => "spread",
            Command::Spectrum(_) => "spectrum",
            Command::Lensing(_) => "lensing",
            Command::Witness(_) => "witness",
        }
    }
}

macro_rules! merge_under {
    ($t:ident { $($f:ident),* $(,)? }) => {
        impl $t {
            pub fn merge_under(self, base: Self) -> Self {
                $t { $($f: self.$f.or(base.$f)),* }
            }
        }
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bath {
    Photon,
    Fermion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaMethod {
    Closed,
    Quadrature,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct GammaArgs {
    /// Particle mass, kg.
    #[arg(long)]
    pub mass_kg: Option<f64>,
    /// Bath temperature, K.
    #[arg(long)]
    pub temp_k: Option<f64>,
    /// Bath species [default: photon].
    #[arg(long, value_enum)]
    pub bath: Option<Bath>,
    /// Photon-bath evaluation [default: closed].
    #[arg(long, value_enum)]
    pub method: Option<GammaMethod>,
    /// Fermion rest mass, GeV/c² (fermion bath only).
    #[arg(long)]
    pub fermion_mass_gev: Option<f64>,
    /// Spread parameter D = ⟨x²⟩ tr ρ², Planck lengths squared (fermion bath only).
    #[arg(long)]
    pub spread_planck: Option<f64>,
}
merge_under!(GammaArgs {
    mass_kg,
    temp_k,
    bath,
    method,
    fermion_mass_gev,
    spread_planck
});

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SweepArgs {
    /// Particle mass, kg.
    #[arg(long)]
    pub mass_kg: Option<f64>,
    /// Lowest temperature, K [default: 2.7].
    #[arg(long)]
    pub tmin_k: Option<f64>,
    /// Highest temperature, K [default: 3000].
    #[arg(long)]
    pub tmax_k: Option<f64>,
    /// Number of log-spaced temperatures [default: 50].
    #[arg(long)]
    pub points: Option<usize>,
}
merge_under!(SweepArgs {
    mass_kg,
    tmin_k,
    tmax_k,
    points
});

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct EvolveArgs {
    /// Particle mass, Planck masses [default: 1].
    #[arg(long)]
    pub mass_planck: Option<f64>,
    /// Inverse bath temperature, Planck units [default: 1].
    #[arg(long)]
    pub beta_planck: Option<f64>,
    /// Grid points [default: 64].
    #[arg(long)]
    pub n: Option<usize>,
    /// Momentum spacing, Planck momenta [default: 0.1].
    #[arg(long)]
    pub dk_planck: Option<f64>,
    /// Grid centre, Planck momenta [default: 0].
    #[arg(long)]
    pub k0_planck: Option<f64>,
    /// Gaussian width of the initial state, Planck momenta [default: 0.5].
    #[arg(long)]
    pub sigma_k_planck: Option<f64>,
    /// Rank of a random initial state; 0 selects the Gaussian [default: 0].
    #[arg(long)]
    pub rank: Option<usize>,
    /// Time step, Planck times [default: 0.05].
    #[arg(long)]
    pub dt_planck: Option<f64>,
    /// Number of steps [default: 500].
    #[arg(long)]
    pub steps: Option<usize>,
    /// Record tr ρ² every this many steps [default: 10].
    #[arg(long)]
    pub record_every: Option<usize>,
    /// Write the final state as a CSV snapshot here, with a `.header` sidecar.
    #[arg(long, value_name = "PATH")]
    pub dump: Option<PathBuf>,
}
merge_under!(EvolveArgs {
    mass_planck,
    beta_planck,
    n,
    dk_planck,
    k0_planck,
    sigma_k_planck,
    rank,
    dt_planck,
    steps,
    record_every,
    dump,
});

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SpreadArgs {
    /// Particle mass, kg.
    #[arg(long, conflicts_with = "mass_gev")]
    pub mass_kg: Option<f64>,
    /// Particle rest mass, GeV/c².
    #[arg(long)]
    pub mass_gev: Option<f64>,
    /// Elapsed time, Gyr.
    #[arg(long)]
    pub time_gyr: Option<f64>,
    /// Initial spread, m; the optimal value is used when omitted.
    #[arg(long)]
    pub s0_m: Option<f64>,
}
merge_under!(SpreadArgs {
    mass_kg,
    mass_gev,
    time_gyr,
    s0_m
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrequencyArg {
    Angular,
    Cycles,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SpectrumArgs {
    /// Rest mass of each body, GeV/c².
    #[arg(long)]
    pub mass_gev: Option<f64>,
    /// Highest principal quantum number [default: 5].
    #[arg(long)]
    pub nmax: Option<u32>,
    /// Line frequencies in rad/s (angular) or Hz (cycles) [default: angular].
    #[arg(long, value_enum)]
    pub frequency_unit: Option<FrequencyArg>,
}
merge_under!(SpectrumArgs {
    mass_gev,
    nmax,
    frequency_unit
});

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct LensingArgs {
    /// Lens mass, Planck masses [default: 1].
    #[arg(long)]
    pub lens_mass_planck: Option<f64>,
    /// Source angular frequency, Planck units [default: 10].
    #[arg(long)]
    pub omega_planck: Option<f64>,
    /// Branch positions, Einstein radii, comma separated [default: -1,1].
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub branches: Option<Vec<f64>>,
    /// Gaussian width of each branch, Einstein radii; 0 gives point branches [default: 0].
    #[arg(long)]
    pub branch_width: Option<f64>,
    /// Core radius of the softened potential, Einstein radii [default: 1.5].
    #[arg(long)]
    pub core_radius: Option<f64>,
    /// Branch sampling step, Einstein radii [default: 0.05].
    #[arg(long)]
    pub dx: Option<f64>,
    /// Lowest observation angle, Einstein radii [default: -8].
    #[arg(long)]
    pub theta_min: Option<f64>,
    /// Highest observation angle, Einstein radii [default: 8].
    #[arg(long)]
    pub theta_max: Option<f64>,
    /// Number of observation angles [default: 801].
    #[arg(long)]
    pub points: Option<usize>,
}
merge_under!(LensingArgs {
    lens_mass_planck,
    omega_planck,
    branches,
    branch_width,
    core_radius,
    dx,
    theta_min,
    theta_max,
    points,
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Product,
    Correlated,
    Random,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct WitnessArgs {
    /// Two-particle state [default: correlated].
    #[arg(long, value_enum)]
    pub kind: Option<WitnessKind>,
    /// Grid points per particle [default: 32].
    #[arg(long)]
    pub n: Option<usize>,
    /// Momentum spacing, Planck momenta [default: 0.5].
    #[arg(long)]
    pub dk_planck: Option<f64>,
    /// Gaussian width, Planck momenta [default: 2].
    #[arg(long)]
    pub sigma_planck: Option<f64>,
    /// Momentum correlation coefficient in (-1, 1) [default: 0.8].
    #[arg(long)]
    pub correlation: Option<f64>,
}
merge_under!(WitnessArgs {
    kind,
    n,
    dk_planck,
    sigma_planck,
    correlation
});

/// Contents of a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub gamma: GammaArgs,
    #[serde(default)]
    pub sweep: SweepArgs,
    #[serde(default)]
    pub evolve: EvolveArgs,
    #[serde(default)]
    pub spread: SpreadArgs,
    #[serde(default)]
    pub spectrum: SpectrumArgs,
    #[serde(default)]
    pub lensing: LensingArgs,
    #[serde(default)]
    pub witness: WitnessArgs,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

/// Fully merged invocation.
#[derive(Debug)]
pub struct RunConfig {
    pub command: Command,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn resolve(cli: Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let command = match cli.command {
            Command::Gamma(a) => Command::Gamma(a.merge_under(file.gamma)),
            Command::Sweep(a) => Command::Sweep(a.merge_under(file.sweep)),
            Command::Evolve(a) => Command::Evolve(a.merge_under(file.evolve)),
            Command::Spread(a) => Command::Spread(a.merge_under(file.spread)),
            Command::Spectrum(a) => Command::Spectrum(a.merge_under(file.spectrum)),
            Command::Lensing(a) => Command::Lensing(a.merge_under(file.lensing)),
            Command::Witness(a) => Command::Witness(a.merge_under(file.witness)),
        };
        Ok(RunConfig {
            command,
            out: cli.out.or(file.out),
            format: cli.format.or(file.format).unwrap_or(Format::Csv),
            seed: cli.seed.or(file.seed).unwrap_or(0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn schema_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_win_over_config() {
        let flags = GammaArgs {
            mass_kg: Some(2.0),
            ..Default::default()
        };
        let file: ConfigFile = toml::from_str("[gamma]\nmass-kg = 5.0\ntemp-k = 3.0\n").unwrap();
        let merged = flags.merge_under(file.gamma);
        assert_eq!(merged.mass_kg, Some(2.0));
        assert_eq!(merged.temp_k, Some(3.0));
    }

    #[test]
    fn unknown_config_keys_rejected() {
        assert!(toml::from_str::<ConfigFile>("[gamma]\nmass = 1.0\n").is_err());
        assert!(toml::from_str::<ConfigFile>("threads = 4\n").is_err());
    }

    #[test]
    fn every_flag_documents_itself() {
        let cmd = Cli::command();
        for sub in cmd.get_subcommands() {
            for arg in sub.get_arguments() {
                assert!(
                    arg.get_help().is_some(),
                    "{} --{} lacks help",
                    sub.get_name(),
                    arg.get_id()
                );
            }
        }
    }
}
