use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, ValueEnum};
use jc_core::entropy::LogBase;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Excited-start transition probability c(t), closed form and exact.
    Transition,
    /// DEM, entropies and c(t) on a time grid.
    ScanTime,
    /// DEM at the first three revival times over a lambda0 grid.
    ScanLambda,
    /// Collapse time, revival times and a detected revival.
    Revival,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Command::Transition => "transition",
            Command::ScanTime => "scan-time",
            Command::ScanLambda => "scan-lambda",
            Command::Revival => "revival",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LogBaseArg {
    #[value(name = "e")]
    E,
    #[value(name = "2")]
    Two,
}

#[derive(Debug, Parser)]
#[command(
    name = "jc-entangle",
    version,
    about = "Atom-field entanglement in the resonant Jaynes-Cummings model"
)]
struct Cli {
    command: Command,
    /// Coupling constant g
    #[arg(long, default_value_t = 1.0)]
    g: f64,
    /// Atomic and field frequency
    #[arg(long, default_value_t = 1.0)]
    omega0: f64,
    /// Mean photon number |theta|^2 of the coherent field
    #[arg(long, default_value_t = 5.0)]
    mean_photons: f64,
    /// Ground-state weight of the initial atom
    #[arg(long, default_value_t = 0.7)]
    lambda0: f64,
    #[arg(long, default_value_t = 50.0)]
    t_max: f64,
    #[arg(long, default_value_t = 0.05)]
    dt: f64,
    /// Poisson tail probability allowed beyond the photon cutoff
    #[arg(long, default_value_t = 1e-12)]
    tail_tol: f64,
    #[arg(long, value_enum, default_value = "e")]
    log_base: LogBaseArg,
    #[arg(long, default_value_t = 21)]
    lambda_points: usize,
    /// Defaults to <command>.csv
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub g: f64,
    pub omega0: f64,
    pub mean_photons: f64,
    pub lambda0: f64,
    pub t_max: f64,
    pub dt: f64,
    pub tail_tol: f64,
    pub log_base: LogBase,
    pub lambda_points: usize,
    pub out_csv: PathBuf,
    pub out_svg: Option<PathBuf>,
}

impl RunConfig {
    fn validate(&self) -> Result<(), String> {
        let checks = [
            (
                (0.0..=1.0).contains(&self.lambda0),
                format!("--lambda0 must lie in [0, 1], got {}", self.lambda0),
            ),
            (
                self.g > 0.0 && self.g.is_finite(),
                format!("--g must be positive, got {}", self.g),
            ),
            (
                self.omega0 >= 0.0 && self.omega0.is_finite(),
                format!("--omega0 must be non-negative, got {}", self.omega0),
            ),
            (
                self.mean_photons >= 0.0 && self.mean_photons.is_finite(),
                format!("--mean-photons must be non-negative, got {}", self.mean_photons),
            ),
            (
                self.dt > 0.0 && self.dt.is_finite(),
                format!("--dt must be positive, got {}", self.dt),
            ),
            (
                self.t_max > self.dt && self.t_max.is_finite(),
                format!("--t-max must exceed --dt, got {} <= {}", self.t_max, self.dt),
            ),
            (
                self.tail_tol > 0.0 && self.tail_tol < 1.0,
                format!("--tail-tol must lie in (0, 1), got {}", self.tail_tol),
            ),
            (
                self.lambda_points >= 2,
                format!("--lambda-points must be at least 2, got {}", self.lambda_points),
            ),
        ];
        match checks.into_iter().find(|(ok, _)| !ok) {
            Some((_, msg)) => Err(msg),
            None => Ok(()),
        }
    }
}

/// Parses `argv` (program name first). Errors carry clap's exit code: 0 for
/// `--help`/`--version`, 2 for usage errors and invalid values.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let config = RunConfig {
        command: cli.command,
        g: cli.g,
        omega0: cli.omega0,
        mean_photons: cli.mean_photons,
        lambda0: cli.lambda0,
        t_max: cli.t_max,
        dt: cli.dt,
        tail_tol: cli.tail_tol,
        log_base: match cli.log_base {
            LogBaseArg::E => LogBase::E,
            LogBaseArg::Two => LogBase::Two,
        },
        lambda_points: cli.lambda_points,
        out_csv: cli
            .out_csv
            .unwrap_or_else(|| PathBuf::from(format!("{}.csv", cli.command))),
        out_svg: cli.out_svg,
    };
    config
        .validate()
        .map_err(|msg| Cli::command().error(ErrorKind::ValueValidation, msg))?;
    Ok(config)
}
