use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::CliError;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TRIALS: usize = sra_core::experiments::DEFAULT_TRIALS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Cdf,
    Capacity,
    Hardening,
    Dependency,
    Params,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Cdf => "cdf",
            Command::Capacity => "capacity",
            Command::Hardening => "hardening",
            Command::Dependency => "dependency",
            Command::Params => "params",
        }
    }
}

/// A validated run request. SNR stays in dB here; experiments convert it.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: Command,
    pub apertures: Vec<usize>,
    pub n_t: Vec<usize>,
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "sra", version, about = "Gumbel analysis of sliding-window antenna array positioning")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Empirical CDF of the mutual information against the Gumbel limit
    Cdf(Flags),
    /// Ergodic capacity over an SNR grid
    Capacity(Flags),
    /// Mean and variance as the number of apertures grows
    Hardening(Flags),
    /// Dependency measure of overlapping windows at high thresholds
    Dependency(Flags),
    /// Print the limit-law parameters without simulating
    Params(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    /// Number of virtual apertures; a comma list for `hardening` and `params`
    #[arg(long = "L", value_name = "L")]
    apertures: Option<String>,
    /// Array length(s), comma separated
    #[arg(long = "nt", value_name = "LIST")]
    n_t: Option<String>,
    /// SNR in dB: a value, a comma list, or start:stop:step
    #[arg(long = "snr-db", value_name = "DB", allow_hyphen_values = true)]
    snr_db: Option<String>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long, short = 'o', value_name = "PATH")]
    output: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_list<T: std::str::FromStr>(flag: &str, raw: &str) -> Result<Vec<T>, CliError> {
    let items = raw
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| usage(format!("{flag}: cannot parse '{}'", s.trim())))
        })
        .collect::<Result<Vec<T>, _>>()?;
    if items.is_empty() {
        return Err(usage(format!("{flag}: empty list")));
    }
    Ok(items)
}

/// `0`, `-20,-10,0` or `-20:20:5` (inclusive stop).
fn parse_snr(raw: &str) -> Result<Vec<f64>, CliError> {
    let flag = "--snr-db";
    let values = if raw.contains(':') {
        let parts = parse_num_parts(flag, raw)?;
        let [start, stop, step] = parts[..] else {
            return Err(usage(format!("{flag}: range must be start:stop:step")));
        };
        if !(step > 0.0) || stop < start {
            return Err(usage(format!("{flag}: range needs step > 0 and stop >= start")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > 10_000 {
            return Err(usage(format!("{flag}: range has too many points")));
        }
        (0..count).map(|i| start + step * i as f64).collect()
    } else {
        parse_list::<f64>(flag, raw)?
    };
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(usage(format!("{flag}: {bad} is not finite")));
    }
    Ok(values)
}

fn parse_num_parts(flag: &str, raw: &str) -> Result<Vec<f64>, CliError> {
    raw.split(':')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("{flag}: cannot parse '{}'", s.trim())))
        })
        .collect()
}

fn single<T: Copy>(flag: &str, command: Command, xs: &[T]) -> Result<(), CliError> {
    if xs.len() != 1 {
        return Err(usage(format!(
            "{flag} takes a single value for `{}`",
            command.name()
        )));
    }
    Ok(())
}

pub fn parse_args<I, T>(argv: I) -> Result<RunSpec, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let (command, flags) = match cli.command {
        Sub::Cdf(f) => (Command::Cdf, f),
        Sub::Capacity(f) => (Command::Capacity, f),
        Sub::Hardening(f) => (Command::Hardening, f),
        Sub::Dependency(f) => (Command::Dependency, f),
        Sub::Params(f) => (Command::Params, f),
    };

    let (default_l, default_nt, default_snr) = match command {
        Command::Cdf | Command::Params => ("128", "1,2,4,8,16", "0"),
        Command::Capacity => ("128", "1,2,4,8,16", "-20:20:5"),
        Command::Hardening => ("64,256,1024,4096", "2", "0"),
        Command::Dependency => ("128", "4", "0"),
    };
    let apertures: Vec<usize> =
        parse_list("--L", flags.apertures.as_deref().unwrap_or(default_l))?;
    let n_t: Vec<usize> = parse_list("--nt", flags.n_t.as_deref().unwrap_or(default_nt))?;
    let snr_db = parse_snr(flags.snr_db.as_deref().unwrap_or(default_snr))?;

    if n_t.contains(&0) {
        return Err(usage("--nt: array length must be at least 1"));
    }
    if flags.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let max_nt = *n_t.iter().max().expect("nonempty");
    if let Some(&l) = apertures.iter().find(|&&l| l < max_nt + 1) {
        return Err(usage(format!(
            "--L {l} must be at least max(--nt) + 1 = {}",
            max_nt + 1
        )));
    }
    match command {
        Command::Cdf => {
            single("--L", command, &apertures)?;
            single("--snr-db", command, &snr_db)?;
        }
        Command::Capacity => single("--L", command, &apertures)?,
        Command::Hardening => {
            single("--nt", command, &n_t)?;
            single("--snr-db", command, &snr_db)?;
            if apertures.windows(2).any(|w| w[1] <= w[0]) {
                return Err(usage("--L values must be strictly increasing for `hardening`"));
            }
        }
        Command::Dependency => {
            single("--L", command, &apertures)?;
            single("--nt", command, &n_t)?;
            single("--snr-db", command, &snr_db)?;
        }
        Command::Params => {}
    }

    Ok(RunSpec {
        command,
        apertures,
        n_t,
        snr_db,
        trials: flags.trials,
        seed: flags.seed,
        format: flags.format,
        output: flags.output,
    })
}
