//! Command-line front end: argument parsing, experiment dispatch and CSV/JSON
//! output.

pub mod args;
pub mod format;

use std::io::Write;

use sra_core::evt::asymptotic_params;
use sra_core::experiments::{
    run_cdf_comparison, run_dependency_check, run_ergodic_capacity_sweep, run_hardening_sweep,
    Cell, ExperimentResult,
};
use sra_core::{Snr, SystemConfig};
use thiserror::Error;

pub use args::{parse_args, Command, Format, RunSpec};
pub use format::{Field, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error(transparent)]
    Core(#[from] sra_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

const CDF_COLUMNS: [&str; 6] = ["L", "nt", "snr_db", "x", "empirical_cdf", "analytic_cdf"];
const CAPACITY_COLUMNS: [&str; 7] = [
    "L",
    "nt",
    "snr_db",
    "empirical_mean",
    "analytic_mu",
    "rel_dev",
    "ks",
];
const HARDENING_COLUMNS: [&str; 10] = [
    "L",
    "nt",
    "snr_db",
    "empirical_mean",
    "empirical_var",
    "analytic_mu",
    "analytic_var",
    "beta",
    "rel_dev",
    "ks",
];
const DEPENDENCY_COLUMNS: [&str; 9] = [
    "L",
    "nt",
    "level",
    "threshold",
    "max_delta",
    "std_error",
    "argmax_k",
    "marginal",
    "flag",
];
const PARAMS_COLUMNS: [&str; 11] = [
    "L", "nt", "snr_db", "xi", "phi", "beta", "theta", "mu", "sigma", "location", "scale",
];

/// Token written in place of values for configurations outside the
/// asymptotic regime.
pub const REGIME_ERROR_TOKEN: &str = "regime_violation";

fn cell_prefix(cell: &Cell) -> Vec<Field> {
    vec![
        cell.apertures.into(),
        cell.n_t.into(),
        cell.snr_db.into(),
    ]
}

/// Flattens an experiment into the table layout of its command.
pub fn emit_result(result: &ExperimentResult, spec: &RunSpec) -> Table {
    let mut table = Table {
        notes: result.notes.clone(),
        ..Default::default()
    };
    table.columns = match spec.command {
        Command::Cdf => CDF_COLUMNS.to_vec(),
        Command::Capacity => CAPACITY_COLUMNS.to_vec(),
        Command::Hardening => HARDENING_COLUMNS.to_vec(),
        Command::Dependency => DEPENDENCY_COLUMNS.to_vec(),
        Command::Params => PARAMS_COLUMNS.to_vec(),
    };
    for cell in &result.cells {
        if let Some(err) = &cell.error {
            table.warnings.push(format!(
                "skipping L={} nt={} snr_db={}: {err}",
                cell.apertures, cell.n_t, cell.snr_db
            ));
            continue;
        }
        table.valid_cells += 1;
        match spec.command {
            Command::Cdf => {
                for p in &cell.curve {
                    let mut row = cell_prefix(cell);
                    row.extend([p.x.into(), p.empirical_cdf.into(), p.analytic_cdf.into()]);
                    table.rows.push(row);
                }
            }
            Command::Capacity => {
                if let Some(m) = &cell.metrics {
                    let mut row = cell_prefix(cell);
                    row.extend([
                        m.empirical_mean.into(),
                        m.analytic.mu.into(),
                        m.rel_dev.into(),
                        m.ks.into(),
                    ]);
                    table.rows.push(row);
                }
            }
            Command::Hardening => {
                if let Some(m) = &cell.metrics {
                    let mut row = cell_prefix(cell);
                    row.extend([
                        m.empirical_mean.into(),
                        m.empirical_var.into(),
                        m.analytic.mu.into(),
                        m.analytic_var.into(),
                        m.analytic.beta.into(),
                        m.rel_dev.into(),
                        m.ks.into(),
                    ]);
                    table.rows.push(row);
                }
            }
            Command::Dependency => {
                if let Some(d) = &cell.dependency {
                    for r in &d.rows {
                        let flag = if r.vacuous {
                            "vacuous"
                        } else if r.insufficient {
                            "insufficient"
                        } else if r.low_confidence {
                            "low_confidence"
                        } else {
                            ""
                        };
                        table.rows.push(vec![
                            cell.apertures.into(),
                            cell.n_t.into(),
                            r.level.into(),
                            r.threshold.into(),
                            r.max_delta.into(),
                            r.std_error.into(),
                            r.argmax_lag.map_or(Field::Empty, Field::from),
                            Field::Int(r.marginal),
                            flag.into(),
                        ]);
                    }
                    table.warnings.extend(d.flags.iter().cloned());
                    if !d.monotone_within_se {
                        table
                            .warnings
                            .push("max-delta is not decreasing within standard errors".into());
                    }
                }
            }
            Command::Params => {}
        }
    }
    if table.rows.is_empty() {
        table
            .warnings
            .push("no valid cells: output contains only the header".to_string());
    }
    table
}

/// Limit-law parameters for every (L, n_t, SNR) of the grid. Regime
/// violations become error-token rows.
pub fn command_params(spec: &RunSpec) -> Result<Table, CliError> {
    let mut table = Table {
        columns: PARAMS_COLUMNS.to_vec(),
        ..Default::default()
    };
    for &l in &spec.apertures {
        for &n_t in &spec.n_t {
            for &db in &spec.snr_db {
                let snr = Snr::from_db(db)?;
                let config = SystemConfig::new(l, n_t, snr.linear())?;
                let mut row: Vec<Field> = vec![l.into(), n_t.into(), db.into()];
                match asymptotic_params(&config) {
                    Ok(p) => {
                        let g = p.gumbel();
                        row.extend(
                            [p.xi, p.phi, p.beta, p.theta, p.mu, p.sigma, g.location(), g.scale()]
                                .map(Field::from),
                        );
                        table.valid_cells += 1;
                    }
                    Err(e) => {
                        table.warnings.push(format!("L={l} nt={n_t} snr_db={db}: {e}"));
                        row.push(REGIME_ERROR_TOKEN.into());
                        row.extend(std::iter::repeat_n(Field::Empty, 7));
                    }
                }
                table.rows.push(row);
            }
        }
    }
    Ok(table)
}

/// Runs the experiment a spec asks for.
pub fn run_experiment(spec: &RunSpec) -> Result<ExperimentResult, CliError> {
    let single_snr = || Snr::from_db(spec.snr_db[0]);
    let result = match spec.command {
        Command::Cdf => run_cdf_comparison(
            spec.apertures[0],
            &spec.n_t,
            single_snr()?,
            spec.trials,
            spec.seed,
        )?,
        Command::Capacity => run_ergodic_capacity_sweep(
            spec.apertures[0],
            &spec.n_t,
            &spec.snr_db,
            spec.trials,
            spec.seed,
        )?,
        Command::Hardening => run_hardening_sweep(
            spec.n_t[0],
            &spec.apertures,
            single_snr()?,
            spec.trials,
            spec.seed,
        )?,
        Command::Dependency => {
            let config =
                SystemConfig::new(spec.apertures[0], spec.n_t[0], single_snr()?.linear())?;
            run_dependency_check(&config, spec.trials, spec.seed)?
        }
        Command::Params => {
            return Err(CliError::Usage(
                "`params` does not run an experiment".to_string(),
            ))
        }
    };
    Ok(result)
}

/// Builds the output table for a spec.
pub fn execute(spec: &RunSpec) -> Result<Table, CliError> {
    match spec.command {
        Command::Params => command_params(spec),
        _ => Ok(emit_result(&run_experiment(spec)?, spec)),
    }
}

pub fn render(table: &Table, spec: &RunSpec) -> String {
    match spec.format {
        Format::Csv => format::render_csv(table),
        Format::Json => format::render_json(
            table,
            &format::Meta {
                command: spec.command.name(),
                seed: spec.seed,
                trials: spec.trials,
            },
        ),
    }
}

/// Writes rendered output to the spec's path, or stdout.
pub fn write_output(text: &str, spec: &RunSpec) -> Result<(), CliError> {
    match &spec.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".to_string(),
                source,
            }),
    }
}

/// Full pipeline; returns the process exit code.
pub fn run_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let spec = match parse_args(argv) {
        Ok(s) => s,
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            return e.exit_code();
        }
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let table = match execute(&spec) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    for w in &table.warnings {
        eprintln!("warning: {w}");
    }
    match write_output(&render(&table, &spec), &spec) {
        Err(CliError::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => {}
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
        Ok(()) => {}
    }
    if spec.command == Command::Params || table.valid_cells > 0 {
        0
    } else {
        1
    }
}
