use std::io::{self, Write};
use std::path::Path;

use jc_core::analysis::{
    lambda_grid, revival_analysis, revival_period, scan_lambda, scan_time, transition_series, C_CLOSED, C_EXACT,
    DEM_CLOSED, DEM_EXACT,
};
use jc_core::model::{AtomState, FieldConfig, ModelParams};
use thiserror::Error;

use crate::args::{Command, RunConfig};
use crate::csv::{format_value, write_atomic, CsvTable};
use crate::svg::{render_svg, PlotData, PlotError};

/// Revival indices reported by `scan-lambda` and `revival`.
const REVIVAL_KS: [usize; 3] = [1, 2, 3];

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Numerical(#[from] jc_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Plot(#[from] PlotError),
}

impl RunError {
    /// Every runtime failure maps to exit code 1; usage errors never reach `run`.
    pub fn exit_code(&self) -> u8 {
        1
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Executes one command, writing the CSV (and SVG when requested) and a short
/// report on `out`. Both files are rendered in memory before either is
/// written.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<(), RunError> {
    let params = ModelParams::new(config.g, config.omega0)?;
    let field = FieldConfig::from_mean_photons(config.mean_photons, config.tail_tol)?;

    let (table, plot, report) = match config.command {
        Command::Transition => {
            let series = transition_series(&field, &params, config.t_max, config.dt)?;
            let gap = series.max_abs_gap(C_CLOSED, C_EXACT).unwrap_or(f64::NAN);
            (
                CsvTable::from_time_series(&series),
                PlotData::from_time_series(&series, "transition").with_y_range(0.0, 1.0),
                vec![
                    format!("rows={}", series.len()),
                    format!("n_max={}", field.n_max()),
                    format!("max|c_closed-c_exact|={gap:.3e}"),
                ],
            )
        }
        Command::ScanTime => {
            let atom = AtomState::new(config.lambda0)?;
            let series = scan_time(&atom, &field, &params, config.t_max, config.dt, config.log_base)?;
            let gap = series.max_abs_gap(DEM_CLOSED, DEM_EXACT).unwrap_or(f64::NAN);
            let mut report = vec![
                format!("rows={}", series.len()),
                format!("n_max={}", field.n_max()),
                format!("max|dem_closed-dem_exact|={gap:.3e}"),
            ];
            if let Some((t, v)) = series.argmax_until(DEM_EXACT, 10.0) {
                report.push(format!("argmax dem_exact on [0,10]: t={t:.4} dem={v:.6}"));
            }
            if let Some((t, v)) = series.argmax_until(DEM_CLOSED, 10.0) {
                report.push(format!("argmax dem_closed on [0,10]: t={t:.4} dem={v:.6}"));
            }
            (
                CsvTable::from_time_series(&series),
                PlotData::from_time_series(&series, "scan-time"),
                report,
            )
        }
        Command::ScanLambda => {
            let grid = lambda_grid(config.lambda_points)?;
            let scan = scan_lambda(&field, &params, &grid, &REVIVAL_KS, config.log_base)?;
            let holds = scan.conjecture_holds.iter().filter(|&&h| h).count();
            let mut report = vec![
                format!("conjecture holds at {holds}/{} lambda0 points", grid.len()),
                format!("max violation={:.3e}", scan.max_violation()),
            ];
            for (i, &ok) in scan.conjecture_holds.iter().enumerate() {
                if !ok {
                    report.push(format!(
                        "violation at lambda0={:.4}: {:.6e}",
                        scan.lambdas[i], scan.violation[i]
                    ));
                }
            }
            (
                CsvTable::from_lambda_scan(&scan),
                PlotData::from_lambda_scan(&scan, "scan-lambda"),
                report,
            )
        }
        Command::Revival => {
            let t_end = config
                .t_max
                .max(1.5 * revival_period(&field, &params) + 2.0 * config.dt);
            let series = transition_series(&field, &params, t_end, config.dt)?;
            let rev = revival_analysis(&field, &params, REVIVAL_KS.len(), &series)?;
            let mut report = vec![format!("t_collapse={:.4}", rev.t_collapse)];
            for (k, t) in REVIVAL_KS.iter().zip(&rev.revival_times) {
                report.push(format!("T{k}={t:.4}"));
            }
            report.push(format!("detected_revival={:.4}", rev.detected_revival));
            report.push(format!("detected_amplitude={:.4}", rev.detected_amplitude));
            let table = CsvTable {
                header: vec!["k".into(), "revival_time".into()],
                rows: REVIVAL_KS
                    .iter()
                    .zip(&rev.revival_times)
                    .map(|(k, t)| vec![k.to_string(), format_value(*t)])
                    .collect(),
            };
            (
                table,
                PlotData::from_time_series(&series, "revival").with_y_range(0.0, 1.0),
                report,
            )
        }
    };

    let csv = table.to_csv_string();
    let svg = config.out_svg.as_ref().map(|_| render_svg(&plot)).transpose()?;
    write_atomic(&config.out_csv, csv.as_bytes()).map_err(io_err(&config.out_csv))?;
    if let (Some(path), Some(svg)) = (&config.out_svg, svg) {
        write_atomic(path, svg.as_bytes()).map_err(io_err(path))?;
    }

    for line in report {
        writeln!(out, "{line}").map_err(io_err(Path::new("<stdout>")))?;
    }
    writeln!(out, "wrote {}", config.out_csv.display()).map_err(io_err(Path::new("<stdout>")))?;
    if let Some(path) = &config.out_svg {
        writeln!(out, "wrote {}", path.display()).map_err(io_err(Path::new("<stdout>")))?;
    }
    Ok(())
}
