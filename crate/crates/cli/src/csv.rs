//! UTF-8, comma-separated, LF-terminated tables with a header row. Reals are
//! written like C's `%.12e`.

use std::io::{self, Write};
use std::path::Path;

use jc_core::analysis::{LambdaScan, TimeSeries};

/// `%.12e`: twelve mantissa digits, signed exponent of at least two digits.
pub fn format_value(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn to_csv_string(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// `t` followed by every column of the series.
    pub fn from_time_series(series: &TimeSeries) -> Self {
        let mut header = vec!["t".to_string()];
        header.extend(series.columns().iter().map(|c| c.name.clone()));
        let rows = (0..series.len())
            .map(|i| {
                std::iter::once(format_value(series.times()[i]))
                    .chain(series.columns().iter().map(|c| format_value(c.values[i])))
                    .collect()
            })
            .collect();
        CsvTable { header, rows }
    }

    /// `lambda0,dem_T<k>...,conjecture_holds`
    pub fn from_lambda_scan(scan: &LambdaScan) -> Self {
        let mut header = vec!["lambda0".to_string()];
        header.extend(scan.ks.iter().map(|k| format!("dem_T{k}")));
        header.push("conjecture_holds".into());
        let rows = (0..scan.lambdas.len())
            .map(|i| {
                let mut row = vec![format_value(scan.lambdas[i])];
                row.extend(scan.dem_at_t.iter().map(|col| format_value(col[i])));
                row.push(scan.conjecture_holds[i].to_string());
                row
            })
            .collect();
        CsvTable { header, rows }
    }
}

/// Writes to a temporary file next to `path`, then renames it into place, so
/// `path` never holds partial output.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
