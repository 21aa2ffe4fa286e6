//! Time and lambda scans of the exact pipeline alongside the closed forms,
//! plus collapse and revival detection.
//!
//! Grid points are independent; each scan maps over its grid with an
//! [`Execution`] strategy and assembles rows in grid order, so results do not
//! depend on the strategy.

use std::f64::consts::PI;

use crate::entropy::{dem_closed_form, dem_exact, LogBase};
use crate::exec::Execution;
use crate::model::{closed_form_coeffs, AtomState, FieldConfig, JcSystem, ModelParams};
use crate::{Error, Result};

pub const MAX_GRID_POINTS: usize = 1_000_000;

/// Slack allowed by the monotonicity check `dem(T_k) <= dem(T_{k+1})`.
pub const CONJECTURE_TOL: f64 = 1e-9;

/// Width of the sliding window used to quantify collapse.
pub const COLLAPSE_WINDOW: f64 = 2.0;

pub const C_CLOSED: &str = "c_closed";
pub const C_EXACT: &str = "c_exact";
pub const DEM_EXACT: &str = "dem_exact";
pub const DEM_CLOSED: &str = "dem_closed";
pub const S_ATOM: &str = "s_atom";
pub const S_FIELD: &str = "s_field";
pub const S_JOINT: &str = "s_joint";

/// Column order of [`scan_time`].
pub const SCAN_TIME_COLUMNS: [&str; 7] = [C_CLOSED, C_EXACT, DEM_EXACT, DEM_CLOSED, S_ATOM, S_FIELD, S_JOINT];

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// Named real columns sampled on a strictly increasing time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    columns: Vec<Column>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, columns: Vec<Column>) -> Result<Self> {
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("time grid is not strictly increasing".into()));
        }
        if let Some(bad) = columns.iter().find(|c| c.values.len() != times.len()) {
            return Err(Error::DimensionMismatch(format!(
                "column {} has {} values for {} times",
                bad.name,
                bad.values.len(),
                times.len()
            )));
        }
        Ok(TimeSeries { times, columns })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `max_t |a(t) - b(t)|` between two columns.
    pub fn max_abs_gap(&self, a: &str, b: &str) -> Option<f64> {
        let (a, b) = (self.column(a)?, self.column(b)?);
        Some(a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
    }

    /// Time of the largest value of `name` among samples with `t <= t_end`.
    /// Ties go to the earliest sample.
    pub fn argmax_until(&self, name: &str, t_end: f64) -> Option<(f64, f64)> {
        let values = self.column(name)?;
        self.times
            .iter()
            .zip(values)
            .take_while(|(t, _)| **t <= t_end + 1e-12)
            .fold(None, |best: Option<(f64, f64)>, (&t, &v)| match best {
                Some((_, bv)) if bv >= v => best,
                _ => Some((t, v)),
            })
    }
}

/// `{0, dt, 2 dt, ...}` up to `t_max`, with `floor(t_max / dt) + 1` points.
pub fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0 && dt.is_finite() && t_max.is_finite() && dt < t_max) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < dt < t_max, got dt={dt}, t_max={t_max}"
        )));
    }
    let steps = (t_max / dt + 1e-9).floor();
    if steps + 1.0 > MAX_GRID_POINTS as f64 {
        return Err(Error::GridTooLarge {
            points: (steps + 1.0).min(usize::MAX as f64) as usize,
            limit: MAX_GRID_POINTS,
        });
    }
    Ok((0..=steps as usize).map(|i| i as f64 * dt).collect())
}

/// [`scan_time_with`] using the default execution strategy.
pub fn scan_time(
    atom: &AtomState,
    field: &FieldConfig,
    params: &ModelParams,
    t_max: f64,
    dt: f64,
    base: LogBase,
) -> Result<TimeSeries> {
    scan_time_with(Execution::default(), atom, field, params, t_max, dt, base)
}

/// Exact pipeline and closed forms on the grid `{0, dt, ..., <= t_max}`.
///
/// The `c_*` columns always describe an excited-start atom, whatever `atom`
/// is; every other column describes `atom`.
pub fn scan_time_with(
    exec: Execution,
    atom: &AtomState,
    field: &FieldConfig,
    params: &ModelParams,
    t_max: f64,
    dt: f64,
    base: LogBase,
) -> Result<TimeSeries> {
    let times = time_grid(t_max, dt)?;
    let system = JcSystem::new(*atom, *field, *params);
    let excited = JcSystem::new(AtomState::excited(), *field, *params);
    let dims = system.dims();

    let rows = exec.try_map_indexed(times.len(), |i| -> Result<[f64; 7]> {
        let t = times[i];
        let report = dem_exact(&system.state_at(t)?, dims, base)?;
        let coeffs = closed_form_coeffs(t, atom, field, params);
        Ok([
            coeffs.c,
            excited.excited_population(t)?,
            report.dem,
            dem_closed_form(&coeffs, base),
            report.s_atom,
            report.s_field,
            report.s_joint,
        ])
    })?;

    let columns = SCAN_TIME_COLUMNS
        .iter()
        .enumerate()
        .map(|(k, name)| Column {
            name: name.to_string(),
            values: rows.iter().map(|r| r[k]).collect(),
        })
        .collect();
    TimeSeries::new(times, columns)
}

/// Excited-start transition probability only: `c_closed` and `c_exact`.
pub fn transition_series_with(
    exec: Execution,
    field: &FieldConfig,
    params: &ModelParams,
    t_max: f64,
    dt: f64,
) -> Result<TimeSeries> {
    let times = time_grid(t_max, dt)?;
    let atom = AtomState::excited();
    let excited = JcSystem::new(atom, *field, *params);
    let rows = exec.try_map_indexed(times.len(), |i| -> Result<(f64, f64)> {
        let t = times[i];
        Ok((
            closed_form_coeffs(t, &atom, field, params).c,
            excited.excited_population(t)?,
        ))
    })?;
    let (closed, exact) = rows.into_iter().unzip();
    TimeSeries::new(
        times,
        vec![
            Column {
                name: C_CLOSED.into(),
                values: closed,
            },
            Column {
                name: C_EXACT.into(),
                values: exact,
            },
        ],
    )
}

pub fn transition_series(field: &FieldConfig, params: &ModelParams, t_max: f64, dt: f64) -> Result<TimeSeries> {
    transition_series_with(Execution::default(), field, params, t_max, dt)
}

/// `max - min` of `values` over samples with `|t - center| <= width / 2`;
/// zero when the window holds no sample.
pub fn window_amplitude(times: &[f64], values: &[f64], center: f64, width: f64) -> f64 {
    let half = 0.5 * width + 1e-12;
    let (lo, hi) = times
        .iter()
        .zip(values)
        .filter(|(t, _)| (**t - center).abs() <= half)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, &v)| {
            (lo.min(v), hi.max(v))
        });
    if lo.is_finite() {
        hi - lo
    } else {
        0.0
    }
}

/// Revival period `2 pi |theta| / g`.
pub fn revival_period(field: &FieldConfig, params: &ModelParams) -> f64 {
    2.0 * PI * field.mean_photons().sqrt() / params.g
}

/// `T_k = k * 2 pi |theta| / g` for each `k` in `ks`.
pub fn revival_times(field: &FieldConfig, params: &ModelParams, ks: &[usize]) -> Vec<f64> {
    let period = revival_period(field, params);
    ks.iter().map(|&k| k as f64 * period).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RevivalReport {
    /// `1 / g`
    pub t_collapse: f64,
    /// `T_1, ..., T_kmax`
    pub revival_times: Vec<f64>,
    /// Centre of the widest-swinging window of `c(t)` near `T_1`.
    pub detected_revival: f64,
    pub detected_amplitude: f64,
    /// `2 pi / Omega_{floor(|theta|^2)}`
    pub window_width: f64,
}

/// Analytic collapse and revival times, and a revival located on `series`.
///
/// The detector slides a window of one Rabi period at the mean photon number
/// over centres in `[T_1 / 2, 3 T_1 / 2]` and reports the centre with the
/// largest oscillation amplitude of `c_exact` (falling back to `c_closed`).
pub fn revival_analysis(
    field: &FieldConfig,
    params: &ModelParams,
    k_max: usize,
    series: &TimeSeries,
) -> Result<RevivalReport> {
    if field.mean_photons() <= 0.0 {
        return Err(Error::InvalidParameter("revivals need a non-vacuum field".into()));
    }
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    let c = series
        .column(C_EXACT)
        .or_else(|| series.column(C_CLOSED))
        .ok_or_else(|| Error::InvalidParameter("series has no transition-probability column".into()))?;
    let ks: Vec<usize> = (1..=k_max).collect();
    let revivals = revival_times(field, params, &ks);
    let t1 = revivals[0];
    let covered = series.times().last().copied().unwrap_or(f64::NEG_INFINITY);
    if covered < t1 {
        return Err(Error::SeriesTooShort { covered, required: t1 });
    }

    let width = 2.0 * PI / params.rabi_frequency(field.mean_photons().floor() as usize);
    let times = series.times();
    let (mut best_t, mut best_amp) = (f64::NAN, f64::NEG_INFINITY);
    for &t in times.iter().filter(|&&t| t >= 0.5 * t1 && t <= 1.5 * t1) {
        let amp = window_amplitude(times, c, t, width);
        if amp > best_amp {
            best_t = t;
            best_amp = amp;
        }
    }
    Ok(RevivalReport {
        t_collapse: 1.0 / params.g,
        revival_times: revivals,
        detected_revival: best_t,
        detected_amplitude: best_amp,
        window_width: width,
    })
}

/// Evenly spaced `lambda0` grid on `[0, 1]`, endpoints included.
pub fn lambda_grid(points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidParameter(format!(
            "lambda grid needs at least 2 points, got {points}"
        )));
    }
    let last = (points - 1) as f64;
    Ok((0..points).map(|i| i as f64 / last).collect())
}

/// Exact DEM at revival times as a function of `lambda0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaScan {
    pub lambdas: Vec<f64>,
    pub ks: Vec<usize>,
    pub revival_times: Vec<f64>,
    /// `dem_at_t[k][i]` is the DEM at `T_{ks[k]}` for `lambdas[i]`.
    pub dem_at_t: Vec<Vec<f64>>,
    /// Atomic entropy on the same layout as `dem_at_t`.
    pub s_atom_at_t: Vec<Vec<f64>>,
    /// `dem(T_k) <= dem(T_{k+1}) + CONJECTURE_TOL` for every consecutive pair.
    pub conjecture_holds: Vec<bool>,
    /// Largest `dem(T_k) - dem(T_{k+1})` per lambda, floored at zero.
    pub violation: Vec<f64>,
}

impl LambdaScan {
    pub fn max_violation(&self) -> f64 {
        self.violation.iter().copied().fold(0.0, f64::max)
    }
}

pub fn scan_lambda(
    field: &FieldConfig,
    params: &ModelParams,
    lambdas: &[f64],
    ks: &[usize],
    base: LogBase,
) -> Result<LambdaScan> {
    scan_lambda_with(Execution::default(), field, params, lambdas, ks, base)
}

pub fn scan_lambda_with(
    exec: Execution,
    field: &FieldConfig,
    params: &ModelParams,
    lambdas: &[f64],
    ks: &[usize],
    base: LogBase,
) -> Result<LambdaScan> {
    if ks.is_empty() || ks[0] == 0 || ks.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(format!(
            "revival indices must be increasing and >= 1, got {ks:?}"
        )));
    }
    let atoms = lambdas.iter().map(|&l| AtomState::new(l)).collect::<Result<Vec<_>>>()?;
    let times = revival_times(field, params, ks);
    let nk = ks.len();

    let cells = exec.try_map_indexed(atoms.len() * nk, |idx| -> Result<(f64, f64)> {
        let (i, k) = (idx / nk, idx % nk);
        let system = JcSystem::new(atoms[i], *field, *params);
        let report = dem_exact(&system.state_at(times[k])?, system.dims(), base)?;
        Ok((report.dem, report.s_atom))
    })?;

    let mut dem_at_t = vec![Vec::with_capacity(lambdas.len()); nk];
    let mut s_atom_at_t = vec![Vec::with_capacity(lambdas.len()); nk];
    for (idx, (dem, s_atom)) in cells.into_iter().enumerate() {
        dem_at_t[idx % nk].push(dem);
        s_atom_at_t[idx % nk].push(s_atom);
    }
    let violation: Vec<f64> = (0..lambdas.len())
        .map(|i| (1..nk).map(|k| dem_at_t[k - 1][i] - dem_at_t[k][i]).fold(0.0, f64::max))
        .collect();
    let conjecture_holds = violation.iter().map(|&v| v <= CONJECTURE_TOL).collect();
    Ok(LambdaScan {
        lambdas: lambdas.to_vec(),
        ks: ks.to_vec(),
        revival_times: times,
        dem_at_t,
        s_atom_at_t,
        conjecture_holds,
        violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults() -> (AtomState, FieldConfig, ModelParams) {
        (
            AtomState::new(0.7).unwrap(),
            FieldConfig::from_mean_photons(5.0, 1e-12).unwrap(),
            ModelParams::default(),
        )
    }

    #[test]
    fn grid_row_count() {
        assert_eq!(time_grid(50.0, 0.05).unwrap().len(), 1001);
        assert_eq!(time_grid(1.0, 0.3).unwrap().len(), 4);
        assert_eq!(time_grid(30.0, 0.05).unwrap().len(), 601);
    }

    #[test]
    fn grid_validation() {
        assert!(time_grid(1.0, 0.0).is_err());
        assert!(time_grid(1.0, 2.0).is_err());
        assert!(matches!(time_grid(10.0, 1e-6), Err(Error::GridTooLarge { .. })));
    }

    #[test]
    fn first_row_is_product_state() {
        let (atom, field, params) = defaults();
        let s = scan_time(&atom, &field, &params, 0.5, 0.25, LogBase::E).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.column(DEM_EXACT).unwrap()[0].abs() <= 1e-10);
        assert!((s.column(C_CLOSED).unwrap()[0] - 1.0).abs() <= 1e-10);
        assert!((s.column(C_EXACT).unwrap()[0] - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn timeseries_rejects_ragged_columns() {
        let col = Column {
            name: "x".into(),
            values: vec![1.0],
        };
        assert!(TimeSeries::new(vec![0.0, 1.0], vec![col]).is_err());
        assert!(TimeSeries::new(vec![1.0, 0.0], vec![]).is_err());
    }

    #[test]
    fn argmax_prefers_earliest_tie() {
        let s = TimeSeries::new(
            vec![0.0, 1.0, 2.0, 3.0],
            vec![Column {
                name: "y".into(),
                values: vec![0.0, 2.0, 2.0, 5.0],
            }],
        )
        .unwrap();
        assert_eq!(s.argmax_until("y", 2.0), Some((1.0, 2.0)));
        assert_eq!(s.argmax_until("y", 10.0), Some((3.0, 5.0)));
    }

    #[test]
    fn window_amplitude_basic() {
        let t = [0.0, 1.0, 2.0, 3.0, 4.0];
        let v = [0.0, 1.0, -1.0, 4.0, 0.5];
        assert_eq!(window_amplitude(&t, &v, 1.0, 2.0), 2.0);
        assert_eq!(window_amplitude(&t, &v, 10.0, 2.0), 0.0);
    }

    #[test]
    fn analytic_revival_times() {
        let (_, field, params) = defaults();
        let t = revival_times(&field, &params, &[1, 2, 3]);
        let t1 = 2.0 * PI * 5f64.sqrt();
        assert!((t[0] - 14.049629462081453).abs() < 1e-12);
        assert!((t[1] - 2.0 * t1).abs() < 1e-12);
        assert!((t[2] - 3.0 * t1).abs() < 1e-12);

        let fast = ModelParams::new(2.0, 1.0).unwrap();
        let tf = revival_times(&field, &fast, &[1, 2, 3]);
        for k in 0..3 {
            assert!((tf[k] - 0.5 * t[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn revival_needs_series_through_t1() {
        let (_, field, params) = defaults();
        let short = transition_series(&field, &params, 10.0, 0.1).unwrap();
        assert!(matches!(
            revival_analysis(&field, &params, 3, &short),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn revival_doubling_g_halves_collapse() {
        let (_, field, _) = defaults();
        let slow = ModelParams::new(1.0, 1.0).unwrap();
        let fast = ModelParams::new(2.0, 1.0).unwrap();
        let s1 = transition_series(&field, &slow, 25.0, 0.05).unwrap();
        let s2 = transition_series(&field, &fast, 12.5, 0.025).unwrap();
        let r1 = revival_analysis(&field, &slow, 3, &s1).unwrap();
        let r2 = revival_analysis(&field, &fast, 3, &s2).unwrap();
        assert!((r2.t_collapse - 0.5 * r1.t_collapse).abs() < 1e-15);
        for (a, b) in r1.revival_times.iter().zip(&r2.revival_times) {
            assert!((b - 0.5 * a).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_grid_shape() {
        let g = lambda_grid(21).unwrap();
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[20], 1.0);
        assert!((g[14] - 0.7).abs() < 1e-15);
        assert!(lambda_grid(1).is_err());
    }

    #[test]
    fn scan_lambda_validation() {
        let (_, field, params) = defaults();
        assert!(scan_lambda(&field, &params, &[0.5, 1.2], &[1], LogBase::E).is_err());
        assert!(scan_lambda(&field, &params, &[0.5], &[2, 1], LogBase::E).is_err());
        assert!(scan_lambda(&field, &params, &[0.5], &[], LogBase::E).is_err());
    }

    #[test]
    fn scan_lambda_pure_endpoints_double_atomic_entropy() {
        let (_, field, params) = defaults();
        let scan = scan_lambda(&field, &params, &[0.0, 1.0], &[1, 2, 3], LogBase::E).unwrap();
        assert_eq!(scan.dem_at_t.len(), 3);
        for k in 0..3 {
            assert_eq!(scan.dem_at_t[k].len(), 2);
            for i in 0..2 {
                let dem = scan.dem_at_t[k][i];
                assert!(dem.is_finite());
                assert!((dem - 2.0 * scan.s_atom_at_t[k][i]).abs() < 1e-8);
            }
        }
    }
}
