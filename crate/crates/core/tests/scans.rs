use jc_core::analysis::{
    lambda_grid, revival_analysis, scan_lambda, scan_lambda_with, scan_time_with, transition_series, window_amplitude,
    COLLAPSE_WINDOW, C_CLOSED, C_EXACT, DEM_EXACT, SCAN_TIME_COLUMNS,
};
use jc_core::entropy::LogBase;
use jc_core::exec::Execution;
use jc_core::model::{AtomState, FieldConfig, ModelParams};

fn defaults() -> (AtomState, FieldConfig, ModelParams) {
    (
        AtomState::new(0.7).unwrap(),
        FieldConfig::from_mean_photons(5.0, 1e-12).unwrap(),
        ModelParams::default(),
    )
}

#[test]
fn strategies_agree_bit_for_bit() {
    let (atom, field, params) = defaults();
    let seq = scan_time_with(Execution::Sequential, &atom, &field, &params, 6.0, 0.1, LogBase::E).unwrap();
    let par = scan_time_with(Execution::Parallel, &atom, &field, &params, 6.0, 0.1, LogBase::E).unwrap();
    assert_eq!(seq, par);

    let grid = lambda_grid(5).unwrap();
    let a = scan_lambda_with(Execution::Sequential, &field, &params, &grid, &[1, 2], LogBase::E).unwrap();
    let b = scan_lambda_with(Execution::Parallel, &field, &params, &grid, &[1, 2], LogBase::E).unwrap();
    assert_eq!(a, b);
}

#[test]
fn scan_time_columns_and_ranges() {
    let (atom, field, params) = defaults();
    let s = scan_time_with(Execution::default(), &atom, &field, &params, 5.0, 0.05, LogBase::E).unwrap();
    assert_eq!(s.len(), 101);
    let names: Vec<&str> = s.columns().iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, SCAN_TIME_COLUMNS);
    for name in [C_CLOSED, C_EXACT] {
        assert!(s
            .column(name)
            .unwrap()
            .iter()
            .all(|c| (-1e-12..=1.0 + 1e-12).contains(c)));
    }
    for name in ["dem_exact", "s_atom", "s_field", "s_joint"] {
        assert!(s.column(name).unwrap().iter().all(|&v| v >= -1e-9));
    }
}

#[test]
fn bits_scan_is_rescaled_nats_scan() {
    let (atom, field, params) = defaults();
    let nats = scan_time_with(Execution::default(), &atom, &field, &params, 2.0, 0.5, LogBase::E).unwrap();
    let bits = scan_time_with(Execution::default(), &atom, &field, &params, 2.0, 0.5, LogBase::Two).unwrap();
    for (a, b) in nats
        .column(DEM_EXACT)
        .unwrap()
        .iter()
        .zip(bits.column(DEM_EXACT).unwrap())
    {
        assert!((b - a / std::f64::consts::LN_2).abs() < 1e-12);
    }
}

#[test]
fn collapse_and_revival_of_transition_probability() {
    let (_, field, params) = defaults();
    let s = transition_series(&field, &params, 50.0, 0.05).unwrap();
    let c = s.column(C_EXACT).unwrap();
    let early = s
        .times()
        .iter()
        .filter(|&&t| t <= 1.0)
        .map(|&t| window_amplitude(s.times(), c, t, COLLAPSE_WINDOW))
        .fold(0.0, f64::max);
    let collapsed = s
        .times()
        .iter()
        .filter(|&&t| (4.0..=6.0).contains(&t))
        .map(|&t| window_amplitude(s.times(), c, t, COLLAPSE_WINDOW))
        .fold(0.0, f64::max);
    assert!(early > 0.4, "early amplitude {early}");
    assert!(collapsed < 0.1, "collapsed amplitude {collapsed}");

    let report = revival_analysis(&field, &params, 3, &s).unwrap();
    assert!((report.detected_revival - report.revival_times[0]).abs() <= 2.0);
    assert!((report.t_collapse - 1.0).abs() < 1e-15);
}

#[test]
fn lambda_scan_shape() {
    let (_, field, params) = defaults();
    let grid = lambda_grid(21).unwrap();
    let scan = scan_lambda(&field, &params, &grid, &[1, 2, 3], LogBase::E).unwrap();
    assert_eq!(scan.lambdas.len(), 21);
    assert_eq!(scan.conjecture_holds.len(), 21);
    assert_eq!(scan.violation.len(), 21);
    for col in &scan.dem_at_t {
        assert_eq!(col.len(), 21);
        assert!(col.iter().all(|&d| d >= -1e-9 && d.is_finite()));
    }
    // balanced atom: the exact DEM grows across the first three revivals
    assert!(scan.conjecture_holds[10]);
}
