//! Flight-log ingestion, filtering and model error metrics.
//!
//! Logs are CSV with one record per line and a header row. Required
//! columns are `t_solar_h` and `p_solar_exp_w`; attitude
//! (`roll_deg`, `pitch_deg`, `yaw_deg`), `t_amb_c`, `mppt_voltage_v` and
//! per-record `lat_deg`/`alt_m` overrides are optional, but models that
//! need them fail with a per-model error when they are absent.
//!
//! Error metrics follow the usual definitions: signed average error
//! (negative = the model underestimates), RMS error, and the signed
//! extreme deviation; relative errors divide by the measured average.

use crate::efficiency::EfficiencyConfig;
use crate::geometry::{AircraftGeometry, Attitude};
use crate::models::{power_cam, power_cdm, power_fm, power_vm, ModelKind, ModelOptions};
use crate::sun::SimulationContext;
use serde::{Deserialize, Serialize};
use std::io::Read;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LogError {
    #[error("failed to read flight log: {0}")]
    Io(#[from] std::io::Error),
    #[error("flight log line {line}: {message}")]
    Row { line: u64, message: String },
    #[error("flight log is empty")]
    Empty,
    #[error("flight log line {line}: timestamps must be strictly increasing")]
    NonMonotonicTime { line: u64 },
    #[error("flight log line {line}: measured power must be non-negative")]
    NegativePower { line: u64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("model '{kind}' requires column '{column}' which the log does not provide")]
    MissingColumn { kind: ModelKind, column: &'static str },
    #[error("series lengths differ: model {model} vs measured {measured}")]
    LengthMismatch { model: usize, measured: usize },
    #[error("window [{start_h}, {end_h}] selects no records")]
    EmptyWindow { start_h: f64, end_h: f64 },
    #[error("series is empty")]
    EmptySeries,
    #[error("invalid time window '{0}' (expected start:end in hours)")]
    BadWindow(String),
}

/// One flight-log record. Times are local solar hours.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlightRecord {
    pub t_solar_h: f64,
    #[serde(default)]
    pub roll_deg: Option<f64>,
    #[serde(default)]
    pub pitch_deg: Option<f64>,
    #[serde(default)]
    pub yaw_deg: Option<f64>,
    #[serde(default)]
    pub t_amb_c: Option<f64>,
    pub p_solar_exp_w: f64,
    #[serde(default)]
    pub mppt_voltage_v: Option<f64>,
    #[serde(default)]
    pub lat_deg: Option<f64>,
    #[serde(default)]
    pub alt_m: Option<f64>,
}

/// A parsed, validated flight log.
#[derive(Debug, Clone, PartialEq)]
pub struct FlightLog {
    pub records: Vec<FlightRecord>,
}

impl FlightLog {
    pub fn from_records(records: Vec<FlightRecord>) -> Result<Self, LogError> {
        let log = FlightLog { records };
        log.validate()?;
        Ok(log)
    }

    pub fn from_csv_str(data: &str) -> Result<Self, LogError> {
        Self::from_reader(data.as_bytes())
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self, LogError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut records = Vec::new();
        for result in rdr.deserialize::<FlightRecord>() {
            match result {
                Ok(rec) => records.push(rec),
                Err(e) => {
                    let line = e
                        .position()
                        .map(|p| p.line())
                        .unwrap_or(records.len() as u64 + 2);
                    return Err(LogError::Row { line, message: trim_csv_error(&e) });
                }
            }
        }
        Self::from_records(records)
    }

    fn validate(&self) -> Result<(), LogError> {
        if self.records.is_empty() {
            return Err(LogError::Empty);
        }
        for (i, rec) in self.records.iter().enumerate() {
            // header is line 1, first record line 2
            let line = i as u64 + 2;
            if i > 0 && rec.t_solar_h <= self.records[i - 1].t_solar_h {
                return Err(LogError::NonMonotonicTime { line });
            }
            if rec.p_solar_exp_w < 0.0 || !rec.p_solar_exp_w.is_finite() {
                return Err(LogError::NegativePower { line });
            }
        }
        Ok(())
    }

    pub fn measured(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.p_solar_exp_w).collect()
    }

    pub fn has_attitude(&self) -> bool {
        self.records
            .iter()
            .all(|r| r.roll_deg.is_some() && r.pitch_deg.is_some() && r.yaw_deg.is_some())
    }

    pub fn has_ambient_temperature(&self) -> bool {
        self.records.iter().all(|r| r.t_amb_c.is_some())
    }
}

fn trim_csv_error(e: &csv::Error) -> String {
    // csv error strings embed position twice; keep the useful tail
    let s = e.to_string();
    s.split(": ").last().unwrap_or(&s).to_string()
}

/// Inclusive time window in solar hours, parsed from `start:end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start_h: f64,
    pub end_h: f64,
}

impl TimeWindow {
    pub fn new(start_h: f64, end_h: f64) -> Self {
        Self { start_h, end_h }
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start_h && t <= self.end_h
    }
}

impl FromStr for TimeWindow {
    type Err = AnalysisError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AnalysisError::BadWindow(s.to_string());
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        let start_h: f64 = a.trim().parse().map_err(|_| bad())?;
        let end_h: f64 = b.trim().parse().map_err(|_| bad())?;
        if !start_h.is_finite() || !end_h.is_finite() || end_h < start_h {
            return Err(bad());
        }
        Ok(TimeWindow { start_h, end_h })
    }
}

/// Two-sided moving average with the window truncated at the series
/// boundaries; output length equals input length.
pub fn moving_average(series: &[f64], semi_window: usize) -> Vec<f64> {
    let n = series.len();
    if n == 0 || semi_window == 0 {
        return series.to_vec();
    }
    // prefix sums: O(n) regardless of the window length
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for &v in series {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..n)
        .map(|k| {
            let lo = k.saturating_sub(semi_window);
            let hi = (k + semi_window).min(n - 1);
            (prefix[hi + 1] - prefix[lo]) / (hi - lo + 1) as f64
        })
        .collect()
}

/// Error metrics of a model series against a measured series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    /// Signed average error in W; negative = the model underestimates.
    pub e_avg_w: f64,
    pub e_rms_w: f64,
    /// Magnitude of the largest deviation in W.
    pub e_max_w: f64,
    /// The largest deviation with its sign preserved.
    pub e_max_signed_w: f64,
    /// Relative errors (fractions of the measured average); `None` when
    /// the measured average is zero.
    pub rel_avg: Option<f64>,
    pub rel_rms: Option<f64>,
    pub rel_max: Option<f64>,
    pub p_model_avg_w: f64,
    pub p_exp_avg_w: f64,
    pub window_start_h: f64,
    pub window_end_h: f64,
    pub n_samples: usize,
}

/// Computes the error metrics over `window` (an index range into the
/// series). Pre-filtering applies the two-sided moving average to both
/// full series before windowing, which per construction only affects the
/// RMS and maximum errors, not the average of a shared offset.
pub fn compute_errors(
    model: &[f64],
    measured: &[f64],
    window: std::ops::Range<usize>,
    prefilter_semi_window: usize,
) -> Result<ErrorReport, AnalysisError> {
    if model.len() != measured.len() {
        return Err(AnalysisError::LengthMismatch { model: model.len(), measured: measured.len() });
    }
    if model.is_empty() || window.is_empty() || window.end > model.len() {
        return Err(AnalysisError::EmptySeries);
    }
    let (m, x) = if prefilter_semi_window > 0 {
        (
            moving_average(model, prefilter_semi_window),
            moving_average(measured, prefilter_semi_window),
        )
    } else {
        (model.to_vec(), measured.to_vec())
    };
    let m = &m[window.clone()];
    let x = &x[window.clone()];
    let n = m.len() as f64;

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut extreme = 0.0f64;
    for (a, b) in m.iter().zip(x) {
        let d = a - b;
        sum += d;
        sum_sq += d * d;
        if d.abs() > extreme.abs() {
            extreme = d;
        }
    }
    let e_avg = sum / n;
    let e_rms = (sum_sq / n).sqrt();
    let p_model_avg = m.iter().sum::<f64>() / n;
    let p_exp_avg = x.iter().sum::<f64>() / n;
    let rel = |e: f64| if p_exp_avg != 0.0 { Some(e / p_exp_avg) } else { None };

    Ok(ErrorReport {
        e_avg_w: e_avg,
        e_rms_w: e_rms,
        e_max_w: extreme.abs(),
        e_max_signed_w: extreme,
        rel_avg: rel(e_avg),
        rel_rms: rel(e_rms),
        rel_max: rel(extreme.abs()),
        p_model_avg_w: p_model_avg,
        p_exp_avg_w: p_exp_avg,
        window_start_h: f64::NAN,
        window_end_h: f64::NAN,
        n_samples: m.len(),
    })
}

/// The merged model-vs-measured time series of a comparison run.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSeries {
    pub t_solar_h: Vec<f64>,
    pub measured_w: Vec<f64>,
    /// One power series per requested model kind, in request order.
    pub modeled_w: Vec<(ModelKind, Vec<f64>)>,
}

/// Result of evaluating a set of models against a flight log.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonResult {
    pub reports: Vec<(ModelKind, ErrorReport)>,
    pub series: ComparisonSeries,
}

/// Evaluates each requested model at every log record and assembles error
/// reports over the window. The full model consumes the recorded attitude
/// and ambient temperature; the conceptual models ignore attitude by
/// construction. Model kinds are evaluated independently: removing one
/// from the request leaves the other reports unchanged.
#[allow(clippy::too_many_arguments)]
pub fn run_comparison(
    log: &FlightLog,
    geom: &AircraftGeometry,
    cfg: &EfficiencyConfig,
    opts: &ModelOptions,
    kinds: &[ModelKind],
    window: Option<TimeWindow>,
    prefilter_semi_window: usize,
    defaults: &SimulationContext,
) -> Result<ComparisonResult, AnalysisError> {
    let measured = log.measured();
    let t: Vec<f64> = log.records.iter().map(|r| r.t_solar_h).collect();

    let window_range = match window {
        None => 0..log.records.len(),
        Some(w) => {
            let start = t.partition_point(|&x| x < w.start_h);
            let end = t.partition_point(|&x| x <= w.end_h);
            if start >= end {
                return Err(AnalysisError::EmptyWindow { start_h: w.start_h, end_h: w.end_h });
            }
            start..end
        }
    };

    let mut reports = Vec::with_capacity(kinds.len());
    let mut modeled = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        let series = evaluate_model_series(log, geom, cfg, opts, kind, defaults)?;
        let mut report =
            compute_errors(&series, &measured, window_range.clone(), prefilter_semi_window)?;
        report.window_start_h = t[window_range.start];
        report.window_end_h = t[window_range.end - 1];
        reports.push((kind, report));
        modeled.push((kind, series));
    }
    Ok(ComparisonResult {
        reports,
        series: ComparisonSeries { t_solar_h: t, measured_w: measured, modeled_w: modeled },
    })
}

/// Evaluates one model kind over all records of a log.
pub fn evaluate_model_series(
    log: &FlightLog,
    geom: &AircraftGeometry,
    cfg: &EfficiencyConfig,
    opts: &ModelOptions,
    kind: ModelKind,
    defaults: &SimulationContext,
) -> Result<Vec<f64>, AnalysisError> {
    if kind.needs_attitude() {
        for (col, missing) in [
            ("roll_deg", log.records.iter().any(|r| r.roll_deg.is_none())),
            ("pitch_deg", log.records.iter().any(|r| r.pitch_deg.is_none())),
            ("yaw_deg", log.records.iter().any(|r| r.yaw_deg.is_none())),
        ] {
            if missing {
                return Err(AnalysisError::MissingColumn { kind, column: col });
            }
        }
    }
    if kind.needs_ambient_temperature() && !log.has_ambient_temperature() {
        return Err(AnalysisError::MissingColumn { kind, column: "t_amb_c" });
    }

    let total_area = geom.total_area_m2();
    let mut out = Vec::with_capacity(log.records.len());
    let mut p_prev = 0.0;
    for rec in &log.records {
        let ctx = SimulationContext {
            latitude_deg: rec.lat_deg.unwrap_or(defaults.latitude_deg),
            altitude_m: rec.alt_m.unwrap_or(defaults.altitude_m),
            day_of_year: defaults.day_of_year,
            solar_time_h: rec.t_solar_h.rem_euclid(24.0),
        };
        let attitude = || {
            Attitude::wrapped(
                rec.roll_deg.unwrap_or(0.0),
                rec.pitch_deg.unwrap_or(0.0),
                rec.yaw_deg.unwrap_or(0.0),
            )
            .unwrap_or(Attitude { roll_deg: 0.0, pitch_deg: 0.0, yaw_deg: 0.0 })
        };
        let bd = match kind {
            ModelKind::Cdm => power_cdm(&ctx, total_area, cfg, opts),
            ModelKind::Cam => power_cam(&ctx, total_area, cfg, opts),
            ModelKind::Vm => power_vm(&ctx, &attitude(), total_area, cfg, opts, geom),
            ModelKind::Fm => {
                let t_amb = rec.t_amb_c.unwrap_or(opts.t_const_c);
                power_fm(&ctx, &attitude(), geom, cfg, opts, t_amb, p_prev)
            }
        };
        p_prev = bd.total_w;
        out.push(bd.total_w);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ArtifactConfig;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    #[test]
    fn moving_average_known_vectors() {
        assert_eq!(moving_average(&[1.0, 1.0, 1.0, 1.0], 2), vec![1.0; 4]);
        assert_eq!(moving_average(&[3.0, 1.0, 4.0], 0), vec![3.0, 1.0, 4.0]);
        let out = moving_average(&[0.0, 1.0, 2.0, 3.0, 4.0], 1);
        let expected = [0.5, 1.0, 2.0, 3.0, 3.5];
        for (a, b) in out.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        assert!(moving_average(&[], 3).is_empty());
    }

    #[test]
    fn moving_average_is_identity_on_affine_interior() {
        // symmetric interior windows reproduce affine series exactly
        let series: Vec<f64> = (0..50).map(|i| 3.0 + 0.7 * i as f64).collect();
        for w in [1usize, 3, 7] {
            let out = moving_average(&series, w);
            for k in w..series.len() - w {
                assert_abs_diff_eq!(out[k], series[k], epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn compute_errors_zero_for_identical_series() {
        let s = vec![5.0, 7.0, 9.0, 3.0];
        let r = compute_errors(&s, &s, 0..4, 0).unwrap();
        assert_eq!(r.e_avg_w, 0.0);
        assert_eq!(r.e_rms_w, 0.0);
        assert_eq!(r.e_max_w, 0.0);
        assert_eq!(r.rel_avg, Some(0.0));
    }

    #[test]
    fn compute_errors_matches_reference_relative_averages() {
        // constant series with the reference mean powers
        for (model, expected_pct) in [
            (117.35, 17.81),
            (104.89, 5.31),
            (97.65, -1.96),
            (97.87, -1.75),
        ] {
            let m = vec![model; 100];
            let x = vec![99.61; 100];
            let r = compute_errors(&m, &x, 0..100, 0).unwrap();
            let rel = r.rel_avg.unwrap() * 100.0;
            assert!(
                (rel - expected_pct).abs() < 0.01,
                "model {model}: rel {rel} vs {expected_pct}"
            );
        }
    }

    #[test]
    fn error_sign_convention_negative_underestimates() {
        let m = vec![90.0; 10];
        let x = vec![100.0; 10];
        let r = compute_errors(&m, &x, 0..10, 0).unwrap();
        assert!(r.e_avg_w < 0.0);
        assert!(r.e_max_signed_w < 0.0 && r.e_max_w > 0.0);
    }

    #[test]
    fn relative_errors_flagged_when_measured_average_is_zero() {
        let m = vec![1.0, -1.0];
        let x = vec![0.0, 0.0];
        let r = compute_errors(&m, &x, 0..2, 0).unwrap();
        assert_eq!(r.rel_avg, None);
        assert_eq!(r.rel_rms, None);
    }

    #[test]
    fn rms_dominates_average() {
        let m = vec![1.0, 5.0, -2.0, 0.5, 9.0];
        let x = vec![0.0, 4.0, 1.0, 0.0, 3.0];
        let r = compute_errors(&m, &x, 0..5, 0).unwrap();
        assert!(r.e_rms_w >= r.e_avg_w.abs());
        assert!(r.e_max_w >= r.e_rms_w);
    }

    #[test]
    fn csv_parsing_and_optional_columns() {
        let csv = "t_solar_h,p_solar_exp_w\n8.0,120.5\n8.5,130.0\n";
        let log = FlightLog::from_csv_str(csv).unwrap();
        assert_eq!(log.records.len(), 2);
        assert!(!log.has_attitude());

        let csv = "t_solar_h,roll_deg,pitch_deg,yaw_deg,t_amb_c,p_solar_exp_w\n\
                   8.0,1.0,0.5,270.0,21.0,120.5\n";
        let log = FlightLog::from_csv_str(csv).unwrap();
        assert!(log.has_attitude());
        assert!(log.has_ambient_temperature());
    }

    #[test]
    fn csv_errors_name_the_line() {
        let csv = "t_solar_h,p_solar_exp_w\n8.0,120.5\n8.5,not_a_number\n";
        match FlightLog::from_csv_str(csv) {
            Err(LogError::Row { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected row error, got {other:?}"),
        }

        let csv = "t_solar_h,p_solar_exp_w\n8.0,120.5\n7.9,130.0\n";
        match FlightLog::from_csv_str(csv) {
            Err(LogError::NonMonotonicTime { line }) => assert_eq!(line, 3),
            other => panic!("expected monotonic-time error, got {other:?}"),
        }

        let csv = "t_solar_h,p_solar_exp_w\n8.0,-3.0\n";
        assert!(matches!(
            FlightLog::from_csv_str(csv),
            Err(LogError::NegativePower { line: 2 })
        ));
    }

    #[test]
    fn missing_attitude_fails_only_attitude_models() {
        let csv = "t_solar_h,p_solar_exp_w\n10.0,100.0\n10.5,110.0\n";
        let log = FlightLog::from_csv_str(csv).unwrap();
        let art = ArtifactConfig::atlantik_solar();
        let defaults = art.context;
        let opts = ModelOptions::default();

        let ok = run_comparison(
            &log,
            &art.aircraft,
            &art.efficiency,
            &opts,
            &[ModelKind::Cdm, ModelKind::Cam],
            None,
            0,
            &defaults,
        );
        assert!(ok.is_ok());

        let err = run_comparison(
            &log,
            &art.aircraft,
            &art.efficiency,
            &opts,
            &[ModelKind::Fm],
            None,
            0,
            &defaults,
        )
        .unwrap_err();
        assert!(matches!(err, AnalysisError::MissingColumn { kind: ModelKind::Fm, .. }));
    }

    #[test]
    fn fm_generated_log_has_zero_fm_error() {
        let art = ArtifactConfig::atlantik_solar();
        let opts = ModelOptions::default();
        let defaults = art.context;
        // generate a short loiter segment with the full model itself
        let mut records = Vec::new();
        let mut p_prev = 0.0;
        let mut t: f64 = 9.0;
        while t < 9.25 {
            let yaw = (360.0 * (t - 9.0) * 3600.0 / 300.0).rem_euclid(360.0);
            let att = Attitude { roll_deg: 3.0, pitch_deg: 0.0, yaw_deg: yaw };
            let ctx = defaults.with_time(t);
            let bd = power_fm(&ctx, &att, &art.aircraft, &art.efficiency, &opts, 19.0, p_prev);
            p_prev = bd.total_w;
            records.push(FlightRecord {
                t_solar_h: t,
                roll_deg: Some(att.roll_deg),
                pitch_deg: Some(att.pitch_deg),
                yaw_deg: Some(att.yaw_deg),
                t_amb_c: Some(19.0),
                p_solar_exp_w: bd.total_w,
                mppt_voltage_v: None,
                lat_deg: None,
                alt_m: None,
            });
            t += 1.0 / 7200.0; // 2 Hz
        }
        let log = FlightLog::from_records(records).unwrap();
        let result = run_comparison(
            &log,
            &art.aircraft,
            &art.efficiency,
            &opts,
            &[ModelKind::Fm, ModelKind::Cdm],
            None,
            0,
            &defaults,
        )
        .unwrap();
        let fm = &result.reports[0].1;
        assert!(fm.e_rms_w < 1e-9, "self-consistency: rms {}", fm.e_rms_w);
        let cdm = &result.reports[1].1;
        assert!(cdm.e_rms_w > 1.0, "CDM should not match the FM log");
    }

    #[test]
    fn window_selects_subrange() {
        let csv = "t_solar_h,p_solar_exp_w\n1.0,10\n2.0,20\n3.0,30\n4.0,40\n";
        let log = FlightLog::from_csv_str(csv).unwrap();
        let art = ArtifactConfig::atlantik_solar();
        let res = run_comparison(
            &log,
            &art.aircraft,
            &art.efficiency,
            &ModelOptions::default(),
            &[ModelKind::Cdm],
            Some(TimeWindow::new(2.0, 3.0)),
            0,
            &art.context,
        )
        .unwrap();
        let rep = &res.reports[0].1;
        assert_eq!(rep.n_samples, 2);
        assert_relative_eq!(rep.p_exp_avg_w, 25.0);
        assert_eq!(rep.window_start_h, 2.0);
        assert_eq!(rep.window_end_h, 3.0);

        let err = run_comparison(
            &log,
            &art.aircraft,
            &art.efficiency,
            &ModelOptions::default(),
            &[ModelKind::Cdm],
            Some(TimeWindow::new(10.0, 11.0)),
            0,
            &art.context,
        );
        assert!(matches!(err, Err(AnalysisError::EmptyWindow { .. })));
    }

    #[test]
    fn time_window_parsing() {
        assert_eq!("4.17:9.72".parse::<TimeWindow>().unwrap(), TimeWindow::new(4.17, 9.72));
        assert!(" 1 : 2 ".parse::<TimeWindow>().is_ok());
        assert!("5".parse::<TimeWindow>().is_err());
        assert!("9:5".parse::<TimeWindow>().is_err());
        assert!("a:b".parse::<TimeWindow>().is_err());
    }

    proptest! {
        #[test]
        fn adding_constant_shifts_average_error_exactly(
            xs in proptest::collection::vec(0.0f64..500.0, 5..60),
            c in -50.0f64..50.0,
            w in 0usize..5,
        ) {
            let model: Vec<f64> = xs.iter().map(|x| x + c).collect();
            let n = xs.len();
            let r = compute_errors(&model, &xs, 0..n, w).unwrap();
            // the moving average commutes with constant offsets, so the
            // average error is exactly the offset even with pre-filtering
            prop_assert!((r.e_avg_w - c).abs() < 1e-9);
        }

        #[test]
        fn rms_is_at_least_the_average(
            pairs in proptest::collection::vec((0.0f64..300.0, 0.0f64..300.0), 2..40),
        ) {
            let (m, x): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let n = m.len();
            let r = compute_errors(&m, &x, 0..n, 0).unwrap();
            prop_assert!(r.e_rms_w + 1e-12 >= r.e_avg_w.abs());
            prop_assert!(r.e_max_w + 1e-12 >= r.e_rms_w);
        }

        #[test]
        fn filtered_mean_stays_within_series_bounds(
            xs in proptest::collection::vec(-100.0f64..100.0, 1..80),
            w in 0usize..10,
        ) {
            let out = moving_average(&xs, w);
            prop_assert_eq!(out.len(), xs.len());
            let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            for v in out {
                prop_assert!(v >= lo - 1e-9 && v <= hi + 1e-9);
            }
        }
    }
}
