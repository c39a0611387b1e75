//! Solar-module and MPPT component efficiencies.
//!
//! Module efficiency is modeled as the standard-test-condition efficiency
//! scaled by three component factors: low-light behavior over total
//! irradiance, a linear temperature loss, and an angle-of-incidence factor.
//! Direct and diffuse radiation get separate compositions; the diffuse
//! incidence factor is a constant obtained by averaging the incidence curve
//! over the sky hemisphere with the projected-solid-angle weight.
//!
//! The low-light, incidence and MPPT curves ship as knot tables digitized
//! from measured cell and converter data. They are approximations and can be
//! overridden in the configuration file.

use crate::curve::Curve1D;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default low-light curve: relative efficiency over total irradiance in
/// W/m², normalized to 1.0 at the 1000 W/m² standard test condition.
pub const DEFAULT_EPS_IRRADIANCE_KNOTS: &[(f64, f64)] = &[
    (0.0, 0.77),
    (25.0, 0.86),
    (50.0, 0.91),
    (100.0, 0.945),
    (150.0, 0.958),
    (200.0, 0.968),
    (300.0, 0.979),
    (400.0, 0.987),
    (600.0, 0.996),
    (800.0, 1.0),
    (1000.0, 1.0),
    (1200.0, 1.0),
];

/// Default angle-of-incidence curve over degrees. Hemispheric averaging of
/// this table gives the 0.83 diffuse-incidence constant.
pub const DEFAULT_EPS_GAMMA_KNOTS: &[(f64, f64)] = &[
    (0.0, 1.0),
    (10.0, 1.0),
    (20.0, 0.985),
    (30.0, 0.935),
    (40.0, 0.865),
    (45.0, 0.83),
    (50.0, 0.80),
    (55.0, 0.78),
    (60.0, 0.755),
    (65.0, 0.74),
    (70.0, 0.71),
    (75.0, 0.65),
    (80.0, 0.545),
    (85.0, 0.35),
    (88.0, 0.17),
    (90.0, 0.0),
];

/// Default MPPT efficiency curve over input power in W: 70% at very low
/// power rising to the 97% peak.
pub const DEFAULT_ETA_MPPT_KNOTS: &[(f64, f64)] = &[
    (0.0, 0.70),
    (5.0, 0.72),
    (10.0, 0.77),
    (20.0, 0.84),
    (40.0, 0.90),
    (60.0, 0.925),
    (100.0, 0.95),
    (150.0, 0.962),
    (200.0, 0.97),
    (300.0, 0.97),
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EfficiencyError {
    #[error("{field} = {value} outside (0, 1.2]")]
    FactorRange { field: &'static str, value: f64 },
    #[error("{field} = {value} must be non-negative")]
    Negative { field: &'static str, value: f64 },
    #[error("p_solar_max_w = {0} must be positive")]
    BadPMax(f64),
    #[error("curve_eps_gamma at 0 deg is {0}, expected within [0.95, 1.0]")]
    GammaCurveAtZero(f64),
    #[error("curve_eps_gamma must be non-increasing beyond 50 deg (knot at {0} deg rises)")]
    GammaCurveRises(f64),
}

/// How the MPPT efficiency is evaluated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MpptMode {
    /// Interpolate the measured efficiency curve over input power.
    #[default]
    Curve,
    /// The constant efficiency assumption used by the conceptual models.
    Constant,
}

/// Module and MPPT efficiency parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EfficiencyConfig {
    /// Nominal module efficiency at standard test conditions.
    pub eta_sm_stc: f64,
    /// Wing-camber efficiency factor, applied to direct radiation only.
    pub eps_cbr: f64,
    /// Temperature loss factor in 1/K.
    pub c_l_per_k: f64,
    /// Standard-test-condition cell temperature in °C.
    pub t_stc_c: f64,
    /// Module overtemperature above ambient at the reference power, K.
    pub delta_t_max_k: f64,
    /// Reference solar power for the overtemperature model, W.
    pub p_solar_max_w: f64,
    /// Constant incidence factor for isotropic diffuse radiation.
    pub eps_gamma_diff: f64,
    /// Constant MPPT efficiency used by the conceptual models.
    pub eta_mppt_const: f64,
    pub curve_eps_i: Curve1D,
    pub curve_eps_gamma: Curve1D,
    pub curve_eta_mppt: Curve1D,
}

impl Default for EfficiencyConfig {
    fn default() -> Self {
        Self {
            eta_sm_stc: 0.237,
            eps_cbr: 1.0,
            c_l_per_k: 0.003,
            t_stc_c: 25.0,
            delta_t_max_k: 12.0,
            p_solar_max_w: 265.0,
            eps_gamma_diff: 0.83,
            eta_mppt_const: 0.95,
            curve_eps_i: Curve1D::from_slice(DEFAULT_EPS_IRRADIANCE_KNOTS).unwrap(),
            curve_eps_gamma: Curve1D::from_slice(DEFAULT_EPS_GAMMA_KNOTS).unwrap(),
            curve_eta_mppt: Curve1D::from_slice(DEFAULT_ETA_MPPT_KNOTS).unwrap(),
        }
    }
}

impl EfficiencyConfig {
    pub fn validate(&self) -> Result<(), EfficiencyError> {
        for (field, value) in [
            ("eta_sm_stc", self.eta_sm_stc),
            ("eps_cbr", self.eps_cbr),
            ("eps_gamma_diff", self.eps_gamma_diff),
            ("eta_mppt_const", self.eta_mppt_const),
        ] {
            if !(value > 0.0 && value <= 1.2) {
                return Err(EfficiencyError::FactorRange { field, value });
            }
        }
        if !(self.c_l_per_k >= 0.0) {
            return Err(EfficiencyError::Negative { field: "c_l_per_k", value: self.c_l_per_k });
        }
        if !(self.delta_t_max_k >= 0.0) {
            return Err(EfficiencyError::Negative {
                field: "delta_t_max_k",
                value: self.delta_t_max_k,
            });
        }
        if !(self.p_solar_max_w > 0.0) {
            return Err(EfficiencyError::BadPMax(self.p_solar_max_w));
        }
        let at_zero = self.curve_eps_gamma.eval(0.0);
        if !(0.95..=1.0).contains(&at_zero) {
            return Err(EfficiencyError::GammaCurveAtZero(at_zero));
        }
        for w in self.curve_eps_gamma.knots().windows(2) {
            if w[1].0 > 50.0 && w[1].1 > w[0].1 {
                return Err(EfficiencyError::GammaCurveRises(w[1].0));
            }
        }
        Ok(())
    }
}

/// Low-light component efficiency over total horizontal irradiance.
pub fn eps_irradiance(cfg: &EfficiencyConfig, i_total_w_m2: f64) -> f64 {
    cfg.curve_eps_i.eval(i_total_w_m2)
}

/// Linear temperature component efficiency. May exceed 1 for cells colder
/// than the standard test condition.
pub fn eps_temperature(cfg: &EfficiencyConfig, t_sm_c: f64) -> f64 {
    1.0 - cfg.c_l_per_k * (t_sm_c - cfg.t_stc_c)
}

/// Module temperature from ambient temperature and collected solar power.
pub fn module_temperature(cfg: &EfficiencyConfig, t_amb_c: f64, p_solar_w: f64) -> f64 {
    t_amb_c + cfg.delta_t_max_k * p_solar_w / cfg.p_solar_max_w
}

/// Angle-of-incidence component efficiency. Zero for back-facing surfaces
/// (gamma >= 90 deg) regardless of the curve's clamp value.
pub fn eps_gamma(cfg: &EfficiencyConfig, gamma_deg: f64) -> f64 {
    if gamma_deg >= 90.0 {
        0.0
    } else {
        cfg.curve_eps_gamma.eval(gamma_deg)
    }
}

/// Averages an incidence curve over the sky hemisphere assuming isotropic
/// diffuse radiance, weighting by the projected solid angle
/// sin(γ)·cos(γ)·dγ. Numerator and denominator use the same composite
/// Simpson rule so constant curves come out exactly.
pub fn eps_gamma_diffuse(curve: &Curve1D) -> f64 {
    const STEPS: usize = 1800; // even
    let h = std::f64::consts::FRAC_PI_2 / STEPS as f64;
    let weight = |g: f64| g.sin() * g.cos();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..=STEPS {
        let g = i as f64 * h;
        let coeff = if i == 0 || i == STEPS {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let w = weight(g);
        num += coeff * w * curve.eval(g.to_degrees());
        den += coeff * w;
    }
    num / den
}

/// Effective module efficiency for direct radiation.
pub fn eta_sm_direct(cfg: &EfficiencyConfig, eps_i: f64, eps_t: f64, eps_gamma: f64) -> f64 {
    cfg.eta_sm_stc * eps_i * eps_t * eps_gamma * cfg.eps_cbr
}

/// Effective module efficiency for diffuse radiation. The camber factor is
/// intentionally absent: curvature only degrades the directed component.
pub fn eta_sm_diffuse(cfg: &EfficiencyConfig, eps_i: f64, eps_t: f64) -> f64 {
    cfg.eta_sm_stc * eps_i * eps_t * cfg.eps_gamma_diff
}

/// MPPT efficiency for a given input power.
pub fn eta_mppt(cfg: &EfficiencyConfig, p_solar_w: f64, mode: MpptMode) -> f64 {
    match mode {
        MpptMode::Curve => cfg.curve_eta_mppt.eval(p_solar_w),
        MpptMode::Constant => cfg.eta_mppt_const,
    }
}
