//! The four-model hierarchy: conceptual design model (CDM), conceptual
//! analysis model (CAM), verification model (VM) and full model (FM).
//!
//! All four share the same clear-sky irradiance; they differ in geometry
//! fidelity and in which component efficiencies they carry:
//!
//! | model | surfaces | attitude      | η_mppt   | η_sm                        |
//! |-------|----------|---------------|----------|-----------------------------|
//! | CDM   | single   | horizontal    | constant | f(T_C)                      |
//! | CAM   | single   | horizontal    | constant | f(γ(horizontal), T_C)       |
//! | VM    | single   | central wing  | constant | f(γ(central wing), T_C)     |
//! | FM    | all      | per surface   | curve    | f(γ_i, I_total, T_module)   |
//!
//! The full model needs the collected power to evaluate the module
//! temperature, which itself feeds the power. Day simulations break the
//! loop with a one-step lag: each step evaluates the temperature at the
//! previous step's power (the first step uses zero). The effect is bounded
//! by `c_l · ΔT_max` (about 3.6% worst case), so the lag error at
//! minute-scale steps is negligible.

use crate::efficiency::{
    eps_gamma, eps_irradiance, eps_temperature, eta_mppt, eta_sm_diffuse, eta_sm_direct,
    module_temperature, EfficiencyConfig, MpptMode,
};
use crate::geometry::{
    body_to_inertial, incidence_angle_deg, surface_normal_body, AircraftGeometry, Attitude,
};
use crate::shading::{compute_shading_body, ShadingReport};
use crate::sun::{clear_sky_irradiance, sun_position, HottelClimate, SimulationContext};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

/// Which model of the hierarchy to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Cdm,
    Cam,
    Vm,
    Fm,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [ModelKind::Cdm, ModelKind::Cam, ModelKind::Vm, ModelKind::Fm];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Cdm => "cdm",
            ModelKind::Cam => "cam",
            ModelKind::Vm => "vm",
            ModelKind::Fm => "fm",
        }
    }

    /// True when the model evaluation requires the aircraft attitude.
    pub fn needs_attitude(self) -> bool {
        matches!(self, ModelKind::Vm | ModelKind::Fm)
    }

    /// True when the model evaluation requires the ambient temperature.
    pub fn needs_ambient_temperature(self) -> bool {
        matches!(self, ModelKind::Fm)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cdm" => Ok(ModelKind::Cdm),
            "cam" => Ok(ModelKind::Cam),
            "vm" => Ok(ModelKind::Vm),
            "fm" => Ok(ModelKind::Fm),
            other => Err(format!("unknown model kind '{other}' (expected cdm|cam|vm|fm)")),
        }
    }
}

/// Which irradiance argument feeds the low-light efficiency curve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsIrradianceInput {
    /// One evaluation per timestamp at the global horizontal irradiance;
    /// shared by all surfaces. Low-light behavior is driven by ambient
    /// illumination, so this is the default.
    #[default]
    GlobalHorizontal,
    /// Evaluate per surface at that surface's direct + diffuse irradiance.
    PerSurface,
}

/// Maps a shading report to a per-surface power multiplier. Converting
/// shadow geometry into electrical loss depends on the cell and
/// bypass-diode layout, so no default mapping is applied.
pub type ShadingLossFn = dyn Fn(&ShadingReport, u32) -> f64 + Send + Sync;

/// A crude example plugin: power scales with the unshaded area fraction.
/// Real modules lose more than the covered fraction once cell strings shut
/// down, so treat this as a lower bound on the loss.
pub fn area_proportional_loss() -> Arc<ShadingLossFn> {
    Arc::new(|report, surface_id| 1.0 - report.shaded_fraction(surface_id))
}

/// Model evaluation options shared across the hierarchy.
#[derive(Clone)]
pub struct ModelOptions {
    /// The constant module temperature T_C assumed by CDM/CAM/VM, °C.
    pub t_const_c: f64,
    /// Clear-sky climate type.
    pub climate: HottelClimate,
    /// MPPT efficiency mode used by the full model (the conceptual models
    /// always use the constant).
    pub mppt_mode: MpptMode,
    pub eps_i_input: EpsIrradianceInput,
    /// Optional shading-loss plugin applied to full-model surface powers.
    pub shading_loss: Option<Arc<ShadingLossFn>>,
}

impl Default for ModelOptions {
    fn default() -> Self {
        Self {
            t_const_c: 25.0,
            climate: HottelClimate::default(),
            mppt_mode: MpptMode::Curve,
            eps_i_input: EpsIrradianceInput::default(),
            shading_loss: None,
        }
    }
}

impl fmt::Debug for ModelOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModelOptions")
            .field("t_const_c", &self.t_const_c)
            .field("climate", &self.climate)
            .field("mppt_mode", &self.mppt_mode)
            .field("eps_i_input", &self.eps_i_input)
            .field("shading_loss", &self.shading_loss.as_ref().map(|_| "<plugin>"))
            .finish()
    }
}

/// Per-surface contribution to a power evaluation. Powers are pre-MPPT.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfacePower {
    /// Surface id; 0 denotes the aggregated pseudo-surface of the
    /// single-surface models.
    pub surface_id: u32,
    pub direct_w: f64,
    pub diffuse_w: f64,
    pub gamma_deg: f64,
    pub eps_i: f64,
    pub eps_t: f64,
    pub eps_gamma: f64,
    /// Effective module efficiency: surface power over incident power on
    /// the surface.
    pub eta_sm: f64,
    pub shaded_area_m2: f64,
}

/// One model evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerBreakdown {
    /// Collected power after the MPPT, W.
    pub total_w: f64,
    /// Sum of the per-surface direct + diffuse powers before the MPPT, W.
    pub pre_mppt_w: f64,
    pub per_surface: Vec<SurfacePower>,
    pub eta_mppt_used: f64,
    /// Module temperature used for the temperature efficiency, °C.
    pub t_sm_c: f64,
    /// Mean of the per-surface effective module efficiencies (the
    /// "average over the module sections" reported by day plots).
    pub eta_sm_overall: f64,
    /// Attached for the full model; `None` for the single-surface models.
    pub shading: Option<ShadingReport>,
}

impl PowerBreakdown {
    fn night(geom_surfaces: &[u32], t_sm_c: f64, with_shading: Option<ShadingReport>) -> Self {
        PowerBreakdown {
            total_w: 0.0,
            pre_mppt_w: 0.0,
            per_surface: geom_surfaces
                .iter()
                .map(|&id| SurfacePower {
                    surface_id: id,
                    direct_w: 0.0,
                    diffuse_w: 0.0,
                    gamma_deg: 0.0,
                    eps_i: 0.0,
                    eps_t: 0.0,
                    eps_gamma: 0.0,
                    eta_sm: 0.0,
                    shaded_area_m2: 0.0,
                })
                .collect(),
            eta_mppt_used: 0.0,
            t_sm_c,
            eta_sm_overall: 0.0,
            shading: with_shading,
        }
    }

    fn mean_eta(per_surface: &[SurfacePower]) -> f64 {
        if per_surface.is_empty() {
            return 0.0;
        }
        per_surface.iter().map(|s| s.eta_sm).sum::<f64>() / per_surface.len() as f64
    }
}

/// Conceptual design model: one horizontal surface, constant efficiencies.
pub fn power_cdm(
    ctx: &SimulationContext,
    total_area_m2: f64,
    cfg: &EfficiencyConfig,
    opts: &ModelOptions,
) -> PowerBreakdown {
    let sun = sun_position(ctx);
    if !sun.is_daylight() {
        return PowerBreakdown::night(&[0], opts.t_const_c, None);
    }
    let irr = clear_sky_irradiance(ctx, &sun, opts.climate);
    let i_glob = irr.global_horizontal_w_m2(sun.elevation_deg);
    let eps_t = eps_temperature(cfg, opts.t_const_c);
    let eta_sm = cfg.eta_sm_stc * eps_t * cfg.eps_cbr;
    let pre = i_glob * eta_sm * total_area_m2;
    let eta_m = eta_mppt(cfg, pre, MpptMode::Constant);
    let i_dir_h = irr.direct_normal_w_m2 * sun.elevation_deg.to_radians().sin();
    PowerBreakdown {
        total_w: pre * eta_m,
        pre_mppt_w: pre,
        per_surface: vec![SurfacePower {
            surface_id: 0,
            direct_w: i_dir_h * eta_sm * total_area_m2,
            diffuse_w: irr.diffuse_horizontal_w_m2 * eta_sm * total_area_m2,
            gamma_deg: 90.0 - sun.elevation_deg,
            eps_i: 1.0,
            eps_t,
            eps_gamma: 1.0,
            eta_sm,
            shaded_area_m2: 0.0,
        }],
        eta_mppt_used: eta_m,
        t_sm_c: opts.t_const_c,
        eta_sm_overall: eta_sm,
        shading: None,
    }
}

/// Conceptual analysis model: CDM plus the incidence-angle correlation for
/// the horizontal surface, with the direct/diffuse split.
pub fn power_cam(
    ctx: &SimulationContext,
    total_area_m2: f64,
    cfg: &EfficiencyConfig,
    opts: &ModelOptions,
) -> PowerBreakdown {
    let up = nalgebra::Vector3::new(0.0, 0.0, -1.0);
    single_surface_model(ctx, total_area_m2, cfg, opts, &up, 0)
}

/// Verification model: CAM with the single surface following the aircraft
/// attitude using the central-wing mounting angles (dihedral excluded).
pub fn power_vm(
    ctx: &SimulationContext,
    att: &Attitude,
    total_area_m2: f64,
    cfg: &EfficiencyConfig,
    opts: &ModelOptions,
    geom: &AircraftGeometry,
) -> PowerBreakdown {
    let cell_pitch = geom.central_surface().map_or(0.0, |s| s.cell_pitch_deg);
    let pitch = (geom.wing_pitch_deg + cell_pitch).to_radians();
    let n_body = crate::geometry::rot_y(pitch) * nalgebra::Vector3::new(0.0, 0.0, -1.0);
    let n_inertial = body_to_inertial(att) * n_body;
    single_surface_model(ctx, total_area_m2, cfg, opts, &n_inertial, 0)
}

/// Shared single-surface evaluation used by CAM and VM.
fn single_surface_model(
    ctx: &SimulationContext,
    total_area_m2: f64,
    cfg: &EfficiencyConfig,
    opts: &ModelOptions,
    n_inertial: &nalgebra::Vector3<f64>,
    surface_id: u32,
) -> PowerBreakdown {
    let sun = sun_position(ctx);
    if !sun.is_daylight() {
        return PowerBreakdown::night(&[surface_id], opts.t_const_c, None);
    }
    let irr = clear_sky_irradiance(ctx, &sun, opts.climate);
    let gamma = incidence_angle_deg(n_inertial, &sun.r_sun_vector());
    let cos_gamma = n_inertial.dot(&sun.r_sun_vector()).max(0.0);
    let i_dir_surf = irr.direct_normal_w_m2 * cos_gamma;
    let eps_t = eps_temperature(cfg, opts.t_const_c);
    let eps_g = eps_gamma(cfg, gamma);

    let eta_dir = eta_sm_direct(cfg, 1.0, eps_t, eps_g);
    let eta_diff = eta_sm_diffuse(cfg, 1.0, eps_t);
    let p_dir = i_dir_surf * eta_dir * total_area_m2;
    let p_diff = irr.diffuse_horizontal_w_m2 * eta_diff * total_area_m2;
    let pre = p_dir + p_diff;
    let eta_m = eta_mppt(cfg, pre, MpptMode::Constant);

    let incident = (i_dir_surf + irr.diffuse_horizontal_w_m2) * total_area_m2;
    let eta_sm = if incident > 0.0 { pre / incident } else { 0.0 };
    PowerBreakdown {
        total_w: pre * eta_m,
        pre_mppt_w: pre,
        per_surface: vec![SurfacePower {
            surface_id,
            direct_w: p_dir,
            diffuse_w: p_diff,
            gamma_deg: gamma,
            eps_i: 1.0,
            eps_t,
            eps_gamma: eps_g,
            eta_sm,
            shaded_area_m2: 0.0,
        }],
        eta_mppt_used: eta_m,
        t_sm_c: opts.t_const_c,
        eta_sm_overall: eta_sm,
        shading: None,
    }
}

/// Full model: per-surface geometry, split irradiance, full efficiency
/// chain, MPPT curve and the shading report.
///
/// `p_solar_prev_w` is the collected power of the previous time step,
/// used to evaluate the module temperature (one-step lag).
pub fn power_fm(
    ctx: &SimulationContext,
    att: &Attitude,
    geom: &AircraftGeometry,
    cfg: &EfficiencyConfig,
    opts: &ModelOptions,
    t_amb_c: f64,
    p_solar_prev_w: f64,
) -> PowerBreakdown {
    let sun = sun_position(ctx);
    let ids: Vec<u32> = geom.surfaces.iter().map(|s| s.id).collect();
    if !sun.is_daylight() {
        let shading = ShadingReport::zero(geom, sun.elevation_deg);
        return PowerBreakdown::night(&ids, t_amb_c, Some(shading));
    }
    let irr = clear_sky_irradiance(ctx, &sun, opts.climate);
    let i_glob = irr.global_horizontal_w_m2(sun.elevation_deg);
    let eps_i_global = eps_irradiance(cfg, i_glob);
    let t_sm = module_temperature(cfg, t_amb_c, p_solar_prev_w.max(0.0));
    let eps_t = eps_temperature(cfg, t_sm);

    let rotation = body_to_inertial(att);
    let r_sun = sun.r_sun_vector();
    let r_sun_body = rotation.transpose() * r_sun;
    let shading = compute_shading_body(geom, &r_sun_body, sun.elevation_deg);

    let mut per_surface = Vec::with_capacity(geom.surfaces.len());
    let mut pre = 0.0;
    for surface in &geom.surfaces {
        let n_inertial = rotation * surface_normal_body(geom, surface);
        let gamma = incidence_angle_deg(&n_inertial, &r_sun);
        let cos_gamma = n_inertial.dot(&r_sun).max(0.0);
        let i_dir_surf = irr.direct_normal_w_m2 * cos_gamma;
        let eps_i = match opts.eps_i_input {
            EpsIrradianceInput::GlobalHorizontal => eps_i_global,
            EpsIrradianceInput::PerSurface => {
                eps_irradiance(cfg, i_dir_surf + irr.diffuse_horizontal_w_m2)
            }
        };
        let eps_g = eps_gamma(cfg, gamma);
        let multiplier = opts
            .shading_loss
            .as_ref()
            .map_or(1.0, |f| f(&shading, surface.id).clamp(0.0, 1.0));
        let p_dir =
            i_dir_surf * eta_sm_direct(cfg, eps_i, eps_t, eps_g) * surface.area_m2 * multiplier;
        let p_diff = irr.diffuse_horizontal_w_m2
            * eta_sm_diffuse(cfg, eps_i, eps_t)
            * surface.area_m2
            * multiplier;
        pre += p_dir + p_diff;

        let incident = (i_dir_surf + irr.diffuse_horizontal_w_m2) * surface.area_m2;
        per_surface.push(SurfacePower {
            surface_id: surface.id,
            direct_w: p_dir,
            diffuse_w: p_diff,
            gamma_deg: gamma,
            eps_i,
            eps_t,
            eps_gamma: eps_g,
            eta_sm: if incident > 0.0 { (p_dir + p_diff) / incident } else { 0.0 },
            shaded_area_m2: shading.shaded_area(surface.id),
        });
    }
    let eta_m = eta_mppt(cfg, pre, opts.mppt_mode);
    PowerBreakdown {
        total_w: pre * eta_m,
        pre_mppt_w: pre,
        eta_sm_overall: PowerBreakdown::mean_eta(&per_surface),
        per_surface,
        eta_mppt_used: eta_m,
        t_sm_c: t_sm,
        shading: Some(shading),
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulationError {
    #[error("step_h = {0} must lie in (0, 1]")]
    BadStep(f64),
}

/// Attitude as a function of solar time for day simulations.
#[derive(Debug, Clone, PartialEq)]
pub enum AttitudeSchedule {
    Fixed(Attitude),
    /// A loitering turn: constant roll and pitch, yaw ramping through 360°
    /// every `period_s` seconds.
    YawSweep { roll_deg: f64, pitch_deg: f64, period_s: f64, yaw0_deg: f64 },
}

impl AttitudeSchedule {
    pub fn level_north() -> Self {
        AttitudeSchedule::Fixed(Attitude::level(0.0))
    }

    pub fn at(&self, solar_time_h: f64) -> Attitude {
        match *self {
            AttitudeSchedule::Fixed(att) => att,
            AttitudeSchedule::YawSweep { roll_deg, pitch_deg, period_s, yaw0_deg } => Attitude {
                roll_deg,
                pitch_deg,
                yaw_deg: (yaw0_deg + 360.0 * solar_time_h * 3600.0 / period_s).rem_euclid(360.0),
            },
        }
    }
}

/// One step of a day simulation.
#[derive(Debug, Clone)]
pub struct TimeSample {
    pub t_solar_h: f64,
    pub sun: crate::sun::SunState,
    pub irradiance: crate::sun::Irradiance,
    pub breakdown: PowerBreakdown,
}

/// Sweeps solar time over [0, 24) at a fixed step and evaluates the chosen
/// model. For the full model the previous step's collected power feeds the
/// module-temperature lag.
#[allow(clippy::too_many_arguments)]
pub fn simulate_day(
    kind: ModelKind,
    base: &SimulationContext,
    step_h: f64,
    geom: &AircraftGeometry,
    cfg: &EfficiencyConfig,
    opts: &ModelOptions,
    attitude: &AttitudeSchedule,
    t_amb_c: f64,
) -> Result<Vec<TimeSample>, SimulationError> {
    if !(step_h > 0.0 && step_h <= 1.0) {
        return Err(SimulationError::BadStep(step_h));
    }
    let n_steps = (24.0 / step_h).ceil() as usize;
    let mut out = Vec::with_capacity(n_steps);
    let mut p_prev = 0.0;
    let total_area = geom.total_area_m2();
    for i in 0..n_steps {
        let t = i as f64 * step_h;
        if t >= 24.0 {
            break;
        }
        let ctx = base.with_time(t);
        let att = attitude.at(t);
        let breakdown = match kind {
            ModelKind::Cdm => power_cdm(&ctx, total_area, cfg, opts),
            ModelKind::Cam => power_cam(&ctx, total_area, cfg, opts),
            ModelKind::Vm => power_vm(&ctx, &att, total_area, cfg, opts, geom),
            ModelKind::Fm => power_fm(&ctx, &att, geom, cfg, opts, t_amb_c, p_prev),
        };
        p_prev = breakdown.total_w;
        let sun = sun_position(&ctx);
        let irradiance = clear_sky_irradiance(&ctx, &sun, opts.climate);
        out.push(TimeSample { t_solar_h: t, sun, irradiance, breakdown });
    }
    Ok(out)
}
