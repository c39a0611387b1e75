//! Solar geometry and clear-sky irradiance.
//!
//! Sun position is computed from geographic latitude, day of year and local
//! solar time: declination from the harmonic series of Spencer (1971), hour
//! angle as 15°/h about solar noon, elevation and azimuth from the standard
//! spherical relations. Working in solar time keeps solar noon at exactly
//! 12:00 and removes longitude and timezone handling from the core.
//!
//! Clear-sky beam transmittance follows the Hottel (1976) model with its
//! altitude correction and climate-type factors; the diffuse fraction is the
//! Liu & Jordan (1960) relation tied to the beam transmittance.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Extraterrestrial solar constant in W/m².
pub const SOLAR_CONSTANT_W_M2: f64 = 1367.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContextError {
    #[error("latitude_deg {0} outside [-90, 90]")]
    Latitude(f64),
    #[error("altitude_m {0} below -500 m")]
    Altitude(f64),
    #[error("day_of_year {0} outside [1, 366]")]
    DayOfYear(u16),
    #[error("solar_time_h {0} outside [0, 24)")]
    SolarTime(f64),
}

/// Where and when: the position/date/time inputs of every model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationContext {
    /// Geographic latitude in degrees, positive north.
    pub latitude_deg: f64,
    /// Altitude above sea level in meters.
    pub altitude_m: f64,
    /// Day of year, 1..=365 (366 is accepted and treated as 365).
    pub day_of_year: u16,
    /// Local solar time in hours, [0, 24). Solar noon is 12.0 exactly.
    pub solar_time_h: f64,
}

impl SimulationContext {
    pub fn new(
        latitude_deg: f64,
        altitude_m: f64,
        day_of_year: u16,
        solar_time_h: f64,
    ) -> Result<Self, ContextError> {
        let ctx = Self { latitude_deg, altitude_m, day_of_year, solar_time_h };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn validate(&self) -> Result<(), ContextError> {
        if !(-90.0..=90.0).contains(&self.latitude_deg) || !self.latitude_deg.is_finite() {
            return Err(ContextError::Latitude(self.latitude_deg));
        }
        if self.altitude_m < -500.0 || !self.altitude_m.is_finite() {
            return Err(ContextError::Altitude(self.altitude_m));
        }
        if self.day_of_year < 1 || self.day_of_year > 366 {
            return Err(ContextError::DayOfYear(self.day_of_year));
        }
        if !(0.0..24.0).contains(&self.solar_time_h) {
            return Err(ContextError::SolarTime(self.solar_time_h));
        }
        Ok(())
    }

    pub fn with_time(&self, solar_time_h: f64) -> Self {
        Self { solar_time_h, ..*self }
    }
}

/// Sun direction for a given context.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SunState {
    /// Elevation above the horizon in degrees.
    pub elevation_deg: f64,
    /// Azimuth in degrees, 0 = north, clockwise positive (east = 90).
    pub azimuth_deg: f64,
    /// Solar declination in degrees.
    pub declination_deg: f64,
    /// Hour angle in degrees, 0 at solar noon, positive in the afternoon.
    pub hour_angle_deg: f64,
    /// Unit vector from the aircraft toward the sun in the north-east-down
    /// inertial frame.
    pub r_sun: [f64; 3],
}

impl SunState {
    pub fn r_sun_vector(&self) -> Vector3<f64> {
        Vector3::new(self.r_sun[0], self.r_sun[1], self.r_sun[2])
    }

    pub fn is_daylight(&self) -> bool {
        self.elevation_deg > 0.0
    }
}

/// Beam and diffuse irradiance split.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Irradiance {
    /// Beam irradiance on a sun-normal unit area, W/m².
    pub direct_normal_w_m2: f64,
    /// Diffuse irradiance on a horizontal unit area, W/m².
    pub diffuse_horizontal_w_m2: f64,
}

impl Irradiance {
    /// Direct + diffuse on a horizontal unit area.
    pub fn global_horizontal_w_m2(&self, sun_elevation_deg: f64) -> f64 {
        if sun_elevation_deg <= 0.0 {
            return 0.0;
        }
        self.direct_normal_w_m2 * sun_elevation_deg.to_radians().sin()
            + self.diffuse_horizontal_w_m2
    }
}

/// Hottel climate type selecting the transmittance correction factors.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HottelClimate {
    Tropical,
    #[default]
    MidlatitudeSummer,
    SubarcticSummer,
    MidlatitudeWinter,
}

impl HottelClimate {
    /// (r0, r1, rk) correction factors applied to the standard-atmosphere
    /// coefficients.
    fn correction(self) -> (f64, f64, f64) {
        match self {
            HottelClimate::Tropical => (0.95, 0.98, 1.02),
            HottelClimate::MidlatitudeSummer => (0.97, 0.99, 1.02),
            HottelClimate::SubarcticSummer => (0.99, 0.99, 1.01),
            HottelClimate::MidlatitudeWinter => (1.03, 1.01, 1.00),
        }
    }
}

/// Solar declination in degrees from the day of year (Spencer series).
pub fn declination_deg(day_of_year: u16) -> f64 {
    let n = day_of_year.clamp(1, 365) as f64;
    let g = 2.0 * std::f64::consts::PI * (n - 1.0) / 365.0;
    (0.006918 - 0.399912 * g.cos() + 0.070257 * g.sin() - 0.006758 * (2.0 * g).cos()
        + 0.000907 * (2.0 * g).sin()
        - 0.002697 * (3.0 * g).cos()
        + 0.00148 * (3.0 * g).sin())
    .to_degrees()
}

/// Day-of-year eccentricity correction of the extraterrestrial irradiance.
pub fn eccentricity_factor(day_of_year: u16) -> f64 {
    let n = day_of_year.clamp(1, 365) as f64;
    1.0 + 0.033 * (2.0 * std::f64::consts::PI * n / 365.0).cos()
}

/// Builds the NED sun unit vector from elevation and azimuth in degrees.
pub fn angles_to_vector(elevation_deg: f64, azimuth_deg: f64) -> Vector3<f64> {
    let el = elevation_deg.to_radians();
    let az = azimuth_deg.to_radians();
    Vector3::new(el.cos() * az.cos(), el.cos() * az.sin(), -el.sin())
}

/// Recovers (elevation, azimuth) in degrees from a NED unit vector.
pub fn vector_to_angles(v: &Vector3<f64>) -> (f64, f64) {
    let el = (-v.z).asin().to_degrees();
    let az = v.y.atan2(v.x).to_degrees();
    (el, (az + 360.0) % 360.0)
}

/// Computes the sun state for a context.
pub fn sun_position(ctx: &SimulationContext) -> SunState {
    let decl = declination_deg(ctx.day_of_year);
    let hour_angle = 15.0 * (ctx.solar_time_h - 12.0);

    let phi = ctx.latitude_deg.to_radians();
    let de = decl.to_radians();
    let om = hour_angle.to_radians();

    let sin_el = phi.sin() * de.sin() + phi.cos() * de.cos() * om.cos();
    let elevation = sin_el.clamp(-1.0, 1.0).asin().to_degrees();

    // atan2 form keeps the azimuth well-defined through noon and midnight
    let sin_az = -de.cos() * om.sin();
    let cos_az = de.sin() * phi.cos() - de.cos() * phi.sin() * om.cos();
    let azimuth = (sin_az.atan2(cos_az).to_degrees() + 360.0) % 360.0;

    let r = angles_to_vector(elevation, azimuth).normalize();
    SunState {
        elevation_deg: elevation,
        azimuth_deg: azimuth,
        declination_deg: decl,
        hour_angle_deg: hour_angle,
        r_sun: [r.x, r.y, r.z],
    }
}

/// Hottel beam-transmittance coefficients (a0, a1, k) for an altitude and
/// climate type. The altitude entering the correction polynomials is clamped
/// to [0, 3] km, the validity range of the model.
fn hottel_coefficients(altitude_m: f64, climate: HottelClimate) -> (f64, f64, f64) {
    let a_km = (altitude_m.clamp(0.0, 3000.0)) / 1000.0;
    let a0_star = 0.4237 - 0.00821 * (6.0 - a_km).powi(2);
    let a1_star = 0.5055 + 0.00595 * (6.5 - a_km).powi(2);
    let k_star = 0.2711 + 0.01858 * (2.5 - a_km).powi(2);
    let (r0, r1, rk) = climate.correction();
    (a0_star * r0, a1_star * r1, k_star * rk)
}

/// Clear-sky direct-normal and diffuse-horizontal irradiance for a context
/// and sun state. Both components are zero when the sun is at or below the
/// horizon.
pub fn clear_sky_irradiance(
    ctx: &SimulationContext,
    sun: &SunState,
    climate: HottelClimate,
) -> Irradiance {
    if sun.elevation_deg <= 0.0 {
        return Irradiance::default();
    }
    let (a0, a1, k) = hottel_coefficients(ctx.altitude_m, climate);
    let sin_el = sun.elevation_deg.to_radians().sin();
    let air_mass = 1.0 / sin_el;
    let tau_beam = a0 + a1 * (-k * air_mass).exp();
    // Liu-Jordan diffuse transmittance tied to the beam transmittance
    let tau_diffuse = 0.271 - 0.294 * tau_beam;
    let g_on = SOLAR_CONSTANT_W_M2 * eccentricity_factor(ctx.day_of_year);
    Irradiance {
        direct_normal_w_m2: g_on * tau_beam,
        diffuse_horizontal_w_m2: (g_on * sin_el * tau_diffuse).max(0.0),
    }
}
