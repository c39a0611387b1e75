//! TOML configuration: aircraft geometry, efficiency parameters, default
//! simulation context and model options.
//!
//! The default configuration models the AtlantikSolar AS-2 airframe: six
//! solar-module surfaces along the wing with measured areas and mounting
//! angles, and the T-tail (vertical fin plus elevator) as shading
//! occluders. Module areas are exact; the module and tail outlines are
//! approximate rectangles, so shading results are qualitative. Every value
//! can be overridden in the file.

use crate::curve::Curve1D;
use crate::efficiency::EfficiencyConfig;
use crate::geometry::{
    AircraftGeometry, DihedralConvention, Occluder, RotationOrder, Side, SurfaceSpec,
};
use crate::models::{area_proportional_loss, EpsIrradianceInput, ModelOptions};
use crate::sun::{HottelClimate, SimulationContext};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to read config file '{path}': {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("config field '{field}': {reason}")]
    Invalid { field: String, reason: String },
}

/// Clear-sky model options.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SunConfig {
    pub climate: HottelClimate,
}

/// Built-in shading-loss plugins selectable from the config file.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShadingLossKind {
    /// Report shaded areas only; power is not reduced.
    #[default]
    None,
    /// Scale surface power with the unshaded area fraction. A lower bound
    /// on the real loss; see `models::area_proportional_loss`.
    AreaProportional,
}

/// Model evaluation options as stored in the config file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    /// Constant module temperature for the conceptual models, °C.
    pub t_const_c: f64,
    pub mppt_mode: crate::efficiency::MpptMode,
    pub eps_i_input: EpsIrradianceInput,
    pub shading_loss: ShadingLossKind,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            t_const_c: 25.0,
            mppt_mode: crate::efficiency::MpptMode::Curve,
            eps_i_input: EpsIrradianceInput::GlobalHorizontal,
            shading_loss: ShadingLossKind::None,
        }
    }
}

/// The full artifact configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArtifactConfig {
    pub context: SimulationContext,
    #[serde(default)]
    pub sun: SunConfig,
    pub aircraft: AircraftGeometry,
    #[serde(default)]
    pub efficiency: EfficiencyConfig,
    #[serde(default)]
    pub model: ModelConfig,
}

impl Default for ArtifactConfig {
    fn default() -> Self {
        Self::atlantik_solar()
    }
}

impl ArtifactConfig {
    /// The default AtlantikSolar AS-2 configuration.
    pub fn atlantik_solar() -> Self {
        ArtifactConfig {
            context: SimulationContext {
                latitude_deg: 47.6,
                altitude_m: 540.0,
                day_of_year: 182,
                solar_time_h: 12.0,
            },
            sun: SunConfig { climate: HottelClimate::MidlatitudeSummer },
            aircraft: atlantik_solar_geometry(),
            efficiency: EfficiencyConfig::default(),
            model: ModelConfig::default(),
        }
    }

    pub fn from_toml_str(data: &str) -> Result<Self, ConfigError> {
        let cfg: ArtifactConfig = toml::from_str(data)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let data = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&data)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.context.validate().map_err(|e| ConfigError::Invalid {
            field: "context".into(),
            reason: e.to_string(),
        })?;
        self.aircraft.validate().map_err(|e| ConfigError::Invalid {
            field: "aircraft".into(),
            reason: e.to_string(),
        })?;
        self.efficiency.validate().map_err(|e| ConfigError::Invalid {
            field: "efficiency".into(),
            reason: e.to_string(),
        })?;
        if !self.model.t_const_c.is_finite() {
            return Err(ConfigError::Invalid {
                field: "model.t_const_c".into(),
                reason: format!("{} is not finite", self.model.t_const_c),
            });
        }
        Ok(())
    }

    /// Assembles runtime model options from the `[sun]` and `[model]`
    /// sections.
    pub fn model_options(&self) -> ModelOptions {
        ModelOptions {
            t_const_c: self.model.t_const_c,
            climate: self.sun.climate,
            mppt_mode: self.model.mppt_mode,
            eps_i_input: self.model.eps_i_input,
            shading_loss: match self.model.shading_loss {
                ShadingLossKind::None => None,
                ShadingLossKind::AreaProportional => Some(area_proportional_loss()),
            },
        }
    }
}

/// The AtlantikSolar AS-2 solar-module layout: six spanwise modules over a
/// 0.30 m chord strip, plus the T-tail occluders.
fn atlantik_solar_geometry() -> AircraftGeometry {
    const CHORD: f64 = 0.30;
    const X_LE: f64 = 0.15;
    const X_TE: f64 = -0.15;
    // (area m², cell pitch deg, side), ids 1..=6 from the left wing tip
    let panels: [(f64, f64, Side); 6] = [
        (0.184, -0.5, Side::Left),
        (0.307, 9.4, Side::Left),
        (0.184, -0.5, Side::CenterLeft),
        (0.184, 9.4, Side::CenterRight),
        (0.307, -0.5, Side::Right),
        (0.184, 9.4, Side::Right),
    ];
    let total_width: f64 = panels.iter().map(|p| p.0 / CHORD).sum();
    let mut y = -0.5 * total_width;
    let surfaces = panels
        .iter()
        .enumerate()
        .map(|(i, &(area, cell_pitch, side))| {
            let width = area / CHORD;
            let y0 = y;
            let y1 = y + width;
            y = y1;
            SurfaceSpec {
                id: i as u32 + 1,
                area_m2: area,
                side,
                cell_pitch_deg: cell_pitch,
                polygon_body: vec![
                    [X_TE, y0, 0.0],
                    [X_TE, y1, 0.0],
                    [X_LE, y1, 0.0],
                    [X_LE, y0, 0.0],
                ],
            }
        })
        .collect();
    AircraftGeometry {
        dihedral_deg: 6.0,
        wing_pitch_deg: 5.7,
        surfaces,
        occluders: vec![
            Occluder {
                name: "vertical_tail".into(),
                vertices: vec![
                    [-1.55, 0.0, -0.05],
                    [-1.75, 0.0, -0.05],
                    [-1.75, 0.0, -0.50],
                    [-1.55, 0.0, -0.50],
                ],
            },
            Occluder {
                name: "horizontal_tail".into(),
                vertices: vec![
                    [-1.55, -0.55, -0.50],
                    [-1.78, -0.55, -0.50],
                    [-1.78, 0.55, -0.50],
                    [-1.55, 0.55, -0.50],
                ],
            },
        ],
        rotation_order: RotationOrder::PitchThenDihedral,
        dihedral_convention: DihedralConvention::NormalsInboard,
    }
}

/// Convenience constructor for a unit-factor efficiency config used by
/// degeneracy tests and examples.
pub fn unit_efficiency_config() -> EfficiencyConfig {
    EfficiencyConfig {
        curve_eps_i: Curve1D::constant(1.0),
        curve_eps_gamma: Curve1D::from_slice(&[(0.0, 1.0), (90.0, 1.0)]).unwrap(),
        eps_gamma_diff: 1.0,
        delta_t_max_k: 0.0,
        ..EfficiencyConfig::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polygon_area_3d;
    use approx::assert_relative_eq;

    #[test]
    fn default_config_validates() {
        ArtifactConfig::atlantik_solar().validate().unwrap();
    }

    #[test]
    fn default_polygon_areas_match_module_areas() {
        let geom = atlantik_solar_geometry();
        assert_relative_eq!(geom.total_area_m2(), 1.35, epsilon = 1e-12);
        for s in &geom.surfaces {
            let poly = crate::geometry::to_vectors(&s.polygon_body);
            assert_relative_eq!(polygon_area_3d(&poly), s.area_m2, epsilon = 1e-9);
        }
    }

    #[test]
    fn toml_round_trip_is_semantically_idempotent() {
        let cfg = ArtifactConfig::atlantik_solar();
        let text = cfg.to_toml_string();
        let reparsed = ArtifactConfig::from_toml_str(&text).unwrap();
        assert_eq!(cfg, reparsed);
        // and a second round trip is byte-identical
        assert_eq!(text, reparsed.to_toml_string());
    }

    #[test]
    fn shipped_default_file_matches_builtin() {
        let text = include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../configs/atlantiksolar.toml"
        ));
        let from_file = ArtifactConfig::from_toml_str(text).unwrap();
        let builtin = ArtifactConfig::atlantik_solar();
        assert_eq!(from_file.sun, builtin.sun);
        assert_eq!(from_file.model, builtin.model);
        assert_eq!(from_file.context, builtin.context);
        assert_eq!(from_file.efficiency, builtin.efficiency);
        assert_eq!(from_file.aircraft.dihedral_deg, builtin.aircraft.dihedral_deg);
        assert_eq!(from_file.aircraft.occluders, builtin.aircraft.occluders);
        for (a, b) in from_file.aircraft.surfaces.iter().zip(&builtin.aircraft.surfaces) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.area_m2, b.area_m2);
            assert_eq!(a.side, b.side);
            assert_eq!(a.cell_pitch_deg, b.cell_pitch_deg);
            for (va, vb) in a.polygon_body.iter().zip(&b.polygon_body) {
                for k in 0..3 {
                    assert_relative_eq!(va[k], vb[k], epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn validation_errors_name_the_field() {
        let mut cfg = ArtifactConfig::atlantik_solar();
        cfg.context.latitude_deg = 95.0;
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("context"), "{err}");
        assert!(err.to_string().contains("latitude_deg"), "{err}");

        let mut cfg = ArtifactConfig::atlantik_solar();
        cfg.aircraft.surfaces[2].area_m2 = -1.0;
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("aircraft"), "{err}");
        assert!(err.to_string().contains("area"), "{err}");
    }

    #[test]
    fn parse_rejects_unknown_top_level_keys() {
        let text = "nonsense = 1\n[context]\nlatitude_deg = 0.0\naltitude_m = 0.0\nday_of_year = 1\nsolar_time_h = 0.0\n[aircraft]\ndihedral_deg = 0.0\nwing_pitch_deg = 0.0\nsurfaces = []\n";
        assert!(matches!(
            ArtifactConfig::from_toml_str(text),
            Err(ConfigError::Parse(_))
        ));
    }

    #[test]
    fn model_options_map_shading_plugin() {
        let mut cfg = ArtifactConfig::atlantik_solar();
        assert!(cfg.model_options().shading_loss.is_none());
        cfg.model.shading_loss = ShadingLossKind::AreaProportional;
        assert!(cfg.model_options().shading_loss.is_some());
    }
}
