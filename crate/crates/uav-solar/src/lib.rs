//! Solar power income models for solar-powered fixed-wing UAVs.
//!
//! The crate implements a hierarchy of four models that trade input-data
//! requirements against fidelity:
//!
//! * **CDM** (conceptual design model): a single horizontal surface,
//!   constant module and MPPT efficiencies. Suitable when almost nothing
//!   about the aircraft or mission is known yet.
//! * **CAM** (conceptual analysis model): adds the angle-of-incidence
//!   efficiency correlation evaluated for the horizontal surface.
//! * **VM** (verification model): a single flat surface that follows the
//!   aircraft attitude with the central-wing mounting angles. Used to
//!   separate attitude effects from the remaining model differences.
//! * **FM** (full model): per-surface geometry with dihedral and cell pitch
//!   angles, split direct/diffuse irradiance, low-light, temperature and
//!   incidence-angle efficiencies, a measured MPPT efficiency curve, and
//!   ray-traced tail shading.
//!
//! Supporting modules provide solar geometry and clear-sky irradiance
//! ([`sun`]), body-frame surface geometry and attitude transforms
//! ([`geometry`]), the component-efficiency chain ([`efficiency`]),
//! polygon-clipped shadow areas ([`shading`]), flight-log ingestion and
//! error metrics ([`analysis`]), and a TOML configuration format
//! ([`config`]).
//!
//! All model evaluations are pure functions of their inputs; the only
//! sequential state is the one-step module-temperature lag in full-model
//! day simulations.

pub mod analysis;
pub mod config;
pub mod curve;
pub mod efficiency;
pub mod geometry;
pub mod models;
pub mod shading;
pub mod sun;

pub use analysis::{compute_errors, moving_average, run_comparison, ErrorReport, FlightLog};
pub use config::ArtifactConfig;
pub use curve::Curve1D;
pub use efficiency::EfficiencyConfig;
pub use geometry::{AircraftGeometry, Attitude, SurfaceSpec};
pub use models::{simulate_day, ModelKind, ModelOptions, PowerBreakdown};
pub use shading::{compute_shading, ShadingReport};
pub use sun::{clear_sky_irradiance, sun_position, Irradiance, SimulationContext, SunState};
