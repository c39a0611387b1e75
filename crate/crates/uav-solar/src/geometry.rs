//! Aircraft geometry: solar-module surfaces, attitude transforms and
//! incidence angles.
//!
//! The body frame is front-right-down (x forward, y toward the right wing
//! tip, z down); the inertial frame is north-east-down. The flat-wing
//! upper-surface normal is therefore [0, 0, -1] in both frames.
//!
//! Surface normals are built from three mounting angles: the wing dihedral,
//! the wing pitch (chord line vs. fuselage axis), and a per-module cell
//! pitch relative to the chord line. Positive pitch offsets are
//! leading-edge-up, which tilts the upper-surface normal aft:
//! `R_y(+θ)·[0,0,-1] = [-sin θ, 0, -cos θ]`. With the default sign
//! convention, dihedral (wing tips up) tilts normals inboard.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Maximum vertex distance from the fitted plane accepted at validation.
pub const PLANARITY_TOL_M: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("surface id {0} appears more than once")]
    DuplicateSurfaceId(u32),
    #[error("surface {id}: area_m2 {area} must be positive and finite")]
    BadArea { id: u32, area: f64 },
    #[error("surface {id}: {reason}")]
    BadSurfacePolygon { id: u32, reason: PolygonError },
    #[error("occluder '{name}': {reason}")]
    BadOccluderPolygon { name: String, reason: PolygonError },
    #[error("surface {id}: polygon winding is inconsistent with the upward normal")]
    BadWinding { id: u32 },
    #[error("angle {name} = {value} is not finite")]
    NonFiniteAngle { name: &'static str, value: f64 },
    #[error("geometry has no surfaces")]
    NoSurfaces,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolygonError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon vertex {0} is not finite")]
    NonFiniteVertex(usize),
    #[error("polygon is degenerate (zero area)")]
    Degenerate,
    #[error("polygon is not planar (max deviation {0:.2e} m)")]
    NotPlanar(f64),
    #[error("polygon is not convex")]
    NotConvex,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AttitudeError {
    #[error("roll_deg {0} outside [-180, 180]")]
    Roll(f64),
    #[error("pitch_deg {0} outside [-90, 90]")]
    Pitch(f64),
    #[error("yaw_deg {0} outside [0, 360)")]
    Yaw(f64),
}

/// Which wing half a solar module sits on. Center modules inherit the
/// dihedral sign of their wing half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    CenterLeft,
    CenterRight,
    Right,
}

impl Side {
    /// +1 on the left half, -1 on the right half.
    pub fn dihedral_sign(self) -> f64 {
        match self {
            Side::Left | Side::CenterLeft => 1.0,
            Side::Right | Side::CenterRight => -1.0,
        }
    }

    pub fn is_center(self) -> bool {
        matches!(self, Side::CenterLeft | Side::CenterRight)
    }
}

/// Order in which the mounting rotations are composed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationOrder {
    /// Pitch offsets are applied in the chord-line frame first, then the
    /// dihedral rotation. Matches the physical assembly order.
    #[default]
    PitchThenDihedral,
    DihedralThenPitch,
}

/// Sign convention mapping positive dihedral to the direction the
/// upper-surface normals lean.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DihedralConvention {
    /// Wing tips up; normals lean toward the fuselage.
    #[default]
    NormalsInboard,
    NormalsOutboard,
}

/// One solar-module covered area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub id: u32,
    /// Module area in m². This value drives power; the polygon only drives
    /// shading.
    pub area_m2: f64,
    pub side: Side,
    /// Cell pitch relative to the wing chord line, degrees,
    /// leading-edge-up positive.
    pub cell_pitch_deg: f64,
    /// Planar convex polygon in body-frame meters, wound so the outward
    /// (upward, -z) normal comes out of the right-hand rule.
    pub polygon_body: Vec<[f64; 3]>,
}

/// A named occluder polygon (tail surfaces) in body-frame meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Occluder {
    pub name: String,
    pub vertices: Vec<[f64; 3]>,
}

/// The aircraft's solar-module layout and shading geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AircraftGeometry {
    pub dihedral_deg: f64,
    /// Pitch of the wing chord line relative to the fuselage x-axis,
    /// degrees, leading-edge-up positive.
    pub wing_pitch_deg: f64,
    pub surfaces: Vec<SurfaceSpec>,
    #[serde(default)]
    pub occluders: Vec<Occluder>,
    #[serde(default)]
    pub rotation_order: RotationOrder,
    #[serde(default)]
    pub dihedral_convention: DihedralConvention,
}

impl AircraftGeometry {
    pub fn total_area_m2(&self) -> f64 {
        self.surfaces.iter().map(|s| s.area_m2).sum()
    }

    /// The surface whose mounting angles the verification model uses:
    /// the first center surface in id order, or the first surface if none
    /// is marked center.
    pub fn central_surface(&self) -> Option<&SurfaceSpec> {
        self.surfaces
            .iter()
            .filter(|s| s.side.is_center())
            .min_by_key(|s| s.id)
            .or_else(|| self.surfaces.first())
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if self.surfaces.is_empty() {
            return Err(GeometryError::NoSurfaces);
        }
        for (name, value) in [
            ("dihedral_deg", self.dihedral_deg),
            ("wing_pitch_deg", self.wing_pitch_deg),
        ] {
            if !value.is_finite() {
                return Err(GeometryError::NonFiniteAngle { name, value });
            }
        }
        let mut ids: Vec<u32> = self.surfaces.iter().map(|s| s.id).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(GeometryError::DuplicateSurfaceId(w[0]));
        }
        for s in &self.surfaces {
            if !(s.area_m2 > 0.0) || !s.area_m2.is_finite() {
                return Err(GeometryError::BadArea { id: s.id, area: s.area_m2 });
            }
            if !s.cell_pitch_deg.is_finite() {
                return Err(GeometryError::NonFiniteAngle {
                    name: "cell_pitch_deg",
                    value: s.cell_pitch_deg,
                });
            }
            let poly = to_vectors(&s.polygon_body);
            validate_polygon(&poly)
                .map_err(|reason| GeometryError::BadSurfacePolygon { id: s.id, reason })?;
            // up in the body frame is -z
            if polygon_normal(&poly).z >= 0.0 {
                return Err(GeometryError::BadWinding { id: s.id });
            }
        }
        for o in &self.occluders {
            let poly = to_vectors(&o.vertices);
            validate_polygon(&poly).map_err(|reason| GeometryError::BadOccluderPolygon {
                name: o.name.clone(),
                reason,
            })?;
        }
        Ok(())
    }
}

/// Euler angles, body to NED, Z-Y-X (yaw-pitch-roll) convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Attitude {
    pub roll_deg: f64,
    pub pitch_deg: f64,
    pub yaw_deg: f64,
}

impl Attitude {
    pub fn new(roll_deg: f64, pitch_deg: f64, yaw_deg: f64) -> Result<Self, AttitudeError> {
        let a = Self { roll_deg, pitch_deg, yaw_deg };
        a.validate()?;
        Ok(a)
    }

    /// Level flight at the given heading.
    pub fn level(yaw_deg: f64) -> Self {
        Self { roll_deg: 0.0, pitch_deg: 0.0, yaw_deg: yaw_deg.rem_euclid(360.0) }
    }

    /// Builds an attitude from arbitrary Euler angles, wrapping yaw into
    /// [0, 360).
    pub fn wrapped(roll_deg: f64, pitch_deg: f64, yaw_deg: f64) -> Result<Self, AttitudeError> {
        Self::new(roll_deg, pitch_deg, yaw_deg.rem_euclid(360.0))
    }

    pub fn validate(&self) -> Result<(), AttitudeError> {
        if !(-180.0..=180.0).contains(&self.roll_deg) || !self.roll_deg.is_finite() {
            return Err(AttitudeError::Roll(self.roll_deg));
        }
        if !(-90.0..=90.0).contains(&self.pitch_deg) || !self.pitch_deg.is_finite() {
            return Err(AttitudeError::Pitch(self.pitch_deg));
        }
        if !(0.0..360.0).contains(&self.yaw_deg) {
            return Err(AttitudeError::Yaw(self.yaw_deg));
        }
        Ok(())
    }
}

pub fn rot_x(angle_rad: f64) -> Matrix3<f64> {
    let (s, c) = angle_rad.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

pub fn rot_y(angle_rad: f64) -> Matrix3<f64> {
    let (s, c) = angle_rad.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

pub fn rot_z(angle_rad: f64) -> Matrix3<f64> {
    let (s, c) = angle_rad.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Body-frame unit normal of a surface from its mounting angles.
pub fn surface_normal_body(geom: &AircraftGeometry, surface: &SurfaceSpec) -> Vector3<f64> {
    let pitch = (geom.wing_pitch_deg + surface.cell_pitch_deg).to_radians();
    let sign = match geom.dihedral_convention {
        DihedralConvention::NormalsInboard => surface.side.dihedral_sign(),
        DihedralConvention::NormalsOutboard => -surface.side.dihedral_sign(),
    };
    let dihedral = (geom.dihedral_deg * sign).to_radians();
    let up = Vector3::new(0.0, 0.0, -1.0);
    let n = match geom.rotation_order {
        RotationOrder::PitchThenDihedral => rot_x(dihedral) * (rot_y(pitch) * up),
        RotationOrder::DihedralThenPitch => rot_y(pitch) * (rot_x(dihedral) * up),
    };
    n.normalize()
}

/// Direction cosine matrix from the body frame to the NED inertial frame,
/// Z-Y-X Euler convention: `R = R_z(yaw) * R_y(pitch) * R_x(roll)`.
pub fn body_to_inertial(att: &Attitude) -> Matrix3<f64> {
    rot_z(att.yaw_deg.to_radians())
        * rot_y(att.pitch_deg.to_radians())
        * rot_x(att.roll_deg.to_radians())
}

/// Angle of incidence in degrees between a surface normal and the sun
/// vector, both unit vectors in the same frame. Values >= 90 mean the
/// surface faces away from the sun.
pub fn incidence_angle_deg(n_inertial: &Vector3<f64>, r_sun: &Vector3<f64>) -> f64 {
    n_inertial.dot(r_sun).clamp(-1.0, 1.0).acos().to_degrees().abs()
}

pub(crate) fn to_vectors(vertices: &[[f64; 3]]) -> Vec<Vector3<f64>> {
    vertices.iter().map(|v| Vector3::new(v[0], v[1], v[2])).collect()
}

/// Area-weighted polygon normal (Newell's method), normalized.
pub(crate) fn polygon_normal(poly: &[Vector3<f64>]) -> Vector3<f64> {
    let mut n = Vector3::zeros();
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        n += a.cross(&b);
    }
    n.normalize()
}

/// Area of a planar polygon embedded in 3-D.
pub(crate) fn polygon_area_3d(poly: &[Vector3<f64>]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut n = Vector3::zeros();
    for i in 0..poly.len() {
        n += poly[i].cross(&poly[(i + 1) % poly.len()]);
    }
    0.5 * n.norm()
}

pub(crate) fn validate_polygon(poly: &[Vector3<f64>]) -> Result<(), PolygonError> {
    if poly.len() < 3 {
        return Err(PolygonError::TooFewVertices(poly.len()));
    }
    for (i, v) in poly.iter().enumerate() {
        if !v.iter().all(|c| c.is_finite()) {
            return Err(PolygonError::NonFiniteVertex(i));
        }
    }
    if polygon_area_3d(poly) < 1e-12 {
        return Err(PolygonError::Degenerate);
    }
    let n = polygon_normal(poly);
    let d = n.dot(&poly[0]);
    let max_dev = poly.iter().map(|v| (n.dot(v) - d).abs()).fold(0.0, f64::max);
    if max_dev > PLANARITY_TOL_M {
        return Err(PolygonError::NotPlanar(max_dev));
    }
    // convexity: all edge-pair cross products aligned with the normal
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let c = poly[(i + 2) % poly.len()];
        let cross = (b - a).cross(&(c - b));
        if cross.dot(&n) < -1e-9 {
            return Err(PolygonError::NotConvex);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use nalgebra::UnitQuaternion;
    use proptest::prelude::*;

    fn square_at(z: f64) -> Vec<[f64; 3]> {
        // wound for an upward (-z) normal
        vec![[0.0, 0.0, z], [0.0, 1.0, z], [1.0, 1.0, z], [1.0, 0.0, z]]
    }

    fn test_geom(dihedral: f64, wing_pitch: f64, cell_pitch: f64, side: Side) -> AircraftGeometry {
        AircraftGeometry {
            dihedral_deg: dihedral,
            wing_pitch_deg: wing_pitch,
            surfaces: vec![SurfaceSpec {
                id: 1,
                area_m2: 1.0,
                side,
                cell_pitch_deg: cell_pitch,
                polygon_body: square_at(0.0),
            }],
            occluders: vec![],
            rotation_order: RotationOrder::default(),
            dihedral_convention: DihedralConvention::default(),
        }
    }

    #[test]
    fn unrotated_normal_is_up() {
        let g = test_geom(0.0, 0.0, 0.0, Side::Left);
        let n = surface_normal_body(&g, &g.surfaces[0]);
        assert_relative_eq!(n, Vector3::new(0.0, 0.0, -1.0), epsilon = 1e-12);
    }

    #[test]
    fn wing_and_cell_pitch_tilt_normal_aft() {
        // wing pitch 5.7 deg with cell pitch -0.5 deg gives a 5.2 deg aft tilt
        let g = test_geom(0.0, 5.7, -0.5, Side::Left);
        let n = surface_normal_body(&g, &g.surfaces[0]);
        let t = 5.2f64.to_radians();
        assert_relative_eq!(n, Vector3::new(-t.sin(), 0.0, -t.cos()), epsilon = 1e-12);
    }

    #[test]
    fn dihedral_tilts_right_wing_normal_inboard() {
        let g = test_geom(6.0, 0.0, 0.0, Side::Right);
        let n = surface_normal_body(&g, &g.surfaces[0]);
        let d = 6.0f64.to_radians();
        // verified against the hand-computed product R_x(-6 deg) * [0,0,-1]
        assert_relative_eq!(n, Vector3::new(0.0, -d.sin(), -d.cos()), epsilon = 1e-12);
    }

    #[test]
    fn center_surfaces_inherit_wing_half_sign() {
        let gl = test_geom(6.0, 0.0, 0.0, Side::CenterLeft);
        let gr = test_geom(6.0, 0.0, 0.0, Side::CenterRight);
        let nl = surface_normal_body(&gl, &gl.surfaces[0]);
        let nr = surface_normal_body(&gr, &gr.surfaces[0]);
        assert!(nl.y > 0.0 && nr.y < 0.0);
        assert_abs_diff_eq!(nl.y, -nr.y, epsilon = 1e-12);
    }

    #[test]
    fn rotation_order_difference_is_second_order_small() {
        // worst case of the default layout: 6 deg dihedral with the
        // 5.7 + 9.4 deg pitch stack
        let mut g = test_geom(6.0, 5.7, 9.4, Side::Right);
        let a = surface_normal_body(&g, &g.surfaces[0]);
        g.rotation_order = RotationOrder::DihedralThenPitch;
        let b = surface_normal_body(&g, &g.surfaces[0]);
        let angle = a.dot(&b).clamp(-1.0, 1.0).acos().to_degrees();
        assert!(angle < 0.25, "order difference {angle} deg");
    }

    #[test]
    fn body_to_inertial_identity_and_pure_yaw() {
        let r = body_to_inertial(&Attitude::level(0.0));
        assert_relative_eq!(r, Matrix3::identity(), epsilon = 1e-12);

        // pure 90 deg yaw maps body-x to east
        let r = body_to_inertial(&Attitude::level(90.0));
        let east = r * Vector3::new(1.0, 0.0, 0.0);
        assert_relative_eq!(east, Vector3::new(0.0, 1.0, 0.0), epsilon = 1e-12);
    }

    #[test]
    fn dcm_matches_quaternion_composition() {
        let att = Attitude::new(10.0, 5.0, 247.0).unwrap();
        let r = body_to_inertial(&att);
        let q = UnitQuaternion::from_euler_angles(
            att.roll_deg.to_radians(),
            att.pitch_deg.to_radians(),
            att.yaw_deg.to_radians(),
        );
        let rq = q.to_rotation_matrix();
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(r[(i, j)], rq[(i, j)], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn incidence_angle_basics() {
        let up = Vector3::new(0.0, 0.0, -1.0);
        assert_abs_diff_eq!(incidence_angle_deg(&up, &up), 0.0, epsilon = 1e-9);
        let east = Vector3::new(0.0, 1.0, 0.0);
        assert_abs_diff_eq!(incidence_angle_deg(&up, &east), 90.0, epsilon = 1e-9);
        // horizontal surface, sun at 30 deg elevation
        let sun = crate::sun::angles_to_vector(30.0, 135.0);
        assert_abs_diff_eq!(incidence_angle_deg(&up, &sun), 60.0, epsilon = 1e-9);
    }

    #[test]
    fn roll_swaps_wing_incidence_antisymmetrically() {
        // mirrored wing surfaces, sun in the aircraft's vertical plane
        let mk = |side| SurfaceSpec {
            id: if side == Side::Left { 1 } else { 2 },
            area_m2: 1.0,
            side,
            cell_pitch_deg: 0.0,
            polygon_body: square_at(0.0),
        };
        let g = AircraftGeometry {
            dihedral_deg: 6.0,
            wing_pitch_deg: 0.0,
            surfaces: vec![mk(Side::Left), mk(Side::Right)],
            occluders: vec![],
            rotation_order: RotationOrder::default(),
            dihedral_convention: DihedralConvention::default(),
        };
        let sun = crate::sun::angles_to_vector(25.0, 0.0);
        let gamma = |roll: f64, s: &SurfaceSpec| {
            let att = Attitude::new(roll, 0.0, 0.0).unwrap();
            let n = body_to_inertial(&att) * surface_normal_body(&g, s);
            incidence_angle_deg(&n, &sun)
        };
        for roll in [5.0, 17.0, 30.0] {
            assert_abs_diff_eq!(
                gamma(roll, &g.surfaces[0]),
                gamma(-roll, &g.surfaces[1]),
                epsilon = 1e-9
            );
            assert_abs_diff_eq!(
                gamma(roll, &g.surfaces[1]),
                gamma(-roll, &g.surfaces[0]),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn validation_rejects_bad_polygons() {
        let mut g = test_geom(0.0, 0.0, 0.0, Side::Left);
        g.surfaces[0].polygon_body = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]];
        assert!(matches!(g.validate(), Err(GeometryError::BadSurfacePolygon { .. })));

        // non-planar quad
        let mut g = test_geom(0.0, 0.0, 0.0, Side::Left);
        g.surfaces[0].polygon_body =
            vec![[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.1], [1.0, 0.0, 0.0]];
        assert!(matches!(g.validate(), Err(GeometryError::BadSurfacePolygon { .. })));

        // non-convex (notched) polygon
        let mut g = test_geom(0.0, 0.0, 0.0, Side::Left);
        g.surfaces[0].polygon_body = vec![
            [0.0, 0.0, 0.0],
            [0.0, 2.0, 0.0],
            [1.0, 0.2, 0.0],
            [2.0, 2.0, 0.0],
            [2.0, 0.0, 0.0],
        ];
        assert!(matches!(g.validate(), Err(GeometryError::BadSurfacePolygon { .. })));

        // reversed winding (normal points down)
        let mut g = test_geom(0.0, 0.0, 0.0, Side::Left);
        g.surfaces[0].polygon_body.reverse();
        assert!(matches!(g.validate(), Err(GeometryError::BadWinding { id: 1 })));

        let mut g = test_geom(0.0, 0.0, 0.0, Side::Left);
        g.surfaces.push(g.surfaces[0].clone());
        assert!(matches!(g.validate(), Err(GeometryError::DuplicateSurfaceId(1))));
    }

    proptest! {
        #[test]
        fn rotated_normals_stay_unit(
            roll in -180.0f64..180.0,
            pitch in -90.0f64..90.0,
            yaw in 0.0f64..360.0,
            dihedral in -10.0f64..10.0,
            cell in -10.0f64..10.0,
        ) {
            let g = test_geom(dihedral, 5.7, cell, Side::Right);
            let att = Attitude { roll_deg: roll, pitch_deg: pitch, yaw_deg: yaw };
            let n = body_to_inertial(&att) * surface_normal_body(&g, &g.surfaces[0]);
            prop_assert!((n.norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn dcm_is_proper_orthonormal(
            roll in -180.0f64..180.0,
            pitch in -90.0f64..90.0,
            yaw in 0.0f64..360.0,
        ) {
            let r = body_to_inertial(&Attitude { roll_deg: roll, pitch_deg: pitch, yaw_deg: yaw });
            let should_be_identity = r * r.transpose();
            for i in 0..3 {
                for j in 0..3 {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((should_be_identity[(i, j)] - expected).abs() < 1e-12);
                }
            }
            prop_assert!((r.determinant() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn horizontal_surface_incidence_is_yaw_invariant(
            yaw in 0.0f64..360.0,
            el in 1.0f64..89.0,
            az in 0.0f64..360.0,
        ) {
            let g = test_geom(0.0, 0.0, 0.0, Side::Left);
            let sun = crate::sun::angles_to_vector(el, az);
            let att = Attitude::level(yaw);
            let n = body_to_inertial(&att) * surface_normal_body(&g, &g.surfaces[0]);
            let gamma = incidence_angle_deg(&n, &sun);
            // complementary to the elevation, independent of yaw
            prop_assert!((gamma - (90.0 - el)).abs() < 1e-9);
        }
    }
}
