//! Ray-traced tail shading.
//!
//! Occluder polygons (tail surfaces) are projected along the sun direction
//! onto each solar-module polygon's plane, clipped against the module
//! outline with Sutherland-Hodgman, and the union of the clipped shadows is
//! measured by inclusion-exclusion over pairwise (and higher) convex
//! intersections. Everything happens in the body frame: the aircraft
//! attitude only rotates the sun vector.
//!
//! Shaded areas are reported, not converted into a power loss; mapping
//! shadow geometry to electrical loss needs the cell and bypass-diode
//! layout of the specific module, which callers can supply as a plugin (see
//! `models::ModelOptions::shading_loss`).

use crate::geometry::{polygon_normal, to_vectors, AircraftGeometry, Attitude};
use crate::sun::SunState;
use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

/// Rays closer than this to a surface plane count as degenerate.
const PARALLEL_TOL: f64 = 1e-9;

type Point2 = [f64; 2];

/// Shading of one solar module.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceShading {
    pub surface_id: u32,
    /// Occluded module area in m², scaled to the module's `area_m2`.
    pub shaded_area_m2: f64,
    /// Occluded fraction of the module polygon, in [0, 1].
    pub shaded_fraction: f64,
}

/// Shadow report for one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadingReport {
    pub per_surface: Vec<SurfaceShading>,
    pub sun_elevation_deg: f64,
    pub any_shading: bool,
    /// (surface id, occluder name) pairs skipped because the sun ray was
    /// parallel to the surface plane.
    pub degenerate_pairs: Vec<(u32, String)>,
}

impl ShadingReport {
    pub fn shaded_area(&self, surface_id: u32) -> f64 {
        self.per_surface
            .iter()
            .find(|s| s.surface_id == surface_id)
            .map_or(0.0, |s| s.shaded_area_m2)
    }

    pub fn shaded_fraction(&self, surface_id: u32) -> f64 {
        self.per_surface
            .iter()
            .find(|s| s.surface_id == surface_id)
            .map_or(0.0, |s| s.shaded_fraction)
    }

    pub fn total_shaded_area_m2(&self) -> f64 {
        self.per_surface.iter().map(|s| s.shaded_area_m2).sum()
    }

    /// An all-zero report for a given geometry (used at night).
    pub fn zero(geom: &AircraftGeometry, sun_elevation_deg: f64) -> Self {
        ShadingReport {
            per_surface: geom
                .surfaces
                .iter()
                .map(|s| SurfaceShading {
                    surface_id: s.id,
                    shaded_area_m2: 0.0,
                    shaded_fraction: 0.0,
                })
                .collect(),
            sun_elevation_deg,
            any_shading: false,
            degenerate_pairs: vec![],
        }
    }
}

/// Computes per-surface shaded areas for an attitude and sun state.
pub fn compute_shading(
    geom: &AircraftGeometry,
    att: &Attitude,
    sun: &SunState,
) -> ShadingReport {
    let r_body = crate::geometry::body_to_inertial(att).transpose() * sun.r_sun_vector();
    compute_shading_body(geom, &r_body, sun.elevation_deg)
}

/// Body-frame shading core: `r_sun_body` points from the aircraft toward
/// the sun.
pub fn compute_shading_body(
    geom: &AircraftGeometry,
    r_sun_body: &Vector3<f64>,
    sun_elevation_deg: f64,
) -> ShadingReport {
    let mut report = ShadingReport {
        per_surface: Vec::with_capacity(geom.surfaces.len()),
        sun_elevation_deg,
        any_shading: false,
        degenerate_pairs: vec![],
    };
    let light = -r_sun_body; // travel direction of the rays

    for surface in &geom.surfaces {
        let poly = to_vectors(&surface.polygon_body);
        let n = polygon_normal(&poly);
        let plane_d = n.dot(&poly[0]);
        let poly_area = crate::geometry::polygon_area_3d(&poly);

        let cos_lit = n.dot(r_sun_body);
        if cos_lit.abs() < PARALLEL_TOL {
            // sun ray parallel to the surface plane: projections blow up,
            // so every occluder is skipped and flagged
            for occluder in &geom.occluders {
                report.degenerate_pairs.push((surface.id, occluder.name.clone()));
            }
        }
        // a back-lit module receives no direct beam, so nothing to shade
        if cos_lit <= PARALLEL_TOL || poly_area <= 0.0 {
            report.per_surface.push(SurfaceShading {
                surface_id: surface.id,
                shaded_area_m2: 0.0,
                shaded_fraction: 0.0,
            });
            continue;
        }

        let (basis_u, basis_v) = plane_basis(&n, &poly);
        let origin = poly[0];
        let to_2d = |p: &Vector3<f64>| -> Point2 {
            let rel = p - origin;
            [rel.dot(&basis_u), rel.dot(&basis_v)]
        };
        let mut outline: Vec<Point2> = poly.iter().map(|p| to_2d(p)).collect();
        ensure_ccw(&mut outline);

        let cos_ray = light.dot(&n);
        let mut shadows: Vec<Vec<Point2>> = Vec::new();
        for occluder in &geom.occluders {
            let occ = to_vectors(&occluder.vertices);
            // keep only the part of the occluder that lies sunward of the
            // surface plane; the anti-sun side cannot cast onto it
            let sunward = clip_to_sun_side(&occ, &n, plane_d, &light);
            if sunward.len() < 3 {
                continue;
            }
            let projected: Vec<Point2> = sunward
                .iter()
                .map(|p| {
                    let s = (plane_d - n.dot(p)) / cos_ray;
                    to_2d(&(p + light * s))
                })
                .collect();
            let clipped = clip_convex(&projected, &outline);
            if polygon_area_2d(&clipped) > 0.0 {
                shadows.push(clipped);
            }
        }

        let shaded_poly_area = union_area(&shadows);
        let fraction = (shaded_poly_area / poly_area).clamp(0.0, 1.0);
        if fraction > 0.0 {
            report.any_shading = true;
        }
        report.per_surface.push(SurfaceShading {
            surface_id: surface.id,
            shaded_area_m2: fraction * surface.area_m2,
            shaded_fraction: fraction,
        });
    }
    report
}

/// Orthonormal in-plane basis (u, v) with v = n × u.
fn plane_basis(n: &Vector3<f64>, poly: &[Vector3<f64>]) -> (Vector3<f64>, Vector3<f64>) {
    let u = (poly[1] - poly[0]).normalize();
    let v = n.cross(&u);
    (u, v)
}

/// Clips a 3-D polygon to the half-space of points that can cast a shadow
/// onto the plane `x·n = d` along the light direction.
fn clip_to_sun_side(
    poly: &[Vector3<f64>],
    n: &Vector3<f64>,
    d: f64,
    light: &Vector3<f64>,
) -> Vec<Vector3<f64>> {
    // p casts at parameter s = (d - p·n)/(light·n); require s >= 0
    let denom_sign = light.dot(n).signum();
    let f = |p: &Vector3<f64>| (d - n.dot(p)) * denom_sign;

    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let fa = f(&a);
        let fb = f(&b);
        if fa >= 0.0 {
            out.push(a);
        }
        if (fa > 0.0 && fb < 0.0) || (fa < 0.0 && fb > 0.0) {
            let t = fa / (fa - fb);
            out.push(a + (b - a) * t);
        }
    }
    out
}

fn ensure_ccw(poly: &mut [Point2]) {
    if signed_area_2d(poly) < 0.0 {
        poly.reverse();
    }
}

fn signed_area_2d(poly: &[Point2]) -> f64 {
    let mut acc = 0.0;
    for i in 0..poly.len() {
        let [x0, y0] = poly[i];
        let [x1, y1] = poly[(i + 1) % poly.len()];
        acc += x0 * y1 - x1 * y0;
    }
    0.5 * acc
}

pub(crate) fn polygon_area_2d(poly: &[Point2]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    signed_area_2d(poly).abs()
}

/// Sutherland-Hodgman clip of `subject` against a convex CCW `clip`
/// polygon.
pub(crate) fn clip_convex(subject: &[Point2], clip: &[Point2]) -> Vec<Point2> {
    if subject.len() < 3 || clip.len() < 3 {
        return Vec::new();
    }
    let mut result = subject.to_vec();
    for i in 0..clip.len() {
        if result.len() < 3 {
            return Vec::new();
        }
        let a = clip[i];
        let b = clip[(i + 1) % clip.len()];
        result = clip_halfplane(&result, a, b);
    }
    if result.len() < 3 {
        Vec::new()
    } else {
        result
    }
}

/// Keeps the part of `poly` left of the directed edge a→b.
fn clip_halfplane(poly: &[Point2], a: Point2, b: Point2) -> Vec<Point2> {
    let side = |p: Point2| (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let s = poly[i];
        let e = poly[(i + 1) % poly.len()];
        let fs = side(s);
        let fe = side(e);
        match (fs >= 0.0, fe >= 0.0) {
            (true, true) => out.push(e),
            (true, false) => {
                let t = fs / (fs - fe);
                out.push(lerp2(s, e, t));
            }
            (false, true) => {
                let t = fs / (fs - fe);
                out.push(lerp2(s, e, t));
                out.push(e);
            }
            (false, false) => {}
        }
    }
    out
}

fn lerp2(a: Point2, b: Point2, t: f64) -> Point2 {
    [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t]
}

/// Area of the union of convex polygons by inclusion-exclusion. All
/// intersections of convex polygons stay convex, so the terms are exact.
fn union_area(polys: &[Vec<Point2>]) -> f64 {
    fn recurse(polys: &[Vec<Point2>], start: usize, current: &[Point2], sign: f64, acc: &mut f64) {
        for i in start..polys.len() {
            let mut ccw_clip = polys[i].clone();
            ensure_ccw(&mut ccw_clip);
            let inter = clip_convex(current, &ccw_clip);
            let area = polygon_area_2d(&inter);
            if area <= 0.0 {
                continue;
            }
            *acc += sign * area;
            recurse(polys, i + 1, &inter, -sign, acc);
        }
    }

    let mut acc = 0.0;
    for (i, p) in polys.iter().enumerate() {
        let area = polygon_area_2d(p);
        if area <= 0.0 {
            continue;
        }
        acc += area;
        recurse(polys, i + 1, p, -1.0, &mut acc);
    }
    acc.max(0.0)
}
