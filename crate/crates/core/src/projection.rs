//! Perspective projection of the celestial sphere onto the drawing plane
//! from a viewpoint on the polar axis.
//!
//! The unit sphere has its north pole at axis height `+1`. A viewpoint at
//! height `v` projects onto the plane at height `w`; the stereographic
//! projection of the astrolabe is `v = -1, w = +1`. Radii are scaled so
//! that the celestial equator lands on the canonical scale `S` whenever the
//! equator has a finite image on the instrument side (`v < 0`); for viewpoints
//! at or above the centre the sphere radius itself is set to `S`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{fit_circle, FitResult, PlanePoint};

/// Smallest admissible `|sin δ − v|` before a projection is declared singular.
const SINGULAR_DENOMINATOR: f64 = 1e-12;

/// A direction on the celestial sphere, in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub dec: f64,
    pub hour_angle: f64,
}

impl SpherePoint {
    pub fn new(dec: f64, hour_angle: f64) -> Result<Self> {
        if !dec.is_finite() || !hour_angle.is_finite() {
            return Err(Error::domain("non-finite sphere coordinates"));
        }
        if !(-90.0..=90.0).contains(&dec) {
            return Err(Error::domain(format!(
                "declination {dec}° outside [-90°, 90°]"
            )));
        }
        Ok(SpherePoint {
            dec,
            hour_angle: normalize_deg(hour_angle),
        })
    }

    /// Unit vector `(cos δ sin H, cos δ cos H, sin δ)`: `H = 0` points along
    /// `+y`, matching the plate frame.
    pub fn to_unit_vector(&self) -> [f64; 3] {
        let (sd, cd) = self.dec.to_radians().sin_cos();
        let (sh, ch) = self.hour_angle.to_radians().sin_cos();
        [cd * sh, cd * ch, sd]
    }

    pub fn from_unit_vector(v: [f64; 3]) -> Self {
        let horiz = v[0].hypot(v[1]);
        let dec = v[2].atan2(horiz).to_degrees();
        let ha = if horiz == 0.0 {
            0.0
        } else {
            normalize_deg(v[0].atan2(v[1]).to_degrees())
        };
        SpherePoint {
            dec,
            hour_angle: ha,
        }
    }

    /// Great-circle separation in radians.
    pub fn angular_distance(&self, other: &SpherePoint) -> f64 {
        let a = self.to_unit_vector();
        let b = other.to_unit_vector();
        let cross = cross(a, b);
        norm(cross).atan2(dot(a, b))
    }
}

/// Wraps degrees into `[0, 360)`.
pub fn normalize_deg(a: f64) -> f64 {
    let t = a.rem_euclid(360.0);
    if t >= 360.0 {
        0.0
    } else {
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProjectionKind {
    /// Central projection from axis height `viewpoint` onto the plane at
    /// axis height `plane`, both in sphere radii.
    Perspective { viewpoint: f64, plane: f64 },
    /// Parallel projection along the axis (viewpoint at infinity).
    Orthographic,
}

impl ProjectionKind {
    pub const STEREOGRAPHIC: ProjectionKind = ProjectionKind::Perspective {
        viewpoint: -1.0,
        plane: 1.0,
    };
    pub const GNOMONIC: ProjectionKind = ProjectionKind::Perspective {
        viewpoint: 0.0,
        plane: 1.0,
    };

    pub fn stereographic() -> Self {
        Self::STEREOGRAPHIC
    }

    pub fn gnomonic() -> Self {
        Self::GNOMONIC
    }

    pub fn orthographic() -> Self {
        ProjectionKind::Orthographic
    }

    /// Viewpoint outside the sphere at distance `q > 1` below the centre.
    pub fn external(q: f64) -> Result<Self> {
        if !(q > 1.0) || !q.is_finite() {
            return Err(Error::domain(format!(
                "external projection needs q > 1, got {q}"
            )));
        }
        Ok(ProjectionKind::Perspective {
            viewpoint: -q,
            plane: 1.0,
        })
    }

    pub fn perspective(viewpoint: f64, plane: f64) -> Result<Self> {
        let kind = ProjectionKind::Perspective { viewpoint, plane };
        kind.validate()?;
        Ok(kind)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ProjectionKind::Orthographic => Ok(()),
            ProjectionKind::Perspective { viewpoint, plane } => {
                if !viewpoint.is_finite() || !plane.is_finite() {
                    return Err(Error::domain("projection parameters must be finite"));
                }
                if viewpoint == plane {
                    return Err(Error::domain("image plane contains the viewpoint"));
                }
                Ok(())
            }
        }
    }

    pub fn is_stereographic(&self) -> bool {
        *self == Self::STEREOGRAPHIC
    }
}

/// Radial distance from the plate centre of the image of a point at
/// declination `dec` (degrees).
pub fn axis_projection_radius(dec: f64, kind: ProjectionKind, scale: f64) -> Result<f64> {
    kind.validate()?;
    if !(-90.0..=90.0).contains(&dec) {
        return Err(Error::domain(format!(
            "declination {dec}° outside [-90°, 90°]"
        )));
    }
    let (sd, cd) = dec.to_radians().sin_cos();
    match kind {
        ProjectionKind::Orthographic => Ok(scale * cd),
        ProjectionKind::Perspective {
            viewpoint: v,
            plane: w,
        } => {
            if kind.is_stereographic() {
                if dec <= -90.0 {
                    return Err(Error::domain(
                        "the south celestial pole projects to infinity",
                    ));
                }
                // cos δ / (1 + sin δ) == (1 − sin δ) / cos δ; pick the
                // cancellation-free side
                return Ok(if sd >= 0.0 {
                    scale * cd / (1.0 + sd)
                } else {
                    scale * (1.0 - sd) / cd
                });
            }
            let denom = sd - v;
            if denom.abs() < SINGULAR_DENOMINATOR {
                return Err(Error::domain(format!(
                    "declination {dec}° is parallel to the image plane for viewpoint {v}"
                )));
            }
            let t = (w - v) / denom;
            if t <= 0.0 {
                return Err(Error::domain(format!(
                    "declination {dec}° does not reach the image plane on the instrument side"
                )));
            }
            let k = if v < 0.0 {
                scale * (-v) / (w - v)
            } else {
                scale
            };
            Ok(k * t * cd)
        }
    }
}

/// Stereographic image of a sphere point on the plate.
pub fn project_point(p: &SpherePoint, scale: f64) -> Result<PlanePoint> {
    project_point_with(p, ProjectionKind::STEREOGRAPHIC, scale)
}

pub fn project_point_with(p: &SpherePoint, kind: ProjectionKind, scale: f64) -> Result<PlanePoint> {
    let r = axis_projection_radius(p.dec, kind, scale)?;
    Ok(PlanePoint::from_plate_polar(r, p.hour_angle.to_radians()))
}

/// Inverse of the stereographic plate mapping.
pub fn unproject_point(q: &PlanePoint, scale: f64) -> SpherePoint {
    let r = q.norm();
    let dec = 90.0 - 2.0 * (r / scale).atan().to_degrees();
    let ha = if r == 0.0 {
        0.0
    } else {
        q.plate_angle().to_degrees()
    };
    SpherePoint {
        dec,
        hour_angle: ha,
    }
}

/// A circle on the sphere given by its pole and angular radius (degrees).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereCircleSpec {
    pub pole_dec: f64,
    pub pole_ha: f64,
    pub angular_radius: f64,
}

impl SphereCircleSpec {
    pub fn new(pole_dec: f64, pole_ha: f64, angular_radius: f64) -> Result<Self> {
        SpherePoint::new(pole_dec, pole_ha)?;
        if !(angular_radius > 0.0 && angular_radius <= 90.0) {
            return Err(Error::domain(format!(
                "angular radius {angular_radius}° outside (0°, 90°]"
            )));
        }
        Ok(SphereCircleSpec {
            pole_dec,
            pole_ha: normalize_deg(pole_ha),
            angular_radius,
        })
    }

    /// The ecliptic for obliquity `eps` (degrees), in the rest frame where
    /// the solstitial colure lies on the meridian.
    pub fn ecliptic(eps: f64) -> Result<Self> {
        SphereCircleSpec::new(90.0 - eps, 0.0, 90.0)
    }

    pub fn equator() -> Self {
        SphereCircleSpec {
            pole_dec: 90.0,
            pole_ha: 0.0,
            angular_radius: 90.0,
        }
    }

    pub fn pole(&self) -> SpherePoint {
        SpherePoint {
            dec: self.pole_dec,
            hour_angle: self.pole_ha,
        }
    }

    pub fn is_great_circle(&self) -> bool {
        self.angular_radius == 90.0
    }

    /// Orthonormal basis `(u, w)` of the circle's plane. For a pole off the
    /// axis `u` is the ascending node direction `ẑ × P`, so the parameter
    /// behaves like a longitude measured from the node.
    fn basis(&self) -> ([f64; 3], [f64; 3], [f64; 3]) {
        let p = self.pole().to_unit_vector();
        let zxp = cross([0.0, 0.0, 1.0], p);
        let n = norm(zxp);
        let u = if n > 1e-12 {
            [zxp[0] / n, zxp[1] / n, zxp[2] / n]
        } else {
            let (s, c) = self.pole_ha.to_radians().sin_cos();
            [s, c, 0.0]
        };
        let w = cross(p, u);
        (p, u, w)
    }

    /// Point at circle parameter `t` (degrees).
    pub fn point_at(&self, t: f64) -> SpherePoint {
        let (p, u, w) = self.basis();
        let (sr, cr) = self.angular_radius.to_radians().sin_cos();
        let (st, ct) = t.to_radians().sin_cos();
        let v = [
            cr * p[0] + sr * (ct * u[0] + st * w[0]),
            cr * p[1] + sr * (ct * u[1] + st * w[1]),
            cr * p[2] + sr * (ct * u[2] + st * w[2]),
        ];
        SpherePoint::from_unit_vector(v)
    }
}

/// `n` points spaced uniformly in the circle's own parameter, starting at
/// parameter zero.
pub fn sample_sphere_circle(spec: &SphereCircleSpec, n: usize) -> Result<Vec<SpherePoint>> {
    if n < 3 {
        return Err(Error::domain(format!("need at least 3 samples, got {n}")));
    }
    Ok((0..n)
        .map(|i| spec.point_at(360.0 * i as f64 / n as f64))
        .collect())
}

/// Projects `n` samples of a sphere circle and fits a circle to the image.
/// Under the stereographic projection the residual vanishes up to rounding.
pub fn circle_image_residual(
    spec: &SphereCircleSpec,
    kind: ProjectionKind,
    n: usize,
    scale: f64,
) -> Result<FitResult> {
    let pts = sample_sphere_circle(spec, n)?
        .iter()
        .map(|p| project_point_with(p, kind, scale))
        .collect::<Result<Vec<_>>>()?;
    fit_circle(&pts)
}

/// Batch form of [`circle_image_residual`], evaluated under `exec`.
pub fn circle_image_residuals(
    specs: &[SphereCircleSpec],
    kind: ProjectionKind,
    n: usize,
    scale: f64,
    exec: Execution,
) -> Vec<Result<FitResult>> {
    exec.map_slice(specs, |s| circle_image_residual(s, kind, n, scale))
}

/// Angle between a sphere point and the south celestial pole, in degrees.
pub fn distance_from_south_pole(p: &SpherePoint) -> f64 {
    90.0 + p.dec
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}
