//! The rete: ecliptic ring with its zodiac graduation and the star pointers.
//!
//! The rete is drawn at the rotation where local sidereal time is 270°, so
//! the hour angle of right ascension `α` is `270° − α`. In that position the
//! summer solstice sits on the lower meridian and the ecliptic's centre lies
//! on the `+y` axis, tangent to Capricorn at the top and Cancer at the bottom.

use std::collections::HashSet;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Circle, PlanePoint};
use crate::plate::{parallel_radius, tropic_circles_for};
use crate::projection::{normalize_deg, project_point, unproject_point, SpherePoint};

/// Local sidereal time at which the rete is laid out, in degrees.
pub const RETE_SIDEREAL_TIME: f64 = 270.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarEntry {
    pub name: String,
    /// Right ascension in degrees, `[0, 360)`.
    pub ra: f64,
    pub dec: f64,
    pub magnitude: f64,
}

impl StarEntry {
    pub fn new(name: impl Into<String>, ra: f64, dec: f64, magnitude: f64) -> Result<Self> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(Error::InvalidConfig("star name must be nonempty".into()));
        }
        if !ra.is_finite() || !magnitude.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "star '{name}' has non-finite coordinates"
            )));
        }
        if !(-90.0..=90.0).contains(&dec) {
            return Err(Error::InvalidConfig(format!(
                "star '{name}' declination {dec}° outside [-90°, 90°]"
            )));
        }
        Ok(StarEntry {
            name,
            ra: normalize_deg(ra),
            dec,
            magnitude,
        })
    }

    /// Position of the star on the sphere in the rete's layout frame.
    pub fn sphere_point(&self) -> SpherePoint {
        SpherePoint {
            dec: self.dec,
            hour_angle: hour_angle_of_ra(self.ra),
        }
    }
}

pub fn hour_angle_of_ra(ra: f64) -> f64 {
    normalize_deg(RETE_SIDEREAL_TIME - ra)
}

pub fn ra_of_hour_angle(ha: f64) -> f64 {
    normalize_deg(RETE_SIDEREAL_TIME - ha)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZodiacTick {
    /// Ecliptic longitude in degrees.
    pub longitude: f64,
    pub point: PlanePoint,
    /// Sign boundary (every 30°).
    pub major: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarPointer {
    pub star: StarEntry,
    pub point: PlanePoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedStar {
    pub name: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReteModel {
    pub scale: f64,
    pub obliquity: f64,
    pub ecliptic: Circle,
    pub zodiac_ticks: Vec<ZodiacTick>,
    pub pointers: Vec<StarPointer>,
    pub skipped: Vec<SkippedStar>,
    pub boundary: Circle,
}

fn check_obliquity(eps: f64) -> Result<()> {
    if !(0.0..30.0).contains(&eps) {
        return Err(Error::InvalidConfig(format!(
            "obliquity {eps}° must lie in [0°, 30°)"
        )));
    }
    Ok(())
}

/// Projected ecliptic, internally tangent to both tropics on the meridian.
pub fn ecliptic_circle(scale: f64, obliquity: f64) -> Result<Circle> {
    check_obliquity(obliquity)?;
    let r_cap = parallel_radius(-obliquity, scale);
    let r_can = parallel_radius(obliquity, scale);
    Circle::new(
        PlanePoint::new(0.0, 0.5 * (r_cap - r_can)),
        0.5 * (r_cap + r_can),
    )
}

/// Equatorial coordinates `(ra, dec)` of ecliptic longitude `λ`, degrees.
pub fn ecliptic_to_equatorial(longitude: f64, obliquity: f64) -> (f64, f64) {
    let (sl, cl) = longitude.to_radians().sin_cos();
    let (se, ce) = obliquity.to_radians().sin_cos();
    let ra = normalize_deg((ce * sl).atan2(cl).to_degrees());
    let dec = (se * sl).clamp(-1.0, 1.0).asin().to_degrees();
    (ra, dec)
}

/// Plate position of ecliptic longitude `λ` on the rete.
pub fn ecliptic_point(longitude: f64, scale: f64, obliquity: f64) -> Result<PlanePoint> {
    check_obliquity(obliquity)?;
    let (ra, dec) = ecliptic_to_equatorial(longitude, obliquity);
    project_point(
        &SpherePoint {
            dec,
            hour_angle: hour_angle_of_ra(ra),
        },
        scale,
    )
}

/// Pointer tip for a star. Stars on or beyond the Capricorn limb are
/// rejected.
pub fn star_pointer(star: &StarEntry, scale: f64, obliquity: f64) -> Result<PlanePoint> {
    check_obliquity(obliquity)?;
    let limit = parallel_radius(-obliquity, scale);
    let radius = parallel_radius(star.dec, scale);
    if !(radius < limit * (1.0 - 1e-12)) {
        return Err(Error::OutsidePlate {
            name: star.name.clone(),
            radius,
            limit,
        });
    }
    project_point(&star.sphere_point(), scale)
}

/// Recovers `(ra, dec)` from a pointer position.
pub fn star_coordinates(point: &PlanePoint, scale: f64) -> (f64, f64) {
    let sp = unproject_point(point, scale);
    (ra_of_hour_angle(sp.hour_angle), sp.dec)
}

pub fn build_rete(catalog: &[StarEntry], scale: f64, obliquity: f64) -> Result<ReteModel> {
    let ecliptic = ecliptic_circle(scale, obliquity)?;
    let boundary = tropic_circles_for(scale, obliquity)?.capricorn;

    let mut seen = HashSet::new();
    for s in catalog {
        if !seen.insert(s.name.as_str()) {
            return Err(Error::DuplicateStarName(s.name.clone()));
        }
    }

    let zodiac_ticks = (0..360)
        .map(|deg| {
            let longitude = deg as f64;
            Ok(ZodiacTick {
                longitude,
                point: ecliptic_point(longitude, scale, obliquity)?,
                major: deg % 30 == 0,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut pointers = Vec::new();
    let mut skipped = Vec::new();
    for star in catalog {
        match star_pointer(star, scale, obliquity) {
            Ok(point) => pointers.push(StarPointer {
                star: star.clone(),
                point,
            }),
            Err(e @ Error::OutsidePlate { .. }) => skipped.push(SkippedStar {
                name: star.name.clone(),
                reason: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }

    Ok(ReteModel {
        scale,
        obliquity,
        ecliptic,
        zodiac_ticks,
        pointers,
        skipped,
        boundary,
    })
}

#[derive(Debug, Deserialize)]
struct CatalogRow {
    name: String,
    ra_deg: f64,
    dec_deg: f64,
    mag: f64,
}

/// Reads a `name,ra_deg,dec_deg,mag` catalog; lines starting with `#` are
/// ignored.
pub fn read_star_catalog<R: Read>(reader: R) -> Result<Vec<StarEntry>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize::<CatalogRow>() {
        let row = row.map_err(csv_error)?;
        out.push(StarEntry::new(row.name, row.ra_deg, row.dec_deg, row.mag)?);
    }
    Ok(out)
}

pub fn load_star_catalog(path: &Path) -> Result<Vec<StarEntry>> {
    let file =
        std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_star_catalog(file)
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.kind() {
        csv::ErrorKind::Io(io) => Error::Io(io.to_string()),
        _ => Error::Parse {
            line,
            message: e.to_string(),
        },
    }
}
