//! The back of the instrument: altitude scale, sine quadrant, shadow square,
//! zodiac calendar, midday curves and qibla bearings.
//!
//! Azimuths are measured clockwise from true north. Curves drawn on the back
//! use a polar layout where altitude maps linearly to radius (limb = 0°,
//! centre = 90°) and declination maps to the polar angle across the upper
//! right quadrant.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Arc, PlanePoint, Segment};
use crate::projection::normalize_deg;
use crate::rete::csv_error;
use crate::DEFAULT_OBLIQUITY;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Locality {
    pub name: String,
    pub latitude: f64,
    /// East-positive longitude in `(-180, 180]`.
    pub longitude: f64,
}

impl Locality {
    pub fn new(name: impl Into<String>, latitude: f64, longitude: f64) -> Result<Self> {
        let name = name.into();
        if !(latitude.abs() <= 90.0) || !longitude.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "locality '{name}' has invalid coordinates"
            )));
        }
        let mut lon = longitude.rem_euclid(360.0);
        if lon > 180.0 {
            lon -= 360.0;
        }
        Ok(Locality {
            name,
            latitude,
            longitude: lon,
        })
    }

    pub fn mecca() -> Self {
        Locality {
            name: "Mecca".into(),
            latitude: 21.4225,
            longitude: 39.8262,
        }
    }

    fn unit_vector(&self) -> [f64; 3] {
        let (sp, cp) = self.latitude.to_radians().sin_cos();
        let (sl, cl) = self.longitude.to_radians().sin_cos();
        [cp * cl, cp * sl, sp]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SineQuadrant {
    pub radius: f64,
    pub divisions: usize,
    pub spacing: f64,
}

impl SineQuadrant {
    /// Grid lines in the upper-left quadrant of the back: verticals at
    /// `x = -k·spacing` and horizontals at `y = k·spacing`, each running to
    /// the quadrant's arc.
    pub fn grid_lines(&self) -> Vec<Segment> {
        let r = self.radius;
        let mut out = Vec::with_capacity(2 * self.divisions);
        for k in 1..=self.divisions {
            let d = self.spacing * k as f64;
            let reach = (r * r - d * d).max(0.0).sqrt();
            out.push(Segment::new(
                PlanePoint::new(-d, 0.0),
                PlanePoint::new(-d, reach),
            ));
            out.push(Segment::new(
                PlanePoint::new(0.0, d),
                PlanePoint::new(-reach, d),
            ));
        }
        out
    }
}

pub fn sine_quadrant(divisions: usize, radius: f64) -> Result<SineQuadrant> {
    if divisions == 0 {
        return Err(Error::InvalidConfig(
            "sine quadrant needs at least one division".into(),
        ));
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidConfig(
            "sine quadrant radius must be positive".into(),
        ));
    }
    Ok(SineQuadrant {
        radius,
        divisions,
        spacing: radius / divisions as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShadowMark {
    pub k: usize,
    /// Altitude read on the umbra recta side, `atan(digits / k)`.
    pub recta_altitude: f64,
    /// Altitude read on the umbra versa side, `atan(k / digits)`.
    pub versa_altitude: f64,
    pub recta_point: PlanePoint,
    pub versa_point: PlanePoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowSquare {
    pub side: f64,
    pub digits: usize,
    pub marks: Vec<ShadowMark>,
}

/// Shadow square in the lower-right quadrant with one corner at the centre.
/// The recta side is the bottom edge, the versa side the outer vertical edge.
pub fn shadow_square(side: f64, digits: usize) -> Result<ShadowSquare> {
    if digits == 0 {
        return Err(Error::InvalidConfig(
            "shadow square needs at least one digit".into(),
        ));
    }
    if !(side > 0.0) {
        return Err(Error::InvalidConfig(
            "shadow square side must be positive".into(),
        ));
    }
    let d = digits as f64;
    let marks = (1..=digits)
        .map(|k| {
            let f = k as f64 / d;
            ShadowMark {
                k,
                recta_altitude: (d / k as f64).atan().to_degrees(),
                versa_altitude: (k as f64 / d).atan().to_degrees(),
                recta_point: PlanePoint::new(side * f, -side),
                versa_point: PlanePoint::new(side, -side * f),
            }
        })
        .collect();
    Ok(ShadowSquare {
        side,
        digits,
        marks,
    })
}

/// Single-year solar model: mean anomaly from a perihelion day plus a
/// two-term equation of centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolarEpoch {
    /// Day of year (1.0 = 1 January 00:00 UT) at which the mean anomaly is zero.
    pub perihelion_day: f64,
    /// Mean solar longitude at the perihelion day, degrees.
    pub perihelion_longitude: f64,
    pub eccentricity_term: f64,
    pub second_term: f64,
}

impl Default for SolarEpoch {
    /// Fitted to the 2025 equinox and solstice instants.
    fn default() -> Self {
        SolarEpoch {
            perihelion_day: 3.4984,
            perihelion_longitude: 283.362,
            eccentricity_term: 1.915,
            second_term: 0.020,
        }
    }
}

pub const DAYS_PER_YEAR: usize = 365;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolarPosition {
    pub day_of_year: f64,
    pub longitude: f64,
    pub declination: f64,
}

pub fn solar_longitude_with(day: f64, epoch: &SolarEpoch) -> f64 {
    let m_deg = 360.0 / DAYS_PER_YEAR as f64 * (day - epoch.perihelion_day);
    let m = m_deg.to_radians();
    normalize_deg(
        m_deg
            + epoch.perihelion_longitude
            + epoch.eccentricity_term * m.sin()
            + epoch.second_term * (2.0 * m).sin(),
    )
}

/// Apparent solar longitude in degrees for a (possibly fractional) day.
pub fn solar_longitude(day: f64) -> f64 {
    solar_longitude_with(day, &SolarEpoch::default())
}

pub fn solar_declination(longitude: f64, obliquity: f64) -> f64 {
    (obliquity.to_radians().sin() * longitude.to_radians().sin())
        .clamp(-1.0, 1.0)
        .asin()
        .to_degrees()
}

pub fn solar_position(day: f64, epoch: &SolarEpoch, obliquity: f64) -> SolarPosition {
    let longitude = solar_longitude_with(day, epoch);
    SolarPosition {
        day_of_year: day,
        longitude,
        declination: solar_declination(longitude, obliquity),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalendarTick {
    pub day: usize,
    pub longitude: f64,
    /// Ring angle in degrees, clockwise from `+y`, in `[0, 360)`.
    pub angle: f64,
}

/// 365 day ticks placed at the sun's longitude on each day.
pub fn calendar_ring(epoch: &SolarEpoch) -> Vec<CalendarTick> {
    (1..=DAYS_PER_YEAR)
        .map(|day| {
            let longitude = solar_longitude_with(day as f64, epoch);
            CalendarTick {
                day,
                longitude,
                angle: longitude,
            }
        })
        .collect()
}

/// Tick angles unwrapped into a strictly increasing sequence starting at the
/// first tick.
pub fn unwrapped_angles(ticks: &[CalendarTick]) -> Vec<f64> {
    let mut out = Vec::with_capacity(ticks.len());
    let mut offset = 0.0;
    for (i, t) in ticks.iter().enumerate() {
        if i > 0 && t.angle + offset < out[i - 1] {
            offset += 360.0;
        }
        out.push(t.angle + offset);
    }
    out
}

/// Consecutive tick spacings around the full ring, including the gap from
/// the last tick back to the first.
pub fn calendar_spacings(ticks: &[CalendarTick]) -> Vec<f64> {
    let n = ticks.len();
    (0..n)
        .map(|i| (ticks[(i + 1) % n].angle - ticks[i].angle).rem_euclid(360.0))
        .collect()
}

/// Noon altitude of a body of declination `δ` at latitude `φ`.
pub fn midday_altitude(latitude: f64, declination: f64) -> f64 {
    90.0 - latitude + declination
}

/// Position on the back for altitude `h` and declination `δ`.
pub fn back_polar_point(
    altitude: f64,
    declination: f64,
    obliquity: f64,
    radius: f64,
) -> PlanePoint {
    let rho = radius * (1.0 - altitude / 90.0);
    let theta = 45.0 + 45.0 * declination / obliquity;
    PlanePoint::from_plate_polar(rho, theta.to_radians())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiddayCurve {
    pub latitude: f64,
    /// Altitudes at declinations `-ε`, `0`, `+ε`.
    pub altitudes: [f64; 3],
    pub points: [PlanePoint; 3],
    pub arc: Arc,
}

pub fn midday_curve(latitude: f64, obliquity: f64, radius: f64) -> Result<MiddayCurve> {
    if !(obliquity > 0.0) {
        return Err(Error::InvalidConfig("obliquity must be positive".into()));
    }
    let decs = [-obliquity, 0.0, obliquity];
    let altitudes = decs.map(|d| midday_altitude(latitude, d));
    if let Some(h) = altitudes.iter().find(|h| !(**h > 0.0 && **h <= 90.0)) {
        return Err(Error::domain(format!(
            "noon altitude {h:.4}° at latitude {latitude}° outside (0°, 90°]"
        )));
    }
    let points = [0, 1, 2].map(|i| back_polar_point(altitudes[i], decs[i], obliquity, radius));
    let arc = Arc::through(points[0], points[1], points[2])?;
    Ok(MiddayCurve {
        latitude,
        altitudes,
        points,
        arc,
    })
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

/// Initial great-circle bearing from `from` to `to`, clockwise from north.
pub fn bearing_oracle(from: &Locality, to: &Locality) -> Result<f64> {
    let a = from.unit_vector();
    let b = to.unit_vector();
    let c = cross(a, b);
    if dot(c, c).sqrt() < 1e-9 {
        return Err(Error::UndefinedBearing(format!(
            "'{}' and '{}' are coincident or antipodal",
            from.name, to.name
        )));
    }
    let (sp, cp) = from.latitude.to_radians().sin_cos();
    let (sl, cl) = from.longitude.to_radians().sin_cos();
    let north = [-sp * cl, -sp * sl, cp];
    let east = [-sl, cl, 0.0];
    Ok(normalize_deg(
        dot(b, east).atan2(dot(b, north)).to_degrees(),
    ))
}

/// The qibla relation `tan α = cos φ_M sin(λ_M − λ) / (cos φ_M sin φ − sin φ_M cos φ cos(λ_M − λ))`
/// evaluated with a two-argument arctangent.
pub fn qibla_printed_relation(obs: &Locality, mecca: &Locality) -> Result<f64> {
    let (sp, cp) = obs.latitude.to_radians().sin_cos();
    let (spm, cpm) = mecca.latitude.to_radians().sin_cos();
    let (sdl, cdl) = (mecca.longitude - obs.longitude).to_radians().sin_cos();
    let num = cpm * sdl;
    let den = cpm * sp - spm * cp * cdl;
    if num.abs() < 1e-15 && den.abs() < 1e-15 {
        return Err(Error::UndefinedBearing(format!(
            "qibla relation degenerate at '{}'",
            obs.name
        )));
    }
    Ok(normalize_deg(num.atan2(den).to_degrees()))
}

/// Declination of a body seen at altitude `h` and azimuth `A` from latitude `φ`.
pub fn declination_from_alt_az(latitude: f64, altitude: f64, azimuth: f64) -> f64 {
    let (sp, cp) = latitude.to_radians().sin_cos();
    let (sh, ch) = altitude.to_radians().sin_cos();
    let s = sp * sh + cp * ch * azimuth.to_radians().cos();
    let s = if s.abs() > 1.0 && s.abs() <= 1.0 + 1e-12 {
        s.signum()
    } else {
        s
    };
    s.asin().to_degrees()
}

/// Lowest altitude in `[0°, 90°]` at which a body of declination `δ` stands
/// at azimuth `A`.
pub fn solve_altitude_for_azimuth(latitude: f64, declination: f64, azimuth: f64) -> Result<f64> {
    let a = latitude.to_radians().sin();
    let b = latitude.to_radians().cos() * azimuth.to_radians().cos();
    let s = declination.to_radians().sin();
    let r = a.hypot(b);
    if r < 1e-15 || s.abs() > r * (1.0 + 1e-12) {
        return Err(Error::NoSolution);
    }
    let psi = b.atan2(a);
    let base = (s / r).clamp(-1.0, 1.0).asin();
    let tol = 1e-12;
    let quarter = std::f64::consts::FRAC_PI_2;
    let mut best: Option<f64> = None;
    for cand in [base - psi, std::f64::consts::PI - base - psi] {
        let h =
            (cand + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI;
        if h >= -tol && h <= quarter + tol {
            let h = h.clamp(0.0, quarter);
            best = Some(best.map_or(h, |b: f64| b.min(h)));
        }
    }
    best.map(f64::to_degrees).ok_or(Error::NoSolution)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QiblaMark {
    pub locality: Locality,
    /// Oracle bearing toward Mecca, clockwise from north.
    pub bearing: f64,
    /// The printed relation's value, for comparison.
    pub printed_relation: Option<f64>,
    /// Sun-altitude curve at the qibla azimuth across the year, when the sun
    /// reaches that azimuth above the horizon at all three control
    /// declinations.
    pub curve: Option<Arc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeTick {
    pub altitude: f64,
    pub angle: f64,
    pub major: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackConfig {
    /// Limb radius of the back face (mm).
    pub radius: f64,
    pub obliquity: f64,
    pub epoch: SolarEpoch,
    pub sine_divisions: usize,
    pub shadow_digits: usize,
    pub midday_latitudes: Vec<f64>,
    pub mecca: Locality,
}

impl BackConfig {
    pub fn new(radius: f64) -> Self {
        BackConfig {
            radius,
            obliquity: DEFAULT_OBLIQUITY,
            epoch: SolarEpoch::default(),
            sine_divisions: 60,
            shadow_digits: 12,
            midday_latitudes: vec![30.0, 35.0, 40.0],
            mecca: Locality::mecca(),
        }
    }

    pub fn curve_radius(&self) -> f64 {
        0.75 * self.radius
    }

    pub fn calendar_radii(&self) -> (f64, f64) {
        (0.80 * self.radius, 0.90 * self.radius)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackModel {
    pub radius: f64,
    pub degree_scale: Vec<DegreeTick>,
    pub sine_quadrant: SineQuadrant,
    pub shadow_square: ShadowSquare,
    pub calendar: Vec<CalendarTick>,
    pub calendar_radii: (f64, f64),
    pub midday_curves: Vec<MiddayCurve>,
    pub qibla_marks: Vec<QiblaMark>,
}

fn qibla_curve(loc: &Locality, bearing: f64, cfg: &BackConfig) -> Option<Arc> {
    let eps = cfg.obliquity;
    let pts: Vec<PlanePoint> = [-eps, 0.0, eps]
        .iter()
        .map(|&d| {
            let h = solve_altitude_for_azimuth(loc.latitude, d, bearing).ok()?;
            (h > 0.0).then(|| back_polar_point(h, d, eps, cfg.curve_radius()))
        })
        .collect::<Option<_>>()?;
    Arc::through(pts[0], pts[1], pts[2]).ok()
}

pub fn build_back(cfg: &BackConfig, localities: &[Locality]) -> Result<BackModel> {
    if !(cfg.radius > 0.0) {
        return Err(Error::InvalidConfig("back radius must be positive".into()));
    }
    if !(cfg.obliquity > 0.0 && cfg.obliquity < 30.0) {
        return Err(Error::InvalidConfig(format!(
            "obliquity {}° must lie in (0°, 30°)",
            cfg.obliquity
        )));
    }
    let mut degree_scale = Vec::with_capacity(182);
    for h in 0..=90 {
        let altitude = h as f64;
        let major = h % 10 == 0;
        degree_scale.push(DegreeTick {
            altitude,
            angle: 270.0 + altitude,
            major,
        });
        degree_scale.push(DegreeTick {
            altitude,
            angle: 90.0 - altitude,
            major,
        });
    }
    let midday_curves = cfg
        .midday_latitudes
        .iter()
        .map(|&lat| midday_curve(lat, cfg.obliquity, cfg.curve_radius()))
        .collect::<Result<_>>()?;
    let qibla_marks = localities
        .iter()
        .map(|loc| {
            let bearing = bearing_oracle(loc, &cfg.mecca)?;
            Ok(QiblaMark {
                locality: loc.clone(),
                bearing,
                printed_relation: qibla_printed_relation(loc, &cfg.mecca).ok(),
                curve: qibla_curve(loc, bearing, cfg),
            })
        })
        .collect::<Result<_>>()?;
    Ok(BackModel {
        radius: cfg.radius,
        degree_scale,
        sine_quadrant: sine_quadrant(cfg.sine_divisions, cfg.curve_radius())?,
        shadow_square: shadow_square(0.6 * cfg.radius, cfg.shadow_digits)?,
        calendar: calendar_ring(&cfg.epoch),
        calendar_radii: cfg.calendar_radii(),
        midday_curves,
        qibla_marks,
    })
}

#[derive(Debug, Deserialize)]
struct LocalityRow {
    name: String,
    lat_deg: f64,
    lon_deg: f64,
}

/// Reads a `name,lat_deg,lon_deg` localities file; `#` lines are ignored.
pub fn read_localities<R: Read>(reader: R) -> Result<Vec<Locality>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    rdr.deserialize::<LocalityRow>()
        .map(|row| {
            let row = row.map_err(csv_error)?;
            Locality::new(row.name, row.lat_deg, row.lon_deg)
        })
        .collect()
}

pub fn load_localities(path: &Path) -> Result<Vec<Locality>> {
    let file =
        std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_localities(file)
}
