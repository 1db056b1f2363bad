//! Tympan geometry for one latitude: tropics, horizon, almucantars, azimuth
//! circles and the unequal-hour lines, clipped to the Capricorn boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    circumcircle, clip_arc_to_disc, clip_circle_to_disc, divide_arc_equal, span_inside,
    span_outside, Arc, Circle, Clipped, DiscSpan, Orientation, PlanePoint, Segment,
};
use crate::DEFAULT_OBLIQUITY;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateConfig {
    /// Terrestrial latitude φ in degrees, `0 < φ < 90`.
    pub latitude: f64,
    /// Canonical scale `S`: projected radius of the celestial equator (mm).
    pub scale: f64,
    /// Obliquity of the ecliptic ε in degrees.
    pub obliquity: f64,
    pub almucantar_step: f64,
    pub azimuth_step: f64,
    pub hour_lines: bool,
}

impl PlateConfig {
    pub fn new(latitude: f64, scale: f64) -> Self {
        PlateConfig {
            latitude,
            scale,
            obliquity: DEFAULT_OBLIQUITY,
            almucantar_step: 5.0,
            azimuth_step: 10.0,
            hour_lines: true,
        }
    }

    /// Scale such that the Capricorn circle has diameter `diameter`.
    pub fn scale_for_diameter(diameter: f64, obliquity: f64) -> f64 {
        0.5 * diameter / (45.0 + 0.5 * obliquity).to_radians().tan()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.latitude > 0.0 && self.latitude < 90.0) {
            return bad(format!("latitude {}° must lie in (0°, 90°)", self.latitude));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return bad(format!("scale {} mm must be positive", self.scale));
        }
        if !(self.obliquity > 0.0 && self.obliquity < 30.0) {
            return bad(format!(
                "obliquity {}° must lie in (0°, 30°)",
                self.obliquity
            ));
        }
        if !divides(self.almucantar_step, 90.0) {
            return bad(format!(
                "almucantar step {}° must divide 90°",
                self.almucantar_step
            ));
        }
        if !divides(self.azimuth_step, 360.0) {
            return bad(format!(
                "azimuth step {}° must divide 360°",
                self.azimuth_step
            ));
        }
        Ok(())
    }
}

fn divides(step: f64, total: f64) -> bool {
    if !(step > 0.0 && step <= total) {
        return false;
    }
    let q = total / step;
    (q - q.round()).abs() < 1e-9
}

/// Meridian crossings of a projected circle centred on the meridian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeridianSolution {
    pub y_upper: f64,
    pub y_lower: f64,
    pub y_center: f64,
    pub radius: f64,
}

impl MeridianSolution {
    pub fn from_crossings(y_upper: f64, y_lower: f64) -> Result<Self> {
        let radius = 0.5 * (y_upper - y_lower);
        if !(radius > 0.0) {
            return Err(Error::domain("meridian crossings do not bound a circle"));
        }
        Ok(MeridianSolution {
            y_upper,
            y_lower,
            y_center: 0.5 * (y_upper + y_lower),
            radius,
        })
    }

    pub fn circle(&self) -> Circle {
        Circle {
            center: PlanePoint::new(0.0, self.y_center),
            radius: self.radius,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tropics {
    pub capricorn: Circle,
    pub equator: Circle,
    pub cancer: Circle,
}

/// Radius of the projected parallel of declination `dec` (degrees).
pub fn parallel_radius(dec: f64, scale: f64) -> f64 {
    scale * (45.0 - 0.5 * dec).to_radians().tan()
}

/// The three concentric tropic circles for scale `S` and obliquity `ε`.
/// Accepts `ε = 0`, where all three coincide with the equator.
pub fn tropic_circles_for(scale: f64, obliquity: f64) -> Result<Tropics> {
    Ok(Tropics {
        capricorn: Circle::centered(parallel_radius(-obliquity, scale))?,
        equator: Circle::centered(scale)?,
        cancer: Circle::centered(parallel_radius(obliquity, scale))?,
    })
}

pub fn tropic_circles(cfg: &PlateConfig) -> Result<Tropics> {
    tropic_circles_for(cfg.scale, cfg.obliquity)
}

/// Centre and radius of the almucantar of altitude `h` at latitude `φ`.
pub fn almucantar_solution(latitude: f64, altitude: f64, scale: f64) -> Result<MeridianSolution> {
    if altitude >= 90.0 {
        return Err(Error::domain("the 90° almucantar is the zenith point"));
    }
    if altitude < 0.0 {
        return Err(Error::domain(format!(
            "almucantar altitude {altitude}° is below the horizon"
        )));
    }
    if latitude + altitude <= 0.0 {
        return Err(Error::domain("latitude + altitude must be positive"));
    }
    let upper = scale / (0.5 * (latitude + altitude)).to_radians().tan();
    let lower = -scale * (0.5 * (latitude - altitude)).to_radians().tan();
    MeridianSolution::from_crossings(upper, lower)
}

pub fn zenith_point(latitude: f64, scale: f64) -> PlanePoint {
    PlanePoint::new(0.0, parallel_radius(latitude, scale))
}

pub fn nadir_point(latitude: f64, scale: f64) -> PlanePoint {
    PlanePoint::new(0.0, -scale * (45.0 + 0.5 * latitude).to_radians().tan())
}

pub fn horizon_circle(latitude: f64, scale: f64) -> Result<Circle> {
    Ok(almucantar_solution(latitude, 0.0, scale)?.circle())
}

/// Projected vertical circle whose azimuth differs by `offset` degrees from
/// the prime vertical. All such circles pass through the projected zenith
/// and nadir; an offset of ±90° is the meridian, which images as a line.
pub fn azimuth_circle(latitude: f64, offset: f64, scale: f64) -> Result<Circle> {
    if !(latitude > 0.0 && latitude < 90.0) {
        return Err(Error::domain(format!(
            "latitude {latitude}° outside (0°, 90°)"
        )));
    }
    let a = offset.to_radians();
    if a.cos().abs() < 1e-12 {
        return Err(Error::domain(
            "the north-south vertical circle images as the meridian line",
        ));
    }
    let y_z = zenith_point(latitude, scale).y;
    let y_n = nadir_point(latitude, scale).y;
    let y_c = 0.5 * (y_z + y_n);
    // half the zenith–nadir distance; the printed (Y₁ + Y₂)/2 would be the centre ordinate
    let p_c = 0.5 * (y_z - y_n);
    Circle::new(PlanePoint::new(p_c * a.tan(), y_c), (p_c / a.cos()).abs())
}

/// A drawable plate element after clipping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Trace {
    Circle(Circle),
    Arcs(Vec<Arc>),
    Segment(Segment),
    Marker(PlanePoint),
}

impl Trace {
    fn from_clipped(c: Clipped) -> Self {
        match c {
            Clipped::Circle(c) => Trace::Circle(c),
            Clipped::Arcs(a) => Trace::Arcs(a),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Trace::Arcs(a) if a.is_empty())
    }

    /// Endpoints of every open piece (arcs and segments).
    pub fn endpoints(&self) -> Vec<PlanePoint> {
        match self {
            Trace::Arcs(arcs) => arcs
                .iter()
                .flat_map(|a| [a.start_point(), a.end_point()])
                .collect(),
            Trace::Segment(s) => vec![s.a, s.b],
            _ => Vec::new(),
        }
    }

    /// Sample points along the trace, used for containment checks.
    pub fn sample(&self, per_piece: usize) -> Vec<PlanePoint> {
        let n = per_piece.max(2);
        match self {
            Trace::Circle(c) => (0..n)
                .map(|i| c.point_at(std::f64::consts::TAU * i as f64 / n as f64))
                .collect(),
            Trace::Arcs(arcs) => arcs
                .iter()
                .flat_map(|a| (0..=n).map(move |i| a.point_at_fraction(i as f64 / n as f64)))
                .collect(),
            Trace::Segment(s) => (0..=n)
                .map(|i| {
                    let t = i as f64 / n as f64;
                    PlanePoint::new(s.a.x + t * (s.b.x - s.a.x), s.a.y + t * (s.b.y - s.a.y))
                })
                .collect(),
            Trace::Marker(p) => vec![*p],
        }
    }

    pub fn mirrored_x(&self) -> Trace {
        match self {
            Trace::Circle(c) => Trace::Circle(c.mirrored_x()),
            Trace::Arcs(a) => Trace::Arcs(a.iter().map(Arc::mirrored_x).collect()),
            Trace::Segment(s) => Trace::Segment(s.mirrored_x()),
            Trace::Marker(p) => Trace::Marker(p.mirrored_x()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Almucantar {
    pub altitude: f64,
    pub trace: Trace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Azimuth {
    /// Offset from the prime vertical in degrees.
    pub offset: f64,
    pub trace: Trace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourLine {
    /// Hour boundary index, 1..=11.
    pub index: usize,
    /// Division points on Cancer, the equator and Capricorn.
    pub points: [PlanePoint; 3],
    pub trace: Trace,
    /// Set when the three points were collinear and a straight segment was
    /// emitted instead of an arc.
    pub straight_fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateModel {
    pub config: PlateConfig,
    pub tropics: Tropics,
    pub horizon: Trace,
    pub almucantars: Vec<Almucantar>,
    pub azimuths: Vec<Azimuth>,
    pub hour_lines: Vec<HourLine>,
    pub boundary: Circle,
}

/// Below-horizon arc of a circle centred on the plate, travelled clockwise
/// on the plate (increasing hour angle) from the western horizon crossing.
pub fn night_arc(circle: &Circle, horizon: &Circle) -> Option<Arc> {
    match span_outside(circle, horizon) {
        DiscSpan::Interval { start, sweep } => {
            Arc::new(*circle, start + sweep, start, Orientation::Cw).ok()
        }
        _ => None,
    }
}

/// Twelve-fold division points of each tropic's night arc, in
/// `[cancer, equator, capricorn]` order.
pub fn night_divisions(cfg: &PlateConfig) -> Result<[Vec<PlanePoint>; 3]> {
    if cfg.latitude >= 90.0 - cfg.obliquity {
        return Err(Error::ArcticLatitude {
            latitude: cfg.latitude,
            obliquity: cfg.obliquity,
        });
    }
    let t = tropic_circles(cfg)?;
    let horizon = horizon_circle(cfg.latitude, cfg.scale)?;
    let divide = |c: &Circle| -> Result<Vec<PlanePoint>> {
        let arc = night_arc(c, &horizon).ok_or(Error::ArcticLatitude {
            latitude: cfg.latitude,
            obliquity: cfg.obliquity,
        })?;
        divide_arc_equal(&arc, 12)
    };
    Ok([
        divide(&t.cancer)?,
        divide(&t.equator)?,
        divide(&t.capricorn)?,
    ])
}

/// Unequal-hour boundaries `k = 1..=11`: three-point arcs through the k-th
/// night divisions of Cancer, the equator and Capricorn.
pub fn hour_lines(cfg: &PlateConfig) -> Result<Vec<HourLine>> {
    let [cancer, equator, capricorn] = night_divisions(cfg)?;
    (1..12)
        .map(|k| {
            let pts = [cancer[k], equator[k], capricorn[k]];
            match circumcircle(pts[0], pts[1], pts[2]) {
                Ok(_) => Ok(HourLine {
                    index: k,
                    points: pts,
                    trace: Trace::Arcs(vec![Arc::through(pts[0], pts[1], pts[2])?]),
                    straight_fallback: false,
                }),
                Err(Error::CollinearPoints) => Ok(HourLine {
                    index: k,
                    points: pts,
                    trace: Trace::Segment(Segment::new(pts[0], pts[2])),
                    straight_fallback: true,
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Builds the complete plate for a configuration.
pub fn build_plate(cfg: &PlateConfig) -> Result<PlateModel> {
    cfg.validate()?;
    let (lat, s) = (cfg.latitude, cfg.scale);
    let tropics = tropic_circles(cfg)?;
    let boundary = tropics.capricorn;
    let horizon_c = horizon_circle(lat, s)?;
    let horizon = Trace::from_clipped(clip_circle_to_disc(&horizon_c, &boundary)?);

    let steps = (90.0 / cfg.almucantar_step).round() as usize;
    let mut almucantars = Vec::with_capacity(steps + 1);
    for i in 0..steps {
        let h = cfg.almucantar_step * i as f64;
        let c = almucantar_solution(lat, h, s)?.circle();
        let trace = Trace::from_clipped(clip_circle_to_disc(&c, &boundary)?);
        if !trace.is_empty() {
            almucantars.push(Almucantar { altitude: h, trace });
        }
    }
    almucantars.push(Almucantar {
        altitude: 90.0,
        trace: Trace::Marker(zenith_point(lat, s)),
    });

    let count = (180.0 / cfg.azimuth_step).ceil() as usize;
    let mut azimuths = Vec::with_capacity(count);
    for i in 0..count {
        let a = cfg.azimuth_step * i as f64;
        if a >= 180.0 {
            break;
        }
        let trace = if (a - 90.0).abs() < 1e-9 {
            meridian_trace(lat, s, &boundary)
        } else {
            let c = azimuth_circle(lat, a, s)?;
            let above = match span_inside(&c, &horizon_c) {
                DiscSpan::Interval { start, sweep } => Arc::ccw_span(c, start, sweep)?,
                _ => {
                    return Err(Error::domain(format!(
                        "azimuth circle {a}° does not cross the horizon"
                    )))
                }
            };
            Trace::Arcs(clip_arc_to_disc(&above, &boundary)?)
        };
        if !trace.is_empty() {
            azimuths.push(Azimuth { offset: a, trace });
        }
    }

    let hour_lines = if cfg.hour_lines {
        hour_lines(cfg)?
    } else {
        Vec::new()
    };

    Ok(PlateModel {
        config: *cfg,
        tropics,
        horizon,
        almucantars,
        azimuths,
        hour_lines,
        boundary,
    })
}

fn meridian_trace(lat: f64, s: f64, boundary: &Circle) -> Trace {
    let h0 = almucantar_solution(lat, 0.0, s).expect("horizon exists for 0 < φ < 90");
    let top = h0.y_upper.min(boundary.radius);
    let bottom = h0.y_lower.max(-boundary.radius);
    Trace::Segment(Segment::new(
        PlanePoint::new(0.0, bottom),
        PlanePoint::new(0.0, top),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::chord_length;
    use crate::projection::{project_point, SpherePoint};
    use approx::assert_abs_diff_eq;

    #[test]
    fn tropic_ratios() {
        let t = tropic_circles_for(100.0, 23.5).unwrap();
        assert!((t.capricorn.radius - 152.6).abs() < 0.1);
        assert!((t.cancer.radius - 65.6).abs() < 0.1);
        assert!((t.capricorn.radius / 100.0 - 1.53).abs() <= 0.01);
        assert!((t.cancer.radius / 100.0 - 0.66).abs() <= 0.01);
        assert!(((t.capricorn.radius - t.equator.radius) / 100.0 - 0.53).abs() <= 0.01);
        assert!(((t.capricorn.radius - t.cancer.radius) / 100.0 - 0.87).abs() <= 0.01);
        let flat = tropic_circles_for(100.0, 0.0).unwrap();
        assert_abs_diff_eq!(flat.capricorn.radius, 100.0, epsilon = 1e-12);
        assert_abs_diff_eq!(flat.cancer.radius, 100.0, epsilon = 1e-12);
    }

    #[test]
    fn horizon_example() {
        let m = almucantar_solution(40.0, 0.0, 100.0).unwrap();
        assert_abs_diff_eq!(m.y_center, 119.175, epsilon = 5e-4);
        assert_abs_diff_eq!(m.radius, 155.572, epsilon = 5e-4);
        let phi = 40f64.to_radians();
        assert!((m.radius - 100.0 / phi.sin()).abs() < 1e-12 * m.radius);
        assert!((m.y_center - 100.0 / phi.tan()).abs() < 1e-12 * m.radius);
    }

    #[test]
    fn almucantar_shrinks_to_the_zenith() {
        assert!(almucantar_solution(40.0, 90.0, 100.0).is_err());
        let m = almucantar_solution(40.0, 89.9999, 100.0).unwrap();
        assert!(m.radius < 1e-3);
        assert_abs_diff_eq!(m.y_center, 46.631, epsilon = 1e-3);
        assert_abs_diff_eq!(zenith_point(40.0, 100.0).y, 46.631, epsilon = 5e-4);
    }

    #[test]
    fn almucantar_meridian_crossings_match_pointwise_projection() {
        for &(lat, h) in &[
            (40.0, 0.0),
            (40.0, 30.0),
            (12.0, 55.0),
            (65.0, 10.0),
            (33.0, 80.0),
        ] {
            let m = almucantar_solution(lat, h, 100.0).unwrap();
            // crossing toward the upper meridian (H = 0) and over the pole (H = 180)
            let up = project_point(&SpherePoint::new(lat + h - 90.0, 0.0).unwrap(), 100.0).unwrap();
            let north_ha = if h < lat { 180.0 } else { 0.0 };
            let down = project_point(
                &SpherePoint::new(90.0 - (lat - h).abs(), north_ha).unwrap(),
                100.0,
            )
            .unwrap();
            assert_abs_diff_eq!(up.y, m.y_upper, epsilon = 1e-9);
            assert_abs_diff_eq!(down.y, m.y_lower, epsilon = 1e-9);
            let c = m.circle();
            assert!(c.distance_to(&up) < 1e-9 && c.distance_to(&down) < 1e-9);
        }
    }

    #[test]
    fn azimuth_examples() {
        let z = zenith_point(40.0, 100.0);
        let n = nadir_point(40.0, 100.0);
        assert_abs_diff_eq!(n.y, -214.451, epsilon = 5e-4);
        let c0 = azimuth_circle(40.0, 0.0, 100.0).unwrap();
        assert_abs_diff_eq!(c0.center.x, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c0.center.y, -83.910, epsilon = 5e-4);
        assert_abs_diff_eq!(c0.radius, 130.541, epsilon = 5e-4);
        let c30 = azimuth_circle(40.0, 30.0, 100.0).unwrap();
        assert_abs_diff_eq!(c30.center.x, 75.368, epsilon = 5e-4);
        assert_abs_diff_eq!(c30.center.y, -83.910, epsilon = 5e-4);
        assert_abs_diff_eq!(c30.radius, 150.736, epsilon = 1e-3);
        for c in [c0, c30] {
            assert!(c.distance_to(&z) < 1e-9);
            assert!(c.distance_to(&n) < 1e-9);
        }
        let c330 = azimuth_circle(40.0, -30.0, 100.0).unwrap();
        assert_abs_diff_eq!(c330.center.x, -75.368, epsilon = 5e-4);
        assert!(azimuth_circle(40.0, 90.0, 100.0).is_err());
        assert!(azimuth_circle(40.0, 270.0, 100.0).is_err());
    }

    #[test]
    fn only_prime_vertical_is_centred_on_meridian() {
        for lat in [10.0, 40.0, 70.0] {
            for a in (0..180).step_by(5).filter(|a| *a != 90) {
                let c = azimuth_circle(lat, a as f64, 100.0).unwrap();
                assert_eq!(c.center.x.abs() < 1e-9, a == 0, "lat {lat} a {a}");
            }
        }
    }

    #[test]
    fn hour_lines_construction() {
        let cfg = PlateConfig::new(40.0, 100.0);
        let lines = hour_lines(&cfg).unwrap();
        assert_eq!(lines.len(), 11);
        for line in &lines {
            match &line.trace {
                Trace::Arcs(arcs) => {
                    for p in &line.points {
                        assert!(arcs[0].circle.distance_to(p) < 1e-9);
                    }
                    assert!(!line.straight_fallback);
                }
                Trace::Segment(_) => {
                    assert_eq!(line.index, 6);
                    assert!(line.straight_fallback);
                }
                other => panic!("unexpected trace {other:?}"),
            }
        }
        let six = &lines[5];
        for p in &six.points {
            assert!(p.x.abs() < 1e-9 && p.y < 0.0);
        }
    }

    #[test]
    fn equator_night_divisions_have_equal_chords() {
        let cfg = PlateConfig::new(40.0, 100.0);
        let [_, equator, _] = night_divisions(&cfg).unwrap();
        assert_eq!(equator.len(), 13);
        let eq = Circle::centered(100.0).unwrap();
        let chords: Vec<f64> = equator
            .windows(2)
            .map(|w| chord_length(&eq, eq.angle_of(&w[0]), eq.angle_of(&w[1])))
            .collect();
        let direct: Vec<f64> = equator.windows(2).map(|w| w[0].distance(&w[1])).collect();
        for (c, d) in chords.iter().zip(&direct) {
            assert!((c - chords[0]).abs() < 1e-9);
            assert!((c - d).abs() < 1e-9);
        }
        // the division starts and ends on the horizon
        let horizon = horizon_circle(40.0, 100.0).unwrap();
        assert!(horizon.distance_to(&equator[0]) < 1e-9);
        assert!(horizon.distance_to(&equator[12]) < 1e-9);
        assert!(equator[0].x > 0.0);
    }

    #[test]
    fn arctic_latitude_rejected() {
        let mut cfg = PlateConfig::new(70.0, 100.0);
        assert!(matches!(
            hour_lines(&cfg),
            Err(Error::ArcticLatitude { .. })
        ));
        assert!(matches!(
            build_plate(&cfg),
            Err(Error::ArcticLatitude { .. })
        ));
        cfg.hour_lines = false;
        assert!(build_plate(&cfg).is_ok());
    }

    #[test]
    fn config_validation() {
        let mut cfg = PlateConfig::new(40.0, 100.0);
        cfg.almucantar_step = 7.0;
        assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));
        cfg.almucantar_step = 3.0;
        cfg.azimuth_step = 7.0;
        assert!(cfg.validate().is_err());
        cfg.azimuth_step = 15.0;
        assert!(cfg.validate().is_ok());
        assert!(PlateConfig::new(0.0, 100.0).validate().is_err());
        assert!(PlateConfig {
            obliquity: 31.0,
            ..PlateConfig::new(40.0, 100.0)
        }
        .validate()
        .is_err());
    }

    #[test]
    fn build_plate_counts_and_order() {
        let cfg = PlateConfig {
            almucantar_step: 10.0,
            ..PlateConfig::new(40.0, 100.0)
        };
        let plate = build_plate(&cfg).unwrap();
        assert_eq!(plate.almucantars.len(), 10);
        let hs: Vec<f64> = plate.almucantars.iter().map(|a| a.altitude).collect();
        assert_eq!(hs, (0..10).map(|i| 10.0 * i as f64).collect::<Vec<_>>());
        assert!(matches!(plate.almucantars[9].trace, Trace::Marker(_)));
        assert_eq!(plate.azimuths.len(), 18);
        assert!(matches!(plate.azimuths[9].trace, Trace::Segment(_)));
        assert!(plate.azimuths.windows(2).all(|w| w[0].offset < w[1].offset));
        assert_eq!(plate.hour_lines.len(), 11);
    }

    #[test]
    fn almucantars_nest() {
        for lat in (1..=8).map(|i| 10.0 * i as f64) {
            let hs: Vec<f64> = (0..18).map(|i| 5.0 * i as f64).collect();
            for w in hs.windows(2) {
                let c1 = almucantar_solution(lat, w[0], 100.0).unwrap().circle();
                let c2 = almucantar_solution(lat, w[1], 100.0).unwrap().circle();
                assert!(c1.center.distance(&c2.center) + c2.radius < c1.radius + 1e-9);
            }
        }
    }

    #[test]
    fn every_element_inside_boundary_and_azimuths_end_on_horizon_or_limb() {
        for lat in [15.0, 40.0, 60.0] {
            let plate = build_plate(&PlateConfig::new(lat, 100.0)).unwrap();
            let b = plate.boundary;
            let mut traces: Vec<&Trace> = vec![&plate.horizon];
            traces.extend(plate.almucantars.iter().map(|a| &a.trace));
            traces.extend(plate.azimuths.iter().map(|a| &a.trace));
            traces.extend(plate.hour_lines.iter().map(|a| &a.trace));
            for t in traces {
                for p in t.sample(64) {
                    assert!(p.norm() <= b.radius + 1e-6, "lat {lat}: {p:?} outside");
                }
            }
            let horizon = horizon_circle(lat, 100.0).unwrap();
            let mut on_horizon = 0;
            for az in &plate.azimuths {
                for p in az.trace.endpoints() {
                    let h = horizon.distance_to(&p) < 1e-6;
                    let l = b.distance_to(&p) < 1e-6;
                    assert!(h || l, "lat {lat} A {}: endpoint {p:?}", az.offset);
                    on_horizon += h as usize;
                }
            }
            assert!(on_horizon > 0);
        }
    }
}
