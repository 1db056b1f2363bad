//! Quantitative error analysis: alidade offsets, arc displacement, adjacent
//! band misassignment, quadrant chord diagnosis and Monte Carlo propagation
//! of engraving errors into plate readouts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{Circle, PlanePoint};
use crate::plate::{
    almucantar_solution, hour_lines, night_divisions, parallel_radius, zenith_point, PlateConfig,
    Trace,
};
use crate::projection::{project_point, SpherePoint};

/// Pointer-line offset error `d₁ = ℓ·δ/4` for an alidade of length `ℓ`
/// whose pointer line is off by `δ` radians.
pub fn alidade_offset_error(length: f64, offset: f64) -> Result<f64> {
    if !(length > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "alidade length {length} must be positive"
        )));
    }
    Ok(length * offset / 4.0)
}

/// Rotation-axis error `d₂ = ε/4`, returned in the unit of its input.
pub fn alidade_rotation_error(offset: f64) -> Result<f64> {
    if !(offset >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "rotation-axis offset {offset} must be non-negative"
        )));
    }
    Ok(offset / 4.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlidadeSpec {
    pub length: f64,
    /// Pointer-line offset in radians.
    pub pointer_offset: f64,
    pub rotation_offset: f64,
    /// Sight-axis error in radians.
    pub sight_error: f64,
}

impl AlidadeSpec {
    pub fn offset_error(&self) -> Result<f64> {
        alidade_offset_error(self.length, self.pointer_offset)
    }

    pub fn rotation_error(&self) -> Result<f64> {
        alidade_rotation_error(self.rotation_offset)
    }
}

/// Acceptance rule for the sight axis: the altitude of one target read
/// through either end of the alidade must agree.
pub fn sight_axis_consistent(reading_a: f64, reading_b: f64, tolerance: f64) -> bool {
    (reading_a - reading_b).abs() <= tolerance
}

/// Total displacement of an arc from a tangential shift `ds` and a radius
/// error `dp`.
pub fn arc_displacement(ds: f64, dp: f64) -> f64 {
    ds.hypot(dp)
}

/// Arc displacement with the tangential shift expressed as an angle `dα`
/// on an arc of radius `p`.
pub fn arc_displacement_angular(radius: f64, d_alpha: f64, dp: f64) -> f64 {
    arc_displacement(radius * d_alpha, dp)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandReport {
    /// Meridian spacing between almucantar `h` and the next one up (mm).
    pub spacing: f64,
    /// Shift of the lower meridian crossing caused by the radius error (mm).
    pub displacement: f64,
    /// Altitude whose true almucantar passes through the shifted crossing.
    pub implied_altitude: f64,
    /// Grid almucantar band in which the shifted crossing falls.
    pub lands_on_band: f64,
}

/// Effect of drawing almucantar `h` with its radius short by the fraction
/// `f`: the lower meridian crossing moves toward the zenith by `f·p`, and
/// the report says which band of the `cfg.almucantar_step` grid it lands in.
pub fn band_misassignment(
    cfg: &PlateConfig,
    altitude: f64,
    radius_error_fraction: f64,
) -> Result<BandReport> {
    cfg.validate()?;
    let step = cfg.almucantar_step;
    let s = cfg.scale;
    let own = almucantar_solution(cfg.latitude, altitude, s)?;
    let next = almucantar_solution(cfg.latitude, altitude + step, s)?;
    let spacing = (next.y_lower - own.y_lower).abs();
    let displacement = radius_error_fraction * own.radius;
    let y = own.y_lower + displacement;
    let implied_altitude = cfg.latitude - 2.0 * (-y / s).atan().to_degrees();
    let bands = ((implied_altitude - altitude) / step + 1e-9).floor();
    Ok(BandReport {
        spacing,
        displacement: displacement.abs(),
        implied_altitude,
        lands_on_band: altitude + step * bands,
    })
}

/// Latitude at which the horizon of a plate with scale `S` has radius `p₀`.
pub fn latitude_for_horizon_radius(scale: f64, horizon_radius: f64) -> Result<f64> {
    if !(horizon_radius > scale && scale > 0.0) {
        return Err(Error::domain("the horizon radius must exceed the scale"));
    }
    Ok((scale / horizon_radius).asin().to_degrees())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Ok,
    NonHorizontalAxis,
    EccentricGraduation,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChordDiagnosis {
    pub points: [PlanePoint; 4],
    pub chords: [f64; 4],
    pub classification: Classification,
}

/// Position of a graduation mark: where the ray from the rotation centre
/// (the origin) at plate angle `angle` meets the graduation circle.
pub fn mark_on_circle(circle: &Circle, angle: f64) -> Result<PlanePoint> {
    if circle.center.norm() >= circle.radius {
        return Err(Error::domain(
            "rotation centre lies outside the graduation circle",
        ));
    }
    let u = PlanePoint::from_plate_polar(1.0, angle.to_radians());
    let uc = u.x * circle.center.x + u.y * circle.center.y;
    let t = uc + (uc * uc - circle.center.norm().powi(2) + circle.radius * circle.radius).sqrt();
    Ok(PlanePoint::new(t * u.x, t * u.y))
}

/// Compares the four chords between consecutive quadrant marks.
pub fn quadrant_chord_diagnosis(
    circle: &Circle,
    marks: [f64; 4],
    tolerance: f64,
) -> Result<ChordDiagnosis> {
    let mut points = [PlanePoint::ORIGIN; 4];
    for (p, m) in points.iter_mut().zip(marks) {
        *p = mark_on_circle(circle, m)?;
    }
    let chords = [0, 1, 2, 3].map(|i| points[i].distance(&points[(i + 1) % 4]));
    let eq = |a: usize, b: usize| (chords[a] - chords[b]).abs() <= tolerance;
    let all_equal = eq(0, 1) && eq(1, 2) && eq(2, 3);
    let opposite_equal = eq(0, 2) && eq(1, 3);
    let all_distinct = (0..4).all(|i| (i + 1..4).all(|j| !eq(i, j)));
    let classification = if all_equal {
        Classification::Ok
    } else if opposite_equal && !eq(0, 1) {
        Classification::NonHorizontalAxis
    } else if all_distinct {
        Classification::EccentricGraduation
    } else {
        Classification::Mixed
    };
    Ok(ChordDiagnosis {
        points,
        chords,
        classification,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    /// Standard deviation of each centre coordinate (mm).
    pub center_sigma: f64,
    /// Standard deviation of each radius (mm).
    pub radius_sigma: f64,
    /// Standard deviation of the altitude read on the back's scale (degrees).
    pub graduation_sigma: f64,
    pub seed: u64,
}

impl PerturbationSpec {
    pub fn zero(seed: u64) -> Self {
        PerturbationSpec {
            center_sigma: 0.0,
            radius_sigma: 0.0,
            graduation_sigma: 0.0,
            seed,
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        PerturbationSpec {
            center_sigma: self.center_sigma * k,
            radius_sigma: self.radius_sigma * k,
            graduation_sigma: self.graduation_sigma * k,
            seed: self.seed,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = |v: f64| v >= 0.0 && v.is_finite();
        if ok(self.center_sigma) && ok(self.radius_sigma) && ok(self.graduation_sigma) {
            Ok(())
        } else {
            Err(Error::InvalidConfig(
                "perturbation sigmas must be finite and non-negative".into(),
            ))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Scenario {
    /// Observe the sun's altitude, place it on its day circle using the
    /// almucantars, and read the seasonal hours remaining until sunset from
    /// the hour lines at the sun's nadir. Readout unit: seasonal hours.
    TimeToSunset { sun_dec: f64, hour_angle: f64 },
    /// Read the altitude of a body at a known plate position from the
    /// almucantar grid. Readout unit: degrees.
    AltitudeReading { dec: f64, hour_angle: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub max_abs: f64,
    pub n_trials: usize,
    pub classification: Option<Classification>,
}

impl ErrorReport {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidConfig("need at least one trial".into()));
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let max_abs = samples.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        Ok(ErrorReport {
            mean,
            std: var.sqrt(),
            max_abs,
            n_trials: samples.len(),
            classification: None,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("stat,value\n");
        out.push_str(&format!(
            "mean,{:e}\nstd,{:e}\nmax_abs,{:e}\nn_trials,{}\n",
            self.mean, self.std, self.max_abs, self.n_trials
        ));
        if let Some(c) = self.classification {
            out.push_str(&format!("classification,{}\n", classification_name(c)));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:<10} {:>16}\n{:<10} {:>16.9}\n{:<10} {:>16.9}\n{:<10} {:>16.9}\n{:<10} {:>16}\n",
            "stat",
            "value",
            "mean",
            self.mean,
            "std",
            self.std,
            "max_abs",
            self.max_abs,
            "n_trials",
            self.n_trials
        );
        if let Some(c) = self.classification {
            out.push_str(&format!("{:<10} {:>16}\n", "class", classification_name(c)));
        }
        out
    }
}

pub fn classification_name(c: Classification) -> &'static str {
    match c {
        Classification::Ok => "ok",
        Classification::NonHorizontalAxis => "non_horizontal_axis",
        Classification::EccentricGraduation => "eccentric_graduation",
        Classification::Mixed => "mixed",
    }
}

/// Fraction of samples whose magnitude is at least `threshold`.
pub fn fraction_at_least(samples: &[f64], threshold: f64) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().filter(|x| x.abs() >= threshold).count() as f64 / samples.len() as f64
}

#[derive(Debug, Clone, Copy)]
enum HourElement {
    Circle { circle: Circle, sign: f64 },
    Meridian { x: f64 },
}

impl HourElement {
    fn level(&self, p: &PlanePoint) -> f64 {
        match self {
            HourElement::Circle { circle, sign } => {
                sign * (p.distance(&circle.center) - circle.radius)
            }
            HourElement::Meridian { x } => x - p.x,
        }
    }
}

/// The readout-relevant elements of a plate.
#[derive(Debug, Clone)]
struct ReadoutPlate {
    step: f64,
    almucantars: Vec<Circle>,
    zenith: PlanePoint,
    hours: Vec<HourElement>,
}

impl ReadoutPlate {
    fn build(cfg: &PlateConfig, with_hours: bool) -> Result<Self> {
        let step = cfg.almucantar_step;
        let count = (90.0 / step).round() as usize;
        let almucantars = (0..count)
            .map(|i| Ok(almucantar_solution(cfg.latitude, step * i as f64, cfg.scale)?.circle()))
            .collect::<Result<Vec<_>>>()?;
        let mut hours = Vec::new();
        if with_hours {
            let [_, equator, _] = night_divisions(cfg)?;
            for line in hour_lines(cfg)? {
                let reference = equator[line.index - 1];
                hours.push(match &line.trace {
                    Trace::Arcs(arcs) => {
                        let circle = arcs[0].circle;
                        let sign = -(reference.distance(&circle.center) - circle.radius).signum();
                        HourElement::Circle { circle, sign }
                    }
                    _ => HourElement::Meridian { x: 0.0 },
                });
            }
        }
        Ok(ReadoutPlate {
            step,
            almucantars,
            zenith: zenith_point(cfg.latitude, cfg.scale),
            hours,
        })
    }

    fn perturbed(&self, pert: &PerturbationSpec, rng: &mut ChaCha8Rng) -> Self {
        let mut normal = |sigma: f64| sigma * rng.sample::<f64, _>(StandardNormal);
        let mut jitter = |c: &Circle| {
            let dx = normal(pert.center_sigma);
            let dy = normal(pert.center_sigma);
            let dr = normal(pert.radius_sigma);
            Circle {
                center: c.center.translated(dx, dy),
                radius: (c.radius + dr).max(1e-9),
            }
        };
        let almucantars = self.almucantars.iter().map(&mut jitter).collect();
        let hours = self
            .hours
            .iter()
            .map(|h| match h {
                HourElement::Circle { circle, sign } => HourElement::Circle {
                    circle: jitter(circle),
                    sign: *sign,
                },
                HourElement::Meridian { x } => {
                    let shifted = jitter(&Circle {
                        center: PlanePoint::new(*x, 0.0),
                        radius: 1.0,
                    });
                    HourElement::Meridian {
                        x: shifted.center.x,
                    }
                }
            })
            .collect();
        ReadoutPlate {
            step: self.step,
            almucantars,
            zenith: self.zenith,
            hours,
        }
    }

    fn almucantar_level(&self, i: usize, p: &PlanePoint) -> f64 {
        match self.almucantars.get(i) {
            Some(c) => p.distance(&c.center) - c.radius,
            None => p.distance(&self.zenith),
        }
    }

    /// Altitude at `p` interpolated linearly between the bracketing
    /// almucantars' level functions.
    fn altitude_at(&self, p: &PlanePoint) -> f64 {
        let n = self.almucantars.len();
        let inside = (0..n).rev().find(|&i| self.almucantar_level(i, p) <= 0.0);
        let i = inside.unwrap_or(0);
        let (a, b) = (self.almucantar_level(i, p), self.almucantar_level(i + 1, p));
        let t = if (b - a).abs() > 0.0 {
            -a / (b - a)
        } else {
            0.0
        };
        self.step * (i as f64 + t)
    }

    fn horizon_level(&self, p: &PlanePoint) -> f64 {
        self.almucantar_level(0, p)
    }

    /// Seasonal hour since sunrise indicated at a night-side point.
    fn hour_at(&self, p: &PlanePoint) -> f64 {
        let level = |k: usize| -> f64 {
            match k {
                0 => self.horizon_level(p),
                12 => -self.horizon_level(p),
                _ => self.hours[k - 1].level(p),
            }
        };
        let mut prev = level(0);
        for k in 1..=12 {
            let cur = level(k);
            if cur <= 0.0 {
                let t = if prev - cur > 0.0 {
                    prev / (prev - cur)
                } else {
                    0.0
                };
                return (k - 1) as f64 + t;
            }
            prev = cur;
        }
        12.0
    }
}

fn true_altitude(latitude: f64, dec: f64, hour_angle: f64) -> f64 {
    let (sp, cp) = latitude.to_radians().sin_cos();
    let (sd, cd) = dec.to_radians().sin_cos();
    (sp * sd + cp * cd * hour_angle.to_radians().cos())
        .clamp(-1.0, 1.0)
        .asin()
        .to_degrees()
}

fn check_scenario(cfg: &PlateConfig, scenario: &Scenario) -> Result<()> {
    match *scenario {
        Scenario::TimeToSunset {
            sun_dec,
            hour_angle,
        } => {
            if sun_dec.abs() > cfg.obliquity {
                return Err(Error::ScenarioInfeasible(format!(
                    "solar declination {sun_dec}° exceeds the obliquity"
                )));
            }
            let x = cfg.latitude.to_radians().tan() * sun_dec.to_radians().tan();
            if x.abs() >= 1.0 {
                return Err(Error::ScenarioInfeasible(
                    "the sun does not rise and set at this latitude".into(),
                ));
            }
            if !(hour_angle.abs() < 180.0)
                || true_altitude(cfg.latitude, sun_dec, hour_angle) <= 0.0
            {
                return Err(Error::ScenarioInfeasible(format!(
                    "the sun is below the horizon at hour angle {hour_angle}°"
                )));
            }
        }
        Scenario::AltitudeReading { dec, hour_angle } => {
            if true_altitude(cfg.latitude, dec, hour_angle) < 0.0 {
                return Err(Error::ScenarioInfeasible(
                    "the body is below the horizon".into(),
                ));
            }
            if parallel_radius(dec, cfg.scale) >= parallel_radius(-cfg.obliquity, cfg.scale) {
                return Err(Error::ScenarioInfeasible(
                    "the body lies outside the plate".into(),
                ));
            }
        }
    }
    Ok(())
}

fn readout(
    plate: &ReadoutPlate,
    cfg: &PlateConfig,
    scenario: &Scenario,
    altitude_noise: f64,
) -> Result<f64> {
    match *scenario {
        Scenario::AltitudeReading { dec, hour_angle } => {
            let p = project_point(&SpherePoint::new(dec, hour_angle)?, cfg.scale)?;
            Ok(plate.altitude_at(&p))
        }
        Scenario::TimeToSunset {
            sun_dec,
            hour_angle,
        } => {
            let observed = true_altitude(cfg.latitude, sun_dec, hour_angle) + altitude_noise;
            let r = parallel_radius(sun_dec, cfg.scale);
            let side = if hour_angle < 0.0 { -1.0 } else { 1.0 };
            let at = |u: f64| PlanePoint::from_plate_polar(r, (side * u).to_radians());
            let g = |u: f64| plate.altitude_at(&at(u)) - observed;
            let (mut lo, mut hi) = (0.0f64, 180.0f64);
            let found = if g(lo) <= 0.0 {
                lo
            } else if g(hi) >= 0.0 {
                hi
            } else {
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if g(mid) > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            };
            let sun_ha = side * found;
            let nadir = PlanePoint::from_plate_polar(
                parallel_radius(-sun_dec, cfg.scale),
                (sun_ha + 180.0).to_radians(),
            );
            Ok(12.0 - plate.hour_at(&nadir))
        }
    }
}

/// Per-trial readout errors, measured against the readout of the
/// unperturbed plate. Trial `i` draws from the ChaCha stream `i` of `seed`,
/// so the samples do not depend on the execution strategy.
pub fn monte_carlo_errors(
    cfg: &PlateConfig,
    pert: &PerturbationSpec,
    scenario: &Scenario,
    n: usize,
    exec: Execution,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    pert.validate()?;
    if n == 0 {
        return Err(Error::InvalidConfig("need at least one trial".into()));
    }
    check_scenario(cfg, scenario)?;
    let with_hours = matches!(scenario, Scenario::TimeToSunset { .. });
    let base = ReadoutPlate::build(cfg, with_hours)?;
    let reference = readout(&base, cfg, scenario, 0.0)?;
    exec.map_indexed(n, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(pert.seed);
        rng.set_stream(i as u64);
        let plate = base.perturbed(pert, &mut rng);
        let noise = pert.graduation_sigma * rng.sample::<f64, _>(StandardNormal);
        readout(&plate, cfg, scenario, noise).map(|v| v - reference)
    })
    .into_iter()
    .collect()
}

pub fn monte_carlo_readout(
    cfg: &PlateConfig,
    pert: &PerturbationSpec,
    scenario: &Scenario,
    n: usize,
    exec: Execution,
) -> Result<ErrorReport> {
    ErrorReport::from_samples(&monte_carlo_errors(cfg, pert, scenario, n, exec)?)
}
