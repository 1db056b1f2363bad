use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("points are collinear; no circle passes through them")]
    CollinearPoints,
    #[error("need at least 3 points to fit a circle, got {0}")]
    TooFewPoints(usize),
    #[error("circles coincide; intersection is not a finite point set")]
    CoincidentCircles,
    #[error("domain error: {0}")]
    Domain(String),
    #[error(
        "hour lines are undefined at latitude {latitude}° with obliquity {obliquity}°: latitude >= 90 - obliquity (φ ≥ 90 − ε)"
    )]
    ArcticLatitude { latitude: f64, obliquity: f64 },
    #[error(
        "star '{name}' projects to radius {radius:.4} mm, outside the plate limit {limit:.4} mm"
    )]
    OutsidePlate {
        name: String,
        radius: f64,
        limit: f64,
    },
    #[error("duplicate star name '{0}' in catalog")]
    DuplicateStarName(String),
    #[error("bearing undefined: {0}")]
    UndefinedBearing(String),
    #[error("no altitude in [0°, 90°] satisfies the requested azimuth and declination")]
    NoSolution,
    #[error("scenario infeasible: {0}")]
    ScenarioInfeasible(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("model contains no drawable elements")]
    EmptyModel,
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors raised by mathematical preconditions rather than by
    /// malformed input.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::CollinearPoints
                | Error::CoincidentCircles
                | Error::Domain(_)
                | Error::ArcticLatitude { .. }
                | Error::OutsidePlate { .. }
                | Error::UndefinedBearing(_)
                | Error::NoSolution
                | Error::ScenarioInfeasible(_)
                | Error::EmptyModel
        )
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
