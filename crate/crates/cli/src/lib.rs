//! Command-line front end: argument and config handling, model building,
//! rendering and analysis reports.

pub mod config;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use astrolabe_core::back::{
    bearing_oracle, build_back, load_localities, qibla_printed_relation, BackConfig, Locality,
};
use astrolabe_core::errors::{
    alidade_offset_error, alidade_rotation_error, arc_displacement, arc_displacement_angular,
    band_misassignment, classification_name, monte_carlo_readout, quadrant_chord_diagnosis,
    PerturbationSpec, Scenario,
};
use astrolabe_core::plate::build_plate;
use astrolabe_core::projection::{project_point_with, ProjectionKind, SpherePoint};
use astrolabe_core::render::{render_svg, InstrumentModel, RenderStyle};
use astrolabe_core::rete::{build_rete, load_star_catalog, ReteModel};
use astrolabe_core::{Circle, Error, Execution, PlanePoint, PlateConfig, DEFAULT_OBLIQUITY};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{load_config, FileConfig, MonteCarloFile};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(Error),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// 1 for bad input, 2 for mathematical domain errors, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Io(_) => 3,
            CliError::Core(Error::Io(_)) => 3,
            CliError::Core(e) if e.is_domain() => 2,
            CliError::Core(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "astrolabe",
    version,
    about = "Design, render and analyse planispheric astrolabes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render the latitude plate (tympan) as SVG
    Plate(InstrumentArgs),
    /// Render the rete (ecliptic ring and star pointers) as SVG
    Rete(InstrumentArgs),
    /// Render the back of the instrument as SVG
    Back(InstrumentArgs),
    /// Render plate, rete and back side by side in one SVG document
    Full(InstrumentArgs),
    /// Project a single sphere point onto the plate
    Project(ProjectArgs),
    /// Print the qibla bearing and the printed relation side by side
    Qibla(QiblaArgs),
    /// Error analysis reports
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
}

#[derive(Debug, Clone, Default, Args)]
pub struct InstrumentArgs {
    /// Plate latitude in degrees, between 0 and 90 exclusive
    #[arg(long)]
    pub lat: Option<f64>,
    /// Canonical scale in mm: projected radius of the celestial equator
    #[arg(long, conflicts_with = "diameter_mm")]
    pub scale_mm: Option<f64>,
    /// Plate diameter in mm, taken as twice the Capricorn radius
    #[arg(long)]
    pub diameter_mm: Option<f64>,
    /// Obliquity of the ecliptic in degrees
    #[arg(long)]
    pub obliquity: Option<f64>,
    /// Almucantar spacing in degrees; must divide 90
    #[arg(long)]
    pub almucantar_step: Option<f64>,
    /// Azimuth circle spacing in degrees; must divide 360
    #[arg(long)]
    pub azimuth_step: Option<f64>,
    /// Leave out the unequal-hour lines
    #[arg(long)]
    pub no_hour_lines: bool,
    /// Star catalog CSV with header name,ra_deg,dec_deg,mag
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    /// Localities CSV with header name,lat_deg,lon_deg for qibla marks
    #[arg(long)]
    pub localities: Option<PathBuf>,
    /// Random seed for stochastic analyses
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Mirror the drawing east-west
    #[arg(long)]
    pub mirror_ew: bool,
    /// Decimal places for SVG coordinates, 1 to 9
    #[arg(long)]
    pub precision: Option<usize>,
    /// Comma-separated layer ids to draw (default: all layers of the model)
    #[arg(long, value_delimiter = ',')]
    pub layers: Option<Vec<String>>,
    /// TOML config file; flags given on the command line take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Stereographic,
    Gnomonic,
    Orthographic,
    External,
}

#[derive(Debug, Clone, Args)]
pub struct ProjectArgs {
    /// Declination of the point in degrees
    #[arg(long, allow_hyphen_values = true)]
    pub dec: f64,
    /// Hour angle of the point in degrees
    #[arg(long, allow_hyphen_values = true)]
    pub ha: f64,
    /// Projection family
    #[arg(long, value_enum, default_value = "stereographic")]
    pub kind: KindArg,
    /// Viewpoint distance below the sphere centre, in sphere radii, for the external projection
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    /// Canonical scale in mm
    #[arg(long, default_value_t = 100.0)]
    pub scale_mm: f64,
}

#[derive(Debug, Clone, Args)]
pub struct QiblaArgs {
    /// Observer latitude in degrees, north positive
    #[arg(
        long,
        allow_hyphen_values = true,
        required_unless_present = "localities"
    )]
    pub lat: Option<f64>,
    /// Observer longitude in degrees, east positive
    #[arg(
        long,
        allow_hyphen_values = true,
        required_unless_present = "localities"
    )]
    pub lon: Option<f64>,
    /// Localities CSV with header name,lat_deg,lon_deg, reported one per line
    #[arg(long)]
    pub localities: Option<PathBuf>,
    /// Latitude of Mecca in degrees
    #[arg(long, default_value_t = 21.4225)]
    pub mecca_lat: f64,
    /// Longitude of Mecca in degrees
    #[arg(long, default_value_t = 39.8262)]
    pub mecca_lon: f64,
}

#[derive(Debug, Subcommand)]
pub enum AnalyzeCommand {
    /// Arc displacement from a centre shift and a radius error
    ArcDisplacement(ArcArgs),
    /// Classify four quadrant marks by their chord lengths
    QuadrantChords(ChordArgs),
    /// Which almucantar band a radius error pushes an arc into
    Band(BandArgs),
    /// Monte Carlo propagation of engraving errors into a readout
    Montecarlo(MonteCarloArgs),
    /// Alidade pointer-line and rotation-axis errors
    Alidade(AlidadeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ArcArgs {
    /// Centre shift along the arc in mm
    #[arg(long, conflicts_with_all = ["radius", "d_alpha"])]
    pub ds: Option<f64>,
    /// Arc radius in mm, used with --d-alpha
    #[arg(long, requires = "d_alpha")]
    pub radius: Option<f64>,
    /// Angular shift in radians, used with --radius
    #[arg(long, requires = "radius")]
    pub d_alpha: Option<f64>,
    /// Radius error in mm
    #[arg(long, default_value_t = 0.0)]
    pub dp: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ChordArgs {
    /// Four mark angles in degrees, comma separated, clockwise from the top
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub marks: Vec<f64>,
    /// Graduation circle radius in mm
    #[arg(long, default_value_t = 100.0)]
    pub radius: f64,
    /// Graduation circle centre x offset from the rotation centre in mm
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub offset_x: f64,
    /// Graduation circle centre y offset from the rotation centre in mm
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub offset_y: f64,
    /// Chord equality tolerance in mm
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BandArgs {
    #[command(flatten)]
    pub instrument: InstrumentArgs,
    /// Altitude of the mis-drawn almucantar in degrees
    #[arg(long, default_value_t = 0.0)]
    pub altitude: f64,
    /// Fractional radius error (0.02 for an arc drawn 2% short)
    #[arg(long, allow_hyphen_values = true)]
    pub fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    TimeToSunset,
    Altitude,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct MonteCarloArgs {
    #[command(flatten)]
    pub instrument: InstrumentArgs,
    /// Number of trials
    #[arg(long)]
    pub trials: Option<usize>,
    /// Standard deviation of element centre coordinates in mm
    #[arg(long)]
    pub center_sigma: Option<f64>,
    /// Standard deviation of element radii in mm
    #[arg(long)]
    pub radius_sigma: Option<f64>,
    /// Standard deviation of the observed altitude in degrees
    #[arg(long)]
    pub graduation_sigma: Option<f64>,
    /// Readout to simulate
    #[arg(long, value_enum, default_value = "time-to-sunset")]
    pub scenario: ScenarioArg,
    /// Declination of the sun or body in degrees
    #[arg(long, allow_hyphen_values = true)]
    pub dec: Option<f64>,
    /// Hour angle of the sun or body in degrees
    #[arg(long, allow_hyphen_values = true)]
    pub hour_angle: Option<f64>,
    /// Report format
    #[arg(long, value_enum, default_value = "text")]
    pub format: ReportFormat,
    /// Run trials on the calling thread only
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Args)]
pub struct AlidadeArgs {
    /// Alidade length in mm
    #[arg(long)]
    pub length: f64,
    /// Pointer-line offset in radians
    #[arg(long, default_value_t = 0.0)]
    pub offset: f64,
    /// Rotation-axis offset, in the unit named by --unit
    #[arg(long, default_value_t = 0.0)]
    pub rotation: f64,
    /// Unit tag for --rotation and its result (for example mm or deg)
    #[arg(long)]
    pub unit: String,
}

/// Fully resolved settings for instrument-building commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub plate: PlateConfig,
    pub catalog: Option<PathBuf>,
    pub localities: Option<PathBuf>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub style: RenderStyle,
    pub mecca: Locality,
    pub montecarlo: MonteCarloFile,
}

impl RunConfig {
    pub fn resolve(args: &InstrumentArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => load_config(p)?,
            None => FileConfig::default(),
        };
        Self::merge(args, file)
    }

    pub fn merge(args: &InstrumentArgs, file: FileConfig) -> Result<Self, CliError> {
        let obliquity = args
            .obliquity
            .or(file.obliquity)
            .unwrap_or(DEFAULT_OBLIQUITY);
        let scale = match (
            args.scale_mm,
            args.diameter_mm,
            file.scale_mm,
            file.diameter_mm,
        ) {
            (Some(s), _, _, _) => s,
            (None, Some(d), _, _) => PlateConfig::scale_for_diameter(d, obliquity),
            (None, None, Some(s), _) => s,
            (None, None, None, Some(d)) => PlateConfig::scale_for_diameter(d, obliquity),
            _ => 100.0,
        };
        let defaults = PlateConfig::new(40.0, scale);
        let plate = PlateConfig {
            latitude: args.lat.or(file.lat).unwrap_or(defaults.latitude),
            scale,
            obliquity,
            almucantar_step: args
                .almucantar_step
                .or(file.almucantar_step)
                .unwrap_or(defaults.almucantar_step),
            azimuth_step: args
                .azimuth_step
                .or(file.azimuth_step)
                .unwrap_or(defaults.azimuth_step),
            hour_lines: !args.no_hour_lines && file.hour_lines.unwrap_or(true),
        };
        let layers = args.layers.clone().or(file.layers);
        let style = RenderStyle {
            precision: args.precision.or(file.precision).unwrap_or(4),
            mirror_ew: args.mirror_ew || file.mirror_ew.unwrap_or(false),
            include_layers: layers.map(|l| l.into_iter().collect()),
            ..RenderStyle::default()
        };
        style.validate()?;
        let mecca = Locality::new(
            "Mecca",
            file.mecca_lat.unwrap_or(Locality::mecca().latitude),
            file.mecca_lon.unwrap_or(Locality::mecca().longitude),
        )?;
        Ok(RunConfig {
            plate,
            catalog: args.catalog.clone().or(file.catalog),
            localities: args.localities.clone().or(file.localities),
            seed: args.seed.or(file.seed).unwrap_or(0),
            out: args.out.clone().or(file.out),
            style,
            mecca,
            montecarlo: file.montecarlo.unwrap_or_default(),
        })
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn load_optional<T>(
    path: &Option<PathBuf>,
    f: fn(&Path) -> astrolabe_core::Result<Vec<T>>,
) -> Result<Vec<T>, CliError> {
    match path {
        Some(p) => Ok(f(p)?),
        None => Ok(Vec::new()),
    }
}

fn rete_model(cfg: &RunConfig) -> Result<ReteModel, CliError> {
    let stars = load_optional(&cfg.catalog, load_star_catalog)?;
    let rete = build_rete(&stars, cfg.plate.scale, cfg.plate.obliquity)?;
    for s in &rete.skipped {
        eprintln!("skipped star: {}", s.reason);
    }
    Ok(rete)
}

fn back_model(cfg: &RunConfig) -> Result<astrolabe_core::back::BackModel, CliError> {
    let localities = load_optional(&cfg.localities, load_localities)?;
    let limb = astrolabe_core::plate::parallel_radius(-cfg.plate.obliquity, cfg.plate.scale);
    let back_cfg = BackConfig {
        obliquity: cfg.plate.obliquity,
        mecca: cfg.mecca.clone(),
        ..BackConfig::new(limb)
    };
    Ok(build_back(&back_cfg, &localities)?)
}

fn render(cfg: &RunConfig, model: InstrumentModel) -> Result<(), CliError> {
    let rendered = render_svg(&model, &cfg.style)?;
    if let Some(w) = rendered.warning {
        eprintln!("warning: {w}");
    }
    emit(&cfg.out, &rendered.svg)
}

fn run_instrument(which: &str, args: &InstrumentArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(args)?;
    let model = match which {
        "plate" => InstrumentModel::Plate(build_plate(&cfg.plate)?),
        "rete" => InstrumentModel::Rete(rete_model(&cfg)?),
        "back" => InstrumentModel::Back(back_model(&cfg)?),
        _ => InstrumentModel::Full {
            plate: Box::new(build_plate(&cfg.plate)?),
            rete: Box::new(rete_model(&cfg)?),
            back: Box::new(back_model(&cfg)?),
        },
    };
    render(&cfg, model)
}

fn run_project(a: &ProjectArgs) -> Result<(), CliError> {
    let kind = match a.kind {
        KindArg::Stereographic => ProjectionKind::stereographic(),
        KindArg::Gnomonic => ProjectionKind::gnomonic(),
        KindArg::Orthographic => ProjectionKind::orthographic(),
        KindArg::External => ProjectionKind::external(a.q)?,
    };
    let p = project_point_with(&SpherePoint::new(a.dec, a.ha)?, kind, a.scale_mm)?;
    println!(
        "x = {:.6} mm\ny = {:.6} mm\nr = {:.6} mm",
        p.x,
        p.y,
        p.norm()
    );
    Ok(())
}

fn qibla_line(loc: &Locality, mecca: &Locality) -> Result<String, CliError> {
    let oracle = bearing_oracle(loc, mecca)?;
    let printed = qibla_printed_relation(loc, mecca)?;
    let gap = ((printed - oracle + 540.0).rem_euclid(360.0) - 180.0).abs();
    Ok(format!(
        "{}: great-circle bearing {:.3} deg, printed relation {:.3} deg, divergence {:.3} deg",
        loc.name, oracle, printed, gap
    ))
}

fn run_qibla(a: &QiblaArgs) -> Result<(), CliError> {
    let mecca = Locality::new("Mecca", a.mecca_lat, a.mecca_lon)?;
    let mut locs = Vec::new();
    if let (Some(lat), Some(lon)) = (a.lat, a.lon) {
        locs.push(Locality::new("observer", lat, lon)?);
    }
    locs.extend(load_optional(&a.localities, load_localities)?);
    for loc in &locs {
        println!("{}", qibla_line(loc, &mecca)?);
    }
    println!(
        "note: the printed relation swaps the roles of the two latitudes; it matches the great-circle bearing only \
         when the observer shares the target's latitude or lies on its opposite meridian"
    );
    Ok(())
}

fn run_analyze(cmd: &AnalyzeCommand) -> Result<(), CliError> {
    match cmd {
        AnalyzeCommand::ArcDisplacement(a) => {
            let dl = match (a.ds, a.radius, a.d_alpha) {
                (Some(ds), _, _) => arc_displacement(ds, a.dp),
                (None, Some(p), Some(da)) => {
                    if p.is_nan() || p <= 0.0 {
                        return Err(CliError::Config("--radius must be positive".into()));
                    }
                    arc_displacement_angular(p, da, a.dp)
                }
                _ => arc_displacement(0.0, a.dp),
            };
            println!("dL = {dl:.6} mm");
        }
        AnalyzeCommand::QuadrantChords(a) => {
            if a.marks.len() != 4 {
                return Err(CliError::Config(format!(
                    "--marks needs exactly 4 angles, got {}",
                    a.marks.len()
                )));
            }
            let circle = Circle::new(PlanePoint::new(a.offset_x, a.offset_y), a.radius)?;
            let marks = [a.marks[0], a.marks[1], a.marks[2], a.marks[3]];
            let d = quadrant_chord_diagnosis(&circle, marks, a.tol)?;
            for (i, c) in d.chords.iter().enumerate() {
                println!("chord {}: {c:.6} mm", i + 1);
            }
            println!("classification: {}", classification_name(d.classification));
        }
        AnalyzeCommand::Band(a) => {
            let cfg = RunConfig::resolve(&a.instrument)?;
            let r = band_misassignment(&cfg.plate, a.altitude, a.fraction)?;
            let text = format!(
                "spacing {:.4} mm\ndisplacement {:.4} mm\nimplied altitude {:.4} deg\nlands on band {} deg\n",
                r.spacing, r.displacement, r.implied_altitude, r.lands_on_band
            );
            emit(&cfg.out, &text)?;
        }
        AnalyzeCommand::Montecarlo(a) => {
            let cfg = RunConfig::resolve(&a.instrument)?;
            let mc = &cfg.montecarlo;
            let pert = PerturbationSpec {
                center_sigma: a.center_sigma.or(mc.center_sigma).unwrap_or(0.1),
                radius_sigma: a.radius_sigma.or(mc.radius_sigma).unwrap_or(0.1),
                graduation_sigma: a.graduation_sigma.or(mc.graduation_sigma).unwrap_or(0.0),
                seed: cfg.seed,
            };
            let dec = a.dec.or(mc.dec).unwrap_or(10.0);
            let hour_angle = a.hour_angle.or(mc.hour_angle).unwrap_or(40.0);
            let scenario = match a.scenario {
                ScenarioArg::TimeToSunset => Scenario::TimeToSunset {
                    sun_dec: dec,
                    hour_angle,
                },
                ScenarioArg::Altitude => Scenario::AltitudeReading { dec, hour_angle },
            };
            let exec = if a.sequential {
                Execution::Sequential
            } else {
                Execution::default()
            };
            let trials = a.trials.or(mc.trials).unwrap_or(1000);
            let report = monte_carlo_readout(&cfg.plate, &pert, &scenario, trials, exec)?;
            let text = match a.format {
                ReportFormat::Text => report.to_text(),
                ReportFormat::Csv => report.to_csv(),
            };
            emit(&cfg.out, &text)?;
        }
        AnalyzeCommand::Alidade(a) => {
            if a.unit.trim().is_empty() {
                return Err(CliError::Config(
                    "--unit must name the unit of --rotation".into(),
                ));
            }
            let d1 = alidade_offset_error(a.length, a.offset)?;
            let d2 = alidade_rotation_error(a.rotation)?;
            println!(
                "pointer-line error d1 = {d1:.6} mm\nrotation-axis error d2 = {d2:.6} {}",
                a.unit
            );
        }
    }
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Plate(a) => run_instrument("plate", a),
        Command::Rete(a) => run_instrument("rete", a),
        Command::Back(a) => run_instrument("back", a),
        Command::Full(a) => run_instrument("full", a),
        Command::Project(a) => run_project(a),
        Command::Qibla(a) => run_qibla(a),
        Command::Analyze(c) => run_analyze(c),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
