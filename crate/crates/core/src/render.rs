//! Deterministic SVG output.
//!
//! Geometry is emitted in millimetre user units. Model `y` grows toward the
//! upper meridian while SVG `y` grows downward, so every `y` is negated on
//! output; with `mirror_ew` every `x` is negated as well. Numbers are written
//! with a fixed number of decimals and no locale dependence, and groups and
//! elements follow the model's own ordering, so identical inputs produce
//! identical bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::back::BackModel;
use crate::error::{Error, Result};
use crate::geometry::{Arc, Circle, Orientation, PlanePoint, Segment};
use crate::plate::{PlateModel, Trace};
use crate::rete::ReteModel;

pub const LAYER_IDS: [&str; 13] = [
    "tropics",
    "almucantars",
    "azimuths",
    "hours",
    "horizon",
    "ecliptic",
    "stars",
    "calendar",
    "shadow-square",
    "sine-quadrant",
    "midday",
    "qibla",
    "limb",
];

const PLATE_LAYERS: [&str; 6] = [
    "tropics",
    "horizon",
    "almucantars",
    "azimuths",
    "hours",
    "limb",
];
const RETE_LAYERS: [&str; 3] = ["ecliptic", "stars", "limb"];
const BACK_LAYERS: [&str; 6] = [
    "calendar",
    "sine-quadrant",
    "shadow-square",
    "midday",
    "qibla",
    "limb",
];

const SIGNS: [&str; 12] = [
    "Aries",
    "Taurus",
    "Gemini",
    "Cancer",
    "Leo",
    "Virgo",
    "Libra",
    "Scorpio",
    "Sagittarius",
    "Capricorn",
    "Aquarius",
    "Pisces",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderStyle {
    pub precision: usize,
    pub mirror_ew: bool,
    /// Layers to emit; `None` emits every layer the model has.
    pub include_layers: Option<BTreeSet<String>>,
    pub label_font_size: f64,
    pub default_stroke: f64,
    pub layer_strokes: BTreeMap<String, f64>,
}

impl Default for RenderStyle {
    fn default() -> Self {
        let layer_strokes = [
            ("limb", 0.5),
            ("tropics", 0.35),
            ("horizon", 0.35),
            ("ecliptic", 0.35),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        RenderStyle {
            precision: 4,
            mirror_ew: false,
            include_layers: None,
            label_font_size: 3.0,
            default_stroke: 0.2,
            layer_strokes,
        }
    }
}

impl RenderStyle {
    pub fn validate(&self) -> Result<()> {
        if !(1..=9).contains(&self.precision) {
            return Err(Error::InvalidConfig(format!(
                "precision {} must lie in [1, 9]",
                self.precision
            )));
        }
        if let Some(layers) = &self.include_layers {
            if let Some(bad) = layers.iter().find(|l| !LAYER_IDS.contains(&l.as_str())) {
                return Err(Error::InvalidConfig(format!("unknown layer '{bad}'")));
            }
        }
        Ok(())
    }

    fn wants(&self, layer: &str) -> bool {
        self.include_layers
            .as_ref()
            .is_none_or(|s| s.contains(layer))
    }

    fn stroke(&self, layer: &str) -> f64 {
        self.layer_strokes
            .get(layer)
            .copied()
            .unwrap_or(self.default_stroke)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InstrumentModel {
    Plate(PlateModel),
    Rete(ReteModel),
    Back(BackModel),
    Full {
        plate: Box<PlateModel>,
        rete: Box<ReteModel>,
        back: Box<BackModel>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub svg: String,
    /// Set to [`Error::EmptyModel`] when no requested layer had any geometry
    /// and only the boundary was drawn.
    pub warning: Option<Error>,
}

/// Formats a coordinate with fixed decimals, never producing `-0.000`.
pub fn format_number(v: f64, precision: usize) -> String {
    let s = format!("{:.*}", precision, v);
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    dx: f64,
    mirror: bool,
    precision: usize,
}

impl Frame {
    fn x(&self, x: f64) -> String {
        format_number(self.dx + if self.mirror { -x } else { x }, self.precision)
    }

    fn y(&self, y: f64) -> String {
        format_number(-y, self.precision)
    }

    fn n(&self, v: f64) -> String {
        format_number(v, self.precision)
    }

    fn circle(&self, c: &Circle, out: &mut String) {
        let _ = writeln!(
            out,
            "    <circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            self.x(c.center.x),
            self.y(c.center.y),
            self.n(c.radius)
        );
    }

    fn marker(&self, p: &PlanePoint, r: f64, out: &mut String) {
        let _ = writeln!(
            out,
            "    <circle class=\"marker\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            self.x(p.x),
            self.y(p.y),
            self.n(r)
        );
    }

    fn line(&self, a: &PlanePoint, b: &PlanePoint, out: &mut String) {
        let _ = writeln!(
            out,
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            self.x(a.x),
            self.y(a.y),
            self.x(b.x),
            self.y(b.y)
        );
    }

    fn segment(&self, s: &Segment, out: &mut String) {
        self.line(&s.a, &s.b, out);
    }

    fn arc(&self, a: &Arc, out: &mut String) {
        if a.sweep() >= TAU - 1e-12 {
            self.circle(&a.circle, out);
        } else {
            let _ = writeln!(out, "    <path d=\"{}\"/>", self.arc_path(a));
        }
    }

    fn arc_path(&self, a: &Arc) -> String {
        let (s, e) = (a.start_point(), a.end_point());
        let large = u8::from(a.sweep() > PI);
        let ccw = a.orientation == Orientation::Ccw;
        let sweep = u8::from(ccw == self.mirror);
        let r = self.n(a.circle.radius);
        format!(
            "M {} {} A {r} {r} 0 {large} {sweep} {} {}",
            self.x(s.x),
            self.y(s.y),
            self.x(e.x),
            self.y(e.y)
        )
    }

    fn trace(&self, t: &Trace, out: &mut String) {
        match t {
            Trace::Circle(c) => self.circle(c, out),
            Trace::Arcs(arcs) => arcs.iter().for_each(|a| self.arc(a, out)),
            Trace::Segment(s) => self.segment(s, out),
            Trace::Marker(p) => self.marker(p, 0.5, out),
        }
    }

    fn text(&self, p: &PlanePoint, size: f64, content: &str, out: &mut String) {
        let _ = writeln!(
            out,
            "    <text x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"middle\" stroke=\"none\" fill=\"black\">{}</text>",
            self.x(p.x),
            self.y(p.y),
            self.n(size),
            escape(content)
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// SVG path data for a non-full arc in the output frame (`y` negated,
/// `x` negated when `mirror` is set).
pub fn arc_to_path(arc: &Arc, precision: usize, mirror: bool) -> String {
    Frame {
        dx: 0.0,
        mirror,
        precision,
    }
    .arc_path(arc)
}

struct Panel<'a> {
    kind: PanelKind<'a>,
    frame: Frame,
}

enum PanelKind<'a> {
    Plate(&'a PlateModel),
    Rete(&'a ReteModel),
    Back(&'a BackModel),
}

impl PanelKind<'_> {
    fn radius(&self) -> f64 {
        match self {
            PanelKind::Plate(p) => p.boundary.radius,
            PanelKind::Rete(r) => r.boundary.radius,
            PanelKind::Back(b) => b.radius,
        }
    }

    fn layers(&self) -> &'static [&'static str] {
        match self {
            PanelKind::Plate(_) => &PLATE_LAYERS,
            PanelKind::Rete(_) => &RETE_LAYERS,
            PanelKind::Back(_) => &BACK_LAYERS,
        }
    }

    fn limb(&self) -> Circle {
        match self {
            PanelKind::Plate(p) => p.boundary,
            PanelKind::Rete(r) => r.boundary,
            PanelKind::Back(b) => Circle {
                center: PlanePoint::ORIGIN,
                radius: b.radius,
            },
        }
    }
}

fn emit_plate(p: &PlateModel, layer: &str, f: &Frame, out: &mut String) {
    match layer {
        "tropics" => [&p.tropics.capricorn, &p.tropics.equator, &p.tropics.cancer]
            .into_iter()
            .for_each(|c| f.circle(c, out)),
        "horizon" => f.trace(&p.horizon, out),
        "almucantars" => p.almucantars.iter().for_each(|a| f.trace(&a.trace, out)),
        "azimuths" => p.azimuths.iter().for_each(|a| f.trace(&a.trace, out)),
        "hours" => p.hour_lines.iter().for_each(|h| f.trace(&h.trace, out)),
        "limb" => f.circle(&p.boundary, out),
        _ => {}
    }
}

fn emit_rete(r: &ReteModel, layer: &str, f: &Frame, size: f64, out: &mut String) {
    match layer {
        "ecliptic" => {
            f.circle(&r.ecliptic, out);
            let c = r.ecliptic.center;
            let unit = 0.015 * r.ecliptic.radius;
            for t in &r.zodiac_ticks {
                let len = if t.major { 2.0 * unit } else { unit };
                let d = t.point.distance(&c);
                let inner = PlanePoint::new(
                    t.point.x - len * (t.point.x - c.x) / d,
                    t.point.y - len * (t.point.y - c.y) / d,
                );
                f.line(&t.point, &inner, out);
            }
            for (i, name) in SIGNS.iter().enumerate() {
                let mid = &r.zodiac_ticks[30 * i + 15].point;
                let d = mid.distance(&c);
                let k = 1.0 - 4.0 * unit / d;
                let at = PlanePoint::new(c.x + k * (mid.x - c.x), c.y + k * (mid.y - c.y));
                f.text(&at, size, name, out);
            }
        }
        "stars" => {
            for s in &r.pointers {
                f.marker(&s.point, 0.6, out);
                let at = PlanePoint::new(s.point.x, s.point.y + 1.2);
                f.text(&at, 0.7 * size, &s.star.name, out);
            }
        }
        "limb" => f.circle(&r.boundary, out),
        _ => {}
    }
}

fn polar(r: f64, deg: f64) -> PlanePoint {
    PlanePoint::from_plate_polar(r, deg.to_radians())
}

fn emit_back(b: &BackModel, layer: &str, f: &Frame, size: f64, out: &mut String) {
    let r = b.radius;
    match layer {
        "limb" => {
            f.circle(
                &Circle {
                    center: PlanePoint::ORIGIN,
                    radius: r,
                },
                out,
            );
            for t in &b.degree_scale {
                let inner = if t.major { 0.93 } else { 0.96 };
                f.line(&polar(inner * r, t.angle), &polar(r, t.angle), out);
            }
            for t in b
                .degree_scale
                .iter()
                .filter(|t| t.major && t.altitude > 0.0 && t.angle >= 180.0)
            {
                f.text(
                    &polar(0.95 * r, t.angle - 2.0),
                    0.7 * size,
                    &format!("{}", t.altitude as i64),
                    out,
                );
            }
        }
        "calendar" => {
            let (r0, r1) = b.calendar_radii;
            f.circle(
                &Circle {
                    center: PlanePoint::ORIGIN,
                    radius: r0,
                },
                out,
            );
            f.circle(
                &Circle {
                    center: PlanePoint::ORIGIN,
                    radius: r1,
                },
                out,
            );
            for t in &b.calendar {
                f.line(&polar(r0, t.angle), &polar(r1, t.angle), out);
            }
        }
        "sine-quadrant" => {
            let q = &b.sine_quadrant;
            f.line(&PlanePoint::ORIGIN, &PlanePoint::new(-q.radius, 0.0), out);
            f.line(&PlanePoint::ORIGIN, &PlanePoint::new(0.0, q.radius), out);
            let c = Circle {
                center: PlanePoint::ORIGIN,
                radius: q.radius,
            };
            if let Ok(a) = Arc::new(c, PI / 2.0, PI, Orientation::Ccw) {
                f.arc(&a, out);
            }
            q.grid_lines().iter().for_each(|s| f.segment(s, out));
        }
        "shadow-square" => {
            let sq = &b.shadow_square;
            let s = sq.side;
            let corners = [
                PlanePoint::ORIGIN,
                PlanePoint::new(s, 0.0),
                PlanePoint::new(s, -s),
                PlanePoint::new(0.0, -s),
            ];
            for i in 0..4 {
                f.line(&corners[i], &corners[(i + 1) % 4], out);
            }
            let tick = 0.04 * s;
            for m in &sq.marks {
                f.line(
                    &m.recta_point,
                    &PlanePoint::new(m.recta_point.x, m.recta_point.y + tick),
                    out,
                );
                f.line(
                    &m.versa_point,
                    &PlanePoint::new(m.versa_point.x - tick, m.versa_point.y),
                    out,
                );
            }
        }
        "midday" => b.midday_curves.iter().for_each(|c| f.arc(&c.arc, out)),
        "qibla" => {
            for q in &b.qibla_marks {
                f.line(&polar(0.90 * r, q.bearing), &polar(r, q.bearing), out);
                f.text(
                    &polar(0.86 * r, q.bearing),
                    0.7 * size,
                    &q.locality.name,
                    out,
                );
                if let Some(arc) = &q.curve {
                    f.arc(arc, out);
                }
            }
        }
        _ => {}
    }
}

fn has_geometry(panel: &Panel, layer: &str) -> bool {
    match (&panel.kind, layer) {
        (_, "limb") => false,
        (PanelKind::Plate(p), "hours") => !p.hour_lines.is_empty(),
        (PanelKind::Plate(p), "almucantars") => !p.almucantars.is_empty(),
        (PanelKind::Plate(p), "azimuths") => !p.azimuths.is_empty(),
        (PanelKind::Plate(p), "horizon") => !p.horizon.is_empty(),
        (PanelKind::Rete(r), "stars") => !r.pointers.is_empty(),
        (PanelKind::Back(b), "midday") => !b.midday_curves.is_empty(),
        (PanelKind::Back(b), "qibla") => !b.qibla_marks.is_empty(),
        _ => true,
    }
}

/// Renders an instrument model to an SVG document.
pub fn render_svg(model: &InstrumentModel, style: &RenderStyle) -> Result<Rendered> {
    style.validate()?;
    let kinds: Vec<PanelKind> = match model {
        InstrumentModel::Plate(p) => vec![PanelKind::Plate(p)],
        InstrumentModel::Rete(r) => vec![PanelKind::Rete(r)],
        InstrumentModel::Back(b) => vec![PanelKind::Back(b)],
        InstrumentModel::Full { plate, rete, back } => {
            vec![
                PanelKind::Plate(plate),
                PanelKind::Rete(rete),
                PanelKind::Back(back),
            ]
        }
    };

    let mut panels = Vec::with_capacity(kinds.len());
    let mut cursor = 0.0;
    for (i, kind) in kinds.into_iter().enumerate() {
        let r = kind.radius();
        if i > 0 {
            cursor += 1.1 * r;
        }
        panels.push(Panel {
            frame: Frame {
                dx: cursor,
                mirror: style.mirror_ew,
                precision: style.precision,
            },
            kind,
        });
        cursor += 1.1 * r;
    }

    let max_r = panels.iter().map(|p| p.kind.radius()).fold(0.0, f64::max);
    let first_r = panels[0].kind.radius();
    let last = panels.last().expect("at least one panel");
    let min_x = -1.05 * first_r;
    let max_x = last.frame.dx + 1.05 * last.kind.radius();
    let (w, h) = (max_x - min_x, 2.1 * max_r);

    let mut order: Vec<&str> = Vec::new();
    for p in &panels {
        for l in p.kind.layers() {
            if !order.contains(l) {
                order.push(l);
            }
        }
    }
    order.sort_by_key(|l| usize::from(*l == "limb"));
    let requested: Vec<&str> = order.into_iter().filter(|l| style.wants(l)).collect();

    let empty = !requested.iter().any(|l| {
        panels
            .iter()
            .any(|p| p.kind.layers().contains(l) && has_geometry(p, l))
    });

    let fmt = |v: f64| format_number(v, style.precision);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}mm\" height=\"{}mm\" viewBox=\"{} {} {} {}\">",
        fmt(w),
        fmt(h),
        fmt(min_x),
        fmt(-1.05 * max_r),
        fmt(w),
        fmt(h)
    );

    let size = style.label_font_size;
    if empty {
        let _ = writeln!(
            out,
            "  <g id=\"limb\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\">",
            fmt(style.stroke("limb"))
        );
        for p in &panels {
            p.frame.circle(&p.kind.limb(), &mut out);
        }
        out.push_str("  </g>\n");
    } else {
        for layer in &requested {
            let _ = writeln!(
                out,
                "  <g id=\"{layer}\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\">",
                fmt(style.stroke(layer))
            );
            for p in &panels {
                if !p.kind.layers().contains(layer) {
                    continue;
                }
                match &p.kind {
                    PanelKind::Plate(m) => emit_plate(m, layer, &p.frame, &mut out),
                    PanelKind::Rete(m) => emit_rete(m, layer, &p.frame, size, &mut out),
                    PanelKind::Back(m) => emit_back(m, layer, &p.frame, size, &mut out),
                }
            }
            out.push_str("  </g>\n");
        }
    }
    out.push_str("</svg>\n");
    Ok(Rendered {
        svg: out,
        warning: empty.then_some(Error::EmptyModel),
    })
}
