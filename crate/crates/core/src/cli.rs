//! Command-line driver: argument model, vector parsing, and the table, JSON
//! and SVG emitters.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::blowup::{parse_vector_with, BlowupError, BlowupVector, BoundReport, DerivedParams, Verdict};
use crate::canonical::CanonicalProfile;
use crate::census::{run_census, trapezoid_seeds, CensusError, CensusOptions, CensusResult, OrderAudit, SearchOrder};
use crate::chop::ChopRecordJson;
use crate::lattice::{format_rational, parse_rational, Rational};
use crate::par::Jobs;
use crate::polygon::{vertices_to_strings, DelzantPolygon, EdgeProfile};

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_BLOWUP_CLASS: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    NotABlowupClass(String),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::NotABlowupClass(_) => EXIT_NOT_BLOWUP_CLASS,
            Self::Census(_) | Self::Io { .. } => EXIT_FAILURE,
        }
    }
}

impl From<BlowupError> for CliError {
    fn from(e: BlowupError) -> Self {
        match e {
            BlowupError::NotABlowupClass(_) => Self::NotABlowupClass(e.to_string()),
            other => Self::Usage(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Mode {
    Reduce,
    Check,
    Bound,
    #[default]
    Census,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Table,
    Json,
}

/// Count toric actions on a blowup of CP^2 given as "λ; δ1, δ2, …, δk".
#[derive(Debug, Clone, Parser)]
#[command(name = "toric-census", version)]
pub struct RunConfig {
    /// Blowup vector, e.g. "1; 1/3, 1/3, 1/9" (rationals or exact decimals).
    pub vector: String,
    #[arg(long, value_enum, default_value_t = Mode::Census)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write one SVG per class (class-000.svg, …) into this directory.
    #[arg(long, value_name = "PATH")]
    pub svg_dir: Option<PathBuf>,
    /// Worker threads for the census; 1 runs the sequential reference search.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,
    /// Chop in the written order only and report differences from the all-orders search.
    #[arg(long)]
    pub single_order: bool,
    /// Print the Hirzebruch trapezoid seeds and stop.
    #[arg(long)]
    pub seed_list: bool,
}

/// Parses one token: `p/q`, `p`, or an exact decimal such as `0.3`.
pub fn parse_token(t: &str) -> Option<Rational> {
    if let Ok(r) = parse_rational(t) {
        return Some(r);
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (int_part, frac) = body.split_once('.')?;
    let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if (int_part.is_empty() && frac.is_empty()) || !all_digits(int_part) || !all_digits(frac) {
        return None;
    }
    let numer: BigInt = format!("{int_part}{frac}").parse().ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rational::new(numer, denom);
    Some(if negative { -r } else { r })
}

pub fn parse_vector(s: &str) -> Result<BlowupVector, CliError> {
    Ok(parse_vector_with(s, parse_token)?)
}

#[derive(Debug, Serialize)]
struct JsonParams {
    delta: String,
    a: String,
    b: String,
}

#[derive(Debug, Serialize)]
struct JsonVerdict {
    verdict: &'static str,
    reason: Option<String>,
}

#[derive(Debug, Serialize)]
struct JsonBound {
    value: serde_json::Value,
    conditions: [bool; 4],
    attained: bool,
}

#[derive(Debug, Serialize)]
struct JsonProvenance {
    ell: u64,
    chops: Vec<ChopRecordJson>,
}

#[derive(Debug, Serialize)]
struct JsonClass {
    profile: CanonicalProfile,
    vertices: Vec<[String; 2]>,
    provenance: JsonProvenance,
}

#[derive(Debug, Serialize)]
struct JsonAudit {
    all_orders_count: usize,
    single_order_count: usize,
    agree: bool,
    missing_from_single_order: Vec<CanonicalProfile>,
    extra_in_single_order: Vec<CanonicalProfile>,
}

#[derive(Debug, Serialize)]
struct JsonSeed {
    ell: u64,
    vertices: Vec<[String; 2]>,
    profile: EdgeProfile,
}

#[derive(Debug, Serialize)]
struct JsonReport {
    input: String,
    reduced_vector: String,
    params: JsonParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    nonexistence: Option<JsonVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<JsonBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classes: Option<Vec<JsonClass>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    order_audit: Option<JsonAudit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seeds: Option<Vec<JsonSeed>>,
}

fn json_params(p: &DerivedParams) -> JsonParams {
    JsonParams { delta: format_rational(&p.delta), a: format_rational(&p.a), b: format_rational(&p.b) }
}

fn json_verdict(v: &Verdict) -> JsonVerdict {
    JsonVerdict { verdict: v.label(), reason: v.reason().map(|r| r.to_string()) }
}

/// Bounds that fit in 64 bits are numbers; larger ones are decimal strings.
fn json_bound(b: &BoundReport) -> JsonBound {
    let value = match b.bound.to_u64() {
        Some(n) => serde_json::Value::from(n),
        None => serde_json::Value::from(b.bound.to_string()),
    };
    JsonBound { value, conditions: b.conditions, attained: b.attained }
}

fn json_classes(result: &CensusResult) -> Vec<JsonClass> {
    result
        .classes
        .iter()
        .map(|c| JsonClass {
            profile: c.canonical.clone(),
            vertices: vertices_to_strings(&c.representative),
            provenance: JsonProvenance {
                ell: c.provenance.ell,
                chops: c.provenance.chops.iter().map(ChopRecordJson::from).collect(),
            },
        })
        .collect()
}

fn json_audit(a: &OrderAudit) -> JsonAudit {
    JsonAudit {
        all_orders_count: a.all_orders,
        single_order_count: a.written_order,
        agree: a.agrees(),
        missing_from_single_order: a.missing_from_written.clone(),
        extra_in_single_order: a.extra_in_written.clone(),
    }
}

/// Serialises a full census result with the documented schema.
pub fn emit_json(input: &BlowupVector, result: &CensusResult) -> String {
    let report = JsonReport {
        input: input.to_string(),
        reduced_vector: result.vector.to_string(),
        params: json_params(&result.params),
        nonexistence: Some(json_verdict(&result.nonexistence)),
        bound: Some(json_bound(&result.bound_report)),
        count: Some(result.count()),
        classes: Some(json_classes(result)),
        order_audit: None,
        seeds: None,
    };
    to_json(&report)
}

fn to_json(report: &JsonReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialises");
    s.push('\n');
    s
}

const CANVAS: f64 = 480.0;
const MARGIN: f64 = 70.0;

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// SVG drawing of a polygon with `(k, a)` labels on its edges. The bounding
/// box is scaled uniformly into a fixed canvas.
pub fn render_svg(p: &DelzantPolygon) -> String {
    let pts: Vec<(f64, f64)> = p.vertices().iter().map(|v| (to_f64(&v.x), to_f64(&v.y))).collect();
    let min_x = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let max_x = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let min_y = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max_y = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let extent = (max_x - min_x).max(max_y - min_y);
    let scale = if extent > 0.0 { (CANVAS - 2.0 * MARGIN) / extent } else { 1.0 };
    let map = |(x, y): (f64, f64)| (MARGIN + (x - min_x) * scale, CANVAS - MARGIN - (y - min_y) * scale);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let points: Vec<String> = pts
        .iter()
        .map(|&p| {
            let (x, y) = map(p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ =
        writeln!(out, r##"<polygon points="{}" fill="#dde8f5" stroke="#1f3b5c" stroke-width="2"/>"##, points.join(" "));
    let profile = p.edge_profile();
    let n = pts.len();
    for (j, (edge, entry)) in p.edges().iter().zip(profile.entries()).enumerate() {
        let (x0, y0) = map(pts[j]);
        let (x1, y1) = map(pts[(j + 1) % n]);
        // screen y points down, so the outward normal flips its y sign
        let (nx, ny) = (-edge.normal.x as f64, edge.normal.y as f64);
        let len = nx.hypot(ny);
        let (lx, ly) = ((x0 + x1) / 2.0 + 22.0 * nx / len, (y0 + y1) / 2.0 + 22.0 * ny / len);
        let _ = writeln!(
            out,
            r#"<text x="{lx:.2}" y="{ly:.2}" font-family="monospace" font-size="13" text-anchor="middle" dominant-baseline="middle">({}, {})</text>"#,
            entry.k,
            format_rational(&entry.size)
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn emit_svg(p: &DelzantPolygon, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, render_svg(p)).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write_class_svgs(dir: &Path, result: &CensusResult) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    for (i, c) in result.classes.iter().enumerate() {
        emit_svg(&c.representative, &dir.join(format!("class-{i:03}.svg")))?;
    }
    Ok(())
}

fn table_header(out: &mut String, input: &BlowupVector, reduced: &BlowupVector, params: &DerivedParams) {
    let _ = writeln!(out, "input           {input}");
    let _ = writeln!(out, "reduced vector  {reduced}");
    let _ = writeln!(out, "parameters      delta = {}, a = {}, b = {}", params.delta, params.a, params.b);
}

fn table_verdict(out: &mut String, v: &Verdict) {
    match v.reason() {
        Some(r) => {
            let _ = writeln!(out, "nonexistence    {} ({r})", v.label());
        }
        None => {
            let _ = writeln!(out, "nonexistence    {}", v.label());
        }
    }
}

fn table_bound(out: &mut String, b: &BoundReport) {
    let marks: Vec<&str> = b.conditions.iter().map(|c| if *c { "yes" } else { "no" }).collect();
    let _ = writeln!(
        out,
        "upper bound     {} (conditions i-iv: {}; attained: {})",
        b.bound,
        marks.join(" "),
        if b.attained { "yes" } else { "no" }
    );
}

/// Runs one invocation and returns what should be printed on stdout.
pub fn run(cfg: &RunConfig) -> Result<String, CliError> {
    let input = parse_vector(&cfg.vector)?;
    let reduced = input.reduce()?;
    let params = reduced.derived_params()?;
    let jobs = Jobs(cfg.jobs.map(|n| n as usize));
    let json = cfg.format == Format::Json;

    let mut report = JsonReport {
        input: input.to_string(),
        reduced_vector: reduced.to_string(),
        params: json_params(&params),
        nonexistence: None,
        bound: None,
        count: None,
        classes: None,
        order_audit: None,
        seeds: None,
    };
    let mut table = String::new();
    table_header(&mut table, &input, &reduced, &params);

    if cfg.seed_list {
        let seeds = trapezoid_seeds(&params).map_err(CensusError::from)?;
        let _ = writeln!(table, "seeds           {}", seeds.len());
        for s in &seeds {
            let _ = writeln!(table, "  ell = {:<4} {}   {}", s.ell, s.polygon, s.polygon.edge_profile());
        }
        report.seeds = Some(
            seeds
                .iter()
                .map(|s| JsonSeed {
                    ell: s.ell,
                    vertices: vertices_to_strings(&s.polygon),
                    profile: s.polygon.edge_profile(),
                })
                .collect(),
        );
        return Ok(if json { to_json(&report) } else { table });
    }

    match cfg.mode {
        Mode::Reduce => {}
        Mode::Check => {
            let v = reduced.nonexistence_check()?;
            table_verdict(&mut table, &v);
            report.nonexistence = Some(json_verdict(&v));
        }
        Mode::Bound => {
            let b = reduced.bound_report()?;
            table_bound(&mut table, &b);
            report.bound = Some(json_bound(&b));
        }
        Mode::Census => {
            let order = if cfg.single_order { SearchOrder::WrittenOrder } else { SearchOrder::AllOrders };
            let result = run_census(&reduced, CensusOptions { order, jobs })?;
            table_verdict(&mut table, &result.nonexistence);
            table_bound(&mut table, &result.bound_report);
            let _ = writeln!(table, "toric actions   {}", result.count());
            for (i, c) in result.classes.iter().enumerate() {
                let _ = writeln!(table, "  [{i:03}] ell = {:<3} {}", c.provenance.ell, c.canonical);
            }
            if cfg.single_order {
                let all = run_census(&reduced, CensusOptions { order: SearchOrder::AllOrders, jobs })?;
                let audit = OrderAudit::compare(&all, &result);
                let _ = writeln!(
                    table,
                    "order audit     single-order {} vs all-orders {}: {}",
                    audit.written_order,
                    audit.all_orders,
                    if audit.agrees() { "agree" } else { "DISCREPANCY" }
                );
                report.order_audit = Some(json_audit(&audit));
            }
            if let Some(dir) = &cfg.svg_dir {
                write_class_svgs(dir, &result)?;
            }
            report.nonexistence = Some(json_verdict(&result.nonexistence));
            report.bound = Some(json_bound(&result.bound_report));
            report.count = Some(result.count());
            report.classes = Some(json_classes(&result));
        }
    }
    Ok(if json { to_json(&report) } else { table })
}
