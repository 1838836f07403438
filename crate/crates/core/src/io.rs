//! File formats: pair CSV input, report rendering, plot data and SVG charts.
//!
//! Reports render finite numbers with 6 significant digits, so golden
//! outputs stay stable across platforms. The `table` format prints 3
//! decimals for reading at a glance.
//! Non-finite metric values render as `inf` and `undef`.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classic::{ExtendedValue, MetricReport};
use crate::error::{Error, Result};
use crate::series::{DemandSeries, EvaluationPair};
use crate::spec::{AlphaSweepPoint, CostBreakdown, SpecParams};

pub const PAIR_HEADER: [&str; 3] = ["t", "actual", "forecast"];

fn line_of(pos: Option<&csv::Position>) -> u64 {
    pos.map(|p| p.line()).unwrap_or(0)
}

fn parse_field(value: &str, name: &str, line: u64) -> Result<f64> {
    value.parse::<f64>().map_err(|e| Error::MalformedRow {
        line,
        reason: format!("{name} `{value}`: {e}"),
    })
}

/// Reads a `t,actual,forecast` CSV. Rows must be numbered 1..n in order.
pub fn parse_csv<R: Read>(reader: R) -> Result<EvaluationPair> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().map_err(|_| Error::MissingHeader)?;
    if header.iter().ne(PAIR_HEADER) {
        return Err(Error::MissingHeader);
    }

    let mut actual = Vec::new();
    let mut forecast = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::MalformedRow {
            line: line_of(e.position()),
            reason: e.to_string(),
        })?;
        let line = line_of(record.position());
        let t: u64 = record[0].parse().map_err(|e| Error::MalformedRow {
            line,
            reason: format!("t `{}`: {e}", &record[0]),
        })?;
        let expected = actual.len() as u64 + 1;
        if t != expected {
            return Err(Error::NonContiguousTime {
                line,
                expected,
                found: t,
            });
        }
        actual.push(parse_field(&record[1], "actual", line)?);
        forecast.push(parse_field(&record[2], "forecast", line)?);
    }
    EvaluationPair::from_raw(&actual, &forecast)
}

pub fn read_pair(path: impl AsRef<Path>) -> Result<EvaluationPair> {
    parse_csv(std::fs::File::open(path)?)
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// Writes a pair in the format [`parse_csv`] reads. Values use the
/// shortest representation that parses back to the same `f64`.
pub fn write_csv<W: Write>(pair: &EvaluationPair, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(PAIR_HEADER).map_err(csv_error)?;
    for (t, y, f) in pair.steps() {
        wtr.write_record([t.to_string(), y.to_string(), f.to_string()])
            .map_err(csv_error)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_demand_csv<W: Write>(series: &DemandSeries, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["t", "actual"]).map_err(csv_error)?;
    for (i, y) in series.values().iter().enumerate() {
        wtr.write_record([(i + 1).to_string(), y.to_string()])
            .map_err(csv_error)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Rounds to 6 significant digits.
pub fn round_sig6(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.5e}").parse().unwrap_or(v)
}

pub fn format_sig6(v: f64) -> String {
    let r = round_sig6(v);
    if r == 0.0 {
        "0".to_string()
    } else {
        r.to_string()
    }
}

fn render_value(v: ExtendedValue, render: impl Fn(f64) -> String) -> String {
    match v {
        ExtendedValue::Finite(x) => render(x),
        other => other.to_string(),
    }
}

/// Everything needed to rerun a command and get the same outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
    pub version: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: Vec<String>, config: serde_json::Value) -> Self {
        Self {
            command,
            config,
            seeds: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Table,
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Self::Table),
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => Err(Error::config("format", format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    metrics: serde_json::Map<String, serde_json::Value>,
    params: SpecParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    manifest: Option<&'a RunManifest>,
}

pub fn render_report(report: &MetricReport, format: ReportFormat, manifest: Option<&RunManifest>) -> Result<String> {
    let mut out = String::new();
    match format {
        ReportFormat::Table => {
            let _ = writeln!(
                out,
                "alpha1 {} alpha2 {}",
                report.params.alpha1(),
                report.params.alpha2()
            );
            for (name, v) in &report.entries {
                let _ = writeln!(out, "{} {}", name.label(), render_value(*v, |x| format!("{x:.3}")));
            }
        }
        ReportFormat::Csv => {
            out.push_str("metric,value\n");
            for (name, v) in &report.entries {
                let _ = writeln!(out, "{name},{}", render_value(*v, format_sig6));
            }
        }
        ReportFormat::Json => {
            let metrics = report
                .entries
                .iter()
                .map(|(name, v)| {
                    let value = match v {
                        ExtendedValue::Finite(x) => serde_json::json!(round_sig6(*x)),
                        other => serde_json::Value::String(other.to_string()),
                    };
                    (name.to_string(), value)
                })
                .collect();
            let doc = JsonReport {
                metrics,
                params: report.params,
                manifest,
            };
            out = serde_json::to_string_pretty(&doc)?;
            out.push('\n');
        }
    }
    Ok(out)
}

/// Per-step contributions as `t,opportunity,stock`.
pub fn decomposition_csv(breakdown: &CostBreakdown) -> String {
    let mut out = String::from("t,opportunity,stock\n");
    for t in 1..=breakdown.n() {
        let (o, s) = breakdown.at(t);
        let _ = writeln!(out, "{t},{},{}", format_sig6(o), format_sig6(s));
    }
    out
}

/// One row per grid point, one SPEC column per curve.
pub fn sweep_csv(curves: &[(String, Vec<AlphaSweepPoint>)]) -> Result<String> {
    let Some((_, first)) = curves.first() else {
        return Err(Error::config("inputs", "at least one curve is required"));
    };
    if curves.iter().any(|(_, c)| c.len() != first.len()) {
        return Err(Error::config("inputs", "curves must share one grid"));
    }
    let mut out = String::from("alpha1,alpha2");
    for (name, _) in curves {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (k, p) in first.iter().enumerate() {
        out.push_str(&format!("{},{}", format_sig6(p.alpha1), format_sig6(p.alpha2)));
        for (_, c) in curves {
            out.push(',');
            out.push_str(&format_sig6(c[k].spec_value));
        }
        out.push('\n');
    }
    Ok(out)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 48.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn svg_open(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
}

fn svg_axes(out: &mut String, x_label: &str, y_label: &str, y_max: f64) {
    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    let _ = writeln!(
        out,
        r#"<g class="axes" stroke="black" stroke-width="1"><line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/></g>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" text-anchor="middle" font-size="12" transform="rotate(-90 14 {})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end" font-size="10">{}</text>"#,
        x0 - 4.0,
        y1 + 4.0,
        format_sig6(y_max)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end" font-size="10">0</text>"#,
        x0 - 4.0,
        y0
    );
}

fn plot_height() -> f64 {
    HEIGHT - 2.0 * MARGIN
}

/// Stacked bars of opportunity (bottom) and stock-keeping (top) cost, one
/// `<g class="step">` per time step.
pub fn decomposition_svg(breakdown: &CostBreakdown) -> String {
    let n = breakdown.n();
    let y_max = (1..=n)
        .map(|t| {
            let (o, s) = breakdown.at(t);
            o + s
        })
        .fold(0.0_f64, f64::max);
    let scale = if y_max > 0.0 { plot_height() / y_max } else { 0.0 };
    let slot = (WIDTH - 2.0 * MARGIN) / n.max(1) as f64;
    let bar = slot * 0.7;

    let mut out = String::new();
    svg_open(&mut out, "SPEC composition");
    svg_axes(&mut out, "t", "cost", y_max);
    for t in 1..=n {
        let (o, s) = breakdown.at(t);
        let x = MARGIN + (t - 1) as f64 * slot + (slot - bar) / 2.0;
        let base = HEIGHT - MARGIN;
        let (ho, hs) = (o * scale, s * scale);
        let _ = writeln!(
            out,
            r##"<g class="step" data-t="{t}"><rect class="opportunity" x="{x:.2}" y="{:.2}" width="{bar:.2}" height="{ho:.2}" fill="{}"/><rect class="stock" x="{x:.2}" y="{:.2}" width="{bar:.2}" height="{hs:.2}" fill="{}"/><text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="9">{t}</text></g>"##,
            base - ho,
            PALETTE[0],
            base - ho - hs,
            PALETTE[1],
            x + bar / 2.0,
            base + 12.0,
        );
    }
    let _ = writeln!(
        out,
        r#"<g class="legend" font-size="11"><rect x="{0}" y="10" width="10" height="10" fill="{1}"/><text x="{2}" y="19">opportunity</text><rect x="{3}" y="10" width="10" height="10" fill="{4}"/><text x="{5}" y="19">stock-keeping</text></g>"#,
        MARGIN,
        PALETTE[0],
        MARGIN + 14.0,
        MARGIN + 100.0,
        PALETTE[1],
        MARGIN + 114.0
    );
    out.push_str("</svg>\n");
    out
}

/// One polyline of SPEC over `alpha1` per curve.
pub fn sweep_svg(curves: &[(String, Vec<AlphaSweepPoint>)]) -> String {
    let y_max = curves
        .iter()
        .flat_map(|(_, c)| c.iter().map(|p| p.spec_value))
        .fold(0.0_f64, f64::max);
    let scale = if y_max > 0.0 { plot_height() / y_max } else { 0.0 };
    let span = WIDTH - 2.0 * MARGIN;

    let mut out = String::new();
    svg_open(&mut out, "SPEC sensitivity to alpha1");
    svg_axes(&mut out, "alpha1 (alpha2 = 1 - alpha1)", "SPEC", y_max);
    for (i, (name, curve)) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = curve
            .iter()
            .map(|p| {
                format!(
                    "{:.2},{:.2}",
                    MARGIN + p.alpha1 * span,
                    HEIGHT - MARGIN - p.spec_value * scale
                )
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="curve" data-name="{}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            escape(name),
            points.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11" fill="{color}">{}</text>"#,
            MARGIN + 8.0 + 120.0 * i as f64,
            20.0,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classic::{compute, MetricName};
    use crate::fixtures;

    fn parse(text: &str) -> Result<EvaluationPair> {
        parse_csv(text.as_bytes())
    }

    #[test]
    fn parses_and_round_trips() {
        let pair = fixtures::model_b();
        let mut buf = Vec::new();
        write_csv(&pair, &mut buf).unwrap();
        assert_eq!(parse(std::str::from_utf8(&buf).unwrap()).unwrap(), pair);
    }

    #[test]
    fn crlf_and_whitespace_accepted() {
        let pair = parse("t,actual,forecast\r\n1, 2 ,0.5\r\n2,0,1\r\n").unwrap();
        assert_eq!(pair.actual().values(), &[2.0, 0.0]);
        assert_eq!(pair.forecast().values(), &[0.5, 1.0]);
    }

    #[test]
    fn header_only_is_empty() {
        assert!(matches!(parse("t,actual,forecast\n"), Err(Error::EmptySeries)));
    }

    #[test]
    fn wrong_header_rejected() {
        assert!(matches!(parse("time,y,f\n1,1,1\n"), Err(Error::MissingHeader)));
        assert!(matches!(parse(""), Err(Error::MissingHeader)));
    }

    #[test]
    fn repeated_t_rejected() {
        let err = parse("t,actual,forecast\n1,1,1\n1,2,2\n").unwrap_err();
        assert!(
            matches!(
                err,
                Error::NonContiguousTime {
                    line: 3,
                    expected: 2,
                    found: 1
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn malformed_rows_rejected() {
        assert!(matches!(
            parse("t,actual,forecast\n1,x,1\n"),
            Err(Error::MalformedRow { line: 2, .. })
        ));
        assert!(matches!(
            parse("t,actual,forecast\n1,1\n"),
            Err(Error::MalformedRow { .. })
        ));
        assert!(matches!(
            parse("t,actual,forecast\n1,-1,1\n"),
            Err(Error::NegativeValue { t: 1, .. })
        ));
    }

    #[test]
    fn sig6_rounding() {
        assert_eq!(format_sig6(1.0 / 7.0), "0.142857");
        assert_eq!(format_sig6(37.0 / 14.0), "2.64286");
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(123456789.0), "123457000");
    }

    #[test]
    fn table_shows_three_decimals() {
        let report = compute(
            &fixtures::model_a(),
            SpecParams::default(),
            &[MetricName::Spec, MetricName::Mape],
        );
        let table = render_report(&report, ReportFormat::Table, None).unwrap();
        assert!(table.contains("SPEC 0.143"), "{table}");
        assert!(table.contains("MAPE inf"), "{table}");
    }

    #[test]
    fn json_renders_non_finite_as_strings() {
        let report = compute(&fixtures::model_a(), SpecParams::default(), &MetricName::TABLE);
        let json = render_report(&report, ReportFormat::Json, None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["metrics"]["mape"], "inf");
        assert_eq!(v["metrics"]["spec"], 0.142857);
        assert_eq!(v["params"]["alpha1"], 0.75);
    }

    #[test]
    fn sweep_csv_requires_shared_grid() {
        let a = crate::spec::spec_alpha_sweep(&fixtures::model_a(), 3).unwrap();
        let b = crate::spec::spec_alpha_sweep(&fixtures::model_b(), 4).unwrap();
        assert!(sweep_csv(&[("a".into(), a.clone()), ("b".into(), b)]).is_err());
        let csv = sweep_csv(&[("a".into(), a)]).unwrap();
        assert_eq!(csv.lines().next(), Some("alpha1,alpha2,a"));
        assert_eq!(csv.lines().count(), 4);
    }
}
