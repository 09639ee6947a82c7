//! Output documents and their CSV, JSON and SVG renderings.
//!
//! Every document carries the resolved configuration. Numbers are written
//! with Rust's shortest round-trip formatting, so no precision is lost.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::ConfigEcho;
use crate::contour::ContourSet;
use crate::explore::{SpanCurvePoint, SweepGrid};
use crate::impairments::SnrBudget;
use crate::system::{OperatingPoint, PowerFeedReport};
use crate::transceiver::TransceiverModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(format!("unknown format {other:?} (expected csv, json or svg)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentSnrDb {
    pub ase: Option<f64>,
    pub nli: Option<f64>,
    pub imi: Option<f64>,
    pub rbs: Option<f64>,
}

impl From<&SnrBudget> for ComponentSnrDb {
    fn from(b: &SnrBudget) -> Self {
        Self {
            ase: SnrBudget::component_db(b.inv_snr_ase),
            nli: SnrBudget::component_db(b.inv_snr_nli),
            imi: SnrBudget::component_db(b.inv_snr_imi),
            rbs: SnrBudget::component_db(b.inv_snr_rbs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub config: ConfigEcho,
    pub transceiver: TransceiverModel,
    pub operating_point: OperatingPoint,
    pub include_rbs: bool,
    pub n_spans: usize,
    pub span_km: f64,
    pub n_repeaters: usize,
    pub n_channels: usize,
    pub gain_db: f64,
    pub per_channel_launch_dbm: f64,
    pub budget: SnrBudget,
    pub component_snr_db: ComponentSnrDb,
    pub channel_rate_gbps: f64,
    pub throughput_tbps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourReport {
    pub config: ConfigEcho,
    pub transceiver: TransceiverModel,
    pub include_rbs: bool,
    pub grid: SweepGrid,
    pub contours: Vec<ContourSet>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanCurve {
    pub loss_db_per_km: f64,
    pub points: Vec<SpanCurvePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanCurveReport {
    pub config: ConfigEcho,
    pub transceiver: TransceiverModel,
    pub include_rbs: bool,
    pub target_tbps: f64,
    pub curves: Vec<SpanCurve>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RbsRow {
    pub loss_db_per_km: f64,
    pub span_km: f64,
    pub span_loss_db: f64,
    pub enhancement: f64,
    pub launch_w: f64,
    pub p_rbs_w: f64,
    pub gsnr_rbs_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RbsReport {
    pub config: ConfigEcho,
    pub total_length_km: f64,
    pub backscatter_db_per_km: f64,
    pub rows: Vec<RbsRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerFeedDocument {
    pub config: ConfigEcho,
    pub n_spans: usize,
    pub n_repeaters: usize,
    pub power: PowerFeedReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatencyReport {
    pub config: ConfigEcho,
    pub total_length_km: f64,
    pub hollow_core_group_index: f64,
    pub hollow_core_ms: f64,
    pub solid_core_group_index: f64,
    pub solid_core_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Document {
    Budget(BudgetReport),
    Contour(ContourReport),
    SpanCurve(SpanCurveReport),
    Rbs(RbsReport),
    Powerfeed(PowerFeedDocument),
    Latency(LatencyReport),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnsupportedFormat {
    pub command: &'static str,
    pub format: Format,
}

impl std::fmt::Display for UnsupportedFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} output is not available for `{}`", fmt_name(self.format), self.command)
    }
}

impl std::error::Error for UnsupportedFormat {}

fn fmt_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
        Format::Svg => "svg",
    }
}

impl Document {
    pub fn command(&self) -> &'static str {
        match self {
            Document::Budget(_) => "budget",
            Document::Contour(_) => "contour",
            Document::SpanCurve(_) => "span-curve",
            Document::Rbs(_) => "rbs",
            Document::Powerfeed(_) => "powerfeed",
            Document::Latency(_) => "latency",
        }
    }

    pub fn config(&self) -> &ConfigEcho {
        match self {
            Document::Budget(d) => &d.config,
            Document::Contour(d) => &d.config,
            Document::SpanCurve(d) => &d.config,
            Document::Rbs(d) => &d.config,
            Document::Powerfeed(d) => &d.config,
            Document::Latency(d) => &d.config,
        }
    }

    pub fn render(&self, format: Format) -> Result<String, UnsupportedFormat> {
        match (format, self) {
            (Format::Json, doc) => Ok(to_json(doc)),
            (Format::Csv, Document::Contour(d)) => Ok(grid_csv(&d.grid, &d.config, Some(&d.transceiver))),
            (Format::Csv, Document::SpanCurve(d)) => Ok(span_curve_csv(d)),
            (Format::Csv, Document::Rbs(d)) => Ok(rbs_csv(d)),
            (Format::Csv, doc) => Ok(key_value_csv(doc)),
            (Format::Svg, Document::Contour(d)) => Ok(contour_svg(d)),
            (Format::Svg, doc) => Err(UnsupportedFormat {
                command: doc.command(),
                format,
            }),
        }
    }
}

pub fn to_json(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents contain only finite numbers");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> serde_json::Result<Document> {
    serde_json::from_str(text)
}

fn echo_header(out: &mut String, config: &ConfigEcho, trx: Option<&TransceiverModel>) {
    for (section, keys) in config {
        for (key, value) in keys {
            let _ = writeln!(out, "# {section}.{key} = {value}");
        }
    }
    if let Some(trx) = trx {
        match trx {
            TransceiverModel::ShannonGap { gap_db, max_rate_gbps } => {
                let _ = writeln!(out, "# resolved transceiver.gap_db = {gap_db:?}");
                if let Some(cap) = max_rate_gbps {
                    let _ = writeln!(out, "# resolved transceiver.max_rate_gbps = {cap:?}");
                }
            }
            TransceiverModel::Tabulated { points: t } => {
                let _ = writeln!(out, "# resolved transceiver.table_points = {}", t.points().len());
            }
        }
    }
}

/// One row per lattice point, loss-major.
pub fn grid_csv(grid: &SweepGrid, config: &ConfigEcho, trx: Option<&TransceiverModel>) -> String {
    let mut out = String::new();
    echo_header(&mut out, config, trx);
    out.push_str("loss_db_per_km,edfa_power_dbm,gsnr_db,throughput_tbps\n");
    for (i, loss) in grid.loss_axis.iter().enumerate() {
        for (j, power) in grid.power_axis.iter().enumerate() {
            let _ = writeln!(
                out,
                "{loss:?},{power:?},{:?},{:?}",
                grid.gsnr_db[i][j], grid.throughput_tbps[i][j]
            );
        }
    }
    out
}

fn span_curve_csv(d: &SpanCurveReport) -> String {
    let mut out = String::new();
    echo_header(&mut out, &d.config, Some(&d.transceiver));
    let _ = writeln!(out, "# target_tbps = {:?}", d.target_tbps);
    let _ = writeln!(out, "# include_rbs = {}", d.include_rbs);
    out.push_str("loss_db_per_km,requested_span_km,span_km,n_spans,required_edfa_dbm\n");
    for curve in &d.curves {
        for p in &curve.points {
            let required = p.required_dbm.map(|r| format!("{r:?}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{:?},{:?},{:?},{},{required}",
                curve.loss_db_per_km, p.requested_span_km, p.span_km, p.n_spans
            );
        }
    }
    out
}

fn rbs_csv(d: &RbsReport) -> String {
    let mut out = String::new();
    echo_header(&mut out, &d.config, None);
    out.push_str("loss_db_per_km,span_km,span_loss_db,enhancement,launch_w,p_rbs_w,gsnr_rbs_db\n");
    for r in &d.rows {
        let _ = writeln!(
            out,
            "{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
            r.loss_db_per_km, r.span_km, r.span_loss_db, r.enhancement, r.launch_w, r.p_rbs_w, r.gsnr_rbs_db
        );
    }
    out
}

fn key_value_csv(doc: &Document) -> String {
    let mut out = String::new();
    let trx = match doc {
        Document::Budget(d) => Some(&d.transceiver),
        _ => None,
    };
    echo_header(&mut out, doc.config(), trx);
    out.push_str("quantity,value\n");
    let mut row = |k: &str, v: String| {
        let _ = writeln!(out, "{k},{v}");
    };
    let opt = |x: Option<f64>| x.map(|v| format!("{v:?}")).unwrap_or_default();
    match doc {
        Document::Budget(d) => {
            row("loss_db_per_km", format!("{:?}", d.operating_point.loss_db_per_km));
            row("edfa_power_dbm", format!("{:?}", d.operating_point.edfa_total_output_dbm));
            row("include_rbs", d.include_rbs.to_string());
            row("n_spans", d.n_spans.to_string());
            row("span_km", format!("{:?}", d.span_km));
            row("n_repeaters", d.n_repeaters.to_string());
            row("n_channels", d.n_channels.to_string());
            row("gain_db", format!("{:?}", d.gain_db));
            row("per_channel_launch_dbm", format!("{:?}", d.per_channel_launch_dbm));
            row("inv_snr_ase", format!("{:?}", d.budget.inv_snr_ase));
            row("inv_snr_nli", format!("{:?}", d.budget.inv_snr_nli));
            row("inv_snr_imi", format!("{:?}", d.budget.inv_snr_imi));
            row("inv_snr_rbs", format!("{:?}", d.budget.inv_snr_rbs));
            row("snr_ase_db", opt(d.component_snr_db.ase));
            row("snr_nli_db", opt(d.component_snr_db.nli));
            row("snr_imi_db", opt(d.component_snr_db.imi));
            row("snr_rbs_db", opt(d.component_snr_db.rbs));
            row("gsnr_linear", format!("{:?}", d.budget.gsnr_linear));
            row("gsnr_db", format!("{:?}", d.budget.gsnr_db));
            row("channel_rate_gbps", format!("{:?}", d.channel_rate_gbps));
            row("throughput_tbps", format!("{:?}", d.throughput_tbps));
        }
        Document::Powerfeed(d) => {
            row("n_spans", d.n_spans.to_string());
            row("n_repeaters", d.n_repeaters.to_string());
            row("cable_w", format!("{:?}", d.power.cable_w));
            row("repeaters_w", format!("{:?}", d.power.repeaters_w));
            row("total_w", format!("{:?}", d.power.total_w));
            row("within_limit", d.power.within_limit.to_string());
        }
        Document::Latency(d) => {
            row("total_length_km", format!("{:?}", d.total_length_km));
            row("hollow_core_group_index", format!("{:?}", d.hollow_core_group_index));
            row("hollow_core_ms", format!("{:?}", d.hollow_core_ms));
            row("solid_core_group_index", format!("{:?}", d.solid_core_group_index));
            row("solid_core_ms", format!("{:?}", d.solid_core_ms));
        }
        Document::Contour(_) | Document::SpanCurve(_) | Document::Rbs(_) => {
            unreachable!("tabular documents have their own writers")
        }
    }
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Contour lines on (loss, power) axes. One `<polyline>` per extracted
/// polyline, nothing else uses that element.
pub fn contour_svg(d: &ContourReport) -> String {
    let (w, h) = (720.0, 540.0);
    let (left, right, top, bottom) = (80.0, 30.0, 30.0, 60.0);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let first = |a: &[f64]| a.first().copied().unwrap_or(0.0);
    let last = |a: &[f64]| a.last().copied().unwrap_or(1.0);
    let (x0, x1) = (first(&d.grid.loss_axis), last(&d.grid.loss_axis));
    let (y0, y1) = (first(&d.grid.power_axis), last(&d.grid.power_axis));
    let span = |a: f64, b: f64| if b > a { b - a } else { 1.0 };
    let sx = |x: f64| left + (x - x0) / span(x0, x1) * pw;
    let sy = |y: f64| top + ph - (y - y0) / span(y0, y1) * ph;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    out.push_str("<metadata>\n");
    let mut echo = String::new();
    echo_header(&mut echo, &d.config, Some(&d.transceiver));
    out.push_str(&xml_escape(&echo));
    out.push_str("</metadata>\n");
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );

    // ticks
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let xv = x0 + t * (x1 - x0);
        let yv = y0 + t * (y1 - y0);
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#,
            top + ph,
            top + ph + 5.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{px:.2}" y="{:.2}" font-size="12" text-anchor="middle">{xv:.4}</text>"#,
            top + ph + 20.0
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{left}" y2="{py:.2}" stroke="black"/>"#,
            left - 5.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{yv:.1}</text>"#,
            left - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">fiber loss (dB/km)</text>"#,
        left + pw / 2.0,
        h - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 20 {:.2})">EDFA output power (dBm)</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    );

    for (k, set) in d.contours.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let unit = match set.field {
            crate::contour::Field::Gsnr => "dB",
            crate::contour::Field::Throughput => "Tb/s",
        };
        let _ = writeln!(
            out,
            r#"<g class="contour" data-field="{}" data-level="{:?}" stroke="{colour}" fill="none" stroke-width="2">"#,
            set.field.name(),
            set.level
        );
        for line in &set.polylines {
            let pts: Vec<String> = line
                .points
                .iter()
                .map(|p| format!("{:.3},{:.3}", sx(p.loss_db_per_km), sy(p.edfa_power_dbm)))
                .collect();
            let _ = writeln!(out, r#"<polyline points="{}"/>"#, pts.join(" "));
        }
        out.push_str("</g>\n");
        if let Some(anchor) = set.polylines.iter().flat_map(|l| l.points.first()).next() {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-size="12" fill="{colour}">{} {unit}</text>"#,
                sx(anchor.loss_db_per_km) + 4.0,
                sy(anchor.edfa_power_dbm) - 4.0,
                set.level
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;
    use crate::contour::{extract_contour, Field};

    fn small_grid() -> SweepGrid {
        SweepGrid {
            loss_axis: vec![0.05, 0.07],
            power_axis: vec![18.0, 22.5],
            gsnr_db: vec![vec![15.0, 17.0], vec![14.0, 16.0]],
            throughput_tbps: vec![vec![900.0, 1100.0], vec![800.0, 1000.5]],
        }
    }

    #[test]
    fn grid_csv_layout() {
        let cfg = RunConfig::default().echo();
        let csv = grid_csv(&small_grid(), &cfg, None);
        let data: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data.len(), 5);
        assert_eq!(data[0], "loss_db_per_km,edfa_power_dbm,gsnr_db,throughput_tbps");
        assert_eq!(data[1], "0.05,18.0,15.0,900.0");
        assert_eq!(data[2], "0.05,22.5,17.0,1100.0");
        assert_eq!(data[3], "0.07,18.0,14.0,800.0");
        assert!(csv.contains("# fiber.loss_db_per_km = 0.06"));
    }

    #[test]
    fn full_precision_numbers() {
        let mut g = small_grid();
        g.gsnr_db[0][0] = 15.951_352_284_106_78;
        let csv = grid_csv(&g, &RunConfig::default().echo(), None);
        assert!(csv.contains("15.95135228410678"));
    }

    #[test]
    fn svg_polylines_match_extraction() {
        let grid = small_grid();
        let contours = vec![
            extract_contour(&grid, Field::Throughput, 1000.0).unwrap(),
            extract_contour(&grid, Field::Gsnr, 15.5).unwrap(),
        ];
        let expected: usize = contours.iter().map(|c| c.polylines.len()).sum();
        let doc = ContourReport {
            config: RunConfig::default().echo(),
            transceiver: TransceiverModel::shannon(4.6),
            include_rbs: false,
            grid,
            contours,
        };
        let svg = contour_svg(&doc);
        assert_eq!(svg.matches("<polyline").count(), expected);
        assert!(svg.contains("fiber loss (dB/km)"));
        assert!(svg.contains("1000 Tb/s"));
        assert!(Document::Budget(dummy_budget()).render(Format::Svg).is_err());
    }

    fn dummy_budget() -> BudgetReport {
        let budget = crate::impairments::combine_gsnr(crate::impairments::InverseSnr {
            ase: 0.02,
            ..Default::default()
        })
        .unwrap();
        BudgetReport {
            config: RunConfig::default().echo(),
            transceiver: TransceiverModel::shannon(4.64),
            operating_point: OperatingPoint::new(0.06, 20.3),
            include_rbs: false,
            n_spans: 33,
            span_km: 200.0,
            n_repeaters: 32,
            n_channels: 66,
            gain_db: 16.0,
            per_channel_launch_dbm: 0.1,
            component_snr_db: ComponentSnrDb::from(&budget),
            budget,
            channel_rate_gbps: 582.75,
            throughput_tbps: 1000.0,
        }
    }

    #[test]
    fn json_round_trip() {
        let doc = Document::Budget(dummy_budget());
        assert_eq!(from_json(&to_json(&doc)).unwrap(), doc);
        assert!(to_json(&doc).contains("\"command\": \"budget\""));
    }

    #[test]
    fn key_value_csv_has_component_rows() {
        let csv = Document::Budget(dummy_budget()).render(Format::Csv).unwrap();
        assert!(csv.contains("\nsnr_nli_db,\n"));
        assert!(csv.contains("\ngsnr_db,16.989700043360187\n"));
        assert!(csv.contains("# resolved transceiver.gap_db = 4.64"));
    }
}
