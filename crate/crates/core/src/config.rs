//! Run configuration: a sectioned `key = value` document (or the same tree
//! as JSON) covering every model parameter, with defaults for anything left
//! out.
//!
//! ```text
//! # comments start with '#'
//! [fiber]
//! loss_db_per_km = 0.05
//! link.total_length_km = 6600   # dotted keys work anywhere
//! ```

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::explore::{GridSpec, SolverSettings};
use crate::system::{LinkPlan, OperatingPoint, PowerFeedSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Number(f64),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Number(x) => write!(f, "{x:?}"),
            Value::Text(s) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransceiverKind {
    ShannonGap,
    Tabulated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransceiverConfig {
    pub model: TransceiverKind,
    /// `None` calibrates the gap against the reference operating point.
    pub gap_db: Option<f64>,
    pub max_rate_gbps: Option<f64>,
    /// Path of a `gsnr_db,net_rate_gbps` table for the tabulated model.
    pub table: Option<String>,
    pub calibration_point: OperatingPoint,
    pub calibration_target_tbps: f64,
    pub calibration_include_rbs: bool,
}

impl Default for TransceiverConfig {
    fn default() -> Self {
        Self {
            model: TransceiverKind::ShannonGap,
            gap_db: None,
            max_rate_gbps: None,
            table: None,
            calibration_point: OperatingPoint::new(0.06, 20.3),
            calibration_target_tbps: 1000.0,
            calibration_include_rbs: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub grid: GridSpec,
    pub span_min_km: f64,
    pub span_max_km: f64,
    pub span_points: usize,
    pub target_tbps: f64,
    pub include_rbs: bool,
    pub solver: SolverSettings,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            span_min_km: 150.0,
            span_max_km: 250.0,
            span_points: 101,
            target_tbps: 1000.0,
            include_rbs: false,
            solver: SolverSettings::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub plan: LinkPlan,
    /// Group index of solid-core fiber, used only for the latency comparison.
    pub scf_group_index: f64,
    pub transceiver: TransceiverConfig,
    pub powerfeed: PowerFeedSpec,
    pub sweep: SweepConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            plan: LinkPlan::default(),
            scf_group_index: 1.468,
            transceiver: TransceiverConfig::default(),
            powerfeed: PowerFeedSpec::default(),
            sweep: SweepConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    Syntax,
    UnknownKey,
    Type,
    Invariant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigIssue {
    pub kind: IssueKind,
    /// 1-based source line, when the issue comes from a specific line.
    pub line: Option<usize>,
    /// `section.key` the issue is about, when known.
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(key) = &self.key {
            write!(f, "{key}: ")?;
        }
        f.write_str(&self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigError {
    pub issues: Vec<ConfigIssue>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, issue) in self.issues.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

impl ConfigError {
    fn single(kind: IssueKind, line: Option<usize>, key: Option<String>, message: String) -> Self {
        Self {
            issues: vec![ConfigIssue {
                kind,
                line,
                key,
                message,
            }],
        }
    }
}

pub const SECTIONS: [&str; 7] = [
    "fiber",
    "span",
    "link",
    "amplifier",
    "transceiver",
    "powerfeed",
    "sweep",
];

fn number(v: &Value) -> Result<f64, String> {
    match v {
        Value::Number(x) if x.is_finite() => Ok(*x),
        Value::Number(x) => Err(format!("expected a finite number, got {x}")),
        other => Err(format!("expected a number, got {other}")),
    }
}

fn count(v: &Value) -> Result<usize, String> {
    let x = number(v)?;
    if x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
        Ok(x as usize)
    } else {
        Err(format!("expected a nonnegative integer, got {x}"))
    }
}

fn boolean(v: &Value) -> Result<bool, String> {
    match v {
        Value::Bool(b) => Ok(*b),
        other => Err(format!("expected true or false, got {other}")),
    }
}

/// A number, or one of the `absent` words meaning "not set".
fn optional_number(v: &Value, absent: &[&str]) -> Result<Option<f64>, String> {
    match v {
        Value::Text(s) if absent.contains(&s.as_str()) => Ok(None),
        Value::Number(_) => number(v).map(Some),
        other => Err(format!(
            "expected a number or one of {absent:?}, got {other}"
        )),
    }
}

enum SetError {
    Unknown,
    Type(String),
}

impl From<String> for SetError {
    fn from(s: String) -> Self {
        SetError::Type(s)
    }
}

impl RunConfig {
    fn set(&mut self, section: &str, key: &str, v: &Value) -> Result<(), SetError> {
        let plan = &mut self.plan;
        let trx = &mut self.transceiver;
        let feed = &mut self.powerfeed;
        let sweep = &mut self.sweep;
        match (section, key) {
            ("fiber", "loss_db_per_km") => plan.fiber.loss_db_per_km = number(v)?,
            ("fiber", "dispersion_ps_nm_km") => plan.fiber.dispersion_ps_nm_km = number(v)?,
            ("fiber", "gamma_per_w_km") => plan.fiber.gamma_per_w_km = number(v)?,
            ("fiber", "imi_db_per_km") => plan.fiber.imi_db_per_km = number(v)?,
            ("fiber", "backscatter_db_per_km") => plan.fiber.backscatter_db_per_km = number(v)?,
            ("fiber", "group_index") => plan.fiber.group_index = number(v)?,
            ("fiber", "scf_group_index") => self.scf_group_index = number(v)?,

            ("span", "length_km") => plan.span_length_km = number(v)?,

            ("link", "total_length_km") => plan.total_length_km = number(v)?,
            ("link", "band_hz") => plan.band_hz = number(v)?,
            ("link", "channel_spacing_hz") => plan.channel_spacing_hz = number(v)?,
            ("link", "symbol_rate_hz") => plan.symbol_rate_hz = number(v)?,
            ("link", "n_fibers_per_direction") => plan.n_fibers_per_direction = count(v)?,

            ("amplifier", "noise_figure_db") => plan.amp.noise_figure_db = number(v)?,
            ("amplifier", "total_output_power_dbm") => {
                plan.amp.total_output_power_dbm = number(v)?
            }
            ("amplifier", "pre_input_loss_db") => plan.amp.pre_input_loss_db = number(v)?,
            ("amplifier", "post_output_loss_db") => plan.amp.post_output_loss_db = number(v)?,

            ("transceiver", "model") => {
                trx.model = match v {
                    Value::Text(s) if s == "shannon_gap" => TransceiverKind::ShannonGap,
                    Value::Text(s) if s == "tabulated" => TransceiverKind::Tabulated,
                    other => {
                        return Err(SetError::Type(format!(
                            "expected \"shannon_gap\" or \"tabulated\", got {other}"
                        )))
                    }
                }
            }
            ("transceiver", "gap_db") => trx.gap_db = optional_number(v, &["auto"])?,
            ("transceiver", "max_rate_gbps") => {
                trx.max_rate_gbps = optional_number(v, &["unbounded"])?
            }
            ("transceiver", "table") => {
                trx.table = match v {
                    Value::Text(s) if s == "none" || s.is_empty() => None,
                    Value::Text(s) => Some(s.clone()),
                    other => return Err(SetError::Type(format!("expected a path, got {other}"))),
                }
            }
            ("transceiver", "calibration_loss_db_per_km") => {
                trx.calibration_point.loss_db_per_km = number(v)?
            }
            ("transceiver", "calibration_power_dbm") => {
                trx.calibration_point.edfa_total_output_dbm = number(v)?
            }
            ("transceiver", "calibration_target_tbps") => {
                trx.calibration_target_tbps = number(v)?
            }
            ("transceiver", "calibration_include_rbs") => {
                trx.calibration_include_rbs = boolean(v)?
            }

            ("powerfeed", "feed_current_a") => feed.feed_current_a = number(v)?,
            ("powerfeed", "cable_resistance_ohm_per_km") => {
                feed.cable_resistance_ohm_per_km = number(v)?
            }
            ("powerfeed", "repeater_power_w") => feed.repeater_power_w = number(v)?,
            ("powerfeed", "supply_limit_w") => feed.supply_limit_w = number(v)?,

            ("sweep", "loss_min") => sweep.grid.loss_min = number(v)?,
            ("sweep", "loss_max") => sweep.grid.loss_max = number(v)?,
            ("sweep", "loss_steps") => sweep.grid.loss_steps = count(v)?,
            ("sweep", "power_min") => sweep.grid.power_min = number(v)?,
            ("sweep", "power_max") => sweep.grid.power_max = number(v)?,
            ("sweep", "power_steps") => sweep.grid.power_steps = count(v)?,
            ("sweep", "span_min_km") => sweep.span_min_km = number(v)?,
            ("sweep", "span_max_km") => sweep.span_max_km = number(v)?,
            ("sweep", "span_points") => sweep.span_points = count(v)?,
            ("sweep", "target_tbps") => sweep.target_tbps = number(v)?,
            ("sweep", "include_rbs") => sweep.include_rbs = boolean(v)?,
            ("sweep", "power_bracket_low_dbm") => sweep.solver.power_bracket_dbm.0 = number(v)?,
            ("sweep", "power_bracket_high_dbm") => sweep.solver.power_bracket_dbm.1 = number(v)?,
            ("sweep", "tolerance_db") => sweep.solver.tolerance_db = number(v)?,
            ("sweep", "max_iterations") => sweep.solver.max_iterations = count(v)?,
            _ => return Err(SetError::Unknown),
        }
        Ok(())
    }

    /// Every parameter as `(section, key, value)`, in a fixed order.
    pub fn entries(&self) -> Vec<(&'static str, &'static str, Value)> {
        let n = Value::Number;
        let c = |x: usize| Value::Number(x as f64);
        let opt = |x: Option<f64>, absent: &str| match x {
            Some(x) => Value::Number(x),
            None => Value::Text(absent.to_string()),
        };
        let p = &self.plan;
        let t = &self.transceiver;
        let f = &self.powerfeed;
        let s = &self.sweep;
        vec![
            ("fiber", "loss_db_per_km", n(p.fiber.loss_db_per_km)),
            ("fiber", "dispersion_ps_nm_km", n(p.fiber.dispersion_ps_nm_km)),
            ("fiber", "gamma_per_w_km", n(p.fiber.gamma_per_w_km)),
            ("fiber", "imi_db_per_km", n(p.fiber.imi_db_per_km)),
            ("fiber", "backscatter_db_per_km", n(p.fiber.backscatter_db_per_km)),
            ("fiber", "group_index", n(p.fiber.group_index)),
            ("fiber", "scf_group_index", n(self.scf_group_index)),
            ("span", "length_km", n(p.span_length_km)),
            ("link", "total_length_km", n(p.total_length_km)),
            ("link", "band_hz", n(p.band_hz)),
            ("link", "channel_spacing_hz", n(p.channel_spacing_hz)),
            ("link", "symbol_rate_hz", n(p.symbol_rate_hz)),
            ("link", "n_fibers_per_direction", c(p.n_fibers_per_direction)),
            ("amplifier", "noise_figure_db", n(p.amp.noise_figure_db)),
            ("amplifier", "total_output_power_dbm", n(p.amp.total_output_power_dbm)),
            ("amplifier", "pre_input_loss_db", n(p.amp.pre_input_loss_db)),
            ("amplifier", "post_output_loss_db", n(p.amp.post_output_loss_db)),
            (
                "transceiver",
                "model",
                Value::Text(
                    match t.model {
                        TransceiverKind::ShannonGap => "shannon_gap",
                        TransceiverKind::Tabulated => "tabulated",
                    }
                    .into(),
                ),
            ),
            ("transceiver", "gap_db", opt(t.gap_db, "auto")),
            ("transceiver", "max_rate_gbps", opt(t.max_rate_gbps, "unbounded")),
            (
                "transceiver",
                "table",
                Value::Text(t.table.clone().unwrap_or_else(|| "none".into())),
            ),
            ("transceiver", "calibration_loss_db_per_km", n(t.calibration_point.loss_db_per_km)),
            (
                "transceiver",
                "calibration_power_dbm",
                n(t.calibration_point.edfa_total_output_dbm),
            ),
            ("transceiver", "calibration_target_tbps", n(t.calibration_target_tbps)),
            ("transceiver", "calibration_include_rbs", Value::Bool(t.calibration_include_rbs)),
            ("powerfeed", "feed_current_a", n(f.feed_current_a)),
            ("powerfeed", "cable_resistance_ohm_per_km", n(f.cable_resistance_ohm_per_km)),
            ("powerfeed", "repeater_power_w", n(f.repeater_power_w)),
            ("powerfeed", "supply_limit_w", n(f.supply_limit_w)),
            ("sweep", "loss_min", n(s.grid.loss_min)),
            ("sweep", "loss_max", n(s.grid.loss_max)),
            ("sweep", "loss_steps", c(s.grid.loss_steps)),
            ("sweep", "power_min", n(s.grid.power_min)),
            ("sweep", "power_max", n(s.grid.power_max)),
            ("sweep", "power_steps", c(s.grid.power_steps)),
            ("sweep", "span_min_km", n(s.span_min_km)),
            ("sweep", "span_max_km", n(s.span_max_km)),
            ("sweep", "span_points", c(s.span_points)),
            ("sweep", "target_tbps", n(s.target_tbps)),
            ("sweep", "include_rbs", Value::Bool(s.include_rbs)),
            ("sweep", "power_bracket_low_dbm", n(s.solver.power_bracket_dbm.0)),
            ("sweep", "power_bracket_high_dbm", n(s.solver.power_bracket_dbm.1)),
            ("sweep", "tolerance_db", n(s.solver.tolerance_db)),
            ("sweep", "max_iterations", c(s.solver.max_iterations)),
        ]
    }

    /// Nested `section -> key -> value` view used to echo the configuration
    /// into output documents.
    pub fn echo(&self) -> ConfigEcho {
        let mut out: ConfigEcho = BTreeMap::new();
        for (section, key, value) in self.entries() {
            out.entry(section.to_string())
                .or_default()
                .insert(key.to_string(), value);
        }
        out
    }

    /// Renders the configuration in the line format accepted by [`parse_config`].
    pub fn to_document(&self) -> String {
        let mut out = String::new();
        let mut current = "";
        for (section, key, value) in self.entries() {
            if section != current {
                if !current.is_empty() {
                    out.push('\n');
                }
                out.push_str(&format!("[{section}]\n"));
                current = section;
            }
            out.push_str(&format!("{key} = {value}\n"));
        }
        out
    }

    fn check_invariants(&self) -> Vec<ConfigIssue> {
        let mut issues = Vec::new();
        let mut fail = |key: &str, message: &str| {
            issues.push(ConfigIssue {
                kind: IssueKind::Invariant,
                line: None,
                key: Some(key.to_string()),
                message: message.to_string(),
            })
        };
        let p = &self.plan;
        let positive = [
            ("fiber.loss_db_per_km", p.fiber.loss_db_per_km),
            ("span.length_km", p.span_length_km),
            ("link.total_length_km", p.total_length_km),
            ("link.band_hz", p.band_hz),
            ("link.channel_spacing_hz", p.channel_spacing_hz),
            ("link.symbol_rate_hz", p.symbol_rate_hz),
            ("amplifier.noise_figure_db", p.amp.noise_figure_db),
            ("powerfeed.feed_current_a", self.powerfeed.feed_current_a),
            ("powerfeed.cable_resistance_ohm_per_km", self.powerfeed.cable_resistance_ohm_per_km),
            ("powerfeed.repeater_power_w", self.powerfeed.repeater_power_w),
            ("powerfeed.supply_limit_w", self.powerfeed.supply_limit_w),
            ("transceiver.calibration_loss_db_per_km", self.transceiver.calibration_point.loss_db_per_km),
            ("transceiver.calibration_target_tbps", self.transceiver.calibration_target_tbps),
            ("sweep.target_tbps", self.sweep.target_tbps),
            ("sweep.span_min_km", self.sweep.span_min_km),
            ("sweep.tolerance_db", self.sweep.solver.tolerance_db),
        ];
        for (key, v) in positive {
            if !(v > 0.0) {
                fail(key, "must be positive");
            }
        }
        let nonnegative = [
            ("fiber.gamma_per_w_km", p.fiber.gamma_per_w_km),
            ("amplifier.pre_input_loss_db", p.amp.pre_input_loss_db),
            ("amplifier.post_output_loss_db", p.amp.post_output_loss_db),
        ];
        for (key, v) in nonnegative {
            if !(v >= 0.0) {
                fail(key, "must be nonnegative");
            }
        }
        if p.fiber.dispersion_ps_nm_km == 0.0 {
            fail("fiber.dispersion_ps_nm_km", "must be nonzero");
        }
        if p.fiber.imi_db_per_km > 0.0 {
            fail("fiber.imi_db_per_km", "is a per-km crosstalk ratio and must be <= 0 dB/km");
        }
        if p.fiber.backscatter_db_per_km > 0.0 {
            fail("fiber.backscatter_db_per_km", "is a per-km capture ratio and must be <= 0 dB/km");
        }
        if p.fiber.group_index < 1.0 {
            fail("fiber.group_index", "must be >= 1");
        }
        if self.scf_group_index < 1.0 {
            fail("fiber.scf_group_index", "must be >= 1");
        }
        if p.total_length_km > 0.0 && p.span_length_km > p.total_length_km {
            fail("span.length_km", "must not exceed link.total_length_km");
        }
        if p.channel_spacing_hz < p.symbol_rate_hz {
            fail("link.channel_spacing_hz", "must be at least link.symbol_rate_hz (channels would overlap)");
        }
        if p.channel_spacing_hz > p.band_hz {
            fail("link.channel_spacing_hz", "must not exceed link.band_hz (no channel fits)");
        }
        if let Some(gap) = self.transceiver.gap_db {
            if gap < 0.0 {
                fail("transceiver.gap_db", "must be >= 0 dB");
            }
        }
        if let Some(cap) = self.transceiver.max_rate_gbps {
            if !(cap > 0.0) {
                fail("transceiver.max_rate_gbps", "must be positive");
            }
        }
        if self.transceiver.model == TransceiverKind::Tabulated && self.transceiver.table.is_none() {
            fail("transceiver.table", "the tabulated model needs a table path");
        }
        if let Err(e) = self.sweep.grid.loss_axis() {
            fail("sweep.loss_steps", &e.to_string());
        }
        if let Err(e) = self.sweep.grid.power_axis() {
            fail("sweep.power_steps", &e.to_string());
        }
        if self.sweep.span_points == 0 {
            fail("sweep.span_points", "must be at least 1");
        } else if self.sweep.span_points > 1 && !(self.sweep.span_min_km < self.sweep.span_max_km) {
            fail("sweep.span_max_km", "must exceed sweep.span_min_km");
        }
        let (lo, hi) = self.sweep.solver.power_bracket_dbm;
        if !(lo < hi) {
            fail("sweep.power_bracket_high_dbm", "must exceed sweep.power_bracket_low_dbm");
        }
        if self.sweep.solver.max_iterations == 0 {
            fail("sweep.max_iterations", "must be at least 1");
        }
        issues
    }
}

pub type ConfigEcho = BTreeMap<String, BTreeMap<String, Value>>;

fn parse_scalar(raw: &str) -> Result<Value, String> {
    if let Some(rest) = raw.strip_prefix('"') {
        let Some(end) = rest.find('"') else {
            return Err("unterminated string".into());
        };
        let tail = rest[end + 1..].trim();
        if !tail.is_empty() && !tail.starts_with('#') {
            return Err(format!("unexpected text after string: {tail:?}"));
        }
        return Ok(Value::Text(rest[..end].to_string()));
    }
    let raw = raw.split('#').next().unwrap_or("").trim();
    match raw {
        "" => Err("missing value".into()),
        "true" => Ok(Value::Bool(true)),
        "false" => Ok(Value::Bool(false)),
        _ => match raw.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Value::Number(x)),
            Ok(_) => Err(format!("non-finite number {raw:?}")),
            Err(_) if raw.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+' || c == '.') => {
                Err(format!("malformed number {raw:?}"))
            }
            Err(_) if raw.chars().all(|c| c.is_ascii_alphanumeric() || "_-./".contains(c)) => {
                Ok(Value::Text(raw.to_string()))
            }
            Err(_) => Err(format!("cannot parse value {raw:?}")),
        },
    }
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses either the line format or its JSON equivalent, collecting every
/// problem before giving up.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    if text.trim_start().starts_with('{') {
        return parse_config_json(text);
    }
    let mut cfg = RunConfig::default();
    let mut issues = Vec::new();
    let mut section: Option<String> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = Some(idx + 1);
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut issue = |kind, key: Option<String>, message: String| {
            issues.push(ConfigIssue {
                kind,
                line: line_no,
                key,
                message,
            })
        };

        if let Some(rest) = line.strip_prefix('[') {
            let header = rest.split('#').next().unwrap_or("").trim();
            match header.strip_suffix(']').map(str::trim) {
                Some(name) if SECTIONS.contains(&name) => section = Some(name.to_string()),
                Some(name) => {
                    issue(IssueKind::UnknownKey, Some(name.to_string()), "unknown section".into());
                    // keys below it are not reported a second time
                    section = Some(String::new());
                }
                None => issue(IssueKind::Syntax, None, format!("malformed section header {line:?}")),
            }
            continue;
        }

        let Some((lhs, rhs)) = line.split_once('=') else {
            issue(IssueKind::Syntax, None, format!("expected `key = value`, got {line:?}"));
            continue;
        };
        let lhs = lhs.trim();
        let (sec, key) = match lhs.split_once('.') {
            Some((s, k)) => (s.trim().to_string(), k.trim().to_string()),
            None => match &section {
                Some(s) => (s.clone(), lhs.to_string()),
                None => {
                    issue(
                        IssueKind::Syntax,
                        Some(lhs.to_string()),
                        "key outside any section; use `section.key` or a [section] header".into(),
                    );
                    continue;
                }
            },
        };
        if sec.is_empty() && section.as_deref() == Some("") && !lhs.contains('.') {
            continue;
        }
        if !is_identifier(&sec) || !is_identifier(&key) {
            issue(IssueKind::Syntax, Some(lhs.to_string()), "malformed key".into());
            continue;
        }
        let path = format!("{sec}.{key}");
        let value = match parse_scalar(rhs.trim()) {
            Ok(v) => v,
            Err(msg) => {
                issue(IssueKind::Syntax, Some(path), msg);
                continue;
            }
        };
        match cfg.set(&sec, &key, &value) {
            Ok(()) => {}
            Err(SetError::Unknown) => issue(IssueKind::UnknownKey, Some(path), "unknown key".into()),
            Err(SetError::Type(msg)) => issue(IssueKind::Type, Some(path), msg),
        }
    }

    finish(cfg, issues)
}

fn finish(cfg: RunConfig, mut issues: Vec<ConfigIssue>) -> Result<RunConfig, ConfigError> {
    if issues.is_empty() {
        issues = cfg.check_invariants();
    }
    if issues.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigError { issues })
    }
}

/// JSON form: `{"fiber": {"loss_db_per_km": 0.05}, ...}`. `null` resets
/// a key to its default.
pub fn parse_config_json(text: &str) -> Result<RunConfig, ConfigError> {
    let root: serde_json::Value = serde_json::from_str(text).map_err(|e| {
        ConfigError::single(IssueKind::Syntax, Some(e.line()), None, e.to_string())
    })?;
    let serde_json::Value::Object(sections) = root else {
        return Err(ConfigError::single(
            IssueKind::Type,
            None,
            None,
            "top level must be an object of sections".into(),
        ));
    };
    let defaults = RunConfig::default();
    let mut cfg = RunConfig::default();
    let mut issues = Vec::new();
    let mut issue = |kind, key: String, message: String| {
        issues.push(ConfigIssue {
            kind,
            line: None,
            key: Some(key),
            message,
        })
    };

    for (sec, body) in &sections {
        if !SECTIONS.contains(&sec.as_str()) {
            issue(IssueKind::UnknownKey, sec.clone(), "unknown section".into());
            continue;
        }
        let serde_json::Value::Object(keys) = body else {
            issue(IssueKind::Type, sec.clone(), "section must be an object".into());
            continue;
        };
        for (key, raw) in keys {
            let path = format!("{sec}.{key}");
            let value = match raw {
                serde_json::Value::Null => {
                    match defaults.entries().into_iter().find(|(s, k, _)| s == sec && k == key) {
                        Some((_, _, v)) => v,
                        None => {
                            issue(IssueKind::UnknownKey, path, "unknown key".into());
                            continue;
                        }
                    }
                }
                serde_json::Value::Bool(b) => Value::Bool(*b),
                serde_json::Value::Number(n) => match n.as_f64() {
                    Some(x) => Value::Number(x),
                    None => {
                        issue(IssueKind::Type, path, format!("unrepresentable number {n}"));
                        continue;
                    }
                },
                serde_json::Value::String(s) => Value::Text(s.clone()),
                other => {
                    issue(IssueKind::Type, path, format!("expected a scalar, got {other}"));
                    continue;
                }
            };
            match cfg.set(sec, key, &value) {
                Ok(()) => {}
                Err(SetError::Unknown) => issue(IssueKind::UnknownKey, path, "unknown key".into()),
                Err(SetError::Type(msg)) => issue(IssueKind::Type, path, msg),
            }
        }
    }
    finish(cfg, issues)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(e: &ConfigError) -> Vec<IssueKind> {
        e.issues.iter().map(|i| i.kind).collect()
    }

    #[test]
    fn empty_document_gives_reference_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        let p = &cfg.plan;
        assert_eq!(p.total_length_km, 6600.0);
        assert_eq!(p.span_length_km, 200.0);
        assert_eq!(p.fiber.loss_db_per_km, 0.06);
        assert_eq!(p.amp.noise_figure_db, 4.6);
        assert_eq!(p.n_fibers_per_direction, 26);
        assert_eq!(p.band_hz, 5e12);
        assert_eq!(p.channel_spacing_hz, 75e9);
        assert_eq!(p.symbol_rate_hz, 73.5e9);
        assert_eq!(parse_config("  \n# nothing\n").unwrap(), RunConfig::default());
    }

    #[test]
    fn dotted_override_touches_one_field() {
        let cfg = parse_config("fiber.loss_db_per_km = 0.05").unwrap();
        let mut expected = RunConfig::default();
        expected.plan.fiber.loss_db_per_km = 0.05;
        assert_eq!(cfg, expected);
    }

    #[test]
    fn sectioned_document() {
        let text = "\
[fiber]
loss_db_per_km = 0.07   # worst case
imi_db_per_km = -60

[transceiver]
gap_db = 4.5
table = \"curves/pcs.csv\"

[sweep]
include_rbs = true
loss_steps = 5
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.plan.fiber.loss_db_per_km, 0.07);
        assert_eq!(cfg.plan.fiber.imi_db_per_km, -60.0);
        assert_eq!(cfg.transceiver.gap_db, Some(4.5));
        assert_eq!(cfg.transceiver.table.as_deref(), Some("curves/pcs.csv"));
        assert!(cfg.sweep.include_rbs);
        assert_eq!(cfg.sweep.grid.loss_steps, 5);
    }

    #[test]
    fn negative_length_names_the_key() {
        let e = parse_config("link.total_length_km = -1").unwrap_err();
        assert_eq!(kinds(&e), vec![IssueKind::Invariant]);
        assert_eq!(e.issues[0].key.as_deref(), Some("link.total_length_km"));
    }

    #[test]
    fn unknown_keys_and_sections_are_named() {
        let e = parse_config("fiber.losss_db_per_km = 1\n[cable]\nx = 1\n").unwrap_err();
        assert_eq!(kinds(&e), vec![IssueKind::UnknownKey, IssueKind::UnknownKey]);
        assert_eq!(e.issues[0].key.as_deref(), Some("fiber.losss_db_per_km"));
        assert_eq!(e.issues[0].line, Some(1));
        assert_eq!(e.issues[1].key.as_deref(), Some("cable"));
    }

    #[test]
    fn every_problem_is_reported() {
        let text = "fiber.loss_db_per_km = abc\nthis is not valid\n[link]\nn_fibers_per_direction = 2.5\nband_hz = 1e500\n";
        let e = parse_config(text).unwrap_err();
        assert_eq!(
            kinds(&e),
            vec![IssueKind::Type, IssueKind::Syntax, IssueKind::Type, IssueKind::Syntax]
        );
        let lines: Vec<_> = e.issues.iter().map(|i| i.line.unwrap()).collect();
        assert_eq!(lines, vec![1, 2, 4, 5]);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let e = parse_config("# header\n[fiber\n").unwrap_err();
        assert_eq!(e.issues[0].kind, IssueKind::Syntax);
        assert_eq!(e.issues[0].line, Some(2));
        let e = parse_config("loss_db_per_km = 0.05").unwrap_err();
        assert_eq!(e.issues[0].kind, IssueKind::Syntax);
        let e = parse_config("transceiver.table = \"open").unwrap_err();
        assert_eq!(e.issues[0].kind, IssueKind::Syntax);
        let e = parse_config("fiber.loss_db_per_km = 0.0.5").unwrap_err();
        assert_eq!(e.issues[0].kind, IssueKind::Syntax);
    }

    #[test]
    fn cross_field_invariants() {
        let e = parse_config("link.symbol_rate_hz = 80e9").unwrap_err();
        assert_eq!(e.issues[0].key.as_deref(), Some("link.channel_spacing_hz"));
        let e = parse_config("transceiver.model = tabulated").unwrap_err();
        assert_eq!(e.issues[0].key.as_deref(), Some("transceiver.table"));
        let e = parse_config("fiber.imi_db_per_km = 3").unwrap_err();
        assert_eq!(e.issues[0].key.as_deref(), Some("fiber.imi_db_per_km"));
    }

    #[test]
    fn json_form_matches_line_form() {
        let json = r#"{"fiber": {"loss_db_per_km": 0.05}, "sweep": {"include_rbs": true},
                       "transceiver": {"gap_db": "auto", "max_rate_gbps": 800}}"#;
        let lines = "fiber.loss_db_per_km = 0.05\nsweep.include_rbs = true\ntransceiver.max_rate_gbps = 800\n";
        assert_eq!(parse_config(json).unwrap(), parse_config(lines).unwrap());
    }

    #[test]
    fn json_errors() {
        let e = parse_config("{\"fiber\": {\"loss\": 1}, \"x\": {}}").unwrap_err();
        assert_eq!(kinds(&e), vec![IssueKind::UnknownKey, IssueKind::UnknownKey]);
        let e = parse_config("{\"fiber\": 3}").unwrap_err();
        assert_eq!(kinds(&e), vec![IssueKind::Type]);
        let e = parse_config("{\"fiber\": {\"loss_db_per_km\": [1]}}").unwrap_err();
        assert_eq!(kinds(&e), vec![IssueKind::Type]);
        let e = parse_config("{\n\"fiber\": ").unwrap_err();
        assert_eq!(e.issues[0].kind, IssueKind::Syntax);
        assert!(e.issues[0].line.is_some());
        let cfg = parse_config("{\"fiber\": {\"loss_db_per_km\": null}}").unwrap();
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn document_round_trip() {
        let mut cfg = RunConfig::default();
        cfg.plan.fiber.loss_db_per_km = 0.0537;
        cfg.transceiver.gap_db = Some(4.640_121_713_263_564);
        cfg.transceiver.table = Some("a/b.csv".into());
        cfg.sweep.solver.power_bracket_dbm = (1.0, 33.0);
        assert_eq!(parse_config(&cfg.to_document()).unwrap(), cfg);
        let echo = serde_json::to_string(&cfg.echo()).unwrap();
        assert_eq!(parse_config_json(&echo).unwrap(), cfg);
    }
}
