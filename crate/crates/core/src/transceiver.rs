//! GSNR to net information rate mapping for a single channel.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum TransceiverModel {
    /// Shannon capacity of a dual-polarization channel with an SNR gap.
    ShannonGap {
        gap_db: f64,
        /// `None` means no cap.
        max_rate_gbps: Option<f64>,
    },
    /// Piecewise-linear curve, clamped at both ends.
    Tabulated { points: TransceiverTable },
}

impl TransceiverModel {
    pub fn shannon(gap_db: f64) -> Self {
        TransceiverModel::ShannonGap {
            gap_db,
            max_rate_gbps: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            TransceiverModel::ShannonGap {
                gap_db,
                max_rate_gbps,
            } => {
                if !(*gap_db >= 0.0) || !gap_db.is_finite() {
                    return Err(Error::invalid("gap_db", "must be finite and >= 0"));
                }
                if let Some(cap) = max_rate_gbps {
                    if !(*cap > 0.0) {
                        return Err(Error::invalid("max_rate_gbps", "must be positive"));
                    }
                }
                Ok(())
            }
            TransceiverModel::Tabulated { points: table } => {
                TransceiverTable::new(table.points.clone()).map(|_| ()).map_err(|e| {
                    Error::invalid("transceiver table", e.to_string())
                })
            }
        }
    }

    /// Net rate in Gb/s for one channel at the given GSNR.
    pub fn net_rate_gbps(&self, gsnr_db: f64, symbol_rate_hz: f64) -> f64 {
        match self {
            TransceiverModel::ShannonGap {
                gap_db,
                max_rate_gbps,
            } => {
                let snr = 10f64.powf((gsnr_db - gap_db) / 10.0);
                let rate = 2.0 * symbol_rate_hz * (1.0 + snr).log2() / 1e9;
                match max_rate_gbps {
                    Some(cap) => rate.min(*cap),
                    None => rate,
                }
            }
            TransceiverModel::Tabulated { points: table } => table.interpolate(gsnr_db),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TablePoint {
    pub gsnr_db: f64,
    pub net_rate_gbps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<TablePoint>", into = "Vec<TablePoint>")]
pub struct TransceiverTable {
    points: Vec<TablePoint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableError {
    /// 1-based line number, 0 when the problem is with the table as a whole.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "transceiver table: {}", self.message)
        } else {
            write!(f, "transceiver table line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for TableError {}

impl TryFrom<Vec<TablePoint>> for TransceiverTable {
    type Error = TableError;

    fn try_from(points: Vec<TablePoint>) -> std::result::Result<Self, TableError> {
        TransceiverTable::new(points)
    }
}

impl From<TransceiverTable> for Vec<TablePoint> {
    fn from(table: TransceiverTable) -> Self {
        table.points
    }
}

impl TransceiverTable {
    pub fn new(points: Vec<TablePoint>) -> std::result::Result<Self, TableError> {
        let whole = |message: String| TableError { line: 0, message };
        if points.is_empty() {
            return Err(whole("at least one point is required".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if !p.gsnr_db.is_finite() || !p.net_rate_gbps.is_finite() {
                return Err(whole(format!("point {} is not finite", i + 1)));
            }
            if p.net_rate_gbps < 0.0 {
                return Err(whole(format!("point {} has a negative rate", i + 1)));
            }
        }
        for (i, w) in points.windows(2).enumerate() {
            if !(w[1].gsnr_db > w[0].gsnr_db) {
                return Err(whole(format!(
                    "GSNR must be strictly increasing (point {})",
                    i + 2
                )));
            }
            if w[1].net_rate_gbps < w[0].net_rate_gbps {
                return Err(whole(format!("rate must be nondecreasing (point {})", i + 2)));
            }
        }
        Ok(Self { points })
    }

    /// Reads `gsnr_db,net_rate_gbps` lines. Blank lines and `#` comments
    /// (whole-line or trailing) are ignored, as is a header row: a first
    /// data line where neither field is a number.
    pub fn parse(text: &str) -> std::result::Result<Self, TableError> {
        let mut points = Vec::new();
        let mut seen_data = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| TableError {
                line: line_no,
                message,
            };
            let mut fields = line.split(',').map(str::trim);
            let (Some(g), Some(r), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(err(format!("expected two comma-separated values, got {line:?}")));
            };
            let is_header = !seen_data && g.parse::<f64>().is_err() && r.parse::<f64>().is_err();
            seen_data = true;
            if is_header {
                continue;
            }
            let gsnr_db: f64 = g
                .parse()
                .map_err(|_| err(format!("invalid GSNR value {g:?}")))?;
            let net_rate_gbps: f64 = r
                .parse()
                .map_err(|_| err(format!("invalid rate value {r:?}")))?;
            if !gsnr_db.is_finite() || !net_rate_gbps.is_finite() {
                return Err(err("values must be finite".into()));
            }
            if let Some(prev) = points.last() {
                let prev: &TablePoint = prev;
                if gsnr_db <= prev.gsnr_db {
                    return Err(err("GSNR must be strictly increasing".into()));
                }
                if net_rate_gbps < prev.net_rate_gbps {
                    return Err(err("rate must be nondecreasing".into()));
                }
            }
            if net_rate_gbps < 0.0 {
                return Err(err("rate must be nonnegative".into()));
            }
            points.push(TablePoint {
                gsnr_db,
                net_rate_gbps,
            });
        }
        TransceiverTable::new(points)
    }

    pub fn points(&self) -> &[TablePoint] {
        &self.points
    }

    pub fn interpolate(&self, gsnr_db: f64) -> f64 {
        let first = self.points[0];
        let last = self.points[self.points.len() - 1];
        if gsnr_db <= first.gsnr_db {
            return first.net_rate_gbps;
        }
        if gsnr_db >= last.gsnr_db {
            return last.net_rate_gbps;
        }
        // first index whose GSNR exceeds the query; always in 1..len
        let hi = self.points.partition_point(|p| p.gsnr_db <= gsnr_db);
        let (a, b) = (self.points[hi - 1], self.points[hi]);
        let t = (gsnr_db - a.gsnr_db) / (b.gsnr_db - a.gsnr_db);
        a.net_rate_gbps + t * (b.net_rate_gbps - a.net_rate_gbps)
    }
}
