//! Parametric studies over the link model: (loss, power) grids, the EDFA
//! power needed for a throughput target, and how that power moves with span
//! length or a changed assumption.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contour::Field;
use crate::error::{Error, Result};
use crate::system::{self, LinkPlan, OperatingPoint};
use crate::transceiver::TransceiverModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub loss_min: f64,
    pub loss_max: f64,
    pub loss_steps: usize,
    pub power_min: f64,
    pub power_max: f64,
    pub power_steps: usize,
}

impl Default for GridSpec {
    /// 0.045..0.085 dB/km by 14..25 dBm, 0.0005 dB/km and 0.1 dB pitch.
    fn default() -> Self {
        Self {
            loss_min: 0.045,
            loss_max: 0.085,
            loss_steps: 81,
            power_min: 14.0,
            power_max: 25.0,
            power_steps: 111,
        }
    }
}

fn axis(name: &'static str, min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if !min.is_finite() || !max.is_finite() {
        return Err(Error::invalid(name, "bounds must be finite"));
    }
    match steps {
        0 => Err(Error::invalid(name, "needs at least one step")),
        1 if min == max => Ok(vec![min]),
        1 => Err(Error::invalid(name, "a single step needs min == max")),
        _ if !(min < max) => Err(Error::invalid(name, "min must be below max")),
        _ => Ok((0..steps)
            .map(|k| {
                if k == steps - 1 {
                    max
                } else {
                    min + (max - min) * k as f64 / (steps - 1) as f64
                }
            })
            .collect()),
    }
}

impl GridSpec {
    pub fn loss_axis(&self) -> Result<Vec<f64>> {
        axis("loss axis", self.loss_min, self.loss_max, self.loss_steps)
    }

    pub fn power_axis(&self) -> Result<Vec<f64>> {
        axis("power axis", self.power_min, self.power_max, self.power_steps)
    }
}

/// Row `i` holds the points at `loss_axis[i]`, column `j` those at `power_axis[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub loss_axis: Vec<f64>,
    pub power_axis: Vec<f64>,
    pub gsnr_db: Vec<Vec<f64>>,
    pub throughput_tbps: Vec<Vec<f64>>,
}

impl SweepGrid {
    pub fn field(&self, field: Field) -> &[Vec<f64>] {
        match field {
            Field::Gsnr => &self.gsnr_db,
            Field::Throughput => &self.throughput_tbps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub power_bracket_dbm: (f64, f64),
    pub tolerance_db: f64,
    pub max_iterations: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            power_bracket_dbm: (5.0, 30.0),
            tolerance_db: 0.01,
            max_iterations: 100,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.power_bracket_dbm;
        if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
            return Err(Error::invalid("power_bracket_dbm", "low must be below high"));
        }
        if !(self.tolerance_db > 0.0) {
            return Err(Error::invalid("tolerance_db", "must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations", "must be at least 1"));
        }
        Ok(())
    }
}

pub fn sweep_grid(
    plan: &LinkPlan,
    trx: &TransceiverModel,
    grid: &GridSpec,
    include_rbs: bool,
) -> Result<SweepGrid> {
    let loss_axis = grid.loss_axis()?;
    let power_axis = grid.power_axis()?;
    trx.validate()?;

    let rows: Vec<(Vec<f64>, Vec<f64>)> = loss_axis
        .par_iter()
        .map(|&loss| {
            let mut gsnr = Vec::with_capacity(power_axis.len());
            let mut thr = Vec::with_capacity(power_axis.len());
            for &p in &power_axis {
                let budget = system::link_gsnr(plan, OperatingPoint::new(loss, p), include_rbs)?;
                gsnr.push(budget.gsnr_db);
                thr.push(system::throughput_from_gsnr(plan, trx, budget.gsnr_db));
            }
            Ok((gsnr, thr))
        })
        .collect::<Result<_>>()?;

    let (gsnr_db, throughput_tbps) = rows.into_iter().unzip();
    Ok(SweepGrid {
        loss_axis,
        power_axis,
        gsnr_db,
        throughput_tbps,
    })
}

/// EDFA total output power at which the cable just carries `target_tbps`,
/// found by bisection inside `settings.power_bracket_dbm`.
pub fn required_edfa_power(
    plan: &LinkPlan,
    trx: &TransceiverModel,
    loss_db_per_km: f64,
    span_km: f64,
    target_tbps: f64,
    include_rbs: bool,
    settings: &SolverSettings,
) -> Result<f64> {
    settings.validate()?;
    let plan = plan.with_span(span_km);
    let throughput = |p: f64| {
        system::cable_throughput(&plan, trx, OperatingPoint::new(loss_db_per_km, p), include_rbs)
    };

    let (mut lo, mut hi) = settings.power_bracket_dbm;
    let (t_lo, t_hi) = (throughput(lo)?, throughput(hi)?);
    if !(t_lo < target_tbps && t_hi >= target_tbps) {
        return Err(Error::NotBracketed {
            target_tbps,
            low_dbm: lo,
            low_tbps: t_lo,
            high_dbm: hi,
            high_tbps: t_hi,
        });
    }
    for _ in 0..settings.max_iterations {
        if hi - lo <= settings.tolerance_db {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        if throughput(mid)? >= target_tbps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if hi - lo <= settings.tolerance_db {
        Ok(0.5 * (lo + hi))
    } else {
        Err(Error::NoConvergence {
            iterations: settings.max_iterations,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpanCurvePoint {
    pub requested_span_km: f64,
    /// Span length after snapping to an integer number of spans.
    pub span_km: f64,
    pub n_spans: usize,
    /// `None` when the target cannot be reached inside the power bracket.
    pub required_dbm: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
pub fn span_length_curve(
    plan: &LinkPlan,
    trx: &TransceiverModel,
    loss_db_per_km: f64,
    span_min_km: f64,
    span_max_km: f64,
    n_points: usize,
    target_tbps: f64,
    include_rbs: bool,
    settings: &SolverSettings,
) -> Result<Vec<SpanCurvePoint>> {
    if !(span_min_km > 0.0) {
        return Err(Error::invalid("span_min_km", "must be positive"));
    }
    let spans = if n_points == 1 {
        vec![span_min_km]
    } else {
        axis("span range", span_min_km, span_max_km, n_points)?
    };
    spans
        .par_iter()
        .map(|&requested| {
            let snapped = plan.with_span(requested);
            snapped.validate()?;
            let required = match required_edfa_power(
                plan,
                trx,
                loss_db_per_km,
                requested,
                target_tbps,
                include_rbs,
                settings,
            ) {
                Ok(p) => Some(p),
                Err(e) if e.is_infeasible() => None,
                Err(e) => return Err(e),
            };
            Ok(SpanCurvePoint {
                requested_span_km: requested,
                span_km: snapped.effective_span_km(),
                n_spans: snapped.n_spans(),
                required_dbm: required,
            })
        })
        .collect()
}

/// Smallest span length at which the curve reaches `power_dbm`, linearly
/// interpolated between neighbouring solved points.
pub fn span_for_power(curve: &[SpanCurvePoint], power_dbm: f64) -> Option<f64> {
    let solved: Vec<(f64, f64)> = curve
        .iter()
        .filter_map(|p| p.required_dbm.map(|r| (p.span_km, r)))
        .collect();
    if let Some(&(s, r)) = solved.first() {
        if r == power_dbm {
            return Some(s);
        }
    }
    solved.windows(2).find_map(|w| {
        let ((s0, p0), (s1, p1)) = (w[0], w[1]);
        if (p0 < power_dbm) == (p1 < power_dbm) || p1 == p0 {
            return None;
        }
        Some(s0 + (power_dbm - p0) / (p1 - p0) * (s1 - s0))
    })
}

/// One side of a what-if comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub plan: LinkPlan,
    pub include_rbs: bool,
}

/// Change in required EDFA power (dB) when moving from `base` to `modified`.
pub fn sensitivity_delta(
    trx: &TransceiverModel,
    loss_db_per_km: f64,
    base: &Scenario,
    modified: &Scenario,
    target_tbps: f64,
    settings: &SolverSettings,
) -> Result<f64> {
    let solve = |s: &Scenario| {
        required_edfa_power(
            &s.plan,
            trx,
            loss_db_per_km,
            s.plan.span_length_km,
            target_tbps,
            s.include_rbs,
            settings,
        )
    };
    Ok(solve(modified)? - solve(base)?)
}
