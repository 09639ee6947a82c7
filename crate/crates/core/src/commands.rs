//! Subcommand dispatch: a resolved [`RunConfig`] plus per-run flags in,
//! one [`Document`] out.

use std::fmt;

use crate::config::{ConfigError, RunConfig, TransceiverKind};
use crate::contour::{self, Field};
use crate::error::Error;
use crate::explore;
use crate::impairments;
use crate::report::{
    BudgetReport, ComponentSnrDb, ContourReport, Document, LatencyReport, PowerFeedDocument,
    RbsReport, RbsRow, SpanCurve, SpanCurveReport,
};
use crate::system::{self, OperatingPoint};
use crate::transceiver::{TableError, TransceiverModel, TransceiverTable};
use crate::units;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Budget,
    Contour,
    SpanCurve,
    Rbs,
    Powerfeed,
    Latency,
}

impl std::str::FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "budget" => Command::Budget,
            "contour" => Command::Contour,
            "span-curve" => Command::SpanCurve,
            "rbs" => Command::Rbs,
            "powerfeed" => Command::Powerfeed,
            "latency" => Command::Latency,
            other => return Err(format!("unknown command {other:?}")),
        })
    }
}

/// Per-run overrides that sit on top of the configuration file.
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub include_rbs: Option<bool>,
    pub target_tbps: Option<f64>,
    /// Contour levels; empty means the throughput target.
    pub levels: Vec<f64>,
    pub field: Option<Field>,
    /// Loss values for `span-curve` and `rbs`.
    pub losses: Vec<f64>,
    /// Already-parsed table; overrides `transceiver.table`.
    pub trx_table: Option<TransceiverTable>,
}

#[derive(Debug)]
pub enum CommandError {
    Config(ConfigError),
    Table(TableError),
    Model(Error),
}

impl CommandError {
    pub fn kind(&self) -> &'static str {
        match self {
            CommandError::Config(_) => "config",
            CommandError::Table(_) => "transceiver_table",
            CommandError::Model(e) if e.is_infeasible() => "infeasible",
            CommandError::Model(_) => "model",
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, CommandError::Model(e) if e.is_infeasible())
    }
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommandError::Config(e) => write!(f, "configuration error: {e}"),
            CommandError::Table(e) => write!(f, "{e}"),
            CommandError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CommandError {}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        CommandError::Model(e)
    }
}

impl From<ConfigError> for CommandError {
    fn from(e: ConfigError) -> Self {
        CommandError::Config(e)
    }
}

impl From<TableError> for CommandError {
    fn from(e: TableError) -> Self {
        CommandError::Table(e)
    }
}

/// Builds the transceiver the configuration asks for, calibrating the gap
/// when none is given.
pub fn resolve_transceiver(
    cfg: &RunConfig,
    table: Option<&TransceiverTable>,
) -> Result<TransceiverModel, CommandError> {
    if let Some(table) = table {
        return Ok(TransceiverModel::Tabulated { points: table.clone() });
    }
    let t = &cfg.transceiver;
    match t.model {
        TransceiverKind::Tabulated => Err(CommandError::Config(ConfigError {
            issues: vec![crate::config::ConfigIssue {
                kind: crate::config::IssueKind::Invariant,
                line: None,
                key: Some("transceiver.table".into()),
                message: "the tabulated model needs its table loaded".into(),
            }],
        })),
        TransceiverKind::ShannonGap => {
            let gap_db = match t.gap_db {
                Some(gap) => gap,
                None => system::calibrate_trx_gap(
                    &cfg.plan,
                    t.calibration_point,
                    t.calibration_target_tbps,
                    t.calibration_include_rbs,
                )?,
            };
            Ok(TransceiverModel::ShannonGap {
                gap_db,
                max_rate_gbps: t.max_rate_gbps,
            })
        }
    }
}

pub fn run_command(cmd: Command, cfg: &RunConfig, flags: &Flags) -> Result<Document, CommandError> {
    let echo = cfg.echo();
    let plan = &cfg.plan;
    let include_rbs = flags.include_rbs.unwrap_or(cfg.sweep.include_rbs);
    let target_tbps = flags.target_tbps.unwrap_or(cfg.sweep.target_tbps);
    if !(target_tbps > 0.0) || !target_tbps.is_finite() {
        return Err(Error::InvalidParameter {
            name: "target_tbps",
            reason: "must be positive".into(),
        }
        .into());
    }

    match cmd {
        Command::Budget => {
            let trx = resolve_transceiver(cfg, flags.trx_table.as_ref())?;
            let op = OperatingPoint::new(plan.fiber.loss_db_per_km, plan.amp.total_output_power_dbm);
            let budget = system::link_gsnr(plan, op, include_rbs)?;
            let n_channels = plan.n_channels();
            let channel_rate_gbps = system::channel_net_rate(&trx, budget.gsnr_db, plan.symbol_rate_hz);
            let launch_w =
                system::per_channel_launch(op.edfa_total_output_dbm, n_channels, plan.amp.post_output_loss_db)?;
            Ok(Document::Budget(BudgetReport {
                config: echo,
                transceiver: trx.clone(),
                operating_point: op,
                include_rbs,
                n_spans: plan.n_spans(),
                span_km: plan.effective_span_km(),
                n_repeaters: plan.n_spans() - 1,
                n_channels,
                gain_db: system::transparent_gain_db(plan, op.loss_db_per_km),
                per_channel_launch_dbm: units::watt_to_dbm(launch_w)?,
                component_snr_db: ComponentSnrDb::from(&budget),
                budget,
                channel_rate_gbps,
                throughput_tbps: system::cable_throughput(plan, &trx, op, include_rbs)?,
            }))
        }
        Command::Contour => {
            let trx = resolve_transceiver(cfg, flags.trx_table.as_ref())?;
            let grid = explore::sweep_grid(plan, &trx, &cfg.sweep.grid, include_rbs)?;
            let field = flags.field.unwrap_or(Field::Throughput);
            let levels = if flags.levels.is_empty() {
                vec![match field {
                    Field::Throughput => target_tbps,
                    Field::Gsnr => 14.0,
                }]
            } else {
                flags.levels.clone()
            };
            let contours = levels
                .iter()
                .map(|&level| contour::extract_contour(&grid, field, level))
                .collect::<Result<_, _>>()?;
            Ok(Document::Contour(ContourReport {
                config: echo,
                transceiver: trx,
                include_rbs,
                grid,
                contours,
            }))
        }
        Command::SpanCurve => {
            let trx = resolve_transceiver(cfg, flags.trx_table.as_ref())?;
            let losses = if flags.losses.is_empty() {
                vec![plan.fiber.loss_db_per_km]
            } else {
                flags.losses.clone()
            };
            let sweep = &cfg.sweep;
            let curves = losses
                .iter()
                .map(|&loss| {
                    explore::span_length_curve(
                        plan,
                        &trx,
                        loss,
                        sweep.span_min_km,
                        sweep.span_max_km,
                        sweep.span_points,
                        target_tbps,
                        include_rbs,
                        &sweep.solver,
                    )
                    .map(|points| SpanCurve {
                        loss_db_per_km: loss,
                        points,
                    })
                })
                .collect::<Result<_, _>>()?;
            Ok(Document::SpanCurve(SpanCurveReport {
                config: echo,
                transceiver: trx,
                include_rbs,
                target_tbps,
                curves,
            }))
        }
        Command::Rbs => {
            let losses = if flags.losses.is_empty() {
                vec![0.05, 0.06, 0.07]
            } else {
                flags.losses.clone()
            };
            let span_km = plan.effective_span_km();
            let launch_w = system::per_channel_launch(
                plan.amp.total_output_power_dbm,
                plan.n_channels(),
                plan.amp.post_output_loss_db,
            )?;
            let b = plan.fiber.backscatter_db_per_km;
            let rows = losses
                .iter()
                .map(|&loss| {
                    let span_loss_db = loss * span_km;
                    let inv = impairments::rbs_inv_snr(b, plan.total_length_km, span_loss_db)?;
                    Ok(RbsRow {
                        loss_db_per_km: loss,
                        span_km,
                        span_loss_db,
                        enhancement: impairments::rbs_enhancement(span_loss_db)?,
                        launch_w,
                        p_rbs_w: impairments::rbs_power(launch_w, b, plan.total_length_km, span_loss_db)?,
                        gsnr_rbs_db: -10.0 * inv.log10(),
                    })
                })
                .collect::<Result<_, Error>>()?;
            Ok(Document::Rbs(RbsReport {
                config: echo,
                total_length_km: plan.total_length_km,
                backscatter_db_per_km: b,
                rows,
            }))
        }
        Command::Powerfeed => {
            let n_repeaters = system::repeater_count(plan.total_length_km, plan.span_length_km)?;
            Ok(Document::Powerfeed(PowerFeedDocument {
                config: echo,
                n_spans: plan.n_spans(),
                n_repeaters,
                power: system::power_feed(&cfg.powerfeed, plan.total_length_km, n_repeaters),
            }))
        }
        Command::Latency => {
            let k = &plan.constants;
            Ok(Document::Latency(LatencyReport {
                config: echo,
                total_length_km: plan.total_length_km,
                hollow_core_group_index: plan.fiber.group_index,
                hollow_core_ms: system::propagation_latency(plan.total_length_km, plan.fiber.group_index, k)?,
                solid_core_group_index: cfg.scf_group_index,
                solid_core_ms: system::propagation_latency(plan.total_length_km, cfg.scf_group_index, k)?,
            }))
        }
    }
}
