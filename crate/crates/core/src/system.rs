//! End-to-end composition: a cable plan plus an operating point yields a
//! GSNR budget, a per-direction throughput, a power-feed check and latency.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::impairments::{self, AmplifierSpec, FiberSpec, InverseSnr, SnrBudget};
use crate::transceiver::TransceiverModel;
use crate::units::{self, PhysicalConstants};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkPlan {
    pub total_length_km: f64,
    pub span_length_km: f64,
    pub fiber: FiberSpec,
    pub amp: AmplifierSpec,
    pub band_hz: f64,
    pub channel_spacing_hz: f64,
    pub symbol_rate_hz: f64,
    pub n_fibers_per_direction: usize,
    #[serde(default)]
    pub constants: PhysicalConstants,
}

impl Default for LinkPlan {
    fn default() -> Self {
        Self {
            total_length_km: 6600.0,
            span_length_km: 200.0,
            fiber: FiberSpec::default(),
            amp: AmplifierSpec::default(),
            band_hz: 5e12,
            channel_spacing_hz: 75e9,
            symbol_rate_hz: 73.5e9,
            n_fibers_per_direction: 26,
            constants: PhysicalConstants::default(),
        }
    }
}

impl LinkPlan {
    pub fn validate(&self) -> Result<()> {
        if !(self.total_length_km > 0.0) || !self.total_length_km.is_finite() {
            return Err(Error::invalid("total_length_km", "must be positive"));
        }
        if !(self.span_length_km > 0.0) || !self.span_length_km.is_finite() {
            return Err(Error::invalid("span_length_km", "must be positive"));
        }
        if self.n_spans() < 1 {
            return Err(Error::invalid(
                "span_length_km",
                "must not exceed twice the total length",
            ));
        }
        for (name, v) in [
            ("band_hz", self.band_hz),
            ("channel_spacing_hz", self.channel_spacing_hz),
            ("symbol_rate_hz", self.symbol_rate_hz),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(name, "must be positive"));
            }
        }
        if self.channel_spacing_hz < self.symbol_rate_hz {
            return Err(Error::invalid(
                "channel_spacing_hz",
                "must be at least the symbol rate",
            ));
        }
        if self.channel_spacing_hz > self.band_hz {
            return Err(Error::invalid("channel_spacing_hz", "must not exceed the band"));
        }
        self.fiber.validate()?;
        self.amp.validate()
    }

    /// Spans after snapping the span length to an integer partition.
    pub fn n_spans(&self) -> usize {
        let n = (self.total_length_km / self.span_length_km).round();
        if n.is_finite() && n >= 0.0 {
            n as usize
        } else {
            0
        }
    }

    pub fn effective_span_km(&self) -> f64 {
        self.total_length_km / self.n_spans() as f64
    }

    pub fn n_channels(&self) -> usize {
        channels_in_band(self.band_hz, self.channel_spacing_hz)
    }

    pub fn with_span(&self, span_km: f64) -> Self {
        Self {
            span_length_km: span_km,
            ..self.clone()
        }
    }

    pub fn with_loss(&self, loss_db_per_km: f64) -> Self {
        let mut plan = self.clone();
        plan.fiber.loss_db_per_km = loss_db_per_km;
        plan
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub loss_db_per_km: f64,
    pub edfa_total_output_dbm: f64,
}

impl OperatingPoint {
    pub fn new(loss_db_per_km: f64, edfa_total_output_dbm: f64) -> Self {
        Self {
            loss_db_per_km,
            edfa_total_output_dbm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerFeedSpec {
    pub feed_current_a: f64,
    pub cable_resistance_ohm_per_km: f64,
    pub repeater_power_w: f64,
    pub supply_limit_w: f64,
}

impl Default for PowerFeedSpec {
    fn default() -> Self {
        Self {
            feed_current_a: 1.0,
            cable_resistance_ohm_per_km: 1.0,
            repeater_power_w: 180.0,
            supply_limit_w: 18_000.0,
        }
    }
}

impl PowerFeedSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("feed_current_a", self.feed_current_a),
            ("cable_resistance_ohm_per_km", self.cable_resistance_ohm_per_km),
            ("repeater_power_w", self.repeater_power_w),
            ("supply_limit_w", self.supply_limit_w),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(name, "must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerFeedReport {
    pub cable_w: f64,
    pub repeaters_w: f64,
    pub total_w: f64,
    pub within_limit: bool,
}

pub fn channels_in_band(band_hz: f64, spacing_hz: f64) -> usize {
    // guard against 1 - ulp when the ratio is an exact integer
    let ratio = band_hz / spacing_hz;
    (ratio * (1.0 + 1e-12)).floor().max(0.0) as usize
}

/// Per-channel power after `post_output_loss_db` of lumped loss at the EDFA
/// output, for a comb of `n_channels` sharing the total output power.
pub fn per_channel_launch(
    edfa_total_output_dbm: f64,
    n_channels: usize,
    post_output_loss_db: f64,
) -> Result<f64> {
    if n_channels == 0 {
        return Err(Error::invalid("n_channels", "at least one channel is required"));
    }
    units::dbm_to_watt(
        edfa_total_output_dbm - 10.0 * (n_channels as f64).log10() - post_output_loss_db,
    )
}

/// EDFA gain that makes a span transparent: fiber loss plus the lumped
/// losses on either side of the amplifier.
pub fn transparent_gain_db(plan: &LinkPlan, loss_db_per_km: f64) -> f64 {
    loss_db_per_km * plan.effective_span_km()
        + plan.amp.pre_input_loss_db
        + plan.amp.post_output_loss_db
}

pub fn link_gsnr(plan: &LinkPlan, op: OperatingPoint, include_rbs: bool) -> Result<SnrBudget> {
    let plan = plan.with_loss(op.loss_db_per_km);
    plan.validate()?;
    let k = &plan.constants;
    let n_spans = plan.n_spans();
    let span_km = plan.effective_span_km();
    let n_ch = plan.n_channels();

    let p_out = per_channel_launch(op.edfa_total_output_dbm, n_ch, 0.0)?;
    let p_launch =
        per_channel_launch(op.edfa_total_output_dbm, n_ch, plan.amp.post_output_loss_db)?;

    let gain_db = transparent_gain_db(&plan, op.loss_db_per_km);
    let ase =
        impairments::ase_inv_snr(&plan.amp, p_out, gain_db, n_spans, plan.symbol_rate_hz, k)?;

    let psd = impairments::gn_nli_psd_per_span(
        &plan.fiber,
        p_launch / plan.channel_spacing_hz,
        span_km,
        plan.band_hz,
        k,
    )?;
    let nli = impairments::nli_inv_snr(psd, n_spans, plan.symbol_rate_hz, p_launch)?;
    let imi = impairments::imi_inv_snr(plan.fiber.imi_db_per_km, plan.total_length_km)?;
    let rbs = if include_rbs {
        impairments::rbs_inv_snr(
            plan.fiber.backscatter_db_per_km,
            plan.total_length_km,
            op.loss_db_per_km * span_km,
        )?
    } else {
        0.0
    };
    impairments::combine_gsnr(InverseSnr { ase, nli, imi, rbs })
}

pub fn channel_net_rate(trx: &TransceiverModel, gsnr_db: f64, symbol_rate_hz: f64) -> f64 {
    trx.net_rate_gbps(gsnr_db, symbol_rate_hz)
}

/// Net throughput per direction in Tb/s.
pub fn cable_throughput(
    plan: &LinkPlan,
    trx: &TransceiverModel,
    op: OperatingPoint,
    include_rbs: bool,
) -> Result<f64> {
    let budget = link_gsnr(plan, op, include_rbs)?;
    Ok(throughput_from_gsnr(plan, trx, budget.gsnr_db))
}

pub(crate) fn throughput_from_gsnr(plan: &LinkPlan, trx: &TransceiverModel, gsnr_db: f64) -> f64 {
    let per_channel = channel_net_rate(trx, gsnr_db, plan.symbol_rate_hz);
    plan.n_fibers_per_direction as f64 * plan.n_channels() as f64 * per_channel / 1e3
}

/// In-line (submerged) repeaters; the end amplifiers sit in the landing stations.
pub fn repeater_count(total_length_km: f64, span_length_km: f64) -> Result<usize> {
    if !(total_length_km > 0.0) || !(span_length_km > 0.0) {
        return Err(Error::domain(
            "length",
            total_length_km.min(span_length_km),
            "lengths must be positive",
        ));
    }
    if span_length_km > total_length_km {
        return Err(Error::domain(
            "span length",
            span_length_km,
            "exceeds the total length",
        ));
    }
    Ok((total_length_km / span_length_km).round() as usize - 1)
}

pub fn power_feed(feed: &PowerFeedSpec, total_length_km: f64, n_repeaters: usize) -> PowerFeedReport {
    let cable_w = feed.feed_current_a
        * feed.feed_current_a
        * feed.cable_resistance_ohm_per_km
        * total_length_km;
    let repeaters_w = n_repeaters as f64 * feed.repeater_power_w;
    let total_w = cable_w + repeaters_w;
    PowerFeedReport {
        cable_w,
        repeaters_w,
        total_w,
        within_limit: total_w <= feed.supply_limit_w,
    }
}

/// One-way group delay in milliseconds.
pub fn propagation_latency(
    total_length_km: f64,
    group_index: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if !(total_length_km >= 0.0) {
        return Err(Error::domain("length", total_length_km, "must be nonnegative"));
    }
    if !(group_index >= 1.0) {
        return Err(Error::domain("group index", group_index, "must be >= 1"));
    }
    Ok(total_length_km * group_index / constants.light_speed_km_s * 1e3)
}

const GAP_SEARCH_MAX_DB: f64 = 15.0;

/// Finds the Shannon gap that puts the cable throughput at `reference`
/// exactly on `target_tbps`.
pub fn calibrate_trx_gap(
    plan: &LinkPlan,
    reference: OperatingPoint,
    target_tbps: f64,
    include_rbs: bool,
) -> Result<f64> {
    if !(target_tbps > 0.0) || !target_tbps.is_finite() {
        return Err(Error::invalid("target_tbps", "must be positive"));
    }
    let gsnr_db = link_gsnr(plan, reference, include_rbs)?.gsnr_db;
    let throughput =
        |gap: f64| throughput_from_gsnr(plan, &TransceiverModel::shannon(gap), gsnr_db);

    let ceiling = throughput(0.0);
    if target_tbps > ceiling * (1.0 + 1e-12) {
        return Err(Error::AboveShannon {
            target_tbps,
            ceiling_tbps: ceiling,
        });
    }
    if target_tbps >= ceiling {
        return Ok(0.0);
    }
    if throughput(GAP_SEARCH_MAX_DB) > target_tbps {
        return Err(Error::invalid(
            "target_tbps",
            format!("would need a gap above {GAP_SEARCH_MAX_DB} dB"),
        ));
    }

    // throughput falls as the gap grows
    let (mut lo, mut hi) = (0.0, GAP_SEARCH_MAX_DB);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let t = throughput(mid);
        if ((t - target_tbps) / target_tbps).abs() <= 1e-10 || hi - lo < 1e-13 {
            return Ok(mid);
        }
        if t > target_tbps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence { iterations: 200 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const REFERENCE: OperatingPoint = OperatingPoint {
        loss_db_per_km: 0.06,
        edfa_total_output_dbm: 20.3,
    };

    #[test]
    fn channel_count() {
        assert_eq!(channels_in_band(5e12, 75e9), 66);
        assert_eq!(channels_in_band(75e9, 75e9), 1);
        assert_eq!(channels_in_band(5e12, 5e12), 1);
        assert_eq!(channels_in_band(4.95e12, 75e9), 66);
    }

    #[test]
    fn launch_power_examples() {
        assert_relative_eq!(
            per_channel_launch(20.3, 66, 2.0).unwrap(),
            1.024_37e-3,
            max_relative = 1e-5
        );
        assert_relative_eq!(per_channel_launch(0.0, 1, 0.0).unwrap(), 1e-3, max_relative = 1e-15);
        assert_relative_eq!(
            per_channel_launch(20.3, 66, 0.0).unwrap(),
            1.623_51e-3,
            max_relative = 1e-5
        );
        assert!(per_channel_launch(20.3, 0, 0.0).is_err());
    }

    #[test]
    fn reference_budget() {
        let plan = LinkPlan::default();
        let with = link_gsnr(&plan, REFERENCE, true).unwrap();
        let db = |x: f64| SnrBudget::component_db(x).unwrap();
        assert_relative_eq!(with.gsnr_db, 15.95, epsilon = 0.02);
        assert_relative_eq!(db(with.inv_snr_ase), 16.69, epsilon = 0.01);
        assert_relative_eq!(db(with.inv_snr_nli), 75.8, epsilon = 0.1);
        assert_relative_eq!(db(with.inv_snr_imi), 26.80, epsilon = 0.01);
        assert_relative_eq!(db(with.inv_snr_rbs), 27.25, epsilon = 0.02);
        let without = link_gsnr(&plan, REFERENCE, false).unwrap();
        assert_relative_eq!(without.gsnr_db, 16.29, epsilon = 0.01);
        assert_eq!(without.inv_snr_rbs, 0.0);
    }

    #[test]
    fn zero_length_link_is_rejected() {
        let plan = LinkPlan {
            total_length_km: 0.0,
            ..LinkPlan::default()
        };
        assert!(link_gsnr(&plan, REFERENCE, true).is_err());
    }

    #[test]
    fn gain_tracks_span_loss() {
        let plan = LinkPlan::default();
        assert_relative_eq!(transparent_gain_db(&plan, 0.06), 16.0, epsilon = 1e-12);
    }

    #[test]
    fn net_rate_examples() {
        let shannon = TransceiverModel::shannon(0.0);
        assert_relative_eq!(channel_net_rate(&shannon, 0.0, 73.5e9), 147.0, max_relative = 1e-12);
        // The gap that makes 15.96 dB carry 1 Pb/s / (26 x 66).
        let per_channel = 1000.0 / (26.0 * 66.0) * 1e3;
        let snr_needed = 2f64.powf(per_channel / 147.0) - 1.0;
        let gap = 15.96 - 10.0 * snr_needed.log10();
        let trx = TransceiverModel::shannon(gap);
        assert_relative_eq!(channel_net_rate(&trx, 15.96, 73.5e9), 582.8, epsilon = 0.1);
        assert_relative_eq!(gap, 4.31, epsilon = 0.01);
    }

    #[test]
    fn throughput_with_no_fibers_is_zero() {
        let plan = LinkPlan {
            n_fibers_per_direction: 0,
            ..LinkPlan::default()
        };
        let t = cable_throughput(&plan, &TransceiverModel::shannon(4.6), REFERENCE, false).unwrap();
        assert_eq!(t, 0.0);
    }

    #[test]
    fn repeaters() {
        assert_eq!(repeater_count(6600.0, 200.0).unwrap(), 32);
        assert_eq!(repeater_count(6600.0, 6600.0).unwrap(), 0);
        assert_eq!(repeater_count(6600.0, 66.0).unwrap(), 99);
        assert!(repeater_count(6600.0, 7000.0).is_err());
        assert!(repeater_count(0.0, 200.0).is_err());
    }

    #[test]
    fn power_feed_examples() {
        let feed = PowerFeedSpec::default();
        let r = power_feed(&feed, 6600.0, 32);
        assert_eq!(r.cable_w, 6600.0);
        assert_eq!(r.repeaters_w, 5760.0);
        assert_eq!(r.total_w, 12360.0);
        assert!(r.within_limit);
        assert_eq!(power_feed(&feed, 0.0, 0).total_w, 0.0);
        let doubled = PowerFeedSpec {
            feed_current_a: 2.0,
            ..feed
        };
        let r = power_feed(&doubled, 6600.0, 0);
        assert_eq!(r.cable_w, 26400.0);
        assert!(!r.within_limit);
    }

    #[test]
    fn latency_examples() {
        let k = PhysicalConstants::default();
        assert_relative_eq!(
            propagation_latency(6600.0, 1.0003, &k).unwrap(),
            22.02,
            epsilon = 0.01
        );
        assert_relative_eq!(
            propagation_latency(6600.0, 1.468, &k).unwrap(),
            32.32,
            epsilon = 0.01
        );
        assert_eq!(propagation_latency(0.0, 1.5, &k).unwrap(), 0.0);
        assert!(propagation_latency(6600.0, 0.9, &k).is_err());
    }

    #[test]
    fn calibration_without_rbs() {
        let plan = LinkPlan::default();
        let gap = calibrate_trx_gap(&plan, REFERENCE, 1000.0, false).unwrap();
        // 147·log2(1 + GSNR/Γ) = 582.75 Gb/s at GSNR = 16.29 dB.
        assert_relative_eq!(gap, 4.64, epsilon = 0.01);
        let t = cable_throughput(&plan, &TransceiverModel::shannon(gap), REFERENCE, false).unwrap();
        assert_relative_eq!(t, 1000.0, max_relative = 1e-6);
    }

    #[test]
    fn calibration_edge_cases() {
        let plan = LinkPlan::default();
        let ceiling =
            cable_throughput(&plan, &TransceiverModel::shannon(0.0), REFERENCE, false).unwrap();
        assert_eq!(calibrate_trx_gap(&plan, REFERENCE, ceiling, false).unwrap(), 0.0);
        let err = calibrate_trx_gap(&plan, REFERENCE, 10.0 * ceiling, false).unwrap_err();
        assert!(matches!(err, Error::AboveShannon { .. }));
        assert!(err.is_infeasible());
    }

    #[test]
    fn throughput_nondecreasing_in_power() {
        let plan = LinkPlan::default();
        let trx = TransceiverModel::shannon(4.64);
        let mut prev = 0.0;
        for i in 0..50 {
            let p = 10.0 + 15.0 * i as f64 / 49.0;
            let t = cable_throughput(&plan, &trx, OperatingPoint::new(0.06, p), true).unwrap();
            assert!(t >= prev, "rollover at {p} dBm");
            prev = t;
        }
    }

    #[test]
    fn span_partition_covers_length() {
        for span in [66.0, 150.0, 170.0, 200.0, 225.0, 230.0, 6600.0] {
            let plan = LinkPlan::default().with_span(span);
            let n = repeater_count(plan.total_length_km, span).unwrap() + 1;
            assert_eq!(n, plan.n_spans());
            assert!((n as f64 * plan.effective_span_km() - plan.total_length_km).abs() < 1e-9);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn rbs_always_costs_margin(loss in 0.03f64..0.12, p in 5.0f64..28.0) {
                let plan = LinkPlan::default();
                let op = OperatingPoint::new(loss, p);
                let off = link_gsnr(&plan, op, false).unwrap().gsnr_linear;
                let on = link_gsnr(&plan, op, true).unwrap().gsnr_linear;
                prop_assert!(off > on);
            }

            #[test]
            fn power_feed_scaling(n in 0usize..200, i in 0.1f64..5.0) {
                let feed = PowerFeedSpec { feed_current_a: i, ..PowerFeedSpec::default() };
                let one = power_feed(&feed, 6600.0, n);
                let two = power_feed(&feed, 6600.0, 2 * n);
                prop_assert!((two.repeaters_w - 2.0 * one.repeaters_w).abs() < 1e-9);
                let double_i = PowerFeedSpec { feed_current_a: 2.0 * i, ..feed };
                let r = power_feed(&double_i, 6600.0, n);
                prop_assert!((r.cable_w - 4.0 * one.cable_w).abs() <= 1e-9 * r.cable_w);
            }
        }
    }
}
