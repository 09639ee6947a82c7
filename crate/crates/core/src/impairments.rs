//! Per-channel noise contributions expressed as linear 1/SNR terms.
//!
//! Four sources are modelled: amplifier ASE, Kerr nonlinear interference
//! (incoherent GN closed form), inter-modal interference accumulated per km,
//! and Rayleigh backscatter from the counter-propagating comb.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{self, PhysicalConstants, DB_PER_NEPER_POWER};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberSpec {
    pub loss_db_per_km: f64,
    pub dispersion_ps_nm_km: f64,
    pub gamma_per_w_km: f64,
    /// Inter-modal crosstalk per km, in dB (negative).
    pub imi_db_per_km: f64,
    /// Rayleigh backscatter capture coefficient per km, in dB (negative).
    pub backscatter_db_per_km: f64,
    pub group_index: f64,
}

impl Default for FiberSpec {
    fn default() -> Self {
        Self {
            loss_db_per_km: 0.06,
            dispersion_ps_nm_km: 3.0,
            gamma_per_w_km: 5e-4,
            imi_db_per_km: -65.0,
            backscatter_db_per_km: -70.0,
            group_index: 1.0003,
        }
    }
}

impl FiberSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.loss_db_per_km > 0.0) || !self.loss_db_per_km.is_finite() {
            return Err(Error::invalid("loss_db_per_km", "must be positive"));
        }
        if !self.dispersion_ps_nm_km.is_finite() || self.dispersion_ps_nm_km == 0.0 {
            return Err(Error::invalid("dispersion_ps_nm_km", "must be finite and nonzero"));
        }
        if !(self.gamma_per_w_km >= 0.0) || !self.gamma_per_w_km.is_finite() {
            return Err(Error::invalid("gamma_per_w_km", "must be nonnegative"));
        }
        if !(self.imi_db_per_km <= 0.0) {
            return Err(Error::invalid("imi_db_per_km", "must be <= 0 dB/km"));
        }
        if !(self.backscatter_db_per_km <= 0.0) {
            return Err(Error::invalid("backscatter_db_per_km", "must be <= 0 dB/km"));
        }
        if !(self.group_index >= 1.0) || !self.group_index.is_finite() {
            return Err(Error::invalid("group_index", "must be >= 1"));
        }
        Ok(())
    }

    /// |β₂| in s²/km at the reference wavelength.
    pub fn beta2_abs_s2_per_km(&self, constants: &PhysicalConstants) -> f64 {
        // ps/(nm·km) -> s/(m·km)
        let d = self.dispersion_ps_nm_km.abs() * 1e-3;
        let lambda = constants.reference_wavelength_m;
        let c_m_s = constants.light_speed_km_s * 1e3;
        d * lambda * lambda / (2.0 * std::f64::consts::PI * c_m_s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplifierSpec {
    pub noise_figure_db: f64,
    /// Total output power of the EDFA over the whole comb.
    pub total_output_power_dbm: f64,
    /// Transition, circulator and margin ahead of the EDFA input.
    pub pre_input_loss_db: f64,
    /// Circulator and transition after the EDFA output.
    pub post_output_loss_db: f64,
}

impl Default for AmplifierSpec {
    fn default() -> Self {
        Self {
            noise_figure_db: 4.6,
            total_output_power_dbm: 20.3,
            pre_input_loss_db: 2.0,
            post_output_loss_db: 2.0,
        }
    }
}

impl AmplifierSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.noise_figure_db > 0.0) || !self.noise_figure_db.is_finite() {
            return Err(Error::invalid("noise_figure_db", "must be positive"));
        }
        if !self.total_output_power_dbm.is_finite() {
            return Err(Error::invalid("total_output_power_dbm", "must be finite"));
        }
        if !(self.pre_input_loss_db >= 0.0) || !self.pre_input_loss_db.is_finite() {
            return Err(Error::invalid("pre_input_loss_db", "must be nonnegative"));
        }
        if !(self.post_output_loss_db >= 0.0) || !self.post_output_loss_db.is_finite() {
            return Err(Error::invalid("post_output_loss_db", "must be nonnegative"));
        }
        Ok(())
    }
}

/// The four inverse-SNR contributions before they are combined.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct InverseSnr {
    pub ase: f64,
    pub nli: f64,
    pub imi: f64,
    pub rbs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrBudget {
    pub inv_snr_ase: f64,
    pub inv_snr_nli: f64,
    pub inv_snr_imi: f64,
    pub inv_snr_rbs: f64,
    pub gsnr_linear: f64,
    pub gsnr_db: f64,
}

impl SnrBudget {
    /// SNR in dB of a single component, `None` when the component is absent.
    pub fn component_db(inv: f64) -> Option<f64> {
        if inv > 0.0 {
            Some(-10.0 * inv.log10())
        } else {
            None
        }
    }

    pub fn components(&self) -> InverseSnr {
        InverseSnr {
            ase: self.inv_snr_ase,
            nli: self.inv_snr_nli,
            imi: self.inv_snr_imi,
            rbs: self.inv_snr_rbs,
        }
    }
}

/// ASE of `n_amps` identical amplifiers relative to the per-channel power
/// at their output. Dual-polarization convention: P_ASE = F·h·ν·(G−1)·B_n.
pub fn ase_inv_snr(
    amp: &AmplifierSpec,
    per_channel_output_w: f64,
    gain_db: f64,
    n_amps: usize,
    noise_bw_hz: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if !(gain_db > 0.0) {
        return Err(Error::domain("EDFA gain", gain_db, "must be positive in dB"));
    }
    if !(per_channel_output_w > 0.0) {
        return Err(Error::domain(
            "per-channel output power",
            per_channel_output_w,
            "must be positive",
        ));
    }
    if n_amps == 0 {
        return Ok(0.0);
    }
    let f = units::db_to_linear(amp.noise_figure_db)?;
    let g = units::db_to_linear(gain_db)?;
    let p_ase = f * constants.photon_energy_j() * (g - 1.0) * noise_bw_hz;
    Ok(n_amps as f64 * p_ase / per_channel_output_w)
}

/// Incoherent GN-model NLI power spectral density at the centre channel,
/// generated by one span with a flat comb of PSD `launch_psd_w_hz`.
pub fn gn_nli_psd_per_span(
    fiber: &FiberSpec,
    launch_psd_w_hz: f64,
    span_km: f64,
    comb_bw_hz: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if !(launch_psd_w_hz >= 0.0) {
        return Err(Error::domain("launch PSD", launch_psd_w_hz, "must be nonnegative"));
    }
    if !(span_km > 0.0) {
        return Err(Error::domain("span length", span_km, "must be positive"));
    }
    if !(comb_bw_hz > 0.0) {
        return Err(Error::domain("comb bandwidth", comb_bw_hz, "must be positive"));
    }
    if fiber.dispersion_ps_nm_km == 0.0 || !fiber.dispersion_ps_nm_km.is_finite() {
        return Err(Error::domain(
            "dispersion",
            fiber.dispersion_ps_nm_km,
            "GN closed form is singular at zero dispersion",
        ));
    }
    let alpha = units::attenuation_db_to_per_km(fiber.loss_db_per_km)?;
    if alpha == 0.0 {
        return Err(Error::domain(
            "attenuation",
            fiber.loss_db_per_km,
            "asymptotic effective length diverges for lossless fiber",
        ));
    }
    if launch_psd_w_hz == 0.0 {
        return Ok(0.0);
    }
    let beta2 = fiber.beta2_abs_s2_per_km(constants);
    let l_eff = -(-alpha * span_km).exp_m1() / alpha;
    let l_eff_a = 1.0 / alpha;
    let gamma = fiber.gamma_per_w_km;
    let pi = std::f64::consts::PI;
    let arg = 0.5 * pi * pi * beta2 * l_eff_a * comb_bw_hz * comb_bw_hz;
    Ok((8.0 / 27.0) * gamma * gamma * launch_psd_w_hz.powi(3) * l_eff * l_eff * arg.asinh()
        / (pi * beta2 * l_eff_a))
}

/// NLI over `n_spans` spans added incoherently, referred to the channel power.
pub fn nli_inv_snr(
    psd_per_span: f64,
    n_spans: usize,
    channel_bw_hz: f64,
    per_channel_launch_w: f64,
) -> Result<f64> {
    if !(per_channel_launch_w > 0.0) {
        return Err(Error::domain(
            "per-channel launch power",
            per_channel_launch_w,
            "must be positive",
        ));
    }
    if !(psd_per_span >= 0.0) || !(channel_bw_hz >= 0.0) {
        return Err(Error::domain(
            "NLI PSD or bandwidth",
            psd_per_span.min(channel_bw_hz),
            "must be nonnegative",
        ));
    }
    Ok(n_spans as f64 * psd_per_span * channel_bw_hz / per_channel_launch_w)
}

/// IMI crosstalk grows linearly with length and does not depend on power.
pub fn imi_inv_snr(imi_db_per_km: f64, total_length_km: f64) -> Result<f64> {
    if !(imi_db_per_km <= 0.0) {
        return Err(Error::domain("IMI coefficient", imi_db_per_km, "must be <= 0 dB/km"));
    }
    if !(total_length_km >= 0.0) {
        return Err(Error::domain("total length", total_length_km, "must be nonnegative"));
    }
    Ok(total_length_km * units::db_to_linear(imi_db_per_km)?)
}

/// Enhancement of accumulated backscatter caused by lumped amplification
/// over a span with `span_loss_db` of fiber loss; 1 for a lossless span.
pub fn rbs_enhancement(span_loss_db: f64) -> Result<f64> {
    if !(span_loss_db >= 0.0) {
        return Err(Error::domain("span loss", span_loss_db, "must be nonnegative"));
    }
    units::sinhc(span_loss_db / DB_PER_NEPER_POWER)
}

fn backscatter_linear(backscatter_db_per_km: f64) -> Result<f64> {
    if !(backscatter_db_per_km <= 0.0) {
        return Err(Error::domain(
            "backscatter coefficient",
            backscatter_db_per_km,
            "must be <= 0 dB/km",
        ));
    }
    units::db_to_linear(backscatter_db_per_km)
}

/// Total backscattered power returned to the start of a transparent
/// multi-span link: L_tot · P_ch · B · enh(A_dB).
pub fn rbs_power(
    launch_w: f64,
    backscatter_db_per_km: f64,
    total_length_km: f64,
    span_loss_db: f64,
) -> Result<f64> {
    if !(launch_w >= 0.0) {
        return Err(Error::domain("launch power", launch_w, "must be nonnegative"));
    }
    Ok(launch_w * rbs_inv_snr(backscatter_db_per_km, total_length_km, span_loss_db)?)
}

/// P_RBS / P_ch. Launch power cancels, so it is not a parameter.
pub fn rbs_inv_snr(
    backscatter_db_per_km: f64,
    total_length_km: f64,
    span_loss_db: f64,
) -> Result<f64> {
    if !(total_length_km >= 0.0) {
        return Err(Error::domain("total length", total_length_km, "must be nonnegative"));
    }
    let b = backscatter_linear(backscatter_db_per_km)?;
    Ok(total_length_km * b * rbs_enhancement(span_loss_db)?)
}

pub fn combine_gsnr(components: InverseSnr) -> Result<SnrBudget> {
    let InverseSnr { ase, nli, imi, rbs } = components;
    for (name, v) in [("ase", ase), ("nli", nli), ("imi", imi), ("rbs", rbs)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::invalid(
                "inverse SNR component",
                format!("{name} = {v} must be finite and nonnegative"),
            ));
        }
    }
    let total = ase + nli + imi + rbs;
    if total == 0.0 {
        return Err(Error::domain(
            "total inverse SNR",
            0.0,
            "all components are zero, GSNR would be infinite",
        ));
    }
    let gsnr_linear = 1.0 / total;
    Ok(SnrBudget {
        inv_snr_ase: ase,
        inv_snr_nli: nli,
        inv_snr_imi: imi,
        inv_snr_rbs: rbs,
        gsnr_linear,
        gsnr_db: 10.0 * gsnr_linear.log10(),
    })
}

/// Numerical integration of the backscatter build-up, slab by slab, used to
/// check [`rbs_power`]. Each slab of width `dz_km` is evaluated at its
/// midpoint: scattered at depth z, attenuated on the way out and back, then
/// lifted by the per-span backward gain e^(αL).
pub fn rbs_brute_force(
    launch_w: f64,
    backscatter_db_per_km: f64,
    loss_db_per_km: f64,
    span_km: f64,
    n_spans: usize,
    dz_km: f64,
) -> Result<f64> {
    if !(launch_w >= 0.0) {
        return Err(Error::domain("launch power", launch_w, "must be nonnegative"));
    }
    if !(dz_km > 0.0) || !(span_km > 0.0) {
        return Err(Error::domain("slab width", dz_km, "slab and span must be positive"));
    }
    let slabs_f = span_km / dz_km;
    let slabs = slabs_f.round();
    if (slabs_f - slabs).abs() > 1e-9 * slabs_f.max(1.0) || slabs < 1.0 {
        return Err(Error::domain("slab width", dz_km, "must divide the span length"));
    }
    let slabs = slabs as usize;
    let dz = span_km / slabs as f64;
    let b = backscatter_linear(backscatter_db_per_km)?;
    let alpha = units::attenuation_db_to_per_km(loss_db_per_km)?;

    let mut span_total = 0.0;
    for k in 0..slabs {
        let z = (k as f64 + 0.5) * dz;
        let forward = launch_w * (-alpha * z).exp();
        let returned = forward * b * dz * (-alpha * z).exp();
        span_total += returned;
    }
    let backward_gain = (alpha * span_km).exp();
    let per_span = span_total * backward_gain;

    // Return paths through earlier spans are transparent.
    let mut total = 0.0;
    for _ in 0..n_spans {
        total += per_span;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference_fiber() -> FiberSpec {
        FiberSpec::default()
    }

    #[test]
    fn ase_reference_point() {
        let amp = AmplifierSpec::default();
        let k = PhysicalConstants::default();
        let p_out = units::dbm_to_watt(20.3 - 10.0 * 66f64.log10()).unwrap();
        assert_relative_eq!(p_out, 1.624e-3, max_relative = 1e-3);
        let inv = ase_inv_snr(&amp, p_out, 16.0, 33, 73.5e9, &k).unwrap();
        assert_relative_eq!(inv, 0.021_429_37, max_relative = 1e-6);
        assert_relative_eq!(SnrBudget::component_db(inv).unwrap(), 16.69, epsilon = 0.005);
    }

    #[test]
    fn ase_edge_cases() {
        let amp = AmplifierSpec::default();
        let k = PhysicalConstants::default();
        assert_eq!(ase_inv_snr(&amp, 1e-3, 16.0, 0, 73.5e9, &k).unwrap(), 0.0);
        assert!(ase_inv_snr(&amp, 1e-3, 0.0, 33, 73.5e9, &k).is_err());
        assert!(ase_inv_snr(&amp, 1e-3, -3.0, 33, 73.5e9, &k).is_err());
        let a = ase_inv_snr(&amp, 1e-3, 16.0, 33, 73.5e9, &k).unwrap();
        let b = ase_inv_snr(&amp, 2e-3, 16.0, 33, 73.5e9, &k).unwrap();
        assert_relative_eq!(b, a / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn gn_psd_reference() {
        let k = PhysicalConstants::default();
        let fiber = reference_fiber();
        let psd = gn_nli_psd_per_span(&fiber, 1.024e-3 / 75e9, 200.0, 5e12, &k).unwrap();
        // Hand evaluation: L_eff = 67.815 km, asinh argument = 3.417e4.
        assert_relative_eq!(psd, 1.109_31e-23, max_relative = 1e-4);
        assert_eq!(gn_nli_psd_per_span(&fiber, 0.0, 200.0, 5e12, &k).unwrap(), 0.0);
    }

    #[test]
    fn gn_psd_rejects_zero_dispersion() {
        let k = PhysicalConstants::default();
        let fiber = FiberSpec {
            dispersion_ps_nm_km: 0.0,
            ..reference_fiber()
        };
        assert!(gn_nli_psd_per_span(&fiber, 1e-14, 200.0, 5e12, &k).is_err());
    }

    #[test]
    fn nli_reference_chain() {
        let k = PhysicalConstants::default();
        let launch = 1.024e-3;
        let psd = gn_nli_psd_per_span(&reference_fiber(), launch / 75e9, 200.0, 5e12, &k).unwrap();
        let inv = nli_inv_snr(psd, 33, 73.5e9, launch).unwrap();
        assert_relative_eq!(inv, 2.6e-8, max_relative = 0.02);
        assert_relative_eq!(SnrBudget::component_db(inv).unwrap(), 75.8, epsilon = 0.1);
        let inv66 = nli_inv_snr(psd, 66, 73.5e9, launch).unwrap();
        assert_eq!(inv66, 2.0 * inv);
        assert_eq!(nli_inv_snr(0.0, 33, 73.5e9, launch).unwrap(), 0.0);
    }

    #[test]
    fn imi_examples() {
        assert_relative_eq!(imi_inv_snr(-65.0, 6600.0).unwrap(), 2.087_103e-3, max_relative = 1e-6);
        assert_relative_eq!(
            SnrBudget::component_db(imi_inv_snr(-65.0, 6600.0).unwrap()).unwrap(),
            26.80,
            epsilon = 0.005
        );
        assert_eq!(imi_inv_snr(-65.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(imi_inv_snr(-60.0, 6600.0).unwrap(), 6.6e-3, max_relative = 1e-12);
        assert!(imi_inv_snr(1.0, 6600.0).is_err());
    }

    #[test]
    fn enhancement_examples() {
        assert_eq!(rbs_enhancement(0.0).unwrap(), 1.0);
        assert_relative_eq!(rbs_enhancement(10.0).unwrap(), 2.149_76, max_relative = 1e-5);
        assert_relative_eq!(rbs_enhancement(14.0).unwrap(), 3.889_89, max_relative = 1e-5);
        assert!(rbs_enhancement(-0.5).is_err());
    }

    #[test]
    fn rbs_power_examples() {
        assert_eq!(rbs_power(0.0, -70.0, 6600.0, 10.0).unwrap(), 0.0);
        assert_relative_eq!(
            rbs_power(1e-3, -70.0, 6600.0, 0.0).unwrap(),
            6600.0 * 1e-3 * 1e-7,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            rbs_power(1e-3, -70.0, 6600.0, 10.0).unwrap(),
            1.418_84e-6,
            max_relative = 1e-5
        );
    }

    #[test]
    fn rbs_gsnr_matches_published_values() {
        let db = |inv: f64| -10.0 * inv.log10();
        assert_relative_eq!(db(rbs_inv_snr(-70.0, 6600.0, 10.0).unwrap()), 28.48, epsilon = 0.01);
        assert_relative_eq!(db(rbs_inv_snr(-70.0, 6600.0, 14.0).unwrap()), 25.90, epsilon = 0.01);
        let lossless = rbs_inv_snr(-70.0, 6600.0, 0.0).unwrap();
        assert_relative_eq!(lossless, 6.6e-4, max_relative = 1e-12);
        assert_relative_eq!(db(lossless), 31.80, epsilon = 0.01);
    }

    #[test]
    fn combine_examples() {
        let x = 0.01;
        let single = combine_gsnr(InverseSnr { ase: x, ..Default::default() }).unwrap();
        assert_relative_eq!(single.gsnr_linear, 1.0 / x, max_relative = 1e-15);
        let pair = combine_gsnr(InverseSnr { ase: x, nli: x, ..Default::default() }).unwrap();
        assert_relative_eq!(single.gsnr_db - pair.gsnr_db, 3.0103, epsilon = 1e-4);
        let reference = combine_gsnr(InverseSnr {
            ase: 0.021430,
            nli: 2.6e-8,
            imi: 2.0871e-3,
            rbs: 1.8866e-3,
        })
        .unwrap();
        assert_relative_eq!(reference.gsnr_linear, 39.4, epsilon = 0.05);
        assert_relative_eq!(reference.gsnr_db, 15.96, epsilon = 0.01);
        assert!(combine_gsnr(InverseSnr::default()).is_err());
        assert!(combine_gsnr(InverseSnr { ase: -1.0, nli: 2.0, ..Default::default() }).is_err());
    }

    #[test]
    fn brute_force_edge_cases() {
        assert_eq!(rbs_brute_force(0.0, -70.0, 0.05, 200.0, 33, 0.1).unwrap(), 0.0);
        assert!(rbs_brute_force(1e-3, -70.0, 0.05, 200.0, 33, 0.3).is_err());
        assert!(rbs_brute_force(1e-3, -70.0, 0.05, 200.0, 33, 0.0).is_err());
        // A single midpoint slab underestimates by exactly 1/sinhc(αL).
        for loss in [0.005, 0.02, 0.05, 0.07] {
            let crude = rbs_brute_force(1e-3, -70.0, loss, 200.0, 1, 200.0).unwrap();
            let exact = rbs_power(1e-3, -70.0, 200.0, loss * 200.0).unwrap();
            let ratio = crude / exact;
            let predicted = 1.0 / rbs_enhancement(loss * 200.0).unwrap();
            assert!((ratio - predicted).abs() < 1e-12, "ratio {ratio} at {loss}");
            if loss * 200.0 <= 6.0 {
                assert!(ratio > 0.5, "ratio {ratio} at {loss}");
            }
        }
    }

    #[test]
    fn brute_force_converges_to_closed_form() {
        let numeric = rbs_brute_force(1e-3, -70.0, 0.05, 200.0, 33, 0.1).unwrap();
        let exact = rbs_power(1e-3, -70.0, 6600.0, 10.0).unwrap();
        assert!(((numeric - exact) / exact).abs() < 1e-3);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn rbs_ratio_independent_of_launch(p in 1e-6f64..1.0, loss_db in 0.0f64..20.0) {
                let ratio = rbs_power(p, -70.0, 6600.0, loss_db).unwrap() / p;
                let inv = rbs_inv_snr(-70.0, 6600.0, loss_db).unwrap();
                prop_assert!(((ratio - inv) / inv).abs() < 1e-12);
            }

            #[test]
            fn nli_cubic_scaling(p in 1e-5f64..1e-1) {
                let k = PhysicalConstants::default();
                let f = FiberSpec::default();
                let chain = |launch: f64| {
                    let psd = gn_nli_psd_per_span(&f, launch / 75e9, 200.0, 5e12, &k).unwrap();
                    psd * 73.5e9
                };
                let ratio = chain(2.0 * p) / chain(p);
                prop_assert!((ratio - 8.0).abs() / 8.0 < 1e-9);
            }

            #[test]
            fn ase_inverse_linear(p in 1e-6f64..1.0, gain in 0.1f64..40.0, n in 1usize..200) {
                let amp = AmplifierSpec::default();
                let k = PhysicalConstants::default();
                let a = ase_inv_snr(&amp, p, gain, n, 73.5e9, &k).unwrap();
                let b = ase_inv_snr(&amp, 2.0 * p, gain, n, 73.5e9, &k).unwrap();
                prop_assert!(((b - a / 2.0) / a).abs() < 1e-12);
            }

            #[test]
            fn combined_not_above_weakest(
                ase in 0.0f64..1.0, nli in 0.0f64..1.0, imi in 0.0f64..1.0, rbs in 1e-9f64..1.0,
            ) {
                let budget = combine_gsnr(InverseSnr { ase, nli, imi, rbs }).unwrap();
                for inv in [ase, nli, imi, rbs] {
                    if inv > 0.0 {
                        prop_assert!(budget.gsnr_linear <= 1.0 / inv * (1.0 + 1e-12));
                    }
                }
            }

            #[test]
            fn combined_equals_sole_component(x in 1e-9f64..10.0, slot in 0usize..4) {
                let mut parts = [0.0; 4];
                parts[slot] = x;
                let budget = combine_gsnr(InverseSnr {
                    ase: parts[0], nli: parts[1], imi: parts[2], rbs: parts[3],
                }).unwrap();
                prop_assert_eq!(budget.gsnr_linear, 1.0 / x);
            }

            #[test]
            fn enhancement_and_imi_monotone(a in 0.0f64..30.0, d in 1e-3f64..5.0) {
                prop_assert!(rbs_enhancement(a + d).unwrap() > rbs_enhancement(a).unwrap());
                prop_assert!(imi_inv_snr(-65.0, a * 100.0 + d).unwrap() > imi_inv_snr(-65.0, a * 100.0).unwrap());
            }
        }
    }
}
