//! Time-reversal prefilter and link metrics.
//!
//! All sequences here are the equivalent discrete CIR `h_eq[1..=L]` stored as
//! a slice (slice position `i` is tap `i + 1`). Lags of the effective
//! response are reported 1-based as well: `(f ∗ g)[l] = Σ_k f[k]·g[l+1−k]`
//! for `l = 1..=2L−1`, which puts the matched-filter peak at lag `L`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Normalized, time-reversed and conjugated CIR:
/// `ĥ[k] = conj(h_eq[L+1−k]) / √(Σ_l |h_eq[l]|²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrPrefilter {
    taps: Vec<Complex64>,
}

impl TrPrefilter {
    pub fn taps(&self) -> &[Complex64] {
        &self.taps
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn energy(&self) -> f64 {
        channel_energy(&self.taps)
    }
}

/// `Σ_l |h_eq[l]|²`.
pub fn channel_energy(cir: &[Complex64]) -> f64 {
    cir.iter().map(Complex64::norm_sqr).sum()
}

pub fn tr_prefilter(cir: &[Complex64]) -> Result<TrPrefilter> {
    let energy = channel_energy(cir);
    if energy == 0.0 {
        return Err(Error::ZeroChannel);
    }
    let norm = energy.sqrt();
    Ok(TrPrefilter {
        taps: cir.iter().rev().map(|h| h.conj() / norm).collect(),
    })
}

/// Full linear convolution of the prefilter with the channel, `2L−1` lags.
pub fn effective_response(prefilter: &TrPrefilter, cir: &[Complex64]) -> Result<Vec<Complex64>> {
    let taps = prefilter.taps();
    if taps.len() != cir.len() {
        return Err(Error::LengthMismatch {
            prefilter: taps.len(),
            channel: cir.len(),
        });
    }
    if cir.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = vec![Complex64::new(0.0, 0.0); 2 * cir.len() - 1];
    for (k, f) in taps.iter().enumerate() {
        for (j, h) in cir.iter().enumerate() {
            out[k + j] += f * h;
        }
    }
    Ok(out)
}

/// `P_U = P·Σ_l |h_eq[l]|²`.
pub fn useful_power(power_w: f64, cir: &[Complex64]) -> f64 {
    power_w * channel_energy(cir)
}

/// `P_ISI = P·Σ_{l≠L} |(ĥ ∗ h_eq)[l]|²`.
pub fn isi_power(power_w: f64, prefilter: &TrPrefilter, cir: &[Complex64]) -> Result<f64> {
    let response = effective_response(prefilter, cir)?;
    let peak = cir.len().saturating_sub(1);
    Ok(power_w
        * response
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != peak)
            .map(|(_, r)| r.norm_sqr())
            .sum::<f64>())
}

/// `γ_TR = P_U / (P_ISI + σ²)`. An all-zero channel yields zero.
pub fn sinr(power_w: f64, cir: &[Complex64], noise_variance: f64) -> Result<f64> {
    let p_u = useful_power(power_w, cir);
    if p_u == 0.0 {
        return Ok(0.0);
    }
    let prefilter = tr_prefilter(cir)?;
    let p_isi = isi_power(power_w, &prefilter, cir)?;
    Ok(p_u / (p_isi + noise_variance))
}

/// ISI-free upper bound `γ̃_TR = P_U / σ²`.
pub fn snr_bound(power_w: f64, cir: &[Complex64], noise_variance: f64) -> f64 {
    useful_power(power_w, cir) / noise_variance
}

/// Everything the link evaluation produces for one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkResult {
    pub useful_power: f64,
    pub isi_power: f64,
    pub sinr: f64,
    pub snr_bound: f64,
    /// `(ĥ ∗ h_eq)[l]` for `l = 1..=2L−1`; slice position `i` is lag `i + 1`.
    pub effective_response: Vec<Complex64>,
}

impl LinkResult {
    /// Effective response at lag `L`.
    pub fn peak(&self) -> Complex64 {
        let n = self.effective_response.len();
        if n == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            self.effective_response[n / 2]
        }
    }
}

/// Runs the prefilter and every metric on one CIR. A zero-energy channel is
/// reported with zero powers and an all-zero response.
pub fn evaluate_link(power_w: f64, cir: &[Complex64], noise_variance: f64) -> Result<LinkResult> {
    if noise_variance.is_nan() || noise_variance <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "noise_variance",
            reason: format!("{noise_variance} must be positive"),
        });
    }
    let useful = useful_power(power_w, cir);
    if useful == 0.0 {
        return Ok(LinkResult {
            useful_power: 0.0,
            isi_power: 0.0,
            sinr: 0.0,
            snr_bound: 0.0,
            effective_response: vec![Complex64::new(0.0, 0.0); (2 * cir.len()).saturating_sub(1)],
        });
    }
    let prefilter = tr_prefilter(cir)?;
    let response = effective_response(&prefilter, cir)?;
    let peak = cir.len() - 1;
    let isi = power_w
        * response
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != peak)
            .map(|(_, r)| r.norm_sqr())
            .sum::<f64>();
    Ok(LinkResult {
        useful_power: useful,
        isi_power: isi,
        sinr: useful / (isi + noise_variance),
        snr_bound: useful / noise_variance,
        effective_response: response,
    })
}
