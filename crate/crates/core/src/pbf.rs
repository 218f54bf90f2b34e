//! Passive-beamforming baseline.
//!
//! The elements of a single tap are co-phased so their unit-gain paths add
//! coherently; every other element is treated as contributing nothing to
//! that tap. With ISI assumed away the SNR of tap `l` is
//! `P·|T_l|² / (16π²‖p_Tx‖²‖p_Rx‖²σ²)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{distance, Position3, Reflection, RisTopology, SystemConfig};
use crate::tapped::TappedChannel;

#[derive(Debug, Clone, PartialEq)]
pub struct PbfResult {
    /// SNR per tap; slice position `i` is tap `i + 1`.
    pub per_tap_snr: Vec<f64>,
    /// 1-based tap with the highest SNR, lowest index on ties.
    pub best_tap: usize,
    pub best_snr: f64,
}

fn coherent_snr(
    power_w: f64,
    members: usize,
    tx: &Position3,
    rx: &Position3,
    noise_variance: f64,
) -> f64 {
    let count = members as f64;
    let (dt, dr) = (tx.norm(), rx.norm());
    power_w * count * count / (16.0 * PI * PI * dt * dt * dr * dr * noise_variance)
}

/// SNR of tap `l` (1-based) with its members co-phased.
pub fn pbf_tap_snr(
    power_w: f64,
    channel: &TappedChannel,
    tap: usize,
    tx: &Position3,
    rx: &Position3,
    noise_variance: f64,
) -> Result<f64> {
    let members = channel.cardinality(tap)?;
    if tx.norm() == 0.0 || rx.norm() == 0.0 {
        return Err(Error::EndpointAtOrigin);
    }
    Ok(coherent_snr(power_w, members, tx, rx, noise_variance))
}

/// Evaluates every tap and picks the strongest one.
pub fn pbf_best_snr(
    power_w: f64,
    channel: &TappedChannel,
    tx: &Position3,
    rx: &Position3,
    noise_variance: f64,
) -> Result<PbfResult> {
    if tx.norm() == 0.0 || rx.norm() == 0.0 {
        return Err(Error::EndpointAtOrigin);
    }
    let per_tap_snr: Vec<f64> = channel
        .taps()
        .map(|(_, m)| coherent_snr(power_w, m.len(), tx, rx, noise_variance))
        .collect();
    let (best_tap, best_snr) = strongest_tap(&per_tap_snr);
    Ok(PbfResult {
        per_tap_snr,
        best_tap,
        best_snr,
    })
}

/// 1-based argmax, first index wins ties.
fn strongest_tap(per_tap_snr: &[f64]) -> (usize, f64) {
    let (mut best_tap, mut best_snr) = (1, f64::NEG_INFINITY);
    for (i, &snr) in per_tap_snr.iter().enumerate() {
        if snr > best_snr {
            best_tap = i + 1;
            best_snr = snr;
        }
    }
    (best_tap, best_snr)
}

/// Copy of `topology` with the members of `tap` co-phased
/// (`φ = 2π(r_Tx + r_Rx)/λ`, unit amplitude) and all other elements off.
pub fn co_phased_topology(
    config: &SystemConfig,
    topology: &RisTopology,
    channel: &TappedChannel,
    tap: usize,
) -> Result<RisTopology> {
    let mut out = topology.clone();
    out.set_all(Reflection::OFF);
    let lambda = config.wavelength();
    for &index in channel.members(tap)? {
        let element = topology.position(index);
        let r = distance(&config.tx(), &element) + distance(&config.rx(), &element);
        let phase = 2.0 * PI * r.rem_euclid(lambda) / lambda;
        out.set_reflection(index, Reflection::new(1.0, phase)?)?;
    }
    Ok(out)
}
