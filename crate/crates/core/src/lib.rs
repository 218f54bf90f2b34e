//! Simulator for a time-reversal link assisted by a reconfigurable
//! intelligent surface (RIS) in the near-field regime.
//!
//! The pipeline is
//!
//! 1. [`geometry`]: element grid, endpoints and the near-field bound,
//! 2. [`channel`]: per-element spherical-wave coefficients and delays,
//! 3. [`tapped`]: binning of the paths into a bandwidth-limited tap channel,
//! 4. [`time_reversal`]: the time-reversed prefilter and SNR/SINR metrics,
//! 5. [`pbf`]: the co-phasing passive-beamforming baseline,
//! 6. [`experiment`]: configuration files, sweeps and CSV/table output.
//!
//! ```
//! use ris_tr::prelude::*;
//!
//! let config = SystemConfig::default();
//! let topology = RisTopology::new(1, 1225, 0.015).unwrap();
//! let paths = build_path_set(&config, &topology).unwrap();
//! let channel = bin_paths(&paths, config.bandwidth_hz()).unwrap();
//! assert_eq!(channel.tap_count(), 89);
//! ```

pub mod channel;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod pbf;
pub mod tapped;
pub mod time_reversal;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::channel::{
        build_path_set, link_coefficient, path_coefficient, path_delay, Path, PathSet,
    };
    pub use crate::error::{Error, Result};
    pub use crate::geometry::{
        distance, rayleigh_distance, validate_near_field, DelayModel, ElementIndex,
        NearFieldPolicy, NearFieldReport, Position3, Reflection, RisTopology, SystemConfig,
        SPEED_OF_LIGHT,
    };
    pub use crate::pbf::{co_phased_topology, pbf_best_snr, pbf_tap_snr, PbfResult};
    pub use crate::tapped::{bin_paths, tap_coefficient, TappedChannel};
    pub use crate::time_reversal::{
        effective_response, evaluate_link, isi_power, sinr, snr_bound, tr_prefilter, useful_power,
        LinkResult, TrPrefilter,
    };
}

/// `10·log10(x)`.
pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Converts a power in dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Relative error `|a - b| / max(|a|, |b|)`, zero when both are zero.
#[doc(hidden)]
pub fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
