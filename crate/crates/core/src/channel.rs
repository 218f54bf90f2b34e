//! Near-field channel through the RIS under the uniform spherical wave model.
//!
//! Every element contributes one propagation path. The magnitude of a link
//! coefficient uses the endpoint-to-centre distance `‖p_i‖` (uniform gain),
//! the phase uses the exact endpoint-to-element distance.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{
    distance, validate_near_field, DelayModel, ElementIndex, NearFieldReport, Position3,
    RisTopology, SystemConfig,
};

/// Phase `−2π r/λ`, with `r` reduced modulo `λ` first so large `r/λ`
/// ratios do not eat into the mantissa.
fn propagation_phase(r: f64, wavelength: f64) -> f64 {
    -2.0 * PI * r.rem_euclid(wavelength) / wavelength
}

/// `h_i = exp(−j2π r/λ) / (‖p_i‖ √(4π))` between an endpoint and one element.
pub fn link_coefficient(
    endpoint: &Position3,
    element: &Position3,
    wavelength: f64,
) -> Result<Complex64> {
    let norm = endpoint.norm();
    if norm == 0.0 {
        return Err(Error::EndpointAtOrigin);
    }
    let r = distance(endpoint, element);
    let magnitude = 1.0 / (norm * (4.0 * PI).sqrt());
    Ok(Complex64::from_polar(
        magnitude,
        propagation_phase(r, wavelength),
    ))
}

/// One Tx → element → Rx path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Path {
    pub index: ElementIndex,
    pub tx_distance: f64,
    pub rx_distance: f64,
    pub coefficient: Complex64,
    pub delay: f64,
}

fn endpoint_norms(config: &SystemConfig) -> Result<(f64, f64)> {
    let (tx, rx) = (config.tx().norm(), config.rx().norm());
    if tx == 0.0 || rx == 0.0 {
        return Err(Error::EndpointAtOrigin);
    }
    Ok((tx, rx))
}

fn make_path(config: &SystemConfig, topology: &RisTopology, index: ElementIndex) -> Result<Path> {
    let reflection = topology
        .reflection(index)
        .ok_or(Error::UnknownIndex(index))?;
    let (tx_norm, rx_norm) = endpoint_norms(config)?;
    let element = topology.position(index);
    let tx_distance = distance(&config.tx(), &element);
    let rx_distance = distance(&config.rx(), &element);
    let lambda = config.wavelength();

    let magnitude = reflection.amplitude() / (4.0 * PI * tx_norm * rx_norm);
    let phase =
        reflection.phase() - 2.0 * PI * (tx_distance + rx_distance).rem_euclid(lambda) / lambda;

    let excess = match config.delay_model() {
        DelayModel::Approximate => 0.0,
        DelayModel::Exact => lambda * reflection.phase() / (2.0 * PI),
    };
    let delay = (tx_distance + rx_distance + excess) / config.speed_of_light();

    Ok(Path {
        index,
        tx_distance,
        rx_distance,
        coefficient: Complex64::from_polar(magnitude, phase),
        delay,
    })
}

/// End-to-end coefficient `h_Tx · h_Rx · Φ` of the path through `index`.
pub fn path_coefficient(
    config: &SystemConfig,
    topology: &RisTopology,
    index: ElementIndex,
) -> Result<Complex64> {
    make_path(config, topology, index).map(|p| p.coefficient)
}

/// Delay of the path through `index`, in seconds.
pub fn path_delay(
    config: &SystemConfig,
    topology: &RisTopology,
    index: ElementIndex,
) -> Result<f64> {
    make_path(config, topology, index).map(|p| p.delay)
}

/// All `Q` paths of the RIS in row-major element order.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSet {
    topology: RisTopology,
    paths: Vec<Path>,
    min_delay: f64,
    max_delay: f64,
    near_field: NearFieldReport,
}

impl PathSet {
    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn min_delay(&self) -> f64 {
        self.min_delay
    }

    pub fn max_delay(&self) -> f64 {
        self.max_delay
    }

    pub fn topology(&self) -> &RisTopology {
        &self.topology
    }

    pub fn near_field(&self) -> &NearFieldReport {
        &self.near_field
    }

    pub fn get(&self, index: ElementIndex) -> Option<&Path> {
        self.topology.slot(index).map(|s| &self.paths[s])
    }
}

/// Builds the multipath channel. The near-field check runs first and fails
/// only under the strict policy.
pub fn build_path_set(config: &SystemConfig, topology: &RisTopology) -> Result<PathSet> {
    let near_field = validate_near_field(config, topology)?;
    let paths = topology
        .indices()
        .map(|i| make_path(config, topology, i))
        .collect::<Result<Vec<_>>>()?;
    let min_delay = paths.iter().map(|p| p.delay).fold(f64::INFINITY, f64::min);
    let max_delay = paths
        .iter()
        .map(|p| p.delay)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(PathSet {
        topology: topology.clone(),
        paths,
        min_delay,
        max_delay,
        near_field,
    })
}
