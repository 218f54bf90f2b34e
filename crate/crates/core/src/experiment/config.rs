//! TOML configuration files.
//!
//! Every key is optional; an empty file yields the reference setup
//! (10 GHz carrier, 2 GHz bandwidth, 30 dBm, σ² = 1, Tx at (2, 2, 0),
//! Rx at (2, −2, 0), a 1×1225 linear RIS with 1.5 cm spacing). Unknown keys
//! are rejected.
//!
//! ```toml
//! schema_version = 1
//!
//! [system]
//! carrier_frequency_hz = 10e9
//! bandwidth_hz = 2e9
//! transmit_power_dbm = 30.0
//! noise_variance = 1.0
//! tx_position = [2.0, 2.0, 0.0]
//! rx_position = [2.0, -2.0, 0.0]
//! delay_model = "approx"        # or "exact"
//! near_field_policy = "warn"    # or "strict"
//!
//! [topology]
//! rows = 1
//! cols = 1225
//! element_spacing_m = 0.015
//! amplitude = 1.0
//! phase_rad = 0.0
//!
//! [[topology.elements]]         # per-element overrides
//! row = 0
//! col = 0
//! amplitude = 0.5
//! phase_rad = 1.2
//!
//! [sweep]                       # exactly one of the three lists
//! element_counts = [1, 9, 25]   # linear RIS, M = 1 and N = Q
//! # bandwidths_hz = [2e9, 4e9]
//! # topologies = [[35, 35], [1, 1225]]
//! format = "csv"                # or "table"
//! units = "both"                # "db", "linear" or "both"
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::dbm_to_watts;
use crate::error::{Error, Result};
use crate::geometry::{
    DelayModel, ElementIndex, NearFieldPolicy, Position3, Reflection, RisTopology, SystemConfig,
};

use super::{OutputFormat, SweepDimension, SweepSpec, Units};

pub const SCHEMA_VERSION: i64 = 1;

/// Element spacing used when the file does not set one.
pub const DEFAULT_SPACING_M: f64 = 0.015;
pub const DEFAULT_ROWS: usize = 1;
pub const DEFAULT_COLS: usize = 1225;

const ROOT_KEYS: &[&str] = &["schema_version", "system", "topology", "sweep"];
const SYSTEM_KEYS: &[&str] = &[
    "carrier_frequency_hz",
    "bandwidth_hz",
    "transmit_power_dbm",
    "noise_variance",
    "tx_position",
    "rx_position",
    "delay_model",
    "near_field_policy",
];
const TOPOLOGY_KEYS: &[&str] = &[
    "rows",
    "cols",
    "element_spacing_m",
    "amplitude",
    "phase_rad",
    "elements",
];
const ELEMENT_KEYS: &[&str] = &["row", "col", "amplitude", "phase_rad"];
const SWEEP_KEYS: &[&str] = &[
    "element_counts",
    "bandwidths_hz",
    "topologies",
    "format",
    "units",
];

#[derive(Debug, Default, Deserialize)]
struct RawConfig {
    schema_version: Option<i64>,
    #[serde(default)]
    system: RawSystem,
    #[serde(default)]
    topology: RawTopology,
    sweep: Option<RawSweep>,
}

#[derive(Debug, Default, Deserialize)]
struct RawSystem {
    carrier_frequency_hz: Option<f64>,
    bandwidth_hz: Option<f64>,
    transmit_power_dbm: Option<f64>,
    noise_variance: Option<f64>,
    tx_position: Option<[f64; 3]>,
    rx_position: Option<[f64; 3]>,
    delay_model: Option<DelayModelKey>,
    near_field_policy: Option<PolicyKey>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum DelayModelKey {
    Approx,
    Exact,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum PolicyKey {
    Warn,
    Strict,
}

#[derive(Debug, Default, Deserialize)]
struct RawTopology {
    rows: Option<i64>,
    cols: Option<i64>,
    element_spacing_m: Option<f64>,
    amplitude: Option<f64>,
    phase_rad: Option<f64>,
    #[serde(default)]
    elements: Vec<RawElement>,
}

#[derive(Debug, Deserialize)]
struct RawElement {
    row: i32,
    col: i32,
    amplitude: Option<f64>,
    phase_rad: Option<f64>,
}

#[derive(Debug, Deserialize)]
struct RawSweep {
    element_counts: Option<Vec<i64>>,
    bandwidths_hz: Option<Vec<f64>>,
    topologies: Option<Vec<[i64; 2]>>,
    format: Option<OutputFormat>,
    units: Option<Units>,
}

/// A fully resolved configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub system: SystemConfig,
    pub topology: RisTopology,
    pub sweep: Option<SweepSpec>,
}

impl Default for LoadedConfig {
    fn default() -> Self {
        parse_config("").expect("built-in defaults are valid")
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<LoadedConfig> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_config(&text)
}

fn unknown_keys(table: &toml::Table, allowed: &[&str], prefix: &str, out: &mut Vec<String>) {
    for key in table.keys() {
        if !allowed.contains(&key.as_str()) {
            out.push(format!("{prefix}{key}"));
        }
    }
}

/// Lists every key the schema does not know about.
fn check_keys(root: &toml::Table) -> Result<()> {
    let mut extra = Vec::new();
    unknown_keys(root, ROOT_KEYS, "", &mut extra);
    if let Some(toml::Value::Table(t)) = root.get("system") {
        unknown_keys(t, SYSTEM_KEYS, "system.", &mut extra);
    }
    if let Some(toml::Value::Table(t)) = root.get("topology") {
        unknown_keys(t, TOPOLOGY_KEYS, "topology.", &mut extra);
        if let Some(toml::Value::Array(elements)) = t.get("elements") {
            for (i, e) in elements.iter().enumerate() {
                if let toml::Value::Table(e) = e {
                    unknown_keys(
                        e,
                        ELEMENT_KEYS,
                        &format!("topology.elements[{i}]."),
                        &mut extra,
                    );
                }
            }
        }
    }
    if let Some(toml::Value::Table(t)) = root.get("sweep") {
        unknown_keys(t, SWEEP_KEYS, "sweep.", &mut extra);
    }
    if extra.is_empty() {
        Ok(())
    } else {
        Err(Error::Schema(format!("unknown keys: {}", extra.join(", "))))
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Unit(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

fn odd_dimension(name: &str, v: i64) -> Result<usize> {
    if v >= 1 && v % 2 == 1 {
        Ok(v as usize)
    } else {
        Err(Error::Schema(format!(
            "{name} = {v}: RIS dimensions must be odd positive integers"
        )))
    }
}

fn position(name: &str, v: [f64; 3]) -> Result<Position3> {
    let p = Position3::from(v);
    if !p.is_finite() || p.x <= 0.0 {
        return Err(Error::Unit(format!(
            "{name} = {v:?}: coordinates must be finite with x > 0"
        )));
    }
    Ok(p)
}

pub fn parse_config(text: &str) -> Result<LoadedConfig> {
    let root: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
    check_keys(&root)?;
    let raw: RawConfig = root
        .try_into()
        .map_err(|e: toml::de::Error| Error::Schema(e.to_string()))?;

    if let Some(v) = raw.schema_version {
        if v != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "schema_version {v} is not supported (expected {SCHEMA_VERSION})"
            )));
        }
    }

    let system = resolve_system(&raw.system)?;
    let (topology, uniform) = resolve_topology(&raw.topology)?;
    let sweep = raw
        .sweep
        .map(|s| resolve_sweep(s, &system, &topology, uniform))
        .transpose()?;
    Ok(LoadedConfig {
        system,
        topology,
        sweep,
    })
}

fn resolve_system(raw: &RawSystem) -> Result<SystemConfig> {
    let d = SystemConfig::default();
    let carrier = positive(
        "carrier_frequency_hz",
        raw.carrier_frequency_hz.unwrap_or(d.carrier_hz()),
    )?;
    let bandwidth = positive("bandwidth_hz", raw.bandwidth_hz.unwrap_or(d.bandwidth_hz()))?;
    let power_dbm = raw.transmit_power_dbm.unwrap_or(30.0);
    if !power_dbm.is_finite() {
        return Err(Error::Unit(format!(
            "transmit_power_dbm must be finite, got {power_dbm}"
        )));
    }
    let noise = positive(
        "noise_variance",
        raw.noise_variance.unwrap_or(d.noise_variance()),
    )?;
    let tx = match raw.tx_position {
        Some(v) => position("tx_position", v)?,
        None => d.tx(),
    };
    let rx = match raw.rx_position {
        Some(v) => position("rx_position", v)?,
        None => d.rx(),
    };
    let delay_model = match raw.delay_model {
        Some(DelayModelKey::Exact) => DelayModel::Exact,
        _ => DelayModel::Approximate,
    };
    let policy = match raw.near_field_policy {
        Some(PolicyKey::Strict) => NearFieldPolicy::Strict,
        _ => NearFieldPolicy::Warn,
    };
    Ok(
        SystemConfig::new(carrier, bandwidth, dbm_to_watts(power_dbm), noise, tx, rx)
            .map_err(|e| Error::Unit(e.to_string()))?
            .with_delay_model(delay_model)
            .with_near_field_policy(policy),
    )
}

fn reflection(amplitude: f64, phase: f64) -> Result<Reflection> {
    Reflection::new(amplitude, phase).map_err(|e| Error::Unit(e.to_string()))
}

fn resolve_topology(raw: &RawTopology) -> Result<(RisTopology, Reflection)> {
    let rows = odd_dimension("topology.rows", raw.rows.unwrap_or(DEFAULT_ROWS as i64))?;
    let cols = odd_dimension("topology.cols", raw.cols.unwrap_or(DEFAULT_COLS as i64))?;
    let spacing = positive(
        "element_spacing_m",
        raw.element_spacing_m.unwrap_or(DEFAULT_SPACING_M),
    )?;
    let mut topology = RisTopology::new(rows, cols, spacing)?;
    let uniform = reflection(raw.amplitude.unwrap_or(1.0), raw.phase_rad.unwrap_or(0.0))?;
    topology.set_all(uniform);
    for e in &raw.elements {
        let index = ElementIndex::new(e.row, e.col);
        let current = topology.reflection(index).ok_or_else(|| {
            Error::Schema(format!(
                "topology.elements: {index} is outside the {rows}x{cols} grid"
            ))
        })?;
        let r = reflection(
            e.amplitude.unwrap_or(current.amplitude()),
            e.phase_rad.unwrap_or(current.phase()),
        )?;
        topology.set_reflection(index, r)?;
    }
    Ok((topology, uniform))
}

fn strictly_increasing<T: PartialOrd>(name: &str, v: &[T]) -> Result<()> {
    if v.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(Error::Schema(format!(
            "sweep.{name} must be strictly increasing"
        )))
    }
}

fn resolve_sweep(
    raw: RawSweep,
    system: &SystemConfig,
    topology: &RisTopology,
    uniform: Reflection,
) -> Result<SweepSpec> {
    let given = [
        raw.element_counts.is_some(),
        raw.bandwidths_hz.is_some(),
        raw.topologies.is_some(),
    ];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(Error::Schema(
            "sweep needs exactly one of element_counts, bandwidths_hz, topologies".into(),
        ));
    }
    let dimension = if let Some(counts) = raw.element_counts {
        if counts.is_empty() {
            return Err(Error::Schema("sweep.element_counts is empty".into()));
        }
        let counts = counts
            .iter()
            .map(|&q| odd_dimension("sweep.element_counts", q))
            .collect::<Result<Vec<_>>>()?;
        strictly_increasing("element_counts", &counts)?;
        SweepDimension::ElementCount(counts)
    } else if let Some(bw) = raw.bandwidths_hz {
        if bw.is_empty() {
            return Err(Error::Schema("sweep.bandwidths_hz is empty".into()));
        }
        for &w in &bw {
            positive("sweep.bandwidths_hz", w)?;
        }
        strictly_increasing("bandwidths_hz", &bw)?;
        SweepDimension::Bandwidth(bw)
    } else {
        let topologies = raw.topologies.unwrap_or_default();
        if topologies.is_empty() {
            return Err(Error::Schema("sweep.topologies is empty".into()));
        }
        SweepDimension::Topology(
            topologies
                .iter()
                .map(|&[m, n]| {
                    Ok((
                        odd_dimension("sweep.topologies", m)?,
                        odd_dimension("sweep.topologies", n)?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?,
        )
    };
    Ok(SweepSpec {
        base: system.clone(),
        topology: topology.clone(),
        reflection: uniform,
        dimension,
        format: raw.format.unwrap_or_default(),
        units: raw.units.unwrap_or_default(),
    })
}
