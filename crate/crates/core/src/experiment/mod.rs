//! Single-point evaluation, parameter sweeps and the tap-count reference
//! table.

pub mod config;
pub mod output;
pub mod table1;

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Deserialize;

use crate::channel::build_path_set;
use crate::error::{Error, Result};
use crate::geometry::{Reflection, RisTopology, SystemConfig};
use crate::pbf::pbf_best_snr;
use crate::tapped::bin_paths;
use crate::time_reversal::evaluate_link;
use crate::to_db;

pub use config::{load_config, parse_config, LoadedConfig};
pub use output::{write_csv, write_rows, write_table, CSV_HEADER};
pub use table1::{reproduce_table1, Table1Cell, Table1Report, REFERENCE_TAPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Table,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "table" => Ok(Self::Table),
            _ => Err(Error::Schema(format!("unknown output format `{s}`"))),
        }
    }
}

/// Which SNR units the human-readable table shows. CSV always carries the
/// fixed column set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Db,
    Linear,
    #[default]
    Both,
}

impl FromStr for Units {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "db" => Ok(Self::Db),
            "linear" => Ok(Self::Linear),
            "both" => Ok(Self::Both),
            _ => Err(Error::Schema(format!("unknown units `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepDimension {
    /// Linear RIS with `M = 1`, `N = Q` for each listed `Q`.
    ElementCount(Vec<usize>),
    Bandwidth(Vec<f64>),
    /// `(M, N)` pairs.
    Topology(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SystemConfig,
    /// Supplies the spacing of every sweep point, and per-element
    /// reflections wherever its indices exist in the swept grid.
    pub topology: RisTopology,
    /// Reflection of elements outside `topology`.
    pub reflection: Reflection,
    pub dimension: SweepDimension,
    pub format: OutputFormat,
    pub units: Units,
}

impl SweepSpec {
    pub fn len(&self) -> usize {
        match &self.dimension {
            SweepDimension::ElementCount(v) => v.len(),
            SweepDimension::Bandwidth(v) => v.len(),
            SweepDimension::Topology(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn resized(&self, rows: usize, cols: usize) -> Result<RisTopology> {
        let mut t = RisTopology::new(rows, cols, self.topology.spacing())?;
        t.set_all(self.reflection);
        for i in self.topology.indices() {
            if let (true, Some(r)) = (t.contains(i), self.topology.reflection(i)) {
                t.set_reflection(i, r)?;
            }
        }
        Ok(t)
    }

    /// The `(config, topology)` pair of every sweep point, in sweep order.
    pub fn points(&self) -> Result<Vec<(SystemConfig, RisTopology)>> {
        match &self.dimension {
            SweepDimension::ElementCount(counts) => counts
                .iter()
                .map(|&q| Ok((self.base.clone(), self.resized(1, q)?)))
                .collect(),
            SweepDimension::Bandwidth(bws) => bws
                .iter()
                .map(|&w| Ok((self.base.clone().with_bandwidth(w)?, self.topology.clone())))
                .collect(),
            SweepDimension::Topology(pairs) => pairs
                .iter()
                .map(|&(m, n)| Ok((self.base.clone(), self.resized(m, n)?)))
                .collect(),
        }
    }
}

/// One evaluated operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub rows: usize,
    pub cols: usize,
    pub element_count: usize,
    pub bandwidth_hz: f64,
    pub tap_count: usize,
    pub tap_origin_s: f64,
    pub snr_tr: f64,
    pub sinr_tr: f64,
    pub snr_pbf_best: f64,
    pub pbf_best_tap: usize,
    pub useful_power_w: f64,
    pub isi_power_w: f64,
    pub near_field_ok: bool,
}

impl ResultRow {
    pub fn snr_tr_db(&self) -> f64 {
        to_db(self.snr_tr)
    }

    pub fn sinr_tr_db(&self) -> f64 {
        to_db(self.sinr_tr)
    }

    pub fn snr_pbf_best_db(&self) -> f64 {
        to_db(self.snr_pbf_best)
    }
}

/// Geometry → paths → taps → TR metrics → PBF baseline for one point.
pub fn run_single(config: &SystemConfig, topology: &RisTopology) -> Result<ResultRow> {
    let paths = build_path_set(config, topology)?;
    let channel = bin_paths(&paths, config.bandwidth_hz())?;
    let link = evaluate_link(
        config.power_w(),
        channel.coefficients(),
        config.noise_variance(),
    )?;
    let pbf = pbf_best_snr(
        config.power_w(),
        &channel,
        &config.tx(),
        &config.rx(),
        config.noise_variance(),
    )?;
    let row = ResultRow {
        rows: topology.rows(),
        cols: topology.cols(),
        element_count: topology.element_count(),
        bandwidth_hz: config.bandwidth_hz(),
        tap_count: channel.tap_count(),
        tap_origin_s: channel.origin(),
        snr_tr: link.snr_bound,
        sinr_tr: link.sinr,
        snr_pbf_best: pbf.best_snr,
        pbf_best_tap: pbf.best_tap,
        useful_power_w: link.useful_power,
        isi_power_w: link.isi_power,
        near_field_ok: paths.near_field().passed(),
    };
    debug_assert!(row.element_count == row.rows * row.cols && row.tap_count >= 1);
    Ok(row)
}

/// Evaluates every sweep point (in parallel) and returns the rows in sweep
/// order. Stops at the first failing point.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ResultRow>> {
    evaluate_points(spec)?.into_iter().collect()
}

fn evaluate_points(spec: &SweepSpec) -> Result<Vec<Result<ResultRow>>> {
    let points = spec.points()?;
    Ok(points.par_iter().map(|(c, t)| run_single(c, t)).collect())
}

/// Like [`run_sweep`] but writes rows as `format` to `out`. Rows preceding a
/// failing point are written and flushed before the error is returned.
pub fn run_sweep_to<W: Write>(
    spec: &SweepSpec,
    format: OutputFormat,
    out: W,
) -> Result<Vec<ResultRow>> {
    let results = evaluate_points(spec)?;
    let mut rows = Vec::with_capacity(results.len());
    let mut failure = None;
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    write_rows(&rows, format, spec.units, out)?;
    match failure {
        Some(e) => Err(e),
        None => Ok(rows),
    }
}
