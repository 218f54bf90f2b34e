//! Tap counts of a 1225-element RIS for four layouts at 2 and 4 GHz,
//! compared against the published reference values.

use std::io::Write;

use super::output::{fmt_f64, render_table};
use crate::channel::build_path_set;
use crate::error::{Error, Result};
use crate::geometry::{RisTopology, SystemConfig};
use crate::tapped::bin_paths;

/// `(M, N, W [Hz], L)`.
pub const REFERENCE_TAPS: [(usize, usize, f64, usize); 8] = [
    (35, 35, 2e9, 1),
    (7, 175, 2e9, 3),
    (5, 245, 2e9, 6),
    (1, 1225, 2e9, 89),
    (35, 35, 4e9, 1),
    (7, 175, 4e9, 5),
    (5, 245, 4e9, 10),
    (1, 1225, 4e9, 176),
];

pub const TABLE1_CSV_HEADER: [&str; 6] = ["M", "N", "W_hz", "L_computed", "L_reference", "match"];

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Cell {
    pub rows: usize,
    pub cols: usize,
    pub bandwidth_hz: f64,
    pub computed: usize,
    pub reference: usize,
}

impl Table1Cell {
    pub fn matches(&self) -> bool {
        self.computed == self.reference
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Report {
    pub cells: Vec<Table1Cell>,
}

impl Table1Report {
    pub fn is_match(&self) -> bool {
        self.cells.iter().all(Table1Cell::matches)
    }

    pub fn mismatches(&self) -> Vec<String> {
        self.cells
            .iter()
            .filter(|c| !c.matches())
            .map(|c| {
                format!(
                    "{}x{} at {} GHz: computed {} vs reference {}",
                    c.rows,
                    c.cols,
                    c.bandwidth_hz / 1e9,
                    c.computed,
                    c.reference
                )
            })
            .collect()
    }

    /// `Err(ReplicationMismatch)` listing the offending cells, if any.
    pub fn check(&self) -> Result<()> {
        let bad = self.mismatches();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::ReplicationMismatch(bad))
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(TABLE1_CSV_HEADER)?;
        for c in &self.cells {
            w.write_record([
                c.rows.to_string(),
                c.cols.to_string(),
                fmt_f64(c.bandwidth_hz),
                c.computed.to_string(),
                c.reference.to_string(),
                c.matches().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_table<W: Write>(&self, mut out: W) -> Result<()> {
        let header = ["M x N", "W [GHz]", "L", "reference", ""].map(String::from);
        let body: Vec<Vec<String>> = self
            .cells
            .iter()
            .map(|c| {
                vec![
                    format!("{}x{}", c.rows, c.cols),
                    format!("{}", c.bandwidth_hz / 1e9),
                    c.computed.to_string(),
                    c.reference.to_string(),
                    if c.matches() { "ok" } else { "MISMATCH" }.to_string(),
                ]
            })
            .collect();
        out.write_all(render_table(&header, &body).as_bytes())?;
        out.flush()?;
        Ok(())
    }
}

/// Computes `L` for the reference cells whose bandwidth is listed in
/// `bandwidths_hz` (all eight when empty), using the endpoints, carrier and
/// delay model of `base` and element spacing `spacing_m`.
pub fn reproduce_table1(
    base: &SystemConfig,
    spacing_m: f64,
    bandwidths_hz: &[f64],
) -> Result<Table1Report> {
    for &w in bandwidths_hz {
        if !REFERENCE_TAPS.iter().any(|r| r.2 == w) {
            return Err(Error::NoReference { bandwidth_hz: w });
        }
    }
    let cells = REFERENCE_TAPS
        .iter()
        .filter(|r| bandwidths_hz.is_empty() || bandwidths_hz.contains(&r.2))
        .map(|&(rows, cols, bandwidth_hz, reference)| {
            let topology = RisTopology::new(rows, cols, spacing_m)?;
            let paths = build_path_set(base, &topology)?;
            let computed = bin_paths(&paths, bandwidth_hz)?.tap_count();
            Ok(Table1Cell {
                rows,
                cols,
                bandwidth_hz,
                computed,
                reference,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table1Report { cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::config::DEFAULT_SPACING_M;
    use crate::geometry::SPEED_OF_LIGHT;

    #[test]
    fn all_cells_match() {
        let r = reproduce_table1(&SystemConfig::default(), DEFAULT_SPACING_M, &[]).unwrap();
        assert_eq!(r.cells.len(), 8);
        assert!(r.is_match(), "{:?}", r.mismatches());
        assert!(r.check().is_ok());
    }

    #[test]
    fn perturbed_light_speed_is_detected() {
        let base = SystemConfig::default()
            .with_speed_of_light(SPEED_OF_LIGHT * 1.01)
            .unwrap();
        let r = reproduce_table1(&base, DEFAULT_SPACING_M, &[]).unwrap();
        assert!(!r.is_match());
        match r.check() {
            Err(Error::ReplicationMismatch(cells)) => {
                assert!(cells.iter().any(|c| c.contains("1x1225")))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn partial_report() {
        let r = reproduce_table1(&SystemConfig::default(), DEFAULT_SPACING_M, &[2e9]).unwrap();
        assert_eq!(r.cells.len(), 4);
        assert!(r.cells.iter().all(|c| c.bandwidth_hz == 2e9));
        assert!(matches!(
            reproduce_table1(&SystemConfig::default(), DEFAULT_SPACING_M, &[3e9]),
            Err(Error::NoReference { .. })
        ));
    }

    #[test]
    fn csv_output() {
        let r = reproduce_table1(&SystemConfig::default(), DEFAULT_SPACING_M, &[4e9]).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "M,N,W_hz,L_computed,L_reference,match"
        );
        assert!(text.contains("1,1225,4.00000000000e9,176,176,true"));
    }
}
