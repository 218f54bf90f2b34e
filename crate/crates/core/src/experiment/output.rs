use std::io::Write;

use super::{OutputFormat, ResultRow, Units};
use crate::error::Result;

pub const CSV_HEADER: [&str; 13] = [
    "M",
    "N",
    "Q",
    "W_hz",
    "L",
    "tau_o_s",
    "snr_tr_db",
    "snr_tr_linear",
    "sinr_tr_db",
    "snr_pbf_best_db",
    "pbf_best_tap",
    "p_u_w",
    "p_isi_w",
];

/// 12 significant digits in scientific notation.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.rows.to_string(),
            r.cols.to_string(),
            r.element_count.to_string(),
            fmt_f64(r.bandwidth_hz),
            r.tap_count.to_string(),
            fmt_f64(r.tap_origin_s),
            fmt_f64(r.snr_tr_db()),
            fmt_f64(r.snr_tr),
            fmt_f64(r.sinr_tr_db()),
            fmt_f64(r.snr_pbf_best_db()),
            r.pbf_best_tap.to_string(),
            fmt_f64(r.useful_power_w),
            fmt_f64(r.isi_power_w),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Right-aligned text table.
pub(crate) fn render_table(header: &[String], body: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for row in body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut s = line(header);
    s.push('\n');
    s.push_str(&"-".repeat(s.len() - 1));
    s.push('\n');
    for row in body {
        s.push_str(&line(row));
        s.push('\n');
    }
    s
}

pub fn write_table<W: Write>(rows: &[ResultRow], units: Units, mut out: W) -> Result<()> {
    let mut header: Vec<String> = ["M", "N", "Q", "W [GHz]", "L", "PBF tap"]
        .map(String::from)
        .to_vec();
    let db = matches!(units, Units::Db | Units::Both);
    let lin = matches!(units, Units::Linear | Units::Both);
    if db {
        header.extend(["SNR TR [dB]", "SINR TR [dB]", "SNR PBF [dB]"].map(String::from));
    }
    if lin {
        header.extend(["SNR TR", "SINR TR", "SNR PBF"].map(String::from));
    }
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut cells = vec![
                r.rows.to_string(),
                r.cols.to_string(),
                r.element_count.to_string(),
                format!("{:.3}", r.bandwidth_hz / 1e9),
                r.tap_count.to_string(),
                r.pbf_best_tap.to_string(),
            ];
            if db {
                cells.extend(
                    [r.snr_tr_db(), r.sinr_tr_db(), r.snr_pbf_best_db()].map(|v| format!("{v:.4}")),
                );
            }
            if lin {
                cells.extend([r.snr_tr, r.sinr_tr, r.snr_pbf_best].map(|v| format!("{v:.6e}")));
            }
            cells
        })
        .collect();
    out.write_all(render_table(&header, &body).as_bytes())?;
    for r in rows.iter().filter(|r| !r.near_field_ok) {
        writeln!(
            out,
            "note: {}x{} lies outside the near-field bound",
            r.rows, r.cols
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_rows<W: Write>(
    rows: &[ResultRow],
    format: OutputFormat,
    units: Units,
    out: W,
) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(rows, out),
        OutputFormat::Table => write_table(rows, units, out),
    }
}
