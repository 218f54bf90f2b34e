//! Direct-summation reference for the whole link, written from the closed
//! forms with 1-based indices and no shared code with the library pipeline.

#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::PI;

use num_complex::Complex64;

pub struct Element {
    pub row: i32,
    pub col: i32,
    pub amplitude: f64,
    pub phase: f64,
}

pub struct Geometry {
    pub rows: usize,
    pub cols: usize,
    pub spacing: f64,
    pub tx: [f64; 3],
    pub rx: [f64; 3],
    pub wavelength: f64,
    pub c0: f64,
    pub elements: Vec<Element>,
}

pub struct OracleTaps {
    pub tap_origin: f64,
    pub taps: usize,
    /// `T_l` as (row, col) lists, index 0 unused.
    pub members: Vec<Vec<(i32, i32)>>,
    /// `h_eq[l]`, index 0 unused.
    pub h_eq: Vec<Complex64>,
}

pub struct OracleLink {
    pub useful_power: f64,
    pub isi_power: f64,
    pub sinr: f64,
    pub snr_bound: f64,
    /// `(ĥ ∗ h_eq)[l]`, index 0 unused.
    pub response: Vec<Complex64>,
}

fn norm(p: [f64; 3]) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

fn dist(p: [f64; 3], q: [f64; 3]) -> f64 {
    norm([p[0] - q[0], p[1] - q[1], p[2] - q[2]])
}

impl Geometry {
    pub fn uniform(
        rows: usize,
        cols: usize,
        spacing: f64,
        tx: [f64; 3],
        rx: [f64; 3],
        fc: f64,
    ) -> Self {
        let c0 = 299_792_458.0;
        let mut elements = Vec::new();
        let (hm, hn) = ((rows as i32 - 1) / 2, (cols as i32 - 1) / 2);
        for m in -hm..=hm {
            for n in -hn..=hn {
                elements.push(Element {
                    row: m,
                    col: n,
                    amplitude: 1.0,
                    phase: 0.0,
                });
            }
        }
        Self {
            rows,
            cols,
            spacing,
            tx,
            rx,
            wavelength: c0 / fc,
            c0,
            elements,
        }
    }

    fn element_position(&self, e: &Element) -> [f64; 3] {
        [
            0.0,
            e.col as f64 * self.spacing,
            e.row as f64 * self.spacing,
        ]
    }

    /// Path coefficients with the naive (unreduced) phase, binned by linear
    /// search over the half-open tap intervals.
    pub fn taps(&self, bandwidth: f64) -> OracleTaps {
        let w = bandwidth;
        let mut coeff = Vec::new();
        let mut delay = Vec::new();
        for e in &self.elements {
            let p = self.element_position(e);
            let r = dist(self.tx, p) + dist(self.rx, p);
            let mag = e.amplitude / (4.0 * PI * norm(self.tx) * norm(self.rx));
            let arg = e.phase - 2.0 * PI * r / self.wavelength;
            coeff.push(Complex64::new(mag * arg.cos(), mag * arg.sin()));
            delay.push(r / self.c0);
        }
        let tau_min = delay.iter().cloned().fold(f64::INFINITY, f64::min);
        let tau_max = delay.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let tau_o = (tau_min * w).floor() / w;
        let taps = (((tau_max - tau_o) * w).ceil() as usize).max(1);

        let mut members = vec![Vec::new(); taps + 1];
        let mut h_eq = vec![Complex64::new(0.0, 0.0); taps + 1];
        for (i, e) in self.elements.iter().enumerate() {
            let off = delay[i] - tau_o;
            let mut placed = false;
            for l in 1..=taps {
                if (l - 1) as f64 / w <= off && off < l as f64 / w {
                    members[l].push((e.row, e.col));
                    h_eq[l] += coeff[i];
                    placed = true;
                    break;
                }
            }
            assert!(placed, "path {i} falls outside the {taps} taps");
        }

        OracleTaps {
            tap_origin: tau_o,
            taps,
            members,
            h_eq,
        }
    }
}

/// Prefilter, convolution and metrics by direct double summation over the
/// 1-based CIR `h[1..=L]` (`h[0]` is ignored).
pub fn link_metrics(h_eq: &[Complex64], power: f64, noise: f64) -> OracleLink {
    let taps = h_eq.len() - 1;
    let energy: f64 = (1..=taps).map(|l| h_eq[l].norm_sqr()).sum();
    let mut hat = vec![Complex64::new(0.0, 0.0); taps + 1];
    for k in 1..=taps {
        hat[k] = h_eq[taps + 1 - k].conj() / energy.sqrt();
    }
    let mut response = vec![Complex64::new(0.0, 0.0); 2 * taps];
    for l in 1..=2 * taps - 1 {
        for k in 1..=taps {
            let j = l as i64 + 1 - k as i64;
            if j >= 1 && j as usize <= taps {
                response[l] += hat[k] * h_eq[j as usize];
            }
        }
    }
    let useful_power = power * response[taps].norm_sqr();
    let isi_power = power
        * (1..=2 * taps - 1)
            .filter(|&l| l != taps)
            .map(|l| response[l].norm_sqr())
            .sum::<f64>();
    OracleLink {
        useful_power,
        isi_power,
        sinr: useful_power / (isi_power + noise),
        snr_bound: useful_power / noise,
        response,
    }
}
