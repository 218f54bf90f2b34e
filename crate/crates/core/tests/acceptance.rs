//! Exit criteria of the simulator. Each test prints one PASS/FAIL line; run
//! with `cargo test --test acceptance -- --nocapture --test-threads 1` to
//! see them in order.

mod oracle;

use std::collections::HashSet;
use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ris_tr::experiment::config::DEFAULT_SPACING_M;
use ris_tr::experiment::{
    reproduce_table1, run_sweep, write_csv, LoadedConfig, OutputFormat, SweepDimension, SweepSpec,
    Units,
};
use ris_tr::prelude::*;
use ris_tr::rel_err;

use num_complex::Complex64;
use oracle::{Element, Geometry};

fn report(id: u32, name: &str, passed: bool, detail: &str) {
    println!(
        "AC{id} [{}] {name}: {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "AC{id} {name} failed: {detail}");
}

struct RandomLink {
    rows: usize,
    cols: usize,
    tx: Position3,
    rx: Position3,
    bandwidth: f64,
}

/// Odd `M×N` with `Q ≤ max_q` and `M + N > 2`, endpoints with `x > 0` inside
/// the near-field bound, `W ∈ [0.5, 8]` GHz.
fn random_link(rng: &mut ChaCha8Rng, max_rows: usize, max_q: usize) -> RandomLink {
    loop {
        let rows = 2 * rng.gen_range(0..=(max_rows - 1) / 2) + 1;
        let max_cols = max_q / rows;
        if max_cols == 0 {
            continue;
        }
        let cols = 2 * rng.gen_range(0..=(max_cols - 1) / 2) + 1;
        if rows + cols <= 2 {
            continue;
        }
        let bound = DEFAULT_SPACING_M * (((rows - 1).pow(2) + (cols - 1).pow(2)) as f64);
        let limit = bound.min(10.0);
        let mut endpoint = || loop {
            let v = [
                rng.gen_range(0.0..1.0f64),
                rng.gen_range(-1.0..1.0f64),
                rng.gen_range(-1.0..1.0f64),
            ];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if v[0] < 0.05 || !(0.1..=1.0).contains(&n) {
                continue;
            }
            let r = rng.gen_range(0.3 * limit..=limit);
            break Position3::new(v[0] / n * r, v[1] / n * r, v[2] / n * r);
        };
        let tx = endpoint();
        let rx = endpoint();
        let bandwidth = rng.gen_range(0.5e9..=8e9);
        return RandomLink {
            rows,
            cols,
            tx,
            rx,
            bandwidth,
        };
    }
}

impl RandomLink {
    fn config(&self) -> SystemConfig {
        SystemConfig::default()
            .with_endpoints(self.tx, self.rx)
            .unwrap()
            .with_bandwidth(self.bandwidth)
            .unwrap()
            .with_near_field_policy(NearFieldPolicy::Strict)
    }

    fn topology(&self) -> RisTopology {
        RisTopology::new(self.rows, self.cols, DEFAULT_SPACING_M).unwrap()
    }
}

fn linear_snr(q: usize, bandwidth: f64) -> (f64, f64) {
    let c = SystemConfig::default().with_bandwidth(bandwidth).unwrap();
    let t = RisTopology::new(1, q, DEFAULT_SPACING_M).unwrap();
    let ch = bin_paths(&build_path_set(&c, &t).unwrap(), bandwidth).unwrap();
    let tr = snr_bound(c.power_w(), ch.coefficients(), c.noise_variance());
    let pbf = pbf_best_snr(c.power_w(), &ch, &c.tx(), &c.rx(), c.noise_variance()).unwrap();
    (tr, pbf.best_snr)
}

fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

#[test]
fn ac1_table1_replication() {
    let start = Instant::now();
    let report_ = reproduce_table1(&SystemConfig::default(), DEFAULT_SPACING_M, &[]).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let cells: Vec<String> = report_
        .cells
        .iter()
        .map(|c| {
            format!(
                "{}x{}@{}G={}/{}",
                c.rows,
                c.cols,
                c.bandwidth_hz / 1e9,
                c.computed,
                c.reference
            )
        })
        .collect();
    report(
        1,
        "reference tap counts",
        report_.cells.len() == 8 && report_.is_match() && elapsed < 5.0,
        &format!("{} in {elapsed:.3} s", cells.join(" ")),
    );
}

#[test]
fn ac2_matched_filter_peak() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_im, mut worst_rel, mut worst_energy) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let link = random_link(&mut rng, 45, 2025);
        let paths = build_path_set(&link.config(), &link.topology()).unwrap();
        let ch = bin_paths(&paths, link.bandwidth).unwrap();
        let h = ch.coefficients();
        let f = tr_prefilter(h).unwrap();
        let r = effective_response(&f, h).unwrap();
        let peak = r[ch.tap_count() - 1];
        let expected = h.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        worst_im = worst_im.max(peak.im.abs() / expected);
        worst_rel = worst_rel.max(rel_err(peak.re, expected));
        worst_energy = worst_energy.max((f.energy() - 1.0).abs());
    }
    report(
        2,
        "matched-filter peak",
        worst_im <= 1e-10 && worst_rel <= 1e-10 && worst_energy <= 1e-12,
        &format!("1000 configs, max |Im|/peak {worst_im:.2e}, max rel err {worst_rel:.2e}, max |energy-1| {worst_energy:.2e}"),
    );
}

#[test]
fn ac3_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst, mut worst_heq) = (0.0f64, 0.0f64);
    let mut count = 0;
    let mut max_taps = 0;
    while count < 200 {
        let link = random_link(&mut rng, 9, 301);
        let mut topology = link.topology();
        let mut elements = Vec::new();
        for i in topology.indices().collect::<Vec<_>>() {
            let a = rng.gen_range(0.0..=1.0);
            let phi = rng.gen_range(0.0..2.0 * PI);
            let r = Reflection::new(a, phi).unwrap();
            topology.set_reflection(i, r).unwrap();
            elements.push(Element {
                row: i.row,
                col: i.col,
                amplitude: r.amplitude(),
                phase: r.phase(),
            });
        }
        let config = link.config();
        let ch = bin_paths(&build_path_set(&config, &topology).unwrap(), link.bandwidth).unwrap();
        if ch.tap_count() > 8 {
            continue;
        }
        let mut geometry = Geometry::uniform(
            link.rows,
            link.cols,
            DEFAULT_SPACING_M,
            [link.tx.x, link.tx.y, link.tx.z],
            [link.rx.x, link.rx.y, link.rx.z],
            config.carrier_hz(),
        );
        geometry.elements = elements;
        let power = rng.gen_range(0.1..10.0);
        let noise = rng.gen_range(1e-6..1e-3);
        let oracle_taps = geometry.taps(link.bandwidth);
        assert_eq!(oracle_taps.taps, ch.tap_count());
        let norm = ch
            .coefficients()
            .iter()
            .map(|h| h.norm_sqr())
            .sum::<f64>()
            .sqrt();
        for (l, members) in ch.taps() {
            let ours: HashSet<(i32, i32)> = members.iter().map(|i| (i.row, i.col)).collect();
            let theirs: HashSet<(i32, i32)> = oracle_taps.members[l].iter().cloned().collect();
            assert_eq!(ours, theirs, "tap {l} membership");
            worst_heq =
                worst_heq.max((ch.coefficient(l).unwrap() - oracle_taps.h_eq[l]).norm() / norm);
        }

        let mut h_1based = vec![Complex64::new(0.0, 0.0)];
        h_1based.extend_from_slice(ch.coefficients());
        let expected = oracle::link_metrics(&h_1based, power, noise);
        let got = evaluate_link(power, ch.coefficients(), noise).unwrap();
        for (a, b) in [
            (got.useful_power, expected.useful_power),
            (got.isi_power, expected.isi_power),
            (got.sinr, expected.sinr),
            (got.snr_bound, expected.snr_bound),
        ] {
            worst = worst.max(rel_err(a, b));
        }
        max_taps = max_taps.max(ch.tap_count());
        count += 1;
    }
    report(
        3,
        "brute-force oracle equivalence",
        worst <= 1e-12 && worst_heq <= 1e-10,
        &format!(
            "200 channels (L ≤ {max_taps}), metrics max rel err {worst:.2e}, taps identical, h_eq max err {worst_heq:.2e} of ‖h‖"
        ),
    );
}

#[test]
fn ac4_single_element_degeneracy() {
    let c = LoadedConfig::default().system;
    let t = RisTopology::new(1, 1, DEFAULT_SPACING_M).unwrap();
    let ch = bin_paths(&build_path_set(&c, &t).unwrap(), c.bandwidth_hz()).unwrap();
    let tr = snr_bound(c.power_w(), ch.coefficients(), c.noise_variance());
    let pbf = pbf_best_snr(c.power_w(), &ch, &c.tx(), &c.rx(), c.noise_variance())
        .unwrap()
        .best_snr;
    let (dt, dr) = (c.tx().norm(), c.rx().norm());
    let expected = c.power_w() / (16.0 * PI * PI * dt * dt * dr * dr * c.noise_variance());
    report(
        4,
        "single-element degeneracy",
        rel_err(tr, expected) <= 1e-9
            && rel_err(pbf, expected) <= 1e-9
            && (expected - 9.8946e-5).abs() < 1e-9,
        &format!(
            "TR {tr:.6e} ({:.3} dB), PBF {pbf:.6e}, closed form {expected:.6e}",
            db(tr)
        ),
    );
}

#[test]
fn ac5_element_count_trend() {
    let start = Instant::now();
    let w = 2e9;
    let grid: Vec<usize> = (0..=612)
        .step_by(6)
        .map(|k| 2 * k + 1)
        .chain([1225])
        .collect();
    let values: Vec<(usize, f64, f64)> = grid
        .iter()
        .map(|&q| {
            let (tr, pbf) = linear_snr(q, w);
            (q, tr, pbf)
        })
        .collect();
    let (_, tr_1225, pbf_1225) = *values.last().unwrap();
    let (tr_49, _) = linear_snr(49, w);
    // first Q from which the best-tap PBF SNR no longer changes
    let plateau = values
        .iter()
        .rev()
        .take_while(|v| v.2 == pbf_1225)
        .last()
        .map(|v| v.0)
        .unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    report(
        5,
        "SNR versus element count",
        tr_1225 > pbf_1225 && tr_1225 > tr_49 && plateau < 1225 && elapsed < 10.0,
        &format!(
            "TR(1225) {:.3} dB vs PBF(1225) {:.3} dB, TR(49) {:.3} dB, PBF flat from Q = {plateau}, {elapsed:.2} s",
            db(tr_1225),
            db(pbf_1225),
            db(tr_49)
        ),
    );
}

#[test]
fn ac6_bandwidth_crossover() {
    let crossover = (0..=100)
        .map(|k| 2 * k + 1)
        .find(|&q| linear_snr(q, 4e9).0 > linear_snr(q, 2e9).0);
    let (tr2, _) = linear_snr(1225, 2e9);
    let (tr4, _) = linear_snr(1225, 4e9);
    report(
        6,
        "bandwidth crossover",
        crossover.is_some() && tr2 > tr4,
        &format!(
            "W=4 GHz first beats 2 GHz at Q = {crossover:?}; at Q = 1225: {:.3} dB (2 GHz) vs {:.3} dB (4 GHz)",
            db(tr2),
            db(tr4)
        ),
    );
}

#[test]
fn ac7_tap_partition() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    let mut boundary_cases = 0;
    for trial in 0..1000 {
        let link = random_link(&mut rng, 45, 2025);
        let paths = build_path_set(&link.config(), &link.topology()).unwrap();
        let w = link.bandwidth;
        let ch = bin_paths(&paths, w).unwrap();
        let origin = ch.origin();
        let mut seen = HashSet::new();
        let mut ok = origin <= paths.min_delay();
        for (l, members) in ch.taps() {
            for i in members {
                ok &= seen.insert(*i);
                let off = paths.get(*i).unwrap().delay - origin;
                ok &= (l - 1) as f64 / w <= off && off < l as f64 / w;
            }
        }
        ok &= seen.len() == paths.len();
        let ceil = (((paths.max_delay() - origin) * w).ceil() as usize).max(1);
        let on_edge = (paths.max_delay() - origin) * w == ceil as f64;
        if on_edge {
            boundary_cases += 1;
            ok &= ch.tap_count() == ceil + 1;
        } else {
            ok &= ch.tap_count() == ceil;
        }
        if !ok {
            failures.push(trial);
        }
    }
    report(
        7,
        "tap partition invariants",
        failures.is_empty(),
        &format!(
            "1000 configs, {} failures, {boundary_cases} exact upper-edge ties",
            failures.len()
        ),
    );
}

#[test]
fn ac8_pbf_cross_module_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let mut taps_checked = 0;
    for _ in 0..100 {
        let link = random_link(&mut rng, 45, 2025);
        let config = link.config();
        let topology = link.topology();
        let ch = bin_paths(&build_path_set(&config, &topology).unwrap(), link.bandwidth).unwrap();
        for l in 1..=ch.tap_count() {
            let pbf = pbf_tap_snr(
                config.power_w(),
                &ch,
                l,
                &config.tx(),
                &config.rx(),
                config.noise_variance(),
            )
            .unwrap();
            let cp = co_phased_topology(&config, &topology, &ch, l).unwrap();
            let cp_ch = bin_paths(&build_path_set(&config, &cp).unwrap(), link.bandwidth).unwrap();
            let tr = snr_bound(
                config.power_w(),
                cp_ch.coefficients(),
                config.noise_variance(),
            );
            worst = worst.max(rel_err(pbf, tr));
            taps_checked += 1;
        }
    }
    report(
        8,
        "PBF / co-phased TR identity",
        worst <= 1e-9,
        &format!("100 configs, {taps_checked} taps, max rel err {worst:.2e}"),
    );
}

fn q_sweep_spec() -> SweepSpec {
    let c = LoadedConfig::default();
    SweepSpec {
        base: c.system,
        topology: c.topology,
        reflection: Reflection::UNIT,
        dimension: SweepDimension::ElementCount((0..50).map(|k| 24 * k + 1).collect()),
        format: OutputFormat::Csv,
        units: Units::Both,
    }
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_ris-tr"))
        .args(args)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

#[test]
fn ac9_determinism() {
    let table = || {
        let mut buf = Vec::new();
        reproduce_table1(&SystemConfig::default(), DEFAULT_SPACING_M, &[])
            .unwrap()
            .write_csv(&mut buf)
            .unwrap();
        buf
    };
    let sweep = || {
        let mut buf = Vec::new();
        write_csv(&run_sweep(&q_sweep_spec()).unwrap(), &mut buf).unwrap();
        buf
    };
    let lib_ok = table() == table() && sweep() == sweep();

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    let counts: Vec<String> = (0..50).map(|k| (24 * k + 1).to_string()).collect();
    std::fs::write(
        &cfg,
        format!("[sweep]\nelement_counts = [{}]\n", counts.join(", ")),
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let cli_table = (run_cli(&["table1"]), run_cli(&["table1"]));
    let cli_sweep = (
        run_cli(&["sweep", "--config", cfg]),
        run_cli(&["sweep", "--config", cfg]),
    );
    let cli_ok = cli_table.0 == cli_table.1 && cli_sweep.0 == cli_sweep.1;
    let rows = cli_sweep.0.iter().filter(|&&b| b == b'\n').count() - 1;
    report(
        9,
        "byte-identical CSV",
        lib_ok && cli_ok && rows == 50 && cli_table.0 == table() && cli_sweep.0 == sweep(),
        &format!("table1 and 50-point Q sweep, library and CLI ({rows} rows)"),
    );
}
