use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_magbridge");

fn write_config(dir: &TempDir, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str], config: &Path) -> Output {
    Command::new(BIN).args(args).arg("--config").arg(config).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Header and data rows, prologue stripped.
fn table(o: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let text = stdout(o);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

const GEOMETRY: &str = r#""geometry": { "radius_nm": 50, "gap_nm": 10, "b_x_tesla": 3.75e-9 }"#;

const REFERENCE: &str = r#"{
  "system": {
    "g_over_2pi_hz": 1.0e6, "lambda_over_2pi_hz": 1.0e6,
    "delta1_over_2pi_hz": 1.0e7,
    "gamma_s_over_2pi_hz": 1.0e5, "gamma_m_over_2pi_hz": 1.0e6, "kappa_over_2pi_hz": 5.0e5
  },
  "evolution": { "horizon_gt_over_pi": 20, "samples": 201 }
}"#;

#[test]
fn couplings_report() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", &format!("{{ {GEOMETRY} }}"));
    let o = run(&["couplings"], &cfg);
    assert!(o.status.success());
    let (header, rows) = table(&o);
    assert_eq!(header, ["quantity", "value", "unit"]);
    let g = rows.iter().find(|r| r[0] == "g_over_2pi").unwrap();
    assert_eq!(g[1], "4.78688626872e5");
}

#[test]
fn missing_key_is_named() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", r#"{ "geometry": { "gap_nm": 10 } }"#);
    let o = run(&["couplings"], &cfg);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("radius_nm"));
}

#[test]
fn unknown_key_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", r#"{ "geometry": { "radius_nm": 50, "gap_nm": 10, "radius": 3 } }"#);
    let o = run(&["couplings"], &cfg);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("unknown field `radius`"), "{err}");
    assert!(err.contains("line"), "{err}");
}

#[test]
fn prologue_and_line_endings() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", &format!("{{ {GEOMETRY} }}"));
    let text = stdout(&run(&["couplings"], &cfg));
    assert!(!text.contains('\r'));
    let prologue: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    assert_eq!(prologue.len(), 4);
    assert!(prologue[0].starts_with("# magbridge-cli "));
    assert!(prologue[2].starts_with("# config_sha256: "));
    assert!(prologue[3].starts_with("# units: "));
}

fn ratios_config() -> String {
    format!(
        r#"{{ {GEOMETRY},
  "system": {{ "delta1_over_2pi_hz": 1.0e7, "gamma_m_over_2pi_hz": 1.0e6, "kappa_over_2pi_hz": 6.0e3 }},
  "sweep": {{
    "delta1_over_2pi_hz": {{ "start": 5.0e6, "stop": 5.0e7, "count": 12 }},
    "radius_nm": {{ "start": 50, "stop": 300, "count": 9 }}
  }} }}"#
    )
}

#[test]
fn sweep_is_deterministic_across_runs_and_workers() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "s.json", &ratios_config());
    let a = run(&["sweep", "--target", "ratios", "--workers", "1"], &cfg);
    let b = run(&["sweep", "--target", "ratios", "--workers", "4"], &cfg);
    let c = run(&["sweep", "--target", "ratios"], &cfg);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let (_, rows) = table(&a);
    assert_eq!(rows.len(), 12 * 9);
}

#[test]
fn sweep_to_file_matches_stdout() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "s.json", &ratios_config());
    let out = dir.path().join("out.csv");
    let o = Command::new(BIN)
        .args(["sweep", "--target", "effective", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let direct = run(&["sweep", "--target", "effective"], &cfg);
    assert_eq!(std::fs::read(&out).unwrap(), direct.stdout);
}

#[test]
fn single_point_grid_matches_couplings() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "s.json",
        &format!(r#"{{ {GEOMETRY}, "sweep": {{ "radius_nm": {{ "start": 50, "stop": 50, "count": 1 }} }} }}"#),
    );
    let (header, rows) = table(&run(&["sweep", "--target", "g"], &cfg));
    assert_eq!(rows.len(), 1);
    let (_, report) = table(&run(&["couplings"], &cfg));
    let g = report.iter().find(|r| r[0] == "g_over_2pi").unwrap();
    assert_eq!(rows[0][header.iter().position(|h| h == "g_over_2pi_hz").unwrap()], g[1]);
    let (header, rows) = table(&run(&["sweep", "--target", "lambda"], &cfg));
    let lam = report.iter().find(|r| r[0] == "lambda_over_2pi").unwrap();
    assert_eq!(rows[0][header.iter().position(|h| h == "lambda_over_2pi_hz").unwrap()], lam[1]);
}

#[test]
fn zero_length_grid_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "s.json",
        &format!(r#"{{ {GEOMETRY}, "sweep": {{ "gap_nm": {{ "start": 5, "stop": 50, "count": 0 }} }} }}"#),
    );
    let o = run(&["sweep", "--target", "g"], &cfg);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("zero length"));
}

#[test]
fn effective_sweep_orderings() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "s.json", &ratios_config());
    let (header, rows) = table(&run(&["sweep", "--target", "effective"], &cfg));
    let d1 = column(&header, &rows, "delta1_over_2pi_hz");
    let r = column(&header, &rows, "radius_nm");
    let cols = ["g_eff_over_2pi_hz", "gamma_eff_over_2pi_hz", "kappa_eff_over_2pi_hz"].map(|n| column(&header, &rows, n));
    // rows are ordered detuning-major, radius-minor
    for i in 0..rows.len() {
        for j in 0..rows.len() {
            if r[i] == r[j] && d1[j] > d1[i] {
                for c in &cols {
                    assert!(c[j] < c[i], "all effective rates fall with Δ1");
                }
            }
            if d1[i] == d1[j] && r[j] > r[i] {
                assert!(cols[0][j] > cols[0][i], "g_eff grows with R");
                assert!(cols[1][j] < cols[1][i], "γ_eff falls with R beyond R = d");
                assert!(cols[2][j] > cols[2][i], "κ_eff grows with R");
            }
        }
    }
}

#[test]
fn ratios_map_has_high_cooperativity() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "s.json", &ratios_config().replace(r#""gap_nm": 10"#, r#""gap_nm": 30"#));
    let (header, rows) = table(&run(&["sweep", "--target", "ratios"], &cfg));
    let coop = column(&header, &rows, "cooperativity");
    assert!(coop.iter().any(|&c| c > 10.0));
}

#[test]
fn evolve_full_reference_point() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "e.json", REFERENCE);
    let o = run(&["evolve", "--model", "full"], &cfg);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = table(&o);
    assert_eq!(header, ["gt_over_pi", "occ_spin", "occ_magnon", "occ_photon", "trace_err"]);
    assert_eq!(rows.len(), 201);
    let t = column(&header, &rows, "gt_over_pi");
    assert!((t[200] - 20.0).abs() < 1e-9);
    assert!(column(&header, &rows, "occ_magnon").iter().all(|&m| m < 0.05));
    assert!(column(&header, &rows, "trace_err").iter().all(|&e| e < 1e-8));
}

#[test]
fn evolve_effective_rabi_oracle() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "e.json",
        r#"{ "system": { "g_over_2pi_hz": 1.0e6, "lambda_over_2pi_hz": 1.0e6, "delta1_over_2pi_hz": 1.0e7 },
             "evolution": { "horizon_gt_over_pi": 100, "samples": 501 } }"#,
    );
    let (header, rows) = table(&run(&["evolve", "--model", "effective"], &cfg));
    assert!(!header.contains(&"occ_magnon".to_string()));
    let t = column(&header, &rows, "gt_over_pi");
    let spin = column(&header, &rows, "occ_spin");
    // g_eff = g/10, t = (gt/π)·π/g
    let err = t
        .iter()
        .zip(&spin)
        .map(|(x, p)| (p - (0.1 * x * std::f64::consts::PI).cos().powi(2)).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-6, "{err}");
}

#[test]
fn evolve_compare_deviation() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "e.json", REFERENCE);
    let (header, rows) = table(&run(&["evolve", "--model", "compare"], &cfg));
    let dev = column(&header, &rows, "max_deviation");
    assert!(dev.iter().copied().fold(0.0, f64::max) <= 0.15);
}

#[test]
fn evolve_compare_outside_regime_fails() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "e.json", &REFERENCE.replace("1.0e7", "2.0e6"));
    let o = run(&["evolve", "--model", "compare"], &cfg);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("adiabatic elimination"));
}

#[test]
fn flagged_runs_exit_nonzero() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "e.json", &REFERENCE.replace(r#""samples": 201"#, r#""samples": 51, "fock_dim": 2"#));
    let o = run(&["evolve", "--model", "full"], &cfg);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("leakage"));
    assert!(!o.stdout.is_empty());
    let o = run(&["evolve", "--model", "full", "--allow-flagged"], &cfg);
    assert!(o.status.success());
}

#[test]
fn json_mirrors_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", &format!("{{ {GEOMETRY} }}"));
    let o = run(&["couplings", "--format", "json"], &cfg);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["columns"][0]["name"], "quantity");
    let rows = v["rows"].as_array().unwrap();
    let g = rows.iter().find(|r| r[0] == "g_over_2pi").unwrap();
    assert!((g[1].as_f64().unwrap() - 478688.6268721308).abs() < 1e-6);
    assert_eq!(v["meta"]["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn walker_default_check_passes() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "w.json", "{}");
    let o = run(&["walker"], &cfg);
    assert!(o.status.success());
    let (_, rows) = table(&o);
    let check = rows.iter().find(|r| r[0] == "kittel_check").unwrap();
    assert_eq!(check[7], "PASS");
    assert_eq!(rows.iter().filter(|r| r[0] == "root").count(), 1);
    assert!(rows.iter().filter(|r| r[0] == "scan").count() >= 200);
}

#[test]
fn walker_empty_mode_list() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "w.json", r#"{ "walker": { "modes": [] } }"#);
    let o = run(&["walker"], &cfg);
    assert!(o.status.success());
    let (header, rows) = table(&o);
    assert_eq!(header[0], "kind");
    assert!(rows.is_empty());
}

#[test]
fn walker_scan_excluding_root() {
    // the uniform mode sits at 3.52 GHz for H0 = 1e5 A/m
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "w.json",
        r#"{ "walker": { "modes": [[2, 1]], "scan": { "start_over_2pi_hz": 1.0e8, "stop_over_2pi_hz": 1.5e9, "count": 50 } } }"#,
    );
    let (_, rows) = table(&run(&["walker"], &cfg));
    assert_eq!(rows.iter().filter(|r| r[0] == "scan").count(), 50);
    assert_eq!(rows.iter().filter(|r| r[0] == "root").count(), 0);
}

#[test]
fn walker_rejects_bad_mode() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "w.json", r#"{ "walker": { "modes": [[1, 2]] } }"#);
    assert!(!run(&["walker"], &cfg).status.success());
}
