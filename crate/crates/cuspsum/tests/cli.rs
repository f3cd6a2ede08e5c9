use std::path::Path;
use std::process::{Command, Output};

use cuspsum::cache;
use serde_json::Value;

fn cuspsum(cache_dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspsum"))
        .args(args)
        .env("CUSPSUM_CACHE_DIR", cache_dir)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn gen_writes_a_decodable_cache_and_hits_it_again() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspsum(dir.path(), &["gen", "--weight", "12", "--n", "10000"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let path = dir.path().join("k12_n10000.csp");
    let bytes = std::fs::read(&path).unwrap();
    let t = cache::decode(&bytes).unwrap();
    assert_eq!(t.coeff(1), &1.into());
    assert_eq!(t.coeff(2), &(-24).into());
    assert_eq!(t.coeff(3), &252.into());

    let again = cuspsum(dir.path(), &["gen", "--weight", "12", "--n", "10000"]);
    assert_eq!(code(&again), 0);
    assert!(stderr(&again).contains("cache hit"), "{}", stderr(&again));
    assert_eq!(std::fs::read(&path).unwrap(), bytes);
}

#[test]
fn gen_rejects_unsupported_weight() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspsum(dir.path(), &["gen", "--weight", "13", "--n", "100"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("13"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&cuspsum(dir.path(), &["frobnicate"])), 2);
    assert_eq!(code(&cuspsum(dir.path(), &["verify", "everything"])), 2);
    let o = cuspsum(
        dir.path(),
        &["windows", "--mode", "fixed_delta", "--delta", "0.5", "--grid", "100"],
    );
    assert_eq!(code(&o), 2);
    let o = cuspsum(
        dir.path(),
        &["windows", "--mode", "fixed_delta", "--delta", "0.7", "--grid", "100"],
    );
    assert_eq!(code(&o), 2);
    // An explicit N that cannot hold the windows.
    let o = cuspsum(dir.path(), &["windows", "--grid", "1000", "--n", "1000"]);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&cuspsum(dir.path(), &["--help"])), 0);
}

#[test]
fn io_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.ini");
    let o = cuspsum(dir.path(), &["verify", "kernel", "--config", missing.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    // The output path is a directory.
    let o = cuspsum(
        dir.path(),
        &["windows", "--grid", "", "--out", dir.path().to_str().unwrap()],
    );
    assert_eq!(code(&o), 3);
}

#[test]
fn empty_grid_gives_header_only_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspsum(dir.path(), &["windows", "--grid", ""]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("# cuspsum "));
    assert_eq!(lines[1], "X,H,y,count,raw_mean_sq,normalized,smoothed,pass_flag");
}

#[test]
fn fixed_delta_rows_are_well_formed_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.csv");
    let args = [
        "windows",
        "--mode",
        "fixed_delta",
        "--delta",
        "0.6666666666666666",
        "--grid",
        "logspace:3,4,5",
        "--n",
        "12000",
        "--threads",
        "2",
        "--out",
        out.to_str().unwrap(),
    ];
    let o = cuspsum(dir.path(), &args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let first = std::fs::read(&out).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    assert!(text.lines().next().unwrap().contains("weight=12 N=12000 config="));

    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let rows: Vec<cuspsum::windows::WindowRow> = rdr.deserialize().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.windows(2).all(|w| w[0].x < w[1].x));
    for r in &rows {
        assert!(r.normalized.is_finite() && r.normalized > 0.0);
        assert!((r.h - r.x.powf(2.0 / 3.0)).abs() < 1e-9 * r.h);
        assert!(r.pass_flag);
    }

    // Same config and cache: byte-identical output, whatever the thread count.
    let mut again = args;
    again[10] = "1";
    assert_eq!(code(&cuspsum(dir.path(), &again)), 0);
    assert_eq!(std::fs::read(&out).unwrap(), first);
}

#[test]
fn theorem_mode_window_at_one_million() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspsum(dir.path(), &["windows", "--grid", "1e6"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let rows: Vec<cuspsum::windows::WindowRow> = rdr.deserialize().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 1);
    assert!((rows[0].h - 15_490.347_356_476_176).abs() < 1e-6);
    assert!(text.lines().next().unwrap().contains("N=1015491"));
}

#[test]
fn config_file_is_read_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let ini = dir.path().join("run.ini");
    std::fs::write(&ini, "mode = fixed_y\ny = 4\ngrid = 200,100\nn = 400\n").unwrap();
    let o = cuspsum(dir.path(), &["windows", "--config", ini.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("100.0,25.0,4.0,"));

    let o = cuspsum(dir.path(), &["windows", "--config", ini.to_str().unwrap(), "--y", "5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().nth(2).unwrap().starts_with("100.0,20.0,5.0,"));

    std::fs::write(&ini, "grdi = 100\n").unwrap();
    let o = cuspsum(dir.path(), &["windows", "--config", ini.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

fn reports(o: &Output) -> Vec<Value> {
    serde_json::from_str::<Value>(&stdout(o))
        .unwrap()
        .as_array()
        .unwrap()
        .clone()
}

fn has_schema(r: &Value) {
    for key in ["check", "params", "lhs", "rhs", "rel_gap", "certified_error", "pass"] {
        assert!(r.get(key).is_some(), "missing {key} in {r}");
    }
}

#[test]
fn verify_kernel_passes_on_all_nine_points() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspsum(dir.path(), &["verify", "kernel"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rs = reports(&o);
    assert_eq!(rs.len(), 9);
    for r in &rs {
        has_schema(r);
        assert_eq!(r["pass"], true);
        assert!(r["rel_gap"].as_f64().unwrap() <= 1e-10);
    }
}

#[test]
fn verify_transform_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspsum(dir.path(), &["verify", "transform"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(reports(&o).len(), 12);
}

#[test]
fn verify_hecke_on_delta() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspsum(dir.path(), &["verify", "hecke", "--n", "10000"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rs = reports(&o);
    has_schema(&rs[0]);
    assert_eq!(rs[0]["lhs"], 0);
    assert_eq!(rs[0]["params"]["bound"], 10000);
}

#[test]
fn verify_decomposition_small_table_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let o = cuspsum(
        dir.path(),
        &["verify", "decomposition", "--n", "1000", "--out", out.to_str().unwrap()],
    );
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let rs: Vec<Value> = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(rs.len(), 2);
    for r in &rs {
        has_schema(r);
        assert_eq!(r["pass"], false);
        assert!(r["certified_error"].as_f64().unwrap() > 1e-6);
        assert_eq!(r["lhs"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn verify_decomposition_passes_at_desk_scale() {
    let dir = tempfile::tempdir().unwrap();
    let o = cuspsum(dir.path(), &["verify", "decomposition", "--n", "50000"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for r in reports(&o) {
        assert!(r["rel_gap"].as_f64().unwrap() <= r["certified_error"].as_f64().unwrap());
    }
}
