use std::fs;

use triwell::sweep::{run_sweep, SweepConfig, SweepError};

fn small(out: &std::path::Path) -> SweepConfig {
    let mut cfg = SweepConfig::default();
    cfg.set("lambda", "0.1:0.9:0.2").unwrap();
    cfg.set("a", "4,6").unwrap();
    cfg.set("quantity", "q,c,f,bounds,density").unwrap();
    cfg.set("dx", "0.5").unwrap();
    cfg.out = out.to_path_buf();
    cfg
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["csv", "json"] {
        let mut a = small(&dir.path().join(format!("{format}-a")));
        let mut b = small(&dir.path().join(format!("{format}-b")));
        a.set("format", format).unwrap();
        b.set("format", format).unwrap();
        let ra = run_sweep(&a).unwrap();
        let rb = run_sweep(&b).unwrap();
        assert_eq!(ra.tables.len(), 6);
        for ((_, pa, _), (_, pb, _)) in ra.tables.iter().zip(&rb.tables) {
            assert_eq!(fs::read(pa).unwrap(), fs::read(pb).unwrap(), "{}", pa.display());
        }
    }
}

#[test]
fn csv_layout_and_config_echo() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path());
    run_sweep(&cfg).unwrap();
    let text = fs::read_to_string(dir.path().join("density.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# triwell "));
    let header: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).take(1).collect();
    assert_eq!(header, ["quantity,lambda,a,x,value"]);
    assert!(text.contains("# lambda = 0.1:0.9:0.2"));
    assert!(text.contains("# dx = 5e-1"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 5 * 2 * 49);
    assert!(rows[0].starts_with("density,1e-1,4e0,-1.2e1,"));

    let bounds = fs::read_to_string(dir.path().join("bounds.csv")).unwrap();
    assert!(bounds.contains("\ne1_upper,1e-1,4e0,"));
    assert!(bounds.contains("\ne2_gap_upper,"));
    let qc = fs::read_to_string(dir.path().join("qc_parametric.csv")).unwrap();
    assert!(qc.contains("\nlambda,a,exp_q,ln_c\n"));
}

#[test]
fn json_mirrors_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small(dir.path());
    cfg.set("format", "json").unwrap();
    cfg.set("quantity", "alpha").unwrap();
    run_sweep(&cfg).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("alpha.json")).unwrap()).unwrap();
    assert_eq!(doc["metadata"]["table"], "alpha");
    assert_eq!(doc["metadata"]["config"]["a"], "4,6");
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 10);
    assert_eq!(records[1]["a"], 6.0);
    assert!(records[0].get("x").is_none());
}

#[test]
fn invalid_config_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never");
    let mut cfg = small(&out);
    cfg.set("lambda", "").unwrap();
    match run_sweep(&cfg) {
        Err(SweepError::Usage { field, .. }) => assert_eq!(field, "lambda"),
        other => panic!("{other:?}"),
    }
    assert!(!out.exists());
}

#[test]
fn unwritable_output_reports_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let cfg = small(&blocker.join("sub"));
    match run_sweep(&cfg) {
        Err(SweepError::Io { path, .. }) => assert!(path.starts_with(&blocker)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn density_quotient_spread_at_a_20() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = SweepConfig::default();
    cfg.set("a", "5,6,20").unwrap();
    cfg.set("quantity", "c").unwrap();
    cfg.out = dir.path().to_path_buf();
    let tables = triwell::sweep::evaluate(&cfg).unwrap();
    let triwell::sweep::TableRows::Scalar(rows) = &tables[0].rows else { panic!() };
    let c20: Vec<f64> = rows.iter().filter(|r| r.a == 20.0).map(|r| r.value).collect();
    let max = c20.iter().copied().fold(f64::MIN, f64::max);
    let min = c20.iter().copied().fold(f64::MAX, f64::min);
    assert!(max / min > 1e8, "{}", max / min);
}
