//! Regenerates the stored reference tables and compares them column by column.
//! The stored values come from `golden/generate.py`.

use std::path::Path;

use triwell::sweep::{evaluate, SweepConfig, TableRows};

struct Row {
    quantity: String,
    lambda: f64,
    a: f64,
    x: Option<f64>,
    value: f64,
}

fn load(name: &str) -> Vec<Row> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    let with_x = rdr.headers().unwrap().iter().any(|h| h == "x");
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            let f = |i: usize| r[i].parse::<f64>().unwrap();
            Row {
                quantity: r[0].to_string(),
                lambda: f(1),
                a: f(2),
                x: with_x.then(|| f(3)),
                value: f(if with_x { 4 } else { 3 }),
            }
        })
        .collect()
}

fn compare(name: &str, settings: &[(&str, &str)], rel_tol: f64) {
    let golden = load(name);
    let mut cfg = SweepConfig::default();
    for (k, v) in settings {
        cfg.set(k, v).unwrap();
    }
    let tables = evaluate(&cfg).unwrap();
    let rows: Vec<_> = tables
        .iter()
        .filter(|t| t.name != "qc_parametric")
        .flat_map(|t| match &t.rows {
            TableRows::Scalar(r) => r.clone(),
            TableRows::Parametric(_) => Vec::new(),
        })
        .collect();
    let ours: Vec<_> = rows.iter().collect();
    assert_eq!(ours.len(), golden.len(), "{name}: row count");
    let mut worst: f64 = 0.0;
    for (o, g) in ours.iter().zip(&golden) {
        assert_eq!(o.quantity, g.quantity, "{name}");
        assert!((o.lambda - g.lambda).abs() < 1e-12 && (o.a - g.a).abs() < 1e-12, "{name}: key mismatch");
        if let (Some(ox), Some(gx)) = (o.x, g.x) {
            assert!((ox - gx).abs() < 1e-12, "{name}: x mismatch");
        }
        let err = (o.value - g.value).abs() / g.value.abs().max(1.0);
        worst = worst.max(err);
        assert!(
            err <= rel_tol,
            "{name}: {} at lambda={}, a={}, x={:?}: {} vs {}",
            g.quantity,
            g.lambda,
            g.a,
            g.x,
            o.value,
            g.value
        );
    }
    println!("{name}: {} rows, worst scaled error {worst:.2e}", golden.len());
}

#[test]
fn potential_and_density_profile() {
    compare(
        "potential_density.csv",
        &[("lambda", "2/3"), ("a", "5"), ("quantity", "potential,density"), ("xmin", "-12"), ("xmax", "12"), ("dx", "0.1")],
        1e-8,
    );
}

#[test]
fn gap_bound_curves() {
    compare("gap_bound.csv", &[("lambda", "0.01:0.99:0.02"), ("a", "4,5,6,7,10"), ("quantity", "f")], 1e-8);
}

#[test]
fn depth_quotient_curves() {
    compare("depth_quotient.csv", &[("lambda", "0.002:0.998:0.012"), ("a", "5,6,7,10,20"), ("quantity", "q")], 1e-8);
}

#[test]
fn density_quotient_curves() {
    compare("density_quotient.csv", &[("lambda", "0.002:0.998:0.012"), ("a", "5,6,20"), ("quantity", "c")], 1e-8);
}

#[test]
fn oracle_levels() {
    compare("oracle_levels.csv", &[("lambda", "2/3"), ("a", "4,5,6"), ("quantity", "oracle_spectrum")], 1e-4);
}
