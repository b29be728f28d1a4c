//! Parameter sweeps over `(λ, a)` with CSV or JSON output.
//!
//! Points are evaluated in parallel and gathered back in λ-major, then `a`,
//! then `x` order, so the emitted files depend only on the configuration and
//! the tool version.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::report::{self, Discrepancy};
use crate::triple::{self, TripleParams, LAMBDA_GUARD};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid `{field}`: {message}")]
    Usage { field: String, message: String },
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("evaluation failed at lambda={lambda}, a={a}: {message}")]
    Compute { lambda: f64, a: f64, message: String },
}

impl SweepError {
    fn usage(field: &str, message: impl Into<String>) -> Self {
        SweepError::Usage {
            field: field.to_string(),
            message: message.into(),
        }
    }

    fn io(path: &Path, source: io::Error) -> Self {
        SweepError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Potential,
    Density,
    Alpha,
    Bounds,
    Q,
    C,
    F,
    OracleSpectrum,
}

impl Quantity {
    pub const ALL: [Quantity; 8] = [
        Quantity::Potential,
        Quantity::Density,
        Quantity::Alpha,
        Quantity::Bounds,
        Quantity::Q,
        Quantity::C,
        Quantity::F,
        Quantity::OracleSpectrum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Potential => "potential",
            Quantity::Density => "density",
            Quantity::Alpha => "alpha",
            Quantity::Bounds => "bounds",
            Quantity::Q => "q",
            Quantity::C => "c",
            Quantity::F => "f",
            Quantity::OracleSpectrum => "oracle_spectrum",
        }
    }

    /// Sampled along `x` rather than once per `(λ, a)`.
    pub fn has_x(self) -> bool {
        matches!(self, Quantity::Potential | Quantity::Density)
    }

    fn needs_guard_band(self) -> bool {
        matches!(self, Quantity::Bounds | Quantity::F)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = SweepError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == t || (t == "spectrum" && *q == Quantity::OracleSpectrum))
            .ok_or_else(|| SweepError::usage("quantity", format!("unknown quantity `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = SweepError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(SweepError::usage("format", format!("expected csv or json, got `{s}`"))),
        }
    }
}

/// Parses `p/q` fractions as well as ordinary floats.
pub fn parse_number(field: &str, s: &str) -> Result<f64, SweepError> {
    let s = s.trim();
    let bad = || SweepError::usage(field, format!("`{s}` is not a number"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            Ok(n / d)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

/// `start:stop:step` (inclusive, generated by index) or a comma list.
pub fn parse_grid(field: &str, s: &str) -> Result<Vec<f64>, SweepError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| parse_number(field, t))
            .collect(),
        3 => {
            let start = parse_number(field, parts[0])?;
            let stop = parse_number(field, parts[1])?;
            let step = parse_number(field, parts[2])?;
            if !(step > 0.0 && step.is_finite()) {
                return Err(SweepError::usage(field, format!("step must be positive, got {step}")));
            }
            if stop < start {
                return Err(SweepError::usage(field, format!("stop {stop} is below start {start}")));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            if n > 10_000_000 {
                return Err(SweepError::usage(field, "range has too many points"));
            }
            Ok((0..=n).map(|i| start + i as f64 * step).collect())
        }
        _ => Err(SweepError::usage(field, format!("expected start:stop:step or a list, got `{s}`"))),
    }
}

/// Everything that determines the contents of a sweep's output files.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub lambda_grid: Vec<f64>,
    pub a_grid: Vec<f64>,
    pub quantities: BTreeSet<Quantity>,
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
    pub oracle_step: f64,
    pub format: OutputFormat,
    pub out: PathBuf,
    lambda_text: String,
    a_text: String,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let mut c = Self {
            lambda_grid: Vec::new(),
            a_grid: Vec::new(),
            quantities: [Quantity::Q, Quantity::C].into_iter().collect(),
            x_min: -12.0,
            x_max: 12.0,
            dx: 0.01,
            oracle_step: crate::oracle::DEFAULT_STEP,
            format: OutputFormat::Csv,
            out: PathBuf::from("sweep_out"),
            lambda_text: String::new(),
            a_text: String::new(),
        };
        c.set("lambda", "0.002:0.998:0.004").expect("valid default");
        c.set("a", "5,6,7,10,20").expect("valid default");
        c
    }
}

impl SweepConfig {
    /// Sets one option by name; the same keys serve flags and config files.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), SweepError> {
        let key = key.trim().to_ascii_lowercase().replace('-', "_");
        match key.as_str() {
            "lambda" => {
                self.lambda_grid = parse_grid("lambda", value)?;
                self.lambda_text = value.trim().to_string();
            }
            "a" => {
                self.a_grid = parse_grid("a", value)?;
                self.a_text = value.trim().to_string();
            }
            "quantity" | "quantities" => {
                self.quantities = value
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<_, _>>()?;
            }
            "xmin" | "x_min" => self.x_min = parse_number("xmin", value)?,
            "xmax" | "x_max" => self.x_max = parse_number("xmax", value)?,
            "dx" => self.dx = parse_number("dx", value)?,
            "oracle_step" => self.oracle_step = parse_number("oracle_step", value)?,
            "format" => self.format = value.parse()?,
            "out" => self.out = PathBuf::from(value.trim()),
            _ => return Err(SweepError::usage(&key, "unknown option")),
        }
        Ok(())
    }

    /// Applies a flat `key = value` file; `#` starts a comment.
    pub fn apply_file_contents(&mut self, text: &str) -> Result<(), SweepError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                SweepError::usage("config", format!("line {}: expected key = value", lineno + 1))
            })?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), SweepError> {
        let text = fs::read_to_string(path).map_err(|e| SweepError::io(path, e))?;
        self.apply_file_contents(&text)
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.lambda_grid.is_empty() {
            return Err(SweepError::usage("lambda", "grid is empty"));
        }
        if self.a_grid.is_empty() {
            return Err(SweepError::usage("a", "grid is empty"));
        }
        if self.quantities.is_empty() {
            return Err(SweepError::usage("quantity", "no quantities requested"));
        }
        let guard = self.quantities.iter().any(|q| q.needs_guard_band());
        for &l in &self.lambda_grid {
            if !(l > 0.0 && l < 1.0) {
                return Err(SweepError::usage("lambda", format!("{l} is outside (0, 1)")));
            }
            if guard && !(LAMBDA_GUARD..=1.0 - LAMBDA_GUARD).contains(&l) {
                return Err(SweepError::usage(
                    "lambda",
                    format!("{l} is outside [{LAMBDA_GUARD:e}, 1 - {LAMBDA_GUARD:e}] required for bounds"),
                ));
            }
        }
        for &a in &self.a_grid {
            if !(a > 0.0 && a.is_finite()) {
                return Err(SweepError::usage("a", format!("{a} must be positive")));
            }
        }
        if self.quantities.iter().any(|q| q.has_x()) {
            if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_min < self.x_max) {
                return Err(SweepError::usage("xmin", format!("need xmin < xmax, got {} and {}", self.x_min, self.x_max)));
            }
            if !(self.dx > 0.0 && self.dx.is_finite()) {
                return Err(SweepError::usage("dx", format!("must be positive, got {}", self.dx)));
            }
        }
        if !(self.oracle_step > 0.0 && self.oracle_step < 1.0) {
            return Err(SweepError::usage("oracle_step", format!("must be in (0, 1), got {}", self.oracle_step)));
        }
        Ok(())
    }

    pub fn x_grid(&self) -> Vec<f64> {
        let n = ((self.x_max - self.x_min) / self.dx + 1e-9).floor() as usize;
        (0..=n).map(|i| self.x_min + i as f64 * self.dx).collect()
    }

    /// `(key, value)` pairs echoed into every output file.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut v = vec![
            ("lambda".to_string(), self.lambda_text.clone()),
            ("lambda_points".to_string(), self.lambda_grid.len().to_string()),
            ("a".to_string(), self.a_text.clone()),
            ("a_points".to_string(), self.a_grid.len().to_string()),
            (
                "quantity".to_string(),
                self.quantities.iter().map(|q| q.name()).collect::<Vec<_>>().join(","),
            ),
        ];
        if self.quantities.iter().any(|q| q.has_x()) {
            v.push(("xmin".to_string(), format!("{:e}", self.x_min)));
            v.push(("xmax".to_string(), format!("{:e}", self.x_max)));
            v.push(("dx".to_string(), format!("{:e}", self.dx)));
        }
        if self.quantities.contains(&Quantity::OracleSpectrum) {
            v.push(("oracle_step".to_string(), format!("{:e}", self.oracle_step)));
        }
        v.push(("format".to_string(), self.format.extension().to_string()));
        v
    }
}

/// One output row: `quantity, lambda, a[, x], value`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub quantity: String,
    pub lambda: f64,
    pub a: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    pub value: f64,
}

/// Paired columns `e^Q` and `ln C` for parametric plots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParametricRecord {
    pub lambda: f64,
    pub a: f64,
    pub exp_q: f64,
    pub ln_c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TableRows {
    Scalar(Vec<Record>),
    Parametric(Vec<ParametricRecord>),
}

impl TableRows {
    pub fn len(&self) -> usize {
        match self {
            TableRows::Scalar(r) => r.len(),
            TableRows::Parametric(r) => r.len(),
        }
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub with_x: bool,
    pub rows: TableRows,
}

impl Table {
    pub fn columns(&self) -> Vec<&'static str> {
        match (&self.rows, self.with_x) {
            (TableRows::Parametric(_), _) => vec!["lambda", "a", "exp_q", "ln_c"],
            (TableRows::Scalar(_), true) => vec!["quantity", "lambda", "a", "x", "value"],
            (TableRows::Scalar(_), false) => vec!["quantity", "lambda", "a", "value"],
        }
    }
}

fn point_records(cfg: &SweepConfig, q: Quantity, p: &TripleParams, xs: &[f64]) -> Result<Vec<Record>, SweepError> {
    let (lambda, a) = (p.lambda(), p.a());
    let rec = |name: &str, x: Option<f64>, value: f64| Record {
        quantity: name.to_string(),
        lambda,
        a,
        x,
        value,
    };
    let fail = |e: triple::TripleError| SweepError::Compute {
        lambda,
        a,
        message: e.to_string(),
    };
    Ok(match q {
        Quantity::Potential => xs.iter().map(|&x| rec("potential", Some(x), triple::v3(p, x))).collect(),
        Quantity::Density => xs.iter().map(|&x| rec("density", Some(x), triple::rho3(p, x))).collect(),
        Quantity::Alpha => vec![rec("alpha", None, triple::alpha3(p))],
        Quantity::Q => vec![rec("q", None, triple::q_ratio(p))],
        Quantity::C => vec![rec("c", None, triple::c_ratio(p))],
        Quantity::F => vec![rec("f", None, triple::gap_bound_f(p).map_err(fail)?)],
        Quantity::Bounds => {
            let b = triple::bounds(p).map_err(fail)?;
            vec![
                rec("e1_upper", None, b.e1_upper),
                rec("e2_gap_upper", None, b.e2_gap_upper),
                rec("overlap_pm", None, b.overlap_pm),
                rec("overlap_0p", None, b.overlap_0p),
                rec("alpha", None, b.alpha),
            ]
        }
        Quantity::OracleSpectrum => {
            let lv = triple::oracle_levels(p, cfg.oracle_step).map_err(fail)?;
            vec![rec("e0", None, lv.e0), rec("e1", None, lv.e1), rec("e2", None, lv.e2)]
        }
    })
}

/// Computes every requested table without touching the filesystem.
pub fn evaluate(cfg: &SweepConfig) -> Result<Vec<Table>, SweepError> {
    cfg.validate()?;
    let points: Vec<TripleParams> = cfg
        .lambda_grid
        .iter()
        .flat_map(|&l| cfg.a_grid.iter().map(move |&a| (l, a)))
        .map(|(l, a)| TripleParams::new(l, a).map_err(|e| SweepError::usage("lambda", e.to_string())))
        .collect::<Result<_, _>>()?;
    let xs = cfg.x_grid();
    let mut tables = Vec::new();
    for &q in &cfg.quantities {
        let chunks: Vec<Vec<Record>> = points
            .par_iter()
            .map(|p| point_records(cfg, q, p, &xs))
            .collect::<Result<_, _>>()?;
        tables.push(Table {
            name: q.name().to_string(),
            with_x: q.has_x(),
            rows: TableRows::Scalar(chunks.into_iter().flatten().collect()),
        });
    }
    if cfg.quantities.contains(&Quantity::Q) && cfg.quantities.contains(&Quantity::C) {
        let rows = points
            .par_iter()
            .map(|p| ParametricRecord {
                lambda: p.lambda(),
                a: p.a(),
                exp_q: triple::q_ratio(p).exp(),
                ln_c: triple::c_ratio(p).ln(),
            })
            .collect();
        tables.push(Table {
            name: "qc_parametric".to_string(),
            with_x: false,
            rows: TableRows::Parametric(rows),
        });
    }
    Ok(tables)
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

fn write_csv<W: Write>(w: W, cfg: &SweepConfig, table: &Table) -> Result<(), csv::Error> {
    let mut w = w;
    writeln!(w, "# triwell {VERSION} sweep table {}", table.name)?;
    for (k, v) in cfg.echo() {
        writeln!(w, "# {k} = {v}")?;
    }
    let mut c = csv::Writer::from_writer(w);
    c.write_record(table.columns())?;
    match &table.rows {
        TableRows::Scalar(rows) => {
            for r in rows {
                let mut fields = vec![r.quantity.clone(), num(r.lambda), num(r.a)];
                if let Some(x) = r.x {
                    fields.push(num(x));
                }
                fields.push(num(r.value));
                c.write_record(&fields)?;
            }
        }
        TableRows::Parametric(rows) => {
            for r in rows {
                c.write_record([num(r.lambda), num(r.a), num(r.exp_q), num(r.ln_c)])?;
            }
        }
    }
    c.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonMeta<'a> {
    tool: &'static str,
    version: &'static str,
    table: &'a str,
    columns: Vec<&'static str>,
    config: std::collections::BTreeMap<String, String>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum JsonRows<'a> {
    Scalar(&'a [Record]),
    Parametric(&'a [ParametricRecord]),
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    metadata: JsonMeta<'a>,
    records: JsonRows<'a>,
}

fn write_json<W: Write>(w: W, cfg: &SweepConfig, table: &Table) -> Result<(), serde_json::Error> {
    let doc = JsonDoc {
        metadata: JsonMeta {
            tool: "triwell",
            version: VERSION,
            table: &table.name,
            columns: table.columns(),
            config: cfg.echo().into_iter().collect(),
        },
        records: match &table.rows {
            TableRows::Scalar(r) => JsonRows::Scalar(r),
            TableRows::Parametric(r) => JsonRows::Parametric(r),
        },
    };
    serde_json::to_writer_pretty(w, &doc)
}

/// Writes each table to `<out>/<name>.<ext>` and returns the paths.
pub fn write_tables(cfg: &SweepConfig, tables: &[Table]) -> Result<Vec<PathBuf>, SweepError> {
    fs::create_dir_all(&cfg.out).map_err(|e| SweepError::io(&cfg.out, e))?;
    let mut paths = Vec::with_capacity(tables.len());
    for t in tables {
        let path = cfg.out.join(format!("{}.{}", t.name, cfg.format.extension()));
        let file = fs::File::create(&path).map_err(|e| SweepError::io(&path, e))?;
        let mut w = BufWriter::new(file);
        let as_io = |e: String| SweepError::io(&path, io::Error::other(e));
        match cfg.format {
            OutputFormat::Csv => write_csv(&mut w, cfg, t).map_err(|e| as_io(e.to_string()))?,
            OutputFormat::Json => {
                write_json(&mut w, cfg, t).map_err(|e| as_io(e.to_string()))?;
                w.write_all(b"\n").map_err(|e| SweepError::io(&path, e))?;
            }
        }
        w.flush().map_err(|e| SweepError::io(&path, e))?;
        paths.push(path);
    }
    Ok(paths)
}

/// Discrepancies visible in the swept data itself.
pub fn sweep_discrepancies(tables: &[Table]) -> Vec<Discrepancy> {
    let mut out = Vec::new();
    let Some(f) = tables.iter().find(|t| t.name == "f") else {
        return out;
    };
    let TableRows::Scalar(rows) = &f.rows else {
        return out;
    };
    let mut by_a: std::collections::BTreeMap<u64, Vec<(f64, f64)>> = Default::default();
    for r in rows {
        by_a.entry(r.a.to_bits()).or_default().push((r.lambda, r.value));
    }
    let mut above = Vec::new();
    let mut non_monotone = Vec::new();
    for (bits, mut pts) in by_a {
        let a = f64::from_bits(bits);
        pts.sort_by(|x, y| x.0.total_cmp(&y.0));
        let max = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        if a >= 4.0 && max >= 1e-6 {
            above.push(format!("a={a}: max f = {max:.4e}"));
        }
        if pts.windows(2).any(|w| w[1].1 <= w[0].1) {
            non_monotone.push(format!("a={a}"));
        }
    }
    if !above.is_empty() {
        let mut d = report::gap_threshold();
        d.computed = format!("{}; on this grid {}", d.computed, above.join(", "));
        out.push(d);
    }
    if !non_monotone.is_empty() {
        let mut d = report::gap_monotonicity();
        d.computed = format!("{}; decreasing steps on this grid at {}", d.computed, non_monotone.join(", "));
        out.push(d);
    }
    out
}

/// Summary of one sweep run. Timing lives here, never in the files.
#[derive(Debug)]
pub struct RunReport {
    pub version: &'static str,
    pub config: Vec<(String, String)>,
    pub tables: Vec<(String, PathBuf, usize)>,
    pub discrepancies: Vec<Discrepancy>,
    pub elapsed: Duration,
}

/// Validates, evaluates, then writes. Nothing is written if either of the
/// first two steps fails.
pub fn run_sweep(cfg: &SweepConfig) -> Result<RunReport, SweepError> {
    let start = Instant::now();
    let tables = evaluate(cfg)?;
    let paths = write_tables(cfg, &tables)?;
    Ok(RunReport {
        version: VERSION,
        config: cfg.echo(),
        discrepancies: sweep_discrepancies(&tables),
        tables: tables
            .iter()
            .zip(paths)
            .map(|(t, p)| (t.name.clone(), p, t.rows.len()))
            .collect(),
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("lambda", "0.002:0.998:0.004").unwrap();
        assert_eq!(g.len(), 250);
        assert!((g[249] - 0.998).abs() < 1e-12);
        assert_eq!(parse_grid("a", "5, 6,20").unwrap(), vec![5.0, 6.0, 20.0]);
        assert_eq!(parse_grid("lambda", "2/3").unwrap(), vec![2.0 / 3.0]);
        assert!(parse_grid("a", "").unwrap().is_empty());
        assert!(matches!(
            parse_grid("a", "1:0:1"),
            Err(SweepError::Usage { field, .. }) if field == "a"
        ));
        assert!(parse_grid("a", "1:2").is_err());
        assert!(parse_grid("a", "x").is_err());
    }

    #[test]
    fn config_file_and_overrides() {
        let mut c = SweepConfig::default();
        c.apply_file_contents("# profile\nlambda = 2/3\na=5\nquantity = potential, density\nformat=json\n")
            .unwrap();
        c.set("dx", "0.5").unwrap();
        assert_eq!(c.lambda_grid, vec![2.0 / 3.0]);
        assert_eq!(c.format, OutputFormat::Json);
        assert_eq!(c.quantities.len(), 2);
        assert_eq!(c.dx, 0.5);
        assert!(c.apply_file_contents("nonsense").is_err());
        assert!(matches!(c.set("colour", "red"), Err(SweepError::Usage { .. })));
    }

    #[test]
    fn validation_names_the_field() {
        let mut c = SweepConfig::default();
        c.set("lambda", "").unwrap();
        match c.validate() {
            Err(SweepError::Usage { field, .. }) => assert_eq!(field, "lambda"),
            other => panic!("{other:?}"),
        }
        let mut c = SweepConfig::default();
        c.set("a", "-1").unwrap();
        assert!(matches!(c.validate(), Err(SweepError::Usage { field, .. }) if field == "a"));
        let mut c = SweepConfig::default();
        c.set("quantity", "f").unwrap();
        c.set("lambda", "1e-9").unwrap();
        assert!(c.validate().is_err());
        let mut c = SweepConfig::default();
        c.set("quantity", "potential").unwrap();
        c.set("dx", "0").unwrap();
        assert!(matches!(c.validate(), Err(SweepError::Usage { field, .. }) if field == "dx"));
    }

    #[test]
    fn row_order_is_lambda_major() {
        let mut c = SweepConfig::default();
        c.set("lambda", "0.2,0.4").unwrap();
        c.set("a", "3,5").unwrap();
        c.set("quantity", "potential,q,c").unwrap();
        c.set("xmin", "-1").unwrap();
        c.set("xmax", "1").unwrap();
        c.set("dx", "1").unwrap();
        let tables = evaluate(&c).unwrap();
        let names: Vec<&str> = tables.iter().map(|t| t.name.as_str()).collect();
        assert_eq!(names, ["potential", "q", "c", "qc_parametric"]);
        let TableRows::Scalar(rows) = &tables[0].rows else { panic!() };
        let keys: Vec<(f64, f64, f64)> = rows.iter().map(|r| (r.lambda, r.a, r.x.unwrap())).collect();
        assert_eq!(keys.len(), 12);
        assert_eq!(keys[0], (0.2, 3.0, -1.0));
        assert_eq!(keys[2], (0.2, 3.0, 1.0));
        assert_eq!(keys[3], (0.2, 5.0, -1.0));
        assert_eq!(keys[6], (0.4, 3.0, -1.0));
        let TableRows::Parametric(p) = &tables[3].rows else { panic!() };
        assert!((p[0].exp_q - triple::q_ratio(&TripleParams::new(0.2, 3.0).unwrap()).exp()).abs() < 1e-15);
    }

    #[test]
    fn discrepancies_from_f_table() {
        let mut c = SweepConfig::default();
        c.set("lambda", "0.1:0.99:0.01").unwrap();
        c.set("a", "4,12").unwrap();
        c.set("quantity", "f").unwrap();
        let d = sweep_discrepancies(&evaluate(&c).unwrap());
        assert_eq!(d.len(), 2);
        assert!(d[0].computed.contains("a=4"));
        assert!(!d[0].computed.contains("a=12"));
    }
}
