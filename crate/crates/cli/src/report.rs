//! Tabular reports with a fixed header: tool, version, command, seed and the
//! quadrature parameters. Output is JSON (sorted keys) or CSV with `#` header lines.

use std::fmt::Write as _;

use besov_core::linalg::CMat;
use besov_core::quad::QuadSpec;
use besov_core::{VarSet, C64};
use serde_json::{json, Map, Value};

use crate::error::CliError;

pub const TOOL: &str = "besov";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub quad: QuadSpec,
    /// `None` for plain computations, `Some` for checks.
    pub pass: Option<bool>,
    pub summary: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn new(command: &str, seed: u64, quad: &QuadSpec, columns: &[&str]) -> Self {
        Report {
            command: command.to_string(),
            seed,
            quad: quad.clone(),
            pass: None,
            summary: Map::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.summary.insert(key.to_string(), v.into());
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Combines into the running verdict; any failure sticks.
    pub fn check(&mut self, ok: bool) {
        self.pass = Some(self.pass.unwrap_or(true) && ok);
    }

    pub fn exit_code(&self) -> i32 {
        match self.pass {
            Some(false) => 1,
            _ => 0,
        }
    }

    fn header(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("tool".into(), TOOL.into());
        m.insert("version".into(), VERSION.into());
        m.insert("command".into(), self.command.clone().into());
        m.insert("seed".into(), self.seed.into());
        m.insert("quad".into(), Value::Object(quad_map(&self.quad)));
        m
    }

    pub fn to_value(&self) -> Value {
        let mut m = self.header();
        if let Some(p) = self.pass {
            m.insert("pass".into(), p.into());
        }
        m.insert("summary".into(), Value::Object(self.summary.clone()));
        let rows = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().cloned()).collect()))
            .collect();
        m.insert("rows".into(), Value::Array(rows));
        Value::Object(m)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("values are serializable");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        for (k, v) in self.header() {
            match v {
                Value::Object(q) => {
                    for (qk, qv) in q {
                        let _ = writeln!(out, "# {k}.{qk}={}", cell(&qv));
                    }
                }
                v => {
                    let _ = writeln!(out, "# {k}={}", cell(&v));
                }
            }
        }
        if let Some(p) = self.pass {
            let _ = writeln!(out, "# pass={p}");
        }
        for (k, v) in &self.summary {
            let _ = writeln!(out, "# {k}={}", cell(v));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Input(format!("csv: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for r in &self.rows {
            w.write_record(r.iter().map(cell)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Input(format!("csv: {e}")))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
        Ok(out)
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }
}

/// Scalars as plain text, anything else as compact JSON.
pub fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// `QuadSpec::to_text` as a map, numbers kept numeric.
pub fn quad_map(q: &QuadSpec) -> Map<String, Value> {
    q.to_text()
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| {
            let val = if let Ok(i) = v.parse::<i64>() {
                json!(i)
            } else if let Ok(x) = v.parse::<f64>() {
                json!(x)
            } else {
                Value::String(v.to_string())
            };
            (k.to_string(), val)
        })
        .collect()
}

/// Variable sets are printed with 1-based indices.
pub fn omega_value(o: VarSet) -> Value {
    Value::Array(o.iter().map(|j| json!(j + 1)).collect())
}

pub fn omega_text(o: VarSet) -> String {
    let idx: Vec<String> = o.iter().map(|j| (j + 1).to_string()).collect();
    format!("{{{}}}", idx.join(","))
}

pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn complex_vec(z: &[C64]) -> Value {
    Value::Array(z.iter().map(|&c| complex(c)).collect())
}

pub fn matrix(m: &CMat) -> Value {
    json!(crate::io::encode_matrix(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("norm", 7, &QuadSpec::default(), &["omega", "value", "err_est"]);
        r.push(vec![omega_value(VarSet::from_indices(&[0, 1])), json!(1.5), json!(1e-9)]);
        r.set("total", 1.5);
        r
    }

    #[test]
    fn json_header() {
        let v = sample().to_value();
        assert_eq!(v["tool"], "besov");
        assert_eq!(v["version"], VERSION);
        assert_eq!(v["quad"]["rel_tol"], json!(1e-8));
        assert_eq!(v["quad"]["domain"], "mapped");
        assert_eq!(v["rows"][0]["omega"], json!([1, 2]));
        assert!(v.get("pass").is_none());
    }

    #[test]
    fn csv_layout() {
        let s = sample().to_csv().unwrap();
        assert!(s.contains("# quad.max_evals=4000000\n"));
        assert!(s.contains("# total=1.5\n"));
        assert!(s.ends_with("omega,value,err_est\n\"[1,2]\",1.5,1e-9\n"), "{s}");
    }

    #[test]
    fn verdict_sticks() {
        let mut r = sample();
        assert_eq!(r.exit_code(), 0);
        r.check(false);
        r.check(true);
        assert_eq!(r.exit_code(), 1);
        assert_eq!(omega_text(VarSet::from_indices(&[0, 2])), "{1,3}");
    }
}
