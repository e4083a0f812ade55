//! Artifacts, run manifests and the CSV/JSON writers.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use dynstore_core::rational::{self, Rational};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::CliResult;

pub const DECIMAL_DIGITS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub config: String,
    pub subcommand: String,
    pub flags: Vec<String>,
    pub seed: u64,
    pub version: String,
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(config: impl Into<String>, subcommand: impl Into<String>, flags: Vec<String>, seed: u64) -> Self {
        Self {
            config: config.into(),
            subcommand: subcommand.into(),
            flags,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    pub fn comment_line(&self) -> String {
        format!("# manifest: {}", serde_json::to_string(self).expect("manifest serializes"))
    }
}

/// Exact and 4-significant-digit renderings of a rational.
pub fn exact(r: &Rational) -> Value {
    json!({
        "exact": rational::to_fraction_string(r),
        "decimal": rational::to_decimal_string(r, DECIMAL_DIGITS),
    })
}

pub fn decimal(r: &Rational) -> String {
    rational::to_decimal_string(r, DECIMAL_DIGITS)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .headers
                        .iter()
                        .cloned()
                        .zip(row.iter().map(|c| Value::String(c.clone())))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum QValue {
    Exact(Rational),
    Float(f64),
    Text(String),
    Missing,
}

/// Named quantities as `quantity, exact, decimal, note` rows.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Quantities {
    items: Vec<(String, QValue, String)>,
}

impl Quantities {
    pub fn push(&mut self, name: impl Into<String>, value: Option<Rational>, note: impl Into<String>) {
        let v = value.map_or(QValue::Missing, QValue::Exact);
        self.items.push((name.into(), v, note.into()));
    }

    pub fn push_value(&mut self, name: impl Into<String>, value: QValue, note: impl Into<String>) {
        self.items.push((name.into(), value, note.into()));
    }

    pub fn get(&self, name: &str) -> Option<&Rational> {
        self.items.iter().find(|(n, ..)| n == name).and_then(|(_, v, _)| match v {
            QValue::Exact(r) => Some(r),
            _ => None,
        })
    }

    pub fn value(&self, name: &str) -> Option<&QValue> {
        self.items.iter().find(|(n, ..)| n == name).map(|(_, v, _)| v)
    }

    pub fn extend_prefixed(&mut self, prefix: &str, other: Quantities) {
        for (n, v, note) in other.items {
            self.items.push((format!("{prefix}.{n}"), v, note));
        }
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["quantity", "exact", "decimal", "note"]);
        for (n, v, note) in &self.items {
            let (e, d) = match v {
                QValue::Exact(v) => (rational::to_fraction_string(v), decimal(v)),
                QValue::Float(x) => (String::new(), format!("{x}")),
                QValue::Text(s) => (s.clone(), String::new()),
                QValue::Missing => (String::new(), String::new()),
            };
            t.push(vec![n.clone(), e, d, note.clone()]);
        }
        t
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        for (n, v, note) in &self.items {
            let mut entry = match v {
                QValue::Exact(v) => exact(v),
                QValue::Float(x) => json!({ "value": x }),
                QValue::Text(s) => json!({ "value": s }),
                QValue::Missing => Value::Null,
            };
            if !note.is_empty() {
                if let Value::Object(m) = &mut entry {
                    m.insert("note".into(), Value::String(note.clone()));
                }
            }
            obj.insert(n.clone(), entry);
        }
        Value::Object(obj)
    }
}

/// One output file: a table for CSV and a JSON value for JSON.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub table: Table,
    pub json: Value,
}

impl Artifact {
    pub fn from_table(name: &str, table: Table) -> Self {
        Self {
            name: name.to_string(),
            json: table.to_json(),
            table,
        }
    }

    pub fn from_quantities(name: &str, q: &Quantities) -> Self {
        Self {
            name: name.to_string(),
            table: q.table(),
            json: q.to_json(),
        }
    }

    pub fn render(&self, format: Format, manifest: &RunManifest) -> CliResult<String> {
        Ok(match format {
            Format::Csv => format!("{}\n{}", manifest.comment_line(), self.table.to_csv()?),
            Format::Json => {
                let doc = json!({ "manifest": manifest, "data": self.json });
                let mut s = serde_json::to_string_pretty(&doc)?;
                s.push('\n');
                s
            }
        })
    }

    pub fn file_name(&self, format: Format) -> String {
        match format {
            Format::Csv => format!("{}.csv", self.name),
            Format::Json => format!("{}.json", self.name),
        }
    }
}

/// Writes each artifact to `out/<name>.<ext>`, or to stdout when `out` is absent.
pub fn emit(
    artifacts: &[Artifact],
    format: Format,
    manifest: &RunManifest,
    out: Option<&Path>,
) -> CliResult<Vec<PathBuf>> {
    let mut written = Vec::new();
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for a in artifacts {
                let path = dir.join(a.file_name(format));
                std::fs::write(&path, a.render(format, manifest)?)?;
                written.push(path);
            }
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            for a in artifacts {
                if artifacts.len() > 1 {
                    writeln!(lock, "# artifact: {}", a.name)?;
                }
                lock.write_all(a.render(format, manifest)?.as_bytes())?;
            }
        }
    }
    Ok(written)
}

/// The CSV body of a rendered file, without the manifest line.
pub fn csv_body(text: &str) -> &str {
    match text.strip_prefix("# manifest: ") {
        Some(rest) => rest.split_once('\n').map_or("", |(_, body)| body),
        None => text,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dynstore_core::rational::ratio;

    #[test]
    fn quantities_render_both_forms() {
        let mut q = Quantities::default();
        q.push("x", Some(ratio(2414, 11)), "");
        q.push("y", None, "n/a");
        let j = q.to_json();
        assert_eq!(j["x"]["exact"], "2414/11");
        assert_eq!(j["x"]["decimal"], "219.5");
        assert!(j["y"].is_null());
        let csv = q.table().to_csv().unwrap();
        assert!(csv.starts_with("quantity,exact,decimal,note\nx,2414/11,219.5,\n"));
    }

    #[test]
    fn csv_manifest_line_is_stripped() {
        let m = RunManifest::new("p", "bounds", vec![], 1);
        let a = Artifact::from_table("t", Table::new(&["a"]));
        let text = a.render(Format::Csv, &m).unwrap();
        assert!(text.starts_with("# manifest: {"));
        assert_eq!(csv_body(&text), "a\n");
    }
}
