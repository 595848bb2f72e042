//! Command results and their three renderings.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Exact,
    Ambiguous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub space: Option<String>,
    pub bundle: Option<String>,
    pub results: Value,
    pub status: Status,
    pub citations: Vec<String>,
    /// Lines printed above the grid in table format.
    pub summary: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Whether table format shows the grid (CSV always does).
    pub grid: bool,
}

#[derive(Serialize)]
struct JsonView<'a> {
    space: &'a Option<String>,
    bundle: &'a Option<String>,
    results: &'a Value,
    status: Status,
    citations: &'a [String],
}

impl Report {
    pub fn new(command: &str, status: Status) -> Self {
        Report {
            command: command.into(),
            space: None,
            bundle: None,
            results: Value::Null,
            status,
            citations: Vec::new(),
            summary: Vec::new(),
            header: Vec::new(),
            rows: Vec::new(),
            grid: true,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let v = JsonView {
                    space: &self.space,
                    bundle: &self.bundle,
                    results: &self.results,
                    status: self.status,
                    citations: &self.citations,
                };
                let mut s = serde_json::to_string_pretty(&v).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                if !self.header.is_empty() {
                    w.write_record(&self.header).expect("in-memory write");
                }
                for r in &self.rows {
                    w.write_record(r).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
            }
            Format::Table => {
                let mut out = String::new();
                for l in &self.summary {
                    out.push_str(l);
                    out.push('\n');
                }
                if self.grid && !self.header.is_empty() && !self.rows.is_empty() {
                    out.push_str(&grid(&self.header, &self.rows));
                }
                out
            }
        }
    }
}

fn grid(header: &[String], rows: &[Vec<String>]) -> String {
    let n = header.len();
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate().take(n) {
            width[i] = width[i].max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(c);
            if i + 1 < cells.len() {
                s.push_str(&" ".repeat(width[i] - c.chars().count()));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(header);
    let rule: Vec<String> = width.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&line(&rule));
    for r in rows {
        out.push_str(&line(r));
    }
    out
}
