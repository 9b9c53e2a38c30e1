use std::io::Write;

use sha2::{Digest, Sha256};

/// Header and rows ready for CSV. Empty cells stand for values that do not
/// apply to a row.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Cell parsed as a number; `None` when empty or not numeric.
    pub fn value(&self, row: usize, name: &str) -> Option<f64> {
        self.rows.get(row)?.get(self.column(name)?)?.parse().ok()
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub(crate) fn num(x: f64) -> String {
    format!("{x}")
}

pub(crate) fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Provenance lines written above the CSV header.
#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub command: String,
    pub config_sha256: String,
    pub seed: u64,
    pub mode: String,
}

impl Metadata {
    pub fn lines(&self) -> Vec<(String, String)> {
        vec![
            ("version".into(), env!("CARGO_PKG_VERSION").into()),
            ("command".into(), self.command.clone()),
            ("config_sha256".into(), self.config_sha256.clone()),
            ("seed".into(), self.seed.to_string()),
            ("mode".into(), self.mode.clone()),
        ]
    }
}

pub fn write_csv<W: Write>(mut w: W, meta: &Metadata, table: &Table) -> std::io::Result<()> {
    for (k, v) in meta.lines() {
        writeln!(w, "# {k}: {v}")?;
    }
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(&table.header)?;
    for r in &table.rows {
        csv.write_record(r)?;
    }
    csv.flush()
}

/// Independent seed for a labelled sub-stream of a run.
pub fn derive_seed(seed: u64, labels: &[u64]) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    for l in labels {
        h.update(l.to_le_bytes());
    }
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("digest is 32 bytes"))
}
