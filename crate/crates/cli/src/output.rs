//! CSV tables with a one-line manifest header.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Header line plus one line per row, each newline-terminated.
    pub fn body(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

/// What produced a table: embedded as the first line of every output.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub params: serde_json::Value,
    pub version: String,
    pub sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl RunManifest {
    pub fn new(subcommand: &str, params: serde_json::Value, body: &str, reproducible: bool) -> Self {
        let digest = Sha256::digest(body.as_bytes());
        let timestamp =
            (!reproducible).then(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0));
        RunManifest {
            subcommand: subcommand.to_string(),
            params,
            version: env!("CARGO_PKG_VERSION").to_string(),
            sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
            timestamp,
        }
    }

    pub fn line(&self) -> String {
        format!("# {}\n", serde_json::to_string(self).expect("manifest is plain data"))
    }
}

/// Manifest line followed by the table body.
pub fn render(subcommand: &str, params: serde_json::Value, table: &Table, reproducible: bool) -> String {
    let body = table.body();
    let mut out = RunManifest::new(subcommand, params, &body, reproducible).line();
    out.push_str(&body);
    out
}

/// Splits a rendered output into its manifest and body, checking the digest.
pub fn parse_output(text: &str) -> Option<(serde_json::Value, &str)> {
    let (first, body) = text.split_once('\n')?;
    let manifest: serde_json::Value = serde_json::from_str(first.strip_prefix("# ")?).ok()?;
    let digest = Sha256::digest(body.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    (manifest.get("sha256")?.as_str()? == hex).then_some((manifest, body))
}
