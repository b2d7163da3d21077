//! Entanglement report artifact: every measured quantity plus enough
//! context (input checksum, tool version, optional timestamp) to tie the
//! numbers back to their input.

use entangle_core::EntanglementReport;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub format_version: u32,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub input_checksum: String,
    pub dims: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub part_a: Option<Vec<usize>>,
    pub schmidt_rank: usize,
    pub lambdas: Vec<f64>,
    pub e_probability_sum: f64,
    pub e_closed_form: f64,
    pub entropy_of_entanglement: f64,
    pub two_entropy: f64,
    pub renyi2: f64,
}

impl ReportFile {
    pub fn new(
        report: &EntanglementReport,
        input_bytes: &[u8],
        dims: Vec<usize>,
        part_a: Option<Vec<usize>>,
        timestamp: Option<String>,
    ) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            input_checksum: checksum(input_bytes),
            dims,
            part_a,
            schmidt_rank: report.schmidt_rank,
            lambdas: report.lambdas.clone(),
            e_probability_sum: report.e_probability_sum,
            e_closed_form: report.e_closed_form,
            entropy_of_entanglement: report.entropy_of_entanglement,
            two_entropy: report.two_entropy,
            renyi2: report.renyi2,
        }
    }

    /// JSON with a trailing newline. Floats use serde's shortest
    /// round-trip encoding, which preserves every bit of the value.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "entanglement report");
        let _ = writeln!(out, "  tool version:      {}", self.tool_version);
        if let Some(ts) = &self.timestamp {
            let _ = writeln!(out, "  timestamp:         {ts}");
        }
        let _ = writeln!(out, "  input checksum:    {}", self.input_checksum);
        let dims: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(out, "  dims:              {}", dims.join(" x "));
        if let Some(part) = &self.part_a {
            let part: Vec<String> = part.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(out, "  partition (A):     {}", part.join(","));
        }
        let _ = writeln!(out, "  schmidt rank:      {}", self.schmidt_rank);
        let lambdas: Vec<String> = self.lambdas.iter().map(|l| sig15(*l)).collect();
        let _ = writeln!(out, "  lambda:            {}", lambdas.join(", "));
        let _ = writeln!(out, "  e probability sum: {}", sig15(self.e_probability_sum));
        let _ = writeln!(out, "  e closed form:     {}", sig15(self.e_closed_form));
        let _ = writeln!(out, "  entropy:           {}", sig15(self.entropy_of_entanglement));
        let _ = writeln!(out, "  two-entropy:       {}", sig15(self.two_entropy));
        let _ = writeln!(out, "  renyi-2:           {}", sig15(self.renyi2));
        out
    }
}

pub fn checksum(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("sha256:{:x}", hasher.finalize())
}

/// Scientific notation with 16 significant digits.
pub fn sig15(value: f64) -> String {
    format!("{value:.15e}")
}
