use crate::Result;
use serde::Serialize;
use std::io::Write;

/// Slack allowed when comparing a measured value against a bound.
pub const PASS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    /// Site index, edge `(i,j)`, or another short label.
    pub site: String,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Measured quantities checked against a bound, one entry per site or case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub theorem: String,
    pub params: serde_json::Value,
    pub entries: Vec<BoundEntry>,
    pub notes: Vec<String>,
    pub passed: bool,
}

impl BoundReport {
    pub fn new(theorem: impl Into<String>, params: serde_json::Value) -> Self {
        BoundReport {
            theorem: theorem.into(),
            params,
            entries: Vec::new(),
            notes: Vec::new(),
            passed: true,
        }
    }

    pub fn check(&mut self, site: impl Into<String>, measured: f64, bound: f64) -> bool {
        let pass = measured <= bound + PASS_TOLERANCE;
        self.passed &= pass;
        self.entries.push(BoundEntry {
            site: site.into(),
            measured,
            bound,
            pass,
        });
        pass
    }

    /// Records an entry whose pass flag was decided by the caller.
    pub fn record(&mut self, site: impl Into<String>, measured: f64, bound: f64, pass: bool) {
        self.passed &= pass;
        self.entries.push(BoundEntry {
            site: site.into(),
            measured,
            bound,
            pass,
        });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn violations(&self) -> usize {
        self.entries.iter().filter(|e| !e.pass).count()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for e in &self.entries {
            out.serialize(e)?;
        }
        out.flush()?;
        Ok(())
    }
}
