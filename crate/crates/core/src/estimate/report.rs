//! Estimate and fit documents: CSV and JSON with an embedded configuration
//! echo for provenance.
//!
//! CSV layout: an optional leading `# {json config}` comment, a header row
//! `k,n_k,tail_k,A_hat,sd,p_hat,flags`, then one row per degree. Floats are
//! written with the shortest representation that round-trips exactly, so
//! re-reading a file reproduces the in-memory estimate bit for bit.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{AttachmentEstimate, EstimateRecord};
use crate::fit::FitResult;
use crate::{Error, Result};

pub const ESTIMATE_CSV_HEADER: &str = "k,n_k,tail_k,A_hat,sd,p_hat,flags";

/// An attachment estimate together with the configuration that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateDocument {
    /// Free-form configuration echo (method, seed, knobs).
    pub config: serde_json::Value,
    pub reference_degree: Option<u64>,
    pub records: Vec<EstimateRecord>,
}

impl EstimateDocument {
    pub fn new(config: serde_json::Value, estimate: &AttachmentEstimate) -> Self {
        Self {
            config,
            reference_degree: estimate.reference_degree,
            records: estimate.records.clone(),
        }
    }

    pub fn estimate(&self) -> AttachmentEstimate {
        AttachmentEstimate {
            records: self.records.clone(),
            reference_degree: self.reference_degree,
        }
    }

    pub fn write_csv<W: Write>(&self, writer: &mut W) -> Result<()> {
        writeln!(writer, "# {}", serde_json::to_string(&self.config)?)?;
        writeln!(writer, "{ESTIMATE_CSV_HEADER}")?;
        for r in &self.records {
            let sd = r.sd.map(|v| v.to_string()).unwrap_or_default();
            let p = r.p_hat.map(|v| v.to_string()).unwrap_or_default();
            let flags = if r.floored { "floored" } else { "" };
            writeln!(
                writer,
                "{},{},{},{},{},{},{}",
                r.degree, r.n_k, r.tail_k, r.a_hat, sd, p, flags
            )?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut config = serde_json::Value::Null;
        let mut records = Vec::new();
        let mut header_seen = false;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let text = line.trim();
            if text.is_empty() {
                continue;
            }
            if let Some(comment) = text.strip_prefix('#') {
                if config.is_null() {
                    if let Ok(v) = serde_json::from_str(comment.trim()) {
                        config = v;
                    }
                }
                continue;
            }
            if !header_seen {
                if text != ESTIMATE_CSV_HEADER {
                    return Err(Error::Parse {
                        line: idx + 1,
                        reason: format!("expected header {ESTIMATE_CSV_HEADER:?}"),
                    });
                }
                header_seen = true;
                continue;
            }
            records.push(parse_record(idx + 1, text)?);
        }
        Ok(Self {
            config,
            reference_degree: None,
            records,
        })
    }

    pub fn write_json<W: Write>(&self, writer: &mut W) -> Result<()> {
        serde_json::to_writer_pretty(&mut *writer, self)?;
        writeln!(writer)?;
        Ok(())
    }

    pub fn read_json<R: BufRead>(reader: R) -> Result<Self> {
        Ok(serde_json::from_reader(reader)?)
    }

    /// Read either format, deciding by the first non-whitespace byte.
    pub fn read_auto(content: &str) -> Result<Self> {
        if content.trim_start().starts_with('{') {
            Self::read_json(content.as_bytes())
        } else {
            Self::read_csv(content.as_bytes())
        }
    }
}

fn parse_record(line: usize, text: &str) -> Result<EstimateRecord> {
    let fields: Vec<&str> = text.split(',').collect();
    if fields.len() != 7 {
        return Err(Error::Parse {
            line,
            reason: format!("expected 7 comma-separated fields, got {}", fields.len()),
        });
    }
    let err = |what: &str| Error::Parse {
        line,
        reason: format!("invalid {what}"),
    };
    let opt = |s: &str, what: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| err(what))
        }
    };
    Ok(EstimateRecord {
        degree: fields[0].parse().map_err(|_| err("degree"))?,
        n_k: fields[1].parse().map_err(|_| err("n_k"))?,
        tail_k: fields[2].parse().map_err(|_| err("tail_k"))?,
        a_hat: fields[3].parse().map_err(|_| err("A_hat"))?,
        sd: opt(fields[4], "sd")?,
        p_hat: opt(fields[5], "p_hat")?,
        floored: fields[6] == "floored",
    })
}

/// A fit result with its configuration echo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitDocument {
    pub config: serde_json::Value,
    #[serde(flatten)]
    pub fit: FitResult,
}

impl FitDocument {
    pub fn new(config: serde_json::Value, fit: FitResult) -> Self {
        Self { config, fit }
    }

    pub fn write_json<W: Write>(&self, writer: &mut W) -> Result<()> {
        serde_json::to_writer_pretty(&mut *writer, self)?;
        writeln!(writer)?;
        Ok(())
    }

    pub fn read_json<R: BufRead>(reader: R) -> Result<Self> {
        Ok(serde_json::from_reader(reader)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_estimate() -> AttachmentEstimate {
        AttachmentEstimate {
            records: vec![
                EstimateRecord {
                    degree: 0,
                    n_k: 5,
                    tail_k: 5,
                    a_hat: 1.0,
                    sd: None,
                    p_hat: Some(1.0),
                    floored: false,
                },
                EstimateRecord {
                    degree: 1,
                    n_k: 3,
                    tail_k: 2,
                    a_hat: 2.0 / 3.0,
                    sd: Some(0.12345678901234567),
                    p_hat: Some(0.98),
                    floored: true,
                },
            ],
            reference_degree: None,
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let doc = EstimateDocument::new(serde_json::json!({"method": "test"}), &sample_estimate());
        let mut buf = Vec::new();
        doc.write_csv(&mut buf).unwrap();
        let back = EstimateDocument::read_csv(&buf[..]).unwrap();
        assert_eq!(back.records, doc.records);
        assert_eq!(back.config, doc.config);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let doc = EstimateDocument::new(serde_json::json!({"seed": 7}), &sample_estimate());
        let mut buf = Vec::new();
        doc.write_json(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let back = EstimateDocument::read_auto(&text).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn auto_detects_csv() {
        let doc = EstimateDocument::new(serde_json::Value::Null, &sample_estimate());
        let mut buf = Vec::new();
        doc.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let back = EstimateDocument::read_auto(&text).unwrap();
        assert_eq!(back.records, doc.records);
    }
}
