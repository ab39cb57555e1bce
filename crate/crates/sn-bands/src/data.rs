//! Censored S-N observations and the CSV interchange format.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Failure indicator of one specimen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Observed failure at the recorded cycle count (delta = 1).
    Failure,
    /// Right-censored runout: survived to the recorded cycle count (delta = 0).
    Runout,
}

/// One specimen: stress amplitude, cycles, and failure status.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SNObservation {
    pub stress: f64,
    pub cycles: f64,
    pub status: Status,
}

impl SNObservation {
    pub fn failure(stress: f64, cycles: f64) -> Self {
        SNObservation {
            stress,
            cycles,
            status: Status::Failure,
        }
    }

    pub fn runout(stress: f64, cycles: f64) -> Self {
        SNObservation {
            stress,
            cycles,
            status: Status::Runout,
        }
    }

    pub fn is_failure(&self) -> bool {
        self.status == Status::Failure
    }
}

/// A labeled collection of S-N observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SNDataset {
    pub observations: Vec<SNObservation>,
    pub label: String,
}

impl SNDataset {
    /// Build a dataset, checking positivity and finiteness of every row.
    /// Datasets without failures are representable (the likelihood is still
    /// defined); fitting refuses them.
    pub fn new(observations: Vec<SNObservation>, label: impl Into<String>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::EmptyDataset);
        }
        for (i, obs) in observations.iter().enumerate() {
            if !(obs.stress.is_finite() && obs.stress > 0.0) {
                return Err(Error::BadRow {
                    row: i + 1,
                    msg: format!("stress must be positive and finite, got {}", obs.stress),
                });
            }
            if !(obs.cycles.is_finite() && obs.cycles > 0.0) {
                return Err(Error::BadRow {
                    row: i + 1,
                    msg: format!("cycles must be positive and finite, got {}", obs.cycles),
                });
            }
        }
        Ok(SNDataset {
            observations,
            label: label.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn n_failures(&self) -> usize {
        self.observations.iter().filter(|o| o.is_failure()).count()
    }

    pub fn n_runouts(&self) -> usize {
        self.len() - self.n_failures()
    }

    /// Parse the `stress,cycles,status` CSV format. Lines starting with `#`
    /// and blank lines are ignored; `status` is 1 for a failure, 0 for a
    /// runout. Row numbers in errors are 1-based file line numbers.
    pub fn from_csv_str(text: &str, label: impl Into<String>) -> Result<Self> {
        let mut observations = Vec::new();
        let mut header_seen = false;
        for (idx, raw) in text.lines().enumerate() {
            let row = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !header_seen {
                let cols: Vec<&str> = line.split(',').map(str::trim).collect();
                if cols != ["stress", "cycles", "status"] {
                    return Err(Error::BadRow {
                        row,
                        msg: format!("expected header `stress,cycles,status`, got `{line}`"),
                    });
                }
                header_seen = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::BadRow {
                    row,
                    msg: format!("expected 3 comma-separated fields, got {}", fields.len()),
                });
            }
            let stress: f64 = fields[0].parse().map_err(|_| Error::BadRow {
                row,
                msg: format!("stress `{}` is not a number", fields[0]),
            })?;
            let cycles: f64 = fields[1].parse().map_err(|_| Error::BadRow {
                row,
                msg: format!("cycles `{}` is not a number", fields[1]),
            })?;
            let status = match fields[2] {
                "1" => Status::Failure,
                "0" => Status::Runout,
                other => {
                    return Err(Error::BadRow {
                        row,
                        msg: format!("status must be 1 (failure) or 0 (runout), got `{other}`"),
                    })
                }
            };
            if !(stress.is_finite() && stress > 0.0) {
                return Err(Error::BadRow {
                    row,
                    msg: format!("stress must be positive, got {stress}"),
                });
            }
            if !(cycles.is_finite() && cycles > 0.0) {
                return Err(Error::BadRow {
                    row,
                    msg: format!("cycles must be positive, got {cycles}"),
                });
            }
            observations.push(SNObservation {
                stress,
                cycles,
                status,
            });
        }
        if observations.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Ok(SNDataset {
            observations,
            label: label.into(),
        })
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".to_string());
        Self::from_csv_str(&text, label)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("stress,cycles,status\n");
        for obs in &self.observations {
            let d = if obs.is_failure() { 1 } else { 0 };
            out.push_str(&format!("{},{},{}\n", obs.stress, obs.cycles, d));
        }
        out
    }

    pub fn stress_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for o in &self.observations {
            lo = lo.min(o.stress);
            hi = hi.max(o.stress);
        }
        (lo, hi)
    }

    pub fn cycles_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for o in &self.observations {
            lo = lo.min(o.cycles);
            hi = hi.max(o.cycles);
        }
        (lo, hi)
    }
}
