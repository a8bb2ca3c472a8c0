//! Regression lock for fitted constants: a JSON object mapping constant ids
//! to decimal strings, compared on every run and rewritten on request.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::bounds::BoundReport;
use crate::error::{Error, Result};

/// Largest relative drift tolerated before a locked constant fails.
pub const LOCK_TOLERANCE: f64 = 1e-6;
/// Default lock file name, at the workspace root.
pub const LOCK_FILE: &str = "constants.lock";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConstantsLock {
    entries: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum LockStatus {
    Match,
    Drift { locked: f64, relative: f64 },
    Missing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LockCheck {
    pub id: String,
    pub current: f64,
    #[serde(flatten)]
    pub status: LockStatus,
}

impl LockCheck {
    pub fn is_drift(&self) -> bool {
        matches!(self.status, LockStatus::Drift { .. })
    }
}

/// Shortest decimal string that reads back to the same `f64`.
fn render(v: f64) -> String {
    format!("{v:?}")
}

impl ConstantsLock {
    /// Reads a lock file; a missing file is an empty lock.
    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Ok(Self::default());
        }
        let text = fs::read_to_string(path)?;
        let entries: BTreeMap<String, String> = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
        Ok(ConstantsLock { entries })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(&self.entries).expect("string map serializes");
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.entries.get(id).and_then(|s| s.parse().ok())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, id: &str, value: f64) {
        self.entries.insert(id.to_string(), render(value));
    }

    /// Compares every fitted constant of `reports` with its locked value.
    pub fn compare(&self, reports: &[BoundReport]) -> Vec<LockCheck> {
        constants(reports)
            .map(|(id, current)| {
                let status = match self.get(id) {
                    None => LockStatus::Missing,
                    Some(locked) => {
                        let relative = (current - locked).abs() / locked.abs().max(f64::MIN_POSITIVE);
                        if relative > LOCK_TOLERANCE {
                            LockStatus::Drift { locked, relative }
                        } else {
                            LockStatus::Match
                        }
                    }
                };
                LockCheck { id: id.to_string(), current, status }
            })
            .collect()
    }

    /// Records every fitted constant of `reports`, replacing old values.
    pub fn update(&mut self, reports: &[BoundReport]) {
        for (id, v) in constants(reports) {
            self.insert(id, v);
        }
    }
}

fn constants(reports: &[BoundReport]) -> impl Iterator<Item = (&str, f64)> {
    reports
        .iter()
        .flat_map(|r| r.constants.iter())
        .filter_map(|c| c.value.map(|v| (c.id.as_str(), v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{Extremum, Fit};

    fn report(value: f64) -> BoundReport {
        let mut r = BoundReport::new("t", false);
        let mut f = Fit::new("t.C", Extremum::Min);
        f.offer(value, 0, || serde_json::Value::Null);
        r.push_constant(f);
        r.push_constant(Fit::new("t.empty", Extremum::Max));
        r
    }

    #[test]
    fn compare_update_round_trip() {
        let dir = std::env::temp_dir().join(format!("symh-lock-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join(LOCK_FILE);
        let mut lock = ConstantsLock::load(&path).unwrap();
        assert!(lock.is_empty());
        let reports = [report(0.1 + 0.2)];
        assert_eq!(lock.compare(&reports)[0].status, LockStatus::Missing);
        lock.update(&reports);
        lock.save(&path).unwrap();
        let back = ConstantsLock::load(&path).unwrap();
        assert_eq!(back, lock);
        assert_eq!(back.len(), 1);
        assert_eq!(back.compare(&reports)[0].status, LockStatus::Match);
        assert!(back.compare(&[report(0.3 * (1.0 + 1e-7))])[0].status == LockStatus::Match);
        assert!(back.compare(&[report(0.3 * (1.0 + 1e-5))])[0].is_drift());
        fs::remove_dir_all(&dir).unwrap();
    }
}
