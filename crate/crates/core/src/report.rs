//! Pass/fail records produced by the identity checks.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub location: String,
    pub passed: bool,
    /// Rendered residual or explanation when the check failed.
    pub residual: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub title: String,
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn new(title: impl Into<String>) -> Self {
        CheckReport {
            title: title.into(),
            entries: Vec::new(),
        }
    }

    pub fn pass(&mut self, name: impl Into<String>, location: impl Into<String>) {
        self.entries.push(CheckEntry {
            name: name.into(),
            location: location.into(),
            passed: true,
            residual: None,
        });
    }

    pub fn fail(
        &mut self,
        name: impl Into<String>,
        location: impl Into<String>,
        residual: impl Into<String>,
    ) {
        self.entries.push(CheckEntry {
            name: name.into(),
            location: location.into(),
            passed: false,
            residual: Some(residual.into()),
        });
    }

    /// Records a pass when `residual` is `None`, a failure otherwise.
    pub fn record(
        &mut self,
        name: impl Into<String>,
        location: impl Into<String>,
        residual: Option<String>,
    ) {
        match residual {
            None => self.pass(name, location),
            Some(r) => self.fail(name, location, r),
        }
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.entries.extend(other.entries);
    }

    /// Collapses entries sharing a name into one line each, e.g. `name : PASS (n checks)`.
    pub fn summary_lines(&self) -> Vec<String> {
        let mut names: Vec<&str> = Vec::new();
        for e in &self.entries {
            if !names.contains(&e.name.as_str()) {
                names.push(&e.name);
            }
        }
        names
            .into_iter()
            .map(|n| {
                let group: Vec<&CheckEntry> = self.entries.iter().filter(|e| e.name == n).collect();
                let bad = group.iter().filter(|e| !e.passed).count();
                if bad == 0 && group.len() == 1 {
                    format!("{} : PASS", n)
                } else if bad == 0 {
                    format!("{} : PASS ({} checks)", n, group.len())
                } else {
                    format!("{} : FAIL ({} of {} checks)", n, bad, group.len())
                }
            })
            .collect()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.title.is_empty() {
            writeln!(f, "== {} ==", self.title)?;
        }
        for line in self.summary_lines() {
            writeln!(f, "{}", line)?;
        }
        for e in self.failures() {
            writeln!(
                f,
                "  FAIL {} at {}: {}",
                e.name,
                e.location,
                e.residual.as_deref().unwrap_or("")
            )?;
        }
        Ok(())
    }
}
