//! Pass/fail reports with numeric margins for named condition sets.

use std::fmt;

use serde::{Deserialize, Serialize};

/// One checked condition. `margin` is attained value minus required
/// bound, so `satisfied` holds exactly when `margin >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub id: String,
    pub satisfied: bool,
    pub margin: i64,
    /// Names the tightest row/column/symbol when one exists.
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub checks: Vec<ConditionCheck>,
}

impl ConditionReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, id: &str, margin: i64, detail: Option<String>) {
        self.checks.push(ConditionCheck {
            id: id.to_string(),
            satisfied: margin >= 0,
            margin,
            detail,
        });
    }

    pub fn all_satisfied(&self) -> bool {
        self.checks.iter().all(|c| c.satisfied)
    }

    pub fn get(&self, id: &str) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn margin(&self, id: &str) -> Option<i64> {
        self.get(id).map(|c| c.margin)
    }

    /// The failing checks, if any.
    pub fn failures(&self) -> impl Iterator<Item = &ConditionCheck> {
        self.checks.iter().filter(|c| !c.satisfied)
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.satisfied { "ok" } else { "FAIL" };
            write!(f, "{:<4} {:<4} margin={}", c.id, status, c.margin)?;
            if let Some(d) = &c.detail {
                write!(f, " ({})", d)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
