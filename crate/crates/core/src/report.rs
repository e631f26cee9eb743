//! Law-check records shared by every verification in the crate.

use crate::error::{Error, Result};
use crate::Elem;

/// Outcome of checking one law exhaustively. A failing law carries the least
/// falsifying tuple in index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawCheck {
    pub name: &'static str,
    pub witness: Option<Vec<Elem>>,
}

impl LawCheck {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LawReport {
    pub checks: Vec<LawCheck>,
}

impl LawReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record<W: Into<Vec<Elem>>>(&mut self, name: &'static str, witness: Option<W>) {
        self.checks.push(LawCheck {
            name,
            witness: witness.map(Into::into),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(LawCheck::holds)
    }

    pub fn first_failure(&self) -> Option<&LawCheck> {
        self.checks.iter().find(|c| !c.holds())
    }

    pub fn get(&self, name: &str) -> Option<&LawCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Turns the first failing law into [`Error::Violation`].
    pub fn into_violation(self, context: &str) -> Result<Self> {
        match self.first_failure() {
            Some(c) => Err(Error::violation(
                format!("{context}: {}", c.name),
                c.witness.clone().unwrap_or_default(),
            )),
            None => Ok(self),
        }
    }

    pub fn extend(&mut self, other: LawReport) {
        self.checks.extend(other.checks);
    }
}

/// Result of a theorem check whose hypotheses may not hold on an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<T> {
    Pass(T),
    /// The named hypothesis does not hold, so the theorem makes no claim.
    Skip(&'static str),
}

impl<T> Outcome<T> {
    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass(_))
    }

    pub fn pass(self) -> Option<T> {
        match self {
            Outcome::Pass(t) => Some(t),
            Outcome::Skip(_) => None,
        }
    }
}
