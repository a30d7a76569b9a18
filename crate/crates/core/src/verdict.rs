use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Holds,
    Inconclusive,
    Fails,
}

impl Status {
    /// Conjunction: any failure wins, then any inconclusive.
    pub fn and(self, other: Status) -> Status {
        self.max(other)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Inconclusive => "inconclusive",
            Status::Fails => "fails",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Three-valued outcome of a check.
///
/// `margin` is the signed slack of the checked inequality: non-negative
/// when it holds, negative by the size of the violation otherwise. It is
/// `NaN` when no numeric margin applies.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub margin: f64,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(status: Status, margin: f64) -> Self {
        Verdict {
            status,
            margin,
            notes: Vec::new(),
        }
    }

    pub fn holds(margin: f64) -> Self {
        Self::new(Status::Holds, margin)
    }

    pub fn fails(margin: f64) -> Self {
        Self::new(Status::Fails, margin)
    }

    pub fn inconclusive(note: impl Into<String>) -> Self {
        Self::new(Status::Inconclusive, f64::NAN).note(note)
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }

    /// Conjunction of two verdicts; the margin is the smaller one.
    pub fn and(mut self, other: Verdict) -> Verdict {
        self.status = self.status.and(other.status);
        self.margin = match (self.margin.is_nan(), other.margin.is_nan()) {
            (true, _) => other.margin,
            (_, true) => self.margin,
            _ => self.margin.min(other.margin),
        };
        self.notes.extend(other.notes);
        self
    }
}

impl From<Error> for Verdict {
    fn from(e: Error) -> Verdict {
        Verdict::inconclusive(alloc::format!("{e}"))
    }
}
