//! Verdict plumbing shared by every check: certification status, violation
//! records and the search configuration (guard, seed, sample count).

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::group::Window;

/// Default bound on exhaustive enumeration before switching to sampling.
pub const DEFAULT_GUARD: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 0xC0FFEE;
pub const DEFAULT_SAMPLES: u64 = 10_000;

/// Maximum number of violations kept verbatim in a report; the rest are
/// only counted.
pub const MAX_RECORDED: usize = 64;

/// Scope of the quantifier behind a verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertStatus {
    /// Exhaustive over a finite domain.
    Certified,
    /// Exhaustive over a box of an infinite group.
    WindowCertified(Window),
    /// A search over the box found nothing.
    NotFoundInWindow(Window),
    /// Seeded random sampling.
    Sampled { seed: u64, count: u64 },
}

impl CertStatus {
    /// The weaker of two statuses, used when merging sub-reports.
    pub fn combine(&self, other: &CertStatus) -> CertStatus {
        use CertStatus::*;
        match (self, other) {
            (Sampled { .. }, _) => self.clone(),
            (_, Sampled { .. }) => other.clone(),
            (NotFoundInWindow(_), _) => self.clone(),
            (_, NotFoundInWindow(_)) => other.clone(),
            (WindowCertified(_), _) => self.clone(),
            (_, WindowCertified(_)) => other.clone(),
            (Certified, Certified) => Certified,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CertStatus::Certified => "certified",
            CertStatus::WindowCertified(_) => "window-certified",
            CertStatus::NotFoundInWindow(_) => "not-found-in-window",
            CertStatus::Sampled { .. } => "sampled",
        }
    }
}

impl fmt::Display for CertStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertStatus::Certified => write!(f, "certified"),
            CertStatus::WindowCertified(w) => write!(f, "window-certified on {w}"),
            CertStatus::NotFoundInWindow(w) => write!(f, "not found in window {w}"),
            CertStatus::Sampled { seed, count } => write!(f, "sampled ({count} draws, seed {seed:#x})"),
        }
    }
}

/// One failed instance of a named clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub clause: &'static str,
    pub witness: String,
}

/// Outcome of an exhaustive (or sampled) check of one or more clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub checked: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    pub status: CertStatus,
}

impl CheckReport {
    pub fn new(status: CertStatus) -> Self {
        CheckReport { checked: 0, violation_count: 0, violations: Vec::new(), status }
    }

    pub fn holds(&self) -> bool {
        self.violation_count == 0
    }

    pub fn tick(&mut self) {
        self.checked += 1;
    }

    pub fn fail(&mut self, clause: &'static str, witness: String) {
        self.violation_count += 1;
        if self.violations.len() < MAX_RECORDED {
            self.violations.push(Violation { clause, witness });
        }
    }

    /// Records one check of `clause`, failing with the lazily built witness.
    pub fn expect(&mut self, ok: bool, clause: &'static str, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(clause, witness());
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.violation_count += other.violation_count;
        for v in other.violations {
            if self.violations.len() < MAX_RECORDED {
                self.violations.push(v);
            }
        }
        self.status = self.status.combine(&other.status);
    }

    pub fn clause_holds(&self, clause: &str) -> bool {
        !self.violations.iter().any(|v| v.clause == clause)
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

/// Exhaustive-versus-sampled policy for enumerations over `L^X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub guard: u64,
    pub seed: u64,
    pub samples: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { guard: DEFAULT_GUARD, seed: DEFAULT_SEED, samples: DEFAULT_SAMPLES }
    }
}

impl SearchConfig {
    /// Whether `base^exp` candidates fit under the guard.
    pub fn exhaustive(&self, base: usize, exp: usize) -> bool {
        (base as u64)
            .checked_pow(exp as u32)
            .map_or(false, |n| n <= self.guard)
    }
}
