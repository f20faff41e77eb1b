use std::fmt;
use std::time::{Duration, Instant};

/// Default per-query wall-clock limit.
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(600);

/// Default cap on the size of intermediate formulas (nodes plus edges).
pub const DEFAULT_MAX_FORMULA_SIZE: usize = 20_000_000;

/// Resource limits for one solver query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub timeout: Option<Duration>,
    pub max_decisions: Option<u64>,
    pub max_formula_size: Option<usize>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            timeout: Some(DEFAULT_TIMEOUT),
            max_decisions: None,
            max_formula_size: Some(DEFAULT_MAX_FORMULA_SIZE),
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            timeout: None,
            max_decisions: None,
            max_formula_size: None,
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = Some(timeout);
        self
    }

    pub fn with_max_decisions(mut self, n: u64) -> Self {
        self.max_decisions = Some(n);
        self
    }

    pub fn with_max_formula_size(mut self, n: usize) -> Self {
        self.max_formula_size = Some(n);
        self
    }

    pub fn start(&self) -> Meter {
        Meter {
            deadline: self.timeout.map(|t| Instant::now() + t),
            max_decisions: self.max_decisions,
            max_formula_size: self.max_formula_size,
            decisions: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    Timeout,
    Decisions,
    FormulaSize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub struct ResourceLimit {
    pub kind: LimitKind,
}

impl fmt::Display for ResourceLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LimitKind::Timeout => f.write_str("time limit exceeded"),
            LimitKind::Decisions => f.write_str("search decision limit exceeded"),
            LimitKind::FormulaSize => f.write_str("formula size limit exceeded"),
        }
    }
}

/// Running consumption against a [`Budget`]. One meter spans a whole query,
/// including every satisfiability call a binary search makes.
#[derive(Debug, Clone)]
pub struct Meter {
    deadline: Option<Instant>,
    max_decisions: Option<u64>,
    max_formula_size: Option<usize>,
    decisions: u64,
}

impl Meter {
    pub fn decide(&mut self) -> Result<(), ResourceLimit> {
        self.decisions += 1;
        if self.max_decisions.is_some_and(|m| self.decisions > m) {
            return Err(ResourceLimit {
                kind: LimitKind::Decisions,
            });
        }
        // Instant::now is cheap but not free
        if self.decisions.is_multiple_of(64) {
            self.check_time()?;
        }
        Ok(())
    }

    pub fn check_time(&self) -> Result<(), ResourceLimit> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(ResourceLimit {
                kind: LimitKind::Timeout,
            }),
            _ => Ok(()),
        }
    }

    pub fn check_size(&self, size: usize) -> Result<(), ResourceLimit> {
        if self.max_formula_size.is_some_and(|m| size > m) {
            return Err(ResourceLimit {
                kind: LimitKind::FormulaSize,
            });
        }
        self.check_time()
    }

    pub fn decisions(&self) -> u64 {
        self.decisions
    }
}
