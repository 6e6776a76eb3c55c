use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("budget of {budget} evaluations exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("support of {size} exceeds the cap of {cap}")]
    SupportExceeded { size: u128, cap: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

pub(crate) fn mismatch(msg: impl Into<String>) -> Error {
    Error::DimensionMismatch(msg.into())
}

/// Counts candidate evaluations and fails once the configured cap is hit.
/// Separately caps the size of any support enumerated into memory.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: u64,
    max_support: u64,
}

/// Default cap on candidate evaluations for exhaustive searches.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Default cap on the number of constraints or atoms an exact generator may materialise.
pub const DEFAULT_MAX_SUPPORT: u64 = 1 << 22;

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0, max_support: DEFAULT_MAX_SUPPORT }
    }

    pub fn with_max_support(mut self, cap: u64) -> Self {
        self.max_support = cap;
        self
    }

    pub fn max_support(&self) -> u64 {
        self.max_support
    }

    /// Fails if a support of `size` elements would be materialised.
    pub fn require_support(&self, size: u128) -> Result<()> {
        if size > self.max_support as u128 {
            Err(Error::SupportExceeded { size, cap: self.max_support })
        } else {
            Ok(())
        }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX).with_max_support(u64::MAX)
    }

    #[inline]
    pub fn charge(&mut self, n: u64) -> Result<()> {
        self.used = self.used.saturating_add(n);
        if self.used > self.limit {
            Err(Error::BudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }

    /// Fails up front if `n` evaluations would not fit.
    pub fn require(&self, n: u128) -> Result<()> {
        if n > (self.limit - self.used.min(self.limit)) as u128 {
            Err(Error::BudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}
