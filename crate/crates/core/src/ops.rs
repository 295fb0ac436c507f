//! Field-operation accounting.
//!
//! Counting is off unless a caller asks for it. One multiplication, one
//! addition or one inversion each count as a single operation, and only
//! operations actually executed are counted (multiplying a row by a zero
//! coefficient is skipped and costs nothing).

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    enabled: bool,
    count: u64,
}

impl OpCounter {
    pub fn disabled() -> Self {
        Self::default()
    }

    pub fn enabled() -> Self {
        OpCounter {
            enabled: true,
            count: 0,
        }
    }

    #[inline(always)]
    pub fn add(&mut self, ops: u64) {
        if self.enabled {
            self.count += ops;
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    /// The running total, or `None` when counting is disabled.
    pub fn count(&self) -> Option<u64> {
        self.enabled.then_some(self.count)
    }
}
