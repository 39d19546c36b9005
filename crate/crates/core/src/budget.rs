//! Step and wall-clock caps shared by the exhaustive searches.

use std::cell::Cell;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Caps for one search invocation. The step counter is local to the value,
/// so clone a fresh budget per call when running searches concurrently.
#[derive(Debug, Clone)]
pub struct Budget {
    max_steps: u64,
    deadline: Option<Instant>,
    steps: Cell<u64>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(5_000_000)
    }
}

impl Budget {
    pub fn new(max_steps: u64) -> Self {
        Budget { max_steps, deadline: None, steps: Cell::new(0) }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn with_timeout(mut self, limit: Duration) -> Self {
        self.deadline = Some(Instant::now() + limit);
        self
    }

    /// Reads `GH_BUDGET_MS` and applies it as a wall-clock cap.
    pub fn from_env(self) -> Self {
        match std::env::var("GH_BUDGET_MS").ok().and_then(|s| s.trim().parse::<u64>().ok()) {
            Some(ms) => self.with_timeout(Duration::from_millis(ms)),
            None => self,
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps.get()
    }

    pub fn reset(&self) {
        self.steps.set(0);
    }

    /// Counts one unit of work; fails once either cap is hit.
    pub fn tick(&self, what: &str) -> Result<()> {
        let n = self.steps.get() + 1;
        self.steps.set(n);
        if n > self.max_steps {
            return Err(Error::Budget(format!("{what}: more than {} steps", self.max_steps)));
        }
        if n.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(Error::Budget(format!("{what}: wall-clock cap reached")));
                }
            }
        }
        Ok(())
    }
}
