//! Resource budgets for the exhaustive searches.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub wall: Option<Duration>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { max_nodes: None, wall: None };

    pub fn nodes(n: u64) -> Budget {
        Budget { max_nodes: Some(n), wall: None }
    }

    pub fn seconds(s: f64) -> Budget {
        Budget { max_nodes: None, wall: Some(Duration::from_secs_f64(s)) }
    }

    pub fn meter(&self) -> Meter {
        Meter { budget: *self, start: Instant::now(), nodes: 0, exhausted: false }
    }
}

/// Counts search nodes against a [`Budget`]. The clock is only read every
/// 1024 ticks.
#[derive(Clone, Debug)]
pub struct Meter {
    budget: Budget,
    start: Instant,
    nodes: u64,
    exhausted: bool,
}

impl Meter {
    /// Record one node; returns `false` once the budget is spent.
    #[inline]
    pub fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        if let Some(m) = self.budget.max_nodes {
            if self.nodes > m {
                self.exhausted = true;
                return false;
            }
        }
        if self.nodes & 1023 == 0 {
            if let Some(w) = self.budget.wall {
                if self.start.elapsed() > w {
                    self.exhausted = true;
                    return false;
                }
            }
        }
        true
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}

/// Thread-safe counterpart of [`Meter`] for the rayon-parallel searches.
#[derive(Debug)]
pub struct SharedMeter {
    budget: Budget,
    start: Instant,
    nodes: AtomicU64,
    exhausted: AtomicBool,
}

impl SharedMeter {
    pub fn new(budget: Budget) -> SharedMeter {
        SharedMeter { budget, start: Instant::now(), nodes: AtomicU64::new(0), exhausted: AtomicBool::new(false) }
    }

    pub fn tick(&self) -> bool {
        if self.exhausted.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over = self.budget.max_nodes.is_some_and(|m| n > m)
            || (n & 255 == 0 && self.budget.wall.is_some_and(|w| self.start.elapsed() > w));
        if over {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        !over
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted.load(Ordering::Relaxed)
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }
}
