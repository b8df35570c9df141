use std::time::{Duration, Instant};

/// An optional wall-clock deadline.
///
/// The clock is only read when a limit is set, so callers on targets without
/// a monotonic clock (browser wasm) can run with `Deadline::none()`.
#[derive(Debug, Clone, Copy)]
pub struct Deadline {
    end: Option<Instant>,
    zero: bool,
}

impl Deadline {
    pub fn none() -> Self {
        Self { end: None, zero: false }
    }

    pub fn after(limit: Option<Duration>) -> Self {
        match limit {
            None => Self::none(),
            Some(d) if d.is_zero() => Self { end: None, zero: true },
            Some(d) => Self { end: Some(Instant::now() + d), zero: false },
        }
    }

    pub fn expired(&self) -> bool {
        self.zero || self.end.is_some_and(|end| Instant::now() >= end)
    }

    /// Time left, or `None` when unlimited.
    pub fn remaining(&self) -> Option<Duration> {
        if self.zero {
            return Some(Duration::ZERO);
        }
        self.end.map(|end| end.saturating_duration_since(Instant::now()))
    }
}
