use std::cell::Cell;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

thread_local! {
    static DEADLINE: Cell<Option<Instant>> = const { Cell::new(None) };
}

/// Runs `f` with a wall-clock budget; long computations inside poll
/// [`check`] and fail with [`Error::Interrupted`] once it is spent.
/// Nested budgets keep the earlier deadline.
pub fn with_budget<T>(budget: Option<Duration>, f: impl FnOnce() -> T) -> T {
    let prev = DEADLINE.with(|d| d.get());
    let new = match (prev, budget.map(|b| Instant::now() + b)) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    DEADLINE.with(|d| d.set(new));
    let out = f();
    DEADLINE.with(|d| d.set(prev));
    out
}

pub fn check() -> Result<()> {
    match DEADLINE.with(|d| d.get()) {
        Some(t) if Instant::now() >= t => Err(Error::Interrupted),
        _ => Ok(()),
    }
}

pub fn remaining() -> Option<Duration> {
    DEADLINE
        .with(|d| d.get())
        .map(|t| t.saturating_duration_since(Instant::now()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_budget_interrupts() {
        assert!(check().is_ok());
        with_budget(Some(Duration::ZERO), || {
            assert!(matches!(check(), Err(Error::Interrupted)))
        });
        assert!(check().is_ok());
    }
}
