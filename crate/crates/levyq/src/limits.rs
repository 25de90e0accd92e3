//! Process-wide bound on polynomial orders.
//!
//! Every constructor that takes an order `n` checks it against this bound and
//! fails with [`Error::OrderLimit`](crate::Error::OrderLimit) when exceeded.
//! The cap exists to keep accidental `n = 10_000` requests from trying to
//! enumerate partitions forever; callers that know what they are doing can
//! raise it.

use crate::error::{Error, Result};
use std::sync::atomic::{AtomicUsize, Ordering};

pub const DEFAULT_MAX_ORDER: usize = 16;

static MAX_ORDER: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_ORDER);

pub fn max_order() -> usize {
    MAX_ORDER.load(Ordering::Relaxed)
}

pub fn set_max_order(limit: usize) {
    MAX_ORDER.store(limit, Ordering::Relaxed);
}

/// Check a requested order against the current bound.
pub fn check_order(n: usize) -> Result<()> {
    let limit = max_order();
    if n > limit {
        Err(Error::OrderLimit {
            requested: n,
            limit,
        })
    } else {
        Ok(())
    }
}
