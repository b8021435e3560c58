//! The Sharkovsky ordering of the positive integers
//!
//! ```text
//! 3 ≺ 5 ≺ 7 ≺ … ≺ 2·3 ≺ 2·5 ≺ … ≺ 2²·3 ≺ 2²·5 ≺ … ≺ 2³ ≺ 2² ≺ 2 ≺ 1
//! ```
//!
//! Comparison uses the factorization `n = 2^e · q` with `q` odd, so it is
//! constant time and unbounded.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

/// A positive integer split as `2^e · q` with `q` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PeriodKey {
    e: u32,
    q: u64,
}

impl PeriodKey {
    /// Returns `None` for zero.
    pub fn new(n: u64) -> Option<PeriodKey> {
        if n == 0 {
            return None;
        }
        let e = n.trailing_zeros();
        Some(PeriodKey { e, q: n >> e })
    }

    pub fn exponent(self) -> u32 {
        self.e
    }

    pub fn odd_part(self) -> u64 {
        self.q
    }

    pub fn value(self) -> u64 {
        self.q << self.e
    }

    pub fn is_power_of_two(self) -> bool {
        self.q == 1
    }

    /// Position in the Sharkovsky order: `Less` means `self ≺ other`.
    pub fn sharkovsky_cmp(self, other: PeriodKey) -> Ordering {
        match (self.is_power_of_two(), other.is_power_of_two()) {
            (false, false) => self.e.cmp(&other.e).then(self.q.cmp(&other.q)),
            (false, true) => Ordering::Less,
            (true, false) => Ordering::Greater,
            (true, true) => other.e.cmp(&self.e),
        }
    }

    pub fn precedes(self, other: PeriodKey) -> bool {
        self.sharkovsky_cmp(other) == Ordering::Less
    }
}

impl fmt::Display for PeriodKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

fn key(n: u64) -> PeriodKey {
    PeriodKey::new(n).expect("periods are positive")
}

/// `m ≺ n` in the Sharkovsky order; `m`, `n` must be positive.
pub fn precedes(m: u64, n: u64) -> bool {
    key(m).precedes(key(n))
}

/// `{ k <= bound : k = n or n ≺ k }`.
pub fn tail(n: u64, bound: u64) -> BTreeSet<u64> {
    let n = key(n);
    (1..=bound)
        .filter(|&k| k == n.value() || n.precedes(key(k)))
        .collect()
}

/// Whether `periods` is closed upward in the Sharkovsky order among
/// `1..=bound`.
pub fn is_tail(periods: &BTreeSet<u64>, bound: u64) -> bool {
    // closed upward iff it contains the tail of its ≺-least element
    let Some(least) = periods
        .iter()
        .copied()
        .min_by(|&a, &b| key(a).sharkovsky_cmp(key(b)))
    else {
        return true;
    };
    tail(least, bound).is_subset(periods)
}
