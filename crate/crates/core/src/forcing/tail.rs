use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::laps::{fixed_point_set, LapIterates};
use crate::orbits::{has_least_period, IdentityCache};
use crate::order::is_tail;
use crate::plmap::PLMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TailReport {
    pub periods: BTreeSet<u64>,
    pub is_tail: bool,
    /// Largest lap count among the iterates examined.
    pub peak_laps: usize,
}

/// Least periods up to `bound` realized by `map`, and whether they form a
/// Sharkovsky tail.
///
/// A period counts when some isolated fixed point of `f^n` has least period
/// `n`, or when `f^n` is the identity on an interval not already fixed
/// pointwise by a lower iterate.
pub fn verify_tail_property(map: &PLMap, bound: u64, piece_budget: usize) -> Result<TailReport> {
    let mut periods = BTreeSet::new();
    let mut cache = IdentityCache::new(map, piece_budget);
    let mut peak_laps = 0;
    for (n, laps) in (1..=bound).zip(LapIterates::new(map, piece_budget)) {
        let laps = laps?;
        peak_laps = peak_laps.max(laps.lap_count());
        let set = fixed_point_set(&laps);
        let continuum = !cache
            .primitive_segments(n, &set.identity_segments)?
            .is_empty();
        cache.record(n, set.identity_segments);
        if continuum || has_least_period(map, n, &set.points) {
            periods.insert(n);
        }
    }
    let is_tail = is_tail(&periods, bound);
    Ok(TailReport {
        periods,
        is_tail,
        peak_laps,
    })
}
