//! Exact lap decompositions of iterates `f^n`.
//!
//! The n-th iterate of a piecewise-linear map is again piecewise linear. It is
//! built by composing `f` after `f^(n-1)`: every breakpoint `c` of `f` that the
//! monotone lap `[x0, x1]` of `f^(n-1)` sweeps over is pulled back to the unique
//! `x` in the lap with `f^(n-1)(x) = c`. Adjacent collinear pieces are merged,
//! so a lap is a maximal interval on which the iterate is affine.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::plmap::PLMap;
use crate::rational::Rational;

/// Default bound on the number of laps of any computed iterate.
pub const DEFAULT_PIECE_BUDGET: usize = 2_000_000;

const PAR_CHUNK: usize = 2048;

/// One affine branch `x ↦ slope · x + intercept`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Affine {
    pub fn through(x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational) -> Affine {
        let slope = (y1 - y0) / (x1 - x0);
        let intercept = y0 - &slope * x0;
        Affine { slope, intercept }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }
}

/// The lap decomposition of an iterate: breakpoints, with the iterate's value
/// at each breakpoint. Between breakpoints the iterate is affine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LapDecomposition {
    iterate: u64,
    map: PLMap,
}

impl LapDecomposition {
    pub fn of_map(map: &PLMap) -> Self {
        LapDecomposition {
            iterate: 1,
            map: map.clone(),
        }
    }

    /// Which power of the source map this decomposes.
    pub fn iterate(&self) -> u64 {
        self.iterate
    }

    pub fn lap_count(&self) -> usize {
        self.map.segment_count()
    }

    pub fn breakpoints(&self) -> &[Rational] {
        self.map.xs()
    }

    pub fn values(&self) -> &[Rational] {
        self.map.ys()
    }

    pub fn branch(&self, i: usize) -> Affine {
        let (xs, ys) = (self.map.xs(), self.map.ys());
        Affine::through(&xs[i], &ys[i], &xs[i + 1], &ys[i + 1])
    }

    pub fn branches(&self) -> impl Iterator<Item = Affine> + '_ {
        (0..self.lap_count()).map(|i| self.branch(i))
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        self.map.eval(x)
    }

    /// The iterate as a map in its own right.
    pub fn as_map(&self) -> &PLMap {
        &self.map
    }

    /// Decomposition of `f^(n+1)` given that `self` decomposes `f^n`.
    pub fn then_apply(&self, f: &PLMap, piece_budget: usize) -> Result<LapDecomposition> {
        let map = compose(f, &self.map, piece_budget)?;
        Ok(LapDecomposition {
            iterate: self.iterate + 1,
            map,
        })
    }
}

/// Node sink that merges a new node into the previous one when the last two
/// segments would be collinear.
struct NodeBuilder {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
}

impl NodeBuilder {
    fn with_capacity(n: usize) -> Self {
        NodeBuilder {
            xs: Vec::with_capacity(n),
            ys: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, x: Rational, y: Rational) {
        let n = self.xs.len();
        if n >= 2 {
            let (xa, ya) = (&self.xs[n - 2], &self.ys[n - 2]);
            let (xb, yb) = (&self.xs[n - 1], &self.ys[n - 1]);
            // abscissae increase, so cross-multiplied slopes compare exactly
            if (yb - ya) * (&x - xb) == (&y - yb) * (xb - xa) {
                self.xs.pop();
                self.ys.pop();
            }
        }
        self.xs.push(x);
        self.ys.push(y);
    }

    fn segments(&self) -> usize {
        self.xs.len().saturating_sub(1)
    }
}

/// Appends the pieces of `outer ∘ inner` over the inner segment `i`.
fn compose_segment(outer: &PLMap, inner: &PLMap, i: usize, out: &mut NodeBuilder) {
    let (x0, x1) = (&inner.xs()[i], &inner.xs()[i + 1]);
    let (y0, y1) = (&inner.ys()[i], &inner.ys()[i + 1]);
    if y0 != y1 {
        let (lo, hi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
        let crossings = outer.interior_breakpoints(lo, hi);
        let scale = (x1 - x0) / (y1 - y0);
        let mut pull = |c: &Rational| {
            let x = x0 + (c - y0) * &scale;
            out.push(x, outer.eval_in_domain(c));
        };
        if y0 < y1 {
            crossings.iter().for_each(&mut pull);
        } else {
            crossings.iter().rev().for_each(&mut pull);
        }
    }
    out.push(x1.clone(), outer.eval_in_domain(y1));
}

/// `outer ∘ inner` as a canonical piecewise-linear map on inner's domain.
pub(crate) fn compose(outer: &PLMap, inner: &PLMap, piece_budget: usize) -> Result<PLMap> {
    let segments = inner.segment_count();
    let first = (inner.xs()[0].clone(), outer.eval_in_domain(&inner.ys()[0]));
    if segments <= PAR_CHUNK {
        let mut out = NodeBuilder::with_capacity(segments + 1);
        out.push(first.0, first.1);
        for i in 0..segments {
            compose_segment(outer, inner, i, &mut out);
            if out.segments() > piece_budget {
                return Err(Error::BudgetExceeded {
                    needed: out.segments(),
                    budget: piece_budget,
                });
            }
        }
        return Ok(PLMap::from_parts(out.xs, out.ys));
    }

    let starts: Vec<usize> = (0..segments).step_by(PAR_CHUNK).collect();
    let chunks: Vec<NodeBuilder> = starts
        .par_iter()
        .map(|&start| {
            let end = (start + PAR_CHUNK).min(segments);
            let mut out = NodeBuilder::with_capacity(2 * (end - start) + 1);
            let x = inner.xs()[start].clone();
            let y = outer.eval_in_domain(&inner.ys()[start]);
            out.push(x, y);
            for i in start..end {
                compose_segment(outer, inner, i, &mut out);
            }
            out
        })
        .collect();

    // each seam can merge away at most one node
    let upper: usize = chunks.iter().map(NodeBuilder::segments).sum();
    if upper > piece_budget + chunks.len() {
        return Err(Error::BudgetExceeded {
            needed: upper - chunks.len(),
            budget: piece_budget,
        });
    }
    let mut out = NodeBuilder::with_capacity(upper + 1);
    for chunk in chunks {
        let mut nodes = chunk.xs.into_iter().zip(chunk.ys);
        let head = nodes.next();
        if out.xs.is_empty() {
            let (x, y) = head.expect("chunk has a first node");
            out.push(x, y);
        }
        if let Some((x, y)) = nodes.next() {
            out.push(x, y);
        }
        // interior of a chunk is already merged
        for (x, y) in nodes {
            out.xs.push(x);
            out.ys.push(y);
        }
    }
    if out.segments() > piece_budget {
        return Err(Error::BudgetExceeded {
            needed: out.segments(),
            budget: piece_budget,
        });
    }
    Ok(PLMap::from_parts(out.xs, out.ys))
}

/// Exact lap decomposition of `f^n`.
pub fn iterate_laps(map: &PLMap, n: u64, piece_budget: usize) -> Result<LapDecomposition> {
    if n == 0 {
        return Err(Error::PreconditionViolated(
            "iterate_laps needs n >= 1".into(),
        ));
    }
    let mut laps = LapDecomposition::of_map(map);
    if laps.lap_count() > piece_budget {
        return Err(Error::BudgetExceeded {
            needed: laps.lap_count(),
            budget: piece_budget,
        });
    }
    for _ in 1..n {
        laps = laps.then_apply(map, piece_budget)?;
    }
    Ok(laps)
}

/// Yields the decompositions of `f, f², f³, ...` in turn, each built from the
/// previous one.
pub struct LapIterates<'a> {
    map: &'a PLMap,
    budget: usize,
    current: Option<LapDecomposition>,
    failed: bool,
}

impl<'a> LapIterates<'a> {
    pub fn new(map: &'a PLMap, piece_budget: usize) -> Self {
        LapIterates {
            map,
            budget: piece_budget,
            current: None,
            failed: false,
        }
    }
}

impl Iterator for LapIterates<'_> {
    type Item = Result<LapDecomposition>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let next = match &self.current {
            None if self.map.segment_count() > self.budget => Err(Error::BudgetExceeded {
                needed: self.map.segment_count(),
                budget: self.budget,
            }),
            None => Ok(LapDecomposition::of_map(self.map)),
            Some(prev) => prev.then_apply(self.map, self.budget),
        };
        match next {
            Ok(d) => {
                self.current = Some(d.clone());
                Some(Ok(d))
            }
            Err(e) => {
                self.failed = true;
                Some(Err(e))
            }
        }
    }
}

/// Solutions of `d(x) = x`: isolated points plus maximal intervals on which
/// the iterate is the identity. `points` also contains the endpoints of every
/// identity interval.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FixedPointSet {
    pub points: Vec<Rational>,
    pub identity_segments: Vec<(Rational, Rational)>,
}

enum LapRoots {
    None,
    One(Rational),
    Identity(Rational, Rational),
}

fn lap_roots(x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational) -> LapRoots {
    let h0 = y0 - x0;
    let h1 = y1 - x1;
    match (h0.signum(), h1.signum()) {
        (std::cmp::Ordering::Equal, std::cmp::Ordering::Equal) => {
            LapRoots::Identity(x0.clone(), x1.clone())
        }
        (std::cmp::Ordering::Equal, _) => LapRoots::One(x0.clone()),
        (_, std::cmp::Ordering::Equal) => LapRoots::One(x1.clone()),
        (a, b) if a != b => LapRoots::One(x0 + &h0 * (x1 - x0) / (&h0 - &h1)),
        _ => LapRoots::None,
    }
}

/// The complete fixed-point set of a decomposed iterate.
pub fn fixed_point_set(d: &LapDecomposition) -> FixedPointSet {
    let (xs, ys) = (d.breakpoints(), d.values());
    let roots: Vec<LapRoots> = if d.lap_count() > PAR_CHUNK {
        (0..d.lap_count())
            .into_par_iter()
            .map(|i| lap_roots(&xs[i], &ys[i], &xs[i + 1], &ys[i + 1]))
            .collect()
    } else {
        (0..d.lap_count())
            .map(|i| lap_roots(&xs[i], &ys[i], &xs[i + 1], &ys[i + 1]))
            .collect()
    };
    let mut set = FixedPointSet::default();
    let push = |points: &mut Vec<Rational>, x: Rational| {
        if points.last() != Some(&x) {
            points.push(x);
        }
    };
    for r in roots {
        match r {
            LapRoots::None => {}
            LapRoots::One(x) => push(&mut set.points, x),
            LapRoots::Identity(a, b) => {
                push(&mut set.points, a.clone());
                push(&mut set.points, b.clone());
                set.identity_segments.push((a, b));
            }
        }
    }
    set
}

/// Sorted, duplicate-free list of all fixed points of the decomposed iterate.
///
/// Fails with [`Error::IdentitySegment`] when some lap is the identity, since
/// the fixed-point set is then a continuum.
pub fn fixed_points(d: &LapDecomposition) -> Result<Vec<Rational>> {
    let set = fixed_point_set(d);
    if let Some((lo, hi)) = set.identity_segments.into_iter().next() {
        return Err(Error::IdentitySegment {
            segment: Box::new([lo, hi]),
        });
    }
    Ok(set.points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::tent;
    use crate::rational::q;

    /// Independent oracle: solve every affine branch of T^n written as
    /// `x ↦ 2^n x - k` or `x ↦ k - 2^n x` on `[k/2^n, (k+1)/2^n]`.
    fn tent_iterate_roots_by_hand(n: u32) -> Vec<Rational> {
        let s = 1i64 << n;
        let mut roots = Vec::new();
        for k in 0..s {
            // increasing laps are the even ones: T^n(x) = s·x − k on lap k
            let (lo, hi) = (q(k, s), q(k + 1, s));
            let x = if k % 2 == 0 {
                q(k, s - 1)
            } else {
                q(k + 1, s + 1)
            };
            assert!(x >= lo && x <= hi);
            if roots.last() != Some(&x) {
                roots.push(x);
            }
        }
        roots
    }

    #[test]
    fn tent_first_iterate_is_itself() {
        let d = iterate_laps(&tent(), 1, DEFAULT_PIECE_BUDGET).unwrap();
        assert_eq!(d.lap_count(), 2);
        let slopes: Vec<_> = d.branches().map(|b| b.slope).collect();
        assert_eq!(slopes, vec![q(2, 1), q(-2, 1)]);
    }

    #[test]
    fn tent_third_iterate_alternates_slopes() {
        let d = iterate_laps(&tent(), 3, DEFAULT_PIECE_BUDGET).unwrap();
        assert_eq!(d.lap_count(), 8);
        for (i, b) in d.branches().enumerate() {
            let expected = if i % 2 == 0 { q(8, 1) } else { q(-8, 1) };
            assert_eq!(b.slope, expected);
        }
    }

    #[test]
    fn tent_lap_count_doubles() {
        let mut count = 1usize;
        for (n, d) in LapIterates::new(&tent(), DEFAULT_PIECE_BUDGET)
            .take(12)
            .enumerate()
        {
            count *= 2;
            assert_eq!(d.unwrap().lap_count(), count, "n = {}", n + 1);
        }
    }

    #[test]
    fn tent_fixed_points_small_iterates() {
        let t = tent();
        let fp = |n| fixed_points(&iterate_laps(&t, n, DEFAULT_PIECE_BUDGET).unwrap()).unwrap();
        assert_eq!(fp(1), vec![q(0, 1), q(2, 3)]);
        assert_eq!(fp(2), vec![q(0, 1), q(2, 5), q(2, 3), q(4, 5)]);
        let third = fp(3);
        assert_eq!(third.len(), 8);
        for x in [
            q(0, 1),
            q(2, 7),
            q(4, 7),
            q(6, 7),
            q(2, 9),
            q(4, 9),
            q(8, 9),
            q(2, 3),
        ] {
            assert!(third.contains(&x), "missing {x}");
        }
    }

    #[test]
    fn tent_fixed_points_match_hand_oracle() {
        for n in 1..=10u32 {
            let d = iterate_laps(&tent(), n as u64, DEFAULT_PIECE_BUDGET).unwrap();
            assert_eq!(fixed_points(&d).unwrap(), tent_iterate_roots_by_hand(n));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = iterate_laps(&tent(), 6, 40).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { budget: 40, .. }));
    }

    #[test]
    fn large_iterate_uses_parallel_path_consistently() {
        // 2^13 laps goes through the chunked composition
        let d = iterate_laps(&tent(), 13, DEFAULT_PIECE_BUDGET).unwrap();
        assert_eq!(d.lap_count(), 1 << 13);
        assert!(d.breakpoints().windows(2).all(|w| w[0] < w[1]));
        let roots = fixed_points(&d).unwrap();
        assert_eq!(roots.len(), 1 << 13);
    }

    #[test]
    fn identity_lap_is_reported() {
        let id = PLMap::identity(q(0, 1), q(1, 1)).unwrap();
        let d = iterate_laps(&id, 2, 10).unwrap();
        assert_eq!(d.lap_count(), 1);
        assert_eq!(
            fixed_points(&d),
            Err(Error::IdentitySegment {
                segment: Box::new([q(0, 1), q(1, 1)])
            })
        );
        let set = fixed_point_set(&d);
        assert_eq!(set.points, vec![q(0, 1), q(1, 1)]);
    }

    #[test]
    fn plateaus_merge_in_iterates() {
        // constant pieces of a clamped map stay merged under iteration
        let m = PLMap::new(vec![
            (q(0, 1), q(1, 4)),
            (q(1, 4), q(1, 4)),
            (q(1, 2), q(3, 4)),
            (q(1, 1), q(1, 4)),
        ])
        .unwrap();
        let d = iterate_laps(&m, 6, 10_000).unwrap();
        assert!(d.lap_count() < 64);
        for x in [q(0, 1), q(1, 3), q(5, 8), q(1, 1)] {
            assert_eq!(d.eval(&x).unwrap(), m.eval_iter(&x, 6).unwrap());
        }
    }
}
