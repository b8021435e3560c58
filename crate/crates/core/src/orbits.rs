//! Periodic orbits: least periods, exhaustive enumeration, extremal selection.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laps::{fixed_point_set, iterate_laps, FixedPointSet, LapDecomposition};
use crate::plmap::PLMap;
use crate::rational::Rational;

/// A periodic orbit: its points in increasing order and, for each point, the
/// index of its image.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Orbit {
    points: Vec<Rational>,
    successor: Vec<usize>,
}

impl Orbit {
    /// Builds the orbit from its points, inferring the successor permutation by
    /// applying `map`. The points must form a single cycle.
    pub fn from_points(map: &PLMap, mut points: Vec<Rational>) -> Result<Orbit> {
        if points.is_empty() {
            return Err(Error::MalformedOrbit("no points".into()));
        }
        points.sort();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedOrbit("repeated point".into()));
        }
        let mut successor = Vec::with_capacity(points.len());
        for p in &points {
            let image = map
                .eval(p)
                .map_err(|e| Error::MalformedOrbit(e.to_string()))?;
            match points.binary_search(&image) {
                Ok(j) => successor.push(j),
                Err(_) => {
                    return Err(Error::MalformedOrbit(format!(
                        "image {image} of {p} is not in the orbit"
                    )))
                }
            }
        }
        let orbit = Orbit { points, successor };
        if !orbit.is_single_cycle() {
            return Err(Error::MalformedOrbit(
                "points split into several cycles".into(),
            ));
        }
        Ok(orbit)
    }

    /// The orbit of a periodic point `x` whose least period is at most
    /// `max_period`.
    pub fn of_point(map: &PLMap, x: &Rational, max_period: u64) -> Result<Orbit> {
        let mut points = vec![x.clone()];
        let mut cur = map.eval(x)?;
        while &cur != x {
            if points.len() as u64 >= max_period {
                return Err(Error::NotPeriodic {
                    x: x.clone(),
                    n: max_period,
                });
            }
            points.push(cur.clone());
            cur = map.eval_in_domain(&cur);
        }
        Orbit::from_points(map, points)
    }

    pub(crate) fn from_parts(points: Vec<Rational>, successor: Vec<usize>) -> Orbit {
        Orbit { points, successor }
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn successor(&self) -> &[usize] {
        &self.successor
    }

    pub fn period(&self) -> usize {
        self.points.len()
    }

    pub fn min(&self) -> &Rational {
        &self.points[0]
    }

    pub fn max(&self) -> &Rational {
        &self.points[self.points.len() - 1]
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.points.binary_search(x).is_ok()
    }

    /// Checks that every point maps to its recorded successor under `map`.
    pub fn is_orbit_of(&self, map: &PLMap) -> bool {
        self.points
            .iter()
            .zip(&self.successor)
            .all(|(p, &j)| map.eval(p).ok().as_ref() == Some(&self.points[j]))
    }

    fn is_single_cycle(&self) -> bool {
        let n = self.points.len();
        let mut i = 0;
        for step in 1..=n {
            i = self.successor[i];
            if i == 0 {
                return step == n;
            }
        }
        false
    }
}

/// Least `d >= 1` with `f^d(x) = x`, given that `f^n(x) = x`.
pub fn least_period(map: &PLMap, x: &Rational, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::PreconditionViolated(
            "least_period needs n >= 1".into(),
        ));
    }
    let mut cur = map.eval(x)?;
    let mut first = None;
    for d in 1..=n {
        if first.is_none() && &cur == x {
            first = Some(d);
        }
        if d < n {
            cur = map.eval_in_domain(&cur);
        }
    }
    match first {
        Some(d) if &cur == x => Ok(d),
        _ => Err(Error::NotPeriodic { x: x.clone(), n }),
    }
}

/// Least period of `x` if it is at most `n`, by plain iteration.
fn period_up_to(map: &PLMap, x: &Rational, n: u64) -> Option<u64> {
    let mut cur = map.eval_in_domain(x);
    for d in 1..=n {
        if &cur == x {
            return Some(d);
        }
        cur = map.eval_in_domain(&cur);
    }
    None
}

fn proper_divisors(n: u64) -> impl Iterator<Item = u64> {
    (1..n).filter(move |d| n.is_multiple_of(*d))
}

/// True if `[a, b]` is covered by the union of `segments`.
fn covered_by(a: &Rational, b: &Rational, segments: &mut [(Rational, Rational)]) -> bool {
    segments.sort();
    let mut reach = a.clone();
    for (s, e) in segments.iter() {
        if s > &reach {
            break;
        }
        if e > &reach {
            reach = e.clone();
        }
        if &reach >= b {
            return true;
        }
    }
    &reach >= b
}

/// Identity segments of lower iterates, computed on demand.
pub(crate) struct IdentityCache<'a> {
    map: &'a PLMap,
    budget: usize,
    by_iterate: BTreeMap<u64, Vec<(Rational, Rational)>>,
}

impl<'a> IdentityCache<'a> {
    pub(crate) fn new(map: &'a PLMap, budget: usize) -> Self {
        IdentityCache {
            map,
            budget,
            by_iterate: BTreeMap::new(),
        }
    }

    pub(crate) fn record(&mut self, n: u64, segments: Vec<(Rational, Rational)>) {
        self.by_iterate.insert(n, segments);
    }

    fn segments(&mut self, n: u64) -> Result<&[(Rational, Rational)]> {
        if !self.by_iterate.contains_key(&n) {
            let d = iterate_laps(self.map, n, self.budget)?;
            self.by_iterate
                .insert(n, fixed_point_set(&d).identity_segments);
        }
        Ok(&self.by_iterate[&n])
    }

    /// Identity segments of `f^n` that contain points of least period `n`,
    /// i.e. that are not covered by identity segments of `f^d` for proper
    /// divisors `d` of `n`.
    pub(crate) fn primitive_segments(
        &mut self,
        n: u64,
        segments: &[(Rational, Rational)],
    ) -> Result<Vec<(Rational, Rational)>> {
        let mut primitive = Vec::new();
        for (a, b) in segments {
            let mut lower = Vec::new();
            for d in proper_divisors(n) {
                lower.extend(
                    self.segments(d)?
                        .iter()
                        .filter(|(s, e)| e > a && s < b)
                        .cloned(),
                );
            }
            if !covered_by(a, b, &mut lower) {
                primitive.push((a.clone(), b.clone()));
            }
        }
        Ok(primitive)
    }
}

/// Groups the fixed points of `f^n` into orbits of least period exactly `n`.
pub(crate) fn orbits_from_roots(map: &PLMap, n: u64, roots: &[Rational]) -> Vec<Orbit> {
    let periods: Vec<Option<u64>> = if roots.len() > 1024 {
        roots.par_iter().map(|x| period_up_to(map, x, n)).collect()
    } else {
        roots.iter().map(|x| period_up_to(map, x, n)).collect()
    };
    let mut taken = vec![false; roots.len()];
    let mut orbits = Vec::new();
    for (i, x) in roots.iter().enumerate() {
        if taken[i] || periods[i] != Some(n) {
            continue;
        }
        let mut points = Vec::with_capacity(n as usize);
        let mut cur = x.clone();
        for _ in 0..n {
            points.push(cur.clone());
            cur = map.eval_in_domain(&cur);
        }
        let mut sorted = points.clone();
        sorted.sort();
        let successor = sorted
            .iter()
            .map(|p| {
                let image = map.eval_in_domain(p);
                sorted
                    .binary_search(&image)
                    .expect("orbit is closed under the map")
            })
            .collect();
        for p in &sorted {
            if let Ok(j) = roots.binary_search(p) {
                taken[j] = true;
            }
        }
        orbits.push(Orbit::from_parts(sorted, successor));
    }
    orbits
}

/// True if some root has least period exactly `n`; stops at the first one.
pub(crate) fn has_least_period(map: &PLMap, n: u64, roots: &[Rational]) -> bool {
    if roots.len() > 1024 {
        roots.par_iter().any(|x| period_up_to(map, x, n) == Some(n))
    } else {
        roots.iter().any(|x| period_up_to(map, x, n) == Some(n))
    }
}

pub(crate) fn enumerate_from_laps(
    map: &PLMap,
    laps: &LapDecomposition,
    cache: &mut IdentityCache<'_>,
) -> Result<Vec<Orbit>> {
    let n = laps.iterate();
    let FixedPointSet {
        points,
        identity_segments,
    } = fixed_point_set(laps);
    if let Some((lo, hi)) = cache
        .primitive_segments(n, &identity_segments)?
        .into_iter()
        .next()
    {
        return Err(Error::IdentitySegment {
            segment: Box::new([lo, hi]),
        });
    }
    Ok(orbits_from_roots(map, n, &points))
}

/// All orbits of least period `n`, ordered by their smallest point.
///
/// Identity laps of `f^n` are allowed only when lower iterates `f^d`, `d | n`,
/// are already the identity there, so that their interior carries no point of
/// least period `n`; otherwise the orbits form a continuum and
/// [`Error::IdentitySegment`] is returned.
pub fn enumerate_orbits(map: &PLMap, n: u64, piece_budget: usize) -> Result<Vec<Orbit>> {
    let laps = iterate_laps(map, n, piece_budget)?;
    let mut cache = IdentityCache::new(map, piece_budget);
    enumerate_from_laps(map, &laps, &mut cache)
}

/// How to pick one orbit among several of the same period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitSelection {
    #[default]
    SmallestMax,
    LargestMin,
}

impl OrbitSelection {
    pub fn pick(self, orbits: Vec<Orbit>) -> Option<Orbit> {
        match self {
            OrbitSelection::SmallestMax => orbits.into_iter().min_by(|a, b| a.max().cmp(b.max())),
            OrbitSelection::LargestMin => orbits.into_iter().max_by(|a, b| a.min().cmp(b.min())),
        }
    }
}

/// The least-period-`n` orbit with the smallest maximum.
pub fn minimal_orbit(map: &PLMap, n: u64, piece_budget: usize) -> Result<Orbit> {
    select_orbit(map, n, OrbitSelection::SmallestMax, piece_budget)
}

pub fn select_orbit(
    map: &PLMap,
    n: u64,
    selection: OrbitSelection,
    piece_budget: usize,
) -> Result<Orbit> {
    let orbits = enumerate_orbits(map, n, piece_budget)?;
    selection
        .pick(orbits)
        .ok_or(Error::NoSuchOrbit { period: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::tent;
    use crate::laps::DEFAULT_PIECE_BUDGET;
    use crate::rational::q;

    const B: usize = DEFAULT_PIECE_BUDGET;

    fn pts(o: &Orbit) -> Vec<Rational> {
        o.points().to_vec()
    }

    #[test]
    fn least_period_examples() {
        let t = tent();
        assert_eq!(least_period(&t, &q(2, 3), 6).unwrap(), 1);
        assert_eq!(least_period(&t, &q(2, 7), 3).unwrap(), 3);
        assert_eq!(least_period(&t, &q(2, 5), 4).unwrap(), 2);
        assert!(matches!(
            least_period(&t, &q(2, 7), 2),
            Err(Error::NotPeriodic { .. })
        ));
        assert!(matches!(
            least_period(&t, &q(1, 3), 5),
            Err(Error::NotPeriodic { .. })
        ));
    }

    #[test]
    fn tent_orbits_of_period_three() {
        let orbits = enumerate_orbits(&tent(), 3, B).unwrap();
        assert_eq!(orbits.len(), 2);
        assert_eq!(pts(&orbits[0]), vec![q(2, 9), q(4, 9), q(8, 9)]);
        assert_eq!(pts(&orbits[1]), vec![q(2, 7), q(4, 7), q(6, 7)]);
        assert_eq!(orbits[1].successor(), &[1, 2, 0]);
        assert_eq!(orbits[0].successor(), &[1, 2, 0]);
    }

    #[test]
    fn tent_fixed_orbits() {
        let orbits = enumerate_orbits(&tent(), 1, B).unwrap();
        let all: Vec<_> = orbits.iter().map(pts).collect();
        assert_eq!(all, vec![vec![q(0, 1)], vec![q(2, 3)]]);
    }

    #[test]
    fn constant_map_has_no_period_two() {
        let c = PLMap::constant(q(0, 1), q(1, 1), q(1, 3)).unwrap();
        assert!(enumerate_orbits(&c, 2, B).unwrap().is_empty());
        assert_eq!(
            minimal_orbit(&c, 2, B),
            Err(Error::NoSuchOrbit { period: 2 })
        );
    }

    #[test]
    fn minimal_orbits_of_tent() {
        let t = tent();
        assert_eq!(
            pts(&minimal_orbit(&t, 3, B).unwrap()),
            vec![q(2, 7), q(4, 7), q(6, 7)]
        );
        assert_eq!(pts(&minimal_orbit(&t, 1, B).unwrap()), vec![q(0, 1)]);
        assert_eq!(
            pts(&minimal_orbit(&t, 2, B).unwrap()),
            vec![q(2, 5), q(4, 5)]
        );
    }

    #[test]
    fn largest_min_alternative() {
        let o = select_orbit(&tent(), 3, OrbitSelection::LargestMin, B).unwrap();
        assert_eq!(pts(&o), vec![q(2, 7), q(4, 7), q(6, 7)]);
    }

    #[test]
    fn identity_map_continuum() {
        let id = PLMap::identity(q(0, 1), q(1, 1)).unwrap();
        assert!(matches!(
            enumerate_orbits(&id, 1, B),
            Err(Error::IdentitySegment { .. })
        ));
        // every point is fixed, so nothing has least period 2
        assert!(enumerate_orbits(&id, 2, B).unwrap().is_empty());
    }

    #[test]
    fn involution_has_continuum_of_period_two() {
        let flip = PLMap::new(vec![(q(0, 1), q(1, 1)), (q(1, 1), q(0, 1))]).unwrap();
        assert_eq!(enumerate_orbits(&flip, 1, B).unwrap().len(), 1);
        assert!(matches!(
            enumerate_orbits(&flip, 2, B),
            Err(Error::IdentitySegment { .. })
        ));
        assert!(enumerate_orbits(&flip, 4, B).unwrap().is_empty());
    }

    #[test]
    fn orbit_from_points_validates() {
        let t = tent();
        let o = Orbit::from_points(&t, vec![q(6, 7), q(2, 7), q(4, 7)]).unwrap();
        assert_eq!(o.successor(), &[1, 2, 0]);
        assert!(o.is_orbit_of(&t));
        assert!(Orbit::from_points(&t, vec![q(2, 7), q(4, 7)]).is_err());
        // two fixed points are not one orbit
        assert!(Orbit::from_points(&t, vec![q(0, 1), q(2, 3)]).is_err());
    }
}
