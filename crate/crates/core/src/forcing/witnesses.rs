//! Explicit periodic points forced by an orbit: cycle realization in the
//! covering graph, the even-period points, the extremal-root family built from
//! an odd orbit, and the all-periods witnesses of the one-point criterion.

use std::collections::BTreeMap;

use serde::Serialize;

use super::context::{orbit_context_with_budget, OrbitContext};
use super::graph::cover_graph;
use crate::error::{Error, Result};
use crate::orbits::{least_period, Orbit};
use crate::plmap::PLMap;
use crate::rational::Rational;
use crate::search::{Interval, RootSearch, Side, Target};

/// The leftmost `x` with `f^i(x) ∈ I_{walk[i]}` for every `i` and
/// `f^len(x) = x`, where `I_j` are the gaps of `P`.
///
/// The walk must be closed in the covering graph of `P`, and every step must
/// also be a covering under the actual map.
pub fn realize_cycle(map: &PLMap, p: &Orbit, walk: &[usize], budget: usize) -> Result<Rational> {
    let graph = cover_graph(p);
    if !graph.is_closed_walk(walk) {
        return Err(Error::NotACycle {
            walk: walk.to_vec(),
        });
    }
    for i in 0..walk.len() {
        let (from, to) = (walk[i], walk[(i + 1) % walk.len()]);
        let (a, b) = &graph.intervals[from];
        let (lo, hi) = map.image(a, b);
        let (c, d) = &graph.intervals[to];
        if &lo > c || &hi < d {
            return Err(Error::CoverageFailure { from, to });
        }
    }
    let constraints: Vec<Option<Interval>> = walk
        .iter()
        .map(|&j| Some(graph.intervals[j].clone()))
        .collect();
    let window = graph.intervals[walk[0]].clone();
    RootSearch::new(map, walk.len(), window, Target::Fixed, Side::Min)
        .with_itinerary(constraints)
        .with_budget(budget)
        .extremal()?
        .ok_or_else(|| Error::WitnessNotFound(format!("no point realizes walk {walk:?}")))
}

fn require_odd(p: &Orbit) -> Result<u64> {
    let m = p.period() as u64;
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::PreconditionViolated(format!(
            "orbit period {m} is not odd and >= 3"
        )));
    }
    Ok(m)
}

/// A point of least period `2n + 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvenPeriodWitness {
    pub n: u64,
    pub point: Rational,
    pub period: u64,
    /// `f^{2i}(w) < w` for `1 <= i <= n`.
    pub strict_descent: bool,
    /// Set when the walk `I1 I1` only realizes a fixed point of `f` and the
    /// period-2 point `y` of the orbit context is returned instead.
    pub fallback: bool,
}

/// Realizes the walk `I1 (I0)^n` under `f²`, with `I0 = [min P, v]` and
/// `I1 = [v, z0]`, as a point of least period `2n + 2` under `f`.
pub fn even_period_witness(
    map: &PLMap,
    p: &Orbit,
    n: u64,
    budget: usize,
) -> Result<EvenPeriodWitness> {
    require_odd(p)?;
    let ctx = orbit_context_with_budget(map, p, budget)?;
    even_period_witness_in(map, &ctx, n, budget)
}

pub(crate) fn even_period_witness_in(
    map: &PLMap,
    ctx: &OrbitContext,
    n: u64,
    budget: usize,
) -> Result<EvenPeriodWitness> {
    let period = 2 * n + 2;
    let i0: Interval = (ctx.min_p.clone(), ctx.v.clone());
    let i1: Interval = (ctx.v.clone(), ctx.z0.clone());
    let steps = period as usize;
    let mut constraints = vec![None; steps];
    constraints[0] = Some(i1.clone());
    for i in 1..=n as usize {
        constraints[2 * i] = Some(i0.clone());
    }
    let found = RootSearch::new(map, steps, i1, Target::Fixed, Side::Min)
        .with_itinerary(constraints)
        .with_budget(budget)
        .find(|x| least_period(map, x, period) == Ok(period))?;
    let (point, fallback) = match found {
        Some(w) => (w, false),
        // the only f²-fixed point of [v, z0] may be z0 = z itself
        None if n == 0 => (ctx.y.clone(), true),
        None => {
            return Err(Error::WitnessNotFound(format!(
                "no period-{period} point realizes I1 (I0)^{n}"
            )))
        }
    };
    let mut strict_descent = true;
    let mut cur = point.clone();
    for _ in 1..=n {
        cur = map.eval_iter(&cur, 2)?;
        strict_descent &= cur < point;
    }
    Ok(EvenPeriodWitness {
        n,
        point,
        period,
        strict_descent,
        fallback,
    })
}

/// Witnesses built from an odd orbit: a period-2 point `y`, a
/// period-`(m+2)` point and points `c(n)` of least period `2n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnifiedWitnesses {
    pub context: OrbitContext,
    pub y: Rational,
    /// `min { y <= x <= v : f^{m+2}(x) = x }`
    pub p_m2: Rational,
    /// `c[n] = min { d <= x <= y : f^{2n}(x) = x }`
    pub c: BTreeMap<u64, Rational>,
}

pub fn unified_witnesses(
    map: &PLMap,
    p: &Orbit,
    max_n: u64,
    budget: usize,
) -> Result<UnifiedWitnesses> {
    let m = require_odd(p)?;
    let context = orbit_context_with_budget(map, p, budget)?;
    let y = context.y.clone();
    if least_period(map, &y, 2)? != 2 {
        return Err(Error::WitnessNotFound("y is fixed by f".into()));
    }

    let steps = (m + 2) as usize;
    let p_m2 = RootSearch::new(
        map,
        steps,
        (y.clone(), context.v.clone()),
        Target::Fixed,
        Side::Min,
    )
    .with_budget(budget)
    .extremal()?
    .ok_or_else(|| Error::WitnessNotFound(format!("no fixed point of f^{steps} in [y, v]")))?;
    if least_period(map, &p_m2, m + 2)? != m + 2 {
        return Err(Error::WitnessNotFound(format!(
            "p_{} has a smaller period",
            m + 2
        )));
    }

    let d = context
        .d
        .clone()
        .ok_or_else(|| Error::WitnessNotFound("no d with f²(d) = z0".into()))?;
    let mut c = BTreeMap::new();
    let mut prev = y.clone();
    for n in 1..=max_n {
        let point = RootSearch::new(
            map,
            2 * n as usize,
            (d.clone(), y.clone()),
            Target::Fixed,
            Side::Min,
        )
        .with_budget(budget)
        .extremal()?
        .ok_or_else(|| {
            Error::WitnessNotFound(format!("no fixed point of f^{} in [d, y]", 2 * n))
        })?;
        if least_period(map, &point, 2 * n)? != 2 * n {
            return Err(Error::WitnessNotFound(format!(
                "c_{} has a smaller period",
                2 * n
            )));
        }
        let ordered = if n == 1 { point <= prev } else { point < prev };
        if !ordered || point <= d {
            return Err(Error::WitnessNotFound(format!(
                "c_{} breaks d < … < c_2 <= y",
                2 * n
            )));
        }
        prev = point.clone();
        c.insert(n, point);
    }
    Ok(UnifiedWitnesses {
        context,
        y,
        p_m2,
        c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `f(v) < v < z <= f^k(v)`
    Direct,
    /// `f^k(v) <= z < v < f(v)`
    Mirrored,
}

/// Points of every least period `1..=N` forced by a point `v` that is pushed
/// past a fixed point `z`. All fields are in the map's own coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma1Witness {
    pub v: Rational,
    pub z: Rational,
    pub k: u64,
    pub orientation: Orientation,
    /// The fixed point nearest to `v` between `v` and `z`; the search
    /// window ends here.
    pub z_near: Rational,
    /// Nearest point to `v` on the far side from `z` with `f(d) = z_near`.
    pub d: Rational,
    /// Extreme value of `f` over the window between `d` and `z_near`.
    pub s: Rational,
    pub p: BTreeMap<u64, Rational>,
}

pub fn lemma1_witnesses(
    map: &PLMap,
    v: &Rational,
    z: &Rational,
    k: u64,
    max_n: u64,
    budget: usize,
) -> Result<Lemma1Witness> {
    let violated = |what: String| Err(Error::PreconditionViolated(what));
    if k < 2 {
        return violated(format!("k = {k} must be at least 2"));
    }
    let fz = map.eval(z)?;
    if fz != *z {
        return violated(format!("f(z) = {fz} != z = {z}"));
    }
    let fv = map.eval(v)?;
    let fkv = map.eval_iter(v, k)?;
    let orientation = if fv < *v && v < z && z <= &fkv {
        Orientation::Direct
    } else if &fkv <= z && z < v && v < &fv {
        Orientation::Mirrored
    } else {
        return violated(format!(
            "neither f(v) < v < z <= f^k(v) nor f^k(v) <= z < v < f(v) holds (f(v) = {fv}, f^k(v) = {fkv})"
        ));
    };

    // work in the direct orientation
    let (g, gv, gz) = match orientation {
        Orientation::Direct => (map.clone(), v.clone(), z.clone()),
        Orientation::Mirrored => (map.mirrored(), map.reflect_point(v), map.reflect_point(z)),
    };
    let z_near = RootSearch::new(&g, 1, (gv.clone(), gz.clone()), Target::Fixed, Side::Min)
        .with_budget(budget)
        .extremal()?
        .expect("z itself is a fixed point in the window");
    let d = RootSearch::new(
        &g,
        1,
        (g.lo().clone(), gv.clone()),
        Target::Level(z_near.clone()),
        Side::Max,
    )
    .with_budget(budget)
    .extremal()?
    .ok_or_else(|| Error::WitnessNotFound("no d <= v with f(d) = z".into()))?;
    let s = g.image(&d, &z_near).0;
    if s > d {
        return Err(Error::WitnessNotFound(format!(
            "min f over [d, z] is {s} > d = {d}"
        )));
    }
    let mut p = BTreeMap::new();
    for n in 1..=max_n {
        let pn = RootSearch::new(
            &g,
            n as usize,
            (d.clone(), z_near.clone()),
            Target::Fixed,
            Side::Min,
        )
        .with_budget(budget)
        .extremal()?
        .ok_or_else(|| Error::WitnessNotFound(format!("no fixed point of f^{n} in [d, z]")))?;
        if least_period(&g, &pn, n)? != n {
            return Err(Error::WitnessNotFound(format!(
                "p_{n} has a smaller period"
            )));
        }
        p.insert(n, pn);
    }

    let back = |x: Rational| match orientation {
        Orientation::Direct => x,
        Orientation::Mirrored => map.reflect_point(&x),
    };
    Ok(Lemma1Witness {
        v: v.clone(),
        z: z.clone(),
        k,
        orientation,
        z_near: back(z_near),
        d: back(d),
        s: back(s),
        p: p.into_iter().map(|(n, x)| (n, back(x))).collect(),
    })
}
