//! Explicit maps and map surgeries: the tent map, band clamping, the middle
//! reflection, flip insertion, the truncated tent maps `T_n` and finite-depth
//! approximants of `T_∞`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forcing::{orbit_context, unified_witnesses};
use crate::orbits::{enumerate_orbits, select_orbit, Orbit, OrbitSelection};
use crate::plmap::PLMap;
use crate::rational::{q, Rational};
use crate::search::{RootSearch, Side, Target};

/// `T(x) = 1 - |2x - 1|` on `[0, 1]`.
pub fn tent() -> PLMap {
    PLMap::new(vec![
        (q(0, 1), q(0, 1)),
        (q(1, 2), q(1, 1)),
        (q(1, 1), q(0, 1)),
    ])
    .expect("tent map is valid")
}

/// A clamp band `[lo, hi]` applied to the values of a source map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationSpec {
    lo: Rational,
    hi: Rational,
    source: PLMap,
}

impl TruncationSpec {
    /// The band may be degenerate (`lo == hi`), which yields a constant map.
    pub fn new(source: PLMap, lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::PreconditionViolated(format!(
                "clamp band [{lo}, {hi}] is empty"
            )));
        }
        if !source.contains(&lo) || !source.contains(&hi) {
            return Err(Error::PreconditionViolated(format!(
                "clamp band [{lo}, {hi}] leaves the domain"
            )));
        }
        Ok(TruncationSpec { lo, hi, source })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn source(&self) -> &PLMap {
        &self.source
    }
}

/// Nodes of `map` restricted to `[a, b]`, endpoints included.
fn restricted_nodes(map: &PLMap, a: &Rational, b: &Rational) -> Vec<(Rational, Rational)> {
    let mut out = vec![(a.clone(), map.eval_in_domain(a))];
    if a < b {
        for (x, y) in map.nodes() {
            if x > a && x < b {
                out.push((x.clone(), y.clone()));
            }
        }
        out.push((b.clone(), map.eval_in_domain(b)));
    }
    out
}

/// Clamps the values of a node chain to `[floor, ceil]` (either side may be
/// open), inserting the exact crossing points.
fn clamp_nodes(
    nodes: &[(Rational, Rational)],
    floor: Option<&Rational>,
    ceil: Option<&Rational>,
) -> Vec<(Rational, Rational)> {
    let clamp = |y: &Rational| -> Rational {
        match (floor, ceil) {
            (Some(f), _) if y < f => f.clone(),
            (_, Some(c)) if y > c => c.clone(),
            _ => y.clone(),
        }
    };
    let mut out = vec![(nodes[0].0.clone(), clamp(&nodes[0].1))];
    for w in nodes.windows(2) {
        let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
        if y0 != y1 {
            let mut levels: Vec<&Rational> = floor
                .into_iter()
                .chain(ceil)
                .filter(|c| {
                    let (lo, hi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
                    *c > lo && *c < hi
                })
                .collect();
            levels.sort();
            if y0 > y1 {
                levels.reverse();
            }
            for c in levels {
                let x = x0 + (c - y0) * (x1 - x0) / (y1 - y0);
                out.push((x, c.clone()));
            }
        }
        out.push((x1.clone(), clamp(y1)));
    }
    out
}

fn assemble(parts: Vec<Vec<(Rational, Rational)>>) -> PLMap {
    let mut xs: Vec<Rational> = Vec::new();
    let mut ys: Vec<Rational> = Vec::new();
    for part in parts {
        for (x, y) in part {
            if xs.last() == Some(&x) {
                debug_assert_eq!(ys.last(), Some(&y), "pieces must join continuously");
                continue;
            }
            xs.push(x);
            ys.push(y);
        }
    }
    PLMap::from_parts(xs, ys)
}

/// `x ↦ clamp(source(x), lo, hi)`.
pub fn clamp_band(spec: &TruncationSpec) -> PLMap {
    let src = spec.source();
    let nodes: Vec<_> = src.nodes().map(|(x, y)| (x.clone(), y.clone())).collect();
    let clamped = clamp_nodes(&nodes, Some(&spec.lo), Some(&spec.hi));
    assemble(vec![clamped])
}

/// Replaces the map on `[z1, z2]` by the reflection `x ↦ z1 + z2 - x`, and
/// outside it by `max(f, z2)` on the left and `min(f, z1)` on the right, so
/// the two sides are swapped and `g²` is the identity on `[z1, z2]`.
pub fn reflect_middle_surgery(map: &PLMap, z1: &Rational, z2: &Rational) -> Result<PLMap> {
    if z1 > z2 {
        return Err(Error::PreconditionViolated(format!(
            "z1 = {z1} exceeds z2 = {z2}"
        )));
    }
    for z in [z1, z2] {
        if map.eval(z)? != *z {
            return Err(Error::NotFixed(z.clone()));
        }
    }
    let (lo, hi) = (map.lo().clone(), map.hi().clone());
    let mut parts = Vec::new();
    if &lo < z1 {
        parts.push(clamp_nodes(&restricted_nodes(map, &lo, z1), Some(z2), None));
    }
    parts.push(vec![(z1.clone(), z2.clone()), (z2.clone(), z1.clone())]);
    if z2 < &hi {
        parts.push(clamp_nodes(&restricted_nodes(map, z2, &hi), None, Some(z1)));
    }
    let g = assemble(parts);

    let (l_lo, l_hi) = g.image(&lo, z1);
    let (r_lo, r_hi) = g.image(z2, &hi);
    if &l_lo < z2 || l_hi > hi || r_lo < lo || &r_hi > z1 {
        return Err(Error::PreconditionViolated(
            "reflection surgery failed to swap the sides".into(),
        ));
    }
    for x in [z1.clone(), z1.midpoint(z2), z2.clone()] {
        if g.eval_iter(&x, 2)? != x {
            return Err(Error::PreconditionViolated(format!("g² moves {x}")));
        }
    }
    Ok(g)
}

/// Replaces the map on `[t, u]` by the involution `x ↦ t + u - x`. Requires
/// `f(t) = u` and `f(u) = t` for continuity.
pub fn insert_flip(map: &PLMap, t: &Rational, u: &Rational) -> Result<PLMap> {
    if t == u {
        return Ok(map.clone());
    }
    if t > u {
        return Err(Error::PreconditionViolated(format!(
            "flip interval [{t}, {u}] is reversed"
        )));
    }
    if map.eval(t)? != *u {
        return Err(Error::ContinuityError {
            endpoint: t.clone(),
        });
    }
    if map.eval(u)? != *t {
        return Err(Error::ContinuityError {
            endpoint: u.clone(),
        });
    }
    let parts = vec![
        restricted_nodes(map, map.lo(), t),
        vec![(t.clone(), u.clone()), (u.clone(), t.clone())],
        restricted_nodes(map, u, map.hi()),
    ];
    Ok(assemble(parts))
}

/// A truncated tent map together with the orbit that fixed its band.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Truncation {
    #[serde(skip)]
    pub map: PLMap,
    pub orbit: Orbit,
    pub band: (Rational, Rational),
}

/// `T_n`: the tent map clamped to the band of its least-period-`n` orbit with
/// the smallest maximum.
pub fn build_tn(n: u64, piece_budget: usize) -> Result<Truncation> {
    build_tn_with(n, OrbitSelection::SmallestMax, piece_budget)
}

pub fn build_tn_with(n: u64, selection: OrbitSelection, piece_budget: usize) -> Result<Truncation> {
    let t = tent();
    let orbit = select_orbit(&t, n, selection, piece_budget)?;
    let band = (orbit.min().clone(), orbit.max().clone());
    let map = clamp_band(&TruncationSpec::new(t, band.0.clone(), band.1.clone())?);
    Ok(Truncation { map, orbit, band })
}

/// A finite-depth approximant of `T_∞`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TinfApprox {
    #[serde(skip)]
    pub map: PLMap,
    pub q0: Rational,
    pub q1: Rational,
    /// `Q_3, Q_6, …, Q_{3·2^depth}`, each inside the band of the previous one.
    pub chain: Vec<Orbit>,
}

/// Builds the nested orbit chain `Q_3, Q_6, Q_12, …` of the tent map up to
/// period `3·2^depth`, each the smallest-maximum orbit inside the previous
/// band, and clamps the tent map to the last band.
pub fn build_tinf_approx(depth: u32, piece_budget: usize) -> Result<TinfApprox> {
    let t = tent();
    let mut chain = vec![select_orbit(
        &t,
        3,
        OrbitSelection::SmallestMax,
        piece_budget,
    )?];
    let mut period = 3u64;
    for _ in 0..depth {
        let prev = chain.last().expect("chain is never empty");
        let spec = TruncationSpec::new(t.clone(), prev.min().clone(), prev.max().clone())?;
        let clamped = clamp_band(&spec);
        period *= 2;
        // tent orbits inside the band are the clamped orbits on which the
        // clamp is inactive
        let inside: Vec<Orbit> = enumerate_orbits(&clamped, period, piece_budget)?
            .into_iter()
            .filter(|o| {
                o.points()
                    .iter()
                    .all(|x| clamped.eval_in_domain(x) == t.eval_in_domain(x))
            })
            .collect();
        let next = OrbitSelection::SmallestMax
            .pick(inside)
            .ok_or(Error::NoSuchOrbit { period })?;
        chain.push(next);
    }
    let last = chain.last().expect("chain is never empty");
    let (q0, q1) = (last.min().clone(), last.max().clone());
    let map = clamp_band(&TruncationSpec::new(t, q0.clone(), q1.clone())?);
    Ok(TinfApprox { map, q0, q1, chain })
}

/// Endpoints used by the flip-and-clamp surgery.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryParams {
    pub z1: Rational,
    pub z2: Rational,
    pub t: Rational,
    pub u: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipClamp {
    pub params: SurgeryParams,
    #[serde(skip)]
    pub flipped: PLMap,
    /// Period-`m` orbit of the flipped map with the smallest maximum.
    pub r_orbit: Orbit,
    /// Period-`(m+2)` orbit inside `(min R, max R)`.
    pub w_orbit: Orbit,
    #[serde(skip)]
    pub clamped: PLMap,
}

/// Removes the period-`m` orbits of `map` while keeping a period-`(m+2)`
/// orbit: optionally flip on `[t, u]`, take the minimal period-`m` orbit `R`
/// of the result, find a period-`(m+2)` orbit `W` inside it and clamp to
/// `[min W, max W]`.
pub fn flip_and_clamp(map: &PLMap, p: &Orbit, piece_budget: usize) -> Result<FlipClamp> {
    let m = p.period() as u64;
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::PreconditionViolated(format!(
            "orbit period {m} is not odd and >= 3"
        )));
    }
    let ctx = orbit_context(map, p)?;
    let z1 = ctx.z.clone();
    let z2 = RootSearch::new(
        map,
        1,
        (ctx.v.clone(), ctx.b.clone()),
        Target::Fixed,
        Side::Max,
    )
    .with_budget(piece_budget)
    .extremal()?
    .ok_or_else(|| Error::WitnessNotFound("no fixed point in [v, b]".into()))?;
    let two_cycle = RootSearch::new(
        map,
        2,
        (ctx.v.clone(), z1.clone()),
        Target::Fixed,
        Side::Min,
    )
    .with_budget(piece_budget)
    .find(|x| crate::orbits::least_period(map, x, 2) == Ok(2))?;
    let (t, u, flipped) = match two_cycle {
        Some(t) => {
            let u = map.eval(&t)?;
            let h = insert_flip(map, &t, &u)?;
            (t, u, h)
        }
        None => (ctx.v.clone(), z2.clone(), map.clone()),
    };
    let r_orbit = select_orbit(&flipped, m, OrbitSelection::SmallestMax, piece_budget)?;
    let w = unified_witnesses(&flipped, &r_orbit, 1, piece_budget)?;
    let w_orbit = Orbit::of_point(&flipped, &w.p_m2, m + 2)?;
    if w_orbit.min() <= r_orbit.min() || w_orbit.max() >= r_orbit.max() {
        return Err(Error::WitnessNotFound(
            "period-(m+2) orbit is not inside (min R, max R)".into(),
        ));
    }
    let spec = TruncationSpec::new(
        flipped.clone(),
        w_orbit.min().clone(),
        w_orbit.max().clone(),
    )?;
    let clamped = clamp_band(&spec);
    Ok(FlipClamp {
        params: SurgeryParams { z1, z2, t, u },
        flipped,
        r_orbit,
        w_orbit,
        clamped,
    })
}
