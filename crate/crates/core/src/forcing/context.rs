use serde::Serialize;

use crate::error::{Error, Result};
use crate::laps::DEFAULT_PIECE_BUDGET;
use crate::orbits::Orbit;
use crate::plmap::PLMap;
use crate::rational::Rational;
use crate::search::{extremal_fixed_point, extremal_level_point, Side};

/// Distinguished points attached to a periodic orbit `P` of period `m >= 3`.
///
/// All extremal choices are exact roots over lap decompositions:
///
/// * `b`: the orbit point with `f(b) = min P`
/// * `v`: the largest `x ∈ [min P, b]` with `f(x) = b`
/// * `z`: the smallest fixed point of `f` in `[v, b]`
/// * `z0`: the smallest fixed point of `f²` in `[v, b]`
/// * `y`: the largest fixed point of `f²` in `[min P, v]`
/// * `d`: the largest `x ∈ [min P, y]` with `f²(x) = z0`; guaranteed only for
///   odd `m`
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitContext {
    pub period: usize,
    pub min_p: Rational,
    pub max_p: Rational,
    pub b: Rational,
    pub v: Rational,
    pub z: Rational,
    pub z0: Rational,
    pub y: Rational,
    pub d: Option<Rational>,
}

fn missing(what: &str) -> Error {
    Error::WitnessNotFound(what.to_owned())
}

pub fn orbit_context(map: &PLMap, p: &Orbit) -> Result<OrbitContext> {
    orbit_context_with_budget(map, p, DEFAULT_PIECE_BUDGET)
}

pub fn orbit_context_with_budget(map: &PLMap, p: &Orbit, budget: usize) -> Result<OrbitContext> {
    if p.period() < 3 {
        return Err(Error::MalformedOrbit(format!(
            "period {} is below 3",
            p.period()
        )));
    }
    if !p.is_orbit_of(map) {
        return Err(Error::MalformedOrbit(
            "points are not an orbit of the map".into(),
        ));
    }
    let min_p = p.min().clone();
    let max_p = p.max().clone();
    let b_index = p
        .successor()
        .iter()
        .position(|&s| s == 0)
        .expect("successor is a permutation");
    let b = p.points()[b_index].clone();

    let v = extremal_level_point(
        map,
        1,
        b.clone(),
        (min_p.clone(), b.clone()),
        Side::Max,
        budget,
    )?
    .ok_or_else(|| missing("no v in [min P, b] with f(v) = b"))?;
    let z = extremal_fixed_point(map, 1, (v.clone(), b.clone()), Side::Min, budget)?
        .ok_or_else(|| missing("no fixed point in [v, b]"))?;
    let z0 = extremal_fixed_point(map, 2, (v.clone(), b.clone()), Side::Min, budget)?
        .ok_or_else(|| missing("no fixed point of f² in [v, b]"))?;
    let y = extremal_fixed_point(map, 2, (min_p.clone(), v.clone()), Side::Max, budget)?
        .ok_or_else(|| missing("no fixed point of f² in [min P, v]"))?;
    let d = extremal_level_point(
        map,
        2,
        z0.clone(),
        (min_p.clone(), y.clone()),
        Side::Max,
        budget,
    )?;

    let ctx = OrbitContext {
        period: p.period(),
        min_p,
        max_p,
        b,
        v,
        z,
        z0,
        y,
        d,
    };
    ctx.check(map)?;
    Ok(ctx)
}

impl OrbitContext {
    /// Verifies `min P = f²(v) < v < z0 <= z < b`, `f(x) > x` on `[v, z0)` at
    /// every breakpoint, and the defining equations of `y` and `d`.
    fn check(&self, map: &PLMap) -> Result<()> {
        let fail = |what: &str| {
            Err(Error::PreconditionViolated(format!(
                "orbit context: {what}"
            )))
        };
        if map.eval_iter(&self.v, 2)? != self.min_p {
            return fail("f²(v) != min P");
        }
        if !(self.min_p < self.v && self.v < self.z0 && self.z0 <= self.z && self.z < self.b) {
            return fail("min P < v < z0 <= z < b does not hold");
        }
        let probes = std::iter::once(&self.v).chain(map.interior_breakpoints(&self.v, &self.z0));
        for x in probes {
            if map.eval(x)? <= *x {
                return fail("f(x) > x fails on [v, z0)");
            }
        }
        if map.eval_iter(&self.y, 2)? != self.y {
            return fail("f²(y) != y");
        }
        if let Some(d) = &self.d {
            if map.eval_iter(d, 2)? != self.z0 {
                return fail("f²(d) != z0");
            }
        }
        Ok(())
    }
}
