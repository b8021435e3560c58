//! Extremal roots of `f^k(x) = x` or `f^k(x) = c` over a window, optionally
//! constrained by an itinerary.
//!
//! Instead of materialising every lap of `f^k`, the search descends the tree of
//! laps depth first: a node is an interval on which `f^j` is affine, and its
//! children are the pieces cut out by pulling back the breakpoints of `f`.
//! Children are visited in increasing (or decreasing) order of `x`, so leaves
//! are met in order and the first accepted root is the extremal one. A node is
//! pruned when the exact forward image of its `f^j`-image under the remaining
//! `k - j` steps cannot reach the target.

use crate::error::{Error, Result};
use crate::plmap::PLMap;
use crate::rational::Rational;

pub type Interval = (Rational, Rational);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    /// `f^k(x) = x`
    Fixed,
    /// `f^k(x) = c`
    Level(Rational),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Min,
    Max,
}

#[derive(Debug, Clone)]
pub struct RootSearch<'a> {
    map: &'a PLMap,
    steps: usize,
    window: Interval,
    constraints: Vec<Option<Interval>>,
    target: Target,
    side: Side,
    node_budget: usize,
}

struct Frame {
    depth: usize,
    x0: Rational,
    x1: Rational,
    y0: Rational,
    y1: Rational,
}

fn intersect(a: &Interval, b: &Interval) -> Option<Interval> {
    let lo = a.0.max_ref(&b.0).clone();
    let hi = a.1.min_ref(&b.1).clone();
    (lo <= hi).then_some((lo, hi))
}

impl<'a> RootSearch<'a> {
    pub fn new(map: &'a PLMap, steps: usize, window: Interval, target: Target, side: Side) -> Self {
        RootSearch {
            map,
            steps,
            window,
            constraints: Vec::new(),
            target,
            side,
            node_budget: crate::laps::DEFAULT_PIECE_BUDGET,
        }
    }

    /// Requires `f^j(x) ∈ constraints[j]` for every `j` with a `Some` entry.
    pub fn with_itinerary(mut self, constraints: Vec<Option<Interval>>) -> Self {
        self.constraints = constraints;
        self
    }

    pub fn with_budget(mut self, node_budget: usize) -> Self {
        self.node_budget = node_budget;
        self
    }

    fn constraint(&self, j: usize) -> Option<&Interval> {
        self.constraints.get(j).and_then(Option::as_ref)
    }

    /// Restricts the frame to the part whose `f^depth`-image meets the
    /// constraint at that depth.
    fn restrict(&self, f: Frame) -> Option<Frame> {
        let Some((c0, c1)) = self.constraint(f.depth) else {
            return Some(f);
        };
        if f.y0 == f.y1 {
            return (&f.y0 >= c0 && &f.y0 <= c1).then_some(f);
        }
        let (ylo, yhi) = if f.y0 < f.y1 {
            (&f.y0, &f.y1)
        } else {
            (&f.y1, &f.y0)
        };
        let (lo, hi) = intersect(&(ylo.clone(), yhi.clone()), &(c0.clone(), c1.clone()))?;
        let scale = (&f.x1 - &f.x0) / (&f.y1 - &f.y0);
        let at = |y: &Rational| &f.x0 + (y - &f.y0) * &scale;
        let (xa, xb, ya, yb) = if f.y0 < f.y1 {
            (at(&lo), at(&hi), lo, hi)
        } else {
            (at(&hi), at(&lo), hi, lo)
        };
        Some(Frame {
            depth: f.depth,
            x0: xa,
            x1: xb,
            y0: ya,
            y1: yb,
        })
    }

    /// Whether some point of the frame can still satisfy the target, judged by
    /// exact forward images of its current image interval.
    fn reachable(&self, f: &Frame) -> bool {
        let mut image = if f.y0 <= f.y1 {
            (f.y0.clone(), f.y1.clone())
        } else {
            (f.y1.clone(), f.y0.clone())
        };
        for j in f.depth..self.steps {
            if let Some(c) = self.constraint(j) {
                match intersect(&image, c) {
                    Some(i) => image = i,
                    None => return false,
                }
            }
            image = self.map.image(&image.0, &image.1);
        }
        match &self.target {
            Target::Fixed => intersect(&image, &(f.x0.clone(), f.x1.clone())).is_some(),
            Target::Level(c) => c >= &image.0 && c <= &image.1,
        }
    }

    /// Solutions on a leaf (where `f^steps` is affine), in visiting order.
    fn leaf_candidates(&self, f: &Frame) -> Vec<Rational> {
        let (h0, h1) = match &self.target {
            Target::Fixed => (&f.y0 - &f.x0, &f.y1 - &f.x1),
            Target::Level(c) => (&f.y0 - c, &f.y1 - c),
        };
        let mut out = if f.x0 == f.x1 {
            if h0.is_zero() {
                vec![f.x0.clone()]
            } else {
                vec![]
            }
        } else if h0.is_zero() && h1.is_zero() {
            // a continuum of solutions: offer both ends and an interior point
            vec![f.x0.clone(), f.x0.midpoint(&f.x1), f.x1.clone()]
        } else if h0.is_zero() {
            vec![f.x0.clone()]
        } else if h1.is_zero() {
            vec![f.x1.clone()]
        } else if h0.signum() != h1.signum() {
            vec![&f.x0 + &h0 * (&f.x1 - &f.x0) / (&h0 - &h1)]
        } else {
            vec![]
        };
        if self.side == Side::Max {
            out.reverse();
        }
        out
    }

    fn children(&self, f: &Frame) -> Vec<Frame> {
        let mut out = Vec::new();
        let depth = f.depth + 1;
        if f.y0 == f.y1 || f.x0 == f.x1 {
            let y = self.map.eval_in_domain(&f.y0);
            let y_end = self.map.eval_in_domain(&f.y1);
            out.push(Frame {
                depth,
                x0: f.x0.clone(),
                x1: f.x1.clone(),
                y0: y,
                y1: y_end,
            });
            return out;
        }
        let (lo, hi) = if f.y0 < f.y1 {
            (&f.y0, &f.y1)
        } else {
            (&f.y1, &f.y0)
        };
        let cuts = self.map.interior_breakpoints(lo, hi);
        let scale = (&f.x1 - &f.x0) / (&f.y1 - &f.y0);
        let mut xs = vec![f.x0.clone()];
        let mut ys = vec![f.y0.clone()];
        let mut add = |c: &Rational| {
            xs.push(&f.x0 + (c - &f.y0) * &scale);
            ys.push(c.clone());
        };
        if f.y0 < f.y1 {
            cuts.iter().for_each(&mut add);
        } else {
            cuts.iter().rev().for_each(&mut add);
        }
        xs.push(f.x1.clone());
        ys.push(f.y1.clone());
        let images: Vec<Rational> = ys.iter().map(|y| self.map.eval_in_domain(y)).collect();
        for i in 0..xs.len() - 1 {
            out.push(Frame {
                depth,
                x0: xs[i].clone(),
                x1: xs[i + 1].clone(),
                y0: images[i].clone(),
                y1: images[i + 1].clone(),
            });
        }
        out
    }

    /// The extremal solution accepted by `accept`, scanning in the order given
    /// by the search side.
    pub fn find(&self, mut accept: impl FnMut(&Rational) -> bool) -> Result<Option<Rational>> {
        let (w0, w1) = &self.window;
        if w0 > w1 || !self.map.contains(w0) || !self.map.contains(w1) {
            return Err(Error::PreconditionViolated(format!(
                "search window [{w0}, {w1}] outside the domain"
            )));
        }
        let mut stack = vec![Frame {
            depth: 0,
            x0: w0.clone(),
            x1: w1.clone(),
            y0: w0.clone(),
            y1: w1.clone(),
        }];
        let mut visited = 0usize;
        while let Some(frame) = stack.pop() {
            visited += 1;
            if visited > self.node_budget {
                return Err(Error::BudgetExceeded {
                    needed: visited,
                    budget: self.node_budget,
                });
            }
            let Some(frame) = self.restrict(frame) else {
                continue;
            };
            if !self.reachable(&frame) {
                continue;
            }
            if frame.depth == self.steps {
                for x in self.leaf_candidates(&frame) {
                    if accept(&x) {
                        return Ok(Some(x));
                    }
                }
                continue;
            }
            let mut kids = self.children(&frame);
            // stack pops last-in first, so push in reverse visiting order
            if self.side == Side::Min {
                kids.reverse();
            }
            stack.extend(kids);
        }
        Ok(None)
    }

    pub fn extremal(&self) -> Result<Option<Rational>> {
        self.find(|_| true)
    }
}

/// `min` or `max` of `{ x ∈ window : f^k(x) = x }`.
pub fn extremal_fixed_point(
    map: &PLMap,
    k: usize,
    window: Interval,
    side: Side,
    budget: usize,
) -> Result<Option<Rational>> {
    RootSearch::new(map, k, window, Target::Fixed, side)
        .with_budget(budget)
        .extremal()
}

/// `min` or `max` of `{ x ∈ window : f^k(x) = c }`.
pub fn extremal_level_point(
    map: &PLMap,
    k: usize,
    c: Rational,
    window: Interval,
    side: Side,
    budget: usize,
) -> Result<Option<Rational>> {
    RootSearch::new(map, k, window, Target::Level(c), side)
        .with_budget(budget)
        .extremal()
}
