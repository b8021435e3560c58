//! Continuous piecewise-linear self-maps of a compact interval.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A continuous piecewise-linear map `[lo, hi] -> [lo, hi]`, given by the nodes
/// it interpolates.
///
/// Node abscissae are strictly increasing and span the domain; every ordinate
/// lies in the domain. Adjacent collinear segments are merged on construction,
/// so two maps are equal exactly when their node lists are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
}

impl std::fmt::Debug for PLMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list()
            .entries(self.xs.iter().zip(&self.ys))
            .finish()
    }
}

fn slope(x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational) -> Rational {
    (y1 - y0) / (x1 - x0)
}

/// Drops interior nodes whose two neighbouring segments are collinear.
pub(crate) fn merge_collinear(
    xs: Vec<Rational>,
    ys: Vec<Rational>,
) -> (Vec<Rational>, Vec<Rational>) {
    let mut out_x: Vec<Rational> = Vec::with_capacity(xs.len());
    let mut out_y: Vec<Rational> = Vec::with_capacity(ys.len());
    for (x, y) in xs.into_iter().zip(ys) {
        if out_x.len() >= 2 {
            let n = out_x.len();
            let prev = slope(&out_x[n - 2], &out_y[n - 2], &out_x[n - 1], &out_y[n - 1]);
            let next = slope(&out_x[n - 1], &out_y[n - 1], &x, &y);
            if prev == next {
                out_x.pop();
                out_y.pop();
            }
        }
        out_x.push(x);
        out_y.push(y);
    }
    (out_x, out_y)
}

impl PLMap {
    /// Builds a map from its nodes, checking the self-map invariants and
    /// merging collinear segments.
    pub fn new(nodes: Vec<(Rational, Rational)>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidMap("at least two nodes are required".into()));
        }
        let (xs, ys): (Vec<_>, Vec<_>) = nodes.into_iter().unzip();
        for (i, w) in xs.windows(2).enumerate() {
            if w[0] >= w[1] {
                return Err(Error::InvalidMap(format!(
                    "node abscissae must increase strictly (nodes {} and {})",
                    i,
                    i + 1
                )));
            }
        }
        let (lo, hi) = (&xs[0], &xs[xs.len() - 1]);
        if let Some(i) = ys.iter().position(|y| y < lo || y > hi) {
            return Err(Error::InvalidMap(format!(
                "node {} has value {} outside the domain [{}, {}]",
                i, ys[i], lo, hi
            )));
        }
        let (xs, ys) = merge_collinear(xs, ys);
        Ok(PLMap { xs, ys })
    }

    /// Internal constructor for node lists already known to satisfy the
    /// invariants apart from canonical merging.
    pub(crate) fn from_parts(xs: Vec<Rational>, ys: Vec<Rational>) -> Self {
        debug_assert!(xs.len() >= 2 && xs.len() == ys.len());
        debug_assert!(xs.windows(2).all(|w| w[0] < w[1]));
        let (xs, ys) = merge_collinear(xs, ys);
        PLMap { xs, ys }
    }

    pub fn identity(lo: Rational, hi: Rational) -> Result<Self> {
        PLMap::new(vec![(lo.clone(), lo), (hi.clone(), hi)])
    }

    pub fn constant(lo: Rational, hi: Rational, value: Rational) -> Result<Self> {
        PLMap::new(vec![(lo, value.clone()), (hi, value)])
    }

    pub fn lo(&self) -> &Rational {
        &self.xs[0]
    }

    pub fn hi(&self) -> &Rational {
        &self.xs[self.xs.len() - 1]
    }

    pub fn xs(&self) -> &[Rational] {
        &self.xs
    }

    pub fn ys(&self) -> &[Rational] {
        &self.ys
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.xs.iter().zip(&self.ys)
    }

    pub fn segment_count(&self) -> usize {
        self.xs.len() - 1
    }

    pub fn contains(&self, x: &Rational) -> bool {
        x >= self.lo() && x <= self.hi()
    }

    /// Exact value at `x`.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        if !self.contains(x) {
            return Err(Error::Domain {
                x: x.clone(),
                domain: Box::new([self.lo().clone(), self.hi().clone()]),
            });
        }
        Ok(self.eval_in_domain(x))
    }

    /// `eval` without the domain check; `x` must lie in the domain.
    pub(crate) fn eval_in_domain(&self, x: &Rational) -> Rational {
        // first node index with abscissa >= x
        let i = self.xs.partition_point(|node| node < x);
        if i < self.xs.len() && &self.xs[i] == x {
            return self.ys[i].clone();
        }
        debug_assert!(i > 0 && i < self.xs.len(), "x outside domain");
        let (x0, x1) = (&self.xs[i - 1], &self.xs[i]);
        let (y0, y1) = (&self.ys[i - 1], &self.ys[i]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// `f^n(x)`.
    pub fn eval_iter(&self, x: &Rational, n: u64) -> Result<Rational> {
        let mut cur = self.eval(x)?;
        for _ in 1..n {
            cur = self.eval_in_domain(&cur);
        }
        if n == 0 {
            return Ok(x.clone());
        }
        Ok(cur)
    }

    /// Exact image `f([a, b])` of a subinterval of the domain.
    pub fn image(&self, a: &Rational, b: &Rational) -> (Rational, Rational) {
        debug_assert!(a <= b);
        let fa = self.eval_in_domain(a);
        let fb = self.eval_in_domain(b);
        let (mut lo, mut hi) = if fa <= fb { (fa, fb) } else { (fb, fa) };
        let start = self.xs.partition_point(|x| x <= a);
        for (x, y) in self.xs[start..].iter().zip(&self.ys[start..]) {
            if x >= b {
                break;
            }
            if y < &lo {
                lo = y.clone();
            }
            if y > &hi {
                hi = y.clone();
            }
        }
        (lo, hi)
    }

    /// Breakpoints strictly inside `(a, b)`, ascending.
    pub(crate) fn interior_breakpoints(&self, a: &Rational, b: &Rational) -> &[Rational] {
        let start = self.xs.partition_point(|x| x <= a);
        let end = self.xs.partition_point(|x| x < b);
        if start >= end {
            &[]
        } else {
            &self.xs[start..end]
        }
    }

    /// The conjugate `φ ∘ f ∘ φ` under the reflection `φ(x) = lo + hi - x`.
    pub fn mirrored(&self) -> PLMap {
        let s = self.lo() + self.hi();
        let xs = self.xs.iter().rev().map(|x| &s - x).collect();
        let ys = self.ys.iter().rev().map(|y| &s - y).collect();
        PLMap { xs, ys }
    }

    /// The reflection `x ↦ lo + hi - x` of the domain.
    pub fn reflect_point(&self, x: &Rational) -> Rational {
        self.lo() + self.hi() - x
    }

    pub fn to_file(&self) -> MapFile {
        MapFile {
            domain: [self.lo().clone(), self.hi().clone()],
            nodes: self
                .xs
                .iter()
                .cloned()
                .zip(self.ys.iter().cloned())
                .map(|(x, y)| [x, y])
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("map serialization cannot fail")
    }

    /// Parses the map file format, reporting the position of the first
    /// problem.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: MapFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            position: format!("line {}, column {}", e.line(), e.column()),
            message: {
                let full = e.to_string();
                full.rsplit_once(" at line ")
                    .map_or(full.clone(), |(head, _)| head.to_owned())
            },
        })?;
        file.into_map()
    }
}

/// On-disk form of a [`PLMap`]:
/// `{"domain": ["0","1"], "nodes": [["0","0"],["1/2","1"],["1","0"]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub domain: [Rational; 2],
    pub nodes: Vec<[Rational; 2]>,
}

impl MapFile {
    pub fn into_map(self) -> Result<PLMap> {
        let parse_err = |position: String, message: String| Error::Parse { position, message };
        let [lo, hi] = self.domain;
        if lo >= hi {
            return Err(parse_err(
                "domain".into(),
                format!("empty domain [{lo}, {hi}]"),
            ));
        }
        if self.nodes.len() < 2 {
            return Err(parse_err(
                "nodes".into(),
                "at least two nodes are required".into(),
            ));
        }
        if self.nodes[0][0] != lo {
            return Err(parse_err(
                "nodes[0]".into(),
                "first node must sit at the domain minimum".into(),
            ));
        }
        let last = self.nodes.len() - 1;
        if self.nodes[last][0] != hi {
            return Err(parse_err(
                format!("nodes[{last}]"),
                "last node must sit at the domain maximum".into(),
            ));
        }
        for i in 1..self.nodes.len() {
            if self.nodes[i][0] <= self.nodes[i - 1][0] {
                return Err(parse_err(
                    format!("nodes[{i}]"),
                    "abscissae must increase strictly".into(),
                ));
            }
        }
        for (i, [_, y]) in self.nodes.iter().enumerate() {
            if y < &lo || y > &hi {
                return Err(parse_err(
                    format!("nodes[{i}]"),
                    format!("value {y} leaves the domain"),
                ));
            }
        }
        PLMap::new(self.nodes.into_iter().map(|[x, y]| (x, y)).collect())
    }
}
