use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbits::Orbit;
use crate::rational::Rational;

/// Covering graph of a periodic orbit.
///
/// Vertex `i` is the gap `[p_i, p_{i+1}]` between consecutive orbit points.
/// There is an edge `i -> j` when the images of the two endpoints of gap `i`
/// span gap `j`, i.e. when the connect-the-dots map of the orbit makes gap `i`
/// cover gap `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverGraph {
    pub intervals: Vec<(Rational, Rational)>,
    pub edges: Vec<Vec<usize>>,
}

impl CoverGraph {
    /// Graph of a cyclic permutation laid out on the given points.
    pub fn from_permutation(points: &[Rational], successor: &[usize]) -> CoverGraph {
        let m = points.len();
        let intervals = points
            .windows(2)
            .map(|w| (w[0].clone(), w[1].clone()))
            .collect();
        let edges = (0..m.saturating_sub(1))
            .map(|i| {
                let (a, b) = (successor[i], successor[i + 1]);
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                (lo..hi).collect()
            })
            .collect();
        CoverGraph { intervals, edges }
    }

    /// Graph of a bare pattern such as `"1>2,2>3,3>1"` (1-based positions,
    /// `i>j` meaning the `i`-th smallest point maps to the `j`-th). Vertex
    /// endpoints are the positions themselves.
    pub fn from_pattern(pattern: &str) -> Result<CoverGraph> {
        let successor = parse_pattern(pattern)?;
        let points: Vec<Rational> = (1..=successor.len() as i64)
            .map(Rational::from_integer)
            .collect();
        Ok(CoverGraph::from_permutation(&points, &successor))
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.get(from).is_some_and(|e| e.contains(&to))
    }

    /// Whether `walk` is a closed walk: every step, including the wrap-around
    /// from the last vertex to the first, is an edge.
    pub fn is_closed_walk(&self, walk: &[usize]) -> bool {
        !walk.is_empty()
            && (0..walk.len()).all(|i| self.has_edge(walk[i], walk[(i + 1) % walk.len()]))
    }

    /// All closed walks of length `1..=max_len`, as vertex sequences.
    pub fn closed_walks(&self, max_len: usize) -> Vec<Vec<usize>> {
        fn extend(
            g: &CoverGraph,
            walk: &mut Vec<usize>,
            max_len: usize,
            out: &mut Vec<Vec<usize>>,
        ) {
            let last = *walk.last().expect("walk is non-empty");
            if g.has_edge(last, walk[0]) {
                out.push(walk.clone());
            }
            if walk.len() == max_len {
                return;
            }
            for &next in &g.edges[last] {
                walk.push(next);
                extend(g, walk, max_len, out);
                walk.pop();
            }
        }
        let mut out = Vec::new();
        if max_len == 0 {
            return out;
        }
        for start in 0..self.len() {
            extend(self, &mut vec![start], max_len, &mut out);
        }
        out
    }
}

/// Covering graph of an orbit.
pub fn cover_graph(p: &Orbit) -> CoverGraph {
    CoverGraph::from_permutation(p.points(), p.successor())
}

/// Parses `"1>2,2>3,3>1"` into a 0-based successor permutation, requiring a
/// single cycle through every position.
pub fn parse_pattern(pattern: &str) -> Result<Vec<usize>> {
    let err = |msg: String| Error::Parse {
        position: "orbit pattern".into(),
        message: msg,
    };
    let mut pairs = Vec::new();
    for (k, item) in pattern.split(',').enumerate() {
        let (a, b) = item
            .split_once('>')
            .ok_or_else(|| err(format!("entry {k} ({item:?}) is not of the form i>j")))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| err(format!("entry {k}: {s:?} is not a position")))
        };
        pairs.push((parse(a)?, parse(b)?));
    }
    let m = pairs.len();
    let mut successor = vec![usize::MAX; m];
    for (a, b) in pairs {
        if a == 0 || b == 0 || a > m || b > m {
            return Err(err(format!("position out of range 1..={m}")));
        }
        if successor[a - 1] != usize::MAX {
            return Err(err(format!("position {a} listed twice")));
        }
        successor[a - 1] = b - 1;
    }
    let mut seen = vec![false; m];
    let mut i = 0;
    for _ in 0..m {
        if seen[i] {
            break;
        }
        seen[i] = true;
        i = successor[i];
    }
    if i != 0 || seen.iter().any(|s| !s) {
        return Err(err("pattern is not a single cycle".into()));
    }
    Ok(successor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::tent;
    use crate::rational::q;

    #[test]
    fn period_three_graph() {
        let t = tent();
        let p = Orbit::from_points(&t, vec![q(2, 7), q(4, 7), q(6, 7)]).unwrap();
        let g = cover_graph(&p);
        assert_eq!(g.intervals, vec![(q(2, 7), q(4, 7)), (q(4, 7), q(6, 7))]);
        assert_eq!(g.edges, vec![vec![1], vec![0, 1]]);
        let other = Orbit::from_points(&t, vec![q(2, 9), q(4, 9), q(8, 9)]).unwrap();
        assert_eq!(cover_graph(&other).edges, g.edges);
    }

    #[test]
    fn period_two_self_loop() {
        let t = tent();
        let p = Orbit::from_points(&t, vec![q(2, 5), q(4, 5)]).unwrap();
        assert_eq!(cover_graph(&p).edges, vec![vec![0]]);
    }

    #[test]
    fn pattern_graph() {
        let g = CoverGraph::from_pattern("1>2,2>3,3>1").unwrap();
        assert_eq!(g.edges, vec![vec![1], vec![0, 1]]);
        assert!(CoverGraph::from_pattern("1>2,2>1,3>3").is_err());
        assert!(CoverGraph::from_pattern("1>2,1>3,3>1").is_err());
        assert!(CoverGraph::from_pattern("1-2").is_err());
        assert!(CoverGraph::from_pattern("1>4,2>3,3>1").is_err());
    }

    #[test]
    fn closed_walks_of_period_three_graph() {
        let g = CoverGraph::from_pattern("1>2,2>3,3>1").unwrap();
        let walks = g.closed_walks(3);
        assert!(walks.contains(&vec![1]));
        assert!(walks.contains(&vec![0, 1]));
        assert!(walks.contains(&vec![1, 1, 0]));
        assert!(!walks.contains(&vec![0]));
        assert!(walks.iter().all(|w| g.is_closed_walk(w)));
        // closed walks of length L in this graph: trace(A^L) = L-th Lucas number
        let count = |l: usize| walks.iter().filter(|w| w.len() == l).count();
        assert_eq!((count(1), count(2), count(3)), (1, 3, 4));
    }
}
