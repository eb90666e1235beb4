//! Problem-instance representation and the split-graph construction.

mod params;
mod split;

pub use params::ParamBlock;
pub use split::{
    bucket_of, DynamicBuckets, EdgeKind, ShortcutRecord, SplitEdge, SplitGraph, NO_SLOT,
};

use crate::error::Error;
use crate::Result;
use std::fmt::Write as _;

/// Simple undirected graph with non-negative integer vertex weights.
///
/// Vertices are dense 0-based indices. The edge set is kept sorted with
/// `u < v` per pair; neighbor lists are sorted, so `has_edge` is a binary
/// search and all iteration orders are deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    weights: Vec<u64>,
    edges: Vec<(u32, u32)>,
    adj: Vec<Vec<u32>>,
}

impl WeightedGraph {
    pub fn new(n: usize, weights: Vec<u64>, mut edges: Vec<(u32, u32)>) -> Result<Self> {
        if weights.len() != n {
            return Err(Error::invariant(format!(
                "weight vector has length {} for n={n}",
                weights.len()
            )));
        }
        for e in edges.iter_mut() {
            if e.0 == e.1 {
                return Err(Error::invariant(format!("self-loop at vertex {}", e.0)));
            }
            if e.0 as usize >= n || e.1 as usize >= n {
                return Err(Error::invariant(format!(
                    "edge ({}, {}) out of range for n={n}",
                    e.0, e.1
                )));
            }
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invariant("duplicate edge".to_string()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        Ok(WeightedGraph {
            n,
            weights,
            edges,
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, v: u32) -> u64 {
        self.weights[v as usize]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn max_weight(&self) -> u64 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn is_complete(&self) -> bool {
        self.m() == self.n * (self.n - 1) / 2
    }

    /// Total weight of a vertex subset.
    pub fn weight_of(&self, set: &[u32]) -> u128 {
        set.iter().map(|&v| self.weights[v as usize] as u128).sum()
    }

    /// Smallest non-adjacent pair in lexicographic order, if any.
    pub fn first_non_adjacent_pair(&self) -> Option<(u32, u32)> {
        for u in 0..self.n as u32 {
            for v in (u + 1)..self.n as u32 {
                if !self.has_edge(u, v) {
                    return Some((u, v));
                }
            }
        }
        None
    }

    /// Shifts every weight to `n^2 * w + 1`, making all weights positive.
    ///
    /// Any global minimum vertex-cut of the result is also one of the input:
    /// the transform preserves the relative order of cut values and breaks
    /// ties towards smaller separators.
    pub fn make_weights_positive(&self) -> Result<WeightedGraph> {
        let n2 = (self.n as u128) * (self.n as u128);
        let weights = self
            .weights
            .iter()
            .map(|&w| {
                let shifted = n2
                    .checked_mul(w as u128)
                    .and_then(|x| x.checked_add(1))
                    .ok_or(Error::Overflow("make_weights_positive"))?;
                u64::try_from(shifted).map_err(|_| Error::Overflow("make_weights_positive"))
            })
            .collect::<Result<Vec<_>>>()?;
        WeightedGraph::new(self.n, weights, self.edges.clone())
    }

    /// Parses the line-oriented instance format:
    /// `c` comments, `p vcut <n> <m>` header, `w <id> <weight>` weight lines
    /// (1-based ids; missing lines mean weight 0), `e <u> <v>` edge lines.
    pub fn parse(input: &str) -> Result<WeightedGraph> {
        let mut n: Option<usize> = None;
        let mut m: Option<usize> = None;
        let mut weights: Vec<u64> = Vec::new();
        let mut weight_seen: Vec<bool> = Vec::new();
        let mut edges: Vec<(u32, u32)> = Vec::new();

        for (idx, raw) in input.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let mut tok = line.split_whitespace();
            match tok.next() {
                Some("p") => {
                    if n.is_some() {
                        return Err(Error::parse(lineno, "duplicate problem line"));
                    }
                    if tok.next() != Some("vcut") {
                        return Err(Error::parse(lineno, "expected `p vcut <n> <m>`"));
                    }
                    let pn: usize = parse_tok(tok.next(), lineno, "vertex count")?;
                    let pm: usize = parse_tok(tok.next(), lineno, "edge count")?;
                    weights = vec![0; pn];
                    weight_seen = vec![false; pn];
                    n = Some(pn);
                    m = Some(pm);
                }
                Some("w") => {
                    let n = n.ok_or_else(|| Error::parse(lineno, "`w` before problem line"))?;
                    let id: usize = parse_tok(tok.next(), lineno, "vertex id")?;
                    let w: u64 = parse_tok(tok.next(), lineno, "weight")?;
                    if id == 0 || id > n {
                        return Err(Error::parse(lineno, format!("vertex id {id} out of range")));
                    }
                    if weight_seen[id - 1] {
                        return Err(Error::invariant(format!(
                            "duplicate weight line for vertex {id}"
                        )));
                    }
                    weight_seen[id - 1] = true;
                    weights[id - 1] = w;
                }
                Some("e") => {
                    let n = n.ok_or_else(|| Error::parse(lineno, "`e` before problem line"))?;
                    let u: usize = parse_tok(tok.next(), lineno, "endpoint")?;
                    let v: usize = parse_tok(tok.next(), lineno, "endpoint")?;
                    if u == 0 || u > n || v == 0 || v > n {
                        return Err(Error::parse(lineno, format!("edge ({u}, {v}) out of range")));
                    }
                    if u == v {
                        return Err(Error::parse(lineno, format!("self-loop at vertex {u}")));
                    }
                    edges.push((u as u32 - 1, v as u32 - 1));
                }
                Some(other) => {
                    return Err(Error::parse(lineno, format!("unknown record `{other}`")));
                }
                None => {}
            }
        }

        let n = n.ok_or_else(|| Error::parse(0, "missing problem line"))?;
        let m = m.unwrap_or(0);
        if edges.len() != m {
            return Err(Error::invariant(format!(
                "header declares {m} edges but {} were given",
                edges.len()
            )));
        }
        WeightedGraph::new(n, weights, edges)
    }

    /// Serializes in the same format `parse` accepts.
    pub fn to_instance_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p vcut {} {}", self.n, self.m());
        for v in 0..self.n {
            if self.weights[v] != 0 {
                let _ = writeln!(out, "w {} {}", v + 1, self.weights[v]);
            }
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "e {} {}", u + 1, v + 1);
        }
        out
    }
}

fn parse_tok<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?
        .parse::<T>()
        .map_err(|_| Error::parse(line, format!("malformed {what}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> WeightedGraph {
        WeightedGraph::parse("p vcut 3 2\nw 1 5\nw 2 3\nw 3 7\ne 1 2\ne 2 3\n").unwrap()
    }

    #[test]
    fn parses_path_instance() {
        let g = p3();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
        assert_eq!(g.weights(), &[5, 3, 7]);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));
    }

    #[test]
    fn rejects_self_loop() {
        let err = WeightedGraph::parse("p vcut 2 1\ne 1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
    }

    #[test]
    fn rejects_duplicate_edge() {
        let err = WeightedGraph::parse("p vcut 3 2\ne 1 2\ne 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Invariant(_)), "{err}");
        // Also when given in flipped orientation.
        let err = WeightedGraph::parse("p vcut 3 2\ne 1 2\ne 2 1\n").unwrap_err();
        assert!(matches!(err, Error::Invariant(_)), "{err}");
    }

    #[test]
    fn missing_weight_is_zero_and_comments_ignored() {
        let g = WeightedGraph::parse("c hello\np vcut 2 1\nw 2 4\ne 1 2\n").unwrap();
        assert_eq!(g.weights(), &[0, 4]);
    }

    #[test]
    fn edge_count_must_match_header() {
        let err = WeightedGraph::parse("p vcut 3 1\n").unwrap_err();
        assert!(matches!(err, Error::Invariant(_)));
    }

    #[test]
    fn weight_shift_examples() {
        let g = WeightedGraph::new(3, vec![0, 2, 0], vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.make_weights_positive().unwrap().weights(), &[1, 19, 1]);
        let g = WeightedGraph::new(4, vec![1, 1, 1, 1], vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(
            g.make_weights_positive().unwrap().weights(),
            &[17, 17, 17, 17]
        );
    }

    #[test]
    fn roundtrip_through_instance_format() {
        let g = p3();
        let again = WeightedGraph::parse(&g.to_instance_string()).unwrap();
        assert_eq!(g, again);
    }
}
