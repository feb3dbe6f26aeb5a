//! Undirected simple graphs, DIMACS ingestion and the brute-force stable set
//! and clique oracles every cross-check is anchored on.

use std::fmt;

use rand::Rng;
use serde::ser::Serializer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default vertex limit for the exponential α/ω oracles.
pub const ORACLE_LIMIT: usize = 20;

/// Largest `n` for which all labeled graphs may be enumerated.
pub const ENUMERATION_LIMIT: usize = 6;

/// Simple undirected graph on vertices `0..n` (rendered 1-based).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("graph needs at least one vertex".into()));
        }
        Ok(Graph { n, adj: vec![false; n * n] })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v)?;
            }
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        if n >= 3 {
            for u in 0..n {
                g.add_edge(u, (u + 1) % n)?;
            }
        } else if n == 2 {
            g.add_edge(0, 1)?;
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for u in 1..n {
            g.add_edge(u - 1, u)?;
        }
        Ok(g)
    }

    /// Builds from 0-based edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::Invalid(format!(
                "edge ({}, {}) out of range for n = {}",
                u + 1,
                v + 1,
                self.n
            )));
        }
        if u == v {
            return Err(Error::Invalid(format!("self-loop at vertex {}", u + 1)));
        }
        self.adj[u * self.n + v] = true;
        self.adj[v * self.n + u] = true;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    /// 0-based edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adjacent(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Neighbourhood bitmask; only valid for `n <= 64`.
    fn neighbour_mask(&self, u: usize) -> u64 {
        (0..self.n)
            .filter(|&v| self.adjacent(u, v))
            .fold(0u64, |m, v| m | (1 << v))
    }

    /// Adjacency as DIMACS text.
    pub fn to_dimacs(&self) -> String {
        let edges = self.edges();
        let mut s = format!("p edge {} {}\n", self.n, edges.len());
        for (u, v) in edges {
            s.push_str(&format!("e {} {}\n", u + 1, v + 1));
        }
        s
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, EdgeList(self))
    }
}

struct EdgeList<'a>(&'a Graph);

impl fmt::Debug for EdgeList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.0.edges().into_iter().map(|(u, v)| (u + 1, v + 1)))
            .finish()
    }
}

/// Serialized as `{"n": .., "edges": [[u, v], ..]}` with 1-based vertices.
impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            n: usize,
            edges: Vec<[usize; 2]>,
        }
        Repr {
            n: self.n,
            edges: self.edges().into_iter().map(|(u, v)| [u + 1, v + 1]).collect(),
        }
        .serialize(s)
    }
}

/// Sorted set of distinct 0-based vertex indices (rendered 1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut members: Vec<usize>, n: usize) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if let Some(&v) = members.iter().find(|&&v| v >= n) {
            return Err(Error::Invalid(format!("vertex {} out of range for n = {n}", v + 1)));
        }
        Ok(VertexSet(members))
    }

    fn from_mask(mask: u64) -> Self {
        VertexSet((0..64).filter(|&i| mask & (1 << i) != 0).collect())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }

    pub fn is_stable_in(&self, g: &Graph) -> bool {
        self.pairs().all(|(u, v)| !g.adjacent(u, v))
    }

    pub fn is_clique_in(&self, g: &Graph) -> bool {
        self.pairs().all(|(u, v)| g.adjacent(u, v))
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(move |(i, &u)| self.0[i + 1..].iter().map(move |&v| (u, v)))
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Parses DIMACS `.col` text (`p edge n m` header, `e u v` lines, `c` comments).
///
/// Duplicate edges are accepted; self-loops and out-of-range vertices are not.
pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: &str| Error::Parse(format!("line {lineno}: {msg}: {line:?}"));
        match fields[0] {
            "p" => {
                if graph.is_some() {
                    return Err(err("duplicate problem line"));
                }
                if fields.len() != 4 || !matches!(fields[1], "edge" | "col") {
                    return Err(err("malformed header, expected `p edge <n> <m>`"));
                }
                let n: usize = fields[2].parse().map_err(|_| err("bad vertex count"))?;
                let _m: usize = fields[3].parse().map_err(|_| err("bad edge count"))?;
                graph = Some(Graph::empty(n).map_err(|_| err("vertex count must be positive"))?);
            }
            "e" => {
                let g = graph.as_mut().ok_or_else(|| err("edge line before header"))?;
                if fields.len() != 3 {
                    return Err(err("malformed edge line, expected `e <u> <v>`"));
                }
                let u: usize = fields[1].parse().map_err(|_| err("bad vertex index"))?;
                let v: usize = fields[2].parse().map_err(|_| err("bad vertex index"))?;
                if u == v {
                    return Err(err("self-loop"));
                }
                if u == 0 || v == 0 || u > g.n() || v > g.n() {
                    return Err(err("vertex index out of range"));
                }
                g.add_edge(u - 1, v - 1)?;
            }
            _ => return Err(err("unrecognized line")),
        }
    }
    graph.ok_or_else(|| Error::Parse("missing `p edge` header".into()))
}

/// Complement graph: adjacency `J - A - I`.
pub fn complement(g: &Graph) -> Graph {
    let n = g.n();
    let mut h = Graph { n, adj: vec![false; n * n] };
    for u in 0..n {
        for v in 0..n {
            h.adj[u * n + v] = u != v && !g.adjacent(u, v);
        }
    }
    h
}

/// Subgraph induced by `s`, vertices renumbered in increasing order.
pub fn induced_subgraph(g: &Graph, s: &VertexSet) -> Result<Graph> {
    if s.is_empty() {
        return Err(Error::Invalid("induced subgraph of an empty vertex set".into()));
    }
    if let Some(&v) = s.members().iter().find(|&&v| v >= g.n()) {
        return Err(Error::Invalid(format!("vertex {} out of range", v + 1)));
    }
    let idx = s.members();
    let k = idx.len();
    let mut h = Graph { n: k, adj: vec![false; k * k] };
    for a in 0..k {
        for b in 0..k {
            h.adj[a * k + b] = g.adjacent(idx[a], idx[b]);
        }
    }
    Ok(h)
}

/// Maximum stable set: size α(G) and a witness.
pub fn alpha(g: &Graph) -> Result<(usize, VertexSet)> {
    alpha_capped(g, ORACLE_LIMIT)
}

pub fn alpha_capped(g: &Graph, cap: usize) -> Result<(usize, VertexSet)> {
    if g.n() > cap.min(64) {
        return Err(Error::CapExceeded { what: "stable set oracle", size: g.n(), cap });
    }
    // Non-neighbour masks, including the vertex itself.
    let closed: Vec<u64> = (0..g.n()).map(|u| g.neighbour_mask(u) | (1 << u)).collect();
    let all = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let mut best = 0u64;
    branch(&closed, all, 0, &mut best);
    let w = VertexSet::from_mask(best);
    Ok((w.len(), w))
}

fn branch(closed: &[u64], candidates: u64, current: u64, best: &mut u64) {
    if candidates == 0 {
        if current.count_ones() > best.count_ones() {
            *best = current;
        }
        return;
    }
    if current.count_ones() + candidates.count_ones() <= best.count_ones() {
        return;
    }
    let v = candidates.trailing_zeros() as usize;
    branch(closed, candidates & !closed[v], current | (1 << v), best);
    branch(closed, candidates & !(1 << v), current, best);
}

/// Maximum clique, computed as a maximum stable set of the complement.
pub fn omega(g: &Graph) -> Result<(usize, VertexSet)> {
    alpha(&complement(g))
}

pub fn omega_capped(g: &Graph, cap: usize) -> Result<(usize, VertexSet)> {
    alpha_capped(&complement(g), cap)
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// The labeled graph on `n` vertices whose edge set is encoded by the bits of
/// `index` over pairs `(0,1), (0,2), .., (n-2,n-1)`.
pub fn graph_from_index(n: usize, index: u64) -> Graph {
    let mut g = Graph { n, adj: vec![false; n * n] };
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if index & (1 << bit) != 0 {
                g.adj[u * n + v] = true;
                g.adj[v * n + u] = true;
            }
            bit += 1;
        }
    }
    g
}

/// Number of labeled graphs on `n` vertices.
pub fn labeled_graph_count(n: usize) -> u64 {
    1u64 << pair_count(n)
}

/// Every labeled graph on `n` vertices, each exactly once.
pub fn enumerate_graphs(n: usize) -> Result<impl Iterator<Item = Graph>> {
    if n == 0 {
        return Err(Error::Invalid("n must be positive".into()));
    }
    if n > ENUMERATION_LIMIT {
        return Err(Error::CapExceeded {
            what: "graph enumeration",
            size: n,
            cap: ENUMERATION_LIMIT,
        });
    }
    Ok((0..labeled_graph_count(n)).map(move |i| graph_from_index(n, i)))
}

/// Erdős–Rényi `G(n, p)` sample.
pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph { n, adj: vec![false; n * n] };
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.adj[u * n + v] = true;
                g.adj[v * n + u] = true;
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(m: &[usize], n: usize) -> VertexSet {
        VertexSet::new(m.to_vec(), n).unwrap()
    }

    #[test]
    fn dimacs_basic() {
        let g = parse_dimacs("p edge 2 1\ne 1 2\n").unwrap();
        assert_eq!(g, Graph::complete(2).unwrap());
        let e = parse_dimacs("c empty\np edge 3 0\n").unwrap();
        assert_eq!(e, Graph::empty(3).unwrap());
    }

    #[test]
    fn dimacs_errors_name_the_line() {
        let err = parse_dimacs("p edge 2 1\ne 1 1\n").unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("self-loop"), "{err}");
        let err = parse_dimacs("p edge 2 1\ne 1 3\n").unwrap_err().to_string();
        assert!(err.contains("out of range"), "{err}");
        let err = parse_dimacs("p edge x 1\n").unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");
        assert!(parse_dimacs("e 1 2\n").is_err());
        assert!(parse_dimacs("").is_err());
    }

    #[test]
    fn dimacs_tolerates_duplicate_edges() {
        let g = parse_dimacs("p edge 3 3\ne 1 2\ne 2 1\ne 1 2\n").unwrap();
        assert_eq!(g.edges(), vec![(0, 1)]);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement(&Graph::complete(3).unwrap()), Graph::empty(3).unwrap());
        assert_eq!(complement(&Graph::empty(2).unwrap()), Graph::complete(2).unwrap());
        let p3 = Graph::path(3).unwrap();
        assert_eq!(complement(&p3).edges(), vec![(0, 2)]);
    }

    #[test]
    fn induced_examples() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(induced_subgraph(&k3, &vs(&[0, 1], 3)).unwrap(), Graph::complete(2).unwrap());
        let p3 = Graph::path(3).unwrap();
        assert_eq!(induced_subgraph(&p3, &vs(&[0, 2], 3)).unwrap(), Graph::empty(2).unwrap());
        assert_eq!(induced_subgraph(&p3, &vs(&[0, 1, 2], 3)).unwrap(), p3);
        assert!(induced_subgraph(&p3, &vs(&[], 3)).is_err());
    }

    #[test]
    fn oracle_examples() {
        let c5 = Graph::cycle(5).unwrap();
        let (a, w) = alpha(&c5).unwrap();
        assert_eq!(a, 2);
        assert_eq!(w, vs(&[0, 2], 5));
        assert_eq!(alpha(&Graph::complete(3).unwrap()).unwrap().0, 1);
        assert_eq!(alpha(&Graph::empty(4).unwrap()).unwrap().0, 4);
        assert_eq!(omega(&Graph::complete(3).unwrap()).unwrap().0, 3);
        assert_eq!(omega(&c5).unwrap().0, 2);
        assert_eq!(omega(&Graph::empty(3).unwrap()).unwrap().0, 1);
    }

    #[test]
    fn oracle_refuses_over_cap() {
        let g = Graph::empty(21).unwrap();
        assert!(matches!(alpha(&g), Err(Error::CapExceeded { .. })));
        assert!(alpha_capped(&g, 21).is_ok());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_graphs(1).unwrap().count(), 1);
        assert_eq!(enumerate_graphs(2).unwrap().count(), 2);
        assert_eq!(enumerate_graphs(3).unwrap().count(), 8);
        assert!(enumerate_graphs(7).is_err());
        let all: std::collections::HashSet<_> = enumerate_graphs(4).unwrap().collect();
        assert_eq!(all.len(), 64);
    }

    #[test]
    fn vertex_set_rejects_out_of_range() {
        assert!(VertexSet::new(vec![3], 3).is_err());
        assert_eq!(vs(&[2, 0, 2], 3).members(), &[0, 2]);
    }
}
