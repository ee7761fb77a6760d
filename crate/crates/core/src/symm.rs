//! Permutations of `n` vertices acting on simple undirected graphs.
//!
//! A [`Permutation`] sends vertex `i` to `map[i]`; acting on a graph
//! relabels both endpoints of every edge. Graphs are encoded as integers
//! with one bit per vertex pair, pairs in lexicographic order, which gives
//! the basis of the message register.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest vertex count supported by the brute-force machinery.
pub const MAX_VERTICES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &m in &map {
            if m >= n || seen[m] {
                return Err(Error::NotBijection(map));
            }
            seen[m] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    /// Exchanges `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        let mut map: Vec<usize> = (0..n).collect();
        if a >= n || b >= n {
            return Err(Error::InvalidArgument(format!("transposition ({a} {b}) on {n} points")));
        }
        map.swap(a, b);
        Ok(Self { map })
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &m)| i == m)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch(self.n(), other.n()));
        }
        Ok(Self {
            map: other.map.iter().map(|&j| self.map[j]).collect(),
        })
    }

    pub fn invert(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &m) in self.map.iter().enumerate() {
            inv[m] = i;
        }
        Self { map: inv }
    }

    /// Position in the lexicographic enumeration of [`enumerate_sn`].
    pub fn rank(&self) -> usize {
        let n = self.n();
        let mut rank = 0;
        for i in 0..n {
            let smaller = self.map[i + 1..].iter().filter(|&&m| m < self.map[i]).count();
            rank += smaller * factorial(n - 1 - i);
        }
        rank
    }

    /// `self^k` for `k ≥ 0`.
    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::identity(self.n()), |acc, _| {
            self.compose(&acc).expect("same size")
        })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.map.iter().join(","))
    }
}

/// All `n!` permutations, lexicographic in their maps.
///
/// The position in this list is the basis index of the permutation register.
pub fn enumerate_sn(n: usize) -> Result<Vec<Permutation>> {
    check_vertex_count(n)?;
    Ok((0..n).permutations(n).map(|map| Permutation { map }).collect())
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn check_vertex_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_VERTICES {
        return Err(Error::VertexCountOutOfRange(n));
    }
    Ok(())
}

/// Number of vertex pairs, `C(n, 2)`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `{u, v}` (`u < v`) in lexicographic order.
fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    // pairs starting below u, then offset within row u
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(Error::InvalidEdge(u, v));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self { n, edges: set })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        Self {
            n,
            edges: (0..n).tuple_combinations().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn encode(&self) -> GraphCode {
        let code = self
            .edges
            .iter()
            .fold(0u64, |acc, &(u, v)| acc | 1 << pair_index(self.n, u, v));
        GraphCode(code)
    }

    pub fn decode(code: GraphCode, n: usize) -> Result<Self> {
        let pairs = pair_count(n);
        if code.0 >> pairs != 0 {
            return Err(Error::CodeOutOfRange { code: code.0, n });
        }
        let edges = (0..n)
            .tuple_combinations()
            .enumerate()
            .filter(|(k, _)| code.0 >> k & 1 == 1)
            .map(|(_, e)| e)
            .collect();
        Ok(Self { n, edges })
    }
}

/// Edge `{u, v}` of `g` becomes `{p(u), p(v)}`.
pub fn act(p: &Permutation, g: &Graph) -> Result<Graph> {
    if p.n() != g.n {
        return Err(Error::SizeMismatch(p.n(), g.n));
    }
    let edges = g
        .edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (p.apply(u), p.apply(v));
            (a.min(b), a.max(b))
        })
        .collect();
    Ok(Graph { n: g.n, edges })
}

/// First permutation in enumeration order with `act(τ, g0) = g1`.
pub fn find_isomorphism(g0: &Graph, g1: &Graph) -> Result<Option<Permutation>> {
    if g0.n != g1.n {
        return Err(Error::SizeMismatch(g0.n, g1.n));
    }
    if g0.edge_count() != g1.edge_count() {
        return Ok(None);
    }
    for p in enumerate_sn(g0.n)? {
        if act(&p, g0)? == *g1 {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Distinct images of `g`, sorted.
pub fn orbit(g: &Graph) -> Result<BTreeSet<Graph>> {
    enumerate_sn(g.n)?.iter().map(|p| act(p, g)).collect()
}

/// Basis index of a graph in the message register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphCode(pub u64);

impl GraphCode {
    /// Number of codes for graphs on `n` vertices, `2^C(n,2)`.
    pub fn space(n: usize) -> usize {
        1usize << pair_count(n)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges = self.edges.iter().map(|(u, v)| format!("{u}{v}")).join(",");
        write!(f, "n={};edges={}", self.n, edges)
    }
}

/// Parses a comma-separated edge list such as `01,12` for `n` vertices.
pub fn parse_edges(n: usize, list: &str) -> Result<Graph> {
    let bad = || Error::GraphLiteral(list.to_string());
    let mut edges = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let digits: Vec<usize> = item
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        match digits[..] {
            [u, v] => edges.push((u, v)),
            _ => return Err(bad()),
        }
    }
    Graph::new(n, &edges)
}

/// Graph literal `n=3;edges=01,12`.
impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::GraphLiteral(s.to_string());
        let (n_part, e_part) = s.split_once(';').ok_or_else(bad)?;
        let n: usize = n_part
            .trim()
            .strip_prefix("n=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(bad)?;
        check_vertex_count(n)?;
        let edges = e_part.trim().strip_prefix("edges=").ok_or_else(bad)?;
        parse_edges(n, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(m: &[usize]) -> Permutation {
        Permutation::new(m.to_vec()).unwrap()
    }

    fn path3() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn enumerate_small() {
        assert_eq!(enumerate_sn(1).unwrap(), vec![Permutation::identity(1)]);
        let s3 = enumerate_sn(3).unwrap();
        assert_eq!(s3.len(), 6);
        assert!(s3[0].is_identity());
        assert_eq!(s3[5], perm(&[2, 1, 0]));
        let s4 = enumerate_sn(4).unwrap();
        let distinct: BTreeSet<_> = s4.iter().collect();
        assert_eq!(s4.len(), 24);
        assert_eq!(distinct.len(), 24);
        assert!(s4.windows(2).all(|w| w[0].map() < w[1].map()));
        assert!(matches!(enumerate_sn(0), Err(Error::VertexCountOutOfRange(0))));
        assert!(matches!(enumerate_sn(7), Err(Error::VertexCountOutOfRange(7))));
    }

    #[test]
    fn rank_matches_enumeration_order() {
        for n in 1..=5 {
            for (i, p) in enumerate_sn(n).unwrap().iter().enumerate() {
                assert_eq!(p.rank(), i);
            }
        }
    }

    #[test]
    fn composition_and_inverse() {
        let q = perm(&[2, 0, 1]);
        assert_eq!(Permutation::identity(3).compose(&q).unwrap(), q);
        assert_eq!(perm(&[1, 2, 0]).invert(), perm(&[2, 0, 1]));
        assert!(perm(&[1, 0]).compose(&q).is_err());
        let s3 = enumerate_sn(3).unwrap();
        for p in &s3 {
            assert!(p.compose(&p.invert()).unwrap().is_identity());
            for q in &s3 {
                let lhs = p.compose(q).unwrap().invert();
                let rhs = q.invert().compose(&p.invert()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn compose_definition() {
        let p = perm(&[1, 2, 0]);
        let q = perm(&[0, 2, 1]);
        let pq = p.compose(&q).unwrap();
        for i in 0..3 {
            assert_eq!(pq.apply(i), p.apply(q.apply(i)));
        }
    }

    #[test]
    fn relabeling() {
        let g = Graph::new(3, &[(0, 2)]).unwrap();
        assert_eq!(act(&Permutation::identity(3), &g).unwrap(), g);
        let swap = Permutation::transposition(3, 0, 1).unwrap();
        assert_eq!(act(&swap, &g).unwrap(), Graph::new(3, &[(1, 2)]).unwrap());
        assert!(act(&Permutation::identity(2), &g).is_err());
    }

    #[test]
    fn path_orbit_has_three_graphs() {
        assert_eq!(orbit(&path3()).unwrap().len(), 3);
        assert_eq!(orbit(&Graph::complete(3)).unwrap().len(), 1);
    }

    #[test]
    fn group_action_law_exhaustive_n3() {
        let s3 = enumerate_sn(3).unwrap();
        let graphs: Vec<Graph> = (0..8).map(|c| Graph::decode(GraphCode(c), 3).unwrap()).collect();
        for p in &s3 {
            for q in &s3 {
                for g in &graphs {
                    let lhs = act(p, &act(q, g).unwrap()).unwrap();
                    let rhs = act(&p.compose(q).unwrap(), g).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn codes() {
        assert_eq!(Graph::empty(3).encode(), GraphCode(0));
        assert_eq!(Graph::complete(3).encode(), GraphCode(7));
        // (0,1) is bit 0, (0,2) bit 1, (1,2) bit 2
        assert_eq!(Graph::new(3, &[(1, 2)]).unwrap().encode(), GraphCode(4));
        assert_eq!(Graph::new(4, &[(2, 3)]).unwrap().encode(), GraphCode(32));
        assert!(Graph::decode(GraphCode(8), 3).is_err());
    }

    #[test]
    fn code_round_trip_and_injectivity_n4() {
        let mut seen = BTreeSet::new();
        for c in 0..64u64 {
            let g = Graph::decode(GraphCode(c), 4).unwrap();
            assert_eq!(g.encode(), GraphCode(c));
            assert!(seen.insert(g));
        }
        for n in 1..=4 {
            let codes: BTreeSet<GraphCode> = (0..GraphCode::space(n) as u64)
                .map(|c| Graph::decode(GraphCode(c), n).unwrap().encode())
                .collect();
            assert_eq!(codes.len(), GraphCode::space(n));
        }
    }

    #[test]
    fn isomorphism_search() {
        let g = path3();
        assert!(find_isomorphism(&g, &g).unwrap().unwrap().is_identity());
        let g1 = Graph::new(3, &[(0, 1), (0, 2)]).unwrap();
        let tau = find_isomorphism(&g, &g1).unwrap().unwrap();
        assert_eq!(act(&tau, &g).unwrap(), g1);
        assert_eq!(tau, Permutation::transposition(3, 0, 1).unwrap());
        assert_eq!(find_isomorphism(&g, &Graph::complete(3)).unwrap(), None);
    }

    #[test]
    fn isomorphism_is_symmetric_n3() {
        let graphs: Vec<Graph> = (0..8).map(|c| Graph::decode(GraphCode(c), 3).unwrap()).collect();
        for a in &graphs {
            for b in &graphs {
                assert_eq!(
                    find_isomorphism(a, b).unwrap().is_some(),
                    find_isomorphism(b, a).unwrap().is_some()
                );
            }
        }
    }

    #[test]
    fn literals() {
        let g: Graph = "n=3;edges=01,12".parse().unwrap();
        assert_eq!(g, path3());
        assert_eq!(g.to_string(), "n=3;edges=01,12");
        let e: Graph = "n=4;edges=".parse().unwrap();
        assert_eq!(e, Graph::empty(4));
        assert!("n=3;edges=0".parse::<Graph>().is_err());
        assert!("n=3;edges=03".parse::<Graph>().is_err());
        assert!("edges=01".parse::<Graph>().is_err());
        assert!("n=3;edges=11".parse::<Graph>().is_err());
        assert_eq!(
            parse_edges(3, "01, 02").unwrap(),
            Graph::new(3, &[(0, 1), (0, 2)]).unwrap()
        );
    }
}
