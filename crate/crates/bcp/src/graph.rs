//! Undirected simple graphs on `0..n` with bit-matrix adjacency.

use rand::Rng;

use crate::bitset::VertexSet;
use crate::error::{Error, ParseErrorKind, Result};
use crate::seed::Seed;

/// Default cap on the number of vertices (bit-matrix memory).
pub const MAX_VERTICES: usize = 1 << 16;

/// Undirected simple graph. Immutable after construction; adjacency is one
/// bit row per vertex, symmetric with a zero diagonal.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    rows: Vec<VertexSet>,
}

impl Graph {
    /// Graph with no edges.
    pub fn empty(n: usize) -> Result<Graph> {
        Self::empty_with_cap(n, MAX_VERTICES)
    }

    pub fn empty_with_cap(n: usize, cap: usize) -> Result<Graph> {
        if n > cap {
            return Err(Error::GraphTooLarge { n, cap });
        }
        Ok(Graph {
            n,
            rows: vec![VertexSet::empty(n); n],
        })
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        for u in 0..n {
            g.rows[u] = VertexSet::full(n);
            g.rows[u].remove(u);
        }
        Ok(g)
    }

    /// Graph from an explicit edge list. Endpoints may come in any order;
    /// duplicates are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n)?;
        for (u, v) in edges {
            g.add_edge_checked(u, v)?;
        }
        Ok(g)
    }

    fn add_edge_checked(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n;
        for w in [u, v] {
            if w >= n {
                return Err(Error::VertexOutOfRange { v: w, n });
            }
        }
        if u == v {
            return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
        }
        if self.rows[u].contains(v) {
            return Err(Error::InvalidInput(format!("duplicate edge ({u}, {v})")));
        }
        self.rows[u].insert(v);
        self.rows[v].insert(u);
        Ok(())
    }

    /// Erdős–Rényi sample: each unordered pair is an edge independently with
    /// probability `p`. Deterministic in `(n, p, seed)`.
    pub fn gnp(n: usize, p: f64, seed: &Seed) -> Result<Graph> {
        Self::gnp_with_cap(n, p, seed, MAX_VERTICES)
    }

    pub fn gnp_with_cap(n: usize, p: f64, seed: &Seed, cap: usize) -> Result<Graph> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        if p == 1.0 {
            return Graph::complete(n);
        }
        let mut g = Graph::empty_with_cap(n, cap)?;
        if p == 0.0 {
            return Ok(g);
        }
        let mut rng = seed.rng();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_bool(p) {
                    g.rows[u].insert(v);
                    g.rows[v].insert(u);
                }
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn degree(&self, u: usize) -> usize {
        self.rows[u].len()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum::<usize>() / 2
    }

    /// Neighbor set of `u` as a bit row.
    pub fn row(&self, u: usize) -> &VertexSet {
        &self.rows[u]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[u].iter()
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.rows[u].iter() {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// The full vertex set `{0, .., n-1}`.
    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// True iff `set` spans no edge. Returns the first offending edge.
    pub fn check_independent(&self, set: &VertexSet) -> Result<()> {
        for u in set.iter() {
            if let Some(v) = self.rows[u].intersection(set).first() {
                let (a, b) = (u.min(v), u.max(v));
                return Err(Error::NotIndependent { u: a, v: b });
            }
        }
        Ok(())
    }

    /// Two vertices are twins when their neighborhoods are exactly equal as
    /// sets. Adjacent vertices are never twins: `u ∈ N(v)` but `u ∉ N(u)`, so
    /// equality of raw rows already rules them out.
    pub fn is_twin_pair(&self, u: usize, v: usize) -> Result<bool> {
        let n = self.n;
        for w in [u, v] {
            if w >= n {
                return Err(Error::VertexOutOfRange { v: w, n });
            }
        }
        if u == v {
            return Err(Error::InvalidInput("twin check needs two distinct vertices".into()));
        }
        Ok(self.rows[u] == self.rows[v])
    }

    pub fn is_twin_free(&self) -> bool {
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.rows[u] == self.rows[v] {
                    return false;
                }
            }
        }
        true
    }

    /// Checks symmetry and irreflexivity of the adjacency matrix.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        if self.rows.len() != self.n {
            return Err(format!("{} rows for {} vertices", self.rows.len(), self.n));
        }
        for u in 0..self.n {
            if self.rows[u].contains(u) {
                return Err(format!("self-loop at {u}"));
            }
            for v in self.rows[u].iter() {
                if !self.rows[v].contains(u) {
                    return Err(format!("asymmetric pair ({u}, {v})"));
                }
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edge_count())
    }
}

/// Parses the edge-list text format: a header `p <n> <m>`, then exactly `m`
/// records `e <u> <v>` with `0 <= u < v < n`. Lines starting with `#` are
/// comments and may appear anywhere; blank lines are ignored.
pub fn read_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut g: Option<Graph> = None;
    let mut found = 0usize;
    let mut last_line = 0usize;

    let fail = |line: usize, kind: ParseErrorKind| Error::Parse { line, kind };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tok = trimmed.split_whitespace();
        match tok.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(fail(line, ParseErrorKind::TrailingData));
                }
                let n = tok.next().and_then(|t| t.parse::<usize>().ok());
                let m = tok.next().and_then(|t| t.parse::<usize>().ok());
                match (n, m, tok.next()) {
                    (Some(n), Some(m), None) => {
                        header = Some((n, m));
                        g = Some(Graph::empty(n)?);
                    }
                    _ => return Err(fail(line, ParseErrorKind::MalformedHeader)),
                }
            }
            Some("e") => {
                let (n, m) = header.ok_or_else(|| fail(line, ParseErrorKind::MissingHeader))?;
                if found >= m {
                    return Err(fail(line, ParseErrorKind::TrailingData));
                }
                let u = tok.next().and_then(|t| t.parse::<usize>().ok());
                let v = tok.next().and_then(|t| t.parse::<usize>().ok());
                let (u, v) = match (u, v, tok.next()) {
                    (Some(u), Some(v), None) => (u, v),
                    _ => return Err(fail(line, ParseErrorKind::MalformedEdge)),
                };
                if u == v {
                    return Err(fail(line, ParseErrorKind::SelfLoop { v }));
                }
                if u > v {
                    return Err(fail(line, ParseErrorKind::EndpointOrder { u, v }));
                }
                if v >= n {
                    return Err(fail(line, ParseErrorKind::VertexOutOfRange { v, n }));
                }
                let graph = g.as_mut().expect("header seen");
                if graph.has_edge(u, v) {
                    return Err(fail(line, ParseErrorKind::DuplicateEdge { u, v }));
                }
                graph.rows[u].insert(v);
                graph.rows[v].insert(u);
                found += 1;
            }
            _ => {
                let kind = if header.is_none() {
                    ParseErrorKind::MissingHeader
                } else {
                    ParseErrorKind::TrailingData
                };
                return Err(fail(line, kind));
            }
        }
    }

    match header {
        None => Err(fail(last_line.max(1), ParseErrorKind::MissingHeader)),
        Some((_, m)) if m != found => Err(Error::Parse {
            line: last_line,
            kind: ParseErrorKind::EdgeCountMismatch { declared: m, found },
        }),
        Some(_) => Ok(g.expect("header seen")),
    }
}

/// Writes the edge-list format read back by [`read_graph`].
pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!("p {} {}\n", g.n(), g.edge_count()));
    for (u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_extremes() {
        let s = Seed::new(1);
        let g0 = Graph::gnp(5, 0.0, &s).unwrap();
        assert_eq!(g0.edge_count(), 0);
        let g1 = Graph::gnp(5, 1.0, &s).unwrap();
        assert_eq!(g1.edge_count(), 10);
        assert!(Graph::gnp(5, 1.5, &s).is_err());
        assert!(Graph::gnp(5, -0.1, &s).is_err());
    }

    #[test]
    fn gnp_edge_count_within_four_sigma() {
        // Binomial(C(1000,2), 1/2): mean 249750, sd sqrt(499500)/2.
        let g = Graph::gnp(1000, 0.5, &Seed::new(42)).unwrap();
        let pairs: f64 = 1000.0 * 999.0 / 2.0;
        let mean = pairs * 0.5;
        let sd = (pairs * 0.25).sqrt();
        let m = g.edge_count() as f64;
        assert!((m - mean).abs() <= 4.0 * sd, "edge count {m} too far from {mean}");
    }

    #[test]
    fn gnp_deterministic() {
        let a = Graph::gnp(64, 0.37, &Seed::new(9).child("x")).unwrap();
        let b = Graph::gnp(64, 0.37, &Seed::new(9).child("x")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            Graph::empty_with_cap(10, 5),
            Err(Error::GraphTooLarge { .. })
        ));
    }

    #[test]
    fn twins() {
        // Two isolated vertices are twins.
        let g = Graph::empty(2).unwrap();
        assert!(g.is_twin_pair(0, 1).unwrap());
        assert!(!g.is_twin_free());

        // The endpoints of a single edge are not: N(0)={1} != {0}=N(1).
        let k2 = Graph::complete(2).unwrap();
        assert!(!k2.is_twin_pair(0, 1).unwrap());
        assert!(k2.is_twin_free());

        // Edge plus isolated vertex: the edge endpoint and the isolated
        // vertex differ.
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(!g.is_twin_pair(1, 2).unwrap());
        assert!(g.is_twin_pair(2, 2).is_err());
        assert!(g.is_twin_pair(0, 3).is_err());
    }

    #[test]
    fn twin_row_substitution_invariant() {
        let g = Graph::gnp(24, 0.5, &Seed::new(3)).unwrap();
        for u in 0..24 {
            for v in (u + 1)..24 {
                if g.is_twin_pair(u, v).unwrap() {
                    assert_eq!(g.row(u), g.row(v));
                }
            }
        }
    }

    #[test]
    fn parse_basic() {
        let g = read_graph("p 3 2\ne 0 1\ne 1 2\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);

        let g = read_graph("p 2 0").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_count(), 0);

        let g = read_graph("# comment\np 2 1\n# another\ne 0 1\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases: Vec<(&str, usize)> = vec![
            ("p x 2\n", 1),
            ("e 0 1\n", 1),
            ("p 3 1\ne 0 3\n", 2),
            ("p 3 2\ne 0 1\ne 0 1\n", 3),
            ("p 3 1\ne 1 1\n", 2),
            ("p 3 1\ne 2 1\n", 2),
            ("p 3 2\ne 0 1\n", 2),
            ("p 3 1\ne 0 1\ne 1 2\n", 3),
        ];
        for (text, line) in cases {
            match read_graph(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "input {text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn roundtrip() {
        let g = Graph::gnp(50, 0.5, &Seed::new(11)).unwrap();
        let h = read_graph(&write_graph(&g)).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn invariants_hold_for_generated_graphs() {
        for seed in 0..5 {
            let g = Graph::gnp(40, 0.3, &Seed::new(seed)).unwrap();
            g.check_invariants().unwrap();
        }
        Graph::complete(9).unwrap().check_invariants().unwrap();
    }
}
