//! Vector labelings over `{0,1,2}^r` encoding biclique partitions, the
//! twin-free extremal construction on `2^{r+1}-1` vertices, and the exact
//! maximum-order enumeration at small `r`.
//!
//! A labeling assigns each vertex a vector; coordinate `i` places the vertex
//! on the left side of block `i` (value 1), on the right side (value 0), or
//! outside it (value 2). The labeling is consistent with a host graph when
//! every edge has exactly one coordinate pairing `{0,1}` and every non-edge
//! has none.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::{Biclique, BicliquePartition};

/// Largest `r` for [`extremal_graph`]; the construction has `2^{r+1}-1`
/// vertices and the bit-matrix grows quadratically.
pub const EXTREMAL_R_CAP: usize = 13;

/// Exhaustive cap for [`max_twinfree_order`].
pub const MAX_ORDER_R_CAP: usize = 3;

/// Per-vertex vectors over `{0,1,2}^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorLabeling {
    r: usize,
    labels: Vec<Vec<u8>>,
}

impl VectorLabeling {
    pub fn new(r: usize, labels: Vec<Vec<u8>>) -> Result<Self> {
        if r > 63 {
            return Err(Error::InvalidInput(format!("labeling dimension {r} exceeds 63")));
        }
        for (u, l) in labels.iter().enumerate() {
            if l.len() != r {
                return Err(Error::InvalidInput(format!(
                    "vertex {u} has a vector of length {}, expected {r}",
                    l.len()
                )));
            }
            if l.iter().any(|&t| t > 2) {
                return Err(Error::InvalidInput(format!("vertex {u} has a coordinate outside 0/1/2")));
            }
        }
        Ok(VectorLabeling { r, labels })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of labelled vertices.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, u: usize) -> &[u8] {
        &self.labels[u]
    }

    /// Coordinates where vertex `u` is 0 (bit set in `.0`) or 1 (`.1`).
    fn masks(&self, u: usize) -> (u64, u64) {
        let mut z = 0u64;
        let mut o = 0u64;
        for (i, &t) in self.labels[u].iter().enumerate() {
            match t {
                0 => z |= 1 << i,
                1 => o |= 1 << i,
                _ => {}
            }
        }
        (z, o)
    }
}

/// JSON form: `{r, labels: ["0122", ...]}`, one trit string per vertex.
#[derive(Serialize, Deserialize)]
struct LabelingDoc {
    r: usize,
    labels: Vec<String>,
}

pub fn labeling_to_json(l: &VectorLabeling) -> String {
    let doc = LabelingDoc {
        r: l.r,
        labels: l
            .labels
            .iter()
            .map(|v| v.iter().map(|t| char::from(b'0' + t)).collect())
            .collect(),
    };
    serde_json::to_string(&doc).expect("labeling serializes")
}

pub fn labeling_from_json(text: &str) -> Result<VectorLabeling> {
    let doc: LabelingDoc = serde_json::from_str(text)?;
    let mut labels = Vec::with_capacity(doc.labels.len());
    for (u, s) in doc.labels.iter().enumerate() {
        let mut v = Vec::with_capacity(doc.r);
        for c in s.chars() {
            match c {
                '0' | '1' | '2' => v.push(c as u8 - b'0'),
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "vertex {u}: labels must be strings over 0/1/2"
                    )))
                }
            }
        }
        labels.push(v);
    }
    VectorLabeling::new(doc.r, labels)
}

/// Why a labeling fails to encode an exact partition of its host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeViolation {
    Shape(String),
    EdgeUncovered { u: usize, v: usize },
    EdgeCoveredTwice { u: usize, v: usize, i: usize, j: usize },
    NonEdgeCovered { u: usize, v: usize, i: usize },
}

impl std::fmt::Display for DecodeViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecodeViolation::Shape(s) => write!(f, "{s}"),
            DecodeViolation::EdgeUncovered { u, v } => {
                write!(f, "edge ({u}, {v}) has no coordinate pairing 0/1")
            }
            DecodeViolation::EdgeCoveredTwice { u, v, i, j } => {
                write!(f, "edge ({u}, {v}) pairs 0/1 at coordinates {i} and {j}")
            }
            DecodeViolation::NonEdgeCovered { u, v, i } => {
                write!(f, "non-edge ({u}, {v}) pairs 0/1 at coordinate {i}")
            }
        }
    }
}

/// Decodes a labeling into blocks `({v: v_i=1}, {v: v_i=0})`, returning the
/// partition iff it exactly covers `g`; otherwise the offending pair.
pub fn decode_labeling(
    g: &Graph,
    l: &VectorLabeling,
) -> std::result::Result<BicliquePartition, DecodeViolation> {
    let n = g.n();
    if l.len() != n {
        return Err(DecodeViolation::Shape(format!(
            "labeling covers {} vertices, host has {n}",
            l.len()
        )));
    }
    let masks: Vec<(u64, u64)> = (0..n).map(|u| l.masks(u)).collect();

    for u in 0..n {
        for v in (u + 1)..n {
            let hits = (masks[u].0 & masks[v].1) | (masks[u].1 & masks[v].0);
            let count = hits.count_ones();
            let first = hits.trailing_zeros() as usize;
            if g.has_edge(u, v) {
                if count == 0 {
                    return Err(DecodeViolation::EdgeUncovered { u, v });
                }
                if count > 1 {
                    let rest = hits & (hits - 1);
                    return Err(DecodeViolation::EdgeCoveredTwice {
                        u,
                        v,
                        i: first,
                        j: rest.trailing_zeros() as usize,
                    });
                }
            } else if count > 0 {
                return Err(DecodeViolation::NonEdgeCovered { u, v, i: first });
            }
        }
    }

    let mut blocks = Vec::new();
    for i in 0..l.r() {
        let left = VertexSet::from_indices(n, (0..n).filter(|&u| masks[u].1 >> i & 1 == 1));
        let right = VertexSet::from_indices(n, (0..n).filter(|&u| masks[u].0 >> i & 1 == 1));
        if !left.is_empty() && !right.is_empty() {
            blocks.push(Biclique { left, right });
        }
    }
    Ok(BicliquePartition { n, blocks })
}

/// The labeling induced by a partition: coordinate `i` is 1 on the left side
/// of block `i`, 0 on the right side, 2 elsewhere.
pub fn labeling_of_partition(p: &BicliquePartition) -> VectorLabeling {
    let r = p.blocks.len();
    let mut labels = vec![vec![2u8; r]; p.n];
    for (i, b) in p.blocks.iter().enumerate() {
        for u in b.left.iter() {
            labels[u][i] = 1;
        }
        for u in b.right.iter() {
            labels[u][i] = 0;
        }
    }
    VectorLabeling { r, labels }
}

/// Three vertices whose vectors share a support class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportViolation {
    pub support: Vec<usize>,
    pub vertices: [usize; 3],
}

/// Groups vectors by support `{i: v_i ∈ {0,1}}` and checks that every
/// nonempty-support class holds at most two distinct vectors. For labelings
/// that decode to a valid partition this always passes; a violation here
/// signals a decoder bug. Errors if the labeling does not decode.
pub fn support_class_check(g: &Graph, l: &VectorLabeling) -> Result<Option<SupportViolation>> {
    if let Err(v) = decode_labeling(g, l) {
        return Err(Error::InvalidInput(format!("labeling does not decode: {v}")));
    }
    let mut classes: HashMap<u64, Vec<((u64, u64), usize)>> = HashMap::new();
    for u in 0..l.len() {
        let (z, o) = l.masks(u);
        let support = z | o;
        if support == 0 {
            continue;
        }
        let class = classes.entry(support).or_default();
        if !class.iter().any(|&(m, _)| m == (z, o)) {
            class.push(((z, o), u));
            if class.len() > 2 {
                let support_coords = (0..l.r()).filter(|&i| support >> i & 1 == 1).collect();
                return Ok(Some(SupportViolation {
                    support: support_coords,
                    vertices: [class[0].1, class[1].1, class[2].1],
                }));
            }
        }
    }
    Ok(None)
}

/// The twin-free extremal graph on `2^{r+1}-1` vertices together with its
/// defining labeling.
///
/// Vertices are all vectors in `{0,1,2}^r` with at most one coordinate equal
/// to 1, every coordinate after that 1 equal to 2, and every coordinate
/// before it in `{0,2}` — plus all vectors over `{0,2}^r`. Two vertices are
/// adjacent iff some coordinate pairs `{0,1}`.
pub fn extremal_graph(r: usize) -> Result<(Graph, VectorLabeling)> {
    if r == 0 || r > EXTREMAL_R_CAP {
        return Err(Error::InvalidInput(format!(
            "extremal construction needs 1 <= r <= {EXTREMAL_R_CAP}, got {r}"
        )));
    }

    let mut labels: Vec<Vec<u8>> = Vec::new();
    for k in 0..r {
        for bits in 0..(1u64 << k) {
            let mut v = Vec::with_capacity(r);
            for t in 0..k {
                v.push(if bits >> t & 1 == 1 { 2 } else { 0 });
            }
            v.push(1);
            v.resize(r, 2);
            labels.push(v);
        }
    }
    for bits in 0..(1u64 << r) {
        let v = (0..r).map(|t| if bits >> t & 1 == 1 { 2 } else { 0 }).collect();
        labels.push(v);
    }
    debug_assert_eq!(labels.len(), (1usize << (r + 1)) - 1);

    let labeling = VectorLabeling::new(r, labels)?;
    let n = labeling.len();
    let masks: Vec<(u64, u64)> = (0..n).map(|u| labeling.masks(u)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if (masks[u].0 & masks[v].1) | (masks[u].1 & masks[v].0) != 0 {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(n, edges)?;
    Ok((g, labeling))
}

/// Exact maximum number of vertices of a twin-free graph admitting a
/// partition into at most `r` bicliques, `r <= 3`.
///
/// Enumerates sets of distinct vectors in `{0,1,2}^r` (duplicate vectors
/// always produce twins), keeps those whose decoded partition is valid and
/// whose decoded graph is twin-free, and maximizes cardinality. Support
/// classes are capped at two vectors during the search: a third vector in a
/// class always breaks decode validity.
pub fn max_twinfree_order(r: usize) -> Result<usize> {
    if r == 0 || r > MAX_ORDER_R_CAP {
        return Err(Error::InvalidInput(format!(
            "exhaustive enumeration needs 1 <= r <= {MAX_ORDER_R_CAP}, got {r}"
        )));
    }

    // All vectors grouped by support, classes ordered by support mask.
    let mut by_support: Vec<(u64, Vec<(u64, u64)>)> = Vec::new();
    for support in 0u64..(1 << r) {
        let coords: Vec<usize> = (0..r).filter(|&i| support >> i & 1 == 1).collect();
        let mut members = Vec::new();
        for pick in 0u64..(1 << coords.len()) {
            let mut z = 0u64;
            let mut o = 0u64;
            for (t, &i) in coords.iter().enumerate() {
                if pick >> t & 1 == 1 {
                    o |= 1 << i;
                } else {
                    z |= 1 << i;
                }
            }
            members.push((z, o));
        }
        members.sort_unstable();
        by_support.push((support, members));
    }
    by_support.sort_unstable_by_key(|&(s, _)| s);

    // Suffix capacities for the branch-and-bound cut.
    let caps: Vec<usize> = by_support.iter().map(|(_, m)| m.len().min(2)).collect();
    let mut suffix = vec![0usize; by_support.len() + 1];
    for i in (0..by_support.len()).rev() {
        suffix[i] = suffix[i + 1] + caps[i];
    }

    let mut best = 0usize;
    let mut chosen: Vec<(u64, u64)> = Vec::new();
    search_classes(&by_support, &suffix, 0, &mut chosen, &mut best);
    Ok(best)
}

fn pair_consistent(a: (u64, u64), b: (u64, u64)) -> bool {
    (((a.0 & b.1) | (a.1 & b.0)).count_ones()) <= 1
}

fn search_classes(
    classes: &[(u64, Vec<(u64, u64)>)],
    suffix: &[usize],
    depth: usize,
    chosen: &mut Vec<(u64, u64)>,
    best: &mut usize,
) {
    if chosen.len() + suffix[depth] <= *best {
        return;
    }
    if depth == classes.len() {
        if accept_candidate(chosen) {
            *best = chosen.len();
        }
        return;
    }

    let members = &classes[depth].1;
    // Pairs first (largest contribution), then singletons, then skip.
    for a in 0..members.len() {
        if !chosen.iter().all(|&c| pair_consistent(c, members[a])) {
            continue;
        }
        for b in (a + 1)..members.len() {
            if !pair_consistent(members[a], members[b])
                || !chosen.iter().all(|&c| pair_consistent(c, members[b]))
            {
                continue;
            }
            chosen.push(members[a]);
            chosen.push(members[b]);
            search_classes(classes, suffix, depth + 1, chosen, best);
            chosen.pop();
            chosen.pop();
        }
    }
    for &m in members {
        if chosen.iter().all(|&c| pair_consistent(c, m)) {
            chosen.push(m);
            search_classes(classes, suffix, depth + 1, chosen, best);
            chosen.pop();
        }
    }
    search_classes(classes, suffix, depth + 1, chosen, best);
}

/// Full validation of a leaf candidate: decoded graph must be twin-free and
/// the labeling must decode to a valid partition (re-checked explicitly).
fn accept_candidate(chosen: &[(u64, u64)]) -> bool {
    let n = chosen.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let hits = (chosen[u].0 & chosen[v].1) | (chosen[u].1 & chosen[v].0);
            debug_assert!(hits.count_ones() <= 1, "search admitted an inconsistent pair");
            if hits != 0 {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(n, edges).expect("candidate graph fits");
    if !g.is_twin_free() {
        return false;
    }
    let r = 64 - chosen.iter().map(|&(z, o)| z | o).fold(0u64, |a, b| a | b).leading_zeros();
    let labels = chosen
        .iter()
        .map(|&(z, o)| {
            (0..r as usize)
                .map(|i| {
                    if z >> i & 1 == 1 {
                        0
                    } else if o >> i & 1 == 1 {
                        1
                    } else {
                        2
                    }
                })
                .collect()
        })
        .collect();
    let labeling = VectorLabeling::new(r as usize, labels).expect("masks are trits");
    decode_labeling(&g, &labeling).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{star_decomposition, validate};

    #[test]
    fn extremal_r1_is_edge_plus_isolated_vertex() {
        let (g, l) = extremal_graph(1).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 1);
        // Vertex 0 is the vector (1); vertices 1, 2 are (0) and (2).
        assert_eq!(l.label(0), &[1]);
        assert!(g.has_edge(0, 1));
        assert!(!g.is_twin_pair(1, 2).unwrap());
    }

    #[test]
    fn extremal_counts_and_decoding() {
        for r in 1..=8 {
            let (g, l) = extremal_graph(r).unwrap();
            assert_eq!(g.n(), (1 << (r + 1)) - 1, "r={r}");
            assert!(g.is_twin_free(), "r={r}");
            let p = decode_labeling(&g, &l).unwrap();
            assert!(p.size() <= r);
            assert_eq!(validate(&g, &p), Ok(()));
        }
    }

    #[test]
    fn extremal_support_classes_hold() {
        for r in 1..=6 {
            let (g, l) = extremal_graph(r).unwrap();
            assert_eq!(support_class_check(&g, &l).unwrap(), None);
        }
    }

    #[test]
    fn support_check_on_single_edge() {
        let g = Graph::complete(2).unwrap();
        let l = VectorLabeling::new(1, vec![vec![1], vec![0]]).unwrap();
        assert_eq!(support_class_check(&g, &l).unwrap(), None);
    }

    #[test]
    fn all_outside_labeling_of_empty_graph_decodes() {
        let g = Graph::empty(4).unwrap();
        let l = VectorLabeling::new(2, vec![vec![2, 2]; 4]).unwrap();
        let p = decode_labeling(&g, &l).unwrap();
        assert_eq!(p.size(), 0);
    }

    #[test]
    fn same_support_triple_rejected_at_decode() {
        // Vectors 00, 01, 10 share support {0,1}; the pair (01, 10) pairs 0/1
        // at both coordinates, so no graph is consistent with this labeling.
        let l = VectorLabeling::new(2, vec![vec![0, 0], vec![0, 1], vec![1, 0]]).unwrap();
        let g = Graph::complete(3).unwrap();
        match decode_labeling(&g, &l) {
            Err(DecodeViolation::EdgeCoveredTwice { u: 1, v: 2, .. }) => {}
            other => panic!("expected a double cover at (1,2), got {other:?}"),
        }
        // The support check refuses to run on an undecodable labeling.
        assert!(support_class_check(&g, &l).is_err());
    }

    #[test]
    fn decode_catches_non_edge_and_uncovered() {
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        // (1), (0), (0): both pairs (0,1) and (0,2) would decode as edges,
        // but (0,2) is a non-edge of the path.
        let l = VectorLabeling::new(1, vec![vec![1], vec![0], vec![0]]).unwrap();
        assert_eq!(
            decode_labeling(&path, &l),
            Err(DecodeViolation::NonEdgeCovered { u: 0, v: 2, i: 0 })
        );

        let l = VectorLabeling::new(1, vec![vec![1], vec![0], vec![2]]).unwrap();
        assert_eq!(
            decode_labeling(&path, &l),
            Err(DecodeViolation::EdgeUncovered { u: 1, v: 2 })
        );
    }

    #[test]
    fn encode_decode_is_identity_on_blocks() {
        let g = Graph::complete(5).unwrap();
        let iset = VertexSet::from_indices(5, [4]);
        let p = star_decomposition(&g, &iset).unwrap();
        let l = labeling_of_partition(&p);
        let q = decode_labeling(&g, &l).unwrap();
        assert_eq!(p.blocks, q.blocks);
    }

    #[test]
    fn labeling_json_roundtrip() {
        let (_, l) = extremal_graph(3).unwrap();
        let text = labeling_to_json(&l);
        assert_eq!(labeling_from_json(&text).unwrap(), l);
    }

    #[test]
    fn max_order_small() {
        assert_eq!(max_twinfree_order(1).unwrap(), 3);
        assert_eq!(max_twinfree_order(2).unwrap(), 7);
        assert!(max_twinfree_order(0).is_err());
        assert!(max_twinfree_order(4).is_err());
    }
}
