//! Biclique partitions: data model, exact-cover validation, and the star
//! decomposition upper bound.

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// One complete bipartite block: every `left` × `right` pair must be an edge
/// of the host graph, and the two sides are disjoint and nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Biclique {
    pub left: VertexSet,
    pub right: VertexSet,
}

impl Biclique {
    pub fn edge_count(&self) -> usize {
        self.left.len() * self.right.len()
    }

    pub fn covers(&self, u: usize, v: usize) -> bool {
        (self.left.contains(u) && self.right.contains(v))
            || (self.left.contains(v) && self.right.contains(u))
    }
}

/// An ordered list of bicliques meant to cover each host edge exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicliquePartition {
    pub n: usize,
    pub blocks: Vec<Biclique>,
}

impl BicliquePartition {
    pub fn size(&self) -> usize {
        self.blocks.len()
    }
}

/// First defect found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    HostMismatch { expected: usize, got: usize },
    MalformedBlock { block: usize, reason: String },
    NonEdgeCovered { block: usize, u: usize, v: usize },
    EdgeCoveredTwice { first_block: usize, second_block: usize, u: usize, v: usize },
    EdgeUncovered { u: usize, v: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::HostMismatch { expected, got } => {
                write!(f, "partition is over {got} vertices, host has {expected}")
            }
            Violation::MalformedBlock { block, reason } => {
                write!(f, "block {block} is malformed: {reason}")
            }
            Violation::NonEdgeCovered { block, u, v } => {
                write!(f, "block {block} covers the non-edge ({u}, {v})")
            }
            Violation::EdgeCoveredTwice { first_block, second_block, u, v } => write!(
                f,
                "edge ({u}, {v}) covered by blocks {first_block} and {second_block}"
            ),
            Violation::EdgeUncovered { u, v } => write!(f, "edge ({u}, {v}) is not covered"),
        }
    }
}

/// Checks the exact-cover contract: every host edge lies in exactly one
/// block, and no block covers a non-edge. Reports the first defect.
pub fn validate(g: &Graph, p: &BicliquePartition) -> std::result::Result<(), Violation> {
    let n = g.n();
    if p.n != n {
        return Err(Violation::HostMismatch { expected: n, got: p.n });
    }

    let mut covered: Vec<VertexSet> = vec![VertexSet::empty(n); n];
    for (bi, blk) in p.blocks.iter().enumerate() {
        if blk.left.capacity() != n || blk.right.capacity() != n {
            return Err(Violation::MalformedBlock {
                block: bi,
                reason: "side sized for a different vertex count".into(),
            });
        }
        if blk.left.is_empty() || blk.right.is_empty() {
            return Err(Violation::MalformedBlock { block: bi, reason: "empty side".into() });
        }
        if blk.left.intersects(&blk.right) {
            return Err(Violation::MalformedBlock { block: bi, reason: "sides overlap".into() });
        }
        for u in blk.left.iter() {
            if let Some(v) = blk.right.difference(g.row(u)).first() {
                return Err(Violation::NonEdgeCovered { block: bi, u, v });
            }
            if let Some(v) = blk.right.intersection(&covered[u]).first() {
                let first = p.blocks[..bi]
                    .iter()
                    .position(|b| b.covers(u, v))
                    .expect("coverage mark implies an earlier covering block");
                return Err(Violation::EdgeCoveredTwice {
                    first_block: first,
                    second_block: bi,
                    u: u.min(v),
                    v: u.max(v),
                });
            }
        }
        // Mark after checking the whole block so an in-block defect reports
        // cleanly; sides are disjoint so no in-block pair repeats.
        for u in blk.left.iter() {
            covered[u].union_with(&blk.right);
        }
        for v in blk.right.iter() {
            covered[v].union_with(&blk.left);
        }
    }

    for u in 0..n {
        if let Some(v) = g.row(u).difference(&covered[u]).first() {
            return Err(Violation::EdgeUncovered { u: u.min(v), v: u.max(v) });
        }
    }
    Ok(())
}

/// Stars centered at the complement of an independent set: at most
/// `n - |iset|` blocks, each a star `{c} × (residual neighbors of c)`.
/// Centers are processed in descending residual-degree order and empty stars
/// are dropped.
pub fn star_decomposition(g: &Graph, iset: &VertexSet) -> Result<BicliquePartition> {
    if iset.capacity() != g.n() {
        return Err(Error::InvalidInput("independent set sized for a different graph".into()));
    }
    g.check_independent(iset)?;
    let mut centers = g.vertex_set();
    centers.difference_with(iset);
    Ok(BicliquePartition { n: g.n(), blocks: elimination_stars(g, &centers) })
}

/// Star cover of every edge with at least one endpoint in `centers`; edges
/// entirely outside `centers` are left untouched. Each processed center's
/// star contains its neighbors not yet used as centers.
pub(crate) fn elimination_stars(g: &Graph, centers: &VertexSet) -> Vec<Biclique> {
    let n = g.n();
    let list = centers.to_vec();
    let mut residual: Vec<usize> = vec![0; n];
    for &c in &list {
        residual[c] = g.degree(c);
    }

    let mut done = vec![false; n];
    let mut processed = VertexSet::empty(n);
    let mut blocks = Vec::new();

    for _ in 0..list.len() {
        let mut pick = usize::MAX;
        for &c in &list {
            if !done[c] && (pick == usize::MAX || residual[c] > residual[pick]) {
                pick = c;
            }
        }
        let c = pick;
        done[c] = true;

        let mut star = g.row(c).clone();
        star.difference_with(&processed);
        processed.insert(c);
        if star.is_empty() {
            continue;
        }
        for u in star.iter() {
            if centers.contains(u) {
                residual[u] -= 1;
            }
        }
        blocks.push(Biclique {
            left: VertexSet::from_indices(n, [c]),
            right: star,
        });
    }
    blocks
}

#[derive(Serialize, Deserialize)]
struct BlockDoc {
    left: Vec<usize>,
    right: Vec<usize>,
}

/// On-disk form: `{n, method, seed, blocks: [{left, right}]}`.
#[derive(Serialize, Deserialize)]
struct PartitionDoc {
    n: usize,
    method: String,
    seed: u64,
    blocks: Vec<BlockDoc>,
}

pub fn partition_to_json(p: &BicliquePartition, method: &str, seed: u64) -> String {
    let doc = PartitionDoc {
        n: p.n,
        method: method.to_string(),
        seed,
        blocks: p
            .blocks
            .iter()
            .map(|b| BlockDoc { left: b.left.to_vec(), right: b.right.to_vec() })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("partition serializes")
}

/// Returns the partition together with its `method` and `seed` metadata.
pub fn partition_from_json(text: &str) -> Result<(BicliquePartition, String, u64)> {
    let doc: PartitionDoc = serde_json::from_str(text)?;
    let mut blocks = Vec::with_capacity(doc.blocks.len());
    for (i, b) in doc.blocks.iter().enumerate() {
        for &v in b.left.iter().chain(b.right.iter()) {
            if v >= doc.n {
                return Err(Error::InvalidInput(format!(
                    "block {i} mentions vertex {v}, but n = {}",
                    doc.n
                )));
            }
        }
        blocks.push(Biclique {
            left: VertexSet::from_indices(doc.n, b.left.iter().copied()),
            right: VertexSet::from_indices(doc.n, b.right.iter().copied()),
        });
    }
    Ok((BicliquePartition { n: doc.n, blocks }, doc.method, doc.seed))
}
