//! Exact minimum biclique partition size for small graphs.
//!
//! Searches for a vector labeling over `{0,1,2}^r` consistent with the graph
//! (see [`crate::twinfree`]): such a labeling exists iff the edges partition
//! into at most `r` bicliques. `r` runs from the eigenvalue-signature lower
//! bound upward.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::inertia::inertia_lower_bound;
use crate::twinfree::VectorLabeling;

/// Default cap on the number of vertices for the exact search.
pub const DEFAULT_BC_VERTEX_CAP: usize = 14;

const MAX_R: usize = 30;

/// Result of the bounded exact search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcOutcome {
    /// The exact partition number.
    Value(usize),
    /// No labeling with at most `cap` blocks exists (or the search stopped
    /// at the cap).
    Exceeded { cap: usize },
}

pub fn exact_bc(g: &Graph, cap: usize) -> Result<BcOutcome> {
    exact_bc_with_vertex_cap(g, cap, DEFAULT_BC_VERTEX_CAP)
}

pub fn exact_bc_with_vertex_cap(g: &Graph, cap: usize, vertex_cap: usize) -> Result<BcOutcome> {
    if g.n() > vertex_cap {
        return Err(Error::ExactCapExceeded { size: g.n(), cap: vertex_cap });
    }
    if cap > MAX_R {
        return Err(Error::InvalidInput(format!("block cap {cap} exceeds {MAX_R}")));
    }
    if g.edge_count() == 0 {
        return Ok(BcOutcome::Value(0));
    }
    let lb = inertia_lower_bound(g).max(1);
    for r in lb..=cap {
        if find_r_labeling(g, r).is_some() {
            return Ok(BcOutcome::Value(r));
        }
    }
    Ok(BcOutcome::Exceeded { cap })
}

/// Searches for a labeling of `g` with exactly `r` coordinates; `None` means
/// no such labeling exists, i.e. the partition number exceeds `r`.
///
/// Backtracking over per-vertex labels in degree-descending order, pruning on
/// the first violated pair. Symmetry is broken through canonical use of
/// so-far-untouched coordinates: a new label may only place 0s there, on a
/// prefix of them.
pub fn find_r_labeling(g: &Graph, r: usize) -> Option<VectorLabeling> {
    assert!(r <= MAX_R, "r={r} out of range");
    let n = g.n();
    if r == 0 {
        return if g.edge_count() == 0 {
            Some(VectorLabeling::new(0, vec![vec![]; n]).expect("trivial labeling"))
        } else {
            None
        };
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&u| (std::cmp::Reverse(g.degree(u)), u));

    // adjacency in search order
    let adj: Vec<Vec<bool>> = order
        .iter()
        .map(|&u| order.iter().map(|&v| g.has_edge(u, v)).collect())
        .collect();

    let mut labels: Vec<(u32, u32)> = vec![(0, 0); n];
    if !assign(&adj, r, 0, 0, &mut labels) {
        return None;
    }

    let mut by_vertex = vec![vec![2u8; r]; n];
    for (pos, &u) in order.iter().enumerate() {
        let (z, o) = labels[pos];
        for i in 0..r {
            if z >> i & 1 == 1 {
                by_vertex[u][i] = 0;
            } else if o >> i & 1 == 1 {
                by_vertex[u][i] = 1;
            }
        }
    }
    Some(VectorLabeling::new(r, by_vertex).expect("masks are trits"))
}

fn assign(adj: &[Vec<bool>], r: usize, pos: usize, touched: u32, labels: &mut Vec<(u32, u32)>) -> bool {
    let n = adj.len();
    if pos == n {
        return true;
    }
    let full: u32 = if r == 32 { u32::MAX } else { (1 << r) - 1 };
    let untouched: Vec<u32> = (0..r as u32)
        .filter(|&i| touched >> i & 1 == 0)
        .map(|i| 1u32 << i)
        .collect();

    // zeros-part and ones-part over touched coordinates, plus a prefix of
    // untouched coordinates set to 0 (coordinate permutations and 0/1 swaps
    // make any other use of fresh coordinates redundant).
    let mut zt = touched;
    loop {
        let rest = touched & !zt;
        let mut ot = rest;
        loop {
            let mut fresh = 0u32;
            for m in 0..=untouched.len() {
                if m > 0 {
                    fresh |= untouched[m - 1];
                }
                let zeros = zt | fresh;
                let ones = ot;
                debug_assert_eq!(zeros & ones, 0);
                debug_assert_eq!((zeros | ones) & !full, 0);
                if consistent(adj, labels, pos, zeros, ones) {
                    labels[pos] = (zeros, ones);
                    if assign(adj, r, pos + 1, touched | zeros | ones, labels) {
                        return true;
                    }
                }
            }
            if ot == 0 {
                break;
            }
            ot = (ot - 1) & rest;
        }
        if zt == 0 {
            break;
        }
        zt = (zt - 1) & touched;
    }
    false
}

fn consistent(adj: &[Vec<bool>], labels: &[(u32, u32)], pos: usize, zeros: u32, ones: u32) -> bool {
    for (q, &(zq, oq)) in labels.iter().enumerate().take(pos) {
        let hits = ((zeros & oq) | (ones & zq)).count_ones();
        let want = adj[pos][q];
        if (want && hits != 1) || (!want && hits != 0) {
            return false;
        }
    }
    true
}
