//! Split-and-collide decomposition: find an independent set in one half of
//! the vertices, harvest same-signature pairs from blocks of the other half
//! (a birthday-collision effect), keep a mutually independent family of
//! pairs, and emit one biclique per kept pair plus elimination stars.
//!
//! With `I` the independent set and `S` the kept pairs, the output has at
//! most `n - |I| - |S|` blocks: the pair vertices stop being star centers
//! (saving `2|S|`) at the cost of at most `|S|` pair blocks.

use std::collections::HashMap;

use rand::seq::SliceRandom;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::mis::{independent_set, Effort};
use crate::partition::{elimination_stars, Biclique, BicliquePartition};
use crate::seed::Seed;

#[derive(Clone, Copy, Debug)]
pub struct ThreeStageConfig {
    /// Effort for the independent set inside the first half.
    pub effort: Effort,
}

impl Default for ThreeStageConfig {
    fn default() -> Self {
        ThreeStageConfig { effort: Effort::quick() }
    }
}

/// A pair of distinct second-half vertices with the same neighborhood inside
/// the independent set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairWitness {
    pub a: usize,
    pub b: usize,
    /// `I ∩ N(a) = I ∩ N(b)`.
    pub common: VertexSet,
    /// Which block produced it.
    pub block: usize,
}

/// What one run did: sizes, pair statistics, and the bound slack.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThreeStageReport {
    pub iset_size: usize,
    pub block_count: usize,
    pub pairs_found: usize,
    pub pairs_selected: usize,
    pub size: usize,
    /// `n - |I| - size`; at least `pairs_selected`.
    pub savings: i64,
}

/// Runs the full pipeline. Deterministic in `(g, seed, config)`.
pub fn three_stage_decomposition(
    g: &Graph,
    seed: &Seed,
    config: &ThreeStageConfig,
) -> Result<(BicliquePartition, ThreeStageReport)> {
    let n = g.n();
    if n < 4 {
        return Err(Error::InvalidInput(format!("three-stage needs n >= 4, got {n}")));
    }

    // Deterministic halves: X is the first ceil(n/2) vertices.
    let x_size = n.div_ceil(2);
    let x = VertexSet::from_indices(n, 0..x_size);
    let y: Vec<usize> = (x_size..n).collect();

    let iset = independent_set(g, &x, &config.effort, &seed.child("alpha"))?;

    let ell = block_count(n).min(y.len()).max(1);
    let base = y.len() / ell;
    let extra = y.len() % ell;

    let mut witnesses: Vec<PairWitness> = Vec::new();
    let mut offset = 0;
    for bi in 0..ell {
        let len = base + usize::from(bi < extra);
        let block = &y[offset..offset + len];
        offset += len;
        if let Some(w) = signature_pair(g, &iset, block, bi, &seed.child("pair").child_idx(bi as u64)) {
            witnesses.push(w);
        }
    }

    // Greedy by block index: keep a pair when its two vertices extend an
    // independent set over all previously kept pair vertices.
    let mut kept: Vec<&PairWitness> = Vec::new();
    let mut occupied = VertexSet::empty(n);
    for w in &witnesses {
        if g.has_edge(w.a, w.b) {
            continue;
        }
        if g.row(w.a).intersects(&occupied) || g.row(w.b).intersects(&occupied) {
            continue;
        }
        occupied.insert(w.a);
        occupied.insert(w.b);
        kept.push(w);
    }

    let mut blocks: Vec<Biclique> = Vec::new();
    for w in &kept {
        if w.common.is_empty() {
            continue; // still saves two star centers
        }
        blocks.push(Biclique {
            left: VertexSet::from_indices(n, [w.a, w.b]),
            right: w.common.clone(),
        });
    }
    let mut centers = g.vertex_set();
    centers.difference_with(&iset);
    centers.difference_with(&occupied);
    blocks.extend(elimination_stars(g, &centers));

    let partition = BicliquePartition { n, blocks };
    let report = ThreeStageReport {
        iset_size: iset.len(),
        block_count: ell,
        pairs_found: witnesses.len(),
        pairs_selected: kept.len(),
        size: partition.size(),
        savings: (n - iset.len()) as i64 - partition.size() as i64,
    };
    debug_assert!(partition.size() <= n - iset.len() - kept.len());
    Ok((partition, report))
}

/// `max(1, round((log2 n)^{1/3}))`.
pub fn block_count(n: usize) -> usize {
    ((n as f64).log2().powf(1.0 / 3.0).round() as usize).max(1)
}

/// First pair of block vertices (in a seeded scan order) with equal
/// neighborhoods inside `iset`, if any.
pub fn signature_pair(
    g: &Graph,
    iset: &VertexSet,
    block: &[usize],
    block_idx: usize,
    seed: &Seed,
) -> Option<PairWitness> {
    assert!(
        block.iter().all(|&v| !iset.contains(v)),
        "block must be disjoint from the independent set"
    );
    let mut order = block.to_vec();
    order.shuffle(&mut seed.rng());

    let mut seen: HashMap<VertexSet, usize> = HashMap::new();
    for &v in &order {
        let sig = g.row(v).intersection(iset);
        if let Some(&a) = seen.get(&sig) {
            return Some(PairWitness { a, b: v, common: sig, block: block_idx });
        }
        seen.insert(sig, v);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{star_decomposition, validate};

    #[test]
    fn block_count_values() {
        assert_eq!(block_count(4), 1);
        assert_eq!(block_count(4096), 2); // 12^(1/3) ≈ 2.29
        assert_eq!(block_count(1 << 27), 3);
    }

    #[test]
    fn empty_graph_degenerates_cleanly() {
        let g = Graph::empty(16).unwrap();
        let (p, rep) = three_stage_decomposition(&g, &Seed::new(1), &ThreeStageConfig::default()).unwrap();
        assert_eq!(p.size(), 0);
        assert_eq!(rep.iset_size, 8);
        assert_eq!(rep.size, 0);
        assert_eq!(rep.savings, 8);
        assert_eq!(validate(&g, &p), Ok(()));
        assert!(rep.pairs_selected <= rep.pairs_found);
    }

    #[test]
    fn complete_graph_selects_nothing() {
        let g = Graph::complete(12).unwrap();
        let (p, rep) = three_stage_decomposition(&g, &Seed::new(2), &ThreeStageConfig::default()).unwrap();
        assert_eq!(rep.iset_size, 1);
        assert_eq!(rep.pairs_selected, 0);
        assert_eq!(p.size(), 11);
        assert_eq!(validate(&g, &p), Ok(()));
    }

    #[test]
    fn accounting_holds_on_random_graphs() {
        for seed in 0..8 {
            let g = Graph::gnp(96, 0.5, &Seed::new(seed)).unwrap();
            let (p, rep) =
                three_stage_decomposition(&g, &Seed::new(100 + seed), &ThreeStageConfig::default()).unwrap();
            assert_eq!(validate(&g, &p), Ok(()));
            assert!(rep.size <= 96 - rep.iset_size - rep.pairs_selected, "seed {seed}");
            assert!(rep.savings >= rep.pairs_selected as i64);
        }
    }

    #[test]
    fn signature_pair_basics() {
        // Two block vertices with empty signatures collide immediately.
        let g = Graph::empty(6).unwrap();
        let iset = VertexSet::from_indices(6, [0, 1]);
        let w = signature_pair(&g, &iset, &[3, 4], 0, &Seed::new(1)).unwrap();
        assert!(w.common.is_empty());
        assert_ne!(w.a, w.b);

        // All signatures distinct: none.
        let g = Graph::from_edges(4, [(0, 2), (0, 3), (1, 3)]).unwrap();
        let iset = VertexSet::from_indices(4, [0, 1]);
        // sig(2) = {0}, sig(3) = {0,1}
        assert!(signature_pair(&g, &iset, &[2, 3], 0, &Seed::new(1)).is_none());
    }

    #[test]
    fn signature_pair_witness_invariants() {
        let g = Graph::gnp(64, 0.5, &Seed::new(5)).unwrap();
        let x = VertexSet::from_indices(64, 0..32);
        let iset = independent_set(&g, &x, &Effort::quick(), &Seed::new(6)).unwrap();
        let block: Vec<usize> = (32..64).collect();
        if let Some(w) = signature_pair(&g, &iset, &block, 0, &Seed::new(7)) {
            assert_ne!(w.a, w.b);
            assert!(!iset.contains(w.a) && !iset.contains(w.b));
            assert_eq!(g.row(w.a).intersection(&iset), w.common);
            assert_eq!(g.row(w.b).intersection(&iset), w.common);
        }
    }

    #[test]
    fn collision_nearly_certain_in_large_blocks() {
        // Block of 256 vertices against a small independent set: 256^2 far
        // exceeds 2^|I|, so a same-signature pair exists.
        let g = Graph::gnp(2048, 0.5, &Seed::new(9)).unwrap();
        let x = VertexSet::from_indices(2048, 0..1024);
        let iset = independent_set(&g, &x, &Effort::quick(), &Seed::new(10)).unwrap();
        assert!(iset.len() >= 8);
        let block: Vec<usize> = (1024..1280).collect();
        let w = signature_pair(&g, &iset, &block, 0, &Seed::new(11));
        assert!(w.is_some());
    }

    #[test]
    fn selected_pair_vertices_form_independent_set() {
        for seed in 0..4 {
            let g = Graph::gnp(128, 0.5, &Seed::new(40 + seed)).unwrap();
            let (_, rep) =
                three_stage_decomposition(&g, &Seed::new(50 + seed), &ThreeStageConfig::default()).unwrap();
            // Re-run to grab the kept pairs through the public pieces: the
            // report already asserts the accounting; here we check the bound
            // arithmetic is self-consistent.
            assert!(rep.savings >= 0);
            assert!(rep.size + rep.iset_size + rep.pairs_selected <= 128);
        }
    }

    #[test]
    fn no_pairs_means_star_output_block_for_block() {
        // A graph whose second half has pairwise distinct signatures: use a
        // small graph and check equality when nothing is selected.
        for seed in 0..20 {
            let g = Graph::gnp(24, 0.5, &Seed::new(seed)).unwrap();
            let cfg = ThreeStageConfig::default();
            let run_seed = Seed::new(999 + seed);
            let (p, rep) = three_stage_decomposition(&g, &run_seed, &cfg).unwrap();
            if rep.pairs_selected == 0 {
                let iset = independent_set(
                    &g,
                    &VertexSet::from_indices(24, 0..12),
                    &cfg.effort,
                    &run_seed.child("alpha"),
                )
                .unwrap();
                let stars = star_decomposition(&g, &iset).unwrap();
                assert_eq!(p.blocks, stars.blocks);
                return;
            }
        }
        panic!("no seed produced an empty selection on n=24");
    }

    #[test]
    fn too_small_n_rejected() {
        let g = Graph::complete(3).unwrap();
        assert!(three_stage_decomposition(&g, &Seed::new(1), &ThreeStageConfig::default()).is_err());
    }
}
