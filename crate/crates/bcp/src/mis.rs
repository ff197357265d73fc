//! Maximum / large independent sets, exact and heuristic.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed::Seed;

/// Default cap for the exact branch-and-bound.
pub const DEFAULT_EXACT_CAP: usize = 150;

/// How hard to look for an independent set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Effort {
    /// Branch and bound; guaranteed maximum, rejected above `cap` vertices.
    Exact { cap: usize },
    /// Iterated local search: greedy start, forced-insertion perturbations,
    /// 1-out-2-in improvements; best over `restarts` independent runs.
    Heuristic { restarts: u32, iterations: u64 },
}

impl Effort {
    pub fn exact() -> Self {
        Effort::Exact { cap: DEFAULT_EXACT_CAP }
    }

    /// Light effort, enough for consistent (not optimal) witnesses.
    pub fn quick() -> Self {
        Effort::Heuristic { restarts: 3, iterations: 300 }
    }

    /// Heavier effort for when the set size itself is under study.
    pub fn thorough() -> Self {
        Effort::Heuristic { restarts: 6, iterations: 20_000 }
    }
}

/// Finds an independent subset of `restrict`. Exact mode returns a maximum
/// one (or an [`Error::ExactCapExceeded`] beyond its cap); heuristic mode is
/// deterministic in `seed`.
pub fn independent_set(
    g: &Graph,
    restrict: &VertexSet,
    effort: &Effort,
    seed: &Seed,
) -> Result<VertexSet> {
    if restrict.capacity() != g.n() {
        return Err(Error::InvalidInput(
            "restrict set sized for a different graph".into(),
        ));
    }
    match *effort {
        Effort::Exact { cap } => {
            let size = restrict.len();
            if size > cap {
                return Err(Error::ExactCapExceeded { size, cap });
            }
            Ok(max_independent_set(g, restrict))
        }
        Effort::Heuristic { restarts, iterations } => {
            Ok(heuristic_independent_set(g, restrict, restarts, iterations, seed))
        }
    }
}

/// Exact maximum independent set inside `restrict`, via maximum clique on
/// the complement with a greedy-coloring bound.
fn max_independent_set(g: &Graph, restrict: &VertexSet) -> VertexSet {
    let members = restrict.to_vec();
    let m = members.len();
    if m == 0 {
        return VertexSet::empty(g.n());
    }

    // Complement adjacency in compact index space.
    let mut comp: Vec<VertexSet> = Vec::with_capacity(m);
    for (i, &u) in members.iter().enumerate() {
        let mut row = VertexSet::empty(m);
        for (j, &v) in members.iter().enumerate() {
            if i != j && !g.has_edge(u, v) {
                row.insert(j);
            }
        }
        comp.push(row);
    }

    let mut best: Vec<usize> = greedy_clique(&comp);
    let mut cur: Vec<usize> = Vec::new();
    let cand = VertexSet::full(m);
    expand(&comp, cand, &mut cur, &mut best);

    VertexSet::from_indices(g.n(), best.iter().map(|&i| members[i]))
}

fn greedy_clique(adj: &[VertexSet]) -> Vec<usize> {
    let m = adj.len();
    let mut best = Vec::new();
    for start in 0..m {
        let mut cur = vec![start];
        let mut cand = adj[start].clone();
        while let Some(v) = cand.first() {
            cur.push(v);
            cand.intersect_with(&adj[v]);
        }
        if cur.len() > best.len() {
            best = cur;
        }
    }
    best
}

fn expand(adj: &[VertexSet], mut cand: VertexSet, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
    if cand.is_empty() {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        return;
    }

    // Greedy coloring; color numbers bound the clique extension size.
    let mut classes: Vec<VertexSet> = Vec::new();
    let mut order: Vec<(usize, usize)> = Vec::new();
    for v in cand.iter() {
        let c = classes
            .iter()
            .position(|cls| !cls.intersects(&adj[v]))
            .unwrap_or_else(|| {
                classes.push(VertexSet::empty(adj.len()));
                classes.len() - 1
            });
        classes[c].insert(v);
    }
    for (c, cls) in classes.iter().enumerate() {
        for v in cls.iter() {
            order.push((v, c + 1));
        }
    }

    for &(v, color) in order.iter().rev() {
        if cur.len() + color <= best.len() {
            return; // colors only shrink from here
        }
        cur.push(v);
        let next = cand.intersection(&adj[v]);
        expand(adj, next, cur, best);
        cur.pop();
        cand.remove(v);
    }
}

/// Iterated local search: greedy start, then rounds of a forced insertion
/// (a random outsider displaces its conflicting members), re-maximalization,
/// and 1-out-2-in improvement sweeps. Falls back to the incumbent when a
/// round loses ground. Output verified independent by construction.
fn heuristic_independent_set(
    g: &Graph,
    restrict: &VertexSet,
    restarts: u32,
    iterations: u64,
    seed: &Seed,
) -> VertexSet {
    let n = g.n();
    let members = restrict.to_vec();
    let m = members.len();
    if m == 0 {
        return VertexSet::empty(n);
    }

    let mut best = VertexSet::empty(n);
    for t in 0..restarts.max(1) {
        let mut rng = seed.child_idx(t as u64).rng();
        let mut perm = members.clone();
        perm.shuffle(&mut rng);

        let mut state = SwapState {
            g,
            restrict,
            conflicts: vec![0u32; n],
            cur: VertexSet::empty(n),
        };
        state.maximalize(&perm);
        while state.one_two_sweep(&perm) {}
        let mut incumbent = state.cur.clone();

        for _ in 0..iterations {
            let v = perm[rng.random_range(0..m)];
            if !state.cur.contains(v) {
                state.force_insert(v);
            }
            state.maximalize(&perm);
            while state.one_two_sweep(&perm) {}

            if state.cur.len() >= incumbent.len() {
                incumbent = state.cur.clone();
            } else if state.cur.len() + 2 <= incumbent.len() {
                state.reset_to(&incumbent);
            }
        }

        if incumbent.len() > best.len() {
            best = incumbent;
        }
    }
    best
}

struct SwapState<'a> {
    g: &'a Graph,
    restrict: &'a VertexSet,
    /// `|N(v) ∩ cur|` for v in restrict.
    conflicts: Vec<u32>,
    cur: VertexSet,
}

impl SwapState<'_> {
    fn add(&mut self, v: usize) {
        self.cur.insert(v);
        for w in self.g.row(v).intersection(self.restrict).iter() {
            self.conflicts[w] += 1;
        }
    }

    fn remove(&mut self, v: usize) {
        self.cur.remove(v);
        for w in self.g.row(v).intersection(self.restrict).iter() {
            self.conflicts[w] -= 1;
        }
    }

    /// Kick out everything adjacent to `v`, then take `v`.
    fn force_insert(&mut self, v: usize) {
        let clash = self.g.row(v).intersection(&self.cur);
        for u in clash.iter() {
            self.remove(u);
        }
        self.add(v);
    }

    /// Adds every conflict-free vertex, scanning in `perm` order.
    fn maximalize(&mut self, perm: &[usize]) {
        for &v in perm {
            if !self.cur.contains(v) && self.conflicts[v] == 0 {
                self.add(v);
            }
        }
    }

    fn reset_to(&mut self, target: &VertexSet) {
        self.cur = target.clone();
        self.conflicts.iter_mut().for_each(|c| *c = 0);
        for v in target.iter() {
            for w in self.g.row(v).intersection(self.restrict).iter() {
                self.conflicts[w] += 1;
            }
        }
    }

    /// One improving move: a member whose removal admits two independent
    /// outsiders. Returns whether the set grew.
    fn one_two_sweep(&mut self, perm: &[usize]) -> bool {
        let mut anchors: Vec<usize> = Vec::new();
        let mut cands: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.g.n()];
        for &v in perm {
            if self.cur.contains(v) || self.conflicts[v] != 1 {
                continue;
            }
            let u = self
                .g
                .row(v)
                .intersection(&self.cur)
                .first()
                .expect("conflict count said one neighbor");
            if slot[u] == usize::MAX {
                slot[u] = anchors.len();
                anchors.push(u);
                cands.push(Vec::new());
            }
            cands[slot[u]].push(v);
        }
        for (i, &u) in anchors.iter().enumerate() {
            let list = &cands[i];
            for (x, &a) in list.iter().enumerate() {
                for &b in &list[x + 1..] {
                    if !self.g.has_edge(a, b) {
                        self.remove(u);
                        self.add(a);
                        self.add(b);
                        return true;
                    }
                }
            }
        }
        false
    }
}
