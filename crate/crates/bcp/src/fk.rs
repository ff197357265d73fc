//! The structured bipartite family F(k, r, s, τ): construction, membership,
//! canonical decomposition into at most `r` bicliques, exhaustive counting,
//! planted instances, induced-copy search, and the resulting whole-graph
//! decomposition of size at most `n - k + r`.
//!
//! A member on `k` vertices has `r` pairwise disjoint groups `A_1..A_r` of
//! size `s` and a remainder side `B` of size `k - rs`. Each `b ∈ B` carries a
//! pattern vector: bit `i` set means `b` is joined to all of `A_i`, clear
//! means to none of it. Patterns are pairwise distinct, every group column
//! has at least `τ` ones, and any two columns differ on at least `τ`
//! B-vertices.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::asym::{ln_choose, LogReal, LN_2};
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::mis::{independent_set, Effort};
use crate::partition::{elimination_stars, Biclique, BicliquePartition};
use crate::seed::Seed;

/// Default cap on elementary checks for the exhaustive enumerations.
pub const DEFAULT_WORK_CAP: f64 = 1e8;

pub const DEFAULT_SAMPLE_ATTEMPTS: u64 = 10_000;

/// Largest `k` the exhaustive enumerations support (graphs are keyed by
/// their `C(k,2) <= 120` edge bits).
const MAX_ENUM_K: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub k: usize,
    pub r: usize,
    pub s: usize,
    pub tau: usize,
}

impl FamilyParams {
    pub fn new(k: usize, r: usize, s: usize, tau: usize) -> Result<Self> {
        let p = FamilyParams { k, r, s, tau };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.s == 0 {
            return Err(Error::BadParams("need r >= 1 and s >= 1".into()));
        }
        if self.r > 60 {
            return Err(Error::BadParams(format!("r = {} exceeds 60", self.r)));
        }
        if self.r * self.s >= self.k {
            return Err(Error::BadParams(format!(
                "groups use r*s = {} vertices, which must be < k = {}",
                self.r * self.s,
                self.k
            )));
        }
        Ok(())
    }

    /// Size of the pattern side `B`.
    pub fn b_size(&self) -> usize {
        self.k - self.r * self.s
    }

    /// Whether `b_size` pairwise distinct patterns of length `r` exist.
    pub fn patterns_feasible(&self) -> bool {
        self.r >= 63 || (1u64 << self.r) >= self.b_size() as u64
    }

    /// The shape used by the asymptotic analysis: `r = k/100` groups of size
    /// 10 and threshold `⌈k/3⌉`. Distinct patterns only exist once
    /// `2^{k/100} >= 0.9k`, i.e. for `k` around a thousand and beyond.
    pub fn asymptotic(k: usize) -> Result<Self> {
        if k % 100 != 0 || k == 0 {
            return Err(Error::BadParams("asymptotic shape needs k to be a positive multiple of 100".into()));
        }
        Self::new(k, k / 100, 10, k.div_ceil(3))
    }
}

/// A concrete (witnessed) family member living on vertices of some host
/// graph. `patterns[t]` belongs to `b_vertices[t]`; bit `i` refers to
/// `groups[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternedBipartite {
    pub params: FamilyParams,
    pub groups: Vec<Vec<usize>>,
    pub b_vertices: Vec<usize>,
    pub patterns: Vec<u64>,
}

impl PatternedBipartite {
    /// All member vertices, groups first.
    pub fn vertices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.groups.iter().flatten().copied().collect();
        out.extend_from_slice(&self.b_vertices);
        out
    }

    pub fn vertex_span(&self) -> usize {
        self.vertices().iter().copied().max().map_or(0, |m| m + 1)
    }

    /// Edges demanded by the pattern rule.
    pub fn member_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (t, &b) in self.b_vertices.iter().enumerate() {
            for (i, group) in self.groups.iter().enumerate() {
                if self.patterns[t] >> i & 1 == 1 {
                    for &a in group {
                        out.push((a.min(b), a.max(b)));
                    }
                }
            }
        }
        out
    }

    /// The member as a standalone graph (on `vertex_span()` vertices).
    pub fn member_graph(&self) -> Result<Graph> {
        Graph::from_edges(self.vertex_span(), self.member_edges())
    }

    /// Number of B-vertices attached to group `i`.
    pub fn column_weight(&self, i: usize) -> usize {
        self.patterns.iter().filter(|&&p| p >> i & 1 == 1).count()
    }
}

/// JSON form pinned to `{k, r, s, tau, groups, b, patterns}` with patterns
/// as 0/1 strings, character `i` for group `i`.
#[derive(Serialize, Deserialize)]
struct WitnessDoc {
    k: usize,
    r: usize,
    s: usize,
    tau: usize,
    groups: Vec<Vec<usize>>,
    b: Vec<usize>,
    patterns: Vec<String>,
}

pub fn witness_to_json(w: &PatternedBipartite) -> String {
    let doc = WitnessDoc {
        k: w.params.k,
        r: w.params.r,
        s: w.params.s,
        tau: w.params.tau,
        groups: w.groups.clone(),
        b: w.b_vertices.clone(),
        patterns: w
            .patterns
            .iter()
            .map(|&p| (0..w.params.r).map(|i| if p >> i & 1 == 1 { '1' } else { '0' }).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("witness serializes")
}

pub fn witness_from_json(text: &str) -> Result<PatternedBipartite> {
    let doc: WitnessDoc = serde_json::from_str(text)?;
    let params = FamilyParams::new(doc.k, doc.r, doc.s, doc.tau)?;
    let mut patterns = Vec::with_capacity(doc.patterns.len());
    for (t, s) in doc.patterns.iter().enumerate() {
        if s.len() != doc.r {
            return Err(Error::InvalidInput(format!(
                "pattern {t} has length {}, expected r = {}",
                s.len(),
                doc.r
            )));
        }
        let mut p = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => p |= 1 << i,
                '0' => {}
                _ => return Err(Error::InvalidInput(format!("pattern {t} must be a 0/1 string"))),
            }
        }
        patterns.push(p);
    }
    Ok(PatternedBipartite { params, groups: doc.groups, b_vertices: doc.b, patterns })
}

/// Draws a member on vertices `0..k` (groups on the first `rs` vertices, `B`
/// on the rest) by sampling distinct patterns and rejecting until the degree
/// and separation thresholds hold. Deterministic in `seed`.
pub fn sample_member(params: &FamilyParams, seed: &Seed, attempts: u64) -> Result<PatternedBipartite> {
    params.validate()?;
    if !params.patterns_feasible() {
        return Err(Error::BadParams(format!(
            "distinct patterns need 2^r >= k - r*s, got 2^{} < {}",
            params.r,
            params.b_size()
        )));
    }
    let (r, s, bsize) = (params.r, params.s, params.b_size());
    let groups: Vec<Vec<usize>> = (0..r).map(|i| (i * s..(i + 1) * s).collect()).collect();
    let b_vertices: Vec<usize> = (r * s..params.k).collect();

    let mut rng = seed.rng();
    let mut pool: Option<Vec<u64>> = (r <= 20).then(|| (0..(1u64 << r)).collect());

    for _ in 0..attempts.max(1) {
        let patterns: Vec<u64> = match pool.as_mut() {
            Some(pool) => {
                let (head, _) = pool.partial_shuffle(&mut rng, bsize);
                head.to_vec()
            }
            None => {
                let mut seen = HashSet::new();
                let mask = if r == 63 { (1u64 << 63) - 1 } else { (1u64 << r) - 1 };
                while seen.len() < bsize {
                    seen.insert(rng.random::<u64>() & mask);
                }
                let mut v: Vec<u64> = seen.into_iter().collect();
                v.sort_unstable();
                v.shuffle(&mut rng);
                v
            }
        };
        if thresholds_hold(&patterns, r, params.tau) {
            return Ok(PatternedBipartite {
                params: *params,
                groups,
                b_vertices,
                patterns,
            });
        }
    }
    Err(Error::SampleExhausted { attempts })
}

fn thresholds_hold(patterns: &[u64], r: usize, tau: usize) -> bool {
    for i in 0..r {
        if patterns.iter().filter(|&&p| p >> i & 1 == 1).count() < tau {
            return false;
        }
    }
    for i in 0..r {
        for j in (i + 1)..r {
            let differ = patterns.iter().filter(|&&p| (p >> i ^ p >> j) & 1 == 1).count();
            if differ < tau {
                return false;
            }
        }
    }
    true
}

/// Full membership check of a witness against its host graph; `Ok` means the
/// induced subgraph equals the pattern rule exactly and all thresholds hold.
pub fn check_member(g: &Graph, w: &PatternedBipartite) -> Result<()> {
    let p = &w.params;
    p.validate()?;
    let fail = |m: String| Err(Error::NotMember(m));

    if w.groups.len() != p.r {
        return fail(format!("{} groups, expected {}", w.groups.len(), p.r));
    }
    if w.groups.iter().any(|grp| grp.len() != p.s) {
        return fail(format!("every group must have size {}", p.s));
    }
    if w.b_vertices.len() != p.b_size() || w.patterns.len() != p.b_size() {
        return fail(format!("B side must have {} vertices and patterns", p.b_size()));
    }
    let verts = w.vertices();
    if verts.iter().any(|&v| v >= g.n()) {
        return fail("witness mentions a vertex outside the host".into());
    }
    let vset = VertexSet::from_indices(g.n(), verts.iter().copied());
    if vset.len() != p.k {
        return fail("witness vertices are not pairwise distinct".into());
    }

    let mut seen = HashSet::new();
    if !w.patterns.iter().all(|&pat| seen.insert(pat)) {
        return fail("patterns are not pairwise distinct".into());
    }
    for i in 0..p.r {
        let weight = w.column_weight(i);
        if weight < p.tau {
            return fail(format!("group {i} column weight {weight} below threshold {}", p.tau));
        }
    }
    for i in 0..p.r {
        for j in (i + 1)..p.r {
            let differ = w
                .patterns
                .iter()
                .filter(|&&pat| (pat >> i ^ pat >> j) & 1 == 1)
                .count();
            if differ < p.tau {
                return fail(format!(
                    "columns {i} and {j} differ on {differ} B-vertices, below threshold {}",
                    p.tau
                ));
            }
        }
    }

    // Both sides internally independent.
    let a_all: Vec<usize> = w.groups.iter().flatten().copied().collect();
    for (x, &a) in a_all.iter().enumerate() {
        for &a2 in &a_all[x + 1..] {
            if g.has_edge(a, a2) {
                return fail(format!("edge ({a}, {a2}) inside the group side"));
            }
        }
    }
    for (x, &b) in w.b_vertices.iter().enumerate() {
        for &b2 in &w.b_vertices[x + 1..] {
            if g.has_edge(b, b2) {
                return fail(format!("edge ({b}, {b2}) inside the pattern side"));
            }
        }
    }
    // Pattern rule, with no partial attachments.
    for (t, &b) in w.b_vertices.iter().enumerate() {
        for (i, group) in w.groups.iter().enumerate() {
            let want = w.patterns[t] >> i & 1 == 1;
            for &a in group {
                if g.has_edge(a, b) != want {
                    return fail(format!("pair ({a}, {b}) contradicts pattern bit {i}"));
                }
            }
        }
    }
    Ok(())
}

pub fn is_member(g: &Graph, w: &PatternedBipartite) -> bool {
    check_member(g, w).is_ok()
}

pub(crate) fn canonical_blocks(w: &PatternedBipartite, nbits: usize) -> Vec<Biclique> {
    let mut blocks = Vec::new();
    for (i, group) in w.groups.iter().enumerate() {
        let right: Vec<usize> = w
            .b_vertices
            .iter()
            .enumerate()
            .filter(|(t, _)| w.patterns[*t] >> i & 1 == 1)
            .map(|(_, &b)| b)
            .collect();
        if right.is_empty() {
            continue;
        }
        blocks.push(Biclique {
            left: VertexSet::from_indices(nbits, group.iter().copied()),
            right: VertexSet::from_indices(nbits, right),
        });
    }
    blocks
}

/// The member's defining decomposition: one block `(A_i, {b: bit i set})`
/// per group with a nonempty attachment, hence at most `r` blocks.
pub fn canonical_decomposition(w: &PatternedBipartite) -> BicliquePartition {
    let n = w.vertex_span();
    BicliquePartition { n, blocks: canonical_blocks(w, n) }
}

/// `log` of the unconstrained placement-times-pattern count
/// `[∏_{j<r} C(k - js, s)] / r! * 2^{r(k-rs)}`; an upper bound on
/// [`count_members`] since the thresholds only filter configurations.
pub fn count_formula_upper(params: &FamilyParams) -> LogReal {
    let (k, r, s) = (params.k as f64, params.r as f64, params.s as f64);
    let mut ln = 0.0;
    for j in 0..params.r {
        ln += ln_choose(k - (j as f64) * s, s);
    }
    ln -= crate::asym::ln_gamma(r + 1.0);
    ln += r * (params.b_size() as f64) * LN_2;
    LogReal::from_ln(ln)
}

/// Exact number of labeled member graphs on `k` fixed vertices, by brute
/// force over group placements and pattern assignments with graph-level
/// deduplication.
pub fn count_members(params: &FamilyParams) -> Result<u64> {
    count_members_capped(params, DEFAULT_WORK_CAP)
}

pub fn count_members_capped(params: &FamilyParams, work_cap: f64) -> Result<u64> {
    Ok(enumerate_member_graphs(params, work_cap)?.len() as u64)
}

/// Edge-bit index for the pair `u < v` on `k` vertices.
fn pair_index(k: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < k);
    u * k - u * (u + 1) / 2 + (v - u - 1)
}

/// All member graphs on vertices `0..k`, each keyed by its `C(k,2)` edge
/// bits, deduplicated and sorted.
pub(crate) fn enumerate_member_graphs(params: &FamilyParams, work_cap: f64) -> Result<Vec<u128>> {
    params.validate()?;
    let (k, r, s) = (params.k, params.r, params.s);
    if k > MAX_ENUM_K {
        return Err(Error::InvalidInput(format!("exhaustive enumeration supports k <= {MAX_ENUM_K}")));
    }
    // Work estimate: placements * pattern tuples.
    let mut ln_work = 0.0;
    for j in 0..r {
        ln_work += ln_choose((k - j * s) as f64, s as f64);
    }
    ln_work -= crate::asym::ln_gamma(r as f64 + 1.0);
    ln_work += (r * params.b_size()) as f64 * LN_2;
    let estimate = ln_work.exp();
    if estimate > work_cap {
        return Err(Error::WorkCapExceeded { estimate, cap: work_cap });
    }

    let mut graphs: HashSet<u128> = HashSet::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut used = vec![false; k];
    place_groups(params, &mut groups, &mut used, &mut graphs);

    let mut out: Vec<u128> = graphs.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// Enumerates unordered families of `r` disjoint `s`-subsets (group minima
/// ascending), then all pattern tuples for each placement.
fn place_groups(
    params: &FamilyParams,
    groups: &mut Vec<Vec<usize>>,
    used: &mut Vec<bool>,
    graphs: &mut HashSet<u128>,
) {
    let k = params.k;
    if groups.len() == params.r {
        let b_vertices: Vec<usize> = (0..k).filter(|&v| !used[v]).collect();
        let mut patterns = vec![0u64; b_vertices.len()];
        let mut taken = HashSet::new();
        assign_patterns(params, groups, &b_vertices, 0, &mut patterns, &mut taken, graphs);
        return;
    }
    // Group minima ascend, so each unordered family is produced exactly
    // once; the minimum itself ranges over all eligible unused vertices
    // (skipped vertices end up on the B side).
    let prev_min = groups.last().map(|g| g[0]);
    let pool: Vec<usize> = (0..k).filter(|&v| !used[v]).collect();
    for (idx, &first) in pool.iter().enumerate() {
        if prev_min.is_some_and(|m| first <= m) {
            continue;
        }
        let rest = &pool[idx + 1..];
        let mut combo = Vec::with_capacity(params.s - 1);
        choose_rest(rest, params.s - 1, 0, &mut combo, &mut |partners| {
            let mut grp = vec![first];
            grp.extend_from_slice(partners);
            for &v in &grp {
                used[v] = true;
            }
            groups.push(grp);
            place_groups(params, groups, used, graphs);
            let grp = groups.pop().expect("just pushed");
            for &v in &grp {
                used[v] = false;
            }
        });
    }
}

fn choose_rest(
    pool: &[usize],
    want: usize,
    start: usize,
    combo: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if combo.len() == want {
        f(combo);
        return;
    }
    let need = want - combo.len();
    if pool.len() < need || start > pool.len() - need {
        return;
    }
    for i in start..=(pool.len() - need) {
        combo.push(pool[i]);
        choose_rest(pool, want, i + 1, combo, f);
        combo.pop();
    }
}

fn assign_patterns(
    params: &FamilyParams,
    groups: &[Vec<usize>],
    b_vertices: &[usize],
    t: usize,
    patterns: &mut Vec<u64>,
    taken: &mut HashSet<u64>,
    graphs: &mut HashSet<u128>,
) {
    if t == b_vertices.len() {
        if thresholds_hold(patterns, params.r, params.tau) {
            graphs.insert(graph_key(params.k, groups, b_vertices, patterns));
        }
        return;
    }
    for pat in 0..(1u64 << params.r) {
        if taken.contains(&pat) {
            continue; // duplicate patterns never form a member
        }
        patterns[t] = pat;
        taken.insert(pat);
        assign_patterns(params, groups, b_vertices, t + 1, patterns, taken, graphs);
        taken.remove(&pat);
    }
}

fn graph_key(k: usize, groups: &[Vec<usize>], b_vertices: &[usize], patterns: &[u64]) -> u128 {
    let mut key = 0u128;
    for (t, &b) in b_vertices.iter().enumerate() {
        for (i, group) in groups.iter().enumerate() {
            if patterns[t] >> i & 1 == 1 {
                for &a in group {
                    key |= 1 << pair_index(k, a.min(b), a.max(b));
                }
            }
        }
    }
    key
}

/// Host graph on `n` vertices whose induced subgraph on a hidden member
/// equals that member exactly; every other pair is an edge with probability
/// 1/2. Returns the graph and the planted witness.
pub fn plant_member(n: usize, params: &FamilyParams, seed: &Seed) -> Result<(Graph, PatternedBipartite)> {
    if params.k > n {
        return Err(Error::BadParams(format!("k = {} exceeds host size {n}", params.k)));
    }
    let base = sample_member(params, &seed.child("member"), DEFAULT_SAMPLE_ATTEMPTS)?;

    let mut hosts: Vec<usize> = (0..n).collect();
    hosts.shuffle(&mut seed.child("embed").rng());
    hosts.truncate(params.k);

    let groups: Vec<Vec<usize>> = base
        .groups
        .iter()
        .map(|grp| {
            let mut mapped: Vec<usize> = grp.iter().map(|&v| hosts[v]).collect();
            mapped.sort_unstable();
            mapped
        })
        .collect();
    let mut bs: Vec<(usize, u64)> = base
        .b_vertices
        .iter()
        .zip(&base.patterns)
        .map(|(&v, &p)| (hosts[v], p))
        .collect();
    bs.sort_unstable_by_key(|&(v, _)| v);
    let witness = PatternedBipartite {
        params: *params,
        groups,
        b_vertices: bs.iter().map(|&(v, _)| v).collect(),
        patterns: bs.iter().map(|&(_, p)| p).collect(),
    };

    let inside = VertexSet::from_indices(n, witness.vertices());
    let mut edges = witness.member_edges();
    let mut rng = seed.child("noise").rng();
    for u in 0..n {
        for v in (u + 1)..n {
            if inside.contains(u) && inside.contains(v) {
                continue;
            }
            if rng.random_bool(0.5) {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(n, edges)?;
    debug_assert!(is_member(&g, &witness));
    Ok((g, witness))
}

/// Budget for [`find_induced_member`]: restarts of the outer B-candidate
/// loop and total backtracking nodes across the group solver.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub outer_attempts: u32,
    pub backtrack_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { outer_attempts: 64, backtrack_nodes: 200_000 }
    }
}

/// Randomized-greedy search for an induced family member of `g`.
///
/// Grows a candidate B inside a heuristic independent set, then solves for
/// the groups among exact-signature classes of the remaining vertices with
/// bounded backtracking. Sound (any returned witness passes
/// [`check_member`]) but makes no claim of non-existence on `None`.
pub fn find_induced_member(
    g: &Graph,
    params: &FamilyParams,
    seed: &Seed,
    budget: &SearchBudget,
) -> Result<Option<PatternedBipartite>> {
    params.validate()?;
    if params.k > g.n() {
        return Err(Error::BadParams(format!("k = {} exceeds host size {}", params.k, g.n())));
    }
    if !params.patterns_feasible() {
        return Ok(None); // no member can exist
    }
    let bsize = params.b_size();
    let full = g.vertex_set();
    let mut nodes = budget.backtrack_nodes;

    for attempt in 0..budget.outer_attempts {
        let sd = seed.child_idx(attempt as u64);
        let effort = Effort::Heuristic { restarts: 2, swaps: 4 * g.n() as u64 };
        let iset = independent_set(g, &full, &effort, &sd.child("is"))
            .expect("heuristic effort cannot fail");
        if iset.len() < bsize {
            continue;
        }
        let mut pool = iset.to_vec();
        pool.shuffle(&mut sd.child("pick").rng());
        pool.truncate(bsize);
        pool.sort_unstable();

        if let Some(w) = solve_groups(g, params, &pool, &mut nodes) {
            debug_assert!(is_member(g, &w));
            return Ok(Some(w));
        }
        if nodes == 0 {
            break;
        }
    }
    Ok(None)
}

/// Given a fixed independent B, looks for `r` signature classes and `s`
/// mutually independent members of each that satisfy all thresholds.
fn solve_groups(
    g: &Graph,
    params: &FamilyParams,
    b: &[usize],
    nodes: &mut u64,
) -> Option<PatternedBipartite> {
    let bset = VertexSet::from_indices(g.n(), b.iter().copied());
    let mut by_sig: HashMap<u64, Vec<usize>> = HashMap::new();
    for u in 0..g.n() {
        if bset.contains(u) {
            continue;
        }
        let mut sig = 0u64;
        for (t, &bv) in b.iter().enumerate() {
            if g.has_edge(u, bv) {
                sig |= 1 << t;
            }
        }
        if sig.count_ones() as usize >= params.tau {
            by_sig.entry(sig).or_default().push(u);
        }
    }
    let mut classes: Vec<(u64, Vec<usize>)> = by_sig
        .into_iter()
        .filter(|(_, members)| members.len() >= params.s)
        .collect();
    classes.sort_unstable_by_key(|&(sig, _)| sig);
    if classes.len() < params.r {
        return None;
    }

    let mut picked_classes: Vec<usize> = Vec::with_capacity(params.r);
    pick_classes(g, params, b, &classes, 0, &mut picked_classes, nodes)
}

fn pick_classes(
    g: &Graph,
    params: &FamilyParams,
    b: &[usize],
    classes: &[(u64, Vec<usize>)],
    start: usize,
    picked: &mut Vec<usize>,
    nodes: &mut u64,
) -> Option<PatternedBipartite> {
    if *nodes == 0 {
        return None;
    }
    *nodes -= 1;

    if picked.len() == params.r {
        // Patterns induced on B must be pairwise distinct.
        let mut seen = HashSet::new();
        let patterns: Vec<u64> = (0..b.len())
            .map(|t| {
                picked
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &c)| acc | (classes[c].0 >> t & 1) << i)
            })
            .collect();
        if !patterns.iter().all(|&p| seen.insert(p)) {
            return None;
        }
        let mut groups: Vec<Vec<usize>> = Vec::with_capacity(params.r);
        let mut chosen = VertexSet::empty(g.n());
        return pick_members(g, params, b, classes, picked, &patterns, &mut groups, &mut chosen, nodes);
    }

    for c in start..classes.len() {
        let sig = classes[c].0;
        if picked
            .iter()
            .any(|&prev| (classes[prev].0 ^ sig).count_ones() < params.tau as u32)
        {
            continue;
        }
        picked.push(c);
        if let Some(w) = pick_classes(g, params, b, classes, c + 1, picked, nodes) {
            return Some(w);
        }
        picked.pop();
        if *nodes == 0 {
            return None;
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn pick_members(
    g: &Graph,
    params: &FamilyParams,
    b: &[usize],
    classes: &[(u64, Vec<usize>)],
    picked: &[usize],
    patterns: &[u64],
    groups: &mut Vec<Vec<usize>>,
    chosen: &mut VertexSet,
    nodes: &mut u64,
) -> Option<PatternedBipartite> {
    if groups.len() == params.r {
        return Some(PatternedBipartite {
            params: *params,
            groups: groups.clone(),
            b_vertices: b.to_vec(),
            patterns: patterns.to_vec(),
        });
    }
    let members = &classes[picked[groups.len()]].1;
    let mut combo: Vec<usize> = Vec::with_capacity(params.s);
    pick_group_combo(g, params, b, classes, picked, patterns, groups, chosen, members, 0, &mut combo, nodes)
}

#[allow(clippy::too_many_arguments)]
fn pick_group_combo(
    g: &Graph,
    params: &FamilyParams,
    b: &[usize],
    classes: &[(u64, Vec<usize>)],
    picked: &[usize],
    patterns: &[u64],
    groups: &mut Vec<Vec<usize>>,
    chosen: &mut VertexSet,
    members: &[usize],
    start: usize,
    combo: &mut Vec<usize>,
    nodes: &mut u64,
) -> Option<PatternedBipartite> {
    if *nodes == 0 {
        return None;
    }
    *nodes -= 1;

    if combo.len() == params.s {
        groups.push(combo.clone());
        for &v in combo.iter() {
            chosen.insert(v);
        }
        let res = pick_members(g, params, b, classes, picked, patterns, groups, chosen, nodes);
        for &v in combo.iter() {
            chosen.remove(v);
        }
        groups.pop();
        return res;
    }
    for i in start..members.len() {
        let v = members[i];
        if g.row(v).intersects(chosen) || combo.iter().any(|&u| g.has_edge(u, v)) {
            continue;
        }
        combo.push(v);
        if let Some(w) = pick_group_combo(
            g, params, b, classes, picked, patterns, groups, chosen, members, i + 1, combo, nodes,
        ) {
            return Some(w);
        }
        combo.pop();
        if *nodes == 0 {
            return None;
        }
    }
    None
}

/// Decomposes all edges of `g` given an induced member: the member's
/// canonical blocks plus elimination stars centered at the `n - k` outside
/// vertices. At most `n - k + r` blocks.
pub fn fk_decomposition(g: &Graph, w: &PatternedBipartite) -> Result<BicliquePartition> {
    check_member(g, w)?;
    let mut blocks = canonical_blocks(w, g.n());
    let mut centers = g.vertex_set();
    for v in w.vertices() {
        centers.remove(v);
    }
    blocks.extend(elimination_stars(g, &centers));
    Ok(BicliquePartition { n: g.n(), blocks })
}

/// Exhaustively counts graphs on `K ∪ K'` (with `|K ∩ K'| = k - j`) whose
/// induced subgraphs on both `K` and `K'` are members, and returns the count
/// together with the bound `count_members * (r + 2^r)^j * 2^{(k-rs) j / s}`.
pub fn joint_extension_count(params: &FamilyParams, j: usize) -> Result<(u64, f64)> {
    joint_extension_count_capped(params, j, DEFAULT_WORK_CAP)
}

pub fn joint_extension_count_capped(params: &FamilyParams, j: usize, work_cap: f64) -> Result<(u64, f64)> {
    params.validate()?;
    let k = params.k;
    if j > params.r * params.s {
        return Err(Error::BadParams(format!(
            "overlap deficit j = {j} exceeds the group side size {}",
            params.r * params.s
        )));
    }
    let members = enumerate_member_graphs(params, work_cap)?;
    let count_k = members.len() as u64;
    let bound = count_k as f64
        * (params.r as f64 + 2f64.powi(params.r as i32)).powi(j as i32)
        * 2f64.powf(params.b_size() as f64 * j as f64 / params.s as f64);
    if j == 0 {
        return Ok((count_k, count_k as f64));
    }

    // K = {0..k}, K' = {j..k+j}; free pairs are those inside K' with at
    // least one endpoint in K' \ K. Everything is indexed in K'-local
    // coordinates (global v maps to v - j).
    let overlap = k - j;
    let free: Vec<(usize, usize)> = {
        let mut out = Vec::new();
        for u in 0..k {
            for v in (u + 1)..k {
                if v >= overlap {
                    out.push((u, v));
                }
            }
        }
        out
    };
    let estimate = members.len() as f64 * 2f64.powi(free.len() as i32);
    if estimate > work_cap {
        return Err(Error::WorkCapExceeded { estimate, cap: work_cap });
    }

    let member_set: HashSet<u128> = members.iter().copied().collect();
    let mut count = 0u64;
    for &m in &members {
        // Fixed part of K': pairs with both endpoints in the overlap, read
        // from the member on K (local a maps to global a + j).
        let mut base = 0u128;
        for u in 0..overlap {
            for v in (u + 1)..overlap {
                if m >> pair_index(k, u + j, v + j) & 1 == 1 {
                    base |= 1 << pair_index(k, u, v);
                }
            }
        }
        for bits in 0u64..(1 << free.len()) {
            let mut key = base;
            for (t, &(u, v)) in free.iter().enumerate() {
                if bits >> t & 1 == 1 {
                    key |= 1 << pair_index(k, u, v);
                }
            }
            if member_set.contains(&key) {
                count += 1;
            }
        }
    }
    Ok((count, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::validate;

    fn params(k: usize, r: usize, s: usize, tau: usize) -> FamilyParams {
        FamilyParams::new(k, r, s, tau).unwrap()
    }

    #[test]
    fn sample_8222_uses_all_four_patterns() {
        for seed in 0..5 {
            let w = sample_member(&params(8, 2, 2, 2), &Seed::new(seed), 1000).unwrap();
            let mut pats = w.patterns.clone();
            pats.sort_unstable();
            assert_eq!(pats, vec![0b00, 0b01, 0b10, 0b11]);
            assert!(is_member(&w.member_graph().unwrap(), &w));
        }
    }

    #[test]
    fn sample_rejects_unsatisfiable_threshold() {
        // Four distinct length-2 patterns have column sums exactly 2 < 3.
        let err = sample_member(&params(8, 2, 2, 3), &Seed::new(1), 200);
        assert!(matches!(err, Err(Error::SampleExhausted { .. })));
    }

    #[test]
    fn sample_rejects_infeasible_distinctness() {
        // 2^r < k - rs: pigeonhole.
        let err = sample_member(&params(12, 2, 2, 3), &Seed::new(1), 10);
        assert!(matches!(err, Err(Error::BadParams(_))));
    }

    #[test]
    fn membership_detects_tampering() {
        let w = sample_member(&params(8, 2, 2, 2), &Seed::new(7), 1000).unwrap();
        let g = w.member_graph().unwrap();
        assert!(is_member(&g, &w));

        // An extra edge inside the group side breaks membership.
        let mut edges = w.member_edges();
        edges.push((0, 2));
        let g2 = Graph::from_edges(g.n(), edges).unwrap();
        assert!(!is_member(&g2, &w));

        // A duplicated pattern breaks distinctness.
        let mut w2 = w.clone();
        w2.patterns[0] = w2.patterns[1];
        let g3 = w2.member_graph().unwrap();
        assert!(!is_member(&g3, &w2));
    }

    #[test]
    fn canonical_decomposition_on_8222() {
        let w = sample_member(&params(8, 2, 2, 2), &Seed::new(3), 1000).unwrap();
        let p = canonical_decomposition(&w);
        assert_eq!(p.size(), 2);
        assert!(p.blocks.iter().all(|b| b.edge_count() == 4));
        let g = w.member_graph().unwrap();
        assert_eq!(g.edge_count(), 8);
        assert_eq!(validate(&g, &p), Ok(()));
    }

    #[test]
    fn canonical_decomposition_drops_empty_columns() {
        let w = PatternedBipartite {
            params: params(6, 2, 1, 0),
            groups: vec![vec![0], vec![1]],
            b_vertices: vec![2, 3, 4, 5],
            patterns: vec![0b00, 0b01, 0b11, 0b10],
        };
        let g = w.member_graph().unwrap();
        assert!(is_member(&g, &w));
        assert_eq!(canonical_decomposition(&w).size(), 2);

        // tau = 0 admits a column nobody attaches to; its block disappears.
        let w2 = PatternedBipartite {
            params: params(4, 2, 1, 0),
            groups: vec![vec![0], vec![1]],
            b_vertices: vec![2, 3],
            patterns: vec![0b00, 0b01],
        };
        assert!(is_member(&w2.member_graph().unwrap(), &w2));
        assert_eq!(canonical_decomposition(&w2).size(), 1);
    }

    #[test]
    fn midsize_sampled_member_decomposes() {
        let pr = params(60, 6, 4, 10);
        let w = sample_member(&pr, &Seed::new(11), 10_000).unwrap();
        let g = w.member_graph().unwrap();
        assert!(is_member(&g, &w));
        let p = canonical_decomposition(&w);
        assert!(p.size() <= 6);
        assert_eq!(validate(&g, &p), Ok(()));
    }

    #[test]
    fn count_8222() {
        assert_eq!(count_members(&params(8, 2, 2, 2)).unwrap(), 5040);
        assert_eq!(count_members(&params(8, 2, 2, 3)).unwrap(), 0);
    }

    #[test]
    fn count_infeasible_distinctness_is_zero() {
        // |B| = 3 but only two distinct length-1 patterns exist.
        assert_eq!(count_members(&params(5, 1, 2, 0)).unwrap(), 0);
    }

    #[test]
    fn count_is_below_formula_upper_bound() {
        for p in [
            params(8, 2, 2, 2),
            params(8, 2, 2, 3),
            params(6, 2, 2, 0),
            params(6, 2, 1, 1),
            params(7, 2, 2, 1),
            params(9, 2, 3, 2),
        ] {
            let count = count_members(&p).unwrap() as f64;
            let upper = count_formula_upper(&p).ln().unwrap().exp();
            assert!(count <= upper * (1.0 + 1e-9), "{p:?}: {count} > {upper}");
        }
    }

    #[test]
    fn formula_single_group_value() {
        // r = 1, s = k-1: C(k, k-1) * 2^{1 * 1} = 2k.
        for k in [4usize, 6, 9] {
            let p = params(k, 1, k - 1, 0);
            let v = count_formula_upper(&p).ln().unwrap();
            assert!((v - (2.0 * k as f64).ln()).abs() < 1e-9);
        }
        let p = params(8, 2, 2, 2);
        let v = count_formula_upper(&p).ln().unwrap();
        assert!((v - (53760f64).ln()).abs() < 1e-9);
    }

    #[test]
    fn work_cap_is_enforced() {
        let err = count_members_capped(&params(16, 2, 2, 2), 1e4);
        assert!(matches!(err, Err(Error::WorkCapExceeded { .. })));
    }

    #[test]
    fn plant_and_check() {
        let pr = params(12, 3, 2, 3);
        for seed in 0..5 {
            let (g, w) = plant_member(60, &pr, &Seed::new(seed)).unwrap();
            assert_eq!(g.n(), 60);
            assert!(is_member(&g, &w));
            let p = fk_decomposition(&g, &w).unwrap();
            assert!(p.size() <= 60 - 12 + 3);
            assert_eq!(validate(&g, &p), Ok(()));
        }
    }

    #[test]
    fn fk_decomposition_of_bare_member_is_canonical() {
        let w = sample_member(&params(8, 2, 2, 2), &Seed::new(5), 1000).unwrap();
        let g = w.member_graph().unwrap();
        let p = fk_decomposition(&g, &w).unwrap();
        assert!(p.size() <= 2);
        assert_eq!(validate(&g, &p), Ok(()));
    }

    #[test]
    fn fk_decomposition_rejects_non_member() {
        let w = sample_member(&params(8, 2, 2, 2), &Seed::new(5), 1000).unwrap();
        let g = Graph::complete(8).unwrap();
        assert!(matches!(fk_decomposition(&g, &w), Err(Error::NotMember(_))));
    }

    #[test]
    fn planted_recovery() {
        let pr = params(12, 3, 2, 3);
        for seed in [1u64, 2, 3, 4, 5] {
            let (g, _) = plant_member(200, &pr, &Seed::new(seed)).unwrap();
            let found = find_induced_member(&g, &pr, &Seed::new(1000 + seed), &SearchBudget::default())
                .unwrap();
            let w = found.unwrap_or_else(|| panic!("seed {seed}: no member found"));
            assert!(is_member(&g, &w));
            let p = fk_decomposition(&g, &w).unwrap();
            assert!(p.size() <= 200 - 12 + 3);
            assert_eq!(validate(&g, &p), Ok(()));
        }
    }

    #[test]
    fn search_on_complete_graph_finds_nothing() {
        let g = Graph::complete(30).unwrap();
        let pr = params(12, 3, 2, 3);
        let got = find_induced_member(&g, &pr, &Seed::new(1), &SearchBudget::default()).unwrap();
        assert!(got.is_none());
    }

    #[test]
    fn search_recovers_member_from_its_own_graph() {
        let pr = params(12, 3, 2, 3);
        let w = sample_member(&pr, &Seed::new(21), 10_000).unwrap();
        let g = w.member_graph().unwrap();
        let budget = SearchBudget { outer_attempts: 512, backtrack_nodes: 500_000 };
        let found = find_induced_member(&g, &pr, &Seed::new(77), &budget).unwrap();
        let got = found.expect("the member graph contains itself");
        assert!(is_member(&g, &got));
    }

    #[test]
    fn joint_extensions_respect_bound() {
        let pr = params(8, 2, 2, 2);
        let (c0, b0) = joint_extension_count(&pr, 0).unwrap();
        assert_eq!(c0, 5040);
        assert_eq!(b0, 5040.0);

        let (c1, b1) = joint_extension_count(&pr, 1).unwrap();
        assert!((b1 - 5040.0 * 6.0 * 4.0).abs() < 1e-6);
        assert!(c1 as f64 <= b1, "{c1} > {b1}");
        assert!(c1 > 0, "a member extends to at least one overlapping pair");

        // Empty family: zero against a zero bound.
        let (c, b) = joint_extension_count(&params(8, 2, 2, 3), 1).unwrap();
        assert_eq!(c, 0);
        assert_eq!(b, 0.0);
    }

    #[test]
    fn witness_json_roundtrip() {
        let w = sample_member(&params(8, 2, 2, 2), &Seed::new(13), 1000).unwrap();
        let text = witness_to_json(&w);
        assert_eq!(witness_from_json(&text).unwrap(), w);
    }
}
