//! Biclique edge partitions of graphs: constructions, bounds, exact oracles,
//! and seeded experiments.
//!
//! A biclique partition covers every edge of a graph by exactly one complete
//! bipartite block. The crate provides:
//!
//! - [`graph`]: bit-matrix graphs, random generation, twins, edge-list I/O;
//! - [`mis`]: exact and heuristic independent sets;
//! - [`partition`]: the partition model, exact-cover validation, and the
//!   `n - α(G)` star decomposition;
//! - [`inertia`]: the eigenvalue-signature lower bound;
//! - [`exact_bc`]: exact partition numbers for small graphs;
//! - [`fk`]: the structured bipartite family `F(k, r, s, τ)` with sampling,
//!   counting, planted instances, induced-copy search, and the
//!   `n - k + r` decomposition;
//! - [`three_stage`]: the split-and-collide decomposition that beats the
//!   star bound by the number of kept same-signature pairs;
//! - [`twinfree`]: vector labelings, the `2^{r+1} - 1` twin-free extremal
//!   construction, and its exhaustive verification at small `r`;
//! - [`asym`]: log-domain evaluation of the closed-form quantities;
//! - [`experiment`]: reproducible experiment batches with CSV/JSON output.
//!
//! Runnable examples for each capability live under `examples/`; the `bcp`
//! binary exposes the same operations as subcommands.

pub mod asym;
pub mod bitset;
pub mod error;
pub mod exact_bc;
pub mod experiment;
pub mod fk;
pub mod graph;
pub mod inertia;
pub mod mis;
pub mod partition;
pub mod seed;
pub mod three_stage;
pub mod twinfree;

pub use bitset::VertexSet;
pub use error::{Error, Result};
pub use exact_bc::{exact_bc, BcOutcome};
pub use graph::Graph;
pub use inertia::inertia_lower_bound;
pub use mis::{independent_set, Effort};
pub use partition::{star_decomposition, validate, Biclique, BicliquePartition};
pub use seed::Seed;
