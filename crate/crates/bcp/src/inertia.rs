//! Eigenvalue-signature lower bound: any exact biclique partition needs at
//! least `max(n₊, n₋)` blocks, where `n₊`/`n₋` count positive and negative
//! adjacency eigenvalues.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::graph::Graph;

/// Largest order handled by the exact rational elimination; bigger graphs
/// fall back to a floating eigensolver with a documented zero threshold.
pub const EXACT_INERTIA_CAP: usize = 64;

/// `max(n₊, n₋)`, a lower bound on the partition size of any exact biclique
/// partition of `g`.
pub fn inertia_lower_bound(g: &Graph) -> usize {
    let (pos, neg, _) = adjacency_inertia(g);
    pos.max(neg)
}

/// Counts of (positive, negative, zero) adjacency eigenvalues.
pub fn adjacency_inertia(g: &Graph) -> (usize, usize, usize) {
    if g.n() <= EXACT_INERTIA_CAP {
        inertia_exact(g)
    } else {
        inertia_float(g)
    }
}

/// Symmetric congruence elimination over the rationals; exact by Sylvester's
/// law of inertia.
pub(crate) fn inertia_exact(g: &Graph) -> (usize, usize, usize) {
    let n = g.n();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|u| {
            (0..n)
                .map(|v| BigRational::from_integer(BigInt::from(g.has_edge(u, v) as i32)))
                .collect()
        })
        .collect();

    let mut active: Vec<usize> = (0..n).collect();
    let (mut pos, mut neg) = (0usize, 0usize);

    loop {
        if active.is_empty() {
            break;
        }
        if let Some(pi) = active.iter().position(|&i| !a[i][i].is_zero()) {
            let i = active.remove(pi);
            if a[i][i].is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let d = a[i][i].clone();
            for &j in &active {
                if a[i][j].is_zero() {
                    continue;
                }
                let f = &a[i][j] / &d;
                for &k in &active {
                    let delta = &f * &a[i][k];
                    a[j][k] -= delta;
                }
            }
        } else if let Some((i, j)) = first_offdiagonal(&a, &active) {
            // Zero diagonal but nonzero entry: make a[i][i] = 2*a[i][j] by the
            // congruence v_i <- v_i + v_j, then pivot normally.
            for &k in &active {
                let t = a[j][k].clone();
                a[i][k] += t;
            }
            for &k in &active {
                let t = a[k][j].clone();
                a[k][i] += t;
            }
        } else {
            break; // remaining block is zero
        }
    }

    (pos, neg, n - pos - neg)
}

fn first_offdiagonal(a: &[Vec<BigRational>], active: &[usize]) -> Option<(usize, usize)> {
    for (x, &i) in active.iter().enumerate() {
        for &j in &active[x + 1..] {
            if !a[i][j].is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Floating path for large graphs; eigenvalues within `1e-9 * n` of zero are
/// counted as zero.
pub(crate) fn inertia_float(g: &Graph) -> (usize, usize, usize) {
    let n = g.n();
    let m = nalgebra::DMatrix::<f64>::from_fn(n, n, |u, v| g.has_edge(u, v) as i32 as f64);
    let eigen = m.symmetric_eigen();
    let tol = 1e-9 * n as f64;
    let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
    for &lambda in eigen.eigenvalues.iter() {
        if lambda > tol {
            pos += 1;
        } else if lambda < -tol {
            neg += 1;
        } else {
            zero += 1;
        }
    }
    (pos, neg, zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::Seed;

    #[test]
    fn empty_graph_all_zero() {
        let g = Graph::empty(5).unwrap();
        assert_eq!(adjacency_inertia(&g), (0, 0, 5));
        assert_eq!(inertia_lower_bound(&g), 0);
    }

    #[test]
    fn complete_graph_signature() {
        // Spectrum of K_n: one eigenvalue n-1, and -1 with multiplicity n-1.
        for n in 2..=8 {
            let g = Graph::complete(n).unwrap();
            assert_eq!(adjacency_inertia(&g), (1, n - 1, 0));
            assert_eq!(inertia_lower_bound(&g), n - 1);
        }
    }

    #[test]
    fn five_cycle_has_three_positive_eigenvalues() {
        // Eigenvalues 2cos(2πk/5): {2, 0.618, 0.618, -1.618, -1.618}.
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert_eq!(adjacency_inertia(&g), (3, 2, 0));
        assert_eq!(inertia_lower_bound(&g), 3);
    }

    #[test]
    fn star_and_path() {
        // K_{1,3}: eigenvalues ±sqrt(3) and 0,0.
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(adjacency_inertia(&star), (1, 1, 2));

        // P_4: eigenvalues ±1.618, ±0.618.
        let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(adjacency_inertia(&path), (2, 2, 0));
    }

    #[test]
    fn float_path_agrees_with_exact() {
        for seed in 0..4 {
            let g = Graph::gnp(40, 0.5, &Seed::new(seed)).unwrap();
            assert_eq!(inertia_exact(&g), inertia_float(&g), "seed {seed}");
        }
        let big = Graph::complete(80).unwrap();
        assert_eq!(adjacency_inertia(&big), (1, 79, 0));
    }
}
