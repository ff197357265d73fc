use std::time::Instant;
use bcp::*;
use bcp::asym::alpha_prediction;
use bcp::exact_bc::exact_bc_with_vertex_cap;
use bcp::twinfree::{extremal_graph, max_twinfree_order};
use bcp::mis::Effort;

fn main() {
    let t0 = Instant::now();
    for n in 2..=8 {
        let g = Graph::complete(n).unwrap();
        let t = Instant::now();
        let bc = exact_bc(&g, 10).unwrap();
        println!("K_{n}: {:?} in {:?}", bc, t.elapsed());
    }
    println!("total K_n: {:?}", t0.elapsed());

    let t = Instant::now();
    println!("maxorder(3) = {:?} in {:?}", max_twinfree_order(3), t.elapsed());

    let (g3, _) = extremal_graph(3).unwrap();
    println!("inertia(extremal(3)) = {}", inertia_lower_bound(&g3));
    let t = Instant::now();
    let bc3 = exact_bc_with_vertex_cap(&g3, 4, 16);
    println!("exact_bc(extremal(3)) = {:?} in {:?}", bc3, t.elapsed());

    // alpha quality at n=1024
    let t = Instant::now();
    let pred = alpha_prediction(1024.0, 0.5).unwrap();
    let mut worst = f64::INFINITY;
    for seed in 0..20u64 {
        let g = Graph::gnp(1024, 0.5, &Seed::new(seed).child("gnp")).unwrap();
        let s = independent_set(&g, &g.vertex_set(),
            &Effort::Heuristic { restarts: 4, swaps: 120_000 }, &Seed::new(seed).child("alpha")).unwrap();
        let slack = s.len() as f64 - pred;
        if slack < worst { worst = slack; }
        print!("{} ", s.len());
    }
    println!("\npred={pred:.3} worst slack={worst:.3} elapsed={:?}", t.elapsed());
}
