//! Nested covering of a diagonal Hopf manifold and its transition chains.

use germlin::hopf::{
    build_covering, covering_monte_carlo, hopf_transition_graph, rational_from_ratio, transition_chain_search,
    uniform_base_radii,
};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = vec![rational_from_ratio(1, 3), rational_from_ratio(1, 2)];
    let r1 = uniform_base_radii(&alpha, &rational_from_ratio(1, 1));
    let cov = build_covering(&alpha, 0.12, &r1)?;
    println!("r4 = {:?}, covers = {}", cov.r4, cov.covers);
    let mc = covering_monte_carlo(&cov, 10_000, 1);
    println!("Monte-Carlo: {} uncovered, {} triple overlaps", mc.uncovered, mc.triple_overlaps);

    let graph = hopf_transition_graph(cov.n(), Complex64::new(0.5, 0.2));
    for (node, chain) in graph.nodes.iter().zip(transition_chain_search(&graph)) {
        let path: Option<Vec<&str>> = chain.map(|c| c.nodes.iter().map(|&k| graph.nodes[k].as_str()).collect());
        println!("{node}: {path:?}");
    }
    Ok(())
}
