//! Relabelling a classical graph is a quantum isomorphism.

use qgraph::constructors::{classical_graph, permutation_isomorphism, relabel_classical};
use qgraph::graph::quantum_isomorphism_residual;

fn main() -> qgraph::Result<()> {
    let adj = vec![
        vec![0.0, 1.0, 1.0],
        vec![0.0, 0.0, 1.0],
        vec![1.0, 0.0, 0.0],
    ];
    let perm = [2, 0, 1];
    let g1 = classical_graph(&adj)?;
    let g2 = classical_graph(&relabel_classical(&adj, &perm)?)?;
    let theta = permutation_isomorphism(&perm)?;
    let r = quantum_isomorphism_residual(&g1, &g2, &theta)?;
    println!("{r:?}");

    // the identity does not intertwine the two adjacency matrices
    let r = quantum_isomorphism_residual(&g1, &g2, &permutation_isomorphism(&[0, 1, 2])?)?;
    println!(
        "identity: adjacency covariance {:.2e}",
        r.adjacency_covariance
    );
    Ok(())
}
