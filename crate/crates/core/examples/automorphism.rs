//! Graphs of state-preserving automorphisms: `A = δ² α`.

use qgraph::constructors::{automorphism_graph, AutomorphismSpec};
use qgraph::graph::homomorphism_check;
use qgraph::{BlockStructure, DeltaState};

fn main() -> qgraph::Result<()> {
    // swap the two summands of M₂ ⊕ M₂
    let psi = DeltaState::tracial(BlockStructure::new(vec![2, 2])?)?;
    let spec = AutomorphismSpec::permutation(psi.structure(), vec![1, 0]);
    let (g, report) = automorphism_graph(&psi, &spec)?;
    println!("Schur residual {:.2e}", g.schur_residual());
    println!("{:?}", homomorphism_check(&g)?);
    println!("{}", report.description);
    println!("summands {:?}", report.summands);

    let psi = DeltaState::uniform(3)?;
    let spec = AutomorphismSpec::permutation(psi.structure(), vec![1, 2, 0]);
    let (_, report) = automorphism_graph(&psi, &spec)?;
    println!("{}", report.description);
    Ok(())
}
