//! The complete quantum graph `A(x) = δ² ψ(x) 1` over a non-tracial `M₂`.

use qgraph::constructors::{complete_graph, complete_structure_report, nontracial_m2};
use qgraph::graph::{edge_indicator, indicator_properties};

fn main() -> qgraph::Result<()> {
    let psi = nontracial_m2();
    let g = complete_graph(&psi)?;
    println!("weights {:?}, delta^2 = {}", psi.weights(), g.delta_sq());
    println!("Schur residual {:.2e}", g.schur_residual());

    let eps = edge_indicator(&g);
    println!("indicator coefficients:\n{}", eps.coeffs());
    println!("{:?}", indicator_properties(&g));

    let report = complete_structure_report(&psi);
    println!("O(E) ~ {}", report.description);
    Ok(())
}
