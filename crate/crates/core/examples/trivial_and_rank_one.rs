//! The trivial graph `A = δ² id` and a rank-one graph `A(x) = T x T^*`.

use qgraph::constructors::{
    rank_one_graph, rank_one_normalization, rank_one_structure_report, trivial_graph,
    trivial_structure_report,
};
use qgraph::linalg::{CMatrix, C64};
use qgraph::{AlgebraElement, BlockStructure, DeltaState};

fn main() -> qgraph::Result<()> {
    let psi = DeltaState::tracial(BlockStructure::new(vec![2])?)?;
    let g = trivial_graph(&psi)?;
    println!("trivial: Schur residual {:.2e}", g.schur_residual());
    println!("  {}", trivial_structure_report(&psi).description);

    let t = CMatrix::from_diagonal(&qgraph::linalg::CVector::from_vec(vec![
        C64::new(2f64.sqrt(), 0.0),
        C64::new(0.0, 0.0),
    ]));
    let t = AlgebraElement::from_blocks(psi.structure(), vec![t])?;
    println!(
        "Tr(rho^-1 T*T) per block {:?}",
        rank_one_normalization(&psi, &t)?
    );
    let g = rank_one_graph(&psi, &t)?;
    println!("rank-one: Schur residual {:.2e}", g.schur_residual());
    println!("  {}", rank_one_structure_report(&psi, &t).description);
    Ok(())
}
