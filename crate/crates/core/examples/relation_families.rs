//! QCK and local QCK relations for concrete families `s: B → M_k`.

use qgraph::constructors::{canonical_lqck_family, complete_graph, trivial_graph, FamilyKind};
use qgraph::linalg::CMatrix;
use qgraph::relations::{lqck_residuals, qck_residuals, CkFamily};
use qgraph::{BlockStructure, DeltaState};

fn main() -> qgraph::Result<()> {
    let psi = DeltaState::tracial(BlockStructure::new(vec![2])?)?;
    let trivial = trivial_graph(&psi)?;
    let complete = complete_graph(&psi)?;

    let zero = CkFamily::zero(4, 1);
    println!("zero family: {:?}", qck_residuals(&zero, &trivial)?);

    // s(x) = δ^{-2} x on C²
    let s = canonical_lqck_family(&psi, &FamilyKind::Trivial, &CMatrix::identity(1, 1))?;
    println!("trivial graph:  {:?}", lqck_residuals(&s, &trivial)?.lqck);
    println!("complete graph: {:?}", lqck_residuals(&s, &complete)?.lqck);
    Ok(())
}
