//! Recovering a quantum graph from a cyclic vector of a correspondence.

use qgraph::constructors::normalize_rank_one;
use qgraph::correspondence::{algebra_correspondence, algebra_vector, recognize, CyclicVector};
use qgraph::linalg::{real, CMatrix, C64};
use qgraph::{AlgebraElement, BlockStructure, DeltaState, TensorElement};

fn main() -> qgraph::Result<()> {
    let psi = DeltaState::tracial(BlockStructure::new(vec![2])?)?;
    let b = algebra_correspondence(&psi, None);

    let one = AlgebraElement::identity(psi.structure()).scale(real(1.0 / psi.delta()));
    let r = recognize(CyclicVector::Module(&b, &algebra_vector(&b, &one)?), &psi)?;
    println!("from 1/delta:\n{}", r.graph.matrix().map(|z| z.re));

    let t = CMatrix::from_fn(2, 2, |i, j| C64::new((i + 2 * j) as f64, 0.5));
    let t = normalize_rank_one(
        &psi,
        &AlgebraElement::from_blocks(psi.structure(), vec![t])?,
    )?;
    let xi = algebra_vector(&b, &t.adjoint().scale(real(1.0 / psi.delta())))?;
    let r = recognize(CyclicVector::Module(&b, &xi), &psi)?;
    println!("from T*/delta: isomorphism residual {:.2e}", r.residual);

    let s = psi.structure();
    let bad = TensorElement::simple(
        &AlgebraElement::unit(s, 0, 0, 0)?,
        &AlgebraElement::unit(s, 0, 0, 1)?,
        s,
    )?;
    match recognize(CyclicVector::Ambient(&bad), &psi) {
        Ok(_) => println!("e11 (x) e12 unexpectedly accepted"),
        Err(e) => println!("e11 (x) e12 rejected: {e}"),
    }
    Ok(())
}
