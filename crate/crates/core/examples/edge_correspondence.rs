//! The quantum edge correspondence `E_G = B ε B` and its `B ⊗_A B` model.

use qgraph::constructors::{classical_graph, complete_graph, rank_one_graph};
use qgraph::correspondence::{
    build_edge_correspondence, compact_residual_of, cp_isomorphism_of, fullness_of, left_kernel_of,
    tensor_over_adjacency,
};
use qgraph::linalg::{CMatrix, CVector, C64};
use qgraph::{AlgebraElement, BlockStructure, DeltaState};

fn main() -> qgraph::Result<()> {
    let psi = DeltaState::tracial(BlockStructure::new(vec![2])?)?;
    let t = AlgebraElement::from_blocks(
        psi.structure(),
        vec![CMatrix::from_diagonal(&CVector::from_vec(vec![
            C64::new(2f64.sqrt(), 0.0),
            C64::new(0.0, 0.0),
        ]))],
    )?;
    let graphs = [
        ("complete M2", complete_graph(&psi)?),
        ("rank-one M2", rank_one_graph(&psi, &t)?),
        (
            "edge 0 -> 1",
            classical_graph(&[vec![0.0, 1.0], vec![0.0, 0.0]])?,
        ),
    ];
    for (name, g) in graphs {
        let e = build_edge_correspondence(&g)?;
        let kernel = left_kernel_of(&e);
        let full = fullness_of(&e);
        let model = cp_isomorphism_of(&e, &tensor_over_adjacency(&g)?);
        println!(
            "{name}: dim {}, ker phi dim {}, full {}",
            e.dim(),
            kernel.kernel_dim,
            full.full
        );
        println!(
            "  compacts residual {:.1e}, B (x)_A B residual {:.1e}",
            compact_residual_of(&e),
            model.max()
        );
    }
    Ok(())
}
