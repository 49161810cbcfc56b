//! Complete positivity by the Choi matrix and by modular self-adjointness of ε.

use qgraph::constructors::{complete_graph, nontracial_m2, trivial_graph};
use qgraph::graph::{cp_by_modular_criterion, is_completely_positive};
use qgraph::{AlgebraElement, LinearMapOnB};

fn main() -> qgraph::Result<()> {
    let psi = nontracial_m2();
    for g in [complete_graph(&psi)?, trivial_graph(&psi)?] {
        let choi = is_completely_positive(g.psi(), g.adjacency())?;
        println!(
            "Choi {:?}, modular {}",
            choi,
            cp_by_modular_criterion(&g, 1e-9)
        );
    }

    let s = psi.structure().clone();
    let transpose = LinearMapOnB::from_images(&s, |x| {
        AlgebraElement::from_blocks(&s, vec![x.block(0).transpose()]).expect("shape")
    });
    let r = is_completely_positive(&psi, &transpose)?;
    println!(
        "transpose: cp {}, min eigenvalue {:.3}",
        r.completely_positive, r.min_eigenvalue
    );
    Ok(())
}
