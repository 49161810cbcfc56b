//! Truncated Fock module of the complete graph over `C²`.

use qgraph::constructors::complete_graph;
use qgraph::fock::{build_fock, fock_relations, representation_residuals};
use qgraph::DeltaState;

fn main() -> qgraph::Result<()> {
    let g = complete_graph(&DeltaState::uniform(2)?)?;
    let f = build_fock(&g, 3)?;
    println!("level dims {:?}", f.level_dims());
    let rep = representation_residuals(&f);
    println!("T*T - pi(<,>)     {:.2e}", rep.toeplitz);
    println!("covariance        {:.2e}", rep.covariance);
    println!("vacuum defect     {:.2e}", rep.vacuum_defect);
    let rel = fock_relations(&f);
    println!("LQCK (interior)   {:?}", rel.lqck);
    println!("LQCK3 with vacuum {:.2e}", rel.lqck3_with_vacuum);
    Ok(())
}
