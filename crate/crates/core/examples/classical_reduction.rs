//! Cuntz-Krieger families of classical graphs, read off a Fock truncation.

use qgraph::constructors::classical_graph;
use qgraph::fock::build_fock;
use qgraph::relations::classical_reduction;

fn main() -> qgraph::Result<()> {
    let g = classical_graph(&[vec![1.0, 1.0], vec![1.0, 0.0]])?;
    let f = build_fock(&g, 3)?;
    let family = f.canonical_family()?;
    let r = classical_reduction(&g, &family)?;
    println!("S_i S_i* S_i - S_i      {:.2e}", r.partial_isometry);
    println!("S_i* S_i - sum A S_j S_j* {:.2e}", r.cuntz_krieger);
    println!("sum S_i S_i* - 1        {:.2e}", r.range_sum);
    println!("QCK {:?}", r.qck);
    Ok(())
}
