//! Classical directed graphs as quantum graphs over `C^n` with the uniform state.

use qgraph::constructors::classical_graph;
use qgraph::graph::{edge_indicator, quantum_sources_sinks};

fn main() -> qgraph::Result<()> {
    let graphs = [
        (
            "3-cycle",
            vec![
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
                vec![1.0, 0.0, 0.0],
            ],
        ),
        ("edge 0 -> 1", vec![vec![0.0, 1.0], vec![0.0, 0.0]]),
        ("golden mean", vec![vec![1.0, 1.0], vec![1.0, 0.0]]),
    ];
    for (name, adj) in graphs {
        let g = classical_graph(&adj)?;
        let ss = quantum_sources_sinks(&g);
        println!(
            "{name}: delta^2 = {}, sources {:?}, sinks {:?}",
            g.delta_sq(),
            ss.sources,
            ss.sinks
        );
        // ε = Σ_{w→v} p_v ⊗ p_w
        println!("indicator{}", edge_indicator(&g).coeffs().map(|z| z.re));
    }
    Ok(())
}
