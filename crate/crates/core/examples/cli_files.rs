//! Writing and reading the JSON graph and family files used by the `qgraph` binary.

use qgraph::cli::{example_family, example_graph, FamilyFile, GraphFile};

fn main() -> qgraph::Result<()> {
    let g = example_graph("rank-one-m2")?.expect("bundled example");
    let text = serde_json::to_string(&GraphFile::from_graph(&g)).expect("serializable");
    println!("{text}");
    let back: GraphFile = serde_json::from_str(&text).expect("parses");
    println!("reparsed delta^2 = {}", back.to_graph(1e-9)?.delta_sq());

    let f = example_family("family-two-cycle")?.expect("bundled example");
    println!(
        "{}",
        serde_json::to_string(&FamilyFile::from_family(&f)).expect("serializable")
    );
    Ok(())
}
