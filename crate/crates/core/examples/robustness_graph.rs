//! Connected components of a robustness graph and their DOT rendering.
//!
//! Eight states of the binary 4-cube split into two cylinder sets when three
//! agreeing inputs are required, and merge into one block when two suffice.
//!
//! ```text
//! cargo run --example robustness_graph > fig.dot
//! ```

use knockout::robustness::RobustnessSpec;
use knockout::space::StateSpace;
use knockout::structures::{build_graph, components_of, export_dot};

fn main() -> knockout::Result<()> {
    let space = StateSpace::binary(4);
    let set: Vec<usize> = ["0000", "0010", "0101", "0111", "1000", "1010", "1101", "1111"]
        .iter()
        .map(|s| space.index_of(&s.bytes().map(|b| (b - b'0') as usize).collect::<Vec<_>>()))
        .collect::<knockout::Result<_>>()?;

    for k in [3, 2] {
        let spec = RobustnessSpec::r_k(&space, k)?;
        let structure = components_of(&spec, &set)?;
        eprintln!("k = {k}: {} block(s)", structure.len());
        for block in structure.blocks() {
            let words: Vec<String> = block
                .iter()
                .map(|&x| space.coords_of(x).iter().map(|v| v.to_string()).collect())
                .collect();
            eprintln!("  {}", words.join(" "));
        }
    }

    let spec = RobustnessSpec::r_k(&space, 3)?;
    let graph = build_graph(&spec, &set)?;
    print!("{}", export_dot(&graph, Some(&components_of(&spec, &set)?)));
    Ok(())
}
