//! Every maximal 2-robustness structure of the binary 3-cube, grouped by the
//! shape of the states left out.

use std::collections::BTreeMap;

use knockout::robustness::RobustnessSpec;
use knockout::space::StateSpace;
use knockout::structures::{enumerate_maximal_structures, enumerate_maximal_structures_with, EnumerateOptions};

fn word(space: &StateSpace, x: usize) -> String {
    space.coords_of(x).iter().map(|v| v.to_string()).collect()
}

fn main() -> knockout::Result<()> {
    let space = StateSpace::binary(3);
    let spec = RobustnessSpec::r_k(&space, 2)?;
    let all = enumerate_maximal_structures(&spec, None)?;
    println!("{} maximal structures", all.len());

    let mut by_size: BTreeMap<usize, usize> = BTreeMap::new();
    for st in &all {
        let union = st.union();
        let left_out: Vec<String> = (0..8).filter(|x| !union.contains(x)).map(|x| word(&space, x)).collect();
        *by_size.entry(left_out.len()).or_default() += 1;
        let blocks: Vec<String> =
            st.blocks().iter().map(|b| b.iter().map(|&x| word(&space, x)).collect::<Vec<_>>().join(",")).collect();
        println!("  blocks [{}]  left out {{{}}}", blocks.join("] ["), left_out.join(","));
    }
    println!("left-out sizes: {by_size:?}");

    let reps = enumerate_maximal_structures_with(&spec, &EnumerateOptions { limit: None, up_to_symmetry: true })?;
    println!("{} classes under cube symmetries", reps.len());
    Ok(())
}
