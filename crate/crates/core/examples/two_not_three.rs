//! A maximal 2-robustness structure on four binary inputs whose blocks are
//! connected when two inputs must agree, but not when three must.

use knockout::robustness::RobustnessSpec;
use knockout::space::StateSpace;
use knockout::structures::{block_connected_rk, components_of, is_maximal, smallk_connectivity_check, RobustnessStructure};

fn main() -> knockout::Result<()> {
    let space = StateSpace::binary(4);
    let idx = |s: &str| space.index_of(&s.bytes().map(|b| (b - b'0') as usize).collect::<Vec<_>>());
    let blocks = vec![vec![idx("0000")?, idx("1100")?], vec![idx("0111")?, idx("1011")?]];
    let structure = RobustnessStructure::new(space.input_size(), blocks)?;
    let r2 = RobustnessSpec::r_k(&space, 2)?;

    assert_eq!(components_of(&r2, &structure.union())?, structure);
    println!("maximal for k = 2: {}", is_maximal(&structure, &r2)?);
    for (i, block) in structure.blocks().iter().enumerate() {
        println!(
            "block {i}: connected in G_2 {}, in G_3 {}",
            block_connected_rk(&space, block, 2),
            block_connected_rk(&space, block, 3)
        );
    }
    println!("connected for all s <= n - 2k + 1: {}", smallk_connectivity_check(&space, &structure, 2)?);
    Ok(())
}
