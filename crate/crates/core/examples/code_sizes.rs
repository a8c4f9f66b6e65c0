//! Structures with singleton blocks are codes: words at pairwise Hamming
//! distance at least n - k + 1. Their largest size bounds the number of
//! blocks, alongside the counting bound.

use knockout::robustness::RobustnessSpec;
use knockout::space::{NodeSet, StateSpace};
use knockout::structures::{enumerate_maximal_structures, max_singleton_code_size, structure_size_bound};

fn main() -> knockout::Result<()> {
    println!(" n  k  largest code");
    for n in 2..=5 {
        for k in 1..=n {
            println!("{n:>2} {k:>2}  {:>4}", max_singleton_code_size(n, k, 2)?);
        }
    }

    let space = StateSpace::binary(3);
    let spec = RobustnessSpec::r_k(&space, 2)?;
    let most = enumerate_maximal_structures(&spec, None)?.iter().map(|s| s.len()).max().unwrap_or(0);
    let bound = structure_size_bound(&spec, NodeSet::from_nodes([1, 2]))?;
    println!("3-cube, k = 2: most blocks {most}, counting bound {bound}, code size {}", max_singleton_code_size(3, 2, 2)?);
    Ok(())
}
