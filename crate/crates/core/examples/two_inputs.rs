//! Maximal 1-robustness structures of two inputs: built directly as unions of
//! products, and cross-checked against exhaustive enumeration.

use knockout::robustness::RobustnessSpec;
use knockout::space::StateSpace;
use knockout::structures::{check_product_structure, enumerate_maximal_structures, fink_maximal_structures};

fn main() -> knockout::Result<()> {
    for (d1, d2) in [(2, 2), (2, 3), (3, 3), (4, 3)] {
        let space = StateSpace::new(vec![2, d1, d2])?;
        let direct = fink_maximal_structures(d1, d2)?;
        let enumerated = enumerate_maximal_structures(&RobustnessSpec::r_k(&space, 1)?, None)?;
        let mut sorted = enumerated.clone();
        sorted.sort();
        let products = direct.iter().all(|st| check_product_structure(&space, st));
        println!(
            "d = ({d1},{d2}): {} structures, enumeration agrees: {}, all blocks products: {products}",
            direct.len(),
            sorted == direct
        );
    }

    let space = StateSpace::new(vec![2, 4, 3])?;
    for st in fink_maximal_structures(4, 3)?.iter().filter(|st| st.len() == 2 && st.union().len() == 6).take(3) {
        let pretty: Vec<Vec<Vec<usize>>> =
            st.blocks().iter().map(|b| b.iter().map(|&x| space.coords_of(x)).collect()).collect();
        println!("  {pretty:?}");
    }
    Ok(())
}
