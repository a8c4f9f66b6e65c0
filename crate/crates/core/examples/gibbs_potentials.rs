//! Möbius potentials of a family of knockout modalities, reconstruction, and
//! the residual test for robustness.

use knockout::gibbs::{
    gibbs_to_modalities, interaction_order, is_robust_via_potentials, knockout_residual, max_deviation,
    moebius_potentials,
};
use knockout::kernels::FunctionalModalities;
use knockout::space::{NodeSet, StateSpace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> knockout::Result<()> {
    let space = StateSpace::new(vec![3, 2, 2, 2])?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mods: FunctionalModalities<f64> = FunctionalModalities::random(&space, &mut rng);

    let phi = moebius_potentials(&mods)?;
    let back = gibbs_to_modalities(&phi);
    println!("round trip deviation {:.2e}", max_deviation(&mods, &back));
    println!("interaction order of the full kernel: {}", interaction_order(mods.full(), 1e-10)?);

    // make κ_{1,2} agree with the full kernel at x = 000
    let r = NodeSet::from_nodes([1, 2]);
    let row = mods.full().row(0).to_vec();
    let mut rows = mods.get(r).rows().to_vec();
    rows[space.restrict_index(0, r)] = row;
    mods.set(knockout::kernels::StochasticMap::new(&space, r, rows)?)?;
    let phi = moebius_potentials(&mods)?;
    println!("residual at x = 000 outside {r}: {:?}", knockout_residual(&phi, 0, r));
    println!("robust at 000: {}", is_robust_via_potentials(&mods, 0, r, 1e-10)?);
    println!("robust at 001: {}", is_robust_via_potentials(&mods, 1, r, 1e-10)?);
    Ok(())
}
