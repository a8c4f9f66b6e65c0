//! Geometric-mean projection: a family that is 2-robust on the union of a
//! maximal structure keeps its values there after every member above order 2
//! is replaced by the normalized geometric mean of its 2-subsets.

use knockout::gibbs::{is_in_tilde_k, max_deviation, project_to_tilde_k, project_to_tilde_r};
use knockout::kernels::{is_r_robust_modalities, random_robust_modalities, FunctionalModalities};
use knockout::robustness::RobustnessSpec;
use knockout::space::{NodeSet, StateSpace};
use knockout::structures::enumerate_maximal_structures;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> knockout::Result<()> {
    let space = StateSpace::new(vec![3, 2, 2, 2])?;
    let spec = RobustnessSpec::r_k(&space, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for st in enumerate_maximal_structures(&spec, None)?.iter().take(5) {
        let mods: FunctionalModalities<f64> = random_robust_modalities(&spec, st, &mut rng)?;
        let projected = project_to_tilde_k(&mods, 2)?.modalities;
        let union = st.union();
        let mut worst: f64 = 0.0;
        for a in NodeSet::all(3) {
            for &x in &union {
                for (u, v) in mods.get(a).row_of_state(x).iter().zip(projected.get(a).row_of_state(x)) {
                    worst = worst.max((u - v).abs());
                }
            }
        }
        println!(
            "union {union:?}: deviation on union {worst:.1e}, elsewhere {:.2}, still robust {}",
            max_deviation(&mods, &projected),
            is_r_robust_modalities(&projected, &spec, &union, 1e-12)?
        );
        assert!(is_in_tilde_k(&projected, 2, 1e-12)?);
    }

    // general form: one canalyzing input
    let canal = RobustnessSpec::canalyzing(&space, 1, 0)?.coherent_closure();
    let mods: FunctionalModalities<f64> = FunctionalModalities::random(&space, &mut rng);
    let p = project_to_tilde_r(&mods, &canal)?;
    println!("canalyzing projection: {} degenerate rows", p.degenerate.len());
    Ok(())
}
