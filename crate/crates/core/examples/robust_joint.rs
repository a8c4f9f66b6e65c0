//! Joint distributions of robust kernels: conditional independence, the
//! component of each robustness structure, and approximation of a smaller
//! structure by a larger one.

use knockout::joint::{
    component_membership, epsilon_approximation, find_witness, is_r_robust_distribution, sample_from_component,
    support_structure, total_variation, ComponentParams,
};
use knockout::robustness::RobustnessSpec;
use knockout::scalar::{format_rational, rat, Rational};
use knockout::space::StateSpace;
use knockout::structures::{components_of, is_maximal};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> knockout::Result<()> {
    let space = StateSpace::binary(3);
    let spec = RobustnessSpec::r_k(&space, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);

    let structure = components_of(&spec, &[0, 1, 6])?;
    println!("structure {:?}, maximal {}", structure.blocks(), is_maximal(&structure, &spec)?);
    let params = ComponentParams::<Rational>::random(&structure, 2, &mut rng);
    let p = sample_from_component(&space, &structure, &params)?;
    for x in p.support() {
        let fiber: Vec<String> = p.fiber(x).iter().map(format_rational).collect();
        println!("  p(., {:?}) = {}", space.coords_of(x), fiber.join(", "));
    }
    println!("robust: {}", is_r_robust_distribution(&p, &spec, 0.0)?);
    println!("support structure {:?}", support_structure(&p, &spec)?.blocks());

    let (x, y) = find_witness(&spec, &structure).expect("structure is not maximal");
    for eps in [rat(1, 2), rat(1, 10), rat(1, 1000)] {
        let (q, larger) = epsilon_approximation(&p, &spec, &structure, x, y, &eps)?;
        println!(
            "eps {}: moved to {:?}, larger structure {:?}, in its component {}, TV {}",
            format_rational(&eps),
            space.coords_of(x),
            larger.blocks(),
            component_membership(&q, &larger, 0.0)?,
            format_rational(&total_variation(&p, &q))
        );
    }
    Ok(())
}
