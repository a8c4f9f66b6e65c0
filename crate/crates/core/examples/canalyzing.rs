//! Canalyzing Boolean functions are exactly the deterministic kernels that are
//! robust for the corresponding specification.

use knockout::kernels::{
    factorize_through_structure, from_function, hat_kappa, is_r_canalyzing, is_r_robust_map, modalities_from_hat,
    DeterministicMap, FunctionalModalities, StochasticMap,
};
use knockout::robustness::RobustnessSpec;
use knockout::scalar::{format_rational, rat, Rational};
use knockout::space::StateSpace;
use knockout::structures::components_of;

fn main() -> knockout::Result<()> {
    let space = StateSpace::binary(3);
    let all: Vec<usize> = (0..space.input_size()).collect();
    // x1 = 0 forces 0; otherwise x2 = 1 forces 1; otherwise x3 decides
    let spec = RobustnessSpec::nested_canalyzing(&space, &[0, 1, 0])?;
    let f = DeterministicMap::from_fn(&space, |c| match (c[0], c[1]) {
        (0, _) => 0,
        (_, 1) => 1,
        _ => c[2],
    })?;
    let kappa = from_function::<Rational>(&f);
    println!("canalyzing: {}", is_r_canalyzing(&f, &spec)?);
    println!("robust kernel: {}", is_r_robust_map(&kappa, &spec, &all, 0.0)?);

    let structure = components_of(&spec, &all)?;
    let factor = factorize_through_structure(&kappa, &structure, 0.0)?;
    let rows: Vec<String> =
        factor.iter().map(|r| r.iter().map(format_rational).collect::<Vec<_>>().join(" ")).collect();
    println!("{} blocks, output rows [{}]", structure.len(), rows.join("] ["));

    let majority = DeterministicMap::from_fn(&space, |c| usize::from(c.iter().sum::<usize>() >= 2))?;
    println!("majority canalyzing: {}", is_r_canalyzing(&majority, &spec)?);

    // knockouts as an extra input value
    let mods = FunctionalModalities::from_fn(&space, |a| {
        StochasticMap::from_fn(&space, a, |v| {
            let (ones, len) = (v.iter().sum::<usize>() as i64, v.len() as i64);
            vec![rat(1 + len - ones, 2 + len), rat(1 + ones, 2 + len)]
        })
    })?;
    let hat = hat_kappa(&mods);
    let same = modalities_from_hat(&space, &hat)? == mods;
    println!("one kernel on {} extended states reproduces the family: {same}", hat.rows().len());
    Ok(())
}
