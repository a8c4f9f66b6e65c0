//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use knockout::gibbs::{
    base_maps, geometric_mean_extension_k, gibbs_to_modalities, interaction_order, is_robust_via_potentials,
    moebius_potentials, project_to_tilde_k, GIBBS_TOL,
};
use knockout::joint::{
    component_membership, epsilon_approximation, find_witness, is_r_robust_distribution, joint_from,
    sample_from_component, total_variation, ComponentParams, JointDistribution,
};
use knockout::kernels::{
    factorize_through_structure, from_function, is_r_canalyzing, is_r_robust_map, random_robust_modalities,
    robustness_conditions, DeterministicMap, FunctionalModalities, StochasticMap,
};
use knockout::neural::{
    field, renormalized_threshold_modalities, threshold_limit, threshold_modalities, Beta, ThresholdParams,
};
use knockout::robustness::RobustnessSpec;
use knockout::scalar::{rat, Rational, Scalar};
use knockout::space::{NodeSet, StateSpace};
use knockout::structures::{
    components_of, enumerate_maximal_structures, enumerate_maximal_structures_with, enumerate_structures,
    fink_maximal_structures, is_maximal, max_singleton_code_size, random_maximal_structure,
    smallk_connectivity_check, structure_size_bound, EnumerateOptions, RobustnessStructure,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: knockout::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn bits(space: &StateSpace, s: &str) -> usize {
    let coords: Vec<usize> = s.bytes().map(|b| (b - b'0') as usize).collect();
    space.index_of(&coords).unwrap()
}

// Independent oracles.

/// Components of `set` in `G_{R_k}` by breadth-first search over Hamming distance.
fn oracle_rk_components(space: &StateSpace, k: usize, set: &[usize]) -> BTreeSet<BTreeSet<usize>> {
    let n = space.n();
    let adj = |a: usize, b: usize| {
        let (ca, cb) = (space.coords_of(a), space.coords_of(b));
        ca.iter().zip(&cb).filter(|(u, v)| u != v).count() + k <= n
    };
    let mut left: BTreeSet<usize> = set.iter().copied().collect();
    let mut out = BTreeSet::new();
    while let Some(&start) = left.iter().next() {
        left.remove(&start);
        let mut comp = BTreeSet::from([start]);
        let mut queue = vec![start];
        while let Some(x) = queue.pop() {
            let next: Vec<usize> = left.iter().copied().filter(|&y| adj(x, y)).collect();
            for y in next {
                left.remove(&y);
                comp.insert(y);
                queue.push(y);
            }
        }
        out.insert(comp);
    }
    out
}

fn as_sets(st: &RobustnessStructure) -> BTreeSet<BTreeSet<usize>> {
    st.blocks().iter().map(|b| b.iter().copied().collect()).collect()
}

/// Whether `block` equals `{x : x_A = a}` where `A` is the set of coordinates constant on it.
fn is_cylinder(space: &StateSpace, block: &[usize]) -> bool {
    let first = space.coords_of(block[0]);
    let fixed: Vec<usize> =
        (0..space.n()).filter(|&i| block.iter().all(|&x| space.coords_of(x)[i] == first[i])).collect();
    let size: usize = (0..space.n()).filter(|i| !fixed.contains(i)).map(|i| space.card(i + 1)).product();
    size == block.len()
}

fn binary_spec(n: usize, k: usize) -> RobustnessSpec {
    RobustnessSpec::r_k(&StateSpace::binary(n), k).unwrap()
}

// 1
fn cube_components() -> Check {
    let start = Instant::now();
    let s = StateSpace::binary(4);
    let set: Vec<usize> = ["0000", "0010", "0101", "0111", "1000", "1010", "1101", "1111"]
        .iter()
        .map(|b| bits(&s, b))
        .collect();
    let r3 = lib(components_of(&binary_spec(4, 3), &set))?;
    ensure(r3.len() == 2, || format!("R_3: {} components", r3.len()))?;
    ensure(r3.blocks().iter().all(|b| is_cylinder(&s, b)), || "R_3 block is not a cylinder".into())?;
    ensure(as_sets(&r3) == oracle_rk_components(&s, 3, &set), || "R_3 components differ from BFS".into())?;
    let r2 = lib(components_of(&binary_spec(4, 2), &set))?;
    ensure(r2.len() == 1, || format!("R_2: {} components", r2.len()))?;
    ensure(as_sets(&r2) == oracle_rk_components(&s, 2, &set), || "R_2 components differ from BFS".into())?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(1), || format!("took {t:?}"))?;
    Ok(format!("2 cylinder components under R_3, 1 under R_2 ({t:.2?})"))
}

/// Shape of the complement of `∪B` in the 3-cube: a diagonal plane
/// `x_i ⊕ x_j = c`, a parity class, or the neighbourhood of a vertex.
fn cube_class(space: &StateSpace, union: &[usize]) -> &'static str {
    let rest: Vec<Vec<usize>> = (0..8).filter(|x| !union.contains(x)).map(|x| space.coords_of(x)).collect();
    match rest.len() {
        0 => "empty",
        4 if (0..3).any(|i| (i + 1..3).any(|j| rest.iter().all(|c| c[i] ^ c[j] == rest[0][i] ^ rest[0][j]))) => {
            "plane"
        }
        4 if rest.iter().all(|c| c.iter().sum::<usize>() % 2 == rest[0].iter().sum::<usize>() % 2) => "parity",
        3 => {
            let is_nbhd = (0..8).any(|v| {
                let cv = space.coords_of(v);
                rest.iter().all(|c| c.iter().zip(&cv).filter(|(a, b)| a != b).count() == 1)
            });
            if is_nbhd {
                "vertex-cut"
            } else {
                "other"
            }
        }
        _ => "other",
    }
}

// 2
fn cube_maximal_structures() -> Check {
    let start = Instant::now();
    let spec = binary_spec(3, 2);
    let space = spec.space().clone();
    let all = lib(enumerate_maximal_structures(&spec, None))?;
    ensure(all.len() == 17, || format!("{} maximal structures, expected 17", all.len()))?;
    let mut classes: BTreeMap<&str, usize> = BTreeMap::new();
    for st in &all {
        *classes.entry(cube_class(&space, &st.union())).or_default() += 1;
    }
    let expected = BTreeMap::from([("empty", 1), ("parity", 2), ("plane", 6), ("vertex-cut", 8)]);
    ensure(classes == expected, || format!("complement classes {classes:?}"))?;
    let reps = lib(enumerate_maximal_structures_with(&spec, &EnumerateOptions { limit: None, up_to_symmetry: true }))?;
    ensure(reps.len() == 4, || format!("{} symmetry classes", reps.len()))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!("17 structures in classes {expected:?}, 4 up to symmetry ({t:.2?})"))
}

// 3
fn two_not_three() -> Check {
    let s = StateSpace::binary(4);
    let b1 = vec![bits(&s, "0000"), bits(&s, "1100")];
    let b2 = vec![bits(&s, "0111"), bits(&s, "1011")];
    let st = RobustnessStructure::new(16, vec![b1.clone(), b2.clone()]).unwrap();
    let r2 = binary_spec(4, 2);
    let r3 = binary_spec(4, 3);
    ensure(lib(components_of(&r2, &st.union()))? == st, || "not the R_2 structure of its union".into())?;
    ensure(lib(is_maximal(&st, &r2))?, || "not maximal under R_2".into())?;
    for b in [&b1, &b2] {
        ensure(oracle_rk_components(&s, 2, b).len() == 1, || format!("block {b:?} disconnected in G_2"))?;
        ensure(lib(components_of(&r2, b))?.len() == 1, || format!("block {b:?} split by library under R_2"))?;
    }
    let split = [&b1, &b2].iter().filter(|b| oracle_rk_components(&s, 3, b).len() > 1).count();
    ensure(split >= 1, || "both blocks connected in G_3".into())?;
    ensure(lib(components_of(&r3, &b1))?.len() == 2, || "library keeps block connected in G_3".into())?;
    Ok(format!("maximal under R_2, {split} block(s) disconnected in G_3"))
}

// 4
fn two_input_structures() -> Check {
    let start = Instant::now();
    let mut counts = Vec::new();
    for (d1, d2) in [(2, 2), (2, 3), (3, 3), (4, 3)] {
        let spec = RobustnessSpec::r_k(&StateSpace::new(vec![2, d1, d2]).unwrap(), 1).unwrap();
        let enumerated: BTreeSet<_> = lib(enumerate_maximal_structures(&spec, None))?.into_iter().collect();
        let direct: BTreeSet<_> = lib(fink_maximal_structures(d1, d2))?.into_iter().collect();
        ensure(enumerated == direct, || format!("d=({d1},{d2}): {} vs {}", enumerated.len(), direct.len()))?;
        counts.push(direct.len());
        if (d1, d2) == (4, 3) {
            let product_pair = RobustnessStructure::new(12, vec![vec![0, 2, 3, 5], vec![7, 10]]).unwrap();
            ensure(direct.contains(&product_pair), || "two-block product structure missing for d=(4,3)".into())?;
        }
    }
    ensure(counts[..3] == [3, 7, 25], || format!("counts {counts:?}"))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!("counts {counts:?} agree with enumeration; two-block product structure present ({t:.2?})"))
}

fn random_space(rng: &mut ChaCha8Rng, max_n: usize) -> StateSpace {
    let n = rng.gen_range(1..=max_n);
    let mut cards = vec![rng.gen_range(2..=3)];
    cards.extend((0..n).map(|_| rng.gen_range(2..=3)));
    StateSpace::new(cards).unwrap()
}

// 5
fn moebius_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for case in 0..200 {
        let space = random_space(&mut rng, 4);
        let m: FunctionalModalities<f64> = FunctionalModalities::random(&space, &mut rng);
        let back = gibbs_to_modalities(&lib(moebius_potentials(&m))?);
        for (a, b) in m.maps().iter().zip(back.maps()) {
            for (ra, rb) in a.rows().iter().zip(b.rows()) {
                for (u, v) in ra.iter().zip(rb) {
                    let rel = (u - v).abs() / u.abs().max(v.abs());
                    worst = worst.max(rel);
                }
            }
        }
        ensure(worst <= 1e-10, || format!("case {case}: relative error {worst:e}"))?;
    }
    Ok(format!("200 families, worst relative error {worst:.1e}"))
}

// 6
fn projection_keeps_robust_values() -> Check {
    let space = StateSpace::new(vec![3, 2, 2, 2]).unwrap();
    let spec = RobustnessSpec::r_k(&space, 2).unwrap();
    let structures = lib(enumerate_maximal_structures(&spec, None))?;
    ensure(structures.len() == 17, || format!("{} structures", structures.len()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for st in &structures {
        let union = st.union();
        for _ in 0..20 {
            let m: FunctionalModalities<f64> = lib(random_robust_modalities(&spec, st, &mut rng))?;
            let p = lib(project_to_tilde_k(&m, 2))?;
            ensure(p.degenerate.is_empty(), || "degenerate rows".into())?;
            for a in NodeSet::all(3) {
                for &x in &union {
                    let (u, v) = (m.get(a).row_of_state(x), p.modalities.get(a).row_of_state(x));
                    for (s, t) in u.iter().zip(v) {
                        worst = worst.max((s - t).abs());
                    }
                }
            }
            ensure(worst <= 1e-10, || format!("structure {:?}: deviation {worst:e}", st.blocks()))?;
        }
    }
    Ok(format!("17 structures x 20 families, worst deviation on the union {worst:.1e}"))
}

/// Independent check of robustness on `set`: `κ` constant on every `set ∩ C(R, x_R)`.
fn oracle_robust<T: Scalar>(kappa: &StochasticMap<T>, spec: &RobustnessSpec, set: &[usize]) -> bool {
    let space = spec.space();
    spec.pairs().iter().all(|(r, values)| {
        let members: Vec<usize> =
            set.iter().copied().filter(|&x| &space.restrict_coords(&space.coords_of(x), *r) == values).collect();
        members.iter().all(|&x| kappa.row(x) == kappa.row(members[0]))
    })
}

fn uniform_input(space: &StateSpace, set: &[usize]) -> Vec<Rational> {
    (0..space.input_size())
        .map(|x| if set.contains(&x) { rat(1, set.len() as i64) } else { Rational::zero() })
        .collect()
}

/// All predicate pairs for one kernel, specification and state set.
fn prop_one_two(
    kappa: &StochasticMap<Rational>,
    f: Option<&DeterministicMap>,
    spec: &RobustnessSpec,
    set: &[usize],
) -> Result<bool, String> {
    let direct = lib(is_r_robust_map(kappa, spec, set, 0.0))?;
    let (by_cyl, by_comp) = lib(robustness_conditions(kappa, spec, set, 0.0))?;
    let structure = lib(components_of(spec, set))?;
    let factors = factorize_through_structure(kappa, &structure, 0.0).is_ok();
    let oracle = oracle_robust(kappa, spec, set);
    let mut agree = [by_cyl, by_comp, factors, oracle].iter().all(|&v| v == direct);
    if !set.is_empty() {
        let p = lib(joint_from(kappa, &uniform_input(spec.space(), set)))?;
        agree &= lib(is_r_robust_distribution(&p, spec, 0.0))? == direct;
    }
    if let Some(f) = f {
        agree &= lib(is_r_canalyzing(f, spec))? == direct;
    }
    Ok(agree)
}

/// Strictly positive modalities: `κ_A(x_A)` smooths `κ(x)` when `κ` is
/// constant on the cylinder of `x_A`, and is a random row otherwise.
fn smoothed_modalities(kappa: &StochasticMap<Rational>, rng: &mut ChaCha8Rng) -> FunctionalModalities<f64> {
    let space = kappa.space().clone();
    let d0 = space.output_size() as f64;
    let smooth = |row: &[Rational]| row.iter().map(|v| 0.8 * v.to_f64() + 0.2 / d0).collect::<Vec<_>>();
    FunctionalModalities::from_fn(&space, |a| {
        let rows = (0..space.sub_size(a))
            .map(|xa| {
                let cyl = space.cylinder(a, &space.sub_values(a, xa));
                if cyl.iter().all(|&x| kappa.row(x) == kappa.row(cyl[0])) {
                    smooth(kappa.row(cyl[0]))
                } else {
                    let w: Vec<f64> = (0..space.output_size()).map(|_| rng.gen_range(1.0..5.0)).collect();
                    let t: f64 = w.iter().sum();
                    w.iter().map(|v| v / t).collect()
                }
            })
            .collect();
        StochasticMap::new(&space, a, rows)
    })
    .unwrap()
}

fn prop_three(m: &FunctionalModalities<f64>, spec: &RobustnessSpec) -> Result<bool, String> {
    let space = spec.space();
    for (r, values) in spec.pairs() {
        for x in space.cylinder(r, &values) {
            let direct = m.full().row(x).iter().zip(m.get(r).row_of_state(x)).all(|(a, b)| (a - b).abs() <= 1e-12);
            if lib(is_robust_via_potentials(m, x, r, GIBBS_TOL))? != direct {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn random_spec(space: &StateSpace, rng: &mut ChaCha8Rng) -> RobustnessSpec {
    let mut spec = RobustnessSpec::empty(space.clone());
    for r in NodeSet::all(space.n()) {
        match rng.gen_range(0..3) {
            0 => spec.insert_all(r).unwrap(),
            1 => {
                for xr in 0..space.sub_size(r) {
                    if rng.gen_bool(0.5) {
                        spec.insert(r, space.sub_values(r, xr)).unwrap();
                    }
                }
            }
            _ => {}
        }
    }
    spec
}

// 7
fn robustness_equivalences() -> Check {
    let s2 = StateSpace::binary(2);
    let specs = [
        RobustnessSpec::r_k(&s2, 0).unwrap(),
        RobustnessSpec::r_k(&s2, 1).unwrap(),
        RobustnessSpec::canalyzing(&s2, 1, 0).unwrap(),
    ];
    let all: Vec<usize> = (0..4).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut robust_count = 0;
    for table in 0..16usize {
        let f = lib(DeterministicMap::new(&s2, (0..4).map(|x| (table >> x) & 1).collect()))?;
        let kappa: StochasticMap<Rational> = from_function(&f);
        for spec in &specs {
            ensure(prop_one_two(&kappa, Some(&f), spec, &all)?, || format!("f={table:04b}: kernel predicates disagree"))?;
            ensure(prop_three(&smoothed_modalities(&kappa, &mut rng), spec)?, || {
                format!("f={table:04b}: potential residual disagrees")
            })?;
            robust_count += usize::from(lib(is_r_robust_map(&kappa, spec, &all, 0.0))?);
        }
    }
    ensure(robust_count == 2 + 2 + 8, || format!("{robust_count} robust (function, spec) pairs"))?;
    let s3 = StateSpace::binary(3);
    let mut positives = 0;
    for case in 0..500 {
        let spec = random_spec(&s3, &mut rng);
        let set: Vec<usize> = (0..8).filter(|_| rng.gen_bool(0.6)).collect();
        let structure = lib(components_of(&spec, &set))?;
        let kappa: StochasticMap<Rational> = if case % 2 == 0 {
            let f = lib(DeterministicMap::new(&s3, (0..8).map(|_| rng.gen_range(0..2)).collect()))?;
            let ok = prop_one_two(&from_function(&f), Some(&f), &spec, &(0..8).collect::<Vec<_>>())?;
            ensure(ok, || format!("case {case}: canalyzing predicate disagrees"))?;
            from_function(&f)
        } else {
            let mut m = lib(random_robust_modalities::<Rational, _>(&spec, &structure, &mut rng))?.full().clone();
            if rng.gen_bool(0.5) {
                let x = rng.gen_range(0..8);
                let mut rows = m.into_rows();
                rows[x] = knockout::kernels::random_row(2, &mut rng);
                m = lib(StochasticMap::new(&s3, s3.full_set(), rows))?;
            }
            m
        };
        ensure(prop_one_two(&kappa, None, &spec, &set)?, || format!("case {case}: kernel predicates disagree"))?;
        ensure(prop_three(&smoothed_modalities(&kappa, &mut rng), &spec)?, || {
            format!("case {case}: potential residual disagrees")
        })?;
        positives += usize::from(lib(is_r_robust_map(&kappa, &spec, &set, 0.0))?);
    }
    Ok(format!("48 exhaustive and 500 random cases agree ({positives} random robust)"))
}

// 8
fn neural() -> Check {
    let w = [0.9, -0.4, 0.3];
    let eta = 0.1;
    let params = ThresholdParams::new(w.to_vec(), eta, Beta::Finite(1.7)).unwrap();
    let plain = lib(threshold_modalities(&params))?;
    let order = lib(interaction_order(plain.full(), GIBBS_TOL))?;
    ensure(order == 1, || format!("interaction order {order}"))?;
    let renorm = lib(renormalized_threshold_modalities(&params))?;
    let base = base_maps(&renorm, |a| a.len() <= 1);
    let ext = lib(geometric_mean_extension_k(&params.space(), &base, 1))?;
    ensure(ext.approx_eq(&renorm, 1e-12), || "renormalized family is not a fixed point".into())?;
    let space = params.space();
    for renormalized in [false, true] {
        let limit = lib(threshold_limit(&w, eta, renormalized))?;
        let mut last = f64::INFINITY;
        let mut devs = Vec::new();
        for beta in [1.0, 10.0, 100.0, 1000.0] {
            let p = ThresholdParams::new(w.to_vec(), eta, Beta::Finite(beta)).unwrap();
            let m = lib(if renormalized { renormalized_threshold_modalities(&p) } else { threshold_modalities(&p) })?;
            let mut dev: f64 = 0.0;
            for a in NodeSet::all(3).filter(|a| !a.is_empty()) {
                for xa in 0..space.sub_size(a) {
                    let scale = if renormalized { 3.0 / a.len() as f64 } else { 1.0 };
                    let h = scale * field(&w, a, &space.sub_values(a, xa)) - eta;
                    if h.abs() < 1e-9 {
                        continue;
                    }
                    dev = dev.max((m.get(a).row(xa)[1] - limit.get(a).row(xa)[1]).abs());
                }
            }
            ensure(dev < last, || format!("renormalized={renormalized}: not monotone at beta={beta}"))?;
            last = dev;
            devs.push(dev);
        }
        ensure(last < 1e-3, || format!("deviation {last:e} at beta=1000"))?;
    }
    Ok("order 1, renormalized family fixed, beta sweep monotone".into())
}

/// Determinantal check of every CI statement of the specification.
fn oracle_ci(p: &JointDistribution<Rational>, spec: &RobustnessSpec) -> bool {
    let space = spec.space();
    let d0 = space.output_size();
    spec.pairs().iter().all(|(r, values)| {
        let cyl = space.cylinder(*r, values);
        cyl.iter().all(|&x| {
            cyl.iter().all(|&y| {
                (0..d0).all(|a| {
                    (0..d0).all(|b| p.get(a, x).clone() * p.get(b, y).clone() == p.get(b, x).clone() * p.get(a, y).clone())
                })
            })
        })
    })
}

// 9
fn ci_decomposition() -> Check {
    let spec = binary_spec(3, 2);
    let space = spec.space().clone();
    let structures = lib(enumerate_structures(&spec))?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let eps = [rat(1, 3), rat(1, 1000)];
    let mut samples = 0;
    let mut approximations = 0;
    for st in &structures {
        let maximal = lib(is_maximal(st, &spec))?;
        let witness = if maximal { None } else { find_witness(&spec, st) };
        ensure(maximal || witness.is_some(), || format!("no witness for {:?}", st.blocks()))?;
        for _ in 0..100 {
            let params = ComponentParams::<Rational>::random(st, 2, &mut rng);
            let p = lib(sample_from_component(&space, st, &params))?;
            ensure(p.fibers().iter().flatten().fold(Rational::zero(), |a, v| a + v) == Rational::one(), || {
                "mass is not 1".into()
            })?;
            ensure(lib(is_r_robust_distribution(&p, &spec, 0.0))?, || "sample is not robust".into())?;
            ensure(oracle_ci(&p, &spec), || "sample fails the determinantal oracle".into())?;
            let mut members = 0;
            for other in &structures {
                members += usize::from(lib(component_membership(&p, other, 0.0))?);
            }
            ensure(members == 1 && lib(component_membership(&p, st, 0.0))?, || {
                format!("sample lies in {members} components")
            })?;
            samples += 1;
            if let Some((x, y)) = witness {
                for e in &eps {
                    let (q, larger) = lib(epsilon_approximation(&p, &spec, st, x, y, e))?;
                    let mut union = st.union();
                    union.push(x);
                    ensure(larger == lib(components_of(&spec, &union))?, || "wrong larger structure".into())?;
                    ensure(lib(component_membership(&q, &larger, 0.0))?, || "p_eps not in larger component".into())?;
                    ensure(lib(is_r_robust_distribution(&q, &spec, 0.0))?, || "p_eps not robust".into())?;
                    let tv = total_variation(&p, &q);
                    ensure(tv == e.clone() * p.fiber_mass(y), || format!("TV {tv} != eps * donor mass"))?;
                    approximations += 1;
                }
            }
        }
    }
    Ok(format!(
        "{} structures, {samples} samples in exactly one component, {approximations} exact approximations",
        structures.len()
    ))
}

fn oracle_bound(spec: &RobustnessSpec, r: NodeSet) -> usize {
    let space = spec.space();
    let xr: usize = r.nodes().map(|i| space.card(i)).product();
    let rest: usize = space.full_set().minus(r).nodes().map(|i| space.card(i)).product();
    let covered = (0..xr).filter(|&v| spec.contains_sub_index(r, v)).count();
    covered + (xr - covered) * rest
}

// 10
fn size_bound() -> Check {
    let mut cases: Vec<(RobustnessSpec, Vec<RobustnessStructure>)> = Vec::new();
    let cube = binary_spec(3, 2);
    cases.push((cube.clone(), lib(enumerate_maximal_structures(&cube, None))?));
    let s4 = StateSpace::binary(4);
    let two3 = RobustnessStructure::new(
        16,
        vec![vec![bits(&s4, "0000"), bits(&s4, "1100")], vec![bits(&s4, "0111"), bits(&s4, "1011")]],
    )
    .unwrap();
    cases.push((binary_spec(4, 2), vec![two3]));
    for (d1, d2) in [(2, 2), (2, 3), (3, 3), (4, 3)] {
        let spec = RobustnessSpec::r_k(&StateSpace::new(vec![2, d1, d2]).unwrap(), 1).unwrap();
        cases.push((spec, lib(fink_maximal_structures(d1, d2))?));
    }
    let mut checked = 0;
    for (spec, structures) in &cases {
        for r in NodeSet::all(spec.space().n()) {
            let bound = lib(structure_size_bound(spec, r))?;
            ensure(bound == oracle_bound(spec, r), || format!("bound for {r} differs from oracle"))?;
            for st in structures {
                ensure(st.len() <= bound, || format!("{} blocks exceed bound {bound}", st.len()))?;
                checked += 1;
            }
        }
    }
    let mut tight = 0;
    for cards in [vec![2, 2, 2, 2], vec![2, 2, 3], vec![2, 3, 2, 2]] {
        let space = StateSpace::new(cards).unwrap();
        for r in NodeSet::all(space.n()) {
            let mut spec = RobustnessSpec::empty(space.clone());
            spec.insert_all(r).unwrap();
            let bound = lib(structure_size_bound(&spec, r))?;
            ensure(bound == space.sub_size(r), || format!("saturated bound {bound} != |X_R|"))?;
            let best = lib(enumerate_maximal_structures(&spec, None))?.iter().map(|s| s.len()).max().unwrap_or(0);
            ensure(best == bound, || format!("{:?} R={r}: largest structure {best}, bound {bound}", space.cardinalities()))?;
            tight += 1;
        }
    }
    Ok(format!("{checked} (structure, R) pairs within bound; tight for {tight} saturated specs"))
}

// 11
fn small_k_connectivity() -> Check {
    let s4 = StateSpace::binary(4);
    let spec4 = binary_spec(4, 2);
    let all4 = lib(enumerate_maximal_structures(&spec4, None))?;
    ensure(all4.len() == 57, || format!("{} maximal structures for n=4", all4.len()))?;
    let connected = |space: &StateSpace, st: &RobustnessStructure, s_max: usize| {
        (0..=s_max).all(|s| st.blocks().iter().all(|b| oracle_rk_components(space, s, b).len() == 1))
    };
    for st in &all4 {
        ensure(lib(smallk_connectivity_check(&s4, st, 2))?, || format!("n=4 {:?} fails", st.blocks()))?;
        ensure(connected(&s4, st, 1), || format!("n=4 {:?} fails BFS oracle", st.blocks()))?;
    }
    let s5 = StateSpace::binary(5);
    let spec5 = binary_spec(5, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut distinct = BTreeSet::new();
    for _ in 0..50 {
        let st = random_maximal_structure(&spec5, &mut rng);
        ensure(lib(is_maximal(&st, &spec5))?, || "sampled structure is not maximal".into())?;
        ensure(lib(smallk_connectivity_check(&s5, &st, 2))?, || format!("n=5 {:?} fails", st.blocks()))?;
        ensure(connected(&s5, &st, 2), || format!("n=5 {:?} fails BFS oracle", st.blocks()))?;
        distinct.insert(st);
    }
    Ok(format!("57 structures (n=4) and 50 samples ({} distinct, n=5) connected", distinct.len()))
}

// 12
fn code_sizes() -> Check {
    let mut got = Vec::new();
    for ((n, k, d), want) in [((3, 1, 2), 2), ((4, 2, 2), 2), ((5, 2, 2), 2), ((3, 3, 2), 8), ((4, 3, 2), 8), ((5, 3, 2), 4)] {
        let size = lib(max_singleton_code_size(n, k, d))?;
        ensure(size == want, || format!("A({n},{k},{d}) = {size}, expected {want}"))?;
        got.push(size);
    }
    Ok(format!("(3,1,2)={} (4,2,2)={} (5,2,2)={}", got[0], got[1], got[2]))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("4-cube components", cube_components),
        ("cube maximal structures", cube_maximal_structures),
        ("2-not-3 example", two_not_three),
        ("two-input structures", two_input_structures),
        ("Moebius round trip", moebius_round_trip),
        ("geometric-mean projection", projection_keeps_robust_values),
        ("robustness equivalences", robustness_equivalences),
        ("threshold neuron", neural),
        ("CI decomposition", ci_decomposition),
        ("structure size bound", size_bound),
        ("small-k connectivity", small_k_connectivity),
        ("code sizes", code_sizes),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{t:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{t:.2?}]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
