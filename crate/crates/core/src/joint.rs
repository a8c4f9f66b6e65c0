//! Joint distributions of inputs and output, conditional independence, and
//! the decomposition of robust distributions by robustness structure.

use rand::Rng;

use crate::error::{Error, Result};
use crate::kernels::{random_row, StochasticMap};
use crate::robustness::RobustnessSpec;
use crate::scalar::Scalar;
use crate::space::{NodeSet, StateSpace};
use crate::structures::{adjacent, components_of, enumerate_structures, RobustnessStructure};

/// Tolerance on the total mass of float distributions.
pub const MASS_TOL: f64 = 1e-12;

/// A distribution on `X_0 × X_in`, stored as fibers `p̃_x = (p(x_0, x))_{x_0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution<T> {
    space: StateSpace,
    fibers: Vec<Vec<T>>,
}

fn sum<T: Scalar>(values: impl IntoIterator<Item = T>) -> T {
    values.into_iter().fold(T::zero(), |a, b| a + b)
}

impl<T: Scalar> JointDistribution<T> {
    /// `fibers[x][x_0] = p(x_0, x)`.
    pub fn new(space: &StateSpace, fibers: Vec<Vec<T>>) -> Result<Self> {
        if fibers.len() != space.input_size() || fibers.iter().any(|f| f.len() != space.output_size()) {
            return Err(Error::Shape(format!(
                "distribution needs {} fibers of length {}",
                space.input_size(),
                space.output_size()
            )));
        }
        if fibers.iter().flatten().any(|v| v.is_negative()) {
            return Err(Error::Shape("negative probability".into()));
        }
        let total = sum(fibers.iter().flatten().cloned());
        if total.is_zero() {
            return Err(Error::EmptyDistribution);
        }
        if !total.approx_eq(&T::one(), MASS_TOL) {
            return Err(Error::Shape(format!("total mass is {}, expected 1", total.to_f64())));
        }
        Ok(JointDistribution { space: space.clone(), fibers })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn fiber(&self, x: usize) -> &[T] {
        &self.fibers[x]
    }

    pub fn fibers(&self) -> &[Vec<T>] {
        &self.fibers
    }

    pub fn get(&self, x0: usize, x: usize) -> &T {
        &self.fibers[x][x0]
    }

    pub fn fiber_mass(&self, x: usize) -> T {
        sum(self.fibers[x].iter().cloned())
    }

    /// The input marginal `p_in`.
    pub fn input_marginal(&self) -> Vec<T> {
        (0..self.fibers.len()).map(|x| self.fiber_mass(x)).collect()
    }

    /// States with a nonzero fiber, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.fibers.len()).filter(|&x| self.fibers[x].iter().any(|v| !v.is_zero())).collect()
    }

    pub fn to_f64(&self) -> JointDistribution<f64> {
        JointDistribution {
            space: self.space.clone(),
            fibers: self.fibers.iter().map(|f| f.iter().map(|v| v.to_f64()).collect()).collect(),
        }
    }
}

/// `p(x_0, x) = κ(x; x_0) p_in(x)`.
pub fn joint_from<T: Scalar>(kappa: &StochasticMap<T>, p_in: &[T]) -> Result<JointDistribution<T>> {
    let space = kappa.space();
    if kappa.domain() != space.full_set() {
        return Err(Error::Shape(format!("expected a map on all inputs, got domain {}", kappa.domain())));
    }
    if p_in.len() != space.input_size() {
        return Err(Error::Shape(format!("input distribution needs {} entries", space.input_size())));
    }
    let fibers = p_in
        .iter()
        .enumerate()
        .map(|(x, px)| kappa.row(x).iter().map(|k| k.clone() * px.clone()).collect())
        .collect();
    JointDistribution::new(space, fibers)
}

/// Whether two fibers are proportional (a zero fiber is proportional to anything).
pub fn proportional<T: Scalar>(a: &[T], b: &[T], tol: f64) -> bool {
    minor_witness(a, b, tol).is_none()
}

fn minor_witness<T: Scalar>(a: &[T], b: &[T], tol: f64) -> Option<(usize, usize)> {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let det = a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone();
            if !det.approx_eq(&T::zero(), tol) {
                return Some((i, j));
            }
        }
    }
    None
}

/// A violated 2×2 minor of the CI statement `X_0 ⫫ X_{[n]∖R} | X_R = x_R`,
/// as `(x, x', x_0, x_0')`.
pub fn ci_witness<T: Scalar>(
    p: &JointDistribution<T>,
    set: NodeSet,
    values: &[usize],
    tol: f64,
) -> Result<Option<(usize, usize, usize, usize)>> {
    let cyl = p.space.cylinder(set, values);
    for (i, &x) in cyl.iter().enumerate() {
        for &y in &cyl[i + 1..] {
            if let Some((a, b)) = minor_witness(p.fiber(x), p.fiber(y), tol) {
                return Ok(Some((x, y, a, b)));
            }
        }
    }
    Ok(None)
}

/// All determinantal equations of `X_0 ⫫ X_{[n]∖R} | X_R = x_R` hold.
pub fn check_ci<T: Scalar>(p: &JointDistribution<T>, set: NodeSet, values: &[usize], tol: f64) -> Result<bool> {
    p.space.check_assignment(set, values)?;
    Ok(ci_witness(p, set, values, tol)?.is_none())
}

/// Two states of one support component with nonproportional fibers.
pub fn proportionality_witness<T: Scalar>(
    p: &JointDistribution<T>,
    spec: &RobustnessSpec,
    tol: f64,
) -> Result<Option<(usize, usize)>> {
    let structure = support_structure(p, spec)?;
    for block in structure.blocks() {
        // proportionality is transitive among nonzero fibers
        if let Some(&y) = block[1..].iter().find(|&&y| !proportional(p.fiber(block[0]), p.fiber(y), tol)) {
            return Ok(Some((block[0], y)));
        }
    }
    Ok(None)
}

/// Whether `p` satisfies every CI statement of the specification. The
/// fiber-proportionality criterion on support components is evaluated too
/// and must agree.
pub fn is_r_robust_distribution<T: Scalar>(
    p: &JointDistribution<T>,
    spec: &RobustnessSpec,
    tol: f64,
) -> Result<bool> {
    let mut by_minors = true;
    for (set, values) in spec.pairs() {
        if !check_ci(p, set, &values, tol)? {
            by_minors = false;
            break;
        }
    }
    if T::EXACT {
        let by_fibers = proportionality_witness(p, spec, tol)?.is_none();
        debug_assert_eq!(by_minors, by_fibers, "CI criteria disagree");
    }
    Ok(by_minors)
}

/// Components of `G_{R,S}` for the support `S` of `p`.
pub fn support_structure<T: Scalar>(p: &JointDistribution<T>, spec: &RobustnessSpec) -> Result<RobustnessStructure> {
    if spec.space() != p.space() {
        return Err(Error::Shape("specification and distribution use different spaces".into()));
    }
    let support = p.support();
    if support.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    components_of(spec, &support)
}

/// Parameters `(μ, λ_Z, p_Z)` of `p(x_0, x) = μ(Z) λ_Z(x) p_Z(x_0)` for `x ∈ Z`.
/// `lambda[i]` is indexed like the sorted states of block `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentParams<T> {
    pub mu: Vec<T>,
    pub lambda: Vec<Vec<T>>,
    pub outputs: Vec<Vec<T>>,
}

impl<T: Scalar> ComponentParams<T> {
    /// Strictly positive random parameters with integer weights.
    pub fn random<R: Rng + ?Sized>(structure: &RobustnessStructure, d0: usize, rng: &mut R) -> Self {
        ComponentParams {
            mu: random_row(structure.len(), rng),
            lambda: structure.blocks().iter().map(|b| random_row(b.len(), rng)).collect(),
            outputs: structure.blocks().iter().map(|_| random_row(d0, rng)).collect(),
        }
    }
}

fn check_distribution<T: Scalar>(what: &str, v: &[T]) -> Result<()> {
    if v.iter().any(|x| x.is_negative()) || !sum(v.iter().cloned()).approx_eq(&T::one(), MASS_TOL) {
        return Err(Error::IndexMismatch(format!("{what} is not a probability distribution")));
    }
    Ok(())
}

/// The distribution with the given block parameters, zero outside `∪B`.
pub fn sample_from_component<T: Scalar>(
    space: &StateSpace,
    structure: &RobustnessStructure,
    params: &ComponentParams<T>,
) -> Result<JointDistribution<T>> {
    let blocks = structure.blocks();
    if structure.num_states() != space.input_size() {
        return Err(Error::IndexMismatch("structure is over a different state space".into()));
    }
    if params.mu.len() != blocks.len() || params.lambda.len() != blocks.len() || params.outputs.len() != blocks.len() {
        return Err(Error::IndexMismatch(format!("expected parameters for {} blocks", blocks.len())));
    }
    check_distribution("mu", &params.mu)?;
    let mut fibers = vec![vec![T::zero(); space.output_size()]; space.input_size()];
    for (i, block) in blocks.iter().enumerate() {
        if params.lambda[i].len() != block.len() {
            return Err(Error::IndexMismatch(format!("lambda for block {i} needs {} entries", block.len())));
        }
        if params.outputs[i].len() != space.output_size() {
            return Err(Error::IndexMismatch(format!("output distribution {i} has the wrong length")));
        }
        check_distribution("lambda", &params.lambda[i])?;
        check_distribution("output distribution", &params.outputs[i])?;
        for (j, &x) in block.iter().enumerate() {
            let weight = params.mu[i].clone() * params.lambda[i][j].clone();
            fibers[x] = params.outputs[i].iter().map(|q| weight.clone() * q.clone()).collect();
        }
    }
    JointDistribution::new(space, fibers)
}

/// Membership in `P_B`: the support is exactly `∪B` and fibers are
/// proportional inside every block.
pub fn component_membership<T: Scalar>(
    p: &JointDistribution<T>,
    structure: &RobustnessStructure,
    tol: f64,
) -> Result<bool> {
    if structure.num_states() != p.space.input_size() {
        return Err(Error::IndexMismatch("structure is over a different state space".into()));
    }
    if p.support() != structure.union() {
        return Ok(false);
    }
    Ok(structure
        .blocks()
        .iter()
        .all(|b| b[1..].iter().all(|&y| proportional(p.fiber(b[0]), p.fiber(y), tol))))
}

/// A state `x ∉ ∪B` touching at most one block, with a donor `y` from the
/// touched block (or from the first block when `x` touches none).
pub fn find_witness(spec: &RobustnessSpec, structure: &RobustnessStructure) -> Option<(usize, usize)> {
    let labels = structure.labeling();
    let union = structure.union();
    let first = union.first().copied()?;
    (0..structure.num_states()).filter(|&x| labels[x].is_none()).find_map(|x| {
        let mut touched: Vec<usize> =
            union.iter().filter(|&&y| adjacent(spec, x, y)).filter_map(|&y| labels[y]).collect();
        touched.sort_unstable();
        touched.dedup();
        match touched.as_slice() {
            [] => Some((x, first)),
            [b] => Some((x, structure.blocks()[*b][0])),
            _ => None,
        }
    })
}

/// Moves the fraction `ε` of the donor fiber `p̃_y` to the new state `x`:
/// `p_ε(·, y) = (1 − ε) p(·, y)` and `p_ε(·, x) = ε p(·, y)`. Returns `p_ε`
/// and the structure `B'` of `∪B ∪ {x}`, which contains `p_ε` for `0 < ε < 1`.
pub fn epsilon_approximation<T: Scalar>(
    p: &JointDistribution<T>,
    spec: &RobustnessSpec,
    structure: &RobustnessStructure,
    x: usize,
    y: usize,
    epsilon: &T,
) -> Result<(JointDistribution<T>, RobustnessStructure)> {
    let space = p.space();
    space.check_state(x)?;
    space.check_state(y)?;
    if epsilon.is_negative() || epsilon.clone() > T::one() {
        return Err(Error::InvalidParameter(format!("epsilon {} outside [0, 1]", epsilon.to_f64())));
    }
    let labels = structure.labeling();
    if labels[x].is_some() {
        return Err(Error::InvalidWitness(format!("state {x} already lies in a block")));
    }
    let Some(donor_block) = labels[y] else {
        return Err(Error::InvalidWitness(format!("donor {y} is not in any block")));
    };
    let mut touched: Vec<usize> = structure
        .union()
        .into_iter()
        .filter(|&z| adjacent(spec, x, z))
        .filter_map(|z| labels[z])
        .collect();
    touched.sort_unstable();
    touched.dedup();
    match touched.as_slice() {
        [] => {}
        [b] if *b == donor_block => {}
        [_] => return Err(Error::InvalidWitness(format!("donor {y} is not in the block joined by {x}"))),
        _ => return Err(Error::InvalidWitness(format!("state {x} would merge blocks"))),
    }
    if !component_membership(p, structure, 0.0)? {
        return Err(Error::InvalidWitness("distribution is not in the component of the structure".into()));
    }
    let mut fibers = p.fibers.clone();
    let donor = p.fiber(y).to_vec();
    fibers[y] = donor.iter().map(|v| (T::one() - epsilon.clone()) * v.clone()).collect();
    fibers[x] = donor.iter().map(|v| epsilon.clone() * v.clone()).collect();
    let mut union = structure.union();
    union.push(x);
    let larger = components_of(spec, &union)?;
    Ok((JointDistribution::new(space, fibers)?, larger))
}

/// `½ Σ |p − q|`.
pub fn total_variation<T: Scalar>(p: &JointDistribution<T>, q: &JointDistribution<T>) -> T {
    let half = T::from_ratio(1, 2);
    let total = sum(p.fibers.iter().flatten().zip(q.fibers.iter().flatten()).map(|(a, b)| {
        let d = a.clone() - b.clone();
        if d.is_negative() {
            -d
        } else {
            d
        }
    }));
    half * total
}

/// `κ(x; x_0) = p(x_0, x) / p_in(x)`; rows with `p_in(x) = 0` are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalKernel<T> {
    space: StateSpace,
    rows: Vec<Option<Vec<T>>>,
}

impl<T: Scalar> ConditionalKernel<T> {
    pub fn row(&self, x: usize) -> Option<&[T]> {
        self.rows[x].as_deref()
    }

    pub fn undefined(&self) -> Vec<usize> {
        (0..self.rows.len()).filter(|&x| self.rows[x].is_none()).collect()
    }

    /// Completes the undefined rows with `fill`.
    pub fn complete(&self, fill: &[T]) -> Result<StochasticMap<T>> {
        let rows = self.rows.iter().map(|r| r.clone().unwrap_or_else(|| fill.to_vec())).collect();
        StochasticMap::new(&self.space, self.space.full_set(), rows)
    }
}

pub fn conditional_kernel<T: Scalar>(p: &JointDistribution<T>) -> ConditionalKernel<T> {
    let rows = p
        .fibers
        .iter()
        .map(|f| {
            let mass = sum(f.iter().cloned());
            (!mass.is_zero()).then(|| f.iter().map(|v| v.clone() / mass.clone()).collect())
        })
        .collect();
    ConditionalKernel { space: p.space.clone(), rows }
}

/// A random robust distribution: a structure drawn uniformly from all
/// robustness structures of the specification, with strictly positive
/// random block parameters.
pub fn random_robust_distribution<T: Scalar, R: Rng + ?Sized>(
    spec: &RobustnessSpec,
    rng: &mut R,
) -> Result<(JointDistribution<T>, RobustnessStructure)> {
    let all = enumerate_structures(spec)?;
    let structure = all[rng.gen_range(0..all.len())].clone();
    let params = ComponentParams::random(&structure, spec.space().output_size(), rng);
    Ok((sample_from_component(spec.space(), &structure, &params)?, structure))
}
