//! Stochastic maps, functional modalities and the robustness predicates on them.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::robustness::RobustnessSpec;
use crate::scalar::Scalar;
use crate::space::{NodeSet, StateSpace};
use crate::structures::{components_of, RobustnessStructure};

/// Row sums of float maps must be within this distance of 1.
pub const ROW_SUM_TOL: f64 = 1e-12;

/// Default tolerance for comparing float rows.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A stochastic map `κ_A : X_A → Δ(X_0)`, one row per state of `X_A`
/// (nodes of `A` in ascending order, node with smallest id varying slowest).
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMap<T> {
    space: StateSpace,
    domain: NodeSet,
    rows: Vec<Vec<T>>,
}

pub fn rows_close<T: Scalar>(a: &[T], b: &[T], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(u, v)| u.approx_eq(v, tol))
}

pub(crate) fn check_row<T: Scalar>(domain: NodeSet, index: usize, row: &[T]) -> Result<()> {
    if row.iter().any(|v| v.is_negative()) {
        return Err(Error::NotStochastic { domain, row: index });
    }
    let sum = row.iter().cloned().fold(T::zero(), |a, b| a + b);
    if !sum.approx_eq(&T::one(), ROW_SUM_TOL) {
        return Err(Error::NotStochastic { domain, row: index });
    }
    Ok(())
}

impl<T: Scalar> StochasticMap<T> {
    pub fn new(space: &StateSpace, domain: NodeSet, rows: Vec<Vec<T>>) -> Result<Self> {
        space.check_set(domain)?;
        let expected = space.sub_size(domain);
        if rows.len() != expected {
            return Err(Error::Shape(format!(
                "map on {domain} needs {expected} rows, got {}",
                rows.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != space.output_size() {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    space.output_size()
                )));
            }
            check_row(domain, i, row)?;
        }
        Ok(StochasticMap { space: space.clone(), domain, rows })
    }

    pub(crate) fn from_rows_unchecked(space: &StateSpace, domain: NodeSet, rows: Vec<Vec<T>>) -> Self {
        StochasticMap { space: space.clone(), domain, rows }
    }

    /// Every row equal to `row`.
    pub fn constant(space: &StateSpace, domain: NodeSet, row: Vec<T>) -> Result<Self> {
        Self::new(space, domain, vec![row; space.sub_size(domain)])
    }

    pub fn uniform(space: &StateSpace, domain: NodeSet) -> Self {
        let d0 = space.output_size();
        let row = vec![T::from_ratio(1, d0 as i64); d0];
        Self::from_rows_unchecked(space, domain, vec![row; space.sub_size(domain)])
    }

    /// Builds a map on `domain` from a function of the assignment `x_A`.
    pub fn from_fn(
        space: &StateSpace,
        domain: NodeSet,
        mut f: impl FnMut(&[usize]) -> Vec<T>,
    ) -> Result<Self> {
        let rows = (0..space.sub_size(domain)).map(|i| f(&space.sub_values(domain, i))).collect();
        Self::new(space, domain, rows)
    }

    /// A map with strictly positive random rows: integer weights `1..=20`, normalized.
    pub fn random<R: Rng + ?Sized>(space: &StateSpace, domain: NodeSet, rng: &mut R) -> Self {
        let rows = (0..space.sub_size(domain)).map(|_| random_row(space.output_size(), rng)).collect();
        Self::from_rows_unchecked(space, domain, rows)
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn domain(&self) -> NodeSet {
        self.domain
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn row(&self, index: usize) -> &[T] {
        &self.rows[index]
    }

    pub fn entry(&self, index: usize, x0: usize) -> &T {
        &self.rows[index][x0]
    }

    /// The row used for the full input state `x`, i.e. `κ_A(x|_A)`.
    pub fn row_of_state(&self, x: usize) -> &[T] {
        &self.rows[self.space.restrict_index(x, self.domain)]
    }

    pub fn into_rows(self) -> Vec<Vec<T>> {
        self.rows
    }

    pub fn convert<U: Scalar>(&self, f: impl Fn(&T) -> U) -> StochasticMap<U> {
        StochasticMap {
            space: self.space.clone(),
            domain: self.domain,
            rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    pub fn to_f64(&self) -> StochasticMap<f64> {
        self.convert(|v| v.to_f64())
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.domain == other.domain
            && self.rows.len() == other.rows.len()
            && self.rows.iter().zip(&other.rows).all(|(a, b)| rows_close(a, b, tol))
    }

    fn require_full(&self) -> Result<()> {
        if self.domain != self.space.full_set() {
            return Err(Error::Shape(format!("expected a map on all inputs, got domain {}", self.domain)));
        }
        Ok(())
    }
}

/// A random probability vector with integer weights in `1..=20`.
pub fn random_row<T: Scalar, R: Rng + ?Sized>(d0: usize, rng: &mut R) -> Vec<T> {
    let w: Vec<i64> = (0..d0).map(|_| rng.gen_range(1..=20)).collect();
    let total: i64 = w.iter().sum();
    w.into_iter().map(|v| T::from_ratio(v, total)).collect()
}

/// A function `f : X_in → X_0` stored as a dense table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterministicMap {
    space: StateSpace,
    table: Vec<usize>,
}

impl DeterministicMap {
    pub fn new(space: &StateSpace, table: Vec<usize>) -> Result<Self> {
        if table.len() != space.input_size() {
            return Err(Error::Shape(format!(
                "function table needs {} entries, got {}",
                space.input_size(),
                table.len()
            )));
        }
        if let Some(&v) = table.iter().find(|&&v| v >= space.output_size()) {
            return Err(Error::InvalidValue { node: 0, value: v, card: space.output_size() });
        }
        Ok(DeterministicMap { space: space.clone(), table })
    }

    pub fn from_fn(space: &StateSpace, f: impl Fn(&[usize]) -> usize) -> Result<Self> {
        let table = (0..space.input_size()).map(|x| f(&space.coords_of(x))).collect();
        Self::new(space, table)
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn eval(&self, x: usize) -> usize {
        self.table[x]
    }
}

/// The 0/1 kernel `κ^f` with `κ^f(x; x_0) = 1` iff `f(x) = x_0`.
pub fn from_function<T: Scalar>(f: &DeterministicMap) -> StochasticMap<T> {
    let d0 = f.space.output_size();
    let rows = f
        .table
        .iter()
        .map(|&v| (0..d0).map(|j| if j == v { T::one() } else { T::zero() }).collect())
        .collect();
    StochasticMap::from_rows_unchecked(&f.space, f.space.full_set(), rows)
}

/// Whether `f` is constant on the cylinder set `C(R, x_R)`.
pub fn is_canalyzing(f: &DeterministicMap, set: NodeSet, values: &[usize]) -> Result<bool> {
    f.space.check_assignment(set, values)?;
    let cyl = f.space.cylinder(set, values);
    Ok(cyl.iter().all(|&x| f.table[x] == f.table[cyl[0]]))
}

/// Whether `f` is canalyzing for every pair of the specification.
pub fn is_r_canalyzing(f: &DeterministicMap, spec: &RobustnessSpec) -> Result<bool> {
    for (set, values) in spec.pairs() {
        if !is_canalyzing(f, set, &values)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Two states of `S` in a common cylinder `C(R, x_R)` with different rows, if any.
fn cylinder_witness<T: Scalar>(
    kappa: &StochasticMap<T>,
    spec: &RobustnessSpec,
    members: &[usize],
    tol: f64,
) -> Option<(usize, usize)> {
    let space = kappa.space();
    for (group, _) in spec.groups() {
        let mut first: std::collections::HashMap<usize, usize> = Default::default();
        for &x in members {
            let key = space.restrict_index(x, group);
            if !spec.contains_sub_index(group, key) {
                continue;
            }
            match first.get(&key) {
                Some(&y) => {
                    if !rows_close(kappa.row(x), kappa.row(y), tol) {
                        return Some((y.min(x), y.max(x)));
                    }
                }
                None => {
                    first.insert(key, x);
                }
            }
        }
    }
    None
}

fn component_witness<T: Scalar>(
    kappa: &StochasticMap<T>,
    structure: &RobustnessStructure,
    tol: f64,
) -> Option<(usize, usize)> {
    for block in structure.blocks() {
        let head = block[0];
        if let Some(&y) = block.iter().find(|&&y| !rows_close(kappa.row(head), kappa.row(y), tol)) {
            return Some((head, y));
        }
    }
    None
}

/// Both robustness criteria for a map on `X_in`: (constant on every
/// `S ∩ C(R, x_R)`, constant on every component of `G_{R,S}`).
pub fn robustness_conditions<T: Scalar>(
    kappa: &StochasticMap<T>,
    spec: &RobustnessSpec,
    set: &[usize],
    tol: f64,
) -> Result<(bool, bool)> {
    kappa.require_full()?;
    let structure = components_of(spec, set)?;
    let members = structure.union();
    let by_cylinders = cylinder_witness(kappa, spec, &members, tol).is_none();
    let by_components = component_witness(kappa, &structure, tol).is_none();
    Ok((by_cylinders, by_components))
}

/// Whether `κ` is `R`-robust in `S`: constant on the components of `G_{R,S}`.
pub fn is_r_robust_map<T: Scalar>(
    kappa: &StochasticMap<T>,
    spec: &RobustnessSpec,
    set: &[usize],
    tol: f64,
) -> Result<bool> {
    let (by_cylinders, by_components) = robustness_conditions(kappa, spec, set, tol)?;
    if T::EXACT {
        debug_assert_eq!(by_cylinders, by_components, "robustness criteria disagree");
    }
    Ok(by_components)
}

/// A pair of states in one component of `G_{R,S}` on which `κ` differs.
pub fn robustness_witness<T: Scalar>(
    kappa: &StochasticMap<T>,
    spec: &RobustnessSpec,
    set: &[usize],
    tol: f64,
) -> Result<Option<(usize, usize)>> {
    kappa.require_full()?;
    Ok(component_witness(kappa, &components_of(spec, set)?, tol))
}

/// `κ'` with `κ = κ' ∘ f_B` on `∪B`: one row per block.
pub fn factorize_through_structure<T: Scalar>(
    kappa: &StochasticMap<T>,
    structure: &RobustnessStructure,
    tol: f64,
) -> Result<Vec<Vec<T>>> {
    kappa.require_full()?;
    if let Some((x, y)) = component_witness(kappa, structure, tol) {
        return Err(Error::NotConstantOnBlock(x, y));
    }
    Ok(structure.blocks().iter().map(|b| kappa.row(b[0]).to_vec()).collect())
}

/// Evaluates `κ' ∘ f_B` at `x`; `None` outside `∪B`.
pub fn compose_with_structure<'a, T>(
    factor: &'a [Vec<T>],
    structure: &RobustnessStructure,
    x: usize,
) -> Option<&'a [T]> {
    structure.block_of(x).map(|b| factor[b].as_slice())
}

/// A family `(κ_A)_{A ⊆ [n]}`, stored by the bitmask of `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalModalities<T> {
    space: StateSpace,
    maps: Vec<StochasticMap<T>>,
}

impl<T: Scalar> FunctionalModalities<T> {
    /// `maps[A.bits()]` must be the member for `A`.
    pub fn new(space: &StateSpace, maps: Vec<StochasticMap<T>>) -> Result<Self> {
        let expected = 1usize << space.n();
        if maps.len() != expected {
            return Err(Error::Shape(format!("need {expected} modalities, got {}", maps.len())));
        }
        for (bits, m) in maps.iter().enumerate() {
            if m.domain().bits() as usize != bits {
                return Err(Error::Shape(format!("modality {bits} has domain {}", m.domain())));
            }
            if m.space() != space {
                return Err(Error::Shape("modality over a different state space".into()));
            }
        }
        Ok(FunctionalModalities { space: space.clone(), maps })
    }

    pub fn from_fn(
        space: &StateSpace,
        mut f: impl FnMut(NodeSet) -> Result<StochasticMap<T>>,
    ) -> Result<Self> {
        let maps = NodeSet::all(space.n()).map(&mut f).collect::<Result<Vec<_>>>()?;
        Self::new(space, maps)
    }

    /// Independent random positive members.
    pub fn random<R: Rng + ?Sized>(space: &StateSpace, rng: &mut R) -> Self {
        let maps = NodeSet::all(space.n()).map(|a| StochasticMap::random(space, a, rng)).collect();
        FunctionalModalities { space: space.clone(), maps }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn get(&self, set: NodeSet) -> &StochasticMap<T> {
        &self.maps[set.bits() as usize]
    }

    pub fn set(&mut self, map: StochasticMap<T>) -> Result<()> {
        if map.space() != &self.space {
            return Err(Error::Shape("modality over a different state space".into()));
        }
        let i = map.domain().bits() as usize;
        self.maps[i] = map;
        Ok(())
    }

    pub fn full(&self) -> &StochasticMap<T> {
        self.get(self.space.full_set())
    }

    pub fn maps(&self) -> &[StochasticMap<T>] {
        &self.maps
    }

    pub fn to_f64(&self) -> FunctionalModalities<f64> {
        FunctionalModalities {
            space: self.space.clone(),
            maps: self.maps.iter().map(|m| m.to_f64()).collect(),
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.space == other.space && self.maps.iter().zip(&other.maps).all(|(a, b)| a.approx_eq(b, tol))
    }
}

/// A state `x ∈ S` and a set `R` with `(R, x|_R)` in the specification but
/// `κ_[n](x) ≠ κ_R(x|_R)`.
pub fn modalities_witness<T: Scalar>(
    modalities: &FunctionalModalities<T>,
    spec: &RobustnessSpec,
    set: &[usize],
    tol: f64,
) -> Result<Option<(usize, NodeSet)>> {
    let space = modalities.space();
    let full = modalities.full();
    let members: BTreeSet<usize> = set.iter().copied().collect();
    for &x in &members {
        space.check_state(x)?;
        for (group, _) in spec.groups() {
            if spec.contains_state(group, x)
                && !rows_close(full.row(x), modalities.get(group).row_of_state(x), tol)
            {
                return Ok(Some((x, group)));
            }
        }
    }
    Ok(None)
}

/// Whether `κ_[n](x) = κ_R(x|_R)` for all `x ∈ S` and `(R, x|_R)` in the specification.
pub fn is_r_robust_modalities<T: Scalar>(
    modalities: &FunctionalModalities<T>,
    spec: &RobustnessSpec,
    set: &[usize],
    tol: f64,
) -> Result<bool> {
    Ok(modalities_witness(modalities, spec, set, tol)?.is_none())
}

/// Random modalities that are robust on `∪B` in the strong sense: every `κ_A`
/// with `A ⊇ R` for some `(R, x|_R)` in the specification returns the row of
/// the block of `x`. All other rows are random. Block rows are drawn once per block.
pub fn random_robust_modalities<T: Scalar, R: Rng + ?Sized>(
    spec: &RobustnessSpec,
    structure: &RobustnessStructure,
    rng: &mut R,
) -> Result<FunctionalModalities<T>> {
    let space = spec.space();
    let union = structure.union();
    if components_of(spec, &union)? != *structure {
        return Err(Error::InconsistentStructure);
    }
    let block_rows: Vec<Vec<T>> = structure.blocks().iter().map(|_| random_row(space.output_size(), rng)).collect();
    let groups: Vec<NodeSet> = spec.groups().map(|(g, _)| g).collect();
    let mut maps = Vec::with_capacity(1 << space.n());
    for a in NodeSet::all(space.n()) {
        let mut rows: Vec<Option<Vec<T>>> = vec![None; space.sub_size(a)];
        for &x in &union {
            let pinned = groups.iter().any(|&r| r.is_subset(a) && spec.contains_state(r, x));
            if pinned {
                let b = structure.block_of(x).expect("x lies in the union");
                rows[space.restrict_index(x, a)] = Some(block_rows[b].clone());
            }
        }
        let rows = rows.into_iter().map(|r| r.unwrap_or_else(|| random_row(space.output_size(), rng))).collect();
        maps.push(StochasticMap::from_rows_unchecked(space, a, rows));
    }
    Ok(FunctionalModalities { space: space.clone(), maps })
}

/// The input space of the single-map encoding: every node gains a knockout
/// value, stored as index 0; the original value `v` becomes `v + 1`.
pub fn extended_space(space: &StateSpace) -> StateSpace {
    let cards: Vec<usize> = std::iter::once(space.output_size())
        .chain(space.input_cards().iter().map(|d| d + 1))
        .collect();
    StateSpace::new(cards).expect("extended cardinalities are valid")
}

/// `κ̂(y) = κ_{supp(y)}(y|_{supp(y)})` on the extended input space.
pub fn hat_kappa<T: Scalar>(modalities: &FunctionalModalities<T>) -> StochasticMap<T> {
    let space = modalities.space();
    let ext = extended_space(space);
    let rows = (0..ext.input_size())
        .map(|y| {
            let (supp, values) = split_extended(&ext, y);
            let m = modalities.get(supp);
            m.row(space.sub_index(supp, &values)).to_vec()
        })
        .collect();
    StochasticMap::from_rows_unchecked(&ext, ext.full_set(), rows)
}

/// Support of an extended state and its values on the support (shifted back).
pub fn split_extended(ext: &StateSpace, y: usize) -> (NodeSet, Vec<usize>) {
    let coords = ext.coords_of(y);
    let supp = NodeSet::from_nodes((1..=coords.len()).filter(|&i| coords[i - 1] != 0));
    let values = coords.iter().filter(|&&v| v != 0).map(|v| v - 1).collect();
    (supp, values)
}

/// Inverse of [`hat_kappa`].
pub fn modalities_from_hat<T: Scalar>(
    space: &StateSpace,
    hat: &StochasticMap<T>,
) -> Result<FunctionalModalities<T>> {
    let ext = extended_space(space);
    if hat.space() != &ext || hat.domain() != ext.full_set() {
        return Err(Error::Shape("map is not over the extended input space".into()));
    }
    FunctionalModalities::from_fn(space, |set| {
        let rows = (0..space.sub_size(set))
            .map(|i| {
                let values = space.sub_values(set, i);
                let mut coords = vec![0; space.n()];
                for (node, v) in set.nodes().zip(values) {
                    coords[node - 1] = v + 1;
                }
                hat.row(ext.index_of(&coords).expect("valid extended state")).to_vec()
            })
            .collect();
        StochasticMap::new(space, set, rows)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn xor(space: &StateSpace) -> DeterministicMap {
        DeterministicMap::from_fn(space, |c| c.iter().sum::<usize>() % 2).unwrap()
    }

    #[test]
    fn stochastic_validation() {
        let s = StateSpace::binary(2);
        assert!(StochasticMap::new(&s, NodeSet::singleton(1), vec![vec![rat(1, 2), rat(1, 2)]; 2]).is_ok());
        assert_eq!(
            StochasticMap::new(&s, NodeSet::singleton(1), vec![vec![rat(1, 2), rat(1, 3)]; 2]),
            Err(Error::NotStochastic { domain: NodeSet::singleton(1), row: 0 })
        );
        assert!(matches!(
            StochasticMap::new(&s, NodeSet::singleton(1), vec![vec![rat(1, 1), rat(0, 1)]]),
            Err(Error::Shape(_))
        ));
        assert!(StochasticMap::new(&s, NodeSet::EMPTY, vec![vec![1.5f64, -0.5]]).is_err());
        assert!(StochasticMap::new(&s, NodeSet::EMPTY, vec![vec![0.3f64, 0.7 + 1e-13]]).is_ok());
    }

    #[test]
    fn random_robust_modalities_are_robust_on_union() {
        let s = StateSpace::binary(3);
        let spec = RobustnessSpec::r_k(&s, 2).unwrap();
        let structure = components_of(&spec, &[0, 3, 5, 6]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m: FunctionalModalities<Rational> = random_robust_modalities(&spec, &structure, &mut rng).unwrap();
        assert!(is_r_robust_modalities(&m, &spec, &structure.union(), 0.0).unwrap());
        let r3 = RobustnessSpec::r_k(&s, 3).unwrap();
        let whole = components_of(&r3, &[0, 1]).unwrap();
        assert_eq!(
            random_robust_modalities::<Rational, _>(&spec, &whole, &mut rng),
            Err(Error::InconsistentStructure)
        );
    }

    #[test]
    fn function_kernels() {
        let s = StateSpace::binary(2);
        let k: StochasticMap<Rational> = from_function(&xor(&s));
        let argmax: Vec<usize> = k
            .rows()
            .iter()
            .map(|r| r.iter().position(|v| *v == rat(1, 1)).unwrap())
            .collect();
        assert_eq!(argmax, vec![0, 1, 1, 0]);
        let c = DeterministicMap::new(&s, vec![1; 4]).unwrap();
        let kc: StochasticMap<Rational> = from_function(&c);
        assert!(kc.rows().iter().all(|r| r == &vec![rat(0, 1), rat(1, 1)]));
        assert!(DeterministicMap::new(&s, vec![0, 2, 0, 0]).is_err());
    }

    #[test]
    fn robust_map_examples() {
        let s = StateSpace::binary(2);
        let r1 = RobustnessSpec::r_k(&s, 1).unwrap();
        let all: Vec<usize> = (0..4).collect();
        let k: StochasticMap<Rational> = from_function(&xor(&s));
        assert!(!is_r_robust_map(&k, &r1, &all, 0.0).unwrap());
        assert!(robustness_witness(&k, &r1, &all, 0.0).unwrap().is_some());
        assert!(is_r_robust_map(&k, &r1, &[0, 3], 0.0).unwrap());
        let c = StochasticMap::constant(&s, s.full_set(), vec![rat(1, 3), rat(2, 3)]).unwrap();
        assert!(is_r_robust_map(&c, &RobustnessSpec::full_states(&s), &all, 0.0).unwrap());
        assert!(is_r_robust_map(&c, &RobustnessSpec::r_k(&s, 0).unwrap(), &all, 0.0).unwrap());
    }

    #[test]
    fn canalyzing_examples() {
        let s = StateSpace::binary(2);
        let or = DeterministicMap::from_fn(&s, |c| c[0] | c[1]).unwrap();
        assert!(is_canalyzing(&or, NodeSet::singleton(1), &[1]).unwrap());
        assert!(!is_canalyzing(&or, NodeSet::singleton(1), &[0]).unwrap());
        let x = xor(&s);
        for set in [NodeSet::singleton(1), NodeSet::singleton(2)] {
            for v in 0..2 {
                assert!(!is_canalyzing(&x, set, &[v]).unwrap());
            }
        }
        assert!(!is_canalyzing(&x, NodeSet::EMPTY, &[]).unwrap());
        assert!(is_r_canalyzing(&x, &RobustnessSpec::full_states(&s)).unwrap());
        assert!(is_r_canalyzing(&or, &RobustnessSpec::canalyzing(&s, 2, 1).unwrap()).unwrap());
    }

    #[test]
    fn factorization() {
        let s = StateSpace::binary(4);
        let r3 = RobustnessSpec::r_k(&s, 3).unwrap();
        let set: Vec<usize> = [0b0000, 0b0010, 0b0101, 0b0111, 0b1000, 0b1010, 0b1101, 0b1111].to_vec();
        let st = components_of(&r3, &set).unwrap();
        let a = vec![rat(1, 4), rat(3, 4)];
        let b = vec![rat(1, 1), rat(0, 1)];
        let k = StochasticMap::from_fn(&s, s.full_set(), |c| if c[1] == 1 { b.clone() } else { a.clone() })
            .unwrap();
        let f = factorize_through_structure(&k, &st, 0.0).unwrap();
        assert_eq!(f, vec![a.clone(), b.clone()]);
        for &x in &set {
            assert_eq!(compose_with_structure(&f, &st, x).unwrap(), k.row(x));
        }
        assert!(compose_with_structure(&f, &st, 1).is_none());
        let bad = StochasticMap::from_fn(&s, s.full_set(), |c| if c[2] == 1 { b.clone() } else { a.clone() })
            .unwrap();
        assert!(matches!(
            factorize_through_structure(&bad, &st, 0.0),
            Err(Error::NotConstantOnBlock(..))
        ));
    }

    #[test]
    fn modalities_predicate() {
        let s = StateSpace::binary(3);
        let row = vec![rat(1, 5), rat(4, 5)];
        let mut m = FunctionalModalities::from_fn(&s, |a| StochasticMap::constant(&s, a, row.clone())).unwrap();
        let all: Vec<usize> = (0..8).collect();
        for k in 0..=3 {
            assert!(is_r_robust_modalities(&m, &RobustnessSpec::r_k(&s, k).unwrap(), &all, 0.0).unwrap());
        }
        let one = NodeSet::singleton(1);
        let mut rows = m.get(one).rows().to_vec();
        rows[1] = vec![rat(1, 2), rat(1, 2)];
        m.set(StochasticMap::new(&s, one, rows).unwrap()).unwrap();
        let r1 = RobustnessSpec::r_k(&s, 1).unwrap();
        assert_eq!(modalities_witness(&m, &r1, &all, 0.0).unwrap(), Some((4, one)));
        assert!(is_r_robust_modalities(&m, &r1, &[0, 1, 2, 3], 0.0).unwrap());
    }

    #[test]
    fn hat_examples() {
        let s = StateSpace::new(vec![2, 2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m: FunctionalModalities<Rational> = FunctionalModalities::random(&s, &mut rng);
        let hat = hat_kappa(&m);
        let ext = hat.space().clone();
        assert_eq!(ext.input_cards(), &[3, 4]);
        assert_eq!(hat.row(0), m.get(NodeSet::EMPTY).row(0));
        let y = ext.index_of(&[2, 3]).unwrap();
        assert_eq!(hat.row(y), m.full().row(s.index_of(&[1, 2]).unwrap()));
        assert_eq!(modalities_from_hat(&s, &hat).unwrap(), m);
    }

    proptest! {
        #[test]
        fn canalyzing_matches_kernel_robustness(table in proptest::collection::vec(0usize..2, 8), node in 1usize..=3, v in 0usize..2, k in 0usize..=3) {
            let s = StateSpace::binary(3);
            let f = DeterministicMap::new(&s, table).unwrap();
            let kf: StochasticMap<Rational> = from_function(&f);
            let all: Vec<usize> = (0..8).collect();
            for spec in [RobustnessSpec::canalyzing(&s, node, v).unwrap(), RobustnessSpec::r_k(&s, k).unwrap()] {
                let (a, b) = robustness_conditions(&kf, &spec, &all, 0.0).unwrap();
                prop_assert_eq!(a, b);
                prop_assert_eq!(is_r_canalyzing(&f, &spec).unwrap(), b);
            }
        }

        #[test]
        fn hat_round_trip(seed in 0u64..1000) {
            let s = StateSpace::new(vec![3, 2, 2, 2]).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m: FunctionalModalities<f64> = FunctionalModalities::random(&s, &mut rng);
            prop_assert_eq!(modalities_from_hat(&s, &hat_kappa(&m)).unwrap(), m);
        }
    }
}
