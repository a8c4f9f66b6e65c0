//! Robustness specifications: sets of pairs `(R, x_R)` under which the
//! output must not notice that the inputs outside `R` were knocked out.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::space::{NodeSet, StateSpace};

/// The assignments stored for one subset `R`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Assignments {
    /// Every `x_R ∈ X_R` (the saturated marker).
    All,
    /// An explicit list of partial assignments, values in ascending node order.
    Some(BTreeSet<Vec<usize>>),
}

/// A robustness specification over a fixed state space.
///
/// Pairs are grouped by their node set. A set stored as [`Assignments::All`]
/// stands for all of its assignments without enumerating them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RobustnessSpec {
    space: StateSpace,
    pairs: BTreeMap<NodeSet, Assignments>,
}

impl RobustnessSpec {
    pub fn empty(space: StateSpace) -> Self {
        RobustnessSpec { space, pairs: BTreeMap::new() }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    /// Adds `(R, x_R)`. A duplicate, or a pair already covered by an `All` marker, is a no-op.
    pub fn insert(&mut self, set: NodeSet, values: Vec<usize>) -> Result<()> {
        self.space.check_assignment(set, &values)?;
        match self.pairs.entry(set).or_insert_with(|| Assignments::Some(BTreeSet::new())) {
            Assignments::All => {}
            Assignments::Some(vals) => {
                vals.insert(values);
            }
        }
        Ok(())
    }

    /// Adds `(R, x_R)` for every `x_R ∈ X_R`.
    pub fn insert_all(&mut self, set: NodeSet) -> Result<()> {
        self.space.check_set(set)?;
        self.pairs.insert(set, Assignments::All);
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Node sets occurring in the specification, with their assignments.
    pub fn groups(&self) -> impl Iterator<Item = (NodeSet, &Assignments)> {
        self.pairs.iter().map(|(s, a)| (*s, a))
    }

    pub fn contains(&self, set: NodeSet, values: &[usize]) -> bool {
        match self.pairs.get(&set) {
            Some(Assignments::All) => true,
            Some(Assignments::Some(vals)) => vals.contains(values),
            None => false,
        }
    }

    /// Whether `(R, x|_R)` belongs to the specification for the full state `x`.
    pub fn contains_state(&self, set: NodeSet, state: usize) -> bool {
        match self.pairs.get(&set) {
            Some(Assignments::All) => true,
            Some(Assignments::Some(vals)) => {
                let coords = self.space.coords_of(state);
                vals.contains(&self.space.restrict_coords(&coords, set))
            }
            None => false,
        }
    }

    /// Whether some `(R, x_R)` with `x_R` given as an index into `X_R` is present.
    pub fn contains_sub_index(&self, set: NodeSet, sub: usize) -> bool {
        match self.pairs.get(&set) {
            Some(Assignments::All) => true,
            Some(Assignments::Some(vals)) => vals.contains(&self.space.sub_values(set, sub)),
            None => false,
        }
    }

    /// All pairs, expanding `All` markers.
    pub fn pairs(&self) -> Vec<(NodeSet, Vec<usize>)> {
        let mut out = Vec::new();
        for (&set, assign) in &self.pairs {
            match assign {
                Assignments::All => {
                    for i in 0..self.space.sub_size(set) {
                        out.push((set, self.space.sub_values(set, i)));
                    }
                }
                Assignments::Some(vals) => out.extend(vals.iter().map(|v| (set, v.clone()))),
            }
        }
        out
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs
            .iter()
            .map(|(&set, a)| match a {
                Assignments::All => self.space.sub_size(set),
                Assignments::Some(v) => v.len(),
            })
            .sum()
    }

    /// `Y_R = {x_R : (R, x_R) ∈ spec}` as indices into `X_R`.
    pub fn assignments_on(&self, set: NodeSet) -> Vec<usize> {
        match self.pairs.get(&set) {
            Some(Assignments::All) => (0..self.space.sub_size(set)).collect(),
            Some(Assignments::Some(vals)) => {
                vals.iter().map(|v| self.space.sub_index(set, v)).collect()
            }
            None => Vec::new(),
        }
    }

    /// Semantic equality: same space and same set of pairs, regardless of `All` markers.
    pub fn same_pairs(&self, other: &RobustnessSpec) -> bool {
        if self.space != other.space {
            return false;
        }
        let a: BTreeSet<_> = self.pairs().into_iter().collect();
        let b: BTreeSet<_> = other.pairs().into_iter().collect();
        a == b
    }

    fn saturated_at(&self, set: NodeSet) -> bool {
        match self.pairs.get(&set) {
            Some(Assignments::All) => true,
            Some(Assignments::Some(vals)) => vals.len() == self.space.sub_size(set),
            None => false,
        }
    }

    /// `R_k = {(R, x_R) : |R| ≥ k}`.
    pub fn r_k(space: &StateSpace, k: usize) -> Result<Self> {
        let n = space.n();
        if k > n {
            return Err(Error::InvalidK { k, n });
        }
        let mut spec = RobustnessSpec::empty(space.clone());
        for set in NodeSet::all(n).filter(|s| s.len() >= k) {
            spec.insert_all(set)?;
        }
        Ok(spec)
    }

    /// Pairs `(R, x_R)` with `node ∈ R` and `x_R|_node = value`.
    pub fn canalyzing(space: &StateSpace, node: usize, value: usize) -> Result<Self> {
        space.check_node(node)?;
        if value >= space.card(node) {
            return Err(Error::InvalidValue { node, value, card: space.card(node) });
        }
        let mut spec = RobustnessSpec::empty(space.clone());
        for set in NodeSet::all(space.n()).filter(|s| s.contains(node)) {
            let slot = set.nodes().position(|i| i == node).expect("node in set");
            for i in 0..space.sub_size(set) {
                let values = space.sub_values(set, i);
                if values[slot] == value {
                    spec.insert(set, values)?;
                }
            }
        }
        Ok(spec)
    }

    /// Disjoint union over `k` of the pairs with `[k] ⊆ R`, `x_i ≠ a_i` for `i < k`
    /// and `x_k = a_k`.
    pub fn nested_canalyzing(space: &StateSpace, canalyzing_values: &[usize]) -> Result<Self> {
        let n = space.n();
        if canalyzing_values.len() != n {
            return Err(Error::Shape(format!(
                "need {n} canalyzing values, got {}",
                canalyzing_values.len()
            )));
        }
        for (i, &a) in canalyzing_values.iter().enumerate() {
            if a >= space.card(i + 1) {
                return Err(Error::InvalidValue { node: i + 1, value: a, card: space.card(i + 1) });
            }
        }
        let mut spec = RobustnessSpec::empty(space.clone());
        for k in 1..=n {
            let prefix = NodeSet::full(k);
            for set in NodeSet::all(n).filter(|s| prefix.is_subset(*s)) {
                for i in 0..space.sub_size(set) {
                    let values = space.sub_values(set, i);
                    // the first k nodes of `set` are exactly 1..=k
                    let ok = (0..k - 1).all(|j| values[j] != canalyzing_values[j])
                        && values[k - 1] == canalyzing_values[k - 1];
                    if ok {
                        spec.insert(set, values)?;
                    }
                }
            }
        }
        Ok(spec)
    }

    /// `{([n], x) : x ∈ X_in}`: every function is canalyzing for it.
    pub fn full_states(space: &StateSpace) -> Self {
        let mut spec = RobustnessSpec::empty(space.clone());
        spec.insert_all(space.full_set()).expect("full set is valid");
        spec
    }

    /// Strict-inclusion coherence: for every `(R, x_R)` and every `R ⊊ R' ⊊ [n]`,
    /// all extensions of `x_R` to `R'` are present.
    pub fn is_coherent(&self) -> bool {
        let full = self.space.full_set();
        for (&set, assign) in &self.pairs {
            for sup in strict_supersets(set, full) {
                match assign {
                    Assignments::All => {
                        if !self.saturated_at(sup) {
                            return false;
                        }
                    }
                    Assignments::Some(vals) => {
                        if self.saturated_at(sup) {
                            continue;
                        }
                        for v in vals {
                            if !extensions(&self.space, set, v, sup).all(|e| self.contains(sup, &e)) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// The smallest coherent specification containing `self`.
    pub fn coherent_closure(&self) -> RobustnessSpec {
        let full = self.space.full_set();
        let mut out = self.clone();
        for (&set, assign) in &self.pairs {
            for sup in strict_supersets(set, full) {
                match assign {
                    Assignments::All => {
                        out.pairs.insert(sup, Assignments::All);
                    }
                    Assignments::Some(vals) => {
                        for v in vals {
                            for e in extensions(&self.space, set, v, sup) {
                                out.insert(sup, e).expect("extension is valid");
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// For each `R` that occurs, every `x_R` occurs with it.
    pub fn is_saturated(&self) -> bool {
        self.pairs.keys().all(|&s| self.saturated_at(s))
    }

    /// `R_x = {R : (R, x|_R) ∈ spec}`, or `{[n]}` when no pair applies to `x`.
    pub fn r_x(&self, state: usize) -> Vec<NodeSet> {
        let sets: Vec<NodeSet> =
            self.pairs.keys().copied().filter(|&s| self.contains_state(s, state)).collect();
        if sets.is_empty() {
            vec![self.space.full_set()]
        } else {
            sets
        }
    }

    /// The inclusion-minimal elements of `R_x`, sorted.
    pub fn r_min(&self, state: usize) -> Vec<NodeSet> {
        let sets = self.r_x(state);
        let mut min: Vec<NodeSet> = sets
            .iter()
            .copied()
            .filter(|&s| !sets.iter().any(|&t| t.is_proper_subset(s)))
            .collect();
        min.sort();
        min
    }

    /// `Δ = {C : C ⊆ R for some R ∈ R^min}` of a saturated specification.
    pub fn delta_family(&self) -> Result<DeltaFamily> {
        if !self.is_saturated() {
            return Err(Error::NotSaturated);
        }
        let minimal = self.r_min(0);
        let sets = minimal.iter().flat_map(|r| r.subsets()).collect();
        Ok(DeltaFamily { minimal, sets })
    }
}

/// Supersets `R'` with `R ⊊ R' ⊊ full`.
fn strict_supersets(set: NodeSet, full: NodeSet) -> impl Iterator<Item = NodeSet> {
    full.minus(set)
        .subsets()
        .filter(move |extra| !extra.is_empty() && set.union(*extra) != full)
        .map(move |extra| set.union(extra))
}

/// All `x_{R'}` with `x_{R'}|_R = x_R`, for `R ⊆ R'`.
fn extensions<'a>(
    space: &'a StateSpace,
    set: NodeSet,
    values: &'a [usize],
    sup: NodeSet,
) -> impl Iterator<Item = Vec<usize>> + 'a {
    let free = sup.minus(set);
    (0..space.sub_size(free)).map(move |i| {
        let free_vals = space.sub_values(free, i);
        let (mut a, mut b) = (values.iter(), free_vals.iter());
        sup.nodes()
            .map(|node| if set.contains(node) { *a.next().unwrap() } else { *b.next().unwrap() })
            .collect()
    })
}

/// The downward-closed family `Δ` of a saturated specification.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeltaFamily {
    /// `R^min`, independent of the state for saturated specifications.
    pub minimal: Vec<NodeSet>,
    pub sets: BTreeSet<NodeSet>,
}

impl DeltaFamily {
    pub fn contains(&self, set: NodeSet) -> bool {
        self.sets.contains(&set)
    }

    /// `Δ(C) = {B ∈ Δ : B ⊆ C}`.
    pub fn within(&self, set: NodeSet) -> Vec<NodeSet> {
        self.sets.iter().copied().filter(|b| b.is_subset(set)).collect()
    }

    /// `R^min(C) = {R ∈ R^min : R ⊆ C}`.
    pub fn minimal_within(&self, set: NodeSet) -> Vec<NodeSet> {
        self.minimal.iter().copied().filter(|r| r.is_subset(set)).collect()
    }
}
