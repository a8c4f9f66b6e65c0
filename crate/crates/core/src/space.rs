//! Finite product state spaces and subsets of input nodes.
//!
//! Input nodes are numbered `1..=n` and node `0` is the output. States of
//! `X_in = X_1 × … × X_n` are indexed densely in row-major order with node 1
//! varying slowest. The same convention is used for every marginal space
//! `X_A`: its coordinates are the nodes of `A` in ascending order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of input nodes a [`NodeSet`] can address.
pub const MAX_NODES: usize = 30;

/// A subset of the input nodes `[n]`, stored as a bitmask (bit `i - 1` is node `i`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct NodeSet(pub u32);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn full(n: usize) -> Self {
        NodeSet(((1u64 << n) - 1) as u32)
    }

    /// Builds a set from 1-based node ids. Panics on node 0 or nodes above [`MAX_NODES`].
    pub fn from_nodes<I: IntoIterator<Item = usize>>(nodes: I) -> Self {
        let mut bits = 0u32;
        for node in nodes {
            assert!((1..=MAX_NODES).contains(&node), "node id {node} out of range");
            bits |= 1 << (node - 1);
        }
        NodeSet(bits)
    }

    pub fn singleton(node: usize) -> Self {
        Self::from_nodes([node])
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, node: usize) -> bool {
        (1..=MAX_NODES).contains(&node) && self.0 & (1 << (node - 1)) != 0
    }

    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: NodeSet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn union(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    pub fn minus(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & !other.0)
    }

    /// Node ids in ascending order.
    pub fn nodes(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits & (1 << i) != 0).map(|i| i + 1)
    }

    /// All subsets of `self`, including the empty set and `self`, in increasing bitmask order.
    pub fn subsets(self) -> Subsets {
        Subsets { of: self.0, next: Some(0) }
    }

    /// All subsets of `[n]` in increasing bitmask order.
    pub fn all(n: usize) -> Subsets {
        NodeSet::full(n).subsets()
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, node) in self.nodes().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{node}")?;
        }
        write!(f, "}}")
    }
}

/// Iterator over the submasks of a fixed mask.
#[derive(Clone, Debug)]
pub struct Subsets {
    of: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = NodeSet;

    fn next(&mut self) -> Option<NodeSet> {
        let cur = self.next?;
        self.next = if cur == self.of { None } else { Some((cur.wrapping_sub(self.of)) & self.of) };
        Some(NodeSet(cur))
    }
}

/// Binomial coefficient as `f64`; exact for the small arguments used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// The space `X_0 × X_1 × … × X_n` with cardinalities `d_0, …, d_n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct StateSpace {
    cards: Vec<usize>,
}

impl TryFrom<Vec<usize>> for StateSpace {
    type Error = Error;

    fn try_from(cards: Vec<usize>) -> Result<Self> {
        StateSpace::new(cards)
    }
}

impl From<StateSpace> for Vec<usize> {
    fn from(s: StateSpace) -> Vec<usize> {
        s.cards
    }
}

impl StateSpace {
    /// `cards[0]` is the output alphabet size, `cards[i]` the size of input node `i`.
    pub fn new(cards: Vec<usize>) -> Result<Self> {
        if cards.len() < 2 || cards.contains(&0) {
            return Err(Error::InvalidCardinality(cards));
        }
        if cards.len() - 1 > MAX_NODES {
            return Err(Error::TooManyNodes { n: cards.len() - 1, max: MAX_NODES });
        }
        Ok(StateSpace { cards })
    }

    /// Binary inputs and binary output.
    pub fn binary(n: usize) -> Self {
        StateSpace::new(vec![2; n + 1]).expect("n >= 1")
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cards
    }

    pub fn n(&self) -> usize {
        self.cards.len() - 1
    }

    pub fn output_size(&self) -> usize {
        self.cards[0]
    }

    pub fn card(&self, node: usize) -> usize {
        self.cards[node]
    }

    pub fn input_cards(&self) -> &[usize] {
        &self.cards[1..]
    }

    pub fn full_set(&self) -> NodeSet {
        NodeSet::full(self.n())
    }

    pub fn input_size(&self) -> usize {
        self.sub_size(self.full_set())
    }

    pub fn is_binary(&self) -> bool {
        self.input_cards().iter().all(|&d| d == 2)
    }

    pub fn equal_alphabets(&self) -> Option<usize> {
        let d = self.cards[1];
        self.input_cards().iter().all(|&c| c == d).then_some(d)
    }

    /// `|X_A| = ∏_{i∈A} d_i`.
    pub fn sub_size(&self, set: NodeSet) -> usize {
        set.nodes().map(|i| self.cards[i]).product()
    }

    pub fn check_node(&self, node: usize) -> Result<()> {
        if node == 0 || node > self.n() {
            return Err(Error::InvalidNode { node, n: self.n() });
        }
        Ok(())
    }

    pub fn check_set(&self, set: NodeSet) -> Result<()> {
        if !set.is_subset(self.full_set()) {
            let node = set.minus(self.full_set()).nodes().next().unwrap_or(0);
            return Err(Error::InvalidNode { node, n: self.n() });
        }
        Ok(())
    }

    /// Validates a partial assignment `x_R` given in ascending node order.
    pub fn check_assignment(&self, set: NodeSet, values: &[usize]) -> Result<()> {
        self.check_set(set)?;
        if values.len() != set.len() {
            return Err(Error::Shape(format!(
                "assignment on {set} needs {} values, got {}",
                set.len(),
                values.len()
            )));
        }
        for (node, &value) in set.nodes().zip(values) {
            if value >= self.cards[node] {
                return Err(Error::InvalidValue { node, value, card: self.cards[node] });
            }
        }
        Ok(())
    }

    pub fn check_state(&self, index: usize) -> Result<()> {
        let size = self.input_size();
        if index >= size {
            return Err(Error::InvalidState { index, size });
        }
        Ok(())
    }

    /// Dense index of a full input state.
    pub fn index_of(&self, coords: &[usize]) -> Result<usize> {
        self.check_assignment(self.full_set(), coords)?;
        Ok(self.sub_index(self.full_set(), coords))
    }

    /// Coordinates `(x_1, …, x_n)` of a dense index.
    pub fn coords_of(&self, index: usize) -> Vec<usize> {
        self.sub_values(self.full_set(), index)
    }

    pub fn state(&self, index: usize) -> InputState {
        InputState { index, coords: self.coords_of(index) }
    }

    /// Index into `X_A` of values listed in ascending node order.
    pub fn sub_index(&self, set: NodeSet, values: &[usize]) -> usize {
        set.nodes().zip(values).fold(0, |acc, (node, &v)| acc * self.cards[node] + v)
    }

    /// Inverse of [`Self::sub_index`].
    pub fn sub_values(&self, set: NodeSet, mut index: usize) -> Vec<usize> {
        let nodes: Vec<usize> = set.nodes().collect();
        let mut values = vec![0; nodes.len()];
        for (slot, &node) in nodes.iter().enumerate().rev() {
            values[slot] = index % self.cards[node];
            index /= self.cards[node];
        }
        values
    }

    /// `x|_A` as values in ascending node order.
    pub fn restrict_coords(&self, coords: &[usize], set: NodeSet) -> Vec<usize> {
        set.nodes().map(|i| coords[i - 1]).collect()
    }

    /// Index into `X_A` of the restriction of the full state `index`.
    pub fn restrict_index(&self, index: usize, set: NodeSet) -> usize {
        let coords = self.coords_of(index);
        set.nodes().fold(0, |acc, node| acc * self.cards[node] + coords[node - 1])
    }

    /// Index into `X_B` of the restriction of a state of `X_A` (requires `B ⊆ A`).
    pub fn restrict_sub_index(&self, from: NodeSet, index: usize, to: NodeSet) -> usize {
        debug_assert!(to.is_subset(from));
        let values = self.sub_values(from, index);
        from.nodes()
            .zip(values)
            .filter(|(node, _)| to.contains(*node))
            .fold(0, |acc, (node, v)| acc * self.cards[node] + v)
    }

    /// Full state agreeing with `values` on `set` and equal to 0 elsewhere.
    pub fn embed(&self, set: NodeSet, values: &[usize]) -> usize {
        let mut coords = vec![0; self.n()];
        for (node, &v) in set.nodes().zip(values) {
            coords[node - 1] = v;
        }
        self.sub_index(self.full_set(), &coords)
    }

    /// The cylinder set `C(R, x_R)` as sorted state indices.
    pub fn cylinder(&self, set: NodeSet, values: &[usize]) -> Vec<usize> {
        (0..self.input_size())
            .filter(|&x| {
                let c = self.coords_of(x);
                set.nodes().zip(values).all(|(node, &v)| c[node - 1] == v)
            })
            .collect()
    }

    pub fn hamming(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.coords_of(a), self.coords_of(b));
        ca.iter().zip(&cb).filter(|(x, y)| x != y).count()
    }

    /// Nodes on which two full states agree.
    pub fn agreement(&self, a: usize, b: usize) -> NodeSet {
        let (ca, cb) = (self.coords_of(a), self.coords_of(b));
        NodeSet::from_nodes((1..=self.n()).filter(|&i| ca[i - 1] == cb[i - 1]))
    }
}

/// A full input state `x = (x_1, …, x_n)` together with its dense index.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct InputState {
    pub index: usize,
    pub coords: Vec<usize>,
}

impl InputState {
    pub fn restrict(&self, set: NodeSet) -> Vec<usize> {
        set.nodes().map(|i| self.coords[i - 1]).collect()
    }
}
