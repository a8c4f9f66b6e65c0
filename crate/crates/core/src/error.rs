use thiserror::Error;

use crate::space::NodeSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid cardinality list {0:?}: need d0 and at least one input, all >= 1")]
    InvalidCardinality(Vec<usize>),

    #[error("k = {k} out of range 0..={n}")]
    InvalidK { k: usize, n: usize },

    #[error("node {node} is not an input node of a space with {n} inputs")]
    InvalidNode { node: usize, n: usize },

    #[error("value {value} is out of range for node {node} (cardinality {card})")]
    InvalidValue { node: usize, value: usize, card: usize },

    #[error("state index {index} out of range (|X_in| = {size})")]
    InvalidState { index: usize, size: usize },

    #[error("robustness specification is not saturated")]
    NotSaturated,

    #[error("robustness specification is not coherent")]
    NotCoherent,

    #[error("state space too large: {size} states (limit {limit})")]
    StateSpaceTooLarge { size: usize, limit: usize },

    #[error("blocks are not the connected components of their union")]
    InconsistentStructure,

    #[error("operation requires all input cardinalities to be 2")]
    NotBinary,

    #[error("operation requires all input cardinalities to be equal")]
    UnequalAlphabets,

    #[error("row {row} of the map on {domain} is not a probability distribution")]
    NotStochastic { domain: NodeSet, row: usize },

    #[error("map is not constant on a block: states {0} and {1} differ")]
    NotConstantOnBlock(usize, usize),

    #[error("non-positive entry in the map on {domain} at row {row}, output {output}")]
    NonPositiveEntry { domain: NodeSet, row: usize, output: usize },

    #[error("base map for {0} is missing")]
    MissingBase(NodeSet),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("distribution has empty support")]
    EmptyDistribution,

    #[error("component parameters do not match the structure: {0}")]
    IndexMismatch(String),

    #[error("invalid witness for the epsilon construction: {0}")]
    InvalidWitness(String),

    #[error("n = {n} exceeds the supported maximum {max}")]
    TooManyNodes { n: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}
