//! Clique-width track: expressions, the biclique reduction and its solution
//! transfer, the two rewrite passes, and the end-to-end decision pipeline.

mod expr;
mod pipeline;
mod reduce;
mod rewrite;

use thiserror::Error;

use crate::oracle::OracleError;
use crate::tw::TdError;

pub use expr::{
    biclique_expr, cycle_expr, eval_cwe, gradual_biclique_expr, path_expr, random_cwe, CwExpr, CwOp, LabeledGraph,
    NodeView,
};
pub use pipeline::{decide_ehc_cw, decide_ehp_cw, ehp_gadget_expr, PipelineReport};
pub use reduce::{
    reduce_biclique_graph, repair_contain, transfer_des_across_reduction, Direction, ReductionSite, Stage,
};
pub use rewrite::{
    big_joins, drop_redundant_joins, eliminate_big_joins, eliminate_big_joins_traced, eliminate_gradual_bicliques,
    eliminate_gradual_bicliques_traced, gradual_sites, RewriteRecord,
};

/// Minimum side size for [`repair_contain`].
pub const CONTAIN_MIN: usize = 3;
/// Minimum side size for [`reduce_biclique_graph`].
pub const REDUCE_MIN: usize = 5;
/// After big-join elimination every join has a side of at most this size.
pub const JOIN_SMALL_SIDE: usize = 6;
/// Side size at which a label class and its common neighbourhood are spliced.
pub const SPLICE_MIN: usize = 7;

/// `21k`: size of the largest biclique that survives the rewrites for a budget of `k` labels.
pub fn biclique_target(k: usize) -> usize {
    21 * k
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CwError {
    #[error("label {label} outside the budget 1..={k}")]
    LabelOutOfBudget { label: usize, k: usize },
    #[error("join of label {0} with itself")]
    JoinSameLabel(usize),
    #[error("malformed expression: {0}")]
    Malformed(String),
    #[error("generation failed: {0}")]
    GenerationFailed(String),
    #[error("biclique sides have sizes {a} and {b}; need at least {min}")]
    SetsTooSmall { a: usize, b: usize, min: usize },
    #[error("({0}, {1}) is not an edge, so the sets do not span a biclique")]
    NotABiclique(usize, usize),
    #[error("vertex {0} is in both sides or out of range")]
    BadSides(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid solution: {0}")]
    InvalidSolution(String),
    #[error("connectivity augmentation made no progress")]
    AugmentationStuck,
    #[error(transparent)]
    Td(#[from] TdError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
