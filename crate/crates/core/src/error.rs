use thiserror::Error;

use crate::combinatorics::Count;
use crate::criteria::CheckResult;
use crate::model::{ValidationReport, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("capacity exceeded: {what} is larger than the magnitude bound {bound}")]
    Capacity { what: String, bound: Count },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("rank {rank} out of range (must be below {bound})")]
    RankOutOfRange { rank: Count, bound: Count },

    #[error("part {part}: expected {expected} entries, found {found}")]
    ArityMismatch {
        part: usize,
        expected: usize,
        found: usize,
    },

    #[error("expected {expected} parts, found {found}")]
    PartCountMismatch { expected: usize, found: usize },

    #[error("vertex {0} is outside the shape")]
    VertexOutOfRange(VertexId),

    #[error("hypertournament is structurally invalid ({} violations)", .0.violations.len())]
    Structural(ValidationReport),

    #[error("expected one loser for each of the {expected} selections, found {found}")]
    LoserCount { expected: Count, found: usize },

    #[error("vertices must differ, got {0} twice")]
    SameVertex(VertexId),

    #[error("no arc contains {a} and {b} with {b} last")]
    NoEligibleArc { a: VertexId, b: VertexId },

    #[error("list {part} is not non-decreasing at position {position}")]
    NonMonotone { part: usize, position: usize },

    #[error("list {part} has {found} entries, shape requires {expected}")]
    LengthMismatch {
        part: usize,
        expected: usize,
        found: usize,
    },

    #[error(
        "list {part} position {position}: entry {value} exceeds the per-vertex arc count {bound}"
    )]
    EntryOutOfBounds {
        part: usize,
        position: usize,
        value: Count,
        bound: Count,
    },

    #[error("expected {expected} lists, got {found} lists")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("lists are not realizable")]
    InvalidLists(Box<CheckResult>),

    #[error("saturation stalled with last entry {current} below {bound}: no transfer keeps the lists valid")]
    NoValidStep { current: Count, bound: Count },

    #[error("realization gap while undoing transfer {step}: {source}")]
    RealizationGap {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("no loser assignment: flow routes {flow} of {required} selections, targets sum to {}", .demand.map_or_else(|| "more than 2^128".to_string(), |c| c.to_string()))]
    Infeasible {
        flow: Count,
        required: Count,
        demand: Option<Count>,
    },

    #[error("enumeration needs {} assignments, budget is {budget}", .required.map_or_else(|| "more than 2^128".to_string(), |c| c.to_string()))]
    BudgetExceeded {
        required: Option<Count>,
        budget: Count,
    },
}
