//! Score lists and losing score lists of multipartite hypertournaments.
//!
//! A `[alpha_1, .., alpha_k]`-k-partite hypertournament on vertex sets
//! `U_1, .., U_k` with `|U_i| = n_i` has exactly one arc for every choice of
//! `alpha_i` vertices from each `U_i`: an ordering of the chosen vertices
//! whose last entry is the arc's loser. This crate
//!
//! * decides whether candidate lists are losing score lists
//!   ([`criteria::check_losing_lists`]) or score lists
//!   ([`criteria::check_score_lists`]) of some hypertournament,
//! * builds a witness for valid losing lists, either inductively
//!   ([`realize::realize_inductive`]) or through a max-flow oracle
//!   ([`realize::realize_flow`]),
//! * enumerates small shapes exhaustively ([`oracle`]) so both can be
//!   cross-checked against ground truth.

pub mod combinatorics;
pub mod criteria;
pub mod error;
pub mod model;
pub mod oracle;
pub mod realize;

pub use combinatorics::{Count, DEFAULT_MAGNITUDE_BOUND};
pub use criteria::{CheckOptions, CheckResult, PrefixViolation};
pub use error::{Error, Result};
pub use model::{Arc, Hypertournament, ScoreKind, ScoreLists, Shape, VertexId};
