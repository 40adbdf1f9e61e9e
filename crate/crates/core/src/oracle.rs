//! Ground truth for small shapes: exhaustive loser assignments, the exact
//! set of achievable lists, and seeded random hypertournaments.
//!
//! Scores depend only on which vertex is last in each arc, so enumeration
//! ranges over loser choices (`(sum alpha_i)^(prod C(n_i, alpha_i))`
//! assignments) rather than full orderings.
//!
//! Random generation uses ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`. Selections are visited in rank order; loser-only
//! mode draws `gen_range(0..sum alpha_i)` as an index into the selection's
//! canonical vertex order, full-permutation mode shuffles that order with
//! `SliceRandom::shuffle`.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinatorics::Count;
use crate::criteria::{check_losing_lists, check_score_lists};
use crate::error::{Error, Result};
use crate::model::{Arc, Hypertournament, ScoreKind, ScoreLists, Shape, VertexId};
use crate::realize::ensure_dense;

/// Default cap on the number of loser assignments enumerated.
pub const DEFAULT_BUDGET: Count = 1_000_000;

/// `(sum alpha_i)^(prod C(n_i, alpha_i))`, or `None` beyond `u128`.
pub fn assignment_count(shape: &Shape) -> Option<Count> {
    let exp = u32::try_from(shape.total_arcs()).ok()?;
    (shape.arc_len() as Count).checked_pow(exp)
}

fn within_budget(shape: &Shape, budget: Count) -> Result<Count> {
    match assignment_count(shape) {
        Some(c) if c <= budget => Ok(c),
        required => Err(Error::BudgetExceeded { required, budget }),
    }
}

fn all_selections(shape: &Shape) -> Vec<Vec<VertexId>> {
    (0..shape.total_arcs())
        .map(|r| shape.selection_vertices(r))
        .collect()
}

/// Every hypertournament up to the order of the non-losers, in mixed-radix
/// order: selection 0 is the fastest-changing digit, digit `d` picks the
/// `d`-th vertex of the selection as loser.
pub struct Assignments {
    shape: Shape,
    selections: Vec<Vec<VertexId>>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for Assignments {
    type Item = Hypertournament;

    fn next(&mut self) -> Option<Hypertournament> {
        if self.done {
            return None;
        }
        let arcs = self
            .selections
            .iter()
            .zip(&self.digits)
            .map(|(sel, &d)| Some(Arc::with_loser(sel, sel[d])))
            .collect();
        let m = Hypertournament::from_table(self.shape.clone(), arcs);
        let radix = self.shape.arc_len();
        self.done = true;
        for d in &mut self.digits {
            *d += 1;
            if *d < radix {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(m)
    }
}

pub fn enumerate_assignments(shape: &Shape, budget: Count) -> Result<Assignments> {
    within_budget(shape, budget)?;
    Ok(Assignments {
        shape: shape.clone(),
        selections: all_selections(shape),
        digits: vec![0; shape.total_arcs() as usize],
        done: false,
    })
}

/// The exact set of sorted list tuples attained over all loser assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AchievableSet {
    pub shape: Shape,
    pub kind: ScoreKind,
    pub lists: BTreeSet<ScoreLists>,
    pub assignment_count: Count,
}

impl AchievableSet {
    pub fn contains(&self, lists: &ScoreLists) -> bool {
        self.lists.contains(lists)
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }
}

struct Walk<'a> {
    selections: &'a [Vec<VertexId>],
    losses: Vec<Vec<Count>>,
    wins: Vec<Vec<Count>>,
    losing: BTreeSet<ScoreLists>,
    score: BTreeSet<ScoreLists>,
}

impl Walk<'_> {
    fn descend(&mut self, depth: usize) {
        if depth == self.selections.len() {
            self.losing
                .insert(ScoreLists::sorted(ScoreKind::Losing, self.losses.clone()));
            self.score
                .insert(ScoreLists::sorted(ScoreKind::Score, self.wins.clone()));
            return;
        }
        let sel = &self.selections[depth];
        for &loser in sel {
            self.tally(sel, loser, true);
            self.descend(depth + 1);
            self.tally(sel, loser, false);
        }
    }

    fn tally(&mut self, sel: &[VertexId], loser: VertexId, add: bool) {
        for &v in sel {
            let slot = if v == loser {
                &mut self.losses[v.part][v.index]
            } else {
                &mut self.wins[v.part][v.index]
            };
            if add {
                *slot += 1;
            } else {
                *slot -= 1;
            }
        }
    }
}

/// Achievable losing lists and score lists, computed in one pass.
pub fn achievable_both(
    shape: &Shape,
    budget: Count,
    jobs: usize,
) -> Result<(AchievableSet, AchievableSet)> {
    let count = within_budget(shape, budget)?;
    let selections = all_selections(shape);
    let zero: Vec<Vec<Count>> = shape.sizes().iter().map(|&n| vec![0; n]).collect();

    // Fix the losers of the first `split` selections, one branch per choice.
    let radix = shape.arc_len();
    let mut split = 0;
    let mut branches = 1usize;
    while jobs > 1 && split < selections.len() && branches < 4 * jobs {
        split += 1;
        branches *= radix;
    }
    let run = |branch: usize| {
        let mut losses = zero.clone();
        let mut wins = zero.clone();
        let mut b = branch;
        for sel in &selections[..split] {
            let loser = sel[b % radix];
            b /= radix;
            for &v in sel {
                if v == loser {
                    losses[v.part][v.index] += 1;
                } else {
                    wins[v.part][v.index] += 1;
                }
            }
        }
        let mut walk = Walk {
            selections: &selections[split..],
            losses,
            wins,
            losing: BTreeSet::new(),
            score: BTreeSet::new(),
        };
        walk.descend(0);
        (walk.losing, walk.score)
    };
    let merge = |mut a: (BTreeSet<ScoreLists>, BTreeSet<ScoreLists>),
                 b: (BTreeSet<ScoreLists>, BTreeSet<ScoreLists>)| {
        a.0.extend(b.0);
        a.1.extend(b.1);
        a
    };
    let (losing, score) = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            (0..branches)
                .into_par_iter()
                .map(run)
                .reduce(|| (BTreeSet::new(), BTreeSet::new()), merge)
        })
    } else {
        run(0)
    };
    let set = |kind, lists| AchievableSet {
        shape: shape.clone(),
        kind,
        lists,
        assignment_count: count,
    };
    Ok((set(ScoreKind::Losing, losing), set(ScoreKind::Score, score)))
}

pub fn achievable_lists(shape: &Shape, kind: ScoreKind, budget: Count) -> Result<AchievableSet> {
    let (losing, score) = achievable_both(shape, budget, 1)?;
    Ok(match kind {
        ScoreKind::Losing => losing,
        ScoreKind::Score => score,
    })
}

pub fn achievable_losing_lists(shape: &Shape, budget: Count) -> Result<AchievableSet> {
    achievable_lists(shape, ScoreKind::Losing, budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenerationMode {
    /// Uniform loser per selection; the other entries in canonical order.
    LoserOnly,
    /// Uniform ordering of every selection.
    FullPermutation,
}

/// Deterministic for a fixed `(shape, seed, mode)`.
pub fn random_hypertournament(
    shape: &Shape,
    seed: u64,
    mode: GenerationMode,
) -> Result<Hypertournament> {
    ensure_dense(shape)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arcs = (0..shape.total_arcs())
        .map(|rank| {
            let mut vertices = shape.selection_vertices(rank);
            Some(match mode {
                GenerationMode::LoserOnly => {
                    let loser = vertices[rng.gen_range(0..vertices.len())];
                    Arc::with_loser(&vertices, loser)
                }
                GenerationMode::FullPermutation => {
                    vertices.shuffle(&mut rng);
                    Arc::new(vertices)
                }
            })
        })
        .collect();
    Ok(Hypertournament::from_table(shape.clone(), arcs))
}

/// Total every list tuple of `kind` must have.
pub fn required_total(shape: &Shape, kind: ScoreKind) -> Count {
    match kind {
        ScoreKind::Losing => shape.total_arcs(),
        ScoreKind::Score => (shape.arc_len() as Count - 1) * shape.total_arcs(),
    }
}

/// All tuples of non-decreasing lists with entries in `[0, arcs_through(i)]`
/// whose grand total is [`required_total`].
pub fn candidate_lists(shape: &Shape, kind: ScoreKind) -> Vec<ScoreLists> {
    let k = shape.k();
    // capacity[i] = most that parts i.. can hold
    let mut capacity = vec![0 as Count; k + 1];
    for i in (0..k).rev() {
        capacity[i] = capacity[i + 1] + shape.size(i) as Count * shape.arcs_through(i);
    }
    let mut out = Vec::new();
    let mut lists: Vec<Vec<Count>> = shape
        .sizes()
        .iter()
        .map(|&n| Vec::with_capacity(n))
        .collect();
    fill(
        shape,
        kind,
        &capacity,
        0,
        0,
        required_total(shape, kind),
        &mut lists,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn fill(
    shape: &Shape,
    kind: ScoreKind,
    capacity: &[Count],
    part: usize,
    low: Count,
    remaining: Count,
    lists: &mut Vec<Vec<Count>>,
    out: &mut Vec<ScoreLists>,
) {
    if part == shape.k() {
        if remaining == 0 {
            out.push(ScoreLists::new(kind, lists.clone()).expect("generated lists are sorted"));
        }
        return;
    }
    let n = shape.size(part);
    let pos = lists[part].len();
    if pos == n {
        fill(shape, kind, capacity, part + 1, 0, remaining, lists, out);
        return;
    }
    let high = shape.arcs_through(part);
    let left = (n - pos) as Count;
    for x in low..=high {
        // This part's remaining entries are all >= x; later parts hold at most capacity[part + 1].
        if left * x > remaining {
            break;
        }
        let rest = remaining - x;
        if rest > (left - 1) * high + capacity[part + 1] {
            continue;
        }
        lists[part].push(x);
        fill(shape, kind, capacity, part, x, rest, lists, out);
        lists[part].pop();
    }
}

/// Agreement between a predicate and the achievable set for one list kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideReport {
    pub kind: ScoreKind,
    pub achievable: usize,
    pub accepted: usize,
    /// Achievable but rejected by the predicate.
    pub rejected_achievable: Vec<ScoreLists>,
    /// Accepted by the predicate but never attained.
    pub accepted_unachievable: Vec<ScoreLists>,
}

impl SideReport {
    pub fn is_exact(&self) -> bool {
        self.rejected_achievable.is_empty() && self.accepted_unachievable.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossValidation {
    pub shape: Shape,
    pub assignment_count: Count,
    pub losing: SideReport,
    pub score: SideReport,
}

impl CrossValidation {
    pub fn is_exact(&self) -> bool {
        self.losing.is_exact() && self.score.is_exact()
    }
}

fn compare(shape: &Shape, set: &AchievableSet) -> Result<SideReport> {
    let mut accepted = BTreeSet::new();
    for lists in candidate_lists(shape, set.kind) {
        let verdict = match set.kind {
            ScoreKind::Losing => check_losing_lists(shape, &lists)?,
            ScoreKind::Score => check_score_lists(shape, &lists)?,
        };
        if verdict.valid {
            accepted.insert(lists);
        }
    }
    Ok(SideReport {
        kind: set.kind,
        achievable: set.lists.len(),
        accepted: accepted.len(),
        rejected_achievable: set.lists.difference(&accepted).cloned().collect(),
        accepted_unachievable: accepted.difference(&set.lists).cloned().collect(),
    })
}

/// Compares both predicates with the exhaustively computed achievable sets.
pub fn cross_validate(shape: &Shape, budget: Count) -> Result<CrossValidation> {
    let (losing, score) = achievable_both(shape, budget, 1)?;
    Ok(CrossValidation {
        shape: shape.clone(),
        assignment_count: losing.assignment_count,
        losing: compare(shape, &losing)?,
        score: compare(shape, &score)?,
    })
}
