//! Decision procedures for losing score lists and score lists.
//!
//! Both predicates quantify over every prefix tuple `(p_1, .., p_k)` with
//! `0 <= p_i <= n_i`. The left side is the sum of the first `p_i` entries of
//! each list. For losing lists the right side is `prod C(p_i, alpha_i)`; for
//! score lists it is
//!
//! ```text
//! sum_i p_i * arcs_through(i) + prod C(n_i - p_i, alpha_i) - prod C(n_i, alpha_i)
//! ```
//!
//! where `p_i * arcs_through(i)` is the integer form of
//! `(alpha_i p_i / n_i) * prod C(n_t, alpha_t)`. The inequality must hold at
//! every tuple and be an equality at `p = n`.
//!
//! Tuples are scanned in lexicographic order, so the reported violation is
//! the lexicographically smallest one. An optional pruning pass skips the
//! rest of the last axis once the slack is non-negative and provably
//! non-decreasing along it; results are identical to the full scan.

use rayon::prelude::*;

use crate::combinatorics::{binom, Count};
use crate::error::{Error, Result};
use crate::model::{ScoreKind, ScoreLists, Shape};

/// A prefix tuple at which the predicate fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixViolation {
    /// `(p_1, .., p_k)`, each a prefix length.
    pub prefix: Vec<usize>,
    pub lhs: Count,
    pub rhs: Count,
}

impl PrefixViolation {
    /// True when this is the full tuple and only the equality failed.
    pub fn is_equality_failure(&self) -> bool {
        self.lhs > self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub valid: bool,
    pub violation: Option<PrefixViolation>,
    /// Whether left and right side agree at `p = n`.
    pub equality_at_full: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub pruning: bool,
    /// Worker threads; the tuple space is split on the first coordinate.
    pub jobs: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            pruning: false,
            jobs: 1,
        }
    }
}

trait PrefixBound: Sync {
    fn rhs(&self, p: &[usize]) -> Count;

    /// True if no step along the last axis beyond `p` can lower the slack.
    fn tail_non_decreasing(&self, p: &[usize]) -> bool;
}

struct LosingBound<'a> {
    lists: &'a [Vec<Count>],
    /// `choose[i][p] = C(p, alpha_i)`
    choose: Vec<Vec<Count>>,
    /// `C(n_k - 1, alpha_k - 1)` for the last part.
    last_reduced: Count,
}

impl PrefixBound for LosingBound<'_> {
    fn rhs(&self, p: &[usize]) -> Count {
        p.iter()
            .enumerate()
            .map(|(i, &pi)| self.choose[i][pi])
            .product()
    }

    fn tail_non_decreasing(&self, p: &[usize]) -> bool {
        // Step q -> q + 1 changes the slack by r_{q+1} - Q * C(q, alpha - 1);
        // r is non-decreasing and C(q, alpha - 1) <= C(n - 1, alpha - 1).
        let last = p.len() - 1;
        let others: Count = (0..last).map(|i| self.choose[i][p[i]]).product();
        self.lists[last][p[last]] >= others * self.last_reduced
    }
}

struct ScoreBound<'a> {
    shape: &'a Shape,
    lists: &'a [Vec<Count>],
    /// `rest[i][p] = C(n_i - p, alpha_i)`
    rest: Vec<Vec<Count>>,
}

impl PrefixBound for ScoreBound<'_> {
    fn rhs(&self, p: &[usize]) -> Count {
        let linear: Count = p
            .iter()
            .enumerate()
            .map(|(i, &pi)| pi as Count * self.shape.arcs_through(i))
            .sum();
        let untouched: Count = p
            .iter()
            .enumerate()
            .map(|(i, &pi)| self.rest[i][pi])
            .product();
        // Never negative: the linear term counts every arc meeting a prefix at least once.
        linear + untouched - self.shape.total_arcs()
    }

    fn tail_non_decreasing(&self, p: &[usize]) -> bool {
        // Step q -> q + 1 changes the slack by
        // s_{q+1} - arcs_through + Q' * C(n - q - 1, alpha - 1) with Q' = prod_{t != last} C(n_t - p_t, alpha_t).
        // The binomial is smallest at q = n - 1, where it equals [alpha == 1].
        let last = p.len() - 1;
        let floor = if self.shape.arity(last) == 1 {
            (0..last).map(|i| self.rest[i][p[i]]).product()
        } else {
            0
        };
        self.lists[last][p[last]] + floor >= self.shape.arcs_through(last)
    }
}

fn prefix_sums(lists: &[Vec<Count>]) -> Result<Vec<Vec<Count>>> {
    let overflow = || Error::Capacity {
        what: "sum of list entries".into(),
        bound: Count::MAX,
    };
    let sums = lists
        .iter()
        .map(|list| {
            let mut acc: Count = 0;
            let mut out = Vec::with_capacity(list.len() + 1);
            out.push(0);
            for &x in list {
                acc = acc.checked_add(x).ok_or_else(overflow)?;
                out.push(acc);
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    // The largest left side is the grand total; make sure it fits.
    sums.iter()
        .try_fold(0 as Count, |acc, s| {
            acc.checked_add(*s.last().expect("non-empty"))
        })
        .ok_or_else(overflow)?;
    Ok(sums)
}

fn lhs(sums: &[Vec<Count>], p: &[usize]) -> Count {
    p.iter().enumerate().map(|(i, &pi)| sums[i][pi]).sum()
}

/// Advances `p` to the next tuple in lexicographic order over coordinates
/// `from..`, returning false when they wrap around.
fn advance(p: &mut [usize], sizes: &[usize], from: usize) -> bool {
    for i in (from..p.len()).rev() {
        if p[i] < sizes[i] {
            p[i] += 1;
            return true;
        }
        p[i] = 0;
    }
    false
}

/// First strict violation among the tuples whose first coordinate is `first`,
/// the full tuple excluded.
fn scan_block(
    bound: &dyn PrefixBound,
    sums: &[Vec<Count>],
    sizes: &[usize],
    first: usize,
    pruning: bool,
) -> Option<PrefixViolation> {
    let k = sizes.len();
    let mut p = vec![0; k];
    p[0] = first;
    let last = k - 1;
    loop {
        if p != sizes {
            let l = lhs(sums, &p);
            let r = bound.rhs(&p);
            if l < r {
                return Some(PrefixViolation {
                    prefix: p,
                    lhs: l,
                    rhs: r,
                });
            }
            if pruning && k > 1 && p[last] < sizes[last] && bound.tail_non_decreasing(&p) {
                p[last] = sizes[last];
            }
        }
        if k == 1 || !advance(&mut p, sizes, 1) {
            return None;
        }
    }
}

fn evaluate(
    shape: &Shape,
    lists: &[Vec<Count>],
    bound: &dyn PrefixBound,
    options: CheckOptions,
) -> Result<CheckResult> {
    let sums = prefix_sums(lists)?;
    let sizes = shape.sizes();
    let blocks = 0..=sizes[0];
    let first = if options.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            blocks
                .into_par_iter()
                .map(|p0| scan_block(bound, &sums, sizes, p0, options.pruning))
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .next()
        })
    } else {
        blocks
            .into_iter()
            .find_map(|p0| scan_block(bound, &sums, sizes, p0, options.pruning))
    };
    let full_lhs = lhs(&sums, sizes);
    let full_rhs = bound.rhs(sizes);
    let equality_at_full = full_lhs == full_rhs;
    let violation = first.or_else(|| {
        (!equality_at_full).then(|| PrefixViolation {
            prefix: sizes.to_vec(),
            lhs: full_lhs,
            rhs: full_rhs,
        })
    });
    Ok(CheckResult {
        valid: violation.is_none(),
        violation,
        equality_at_full,
    })
}

fn check_input(shape: &Shape, lists: &ScoreLists, kind: ScoreKind) -> Result<()> {
    lists.require_kind(kind)?;
    lists.check_lengths(shape)
}

/// Decides whether `r` is the losing score lists of some hypertournament of `shape`.
pub fn check_losing_lists(shape: &Shape, r: &ScoreLists) -> Result<CheckResult> {
    check_losing_lists_with(shape, r, CheckOptions::default())
}

pub fn check_losing_lists_with(
    shape: &Shape,
    r: &ScoreLists,
    options: CheckOptions,
) -> Result<CheckResult> {
    check_input(shape, r, ScoreKind::Losing)?;
    let choose = (0..shape.k())
        .map(|i| {
            (0..=shape.size(i))
                .map(|p| binom(p, shape.arity(i) as isize))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let last = shape.k() - 1;
    let bound = LosingBound {
        lists: r.lists(),
        choose,
        last_reduced: binom(shape.size(last) - 1, shape.arity(last) as isize - 1)?,
    };
    evaluate(shape, r.lists(), &bound, options)
}

/// Decides whether `s` is the score lists of some hypertournament of `shape`.
pub fn check_score_lists(shape: &Shape, s: &ScoreLists) -> Result<CheckResult> {
    check_score_lists_with(shape, s, CheckOptions::default())
}

pub fn check_score_lists_with(
    shape: &Shape,
    s: &ScoreLists,
    options: CheckOptions,
) -> Result<CheckResult> {
    check_input(shape, s, ScoreKind::Score)?;
    let rest = (0..shape.k())
        .map(|i| {
            let n = shape.size(i);
            (0..=n)
                .map(|p| binom(n - p, shape.arity(i) as isize))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let bound = ScoreBound {
        shape,
        lists: s.lists(),
        rest,
    };
    evaluate(shape, s.lists(), &bound, options)
}

/// Dispatches on the kind of `lists`.
pub fn check_lists(
    shape: &Shape,
    lists: &ScoreLists,
    options: CheckOptions,
) -> Result<CheckResult> {
    match lists.kind() {
        ScoreKind::Losing => check_losing_lists_with(shape, lists, options),
        ScoreKind::Score => check_score_lists_with(shape, lists, options),
    }
}

fn complement(shape: &Shape, lists: &ScoreLists, from: ScoreKind) -> Result<ScoreLists> {
    lists.require_kind(from)?;
    lists.check_bounds(shape)?;
    let out = lists
        .lists()
        .iter()
        .enumerate()
        .map(|(part, list)| {
            let through = shape.arcs_through(part);
            list.iter().rev().map(|&x| through - x).collect()
        })
        .collect();
    ScoreLists::new(from.other(), out)
}

/// `s_{ij} = arcs_through(i) - r_{i(n_i + 1 - j)}`: reverse, then complement.
pub fn losing_to_scores(shape: &Shape, r: &ScoreLists) -> Result<ScoreLists> {
    complement(shape, r, ScoreKind::Losing)
}

/// Inverse of [`losing_to_scores`].
pub fn scores_to_losing(shape: &Shape, s: &ScoreLists) -> Result<ScoreLists> {
    complement(shape, s, ScoreKind::Score)
}

/// Landau-type test for a single vertex set with arcs of size `arity`:
/// `sum_{i <= j} r_i >= C(j, arity)` for every `j`, with equality at `j = n`.
pub fn check_single_part(n: usize, arity: usize, r: &[Count]) -> Result<CheckResult> {
    if !(arity > 1 && n >= arity) {
        return Err(Error::InvalidShape(format!(
            "single-part check needs n >= arity > 1, got n={n} arity={arity}"
        )));
    }
    if r.len() != n {
        return Err(Error::LengthMismatch {
            part: 1,
            expected: n,
            found: r.len(),
        });
    }
    if let Some(pos) = r.windows(2).position(|w| w[0] > w[1]) {
        return Err(Error::NonMonotone {
            part: 1,
            position: pos + 2,
        });
    }
    let mut sum: Count = 0;
    let mut violation = None;
    for j in 1..=n {
        sum = sum.checked_add(r[j - 1]).ok_or_else(|| Error::Capacity {
            what: "sum of list entries".into(),
            bound: Count::MAX,
        })?;
        let need = binom(j, arity as isize)?;
        if violation.is_none() && (sum < need || (j == n && sum != need)) {
            violation = Some(PrefixViolation {
                prefix: vec![j],
                lhs: sum,
                rhs: need,
            });
        }
    }
    let equality_at_full = sum == binom(n, arity as isize)?;
    Ok(CheckResult {
        valid: violation.is_none(),
        violation,
        equality_at_full,
    })
}
