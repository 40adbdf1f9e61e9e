//! Exact integer combinatorics: binomial coefficients, colexicographic subset
//! ranking, and mixed-radix indexing of selections across parts.
//!
//! Counts are `u128` values with checked arithmetic. Every quantity derived
//! from a [`Shape`] is kept at or below the shape's magnitude bound (default
//! 2^127), so a mis-sized shape fails with [`Error::Capacity`] instead of
//! wrapping.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::model::Shape;

/// An exact count of arcs, selections or scores.
pub type Count = u128;

/// Default magnitude guard for counts derived from a shape.
pub const DEFAULT_MAGNITUDE_BOUND: Count = 1 << 127;

/// One sorted index subset per part; `selection[i]` holds `alpha_i` indices
/// below `n_i`.
pub type Selection = Vec<Vec<usize>>;

/// `C(n, k)` in `u128`, or `None` when it does not fit.
pub(crate) fn binom_checked(n: usize, k: usize) -> Option<Count> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: Count = 1;
    for i in 1..=k as Count {
        // acc = C(n - k + i - 1, i - 1); i divides acc * x exactly.
        let x = (n - k) as Count + i;
        let g = acc.gcd(&i);
        acc = (acc / g).checked_mul(x / (i / g))?;
    }
    Some(acc)
}

/// Binomial coefficient with the default magnitude guard.
///
/// `C(n, k)` is 0 for `k < 0` or `k > n`.
pub fn binom(n: usize, k: isize) -> Result<Count> {
    binom_bounded(n, k, DEFAULT_MAGNITUDE_BOUND)
}

/// Binomial coefficient, failing with [`Error::Capacity`] above `bound`.
pub fn binom_bounded(n: usize, k: isize, bound: Count) -> Result<Count> {
    if k < 0 {
        return Ok(0);
    }
    match binom_checked(n, k as usize) {
        Some(c) if c <= bound => Ok(c),
        _ => Err(Error::Capacity {
            what: format!("C({n}, {k})"),
            bound,
        }),
    }
}

/// Colexicographic rank of a `cardinality`-subset of `{0, .., universe_size - 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetRank {
    pub rank: Count,
    pub universe_size: usize,
    pub cardinality: usize,
}

fn check_subset(subset: &[usize], universe_size: usize, cardinality: usize) -> Result<()> {
    if subset.len() != cardinality {
        return Err(Error::InvalidSubset(format!(
            "expected {cardinality} elements, found {}",
            subset.len()
        )));
    }
    if let Some(w) = subset.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSubset(format!(
            "elements must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    if let Some(&last) = subset.last() {
        if last >= universe_size {
            return Err(Error::InvalidSubset(format!(
                "element {last} outside a universe of size {universe_size}"
            )));
        }
    }
    Ok(())
}

/// Colex rank `sum_j C(c_j, j + 1)` over the sorted elements `c_j`.
///
/// The rank does not depend on `universe_size`; it is only used to validate
/// the elements and to record the range of the rank.
pub fn subset_rank(
    subset: &[usize],
    universe_size: usize,
    cardinality: usize,
) -> Result<SubsetRank> {
    check_subset(subset, universe_size, cardinality)?;
    let mut rank: Count = 0;
    for (j, &c) in subset.iter().enumerate() {
        // Every term is at most the final rank, which is below C(n, k).
        let term = binom_checked(c, j + 1).ok_or_else(|| Error::Capacity {
            what: format!("C({c}, {})", j + 1),
            bound: Count::MAX,
        })?;
        rank = rank.checked_add(term).ok_or_else(|| Error::Capacity {
            what: "subset rank".into(),
            bound: Count::MAX,
        })?;
    }
    Ok(SubsetRank {
        rank,
        universe_size,
        cardinality,
    })
}

/// Inverse of [`subset_rank`].
pub fn subset_unrank(rank: Count, universe_size: usize, cardinality: usize) -> Result<Vec<usize>> {
    let size = binom_checked(universe_size, cardinality);
    if let Some(size) = size {
        if rank >= size {
            return Err(Error::RankOutOfRange { rank, bound: size });
        }
    }
    Ok(unrank_unchecked(rank, universe_size, cardinality))
}

/// Greedy colex decoding; `rank` must be below `C(universe_size, cardinality)`.
pub(crate) fn unrank_unchecked(
    mut rank: Count,
    universe_size: usize,
    cardinality: usize,
) -> Vec<usize> {
    let mut out = vec![0; cardinality];
    let mut upper = universe_size;
    for j in (1..=cardinality).rev() {
        // Largest c < upper with C(c, j) <= rank; C(j - 1, j) = 0 always qualifies.
        let mut c = upper - 1;
        loop {
            match binom_checked(c, j) {
                Some(v) if v <= rank => {
                    rank -= v;
                    break;
                }
                _ => c -= 1,
            }
        }
        out[j - 1] = c;
        upper = c;
    }
    debug_assert_eq!(rank, 0);
    out
}

/// Mixed-radix rank of a selection: part 1 is the least significant digit,
/// each digit is the part's colex rank with radix `C(n_i, alpha_i)`.
pub fn selection_rank(selection: &[Vec<usize>], shape: &Shape) -> Result<Count> {
    if selection.len() != shape.k() {
        return Err(Error::PartCountMismatch {
            expected: shape.k(),
            found: selection.len(),
        });
    }
    let mut rank: Count = 0;
    let mut place: Count = 1;
    for (part, subset) in selection.iter().enumerate() {
        let (n, alpha) = (shape.size(part), shape.arity(part));
        if subset.len() != alpha {
            return Err(Error::ArityMismatch {
                part: part + 1,
                expected: alpha,
                found: subset.len(),
            });
        }
        let digit = subset_rank(subset, n, alpha)?.rank;
        rank += digit * place;
        // The last multiplication reaches the total arc count, which is within bounds.
        place *= shape.radix(part);
    }
    Ok(rank)
}

/// Inverse of [`selection_rank`].
pub fn selection_unrank(rank: Count, shape: &Shape) -> Result<Selection> {
    if rank >= shape.total_arcs() {
        return Err(Error::RankOutOfRange {
            rank,
            bound: shape.total_arcs(),
        });
    }
    Ok(selection_unrank_unchecked(rank, shape))
}

pub(crate) fn selection_unrank_unchecked(mut rank: Count, shape: &Shape) -> Selection {
    (0..shape.k())
        .map(|part| {
            let radix = shape.radix(part);
            let digit = rank % radix;
            rank /= radix;
            unrank_unchecked(digit, shape.size(part), shape.arity(part))
        })
        .collect()
}
