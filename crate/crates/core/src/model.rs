//! Multipartite hypertournaments: shapes, vertices, arcs and the dense arc
//! table, together with score and losing-score computation.

use std::fmt;

use crate::combinatorics::{
    binom_bounded, selection_rank, selection_unrank_unchecked, Count, Selection,
    DEFAULT_MAGNITUDE_BOUND,
};
use crate::error::{Error, Result};

/// Instance signature: part sizes `n_i` and arities `alpha_i`, `1 <= alpha_i <= n_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Shape {
    sizes: Vec<usize>,
    arities: Vec<usize>,
    radices: Vec<Count>,
    arcs_through: Vec<Count>,
    total: Count,
    bound: Count,
}

impl Shape {
    pub fn new(sizes: Vec<usize>, arities: Vec<usize>) -> Result<Self> {
        Self::with_bound(sizes, arities, DEFAULT_MAGNITUDE_BOUND)
    }

    /// Builds a shape whose arc count must stay at or below `bound`.
    pub fn with_bound(sizes: Vec<usize>, arities: Vec<usize>, bound: Count) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidShape("at least one part is required".into()));
        }
        if sizes.len() != arities.len() {
            return Err(Error::InvalidShape(format!(
                "{} part sizes but {} arities",
                sizes.len(),
                arities.len()
            )));
        }
        for (i, (&n, &a)) in sizes.iter().zip(&arities).enumerate() {
            if a == 0 || a > n {
                return Err(Error::InvalidShape(format!(
                    "part {}: arity {a} must satisfy 1 <= arity <= size {n}",
                    i + 1
                )));
            }
        }
        let capacity = |what: String| Error::Capacity { what, bound };
        let radices = sizes
            .iter()
            .zip(&arities)
            .map(|(&n, &a)| binom_bounded(n, a as isize, bound))
            .collect::<Result<Vec<_>>>()?;
        let total = radices
            .iter()
            .try_fold(1 as Count, |acc, &r| {
                acc.checked_mul(r).filter(|&t| t <= bound)
            })
            .ok_or_else(|| capacity("total arc count".into()))?;
        let arcs_through = (0..sizes.len())
            .map(|i| {
                // C(n_i - 1, alpha_i - 1) * prod_{t != i} C(n_t, alpha_t); at most `total`.
                let own = binom_bounded(sizes[i] - 1, arities[i] as isize - 1, bound)?;
                Ok(total / radices[i] * own)
            })
            .collect::<Result<Vec<_>>>()?;
        // Sum of all per-vertex arc counts, the largest intermediate any check forms.
        let arc_len: usize = arities.iter().sum();
        (arc_len as Count)
            .checked_mul(total)
            .ok_or_else(|| capacity("arc length times arc count".into()))?;
        Ok(Shape {
            sizes,
            arities,
            radices,
            arcs_through,
            total,
            bound,
        })
    }

    /// Number of parts `k`.
    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn size(&self, part: usize) -> usize {
        self.sizes[part]
    }

    pub fn arity(&self, part: usize) -> usize {
        self.arities[part]
    }

    /// `C(n_i, alpha_i)`, the number of choices inside one part.
    pub fn radix(&self, part: usize) -> Count {
        self.radices[part]
    }

    /// Number of vertices in every arc, `sum alpha_i`.
    pub fn arc_len(&self) -> usize {
        self.arities.iter().sum()
    }

    /// Number of arcs, `prod C(n_i, alpha_i)`.
    pub fn total_arcs(&self) -> Count {
        self.total
    }

    /// Number of arcs containing any fixed vertex of `part` (0-based).
    ///
    /// Equal to `C(n_i - 1, alpha_i - 1) * prod_{t != i} C(n_t, alpha_t)`.
    /// Panics if `part` is out of range.
    pub fn arcs_through(&self, part: usize) -> Count {
        self.arcs_through[part]
    }

    pub fn magnitude_bound(&self) -> Count {
        self.bound
    }

    pub fn vertex_count(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(part, &n)| (0..n).map(move |index| VertexId { part, index }))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.part < self.k() && v.index < self.sizes[v.part]
    }

    /// The same shape with part `part` resized to `size`.
    pub fn resized(&self, part: usize, size: usize) -> Result<Shape> {
        let mut sizes = self.sizes.clone();
        sizes[part] = size;
        Shape::with_bound(sizes, self.arities.clone(), self.bound)
    }

    /// Selection indexed by `rank`; `rank` must be below [`Shape::total_arcs`].
    pub fn selection(&self, rank: Count) -> Selection {
        assert!(rank < self.total, "selection rank {rank} out of range");
        selection_unrank_unchecked(rank, self)
    }

    /// All vertices of the selection at `rank`, in canonical (part, index) order.
    pub fn selection_vertices(&self, rank: Count) -> Vec<VertexId> {
        flatten(&self.selection(rank))
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={:?} alpha={:?}", self.sizes, self.arities)
    }
}

fn flatten(selection: &Selection) -> Vec<VertexId> {
    selection
        .iter()
        .enumerate()
        .flat_map(|(part, s)| s.iter().map(move |&index| VertexId { part, index }))
        .collect()
}

/// A vertex `u_{ij}`; both coordinates are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    pub part: usize,
    pub index: usize,
}

impl VertexId {
    pub fn new(part: usize, index: usize) -> Self {
        VertexId { part, index }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u({},{})", self.part + 1, self.index + 1)
    }
}

/// An ordered tuple of vertices. The last entry is the loser.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arc {
    order: Vec<VertexId>,
}

impl Arc {
    pub fn new(order: Vec<VertexId>) -> Self {
        Arc { order }
    }

    /// Arc over `vertices` with `loser` last and the rest in (part, index) order.
    pub fn with_loser(vertices: &[VertexId], loser: VertexId) -> Self {
        let mut order: Vec<VertexId> = vertices.iter().copied().filter(|&v| v != loser).collect();
        order.sort_unstable();
        order.push(loser);
        Arc { order }
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn loser(&self) -> Option<VertexId> {
        self.order.last().copied()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.order.contains(&v)
    }

    fn swap(&mut self, a: VertexId, b: VertexId) {
        let i = self
            .order
            .iter()
            .position(|&v| v == a)
            .expect("vertex in arc");
        let j = self
            .order
            .iter()
            .position(|&v| v == b)
            .expect("vertex in arc");
        self.order.swap(i, j);
    }
}

/// One structural problem found by [`Hypertournament::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TableSize {
        expected: Count,
        found: usize,
    },
    MissingArc {
        rank: Count,
    },
    DuplicateArc {
        rank: Count,
    },
    WrongLength {
        rank: Count,
        expected: usize,
        found: usize,
    },
    VertexOutOfRange {
        rank: Count,
        vertex: VertexId,
    },
    RepeatedVertex {
        rank: Count,
        vertex: VertexId,
    },
    WrongArity {
        rank: Count,
        part: usize,
        expected: usize,
        found: usize,
    },
    VertexSetMismatch {
        rank: Count,
    },
    /// A listed arc whose vertex set names no selection; `position` is 0-based.
    Unplaceable {
        position: usize,
        reason: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TableSize { expected, found } => {
                write!(f, "arc table has {found} slots, expected {expected}")
            }
            Violation::MissingArc { rank } => write!(f, "selection {rank}: no arc"),
            Violation::DuplicateArc { rank } => write!(f, "selection {rank}: more than one arc"),
            Violation::WrongLength {
                rank,
                expected,
                found,
            } => {
                write!(
                    f,
                    "selection {rank}: arc has {found} entries, expected {expected}"
                )
            }
            Violation::VertexOutOfRange { rank, vertex } => {
                write!(f, "selection {rank}: vertex {vertex} is outside the shape")
            }
            Violation::RepeatedVertex { rank, vertex } => {
                write!(
                    f,
                    "selection {rank}: vertex {vertex} appears more than once"
                )
            }
            Violation::WrongArity {
                rank,
                part,
                expected,
                found,
            } => write!(
                f,
                "selection {rank}: {found} vertices from part {}, expected {expected}",
                part + 1
            ),
            Violation::VertexSetMismatch { rank } => {
                write!(
                    f,
                    "selection {rank}: arc vertices differ from the selection"
                )
            }
            Violation::Unplaceable { position, reason } => {
                write!(f, "listed arc {}: {reason}", position + 1)
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Which quantity a list of per-vertex counts holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScoreKind {
    Losing,
    Score,
}

impl ScoreKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScoreKind::Losing => "losing",
            ScoreKind::Score => "score",
        }
    }

    pub fn other(self) -> ScoreKind {
        match self {
            ScoreKind::Losing => ScoreKind::Score,
            ScoreKind::Score => ScoreKind::Losing,
        }
    }
}

impl fmt::Display for ScoreKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `k` non-decreasing lists, one per part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScoreLists {
    kind: ScoreKind,
    lists: Vec<Vec<Count>>,
}

impl ScoreLists {
    /// Rejects any list that is not non-decreasing.
    pub fn new(kind: ScoreKind, lists: Vec<Vec<Count>>) -> Result<Self> {
        for (part, list) in lists.iter().enumerate() {
            if let Some(pos) = list.windows(2).position(|w| w[0] > w[1]) {
                return Err(Error::NonMonotone {
                    part: part + 1,
                    position: pos + 2,
                });
            }
        }
        Ok(ScoreLists { kind, lists })
    }

    /// Sorts each list first.
    pub fn sorted(kind: ScoreKind, mut lists: Vec<Vec<Count>>) -> Self {
        for list in &mut lists {
            list.sort_unstable();
        }
        ScoreLists { kind, lists }
    }

    pub fn kind(&self) -> ScoreKind {
        self.kind
    }

    pub fn lists(&self) -> &[Vec<Count>] {
        &self.lists
    }

    pub fn list(&self, part: usize) -> &[Count] {
        &self.lists[part]
    }

    pub fn into_lists(self) -> Vec<Vec<Count>> {
        self.lists
    }

    /// Sum of all entries, `None` on overflow.
    pub fn total(&self) -> Option<Count> {
        self.lists
            .iter()
            .flatten()
            .try_fold(0 as Count, |acc, &x| acc.checked_add(x))
    }

    /// Checks part count and list lengths against `shape`.
    pub fn check_lengths(&self, shape: &Shape) -> Result<()> {
        if self.lists.len() != shape.k() {
            return Err(Error::PartCountMismatch {
                expected: shape.k(),
                found: self.lists.len(),
            });
        }
        for (part, list) in self.lists.iter().enumerate() {
            if list.len() != shape.size(part) {
                return Err(Error::LengthMismatch {
                    part: part + 1,
                    expected: shape.size(part),
                    found: list.len(),
                });
            }
        }
        Ok(())
    }

    /// Checks that every entry is at most the per-vertex arc count of its part.
    pub fn check_bounds(&self, shape: &Shape) -> Result<()> {
        self.check_lengths(shape)?;
        for (part, list) in self.lists.iter().enumerate() {
            let bound = shape.arcs_through(part);
            if let Some(pos) = list.iter().position(|&x| x > bound) {
                return Err(Error::EntryOutOfBounds {
                    part: part + 1,
                    position: pos + 1,
                    value: list[pos],
                    bound,
                });
            }
        }
        Ok(())
    }

    pub(crate) fn require_kind(&self, kind: ScoreKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::KindMismatch {
                expected: kind.as_str(),
                found: self.kind.as_str(),
            });
        }
        Ok(())
    }
}

/// Per-vertex counts in vertex order, keeping the vertex-to-count map that
/// sorted [`ScoreLists`] discard.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexScores {
    pub kind: ScoreKind,
    pub per_part: Vec<Vec<Count>>,
}

impl VertexScores {
    pub fn get(&self, v: VertexId) -> Count {
        self.per_part[v.part][v.index]
    }

    pub fn to_lists(&self) -> ScoreLists {
        ScoreLists::sorted(self.kind, self.per_part.clone())
    }

    pub fn total(&self) -> Count {
        self.per_part.iter().flatten().sum()
    }
}

/// A hypertournament stored as a dense table: slot `r` holds the arc on the
/// selection of rank `r`.
///
/// Tables built by this crate are complete. [`Hypertournament::from_table`]
/// and [`Hypertournament::from_arc_list`] accept arbitrary input, which
/// [`Hypertournament::validate`] then reports on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypertournament {
    shape: Shape,
    arcs: Vec<Option<Arc>>,
}

impl Hypertournament {
    pub fn from_table(shape: Shape, arcs: Vec<Option<Arc>>) -> Self {
        Hypertournament { shape, arcs }
    }

    /// One loser per selection rank; every other arc entry in canonical order.
    pub fn from_losers(shape: Shape, losers: &[VertexId]) -> Result<Self> {
        if losers.len() as Count != shape.total_arcs() {
            return Err(Error::LoserCount {
                expected: shape.total_arcs(),
                found: losers.len(),
            });
        }
        let arcs = losers
            .iter()
            .enumerate()
            .map(|(rank, &loser)| {
                let vertices = shape.selection_vertices(rank as Count);
                if !vertices.contains(&loser) {
                    return Err(Error::InvalidSubset(format!(
                        "loser {loser} is not in selection {rank}"
                    )));
                }
                Ok(Some(Arc::with_loser(&vertices, loser)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Hypertournament { shape, arcs })
    }

    /// Places each listed arc in the slot of its vertex set. Arcs that name no
    /// selection, or land in an occupied slot, are returned as violations.
    pub fn from_arc_list(shape: Shape, list: Vec<Arc>) -> (Self, Vec<Violation>) {
        let mut arcs: Vec<Option<Arc>> = vec![None; shape.total_arcs() as usize];
        let mut problems = Vec::new();
        for (position, arc) in list.into_iter().enumerate() {
            let mut selection: Selection = vec![Vec::new(); shape.k()];
            let mut bad = None;
            for &v in arc.order() {
                if !shape.contains(v) {
                    bad = Some(format!("vertex {v} is outside the shape"));
                    break;
                }
                selection[v.part].push(v.index);
            }
            for s in &mut selection {
                s.sort_unstable();
            }
            let rank = match bad {
                Some(reason) => Err(reason),
                None => selection_rank(&selection, &shape).map_err(|e| e.to_string()),
            };
            match rank {
                Err(reason) => problems.push(Violation::Unplaceable { position, reason }),
                Ok(rank) => {
                    let slot = &mut arcs[rank as usize];
                    if slot.is_some() {
                        problems.push(Violation::DuplicateArc { rank });
                    } else {
                        *slot = Some(arc);
                    }
                }
            }
        }
        (Hypertournament { shape, arcs }, problems)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn arcs(&self) -> &[Option<Arc>] {
        &self.arcs
    }

    pub fn arc(&self, rank: Count) -> Option<&Arc> {
        self.arcs.get(rank as usize).and_then(Option::as_ref)
    }

    /// Loser of every slot, in rank order.
    pub fn losers(&self) -> Result<Vec<VertexId>> {
        self.require_valid()?;
        Ok(self.arcs.iter().flatten().filter_map(Arc::loser).collect())
    }

    /// Every structural violation, each tagged with its selection rank.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let expected = self.shape.total_arcs();
        if self.arcs.len() as Count != expected {
            violations.push(Violation::TableSize {
                expected,
                found: self.arcs.len(),
            });
        }
        let len = self.shape.arc_len();
        for (slot, arc) in self.arcs.iter().enumerate() {
            let rank = slot as Count;
            let Some(arc) = arc else {
                violations.push(Violation::MissingArc { rank });
                continue;
            };
            if arc.order.len() != len {
                violations.push(Violation::WrongLength {
                    rank,
                    expected: len,
                    found: arc.order.len(),
                });
            }
            let mut broken = false;
            let mut seen: Vec<VertexId> = Vec::with_capacity(arc.order.len());
            for &v in &arc.order {
                if !self.shape.contains(v) {
                    violations.push(Violation::VertexOutOfRange { rank, vertex: v });
                    broken = true;
                } else if seen.contains(&v) {
                    violations.push(Violation::RepeatedVertex { rank, vertex: v });
                    broken = true;
                } else {
                    seen.push(v);
                }
            }
            if broken {
                continue;
            }
            for part in 0..self.shape.k() {
                let found = seen.iter().filter(|v| v.part == part).count();
                if found != self.shape.arity(part) {
                    violations.push(Violation::WrongArity {
                        rank,
                        part,
                        expected: self.shape.arity(part),
                        found,
                    });
                    broken = true;
                }
            }
            if broken || rank >= expected {
                continue;
            }
            seen.sort_unstable();
            if seen != self.shape.selection_vertices(rank) {
                violations.push(Violation::VertexSetMismatch { rank });
            }
        }
        ValidationReport { violations }
    }

    fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::Structural(report))
        }
    }

    /// Per-vertex losing counts without structural validation.
    pub(crate) fn tally_losers(&self) -> Vec<Vec<Count>> {
        let mut counts: Vec<Vec<Count>> = self.shape.sizes.iter().map(|&n| vec![0; n]).collect();
        for v in self.arcs.iter().flatten().filter_map(Arc::loser) {
            counts[v.part][v.index] += 1;
        }
        counts
    }

    /// Number of arcs in which each vertex is last.
    pub fn losing_score_table(&self) -> Result<VertexScores> {
        self.require_valid()?;
        Ok(VertexScores {
            kind: ScoreKind::Losing,
            per_part: self.tally_losers(),
        })
    }

    /// Number of arcs containing each vertex in which it is not last.
    pub fn score_table(&self) -> Result<VertexScores> {
        self.require_valid()?;
        // Counted directly from the arcs rather than via arcs_through.
        let mut counts: Vec<Vec<Count>> = self.shape.sizes.iter().map(|&n| vec![0; n]).collect();
        for arc in self.arcs.iter().flatten() {
            let (_, winners) = arc.order.split_last().expect("validated arc is non-empty");
            for v in winners {
                counts[v.part][v.index] += 1;
            }
        }
        Ok(VertexScores {
            kind: ScoreKind::Score,
            per_part: counts,
        })
    }

    pub fn losing_scores(&self) -> Result<ScoreLists> {
        Ok(self.losing_score_table()?.to_lists())
    }

    pub fn scores(&self) -> Result<ScoreLists> {
        Ok(self.score_table()?.to_lists())
    }

    /// Interchanges `a` and `b` in the lowest-ranked arc that contains both
    /// and has `b` last, so that `a` becomes the loser. Returns the new
    /// hypertournament; `self` is left untouched.
    pub fn arc_swap(&self, a: VertexId, b: VertexId) -> Result<Hypertournament> {
        let mut next = self.clone();
        next.swap_in_place(a, b)?;
        Ok(next)
    }

    /// In-place form of [`Hypertournament::arc_swap`]; returns the rank of the changed arc.
    pub fn swap_in_place(&mut self, a: VertexId, b: VertexId) -> Result<Count> {
        for v in [a, b] {
            if !self.shape.contains(v) {
                return Err(Error::VertexOutOfRange(v));
            }
        }
        if a == b {
            return Err(Error::SameVertex(a));
        }
        let slot = self
            .arcs
            .iter()
            .position(|arc| matches!(arc, Some(arc) if arc.loser() == Some(b) && arc.contains(a)))
            .ok_or(Error::NoEligibleArc { a, b })?;
        self.arcs[slot].as_mut().expect("eligible slot").swap(a, b);
        Ok(slot as Count)
    }

    /// Interchanges `a` and `b` in the arc at `rank`, which must contain `a`
    /// and have `b` last.
    pub fn swap_in_arc(&mut self, rank: Count, a: VertexId, b: VertexId) -> Result<()> {
        if a == b {
            return Err(Error::SameVertex(a));
        }
        match self.arcs.get_mut(rank as usize).and_then(Option::as_mut) {
            Some(arc) if arc.loser() == Some(b) && arc.contains(a) => {
                arc.swap(a, b);
                Ok(())
            }
            _ => Err(Error::NoEligibleArc { a, b }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(part: usize, index: usize) -> VertexId {
        VertexId::new(part - 1, index - 1)
    }

    fn shape(n: &[usize], alpha: &[usize]) -> Shape {
        Shape::new(n.to_vec(), alpha.to_vec()).unwrap()
    }

    /// Losers chosen by vertex set, independent of the rank order.
    fn square_example() -> Hypertournament {
        let s = shape(&[2, 2], &[1, 1]);
        let losers: Vec<VertexId> = (0..4)
            .map(|r| {
                let sel = s.selection_vertices(r);
                match (sel[0].index, sel[1].index) {
                    (0, 0) => v(2, 1),
                    (0, 1) => v(2, 2),
                    _ => sel[0],
                }
            })
            .collect();
        Hypertournament::from_losers(s, &losers).unwrap()
    }

    #[test]
    fn shape_rejects_bad_parameters() {
        assert!(Shape::new(vec![], vec![]).is_err());
        assert!(Shape::new(vec![2, 2], vec![1]).is_err());
        assert!(Shape::new(vec![2], vec![0]).is_err());
        assert!(Shape::new(vec![2], vec![3]).is_err());
        assert!(matches!(
            Shape::new(vec![200, 200], vec![100, 100]),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(
            Shape::with_bound(vec![10], vec![5], 100),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn arcs_through_examples() {
        assert_eq!(shape(&[2, 2], &[1, 1]).arcs_through(0), 2);
        assert_eq!(shape(&[3, 2], &[2, 1]).arcs_through(0), 4);
        assert_eq!(shape(&[3, 2], &[2, 1]).arcs_through(1), 3);
        let full = shape(&[3, 1, 2], &[3, 1, 2]);
        for part in 0..3 {
            assert_eq!(full.arcs_through(part), 1);
        }
    }

    #[test]
    fn arcs_through_matches_direct_count() {
        for s in [
            shape(&[3, 2], &[2, 1]),
            shape(&[4, 3, 2], &[2, 1, 1]),
            shape(&[5], &[3]),
        ] {
            for vertex in s.vertices() {
                let direct = (0..s.total_arcs())
                    .filter(|&r| s.selection_vertices(r).contains(&vertex))
                    .count() as Count;
                assert_eq!(direct, s.arcs_through(vertex.part), "{s} {vertex}");
            }
        }
    }

    #[test]
    fn losing_scores_example() {
        let m = square_example();
        assert!(m.validate().is_valid());
        let r = m.losing_scores().unwrap();
        assert_eq!(r.lists(), &[vec![0, 2], vec![1, 1]]);
        assert_eq!(r.total(), Some(4));
        let s = m.scores().unwrap();
        assert_eq!(s.lists(), &[vec![0, 2], vec![1, 1]]);
    }

    #[test]
    fn single_arc_shape() {
        let s = shape(&[2, 1], &[2, 1]);
        assert_eq!(s.total_arcs(), 1);
        let m = Hypertournament::from_losers(s, &[v(1, 2)]).unwrap();
        assert_eq!(m.losing_scores().unwrap().lists(), &[vec![0, 1], vec![0]]);
        let scores = m.score_table().unwrap();
        assert_eq!(scores.get(v(1, 2)), 0);
        assert_eq!(scores.get(v(1, 1)), 1);
        assert_eq!(scores.get(v(2, 1)), 1);
        assert_eq!(m.arc(0).unwrap().order(), &[v(1, 1), v(2, 1), v(1, 2)]);
    }

    #[test]
    fn from_losers_rejects_outsider() {
        let s = shape(&[2, 2], &[1, 1]);
        assert!(Hypertournament::from_losers(s.clone(), &[v(1, 2); 4]).is_err());
        assert!(Hypertournament::from_losers(s, &[v(1, 1)]).is_err());
    }

    #[test]
    fn validate_reports_moved_vertex() {
        let m = square_example();
        let mut table = m.arcs().to_vec();
        // Slot 0 is {u11, u21}; replace u21 by u22.
        let order: Vec<VertexId> = table[0]
            .as_ref()
            .unwrap()
            .order()
            .iter()
            .map(|&x| if x == v(2, 1) { v(2, 2) } else { x })
            .collect();
        table[0] = Some(Arc::new(order));
        let bad = Hypertournament::from_table(m.shape().clone(), table);
        let report = bad.validate();
        assert_eq!(
            report.violations,
            vec![Violation::VertexSetMismatch { rank: 0 }]
        );
        assert!(matches!(bad.losing_scores(), Err(Error::Structural(_))));
    }

    #[test]
    fn validate_reports_missing_arc() {
        let m = square_example();
        let mut table = m.arcs().to_vec();
        table[2] = None;
        let report = Hypertournament::from_table(m.shape().clone(), table).validate();
        assert_eq!(report.violations, vec![Violation::MissingArc { rank: 2 }]);
    }

    #[test]
    fn validate_reports_arity_and_repeats() {
        let s = shape(&[2, 2], &[1, 1]);
        let table = vec![
            Some(Arc::new(vec![v(1, 1), v(1, 1)])),
            Some(Arc::new(vec![v(1, 2), v(1, 1)])),
            Some(Arc::new(vec![v(1, 1), v(3, 1)])),
        ];
        let report = Hypertournament::from_table(s, table).validate();
        assert_eq!(
            report.violations,
            vec![
                Violation::TableSize {
                    expected: 4,
                    found: 3
                },
                Violation::RepeatedVertex {
                    rank: 0,
                    vertex: v(1, 1)
                },
                Violation::WrongArity {
                    rank: 1,
                    part: 0,
                    expected: 1,
                    found: 2
                },
                Violation::WrongArity {
                    rank: 1,
                    part: 1,
                    expected: 1,
                    found: 0
                },
                Violation::VertexOutOfRange {
                    rank: 2,
                    vertex: v(3, 1)
                },
            ]
        );
    }

    #[test]
    fn arc_list_placement() {
        let m = square_example();
        let mut list: Vec<Arc> = m.arcs().iter().rev().flatten().cloned().collect();
        let (placed, problems) = Hypertournament::from_arc_list(m.shape().clone(), list.clone());
        assert!(problems.is_empty());
        assert_eq!(placed, m);

        list.remove(1);
        list.push(list[0].clone());
        list.push(Arc::new(vec![v(1, 1), v(1, 2)]));
        let (placed, problems) = Hypertournament::from_arc_list(m.shape().clone(), list);
        assert_eq!(problems.len(), 2);
        assert!(matches!(problems[0], Violation::DuplicateArc { .. }));
        assert!(matches!(
            problems[1],
            Violation::Unplaceable { position: 4, .. }
        ));
        assert_eq!(placed.validate().violations.len(), 1);
    }

    #[test]
    fn arc_swap_example() {
        let m = square_example();
        let swapped = m.arc_swap(v(1, 1), v(2, 1)).unwrap();
        let before = m.losing_score_table().unwrap();
        let after = swapped.losing_score_table().unwrap();
        assert_eq!(after.get(v(1, 1)), before.get(v(1, 1)) + 1);
        assert_eq!(after.get(v(2, 1)), before.get(v(2, 1)) - 1);
        assert_eq!(after.to_lists().lists(), &[vec![1, 2], vec![0, 1]]);
        assert_eq!(swapped.arc(0).unwrap().loser(), Some(v(1, 1)));
        // m itself is unchanged.
        assert_eq!(m.arc(0).unwrap().loser(), Some(v(2, 1)));

        let back = swapped.arc_swap(v(2, 1), v(1, 1)).unwrap();
        assert_eq!(back.losing_scores().unwrap(), m.losing_scores().unwrap());
        assert_eq!(back, m);
    }

    #[test]
    fn arc_swap_errors() {
        let m = square_example();
        // u11 loses nothing.
        assert!(matches!(
            m.arc_swap(v(2, 1), v(1, 1)),
            Err(Error::NoEligibleArc { .. })
        ));
        assert!(matches!(
            m.arc_swap(v(1, 1), v(1, 1)),
            Err(Error::SameVertex(_))
        ));
        assert!(matches!(
            m.arc_swap(v(1, 1), v(3, 1)),
            Err(Error::VertexOutOfRange(_))
        ));
        // u12 and u11 never share an arc.
        assert!(matches!(
            m.arc_swap(v(1, 1), v(1, 2)),
            Err(Error::NoEligibleArc { .. })
        ));
    }

    #[test]
    fn score_lists_constructors() {
        assert!(matches!(
            ScoreLists::new(ScoreKind::Losing, vec![vec![0, 2], vec![2, 1]]),
            Err(Error::NonMonotone {
                part: 2,
                position: 2
            })
        ));
        let sorted = ScoreLists::sorted(ScoreKind::Score, vec![vec![2, 0], vec![1, 1]]);
        assert_eq!(sorted.lists(), &[vec![0, 2], vec![1, 1]]);
        let s = shape(&[2, 2], &[1, 1]);
        assert!(sorted.check_bounds(&s).is_ok());
        let big = ScoreLists::new(ScoreKind::Losing, vec![vec![0, 3], vec![1, 1]]).unwrap();
        assert!(matches!(
            big.check_bounds(&s),
            Err(Error::EntryOutOfBounds { .. })
        ));
        let short = ScoreLists::new(ScoreKind::Losing, vec![vec![0], vec![1, 1]]).unwrap();
        assert!(matches!(
            short.check_lengths(&s),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
