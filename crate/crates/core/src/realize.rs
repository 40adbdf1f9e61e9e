//! Witness construction for valid losing score lists.
//!
//! [`realize_inductive`] follows the inductive construction: when the last
//! entry of the active list equals the number of arcs through a vertex of
//! that part, the last vertex loses every arc it belongs to and the rest is
//! built recursively on a smaller part. Otherwise the lists are first
//! saturated by single-unit transfers ([`saturate_part`]), the saturated
//! lists are realized, and each transfer is undone by an arc interchange.
//!
//! [`realize_flow`] is an independent oracle: it assigns a loser to every
//! selection with a maximum flow.
//!
//! In every witness, entry `j` of list `i` is the losing score of vertex
//! `u_{ij}` (index order).

use std::cmp::Reverse;
use std::collections::HashSet;

use petgraph::algo::dinics;
use petgraph::graph::{DiGraph, EdgeIndex, NodeIndex};

use crate::combinatorics::{selection_rank, Count};
use crate::criteria::check_losing_lists;
use crate::error::{Error, Result};
use crate::model::{Arc, Hypertournament, ScoreKind, ScoreLists, Shape, VertexId, VertexScores};

/// Largest arc table the realizers will materialize.
pub const MAX_DENSE_ARCS: Count = 1 << 22;

/// One saturation transfer: `incremented` gains a loss, `decremented` gives one up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransformStep {
    pub incremented: VertexId,
    pub decremented: VertexId,
    /// Rank of the arc, containing both vertices, through which the loss is
    /// handed back when the step is undone.
    pub arc: Count,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransformLog {
    pub steps: Vec<TransformStep>,
}

impl TransformLog {
    /// Applies the steps to `lists` positionally.
    pub fn replay(&self, lists: &mut [Vec<Count>]) {
        for step in &self.steps {
            lists[step.incremented.part][step.incremented.index] += 1;
            lists[step.decremented.part][step.decremented.index] -= 1;
        }
    }
}

pub(crate) fn ensure_dense(shape: &Shape) -> Result<()> {
    if shape.total_arcs() > MAX_DENSE_ARCS {
        return Err(Error::Capacity {
            what: format!("arc table for {shape}"),
            bound: MAX_DENSE_ARCS,
        });
    }
    Ok(())
}

fn require_valid(shape: &Shape, r: &ScoreLists) -> Result<()> {
    let result = check_losing_lists(shape, r)?;
    if result.valid {
        Ok(())
    } else {
        Err(Error::InvalidLists(Box::new(result)))
    }
}

/// Saturates part 1 (index 0).
pub fn saturate(shape: &Shape, r: &ScoreLists) -> Result<(VertexScores, TransformLog)> {
    saturate_part(shape, r, 0)
}

/// Gives every transfer its own arc through the saturated vertex that also
/// contains the transfer's decremented vertex (augmenting paths).
#[derive(Clone)]
struct ArcReservations {
    /// `holder[a]` is the transfer currently holding link arc `a`.
    holder: Vec<Option<usize>>,
    targets: Vec<VertexId>,
}

impl ArcReservations {
    fn augment(&mut self, link: &[(Count, Vec<VertexId>)], step: usize, seen: &mut [bool]) -> bool {
        let target = self.targets[step];
        for (a, (_, members)) in link.iter().enumerate() {
            if seen[a] || !members.contains(&target) {
                continue;
            }
            seen[a] = true;
            if self.holder[a].is_none_or(|other| self.augment(link, other, seen)) {
                self.holder[a] = Some(step);
                return true;
            }
        }
        false
    }

    fn try_reserve(&mut self, link: &[(Count, Vec<VertexId>)], target: VertexId) -> bool {
        self.targets.push(target);
        let mut seen = vec![false; link.len()];
        self.augment(link, self.targets.len() - 1, &mut seen)
    }

    fn arc_of(&self, link: &[(Count, Vec<VertexId>)], step: usize) -> Count {
        let a = self
            .holder
            .iter()
            .position(|&h| h == Some(step))
            .expect("every transfer holds an arc");
        link[a].0
    }
}

struct Frame {
    lists: Vec<Vec<Count>>,
    taken: Vec<Vec<Count>>,
    reservations: ArcReservations,
    options: Vec<VertexId>,
    next: usize,
}

/// Raises the last entry of list `active` to `arcs_through(active)`.
///
/// Every transfer adds 1 to the last vertex `a` of the active part and takes
/// 1 from another vertex of positive losing score (of another part, or of the
/// active part when its arity is at least 2). A sequence of transfers is
/// accepted when the lists stay valid after each one and every transfer can
/// be handed back through its own arc containing `a` and the decremented
/// vertex; that arc is recorded in [`TransformStep::arc`]. Sequences are
/// searched depth first, largest current score first, so the result is
/// deterministic. Entries are positional: vertex `u_{ij}` keeps index `j`, and
/// the returned table need not be non-decreasing.
pub fn saturate_part(
    shape: &Shape,
    r: &ScoreLists,
    active: usize,
) -> Result<(VertexScores, TransformLog)> {
    require_valid(shape, r)?;
    let bound = shape.arcs_through(active);
    let saturated = VertexId::new(active, shape.size(active) - 1);
    let link: Vec<(Count, Vec<VertexId>)> = (0..shape.total_arcs())
        .map(|rank| (rank, shape.selection_vertices(rank)))
        .filter(|(_, members)| members.contains(&saturated))
        .collect();
    let lists = r.lists().to_vec();
    let taken: Vec<Vec<Count>> = shape.sizes().iter().map(|&n| vec![0; n]).collect();
    let reservations = ArcReservations {
        holder: vec![None; link.len()],
        targets: Vec::new(),
    };
    let options = transfer_options(shape, &lists, &taken, saturated);
    let mut stack = vec![Frame {
        lists,
        taken,
        reservations,
        options,
        next: 0,
    }];
    let mut dead: HashSet<Vec<Vec<(Count, Count)>>> = HashSet::new();
    let mut best = r.list(active)[saturated.index];
    loop {
        let frame = stack.last_mut().expect("search stack is never empty here");
        if frame.lists[active][saturated.index] == bound {
            break;
        }
        let Some(&dec) = frame.options.get(frame.next) else {
            dead.insert(canonical(&frame.lists, &frame.taken, saturated));
            stack.pop();
            if stack.is_empty() {
                return Err(Error::NoValidStep {
                    current: best,
                    bound,
                });
            }
            continue;
        };
        frame.next += 1;
        let mut lists = frame.lists.clone();
        let mut taken = frame.taken.clone();
        lists[active][saturated.index] += 1;
        lists[dec.part][dec.index] -= 1;
        taken[dec.part][dec.index] += 1;
        if dead.contains(&canonical(&lists, &taken, saturated)) {
            continue;
        }
        let mut reservations = frame.reservations.clone();
        if !reservations.try_reserve(&link, dec) {
            continue;
        }
        let sorted = ScoreLists::sorted(ScoreKind::Losing, lists.clone());
        if !check_losing_lists(shape, &sorted)?.valid {
            dead.insert(canonical(&lists, &taken, saturated));
            continue;
        }
        best = best.max(lists[active][saturated.index]);
        let options = transfer_options(shape, &lists, &taken, saturated);
        stack.push(Frame {
            lists,
            taken,
            reservations,
            options,
            next: 0,
        });
    }
    let last = stack.pop().expect("search ended on a saturated frame");
    let steps = last
        .reservations
        .targets
        .iter()
        .enumerate()
        .map(|(i, &decremented)| TransformStep {
            incremented: saturated,
            decremented,
            arc: last.reservations.arc_of(&link, i),
        })
        .collect();
    let table = VertexScores {
        kind: ScoreKind::Losing,
        per_part: last.lists,
    };
    Ok((table, TransformLog { steps }))
}

/// States that differ by relabeling vertices inside a part (other than the
/// saturated vertex) behave identically; this key identifies them.
fn canonical(
    lists: &[Vec<Count>],
    taken: &[Vec<Count>],
    saturated: VertexId,
) -> Vec<Vec<(Count, Count)>> {
    lists
        .iter()
        .zip(taken)
        .enumerate()
        .map(|(part, (list, took))| {
            let mut pairs: Vec<(Count, Count)> = list
                .iter()
                .zip(took)
                .enumerate()
                .filter(|&(index, _)| VertexId::new(part, index) != saturated)
                .map(|(_, (&value, &t))| (value, t))
                .collect();
            pairs.sort_unstable();
            pairs
        })
        .collect()
}

/// One representative per class of interchangeable vertices, in trial order.
fn transfer_options(
    shape: &Shape,
    lists: &[Vec<Count>],
    taken: &[Vec<Count>],
    saturated: VertexId,
) -> Vec<VertexId> {
    let mut seen = HashSet::new();
    let mut out: Vec<VertexId> = shape
        .vertices()
        .filter(|&v| v != saturated && lists[v.part][v.index] > 0)
        .filter(|&v| v.part != saturated.part || shape.arity(v.part) >= 2)
        .filter(|&v| seen.insert((v.part, lists[v.part][v.index], taken[v.part][v.index])))
        .collect();
    out.sort_by_key(|&v| {
        (
            Reverse(lists[v.part][v.index]),
            taken[v.part][v.index],
            v.part == saturated.part,
            v,
        )
    });
    out
}

/// Builds a hypertournament whose losing score lists are `r`.
pub fn realize_inductive(shape: &Shape, r: &ScoreLists) -> Result<Hypertournament> {
    ensure_dense(shape)?;
    require_valid(shape, r)?;
    build(shape, r.lists().to_vec())
}

fn build(shape: &Shape, lists: Vec<Vec<Count>>) -> Result<Hypertournament> {
    let Some(active) = (0..shape.k()).find(|&i| shape.size(i) > shape.arity(i)) else {
        // One selection: its loser is the single vertex with a loss.
        let loser = shape
            .vertices()
            .find(|v| lists[v.part][v.index] == 1)
            .expect("valid lists on a single arc have exactly one loss");
        return Hypertournament::from_losers(shape.clone(), &[loser]);
    };
    let top = shape.size(active) - 1;
    if lists[active][top] == shape.arcs_through(active) {
        let smaller = shape.resized(active, top)?;
        let mut rest = lists;
        rest[active].pop();
        let inner = build(&smaller, rest)?;
        return Ok(extend_with_loser(shape, &inner, VertexId::new(active, top)));
    }
    let current = ScoreLists::new(ScoreKind::Losing, lists)?;
    let (saturated, log) = saturate_part(shape, &current, active)?;
    let mut m = build_positional(shape, saturated.per_part)?;
    for (i, step) in log.steps.iter().enumerate().rev() {
        m.swap_in_arc(step.arc, step.decremented, step.incremented)
            .map_err(|e| Error::RealizationGap {
                step: i,
                source: Box::new(e),
            })?;
    }
    Ok(m)
}

/// Realizes a positional table by sorting each list, building on the sorted
/// lists and relabeling vertices back.
fn build_positional(shape: &Shape, table: Vec<Vec<Count>>) -> Result<Hypertournament> {
    let order: Vec<Vec<usize>> = table
        .iter()
        .map(|list| {
            let mut idx: Vec<usize> = (0..list.len()).collect();
            idx.sort_by_key(|&j| list[j]);
            idx
        })
        .collect();
    let sorted = order
        .iter()
        .zip(&table)
        .map(|(idx, list)| idx.iter().map(|&j| list[j]).collect())
        .collect();
    let m = build(shape, sorted)?;
    if order
        .iter()
        .all(|idx| idx.iter().enumerate().all(|(j, &t)| j == t))
    {
        return Ok(m);
    }
    let arcs = m
        .arcs()
        .iter()
        .flatten()
        .map(|arc| {
            Arc::new(
                arc.order()
                    .iter()
                    .map(|v| VertexId::new(v.part, order[v.part][v.index]))
                    .collect(),
            )
        })
        .collect();
    let (relabeled, violations) = Hypertournament::from_arc_list(shape.clone(), arcs);
    debug_assert!(violations.is_empty());
    Ok(relabeled)
}

/// Adds `fresh` (the last vertex of its part in `shape`) to `inner`, making
/// it the loser of every arc that contains it.
fn extend_with_loser(shape: &Shape, inner: &Hypertournament, fresh: VertexId) -> Hypertournament {
    let arcs = (0..shape.total_arcs())
        .map(|rank| {
            let selection = shape.selection(rank);
            if selection[fresh.part].contains(&fresh.index) {
                Some(Arc::with_loser(&shape.selection_vertices(rank), fresh))
            } else {
                let old = selection_rank(&selection, inner.shape())
                    .expect("selection of the smaller shape");
                inner.arc(old).cloned()
            }
        })
        .collect();
    Hypertournament::from_table(shape.clone(), arcs)
}

/// Builds a witness by maximum flow: source to every selection (capacity 1),
/// selection to each of its vertices (capacity 1), vertex to sink (capacity
/// equal to its target losing score). Feasible exactly when every selection
/// is routed and the targets sum to the arc count.
pub fn realize_flow(shape: &Shape, r: &ScoreLists) -> Result<Hypertournament> {
    ensure_dense(shape)?;
    r.require_kind(ScoreKind::Losing)?;
    r.check_lengths(shape)?;
    let total = shape.total_arcs();
    let mut net: DiGraph<(), usize> = DiGraph::new();
    let source = net.add_node(());
    let sink = net.add_node(());
    let vertex_nodes: Vec<Vec<NodeIndex>> = shape
        .sizes()
        .iter()
        .map(|&n| (0..n).map(|_| net.add_node(())).collect())
        .collect();
    let mut choice_edges = Vec::with_capacity(total as usize);
    for rank in 0..total {
        let node = net.add_node(());
        net.add_edge(source, node, 1);
        let edges: Vec<(EdgeIndex, VertexId)> = shape
            .selection_vertices(rank)
            .into_iter()
            .map(|v| (net.add_edge(node, vertex_nodes[v.part][v.index], 1), v))
            .collect();
        choice_edges.push(edges);
    }
    for v in shape.vertices() {
        let target = r.list(v.part)[v.index].min(total) as usize;
        net.add_edge(vertex_nodes[v.part][v.index], sink, target);
    }
    let (flow, flows) = dinics(&net, source, sink);
    let demand = r.total();
    if flow as Count != total || demand != Some(total) {
        return Err(Error::Infeasible {
            flow: flow as Count,
            required: total,
            demand,
        });
    }
    let losers: Vec<VertexId> = choice_edges
        .iter()
        .map(|edges| {
            edges
                .iter()
                .find(|&&(e, _)| flows[e.index()] == 1)
                .map(|&(_, v)| v)
                .expect("every routed selection sends its unit to one vertex")
        })
        .collect();
    Hypertournament::from_losers(shape.clone(), &losers)
}
