use std::io::Read;
use std::path::Path;

use hypertournament::criteria::{check_lists, losing_to_scores, scores_to_losing};
use hypertournament::oracle::{achievable_both, random_hypertournament, GenerationMode};
use hypertournament::realize::{realize_flow, realize_inductive, MAX_DENSE_ARCS};
use hypertournament::{
    Arc, CheckOptions, CheckResult, Count, Error, Hypertournament, ScoreKind, ScoreLists, Shape,
    VertexId,
};
use serde::Serialize;

use crate::document::{
    vertex_doc, vertex_from_doc, InputError, InputFormat, InstanceDocument, Kind, WitnessDocument,
};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Invalid = 1,
    Input = 2,
    Gap = 3,
    Resource = 4,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Invalid => "invalid",
            Status::Input => "input",
            Status::Gap => "realization-gap",
            Status::Resource => "resource-limit",
        }
    }
}

pub struct Outcome {
    pub status: Status,
    /// Compact JSON for standard output.
    pub document: String,
    /// Human-readable remarks for standard error.
    pub notes: Vec<String>,
}

impl Outcome {
    fn new(status: Status, document: impl Serialize) -> Self {
        Outcome {
            status,
            document: serde_json::to_string(&document).expect("documents serialize"),
            notes: Vec::new(),
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

#[derive(Serialize)]
struct ViolationDoc {
    p: Vec<usize>,
    lhs: Count,
    rhs: Count,
    /// Whether `p` is the full tuple, where equality is required.
    full_prefix: bool,
}

#[derive(Serialize)]
struct CheckDoc {
    kind: Kind,
    valid: bool,
    equality_at_full: bool,
    violation: Option<ViolationDoc>,
}

impl CheckDoc {
    fn new(shape: &Shape, kind: ScoreKind, result: &CheckResult) -> Self {
        CheckDoc {
            kind: kind.into(),
            valid: result.valid,
            equality_at_full: result.equality_at_full,
            violation: result.violation.as_ref().map(|v| ViolationDoc {
                p: v.prefix.clone(),
                lhs: v.lhs,
                rhs: v.rhs,
                full_prefix: v.prefix == shape.sizes(),
            }),
        }
    }
}

#[derive(Serialize)]
struct ErrorBody {
    status: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<CheckDoc>,
}

#[derive(Serialize)]
struct ErrorDoc {
    error: ErrorBody,
}

fn failure(status: Status, message: String, check: Option<CheckDoc>) -> Outcome {
    let note = format!("error: {message}");
    Outcome::new(
        status,
        ErrorDoc {
            error: ErrorBody {
                status: status.label(),
                message,
                check,
            },
        },
    )
    .note(note)
}

impl From<InputError> for Outcome {
    fn from(e: InputError) -> Self {
        failure(Status::Input, e.0, None)
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Capacity { .. } | Error::BudgetExceeded { .. } => Status::Resource,
            Error::InvalidLists(_) | Error::Structural(_) | Error::Infeasible { .. } => {
                Status::Invalid
            }
            Error::RealizationGap { .. }
            | Error::NoValidStep { .. }
            | Error::NoEligibleArc { .. } => Status::Gap,
            _ => Status::Input,
        };
        failure(status, e.to_string(), None)
    }
}

fn invalid_lists(shape: &Shape, result: CheckResult) -> Outcome {
    failure(
        Status::Invalid,
        "lists are not realizable".to_string(),
        Some(CheckDoc::new(shape, ScoreKind::Losing, &result)),
    )
}

type CommandResult = Result<Outcome, Outcome>;

fn read_input(path: &Path) -> Result<String, InputError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| InputError(format!("cannot read standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    }
    Ok(text)
}

fn load_instance(
    path: &Path,
    format: Option<InputFormat>,
    sort: bool,
) -> Result<(Shape, ScoreLists), InputError> {
    InstanceDocument::parse(&read_input(path)?, format)?.resolve(sort)
}

fn check_options(jobs: usize) -> CheckOptions {
    CheckOptions {
        pruning: true,
        jobs: jobs.max(1),
    }
}

pub fn check(path: &Path, format: Option<InputFormat>, sort: bool, jobs: usize) -> CommandResult {
    let (shape, lists) = load_instance(path, format, sort)?;
    let result = check_lists(&shape, &lists, check_options(jobs))?;
    let status = if result.valid {
        Status::Ok
    } else {
        Status::Invalid
    };
    Ok(Outcome::new(
        status,
        CheckDoc::new(&shape, lists.kind(), &result),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Inductive,
    Flow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Emit {
    Losers,
    Arcs,
}

fn witness(shape: &Shape, m: &Hypertournament, emit: Emit) -> Result<WitnessDocument, Error> {
    let (losers, arcs) = match emit {
        Emit::Losers => (
            Some(m.losers()?.into_iter().map(vertex_doc).collect()),
            None,
        ),
        Emit::Arcs => {
            let arcs = m
                .arcs()
                .iter()
                .flatten()
                .map(|arc| arc.order().iter().copied().map(vertex_doc).collect())
                .collect();
            (None, Some(arcs))
        }
    };
    let lists = m.losing_scores()?;
    Ok(WitnessDocument {
        k: shape.k(),
        n: shape.sizes().to_vec(),
        alpha: shape.arities().to_vec(),
        kind: Kind::Losing,
        lists: lists.into_lists(),
        method: None,
        seed: None,
        mode: None,
        converted_from_score: None,
        losers,
        arcs,
    })
}

pub fn realize(
    path: &Path,
    format: Option<InputFormat>,
    sort: bool,
    method: Method,
    emit: Emit,
) -> CommandResult {
    let (shape, input) = load_instance(path, format, sort)?;
    let mut notes = Vec::new();
    let (losing, converted) = match input.kind() {
        ScoreKind::Losing => (input, None),
        ScoreKind::Score => {
            notes.push("score lists converted to losing lists before realization".to_string());
            let losing = scores_to_losing(&shape, &input)?;
            (losing, Some(input.into_lists()))
        }
    };
    let realized = match method {
        Method::Inductive => realize_inductive(&shape, &losing),
        Method::Flow => realize_flow(&shape, &losing),
    };
    let m = match realized {
        Err(Error::InvalidLists(result)) => return Err(invalid_lists(&shape, *result)),
        Err(Error::Infeasible { .. }) => {
            return Err(invalid_lists(
                &shape,
                check_lists(&shape, &losing, check_options(1))?,
            ))
        }
        other => other?,
    };
    let mut doc = witness(&shape, &m, emit)?;
    doc.method = Some(
        match method {
            Method::Inductive => "inductive",
            Method::Flow => "flow",
        }
        .to_string(),
    );
    doc.lists = losing.into_lists();
    doc.converted_from_score = converted;
    let mut outcome = Outcome::new(Status::Ok, doc);
    outcome.notes = notes;
    Ok(outcome)
}

#[derive(Serialize)]
struct Totals {
    arcs: Count,
    losing: Option<Count>,
    score: Option<Count>,
    expected_losing: Count,
    expected_score: Count,
}

#[derive(Serialize)]
struct VerifyDoc {
    valid: bool,
    structural_violations: Vec<String>,
    losing_lists: Option<Vec<Vec<Count>>>,
    score_lists: Option<Vec<Vec<Count>>>,
    claimed_kind: Kind,
    claimed_lists: Vec<Vec<Count>>,
    claimed_match: bool,
    totals: Totals,
}

/// Builds the arc table a witness describes, keeping malformed entries so that
/// validation reports them.
fn witness_table(
    shape: &Shape,
    doc: &WitnessDocument,
) -> Result<(Hypertournament, Vec<String>), InputError> {
    if let Some(losers) = &doc.losers {
        let total = shape.total_arcs();
        let mut arcs: Vec<Option<Arc>> = Vec::with_capacity(losers.len().max(total as usize));
        for (rank, &loser) in losers.iter().enumerate() {
            let loser = vertex_from_doc(loser)?;
            let rank = rank as Count;
            let arc = if rank < total {
                let members = shape.selection_vertices(rank);
                if members.contains(&loser) {
                    Arc::with_loser(&members, loser)
                } else {
                    let mut order = members;
                    order.push(loser);
                    Arc::new(order)
                }
            } else {
                Arc::new(vec![loser])
            };
            arcs.push(Some(arc));
        }
        arcs.resize(arcs.len().max(total as usize), None);
        return Ok((Hypertournament::from_table(shape.clone(), arcs), Vec::new()));
    }
    let listed = doc
        .arcs
        .as_ref()
        .expect("witness has losers or arcs")
        .iter()
        .map(|arc| {
            arc.iter()
                .map(|&v| vertex_from_doc(v))
                .collect::<Result<Vec<VertexId>, _>>()
                .map(Arc::new)
        })
        .collect::<Result<Vec<Arc>, _>>()?;
    let (m, placement) = Hypertournament::from_arc_list(shape.clone(), listed);
    Ok((m, placement.iter().map(ToString::to_string).collect()))
}

pub fn verify(path: &Path) -> CommandResult {
    let doc = WitnessDocument::parse(&read_input(path)?)?;
    let shape = doc.instance().shape()?;
    if shape.total_arcs() > MAX_DENSE_ARCS {
        return Err(Error::Capacity {
            what: format!("arc table for {shape}"),
            bound: MAX_DENSE_ARCS,
        }
        .into());
    }
    let (m, mut violations) = witness_table(&shape, &doc)?;
    violations.extend(m.validate().violations.iter().map(ToString::to_string));
    let structural = violations.is_empty();
    let losing = structural.then(|| m.losing_score_table()).transpose()?;
    let score = structural.then(|| m.score_table()).transpose()?;
    let losing_lists = losing.as_ref().map(|t| t.to_lists().into_lists());
    let score_lists = score.as_ref().map(|t| t.to_lists().into_lists());
    let recomputed = match doc.kind {
        Kind::Losing => &losing_lists,
        Kind::Score => &score_lists,
    };
    let claimed_match = recomputed.as_ref() == Some(&doc.lists);
    let totals = Totals {
        arcs: shape.total_arcs(),
        losing: losing.as_ref().map(|t| t.total()),
        score: score.as_ref().map(|t| t.total()),
        expected_losing: shape.total_arcs(),
        expected_score: (shape.arc_len() as Count - 1) * shape.total_arcs(),
    };
    let valid = structural && claimed_match;
    let report = VerifyDoc {
        valid,
        structural_violations: violations,
        losing_lists,
        score_lists,
        claimed_kind: doc.kind,
        claimed_lists: doc.lists.clone(),
        claimed_match,
        totals,
    };
    let outcome = Outcome::new(if valid { Status::Ok } else { Status::Invalid }, report);
    Ok(match (structural, claimed_match) {
        (false, _) => outcome.note("witness is structurally invalid"),
        (true, false) => outcome.note("recomputed lists differ from the claimed lists"),
        _ => outcome,
    })
}

pub fn convert(path: &Path, format: Option<InputFormat>, sort: bool) -> CommandResult {
    let (shape, lists) = load_instance(path, format, sort)?;
    let converted = match lists.kind() {
        ScoreKind::Losing => losing_to_scores(&shape, &lists)?,
        ScoreKind::Score => scores_to_losing(&shape, &lists)?,
    };
    Ok(Outcome::new(
        Status::Ok,
        InstanceDocument::new(&shape, &converted),
    ))
}

#[derive(Serialize)]
struct EnumerateDoc {
    k: usize,
    n: Vec<usize>,
    alpha: Vec<usize>,
    kind: Kind,
    assignment_count: Count,
    count: usize,
    lists: Vec<Vec<Vec<Count>>>,
}

pub fn enumerate(shape: &Shape, kind: Kind, budget: Count, jobs: usize) -> CommandResult {
    let (losing, score) = achievable_both(shape, budget, jobs.max(1))?;
    let set = match kind {
        Kind::Losing => losing,
        Kind::Score => score,
    };
    Ok(Outcome::new(
        Status::Ok,
        EnumerateDoc {
            k: shape.k(),
            n: shape.sizes().to_vec(),
            alpha: shape.arities().to_vec(),
            kind,
            assignment_count: set.assignment_count,
            count: set.len(),
            lists: set.lists.into_iter().map(ScoreLists::into_lists).collect(),
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    LoserOnly,
    FullPermutation,
}

pub fn random(shape: &Shape, seed: u64, mode: Mode, emit: Emit) -> CommandResult {
    let (generation, name) = match mode {
        Mode::LoserOnly => (GenerationMode::LoserOnly, "loser-only"),
        Mode::FullPermutation => (GenerationMode::FullPermutation, "full-permutation"),
    };
    let m = random_hypertournament(shape, seed, generation)?;
    let mut doc = witness(shape, &m, emit)?;
    doc.method = Some("random".to_string());
    doc.seed = Some(seed);
    doc.mode = Some(name.to_string());
    Ok(Outcome::new(Status::Ok, doc))
}

/// Shape from `--n` and `--alpha`.
pub fn shape_from_flags(n: &[usize], alpha: &[usize]) -> Result<Shape, Outcome> {
    if n.len() != alpha.len() {
        return Err(InputError(format!(
            "--n has {} entries but --alpha has {}",
            n.len(),
            alpha.len()
        ))
        .into());
    }
    Shape::new(n.to_vec(), alpha.to_vec()).map_err(Outcome::from)
}
