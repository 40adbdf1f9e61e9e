//! On-disk documents. Vertices are `[part, index]` pairs, 1-based.

use std::fmt;

use hypertournament::{Count, ScoreKind, ScoreLists, Shape, VertexId};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Losing,
    Score,
}

impl From<Kind> for ScoreKind {
    fn from(kind: Kind) -> Self {
        match kind {
            Kind::Losing => ScoreKind::Losing,
            Kind::Score => ScoreKind::Score,
        }
    }
}

impl From<ScoreKind> for Kind {
    fn from(kind: ScoreKind) -> Self {
        match kind {
            ScoreKind::Losing => Kind::Losing,
            ScoreKind::Score => Kind::Score,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputFormat {
    Json,
    Text,
}

#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<hypertournament::Error> for InputError {
    fn from(e: hypertournament::Error) -> Self {
        InputError(e.to_string())
    }
}

fn input_error(msg: impl Into<String>) -> InputError {
    InputError(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub k: usize,
    pub n: Vec<usize>,
    pub alpha: Vec<usize>,
    pub kind: Kind,
    pub lists: Vec<Vec<Count>>,
}

impl InstanceDocument {
    pub fn new(shape: &Shape, lists: &ScoreLists) -> Self {
        InstanceDocument {
            k: shape.k(),
            n: shape.sizes().to_vec(),
            alpha: shape.arities().to_vec(),
            kind: lists.kind().into(),
            lists: lists.lists().to_vec(),
        }
    }

    /// Parses a JSON document, or the text layout: a header line
    /// `k n_1 .. n_k alpha_1 .. alpha_k [losing|score]` followed by one list
    /// per line. `#` starts a comment; blank lines are skipped.
    pub fn parse(input: &str, format: Option<InputFormat>) -> Result<Self, InputError> {
        let format = format.unwrap_or_else(|| {
            if input.trim_start().starts_with('{') {
                InputFormat::Json
            } else {
                InputFormat::Text
            }
        });
        match format {
            InputFormat::Json => serde_json::from_str(input)
                .map_err(|e| input_error(format!("malformed JSON instance: {e}"))),
            InputFormat::Text => parse_text(input),
        }
    }

    pub fn shape(&self) -> Result<Shape, InputError> {
        if self.n.len() != self.k || self.alpha.len() != self.k {
            return Err(input_error(format!(
                "k = {} but n has {} entries and alpha has {}",
                self.k,
                self.n.len(),
                self.alpha.len()
            )));
        }
        Ok(Shape::new(self.n.clone(), self.alpha.clone())?)
    }

    /// Shape and lists, checked against each other. Unsorted lists are
    /// rejected unless `sort` is set.
    pub fn resolve(&self, sort: bool) -> Result<(Shape, ScoreLists), InputError> {
        let shape = self.shape()?;
        let lists = if sort {
            ScoreLists::sorted(self.kind.into(), self.lists.clone())
        } else {
            ScoreLists::new(self.kind.into(), self.lists.clone())
                .map_err(|e| input_error(format!("{e} (pass --sort to sort lists)")))?
        };
        lists.check_lengths(&shape)?;
        lists.check_bounds(&shape)?;
        Ok((shape, lists))
    }
}

fn parse_text(input: &str) -> Result<InstanceDocument, InputError> {
    let mut lines = input
        .lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|line| !line.is_empty());
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| input_error("empty text instance"))?
        .split_whitespace()
        .collect();
    let number = |token: &str| {
        token
            .parse::<usize>()
            .map_err(|_| input_error(format!("expected a non-negative integer, found {token:?}")))
    };
    let k = number(header[0])?;
    let mut rest = &header[1..];
    let kind = match rest.last() {
        Some(&"losing") => Kind::Losing,
        Some(&"score") => Kind::Score,
        _ => Kind::Losing,
    };
    if matches!(rest.last(), Some(&"losing") | Some(&"score")) {
        rest = &rest[..rest.len() - 1];
    }
    if rest.len() != 2 * k {
        return Err(input_error(format!(
            "header must list k = {k} sizes and {k} arities, found {} numbers",
            rest.len()
        )));
    }
    let n = rest[..k]
        .iter()
        .map(|t| number(t))
        .collect::<Result<Vec<_>, _>>()?;
    let alpha = rest[k..]
        .iter()
        .map(|t| number(t))
        .collect::<Result<Vec<_>, _>>()?;
    let lists = lines
        .map(|line| {
            line.split_whitespace()
                .map(|t| {
                    t.parse::<Count>().map_err(|_| {
                        input_error(format!("expected a non-negative integer, found {t:?}"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if lists.len() != k {
        return Err(input_error(format!(
            "expected {k} list lines, found {}",
            lists.len()
        )));
    }
    Ok(InstanceDocument {
        k,
        n,
        alpha,
        kind,
        lists,
    })
}

pub type VertexDoc = [usize; 2];

pub fn vertex_doc(v: VertexId) -> VertexDoc {
    [v.part + 1, v.index + 1]
}

pub fn vertex_from_doc(doc: VertexDoc) -> Result<VertexId, InputError> {
    match doc {
        [part, index] if part >= 1 && index >= 1 => Ok(VertexId::new(part - 1, index - 1)),
        _ => Err(input_error(format!(
            "vertex {doc:?} is not a 1-based [part, index] pair"
        ))),
    }
}

/// A hypertournament together with the lists it is claimed to have.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDocument {
    pub k: usize,
    pub n: Vec<usize>,
    pub alpha: Vec<usize>,
    pub kind: Kind,
    pub lists: Vec<Vec<Count>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// Score lists of the input when it was converted before realization.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converted_from_score: Option<Vec<Vec<Count>>>,
    /// Loser of each selection, in selection-rank order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub losers: Option<Vec<VertexDoc>>,
    /// Every arc as an ordered vertex sequence; the last vertex loses.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arcs: Option<Vec<Vec<VertexDoc>>>,
}

impl WitnessDocument {
    pub fn parse(input: &str) -> Result<Self, InputError> {
        let doc: WitnessDocument = serde_json::from_str(input)
            .map_err(|e| input_error(format!("malformed JSON witness: {e}")))?;
        match (&doc.losers, &doc.arcs) {
            (Some(_), Some(_)) => Err(input_error("witness has both \"losers\" and \"arcs\"")),
            (None, None) => Err(input_error("witness needs \"losers\" or \"arcs\"")),
            _ => Ok(doc),
        }
    }

    pub fn instance(&self) -> InstanceDocument {
        InstanceDocument {
            k: self.k,
            n: self.n.clone(),
            alpha: self.alpha.clone(),
            kind: self.kind,
            lists: self.lists.clone(),
        }
    }
}
