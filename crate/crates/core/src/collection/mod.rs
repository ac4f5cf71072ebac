//! Test-collection building: pooling runs, choosing what to judge, recording
//! evaluator judgments and adjudicating them into qrels.

mod journal;
mod pool;
mod vote;

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::evaluation::{EvalError, Grade, Qrels};

pub use journal::{read_journal, replay, Journal, Judgment, JudgmentKey};
pub use pool::{pool_runs, select_judging_candidates, Candidates, Pool, PoolEntry, PoolOutcome};
pub use vote::majority_vote;

/// Documents pooled from every run before judging candidates are chosen.
pub const DEFAULT_POOL_DEPTH: usize = 10;
/// Documents judged per topic.
pub const DEFAULT_PER_QUERY: usize = 10;

#[derive(Debug, Error)]
pub enum CollectionError {
    #[error("pool depth must be at least 1")]
    InvalidDepth,
    #[error("candidates per query must be at least 1")]
    InvalidPerQuery,
    #[error("no judgments to vote on")]
    EmptyJudgments,
    #[error("nothing to export: no adjudicated judgments")]
    NothingToExport,
    #[error("{missing} selected candidate pair(s) have no adjudicated grade, first: {first_qid} {first_docid}")]
    MissingGrades { missing: usize, first_qid: String, first_docid: String },
    #[error("{what} line {line}: {message}")]
    Parse { what: &'static str, line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CollectionError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CollectionError::Io { path: path.display().to_string(), source }
    }
}

/// One step of the 0–3 relevance scale shown to evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScaleLevel {
    pub grade: u8,
    pub label: &'static str,
    pub description: &'static str,
}

pub const RELEVANCE_SCALE: [ScaleLevel; 4] = [
    ScaleLevel {
        grade: 0,
        label: "no useful information",
        description: "Not relevant. Nothing in the document helps with the query.",
    },
    ScaleLevel {
        grade: 1,
        label: "some useful information",
        description: "Less relevant. The document gives some useful or background information about the story behind the query.",
    },
    ScaleLevel {
        grade: 2,
        label: "significant information",
        description: "Relevant. The document gives significant information for the query.",
    },
    ScaleLevel {
        grade: 3,
        label: "essential information",
        description: "Highly relevant. The document gives essential information for the query.",
    },
];

/// Judging guidelines handed to evaluators.
pub const GUIDELINES: &str = include_str!("../../assets/guidelines.md");

/// Majority vote per (qid, docid) over the latest judgment of every evaluator.
pub fn adjudicate<'a>(
    judgments: impl IntoIterator<Item = &'a Judgment>,
) -> Result<BTreeMap<(String, String), Grade>, CollectionError> {
    let mut grouped: BTreeMap<(String, String), Vec<Grade>> = BTreeMap::new();
    for j in judgments {
        grouped.entry((j.qid.clone(), j.docid.clone())).or_default().push(j.grade);
    }
    grouped
        .into_iter()
        .map(|(pair, grades)| Ok((pair, majority_vote(&grades)?)))
        .collect()
}

/// Checks that every candidate pair received a grade.
pub fn check_coverage(
    adjudicated: &BTreeMap<(String, String), Grade>,
    candidates: &Candidates,
) -> Result<(), CollectionError> {
    let missing: Vec<(&str, &str)> = candidates
        .pairs()
        .filter(|(q, d)| !adjudicated.contains_key(&(q.to_string(), d.to_string())))
        .collect();
    match missing.first() {
        None => Ok(()),
        Some((q, d)) => Err(CollectionError::MissingGrades {
            missing: missing.len(),
            first_qid: q.to_string(),
            first_docid: d.to_string(),
        }),
    }
}

/// Writes the adjudicated grades as a TREC qrels file, sorted by qid then
/// docid. Pooled documents that were never judged are simply absent.
pub fn export_qrels(
    adjudicated: &BTreeMap<(String, String), Grade>,
    path: impl AsRef<Path>,
) -> Result<Qrels, CollectionError> {
    if adjudicated.is_empty() {
        return Err(CollectionError::NothingToExport);
    }
    let qrels: Qrels = adjudicated
        .iter()
        .map(|((q, d), g)| (q.clone(), d.clone(), *g))
        .collect();
    let path = path.as_ref();
    qrels.write(path).map_err(|e| match e {
        EvalError::Io { source, .. } => CollectionError::io(path, source),
        other => CollectionError::Io { path: path.display().to_string(), source: std::io::Error::other(other.to_string()) },
    })?;
    Ok(qrels)
}

/// Reads `qid<TAB>docid<TAB>grade` lines of already adjudicated grades.
pub fn parse_adjudicated(text: &str) -> Result<BTreeMap<(String, String), Grade>, CollectionError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let err = |message: String| CollectionError::Parse { what: "grades", line: i + 1, message };
        let cols: Vec<&str> = raw.split('\t').collect();
        if cols.len() != 3 {
            return Err(err(format!("expected qid<TAB>docid<TAB>grade, found {} column(s)", cols.len())));
        }
        let grade = cols[2]
            .trim()
            .parse::<i64>()
            .ok()
            .and_then(Grade::new)
            .ok_or_else(|| err(format!("invalid grade {:?}", cols[2])))?;
        if out.insert((cols[0].to_string(), cols[1].to_string()), grade).is_some() {
            return Err(err(format!("pair {} {} graded twice", cols[0], cols[1])));
        }
    }
    Ok(out)
}
