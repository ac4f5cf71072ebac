//! BM25 ranking and the preset × scheme experiment grid.

mod grid;
mod run;

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{analyze_terms, AnalysisError, AnalyzerConfig, Lexicons};
use crate::index::{IndexError, InvertedIndex};

pub use grid::{run_grid, run_tag, write_runs, GridError, StrategyGrid, DEFAULT_RUN_DEPTH};
pub use run::{RunEntry, RunFile, RunParseError};

#[derive(Debug, Error)]
pub enum RetrievalError {
    #[error("unknown document id {0:?}")]
    UnknownDocument(String),
    #[error("cutoff k must be at least 1")]
    InvalidCutoff,
    #[error("query analyzer {query:?} does not match index analyzer {index:?}")]
    AnalyzerMismatch { index: String, query: String },
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Index(#[from] IndexError),
}

/// A topic from the query log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub qid: String,
    pub text: String,
}

impl Query {
    pub fn new(qid: impl Into<String>, text: impl Into<String>) -> Self {
        Self { qid: qid.into(), text: text.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Self { k1: 1.2, b: 0.75 }
    }
}

impl Bm25Params {
    /// `ln(1 + (N − df + 0.5) / (df + 0.5))`, always positive.
    pub fn idf(&self, doc_count: usize, df: u32) -> f64 {
        let n = doc_count as f64;
        let df = f64::from(df);
        (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
    }

    /// Saturated, length-normalized term frequency.
    pub fn tf_weight(&self, tf: u32, doc_len: u32, avg_len: f64) -> f64 {
        let tf = f64::from(tf);
        let norm = 1.0 - self.b + self.b * f64::from(doc_len) / avg_len;
        tf * (self.k1 + 1.0) / (tf + self.k1 * norm)
    }
}

/// BM25 score of one document for an already analyzed query. Repeated query
/// terms contribute once per occurrence.
pub fn score_bm25(
    index: &InvertedIndex,
    query_terms: &[String],
    docid: &str,
    params: &Bm25Params,
) -> Result<f64, RetrievalError> {
    let doc = index
        .doc_number(docid)
        .ok_or_else(|| RetrievalError::UnknownDocument(docid.to_string()))?;
    let len = index.doc_length(doc);
    let avg = index.avg_doc_length();
    let mut score = 0.0;
    for term in query_terms {
        let tf = index.tf(term, doc);
        if tf > 0 {
            score += params.idf(index.doc_count(), index.term_stats(term).df)
                * params.tf_weight(tf, len, avg);
        }
    }
    Ok(score)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Ok,
    /// The query had no terms left after analysis.
    EmptyQuery,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResults {
    pub status: SearchStatus,
    pub query_terms: Vec<String>,
    pub entries: Vec<RunEntry>,
}

/// Top-`k` documents for `query`, by descending BM25 score with ties broken
/// by ascending document id. Documents sharing no term with the query are
/// never returned.
///
/// The query is analyzed with `config`, which must be the analyzer the index
/// was built with. Entries are tagged `<analyzer>_<scheme>`.
pub fn search(
    index: &InvertedIndex,
    query: &Query,
    config: &AnalyzerConfig,
    lexicons: &Lexicons,
    k: usize,
    params: &Bm25Params,
) -> Result<SearchResults, RetrievalError> {
    if k == 0 {
        return Err(RetrievalError::InvalidCutoff);
    }
    config.validate()?;
    if config.id() != index.analyzer_id() {
        return Err(RetrievalError::AnalyzerMismatch {
            index: index.analyzer_id().to_string(),
            query: config.id(),
        });
    }

    let terms = analyze_terms(&query.text, config, lexicons);
    if terms.is_empty() {
        return Ok(SearchResults { status: SearchStatus::EmptyQuery, query_terms: terms, entries: vec![] });
    }

    let ranked = rank(index, &terms, params);
    let tag = run_tag(index.analyzer_id(), index.scheme());
    let entries = ranked
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(i, (doc, score))| RunEntry {
            qid: query.qid.clone(),
            docid: index.doc_id(doc).to_string(),
            rank: i as u32 + 1,
            score,
            run_tag: tag.clone(),
        })
        .collect();
    Ok(SearchResults { status: SearchStatus::Ok, query_terms: terms, entries })
}

/// Every matching document with its score, best first.
fn rank(index: &InvertedIndex, terms: &[String], params: &Bm25Params) -> Vec<(u32, f64)> {
    let avg = index.avg_doc_length();
    let mut acc: HashMap<u32, f64> = HashMap::new();
    for term in terms {
        let postings = index.postings(term);
        if postings.is_empty() {
            continue;
        }
        let idf = params.idf(index.doc_count(), postings.len() as u32);
        for p in postings {
            *acc.entry(p.doc).or_insert(0.0) += idf * params.tf_weight(p.tf, index.doc_length(p.doc), avg);
        }
    }
    let mut ranked: Vec<(u32, f64)> = acc.into_iter().filter(|(_, s)| *s > 0.0).collect();
    ranked.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then_with(|| index.doc_id(a.0).cmp(index.doc_id(b.0)))
    });
    ranked
}
