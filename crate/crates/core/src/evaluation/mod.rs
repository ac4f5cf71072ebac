//! trec_eval-compatible effectiveness measures.
//!
//! Binary measures (P@k, AP) treat grade ≥ 1 as relevant; nDCG uses the
//! grade itself as gain with a `log2(rank + 1)` discount. Topics without any
//! relevant judgment are left out of the means, as trec_eval does.

mod qrels;
mod report;

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::retrieval::RunFile;

pub use qrels::{Grade, Qrels, QrelsEntry};
pub use report::{render_matrix, render_matrix_json, MatrixCell};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{what} line {line}: {message}")]
    Parse { what: &'static str, line: usize, message: String },
    #[error("run and qrels share no topic")]
    NoSharedTopics,
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid report: {0}")]
    Report(String),
}

/// Fraction of the first `k` ranks holding a relevant document. Missing ranks
/// count as non-relevant.
pub fn precision_at_k(ranked: &[&str], relevant: &HashSet<&str>, k: usize) -> f64 {
    assert!(k >= 1, "precision cutoff must be at least 1");
    let hits = ranked.iter().take(k).filter(|d| relevant.contains(*d)).count();
    hits as f64 / k as f64
}

/// Mean over all relevant documents of the precision at their rank;
/// unretrieved relevant documents contribute zero.
pub fn average_precision(ranked: &[&str], relevant: &HashSet<&str>) -> f64 {
    if relevant.is_empty() {
        return 0.0;
    }
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (i, doc) in ranked.iter().enumerate() {
        if relevant.contains(doc) {
            hits += 1;
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    sum / relevant.len() as f64
}

fn dcg(gains: impl Iterator<Item = u8>) -> f64 {
    gains
        .enumerate()
        .map(|(i, g)| f64::from(g) / ((i + 2) as f64).log2())
        .sum()
}

/// Normalized DCG over the whole ranked list, or its first `depth` ranks.
/// Zero when no document has a positive grade.
pub fn ndcg(ranked: &[&str], graded: &HashMap<&str, Grade>, depth: Option<usize>) -> f64 {
    let depth = depth.unwrap_or(usize::MAX);
    let actual = dcg(ranked
        .iter()
        .take(depth)
        .map(|d| graded.get(d).map_or(0, |g| g.value())));

    let mut ideal: Vec<u8> = graded.values().map(|g| g.value()).filter(|g| *g > 0).collect();
    ideal.sort_unstable_by(|a, b| b.cmp(a));
    let ideal = dcg(ideal.into_iter().take(depth));

    if ideal == 0.0 {
        0.0
    } else {
        actual / ideal
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicMetrics {
    pub qid: String,
    pub ap: f64,
    pub p5: f64,
    pub p10: f64,
    pub ndcg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MeanMetrics {
    pub map: f64,
    pub p5: f64,
    pub p10: f64,
    pub ndcg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub run_tag: String,
    pub topics: Vec<TopicMetrics>,
    pub means: MeanMetrics,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalOptions {
    /// Rank cutoff for nDCG; `None` evaluates the full list.
    pub ndcg_depth: Option<usize>,
}

/// Scores `run` against `qrels`.
///
/// Every qrels topic with at least one relevant document is evaluated (an
/// absent run topic scores zero); run topics missing from the qrels are
/// ignored.
pub fn evaluate(run: &RunFile, qrels: &Qrels, options: &EvalOptions) -> Result<EvalReport, EvalError> {
    let lists = run.ranked_lists();
    if !qrels.qids().any(|q| lists.contains_key(q)) {
        return Err(EvalError::NoSharedTopics);
    }

    let mut topics = Vec::new();
    for qid in qrels.qids() {
        let judged = qrels.topic(qid).expect("qid comes from qrels");
        let graded: HashMap<&str, Grade> = judged.iter().map(|(d, g)| (d.as_str(), *g)).collect();
        let relevant: HashSet<&str> =
            graded.iter().filter(|(_, g)| g.is_relevant()).map(|(d, _)| *d).collect();
        if relevant.is_empty() {
            continue;
        }
        let ranked: &[&str] = lists.get(qid).map(Vec::as_slice).unwrap_or(&[]);
        topics.push(TopicMetrics {
            qid: qid.to_string(),
            ap: average_precision(ranked, &relevant),
            p5: precision_at_k(ranked, &relevant, 5),
            p10: precision_at_k(ranked, &relevant, 10),
            ndcg: ndcg(ranked, &graded, options.ndcg_depth),
        });
    }

    let n = topics.len() as f64;
    let mean = |f: fn(&TopicMetrics) -> f64| if topics.is_empty() { 0.0 } else { topics.iter().map(f).sum::<f64>() / n };
    let means = MeanMetrics {
        map: mean(|t| t.ap),
        p5: mean(|t| t.p5),
        p10: mean(|t| t.p10),
        ndcg: mean(|t| t.ndcg),
    };
    Ok(EvalReport { run_tag: run.tag.clone(), topics, means })
}

impl EvalReport {
    /// Aligned per-topic table followed by the means.
    pub fn to_text(&self) -> String {
        let width = self.topics.iter().map(|t| t.qid.len()).max().unwrap_or(0).max(4);
        let mut out = format!("run: {}\n", self.run_tag);
        out.push_str(&format!("{:<width$}  {:>6}  {:>6}  {:>6}  {:>6}\n", "qid", "AP", "P@5", "P@10", "nDCG"));
        for t in &self.topics {
            out.push_str(&format!(
                "{:<width$}  {:>6.4}  {:>6.4}  {:>6.4}  {:>6.4}\n",
                t.qid, t.ap, t.p5, t.p10, t.ndcg
            ));
        }
        let m = &self.means;
        out.push_str(&format!(
            "{:<width$}  {:>6.4}  {:>6.4}  {:>6.4}  {:>6.4}\n",
            "all", m.map, m.p5, m.p10, m.ndcg
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, EvalError> {
        serde_json::from_str(text).map_err(|e| EvalError::Report(e.to_string()))
    }
}
