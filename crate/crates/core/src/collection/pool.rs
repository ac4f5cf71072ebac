use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CollectionError;
use crate::retrieval::RunFile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolEntry {
    pub docid: String,
    pub best_score: f64,
}

/// Per topic, the distinct pooled documents ordered by best score
/// (descending), ties by ascending docid.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Pool {
    pub topics: BTreeMap<String, Vec<PoolEntry>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoolOutcome {
    pub pool: Pool,
    /// Sum over runs and topics of the entries taken at the pooling depth.
    pub entries_before_dedup: usize,
    /// The same count broken down by topic.
    pub topic_entries_before_dedup: BTreeMap<String, usize>,
    pub entries_after_dedup: usize,
    /// Topics missing from some runs.
    pub warnings: Vec<String>,
}

fn by_score(a: &PoolEntry, b: &PoolEntry) -> Ordering {
    b.best_score
        .partial_cmp(&a.best_score)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.docid.cmp(&b.docid))
}

/// Unions the top-`depth` documents of every run, per topic.
pub fn pool_runs(runs: &[RunFile], depth: usize) -> Result<PoolOutcome, CollectionError> {
    if depth == 0 {
        return Err(CollectionError::InvalidDepth);
    }
    let mut best: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    let mut before = 0;
    let mut per_topic: BTreeMap<String, usize> = BTreeMap::new();
    let mut run_topics: Vec<BTreeSet<&str>> = Vec::with_capacity(runs.len());

    for run in runs {
        let lists = run.ranked_lists();
        run_topics.push(lists.keys().copied().collect());
        let mut scores = std::collections::HashMap::new();
        for e in &run.entries {
            scores.insert((e.qid.as_str(), e.docid.as_str()), e.score);
        }
        for (qid, docs) in lists {
            let slot = best.entry(qid.to_string()).or_default();
            let counter = per_topic.entry(qid.to_string()).or_default();
            for docid in docs.into_iter().take(depth) {
                before += 1;
                *counter += 1;
                let score = scores[&(qid, docid)];
                slot.entry(docid.to_string())
                    .and_modify(|s| *s = s.max(score))
                    .or_insert(score);
            }
        }
    }

    let all_topics: BTreeSet<&str> = run_topics.iter().flatten().copied().collect();
    let mut warnings = Vec::new();
    for (run, topics) in runs.iter().zip(&run_topics) {
        for missing in all_topics.difference(topics) {
            warnings.push(format!("run {} has no results for topic {missing}", run.tag));
        }
    }

    let topics: BTreeMap<String, Vec<PoolEntry>> = best
        .into_iter()
        .map(|(qid, docs)| {
            let mut list: Vec<PoolEntry> =
                docs.into_iter().map(|(docid, best_score)| PoolEntry { docid, best_score }).collect();
            list.sort_by(by_score);
            (qid, list)
        })
        .collect();
    let after = topics.values().map(Vec::len).sum();
    Ok(PoolOutcome {
        pool: Pool { topics },
        entries_before_dedup: before,
        topic_entries_before_dedup: per_topic,
        entries_after_dedup: after,
        warnings,
    })
}

impl Pool {
    pub fn len(&self) -> usize {
        self.topics.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `qid<TAB>docid<TAB>best_score` lines in pool order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (qid, list) in &self.topics {
            for e in list {
                out.push_str(&format!("{qid}\t{}\t{:.6}\n", e.docid, e.best_score));
            }
        }
        out
    }

    pub fn parse_tsv(text: &str) -> Result<Self, CollectionError> {
        let mut topics: BTreeMap<String, Vec<PoolEntry>> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            if raw.trim().is_empty() {
                continue;
            }
            let err = |message: String| CollectionError::Parse { what: "pool", line: i + 1, message };
            let cols: Vec<&str> = raw.split('\t').collect();
            if cols.len() != 3 {
                return Err(err(format!("expected 3 tab-separated columns, found {}", cols.len())));
            }
            let best_score: f64 = cols[2]
                .trim()
                .parse()
                .map_err(|_| err(format!("invalid score {:?}", cols[2])))?;
            let list = topics.entry(cols[0].to_string()).or_default();
            if list.iter().any(|e| e.docid == cols[1]) {
                return Err(err(format!("document {} pooled twice for topic {}", cols[1], cols[0])));
            }
            list.push(PoolEntry { docid: cols[1].to_string(), best_score });
        }
        for list in topics.values_mut() {
            list.sort_by(by_score);
        }
        Ok(Pool { topics })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, CollectionError> {
        let path = path.as_ref();
        Self::parse_tsv(&fs::read_to_string(path).map_err(|e| CollectionError::io(path, e))?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), CollectionError> {
        let path = path.as_ref();
        fs::write(path, self.to_tsv()).map_err(|e| CollectionError::io(path, e))
    }
}

/// The documents each topic's evaluators will judge.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Candidates {
    /// qid → docids in selection order.
    pub topics: BTreeMap<String, Vec<String>>,
    /// Topics whose pool held fewer than the requested number of documents.
    pub short: Vec<String>,
}

/// The `per_query` best-scoring pooled documents of each topic.
pub fn select_judging_candidates(pool: &Pool, per_query: usize) -> Result<Candidates, CollectionError> {
    if per_query == 0 {
        return Err(CollectionError::InvalidPerQuery);
    }
    let mut out = Candidates::default();
    for (qid, list) in &pool.topics {
        if list.len() < per_query {
            out.short.push(qid.clone());
        }
        let mut sorted: Vec<&PoolEntry> = list.iter().collect();
        sorted.sort_by(|a, b| by_score(a, b));
        out.topics.insert(qid.clone(), sorted.into_iter().take(per_query).map(|e| e.docid.clone()).collect());
    }
    Ok(out)
}

impl Candidates {
    pub fn pair_count(&self) -> usize {
        self.topics.values().map(Vec::len).sum()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.topics
            .iter()
            .flat_map(|(q, docs)| docs.iter().map(move |d| (q.as_str(), d.as_str())))
    }

    pub fn contains(&self, qid: &str, docid: &str) -> bool {
        self.topics.get(qid).is_some_and(|d| d.iter().any(|x| x == docid))
    }

    /// `qid<TAB>docid` lines in selection order.
    pub fn to_tsv(&self) -> String {
        self.pairs().map(|(q, d)| format!("{q}\t{d}\n")).collect()
    }

    pub fn parse_tsv(text: &str) -> Result<Self, CollectionError> {
        let mut out = Candidates::default();
        for (i, raw) in text.lines().enumerate() {
            if raw.trim().is_empty() {
                continue;
            }
            let err = |message: String| CollectionError::Parse { what: "candidates", line: i + 1, message };
            let Some((qid, docid)) = raw.split_once('\t') else {
                return Err(err("expected qid<TAB>docid".into()));
            };
            if qid.is_empty() || docid.is_empty() || docid.contains('\t') {
                return Err(err("expected qid<TAB>docid".into()));
            }
            if out.contains(qid, docid) {
                return Err(err(format!("pair {qid} {docid} listed twice")));
            }
            out.topics.entry(qid.to_string()).or_default().push(docid.to_string());
        }
        Ok(out)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, CollectionError> {
        let path = path.as_ref();
        Self::parse_tsv(&fs::read_to_string(path).map_err(|e| CollectionError::io(path, e))?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), CollectionError> {
        let path = path.as_ref();
        fs::write(path, self.to_tsv()).map_err(|e| CollectionError::io(path, e))
    }
}
