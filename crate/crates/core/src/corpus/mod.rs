//! Loading and validating corpora (JSON lines) and topic files (TSV).

mod stats;
pub mod synth;

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::index::Document;
use crate::retrieval::Query;

pub use stats::{characterize, CorpusStats, FieldTokens, TermCount};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("no topics")]
    NoTopics,
    #[error("{what}: {} problem(s)\n{}", .diagnostics.len(), render(.diagnostics))]
    Invalid { what: &'static str, diagnostics: Vec<Diagnostic> },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn render(diagnostics: &[Diagnostic]) -> String {
    diagnostics.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n")
}

impl CorpusError {
    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            CorpusError::Invalid { diagnostics, .. } => diagnostics,
            _ => &[],
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CorpusError> {
    fs::read(path).map_err(|source| CorpusError::Io { path: path.display().to_string(), source })
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<Document>, CorpusError> {
    parse_corpus(&read(path.as_ref())?)
}

/// Parses a JSON-lines corpus. Every bad line is reported, not just the
/// first. Blank lines are skipped.
pub fn parse_corpus(bytes: &[u8]) -> Result<Vec<Document>, CorpusError> {
    let mut docs = Vec::new();
    let mut diagnostics = Vec::new();
    let mut first_seen: HashMap<String, usize> = HashMap::new();

    for (i, raw) in bytes.split(|b| *b == b'\n').enumerate() {
        let line = i + 1;
        let text = match std::str::from_utf8(raw) {
            Ok(t) => t.strip_suffix('\r').unwrap_or(t),
            Err(e) => {
                diagnostics.push(Diagnostic { line, message: format!("invalid UTF-8 at byte {}", e.valid_up_to()) });
                continue;
            }
        };
        if text.trim().is_empty() {
            continue;
        }
        match parse_document(text) {
            Ok(doc) => {
                if let Some(prev) = first_seen.get(&doc.id) {
                    diagnostics.push(Diagnostic {
                        line,
                        message: format!("duplicate id {:?} (first seen on line {prev})", doc.id),
                    });
                } else {
                    first_seen.insert(doc.id.clone(), line);
                    docs.push(doc);
                }
            }
            Err(messages) => diagnostics.extend(messages.into_iter().map(|message| Diagnostic { line, message })),
        }
    }

    if !diagnostics.is_empty() {
        return Err(CorpusError::Invalid { what: "corpus", diagnostics });
    }
    if docs.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    Ok(docs)
}

fn parse_document(text: &str) -> Result<Document, Vec<String>> {
    let obj: Map<String, Value> = match serde_json::from_str(text) {
        Ok(Value::Object(obj)) => obj,
        Ok(_) => return Err(vec!["expected a JSON object".into()]),
        Err(e) => return Err(vec![format!("invalid JSON: {e}")]),
    };
    let mut errors = Vec::new();
    let mut required = |key: &str| match obj.get(key) {
        Some(Value::String(s)) => s.clone(),
        Some(_) => {
            errors.push(format!("key {key:?} must be a string"));
            String::new()
        }
        None => {
            errors.push(format!("missing required key {key:?}"));
            String::new()
        }
    };
    let id = required("id");
    let title = required("title");
    let lead = required("lead");
    let content = required("content");
    if obj.contains_key("id") && id.trim().is_empty() && errors.is_empty() {
        errors.push("id must be non-empty".into());
    }

    let mut optional = |key: &str| match obj.get(key) {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => {
            errors.push(format!("key {key:?} must be a string"));
            None
        }
    };
    let url = optional("url");
    let published_at = optional("published_at");
    if let Some(date) = &published_at {
        if !is_iso_date(date) {
            errors.push(format!("published_at {date:?} is not an ISO-8601 date"));
        }
    }

    if errors.is_empty() {
        Ok(Document { id, title, lead, content, url, published_at })
    } else {
        Err(errors)
    }
}

fn is_iso_date(s: &str) -> bool {
    chrono::DateTime::parse_from_rfc3339(s).is_ok()
        || chrono::NaiveDate::parse_from_str(s, "%Y-%m-%d").is_ok()
        || chrono::NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S").is_ok()
}

/// One document per line, keys in a fixed order.
pub fn corpus_to_jsonl(docs: &[Document]) -> String {
    docs.iter().map(|d| serde_json::to_string(d).expect("document serializes") + "\n").collect()
}

/// The query set of an experiment, in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopicSet {
    topics: Vec<Query>,
}

impl TopicSet {
    pub fn new(topics: Vec<Query>) -> Result<Self, CorpusError> {
        let mut diagnostics = Vec::new();
        let mut seen = HashMap::new();
        for (i, q) in topics.iter().enumerate() {
            check_topic(q, i + 1, &mut seen, &mut diagnostics);
        }
        if !diagnostics.is_empty() {
            return Err(CorpusError::Invalid { what: "topics", diagnostics });
        }
        if topics.is_empty() {
            return Err(CorpusError::NoTopics);
        }
        Ok(Self { topics })
    }

    pub fn parse(text: &str) -> Result<Self, CorpusError> {
        let mut topics = Vec::new();
        let mut diagnostics = Vec::new();
        let mut seen = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let Some((qid, query)) = raw.split_once('\t') else {
                diagnostics.push(Diagnostic { line, message: "expected qid<TAB>query text".into() });
                continue;
            };
            let q = Query::new(qid.trim(), query.trim());
            if check_topic(&q, line, &mut seen, &mut diagnostics) {
                topics.push(q);
            }
        }
        if !diagnostics.is_empty() {
            return Err(CorpusError::Invalid { what: "topics", diagnostics });
        }
        if topics.is_empty() {
            return Err(CorpusError::NoTopics);
        }
        Ok(Self { topics })
    }

    pub fn queries(&self) -> &[Query] {
        &self.topics
    }

    pub fn into_queries(self) -> Vec<Query> {
        self.topics
    }

    pub fn len(&self) -> usize {
        self.topics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topics.is_empty()
    }

    pub fn get(&self, qid: &str) -> Option<&Query> {
        self.topics.iter().find(|q| q.qid == qid)
    }

    pub fn to_tsv(&self) -> String {
        self.topics.iter().map(|q| format!("{}\t{}\n", q.qid, q.text)).collect()
    }
}

fn check_topic(q: &Query, line: usize, seen: &mut HashMap<String, usize>, out: &mut Vec<Diagnostic>) -> bool {
    let mut ok = true;
    if q.qid.is_empty() {
        out.push(Diagnostic { line, message: "empty qid".into() });
        ok = false;
    } else if let Some(prev) = seen.get(&q.qid) {
        out.push(Diagnostic { line, message: format!("duplicate qid {:?} (first seen on line {prev})", q.qid) });
        ok = false;
    } else {
        seen.insert(q.qid.clone(), line);
    }
    if q.text.trim().is_empty() {
        out.push(Diagnostic { line, message: format!("topic {:?} has empty text", q.qid) });
        ok = false;
    }
    ok
}

pub fn load_topics(path: impl AsRef<Path>) -> Result<TopicSet, CorpusError> {
    let path = path.as_ref();
    let bytes = read(path)?;
    let text = String::from_utf8(bytes).map_err(|e| {
        let offset = e.utf8_error().valid_up_to();
        let line = e.as_bytes()[..offset].iter().filter(|b| **b == b'\n').count() + 1;
        CorpusError::Invalid {
            what: "topics",
            diagnostics: vec![Diagnostic { line, message: format!("invalid UTF-8 at byte {offset}") }],
        }
    })?;
    TopicSet::parse(&text)
}
