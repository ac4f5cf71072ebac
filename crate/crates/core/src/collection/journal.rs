//! Append-only judgment journal (JSON lines).
//!
//! Each line is one submission `{qid, docid, evaluator_id, grade, timestamp}`.
//! Replaying the file keeps, for every (qid, docid, evaluator) key, the last
//! submission in file order.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CollectionError;
use crate::evaluation::Grade;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Judgment {
    pub qid: String,
    pub docid: String,
    pub evaluator_id: String,
    pub grade: Grade,
    /// ISO-8601.
    pub timestamp: String,
}

pub type JudgmentKey = (String, String, String);

impl Judgment {
    pub fn key(&self) -> JudgmentKey {
        (self.qid.clone(), self.docid.clone(), self.evaluator_id.clone())
    }
}

/// Latest judgment per (qid, docid, evaluator) from journal text.
pub fn replay(text: &str) -> Result<BTreeMap<JudgmentKey, Judgment>, CollectionError> {
    let mut latest = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let j = parse_line(raw).map_err(|message| CollectionError::Parse { what: "journal", line: i + 1, message })?;
        latest.insert(j.key(), j);
    }
    Ok(latest)
}

fn parse_line(raw: &str) -> Result<Judgment, String> {
    let j: Judgment = serde_json::from_str(raw).map_err(|e| e.to_string())?;
    if j.qid.is_empty() || j.docid.is_empty() || j.evaluator_id.is_empty() {
        return Err("qid, docid and evaluator_id must be non-empty".into());
    }
    chrono::DateTime::parse_from_rfc3339(&j.timestamp)
        .map_err(|e| format!("timestamp {:?} is not ISO-8601: {e}", j.timestamp))?;
    Ok(j)
}

pub fn read_journal(path: impl AsRef<Path>) -> Result<BTreeMap<JudgmentKey, Judgment>, CollectionError> {
    let path = path.as_ref();
    replay(&fs::read_to_string(path).map_err(|e| CollectionError::io(path, e))?)
}

/// An open journal. Callers sharing one across threads must serialize
/// [`Journal::append`] (e.g. behind a mutex).
#[derive(Debug)]
pub struct Journal {
    path: PathBuf,
    file: File,
    latest: BTreeMap<JudgmentKey, Judgment>,
    lines: usize,
}

impl Journal {
    /// Opens `path` for appending, creating it if needed, and replays it.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, CollectionError> {
        let path = path.as_ref().to_path_buf();
        let (latest, lines) = if path.exists() {
            let text = fs::read_to_string(&path).map_err(|e| CollectionError::io(&path, e))?;
            (replay(&text)?, text.lines().filter(|l| !l.trim().is_empty()).count())
        } else {
            (BTreeMap::new(), 0)
        };
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| CollectionError::io(&path, e))?;
        Ok(Self { path, file, latest, lines })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&mut self, judgment: Judgment) -> Result<(), CollectionError> {
        let mut line = serde_json::to_string(&judgment).expect("judgment serializes");
        line.push('\n');
        self.file
            .write_all(line.as_bytes())
            .and_then(|_| self.file.flush())
            .map_err(|e| CollectionError::io(&self.path, e))?;
        self.lines += 1;
        self.latest.insert(judgment.key(), judgment);
        Ok(())
    }

    /// Number of submissions written, including overwritten ones.
    pub fn line_count(&self) -> usize {
        self.lines
    }

    pub fn latest(&self) -> &BTreeMap<JudgmentKey, Judgment> {
        &self.latest
    }

    pub fn get(&self, qid: &str, docid: &str, evaluator: &str) -> Option<&Judgment> {
        self.latest.get(&(qid.to_string(), docid.to_string(), evaluator.to_string()))
    }
}
