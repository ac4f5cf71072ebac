//! TREC qrels: `qid 0 docid grade`.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::EvalError;

/// Graded relevance on the 0–3 scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u8")]
pub struct Grade(u8);

impl Grade {
    pub const MAX: u8 = 3;
    pub const NOT_RELEVANT: Grade = Grade(0);
    pub const ALL: [Grade; 4] = [Grade(0), Grade(1), Grade(2), Grade(3)];

    pub fn new(value: i64) -> Option<Self> {
        (0..=i64::from(Self::MAX)).contains(&value).then(|| Grade(value as u8))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Grade ≥ 1 counts as relevant for binary measures.
    pub fn is_relevant(self) -> bool {
        self.0 >= 1
    }
}

impl TryFrom<i64> for Grade {
    type Error = String;

    fn try_from(value: i64) -> Result<Self, Self::Error> {
        Grade::new(value).ok_or_else(|| format!("grade {value} outside 0..=3"))
    }
}

impl From<Grade> for u8 {
    fn from(g: Grade) -> u8 {
        g.0
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QrelsEntry<'a> {
    pub qid: &'a str,
    pub docid: &'a str,
    pub grade: Grade,
}

/// Judgments per topic, ordered by qid then docid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Qrels {
    topics: BTreeMap<String, BTreeMap<String, Grade>>,
}

impl Qrels {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false when the pair was already present (the grade is replaced).
    pub fn insert(&mut self, qid: impl Into<String>, docid: impl Into<String>, grade: Grade) -> bool {
        self.topics.entry(qid.into()).or_default().insert(docid.into(), grade).is_none()
    }

    pub fn len(&self) -> usize {
        self.topics.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn topic(&self, qid: &str) -> Option<&BTreeMap<String, Grade>> {
        self.topics.get(qid)
    }

    pub fn qids(&self) -> impl Iterator<Item = &str> {
        self.topics.keys().map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = QrelsEntry<'_>> {
        self.topics.iter().flat_map(|(qid, docs)| {
            docs.iter().map(move |(docid, grade)| QrelsEntry { qid, docid, grade: *grade })
        })
    }

    pub fn grade(&self, qid: &str, docid: &str) -> Option<Grade> {
        self.topics.get(qid)?.get(docid).copied()
    }

    pub fn to_trec(&self) -> String {
        let mut out = String::new();
        for e in self.entries() {
            out.push_str(&format!("{} 0 {} {}\n", e.qid, e.docid, e.grade));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, EvalError> {
        let mut qrels = Qrels::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let err = |message: String| EvalError::Parse { what: "qrels", line, message };
            let cols: Vec<&str> = raw.split_whitespace().collect();
            if cols.len() != 4 {
                return Err(err(format!("expected 4 columns, found {}", cols.len())));
            }
            let grade = cols[3]
                .parse::<i64>()
                .ok()
                .and_then(Grade::new)
                .ok_or_else(|| err(format!("invalid grade {:?} (expected 0..=3)", cols[3])))?;
            if !qrels.insert(cols[0], cols[2], grade) {
                return Err(err(format!("duplicate judgment for {} {}", cols[0], cols[2])));
            }
        }
        Ok(qrels)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, EvalError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|source| EvalError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), EvalError> {
        let path = path.as_ref();
        fs::write(path, self.to_trec())
            .map_err(|source| EvalError::Io { path: path.display().to_string(), source })
    }
}

impl FromIterator<(String, String, Grade)> for Qrels {
    fn from_iter<I: IntoIterator<Item = (String, String, Grade)>>(iter: I) -> Self {
        let mut q = Qrels::new();
        for (qid, docid, grade) in iter {
            q.insert(qid, docid, grade);
        }
        q
    }
}
