//! TREC run files: `qid Q0 docid rank score run_tag`, one entry per line.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEntry {
    pub qid: String,
    pub docid: String,
    /// 1-based.
    pub rank: u32,
    pub score: f64,
    pub run_tag: String,
}

impl RunEntry {
    /// The TREC line for this entry, without the newline.
    pub fn to_line(&self) -> String {
        format!("{} Q0 {} {} {:.6} {}", self.qid, self.docid, self.rank, self.score, self.run_tag)
    }
}

#[derive(Debug, Error)]
pub enum RunParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// A ranked result list for a topic set.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunFile {
    pub tag: String,
    pub entries: Vec<RunEntry>,
}

impl RunFile {
    pub fn new(tag: impl Into<String>, entries: Vec<RunEntry>) -> Self {
        Self { tag: tag.into(), entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_trec(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(out, "{}", e.to_line());
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        fs::write(path, self.to_trec())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, RunParseError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|source| RunParseError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    /// Parses TREC run text. Within each topic entries are re-sorted by rank,
    /// so line order does not matter. Topics keep their first-seen order.
    pub fn parse(text: &str) -> Result<Self, RunParseError> {
        let mut topics: Vec<(String, Vec<RunEntry>)> = Vec::new();
        let mut slot: BTreeMap<String, usize> = BTreeMap::new();
        let mut seen_docs: HashSet<(String, String)> = HashSet::new();
        let mut seen_ranks: HashSet<(String, u32)> = HashSet::new();
        let mut tag: Option<String> = None;

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| RunParseError::Line { line, message };
            if raw.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = raw.split_whitespace().collect();
            if cols.len() != 6 {
                return Err(err(format!("expected 6 columns, found {}", cols.len())));
            }
            let rank: u32 = cols[3]
                .parse()
                .ok()
                .filter(|r| *r >= 1)
                .ok_or_else(|| err(format!("invalid rank {:?}", cols[3])))?;
            let score: f64 = cols[4]
                .parse()
                .ok()
                .filter(|s: &f64| s.is_finite())
                .ok_or_else(|| err(format!("invalid score {:?}", cols[4])))?;
            let entry = RunEntry {
                qid: cols[0].to_string(),
                docid: cols[2].to_string(),
                rank,
                score,
                run_tag: cols[5].to_string(),
            };
            if !seen_docs.insert((entry.qid.clone(), entry.docid.clone())) {
                return Err(err(format!("document {} listed twice for topic {}", entry.docid, entry.qid)));
            }
            if !seen_ranks.insert((entry.qid.clone(), rank)) {
                return Err(err(format!("rank {rank} listed twice for topic {}", entry.qid)));
            }
            tag.get_or_insert_with(|| entry.run_tag.clone());
            let idx = *slot.entry(entry.qid.clone()).or_insert_with(|| {
                topics.push((entry.qid.clone(), Vec::new()));
                topics.len() - 1
            });
            topics[idx].1.push(entry);
        }

        let mut entries = Vec::new();
        for (_, mut list) in topics {
            list.sort_by_key(|e| e.rank);
            entries.extend(list);
        }
        Ok(Self { tag: tag.unwrap_or_default(), entries })
    }

    /// Ranked docids per topic.
    pub fn ranked_lists(&self) -> BTreeMap<&str, Vec<&str>> {
        let mut by_topic: BTreeMap<&str, Vec<&RunEntry>> = BTreeMap::new();
        for e in &self.entries {
            by_topic.entry(e.qid.as_str()).or_default().push(e);
        }
        by_topic
            .into_iter()
            .map(|(q, mut list)| {
                list.sort_by_key(|e| e.rank);
                (q, list.into_iter().map(|e| e.docid.as_str()).collect())
            })
            .collect()
    }

    /// Checks that, per `(run_tag, qid)`, ranks run 1..k without gaps, scores
    /// never increase with rank and no document repeats.
    pub fn check_ordering(&self) -> Result<(), String> {
        let mut groups: BTreeMap<(&str, &str), Vec<&RunEntry>> = BTreeMap::new();
        for e in &self.entries {
            groups.entry((e.run_tag.as_str(), e.qid.as_str())).or_default().push(e);
        }
        for ((tag, qid), mut list) in groups {
            list.sort_by_key(|e| e.rank);
            let mut docs = HashSet::new();
            for (i, e) in list.iter().enumerate() {
                if e.rank as usize != i + 1 {
                    return Err(format!("{tag}/{qid}: rank {} where {} expected", e.rank, i + 1));
                }
                if i > 0 && e.score > list[i - 1].score {
                    return Err(format!("{tag}/{qid}: score increases at rank {}", e.rank));
                }
                if !docs.insert(e.docid.as_str()) {
                    return Err(format!("{tag}/{qid}: document {} repeated", e.docid));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(qid: &str, docid: &str, rank: u32, score: f64) -> RunEntry {
        RunEntry { qid: qid.into(), docid: docid.into(), rank, score, run_tag: "default_T".into() }
    }

    #[test]
    fn line_format_is_exact() {
        let e = entry("q1", "doc42", 3, 1.5);
        assert_eq!(e.to_line(), "q1 Q0 doc42 3 1.500000 default_T");
        let run = RunFile::new("default_T", vec![entry("q1", "a", 1, 2.0), entry("q1", "b", 2, 0.1234567)]);
        assert_eq!(run.to_trec(), "q1 Q0 a 1 2.000000 default_T\nq1 Q0 b 2 0.123457 default_T\n");
    }

    #[test]
    fn parse_resorts_by_rank() {
        let text = "q1 Q0 b 2 0.5 r\nq2 Q0 x 1 3.0 r\nq1 Q0 a 1 0.9 r\n";
        let run = RunFile::parse(text).unwrap();
        assert_eq!(run.tag, "r");
        let lists = run.ranked_lists();
        assert_eq!(lists["q1"], ["a", "b"]);
        assert_eq!(lists["q2"], ["x"]);
        assert_eq!(run.entries[0].qid, "q1");
        assert_eq!(run.entries[0].rank, 1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        for (text, line) in [
            ("q1 Q0 a 1 0.5 r\nq1 Q0 b 2 r\n", 2),
            ("q1 Q0 a zero 0.5 r\n", 1),
            ("q1 Q0 a 0 0.5 r\n", 1),
            ("q1 Q0 a 1 NaN r\n", 1),
            ("q1 Q0 a 1 0.5 r\n\nq1 Q0 a 2 0.4 r\n", 3),
            ("q1 Q0 a 1 0.5 r\nq1 Q0 b 1 0.4 r\n", 2),
        ] {
            match RunFile::parse(text) {
                Err(RunParseError::Line { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn ordering_check() {
        assert!(RunFile::new("t", vec![entry("q", "a", 1, 2.0), entry("q", "b", 2, 2.0)]).check_ordering().is_ok());
        assert!(RunFile::new("t", vec![entry("q", "a", 1, 1.0), entry("q", "b", 2, 2.0)]).check_ordering().is_err());
        assert!(RunFile::new("t", vec![entry("q", "a", 1, 2.0), entry("q", "b", 3, 1.0)]).check_ordering().is_err());
        assert!(RunFile::new("t", vec![entry("q", "a", 1, 2.0), entry("q", "a", 2, 1.0)]).check_ordering().is_err());
    }
}
