//! Inverted indexes over a field scheme.
//!
//! A scheme selects which document fields (title, lead, content) are analyzed
//! into one term stream. Positions are not kept; postings carry only term
//! frequencies, which is all BM25 needs.

mod format;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{analyze, AnalysisError, AnalyzerConfig, Lexicons, Token};

pub use format::{decode, encode, load_index, save_index, FORMAT_VERSION, MAGIC};

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("duplicate document id {0:?}")]
    DuplicateId(String),
    #[error("invalid document {id:?}: {reason}")]
    InvalidDocument { id: String, reason: String },
    #[error("unknown document id {0:?}")]
    UnknownDocument(String),
    #[error("unknown field scheme {0:?} (expected T, T+C, L+C or T+L+C)")]
    UnknownScheme(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt index at byte {offset}: {reason}")]
    Corrupt { offset: u64, reason: String },
    #[error("unsupported index format version {found} (this build reads version {supported})")]
    Version { found: u16, supported: u16 },
}

/// A news article.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub title: String,
    pub lead: String,
    pub content: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published_at: Option<String>,
}

impl Document {
    pub fn new(
        id: impl Into<String>,
        title: impl Into<String>,
        lead: impl Into<String>,
        content: impl Into<String>,
    ) -> Self {
        Self {
            id: id.into(),
            title: title.into(),
            lead: lead.into(),
            content: content.into(),
            url: None,
            published_at: None,
        }
    }

    pub fn field(&self, field: Field) -> &str {
        match field {
            Field::Title => &self.title,
            Field::Lead => &self.lead,
            Field::Content => &self.content,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Title,
    Lead,
    Content,
}

impl Field {
    pub const ALL: [Field; 3] = [Field::Title, Field::Lead, Field::Content];
}

/// Which fields are indexed together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldScheme {
    #[serde(rename = "T")]
    Title,
    #[serde(rename = "T+C")]
    TitleContent,
    #[serde(rename = "L+C")]
    LeadContent,
    #[serde(rename = "T+L+C")]
    TitleLeadContent,
}

impl FieldScheme {
    pub const ALL: [FieldScheme; 4] = [
        FieldScheme::Title,
        FieldScheme::TitleContent,
        FieldScheme::LeadContent,
        FieldScheme::TitleLeadContent,
    ];

    /// Fields in concatenation order.
    pub fn fields(&self) -> &'static [Field] {
        match self {
            FieldScheme::Title => &[Field::Title],
            FieldScheme::TitleContent => &[Field::Title, Field::Content],
            FieldScheme::LeadContent => &[Field::Lead, Field::Content],
            FieldScheme::TitleLeadContent => &[Field::Title, Field::Lead, Field::Content],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FieldScheme::Title => "T",
            FieldScheme::TitleContent => "T+C",
            FieldScheme::LeadContent => "L+C",
            FieldScheme::TitleLeadContent => "T+L+C",
        }
    }

    pub(crate) fn code(&self) -> u8 {
        match self {
            FieldScheme::Title => 1,
            FieldScheme::TitleContent => 2,
            FieldScheme::LeadContent => 3,
            FieldScheme::TitleLeadContent => 4,
        }
    }

    pub(crate) fn from_code(code: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.code() == code)
    }
}

impl fmt::Display for FieldScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FieldScheme {
    type Err = IndexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        Self::ALL
            .into_iter()
            .find(|scheme| scheme.name() == upper)
            .ok_or_else(|| IndexError::UnknownScheme(s.to_string()))
    }
}

/// Analyzes the scheme's fields of `doc` into one stream. Each field is
/// analyzed on its own so markup cannot leak across field boundaries;
/// positions continue from one field to the next.
pub fn analyze_document(
    doc: &Document,
    scheme: FieldScheme,
    config: &AnalyzerConfig,
    lexicons: &Lexicons,
) -> Vec<Token> {
    let mut out = Vec::new();
    let mut offset = 0u32;
    for field in scheme.fields() {
        let tokens = analyze(doc.field(*field), config, lexicons);
        let next = tokens.iter().map(|t| t.position + 1).max().unwrap_or(0);
        out.extend(tokens.into_iter().map(|t| Token::new(t.text, t.position + offset)));
        offset += next;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Posting {
    /// Internal document number.
    pub doc: u32,
    pub tf: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TermStats {
    /// Number of documents containing the term.
    pub df: u32,
    /// Total occurrences across the collection.
    pub ttf: u64,
}

/// Term → postings for one field scheme and analyzer.
#[derive(Debug, Clone)]
pub struct InvertedIndex {
    scheme: FieldScheme,
    analyzer_id: String,
    doc_ids: Vec<String>,
    doc_lengths: Vec<u32>,
    postings: BTreeMap<String, Vec<Posting>>,
    total_length: u64,
    lookup: HashMap<String, u32>,
}

impl PartialEq for InvertedIndex {
    fn eq(&self, other: &Self) -> bool {
        self.scheme == other.scheme
            && self.analyzer_id == other.analyzer_id
            && self.doc_ids == other.doc_ids
            && self.doc_lengths == other.doc_lengths
            && self.postings == other.postings
    }
}

impl InvertedIndex {
    pub(crate) fn from_parts(
        scheme: FieldScheme,
        analyzer_id: String,
        doc_ids: Vec<String>,
        doc_lengths: Vec<u32>,
        postings: BTreeMap<String, Vec<Posting>>,
    ) -> Self {
        let total_length = doc_lengths.iter().map(|&l| u64::from(l)).sum();
        let lookup = doc_ids.iter().enumerate().map(|(i, id)| (id.clone(), i as u32)).collect();
        Self { scheme, analyzer_id, doc_ids, doc_lengths, postings, total_length, lookup }
    }

    pub fn scheme(&self) -> FieldScheme {
        self.scheme
    }

    pub fn analyzer_id(&self) -> &str {
        &self.analyzer_id
    }

    pub fn analyzer_config(&self) -> Result<AnalyzerConfig, AnalysisError> {
        AnalyzerConfig::from_id(&self.analyzer_id)
    }

    pub fn doc_count(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn avg_doc_length(&self) -> f64 {
        if self.doc_ids.is_empty() {
            0.0
        } else {
            self.total_length as f64 / self.doc_ids.len() as f64
        }
    }

    /// External ids in internal-number order.
    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn doc_id(&self, doc: u32) -> &str {
        &self.doc_ids[doc as usize]
    }

    pub fn doc_number(&self, id: &str) -> Option<u32> {
        self.lookup.get(id).copied()
    }

    pub fn doc_length(&self, doc: u32) -> u32 {
        self.doc_lengths[doc as usize]
    }

    pub fn doc_length_of(&self, id: &str) -> Option<u32> {
        self.doc_number(id).map(|d| self.doc_length(d))
    }

    pub fn postings(&self, term: &str) -> &[Posting] {
        self.postings.get(term).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Term frequency of `term` in document number `doc`.
    pub fn tf(&self, term: &str, doc: u32) -> u32 {
        let list = self.postings(term);
        list.binary_search_by_key(&doc, |p| p.doc).map(|i| list[i].tf).unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &[Posting])> {
        self.postings.iter().map(|(t, p)| (t.as_str(), p.as_slice()))
    }

    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(String::as_str)
    }

    pub fn vocabulary_size(&self) -> usize {
        self.postings.len()
    }

    pub fn term_stats(&self, term: &str) -> TermStats {
        let list = self.postings(term);
        TermStats { df: list.len() as u32, ttf: list.iter().map(|p| u64::from(p.tf)).sum() }
    }

    /// Checks the structural invariants: postings sorted, tf ≥ 1, doc numbers
    /// in range, and per-document tf sums equal to stored lengths.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.doc_ids.len() != self.doc_lengths.len() {
            return Err("doc table and length table differ in size".into());
        }
        let mut sums = vec![0u64; self.doc_ids.len()];
        for (term, list) in &self.postings {
            if list.is_empty() {
                return Err(format!("term {term:?} has no postings"));
            }
            for (i, p) in list.iter().enumerate() {
                if p.tf == 0 {
                    return Err(format!("term {term:?} has a zero term frequency"));
                }
                if p.doc as usize >= sums.len() {
                    return Err(format!("term {term:?} points at unknown document {}", p.doc));
                }
                if i > 0 && list[i - 1].doc >= p.doc {
                    return Err(format!("postings of {term:?} are not strictly increasing"));
                }
                sums[p.doc as usize] += u64::from(p.tf);
            }
        }
        for (doc, (&len, sum)) in self.doc_lengths.iter().zip(&sums).enumerate() {
            if u64::from(len) != *sum {
                return Err(format!(
                    "document {:?} has length {len} but term frequencies sum to {sum}",
                    self.doc_ids[doc]
                ));
            }
        }
        Ok(())
    }
}

/// Analyzes and indexes every document of `corpus` under `scheme`.
///
/// Documents are analyzed in parallel; the merged index depends only on the
/// corpus order, so rebuilding yields an identical index.
pub fn build_index(
    corpus: &[Document],
    scheme: FieldScheme,
    config: &AnalyzerConfig,
    lexicons: &Lexicons,
) -> Result<InvertedIndex, IndexError> {
    config.validate()?;
    if corpus.is_empty() {
        return Err(IndexError::EmptyCorpus);
    }
    let mut seen = HashSet::with_capacity(corpus.len());
    for doc in corpus {
        if doc.id.is_empty() {
            return Err(IndexError::InvalidDocument { id: doc.id.clone(), reason: "empty id".into() });
        }
        if !seen.insert(doc.id.as_str()) {
            return Err(IndexError::DuplicateId(doc.id.clone()));
        }
    }

    let term_counts: Vec<BTreeMap<String, u32>> = corpus
        .par_iter()
        .map(|doc| {
            let mut counts = BTreeMap::new();
            for token in analyze_document(doc, scheme, config, lexicons) {
                *counts.entry(token.text).or_insert(0) += 1;
            }
            counts
        })
        .collect();

    let mut postings: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
    let mut doc_lengths = Vec::with_capacity(corpus.len());
    for (doc, counts) in term_counts.into_iter().enumerate() {
        doc_lengths.push(counts.values().sum());
        for (term, tf) in counts {
            postings.entry(term).or_default().push(Posting { doc: doc as u32, tf });
        }
    }

    let doc_ids = corpus.iter().map(|d| d.id.clone()).collect();
    let index = InvertedIndex::from_parts(scheme, config.id(), doc_ids, doc_lengths, postings);
    debug_assert!(index.check_invariants().is_ok());
    Ok(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::Preset;

    fn toy() -> Vec<Document> {
        vec![Document::new("d1", "uma uma", "", ""), Document::new("d2", "uma rai", "", "")]
    }

    fn build(corpus: &[Document], scheme: FieldScheme) -> InvertedIndex {
        build_index(corpus, scheme, &Preset::Default.config(), &Lexicons::bundled()).unwrap()
    }

    #[test]
    fn two_doc_postings() {
        let idx = build(&toy(), FieldScheme::Title);
        let uma: Vec<(&str, u32)> =
            idx.postings("uma").iter().map(|p| (idx.doc_id(p.doc), p.tf)).collect();
        assert_eq!(uma, [("d1", 2), ("d2", 1)]);
        let rai: Vec<(&str, u32)> =
            idx.postings("rai").iter().map(|p| (idx.doc_id(p.doc), p.tf)).collect();
        assert_eq!(rai, [("d2", 1)]);
        assert_eq!(idx.doc_count(), 2);
        // lengths are token counts (2 and 2), so the mean is 2.0
        assert_eq!(idx.doc_length_of("d1"), Some(2));
        assert_eq!(idx.doc_length_of("d2"), Some(2));
        assert_eq!(idx.avg_doc_length(), 2.0);
        assert_eq!(idx.vocabulary_size(), 2);
        idx.check_invariants().unwrap();
    }

    #[test]
    fn term_stats_examples() {
        let idx = build(&toy(), FieldScheme::Title);
        assert_eq!(idx.term_stats("uma"), TermStats { df: 2, ttf: 3 });
        assert_eq!(idx.term_stats("unseen"), TermStats::default());
        for (term, _) in idx.terms() {
            assert!(idx.term_stats(term).df as usize <= idx.doc_count());
        }
    }

    #[test]
    fn empty_content_matches_title_scheme() {
        let docs = vec![Document::new("d1", "Selebrasaun independénsia", "lead ida", "")];
        let t = build(&docs, FieldScheme::Title);
        let tc = build(&docs, FieldScheme::TitleContent);
        assert_eq!(t.postings, tc.postings);
        assert_eq!(t.doc_lengths, tc.doc_lengths);
    }

    #[test]
    fn rejects_duplicates_and_empty_corpus() {
        let mut docs = toy();
        docs.push(Document::new("d1", "x", "", ""));
        match build_index(&docs, FieldScheme::Title, &AnalyzerConfig::all(), &Lexicons::bundled()) {
            Err(IndexError::DuplicateId(id)) => assert_eq!(id, "d1"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            build_index(&[], FieldScheme::Title, &AnalyzerConfig::all(), &Lexicons::bundled()),
            Err(IndexError::EmptyCorpus)
        ));
    }

    #[test]
    fn rejects_invalid_config() {
        let mut config = AnalyzerConfig::all();
        config.tokenization = false;
        assert!(matches!(
            build_index(&toy(), FieldScheme::Title, &config, &Lexicons::bundled()),
            Err(IndexError::Analysis(_))
        ));
    }

    #[test]
    fn markup_does_not_leak_between_fields() {
        let docs = vec![Document::new("d1", "uma <b", "", "rai")];
        let idx = build(&docs, FieldScheme::TitleContent);
        assert_eq!(idx.term_stats("rai").df, 1);
    }

    #[test]
    fn scheme_parsing() {
        for s in FieldScheme::ALL {
            assert_eq!(s.name().parse::<FieldScheme>().unwrap(), s);
            assert_eq!(FieldScheme::from_code(s.code()), Some(s));
        }
        assert_eq!("t+l+c".parse::<FieldScheme>().unwrap(), FieldScheme::TitleLeadContent);
        assert!("L".parse::<FieldScheme>().is_err());
    }

    #[test]
    fn analyzer_id_recorded() {
        let idx = build_index(&toy(), FieldScheme::Title, &Preset::WithoutStemming.config(), &Lexicons::bundled())
            .unwrap();
        assert_eq!(idx.analyzer_id(), "without_stemming");
        assert_eq!(idx.analyzer_config().unwrap(), Preset::WithoutStemming.config());
    }
}
