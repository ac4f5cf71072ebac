use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analysis::{analyze, Lexicons, Preset};
use crate::index::{Document, Field};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FieldTokens {
    pub title: u64,
    pub lead: u64,
    pub content: u64,
}

impl FieldTokens {
    pub fn total(&self) -> u64 {
        self.title + self.lead + self.content
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermCount {
    pub term: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub preset: Preset,
    pub doc_count: usize,
    pub tokens: FieldTokens,
    pub total_tokens: u64,
    /// Documents whose field analyzes to no tokens at all.
    pub empty_fields: FieldTokens,
    pub vocabulary_size: usize,
    pub top_terms: Vec<TermCount>,
}

/// Token statistics of every field analyzed separately under `preset`.
/// `top_terms` is ordered by count, then term.
pub fn characterize(corpus: &[Document], preset: Preset, lexicons: &Lexicons, top_n: usize) -> CorpusStats {
    let config = preset.config();
    let mut tokens = FieldTokens::default();
    let mut empty = FieldTokens::default();
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();

    for doc in corpus {
        for field in [Field::Title, Field::Lead, Field::Content] {
            let terms = analyze(doc.field(field), &config, lexicons);
            let n = terms.len() as u64;
            let (slot, empty_slot) = match field {
                Field::Title => (&mut tokens.title, &mut empty.title),
                Field::Lead => (&mut tokens.lead, &mut empty.lead),
                Field::Content => (&mut tokens.content, &mut empty.content),
            };
            *slot += n;
            if n == 0 {
                *empty_slot += 1;
            }
            for t in terms {
                *counts.entry(t.text).or_insert(0) += 1;
            }
        }
    }

    let vocabulary_size = counts.len();
    let mut top: Vec<TermCount> = counts.into_iter().map(|(term, count)| TermCount { term, count }).collect();
    top.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.term.cmp(&b.term)));
    top.truncate(top_n);

    CorpusStats {
        preset,
        doc_count: corpus.len(),
        tokens,
        total_tokens: tokens.total(),
        empty_fields: empty,
        vocabulary_size,
        top_terms: top,
    }
}

impl CorpusStats {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let row = |out: &mut String, k: &str, v: String| out.push_str(&format!("{k:<20}{v:>12}\n"));
        row(&mut out, "preset", self.preset.name().to_string());
        row(&mut out, "documents", self.doc_count.to_string());
        row(&mut out, "title tokens", self.tokens.title.to_string());
        row(&mut out, "lead tokens", self.tokens.lead.to_string());
        row(&mut out, "content tokens", self.tokens.content.to_string());
        row(&mut out, "total tokens", self.total_tokens.to_string());
        row(&mut out, "empty titles", self.empty_fields.title.to_string());
        row(&mut out, "empty leads", self.empty_fields.lead.to_string());
        row(&mut out, "empty contents", self.empty_fields.content.to_string());
        row(&mut out, "vocabulary", self.vocabulary_size.to_string());
        if !self.top_terms.is_empty() {
            out.push_str("\ntop terms\n");
            for (i, t) in self.top_terms.iter().enumerate() {
                out.push_str(&format!("{:>4}  {:<24}{:>8}\n", i + 1, t.term, t.count));
            }
        }
        out
    }
}
