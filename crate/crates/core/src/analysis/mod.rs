//! Text analysis pipeline.
//!
//! [`analyze`] runs the enabled stages in a fixed order:
//!
//! 1. HTML removal
//! 2. case folding
//! 3. tokenization
//! 4. text normalization
//! 5. stopword removal
//! 6. abbreviation expansion
//! 7. synonym expansion
//! 8. light stemming
//!
//! Stopwords are removed before expansion so they are never expanded, and
//! stemming runs last so expansion terms are stemmed too.

mod config;
mod filters;
mod html;
mod lexicon;
mod stemmer;
mod tokenizer;

use thiserror::Error;

pub use config::{AnalyzerConfig, Preset};
pub use filters::{expand_abbreviation, expand_synonyms, normalize_term, remove_stopwords};
pub use html::strip_html;
pub use lexicon::{
    Lexicons, SuffixRule, ABBREVIATIONS_FILE, NORMALIZATION_FILE, STEMMER_FILE, STOPWORDS_FILE,
    SYNONYMS_FILE,
};
pub use stemmer::stem;
pub use tokenizer::{fold_case, tokenize, Token};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("invalid analyzer configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown analyzer {0:?}")]
    UnknownAnalyzer(String),
    #[error("{file}:{line}: {message}")]
    Lexicon { file: String, line: usize, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Turns raw text into index terms.
///
/// Disabled stages are the identity. With tokenization off the whole
/// (trimmed) text is a single token; [`AnalyzerConfig::validate`] rejects
/// configurations that combine that with token-level stages.
pub fn analyze(text: &str, config: &AnalyzerConfig, lexicons: &Lexicons) -> Vec<Token> {
    let text = if config.html_removal { strip_html(text) } else { text.to_string() };
    let text = if config.case_folding { fold_case(&text) } else { text };

    let mut tokens = if config.tokenization {
        tokenize(&text)
    } else if text.trim().is_empty() {
        Vec::new()
    } else {
        vec![Token::new(text.trim(), 0)]
    };

    if config.text_normalization {
        for t in &mut tokens {
            t.text = normalize_term(&t.text, &lexicons.normalization);
        }
    }
    if config.stopword_removal {
        tokens = remove_stopwords(tokens, &lexicons.stopwords);
    }
    if config.abbreviation_expansion {
        tokens = filters::expand_stream(tokens, &lexicons.abbreviations);
    }
    if config.synonym_expansion {
        tokens = filters::expand_stream(tokens, &lexicons.synonyms);
    }
    if config.light_stemming {
        for t in &mut tokens {
            t.text = stem(&t.text, &lexicons.stemmer_suffixes);
        }
    }
    tokens
}

/// Term texts only, in stream order.
pub fn analyze_terms(text: &str, config: &AnalyzerConfig, lexicons: &Lexicons) -> Vec<String> {
    analyze(text, config, lexicons).into_iter().map(|t| t.text).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms(text: &str, preset: Preset) -> Vec<String> {
        analyze_terms(text, &preset.config(), &Lexicons::bundled())
    }

    #[test]
    fn composed_pipeline_examples() {
        let input = "<b>Selebrasaun</b> iha junho";
        assert_eq!(terms(input, Preset::Default), ["selebra", "iha", "juñu"]);
        assert_eq!(terms(input, Preset::WithoutStemming), ["selebrasaun", "iha", "juñu"]);
        assert_eq!(terms(input, Preset::WithStopwords), ["selebra", "iha", "juñu"]);
    }

    #[test]
    fn empty_text() {
        for p in Preset::ALL {
            assert!(terms("", p).is_empty());
        }
    }

    #[test]
    fn stopwords_only_under_default() {
        let input = "no atu ne'e ne'ebé husi ha'u sira tanba";
        assert!(terms(input, Preset::Default).is_empty());
        assert_eq!(terms(input, Preset::WithStopwords).len(), 8);
    }

    #[test]
    fn typographic_apostrophe_matches_stopword() {
        assert!(terms("Ha’u", Preset::Default).is_empty());
    }

    #[test]
    fn expansions_are_stemmed() {
        let lex = Lexicons::from_sources("", "", "ps\tpartidu selebrasaun\n", "", "saun\t3\n").unwrap();
        let out = analyze("PS", &AnalyzerConfig::all(), &lex);
        let pairs: Vec<(&str, u32)> = out.iter().map(|t| (t.text.as_str(), t.position)).collect();
        assert_eq!(pairs, [("ps", 0), ("partidu", 0), ("selebra", 0)]);
    }

    #[test]
    fn stopwords_are_not_expanded() {
        let lex = Lexicons::from_sources("ne'e\n", "", "ne'e\tida-ne'e\n", "", "").unwrap();
        assert!(analyze("ne'e", &AnalyzerConfig::all(), &lex).is_empty());
    }

    #[test]
    fn without_tokenization_text_is_one_token() {
        let config = AnalyzerConfig {
            html_removal: true,
            case_folding: true,
            tokenization: false,
            text_normalization: false,
            stopword_removal: false,
            abbreviation_expansion: false,
            synonym_expansion: false,
            light_stemming: false,
        };
        let out = analyze_terms("<i>Uma  Rai</i>", &config, &Lexicons::bundled());
        assert_eq!(out, ["uma rai"]);
    }

    #[test]
    fn fig1_query_under_default() {
        let out = terms("opiniaun ba subsidi governu ba funsionario publiko", Preset::Default);
        assert_eq!(
            out,
            ["opiniaun", "opini", "subsidi", "subsídiu", "governu", "funsionáriu", "públiku"]
        );
    }
}
