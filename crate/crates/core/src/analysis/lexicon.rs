//! Rule lists used by the analyzer.
//!
//! Every list is a small UTF-8 text file so the rules can grow without code
//! changes. Lines starting with `#` and blank lines are ignored.
//!
//! | file                | line format                          |
//! |---------------------|--------------------------------------|
//! | `stopwords.txt`     | `term`                               |
//! | `normalization.tsv` | `variant<TAB>canonical`              |
//! | `abbreviations.tsv` | `abbreviation<TAB>expansion phrase`  |
//! | `synonyms.tsv`      | `term<TAB>equivalent,equivalent,...` |
//! | `stemmer.tsv`       | `suffix<TAB>min-stem-length`         |

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use super::tokenizer::fold_case;
use super::AnalysisError;

pub const STOPWORDS_FILE: &str = "stopwords.txt";
pub const NORMALIZATION_FILE: &str = "normalization.tsv";
pub const ABBREVIATIONS_FILE: &str = "abbreviations.tsv";
pub const SYNONYMS_FILE: &str = "synonyms.tsv";
pub const STEMMER_FILE: &str = "stemmer.tsv";

const BUNDLED_STOPWORDS: &str = include_str!("../../lexicons/stopwords.txt");
const BUNDLED_NORMALIZATION: &str = include_str!("../../lexicons/normalization.tsv");
const BUNDLED_ABBREVIATIONS: &str = include_str!("../../lexicons/abbreviations.tsv");
const BUNDLED_SYNONYMS: &str = include_str!("../../lexicons/synonyms.tsv");
const BUNDLED_STEMMER: &str = include_str!("../../lexicons/stemmer.tsv");

/// A suffix the light stemmer may strip, with the minimum number of
/// characters that must remain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixRule {
    pub suffix: String,
    pub min_stem_len: usize,
}

impl SuffixRule {
    pub fn new(suffix: impl Into<String>, min_stem_len: usize) -> Self {
        Self { suffix: suffix.into(), min_stem_len }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicons {
    pub stopwords: BTreeSet<String>,
    /// variant → canonical form
    pub normalization: BTreeMap<String, String>,
    /// abbreviation → expansion terms
    pub abbreviations: BTreeMap<String, Vec<String>>,
    /// term → equivalent terms, in file order
    pub synonyms: BTreeMap<String, Vec<String>>,
    pub stemmer_suffixes: Vec<SuffixRule>,
}

impl Lexicons {
    /// The rule lists shipped with the crate.
    pub fn bundled() -> Self {
        Self::from_sources(
            BUNDLED_STOPWORDS,
            BUNDLED_NORMALIZATION,
            BUNDLED_ABBREVIATIONS,
            BUNDLED_SYNONYMS,
            BUNDLED_STEMMER,
        )
        .expect("bundled lexicons are valid")
    }

    /// Loads the five lexicon files from `dir`.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self, AnalysisError> {
        let dir = dir.as_ref();
        let read = |name: &str| {
            let path = dir.join(name);
            fs::read_to_string(&path).map_err(|source| AnalysisError::Io {
                path: path.display().to_string(),
                source,
            })
        };
        Self::from_sources(
            &read(STOPWORDS_FILE)?,
            &read(NORMALIZATION_FILE)?,
            &read(ABBREVIATIONS_FILE)?,
            &read(SYNONYMS_FILE)?,
            &read(STEMMER_FILE)?,
        )
    }

    /// Parses lexicons from file contents. Entries are case-folded so they
    /// match analyzer output.
    pub fn from_sources(
        stopwords: &str,
        normalization: &str,
        abbreviations: &str,
        synonyms: &str,
        stemmer: &str,
    ) -> Result<Self, AnalysisError> {
        let mut lex = Lexicons::default();

        for (_, line) in entries(stopwords) {
            lex.stopwords.insert(fold_case(line));
        }

        for (n, line) in entries(normalization) {
            let (variant, canonical) = split_pair(NORMALIZATION_FILE, n, line)?;
            lex.normalization.insert(fold_case(variant), fold_case(canonical));
        }
        for (variant, canonical) in &lex.normalization {
            if let Some(next) = lex.normalization.get(canonical) {
                if next != canonical {
                    return Err(AnalysisError::Lexicon {
                        file: NORMALIZATION_FILE.into(),
                        line: 0,
                        message: format!(
                            "canonical form {canonical:?} of {variant:?} is itself rewritten to {next:?}"
                        ),
                    });
                }
            }
        }

        for (n, line) in entries(abbreviations) {
            let (abbr, expansion) = split_pair(ABBREVIATIONS_FILE, n, line)?;
            let terms: Vec<String> = expansion.split_whitespace().map(fold_case).collect();
            lex.abbreviations.insert(fold_case(abbr), terms);
        }

        for (n, line) in entries(synonyms) {
            let (term, list) = split_pair(SYNONYMS_FILE, n, line)?;
            let term = fold_case(term);
            let slot = lex.synonyms.entry(term.clone()).or_default();
            for syn in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let syn = fold_case(syn);
                if syn != term && !slot.contains(&syn) {
                    slot.push(syn);
                }
            }
        }

        for (n, line) in entries(stemmer) {
            let (suffix, min) = split_pair(STEMMER_FILE, n, line)?;
            let min_stem_len = min.parse::<usize>().ok().filter(|m| *m >= 1).ok_or_else(|| {
                AnalysisError::Lexicon {
                    file: STEMMER_FILE.into(),
                    line: n,
                    message: format!("minimum stem length must be a positive integer, got {min:?}"),
                }
            })?;
            lex.stemmer_suffixes.push(SuffixRule::new(fold_case(suffix), min_stem_len));
        }

        Ok(lex)
    }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn entries(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

fn split_pair<'a>(file: &str, line: usize, text: &'a str) -> Result<(&'a str, &'a str), AnalysisError> {
    match text.split_once('\t') {
        Some((k, v)) if !k.trim().is_empty() && !v.trim().is_empty() => Ok((k.trim(), v.trim())),
        _ => Err(AnalysisError::Lexicon {
            file: file.into(),
            line,
            message: "expected two tab-separated columns".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE3: [&str; 8] = ["no", "atu", "ne'e", "ne'ebé", "husi", "ha'u", "sira", "tanba"];

    #[test]
    fn bundled_contains_table3_stopwords() {
        let lex = Lexicons::bundled();
        for w in TABLE3 {
            assert!(lex.stopwords.contains(w), "missing stopword {w}");
        }
        assert!(lex.stopwords.len() >= 100);
        // used as content words in examples
        for w in ["iha", "uma", "bá", "governu"] {
            assert!(!lex.stopwords.contains(w), "{w} must not be a stopword");
        }
    }

    #[test]
    fn bundled_stemmer_has_four_families() {
        let lex = Lexicons::bundled();
        let suffixes: Vec<&str> = lex.stemmer_suffixes.iter().map(|r| r.suffix.as_str()).collect();
        assert_eq!(suffixes, ["saun", "mentu", "dór", "teen", "tén"]);
        assert!(lex.stemmer_suffixes.iter().all(|r| r.min_stem_len == 3));
    }

    #[test]
    fn bundled_normalization_values_are_fixed_points() {
        let lex = Lexicons::bundled();
        assert_eq!(lex.normalization.get("junho").map(String::as_str), Some("juñu"));
        assert_eq!(lex.normalization.get("junu").map(String::as_str), Some("juñu"));
        for canonical in lex.normalization.values() {
            let again = lex.normalization.get(canonical).unwrap_or(canonical);
            assert_eq!(again, canonical);
        }
    }

    #[test]
    fn rejects_chained_normalization() {
        let err = Lexicons::from_sources("", "a\tb\nb\tc\n", "", "", "").unwrap_err();
        assert!(matches!(err, AnalysisError::Lexicon { .. }));
    }

    #[test]
    fn reports_bad_line_numbers() {
        let err = Lexicons::from_sources("", "", "# header\n\nrdtl\n", "", "").unwrap_err();
        match err {
            AnalysisError::Lexicon { file, line, .. } => {
                assert_eq!(file, ABBREVIATIONS_FILE);
                assert_eq!(line, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(Lexicons::from_sources("", "", "", "", "saun\tzero\n").is_err());
        assert!(Lexicons::from_sources("", "", "", "", "saun\t0\n").is_err());
    }

    #[test]
    fn entries_are_case_folded() {
        let lex = Lexicons::from_sources("Ha’u\n", "JUNHO\tJuñu\n", "RDTL\tRepublika Demokratika\n", "", "").unwrap();
        assert!(lex.stopwords.contains("ha'u"));
        assert_eq!(lex.normalization["junho"], "juñu");
        assert_eq!(lex.abbreviations["rdtl"], ["republika", "demokratika"]);
    }

    #[test]
    fn load_dir_reads_shipped_files() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/lexicons");
        assert_eq!(Lexicons::load_dir(dir).unwrap(), Lexicons::bundled());
        assert!(matches!(
            Lexicons::load_dir("/nonexistent/lexicons"),
            Err(AnalysisError::Io { .. })
        ));
    }
}
