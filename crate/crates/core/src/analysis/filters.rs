use std::collections::{BTreeMap, BTreeSet};

use super::Token;

/// Canonical spelling of `term`, or `term` itself when it is not a known variant.
pub fn normalize_term(term: &str, rules: &BTreeMap<String, String>) -> String {
    rules.get(term).cloned().unwrap_or_else(|| term.to_string())
}

pub fn remove_stopwords(tokens: Vec<Token>, stopwords: &BTreeSet<String>) -> Vec<Token> {
    tokens.into_iter().filter(|t| !stopwords.contains(&t.text)).collect()
}

/// The abbreviation followed by its expansion terms; just the term when it is
/// not a registered abbreviation.
pub fn expand_abbreviation(term: &str, map: &BTreeMap<String, Vec<String>>) -> Vec<String> {
    expand(term, map)
}

/// The term followed by its equivalents.
pub fn expand_synonyms(term: &str, map: &BTreeMap<String, Vec<String>>) -> Vec<String> {
    expand(term, map)
}

fn expand(term: &str, map: &BTreeMap<String, Vec<String>>) -> Vec<String> {
    let mut out = vec![term.to_string()];
    if let Some(extra) = map.get(term) {
        out.extend(extra.iter().filter(|e| e.as_str() != term).cloned());
    }
    out
}

/// Applies an expansion to every token of a stream. Emitted terms share the
/// position of the token they came from.
pub(crate) fn expand_stream(
    tokens: Vec<Token>,
    map: &BTreeMap<String, Vec<String>>,
) -> Vec<Token> {
    let mut out = Vec::with_capacity(tokens.len());
    for token in tokens {
        match map.get(&token.text) {
            None => out.push(token),
            Some(_) => {
                let position = token.position;
                out.extend(expand(&token.text, map).into_iter().map(|t| Token::new(t, position)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::tokenize;

    fn map(entries: &[(&str, &[&str])]) -> BTreeMap<String, Vec<String>> {
        entries
            .iter()
            .map(|(k, v)| (k.to_string(), v.iter().map(|s| s.to_string()).collect()))
            .collect()
    }

    fn stopwords() -> BTreeSet<String> {
        ["no", "atu", "ne'e", "ne'ebé", "husi", "ha'u", "sira", "tanba"]
            .into_iter()
            .map(String::from)
            .collect()
    }

    fn texts(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.text.as_str()).collect()
    }

    #[test]
    fn normalization_examples() {
        let rules: BTreeMap<String, String> = [("junho", "juñu"), ("junu", "juñu")]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(normalize_term("junho", &rules), "juñu");
        assert_eq!(normalize_term("junu", &rules), "juñu");
        assert_eq!(normalize_term("governu", &rules), "governu");
        assert_eq!(normalize_term("juñu", &rules), "juñu");
    }

    #[test]
    fn stopword_examples() {
        let sw = stopwords();
        let kept = remove_stopwords(tokenize("ha'u bá uma"), &sw);
        assert_eq!(texts(&kept), ["bá", "uma"]);
        assert_eq!(kept.iter().map(|t| t.position).collect::<Vec<_>>(), [1, 2]);

        assert!(remove_stopwords(tokenize("no atu ne'e tanba"), &sw).is_empty());
        assert_eq!(texts(&remove_stopwords(tokenize("governu"), &sw)), ["governu"]);
    }

    #[test]
    fn abbreviation_examples() {
        let m = map(&[("rdtl", &["republika", "demokratika", "timor-leste"])]);
        assert_eq!(
            expand_abbreviation("rdtl", &m),
            ["rdtl", "republika", "demokratika", "timor-leste"]
        );
        assert_eq!(expand_abbreviation("governu", &m), ["governu"]);
    }

    #[test]
    fn expansions_share_source_position() {
        let m = map(&[("rdtl", &["republika", "demokratika", "timor-leste"])]);
        let out = expand_stream(tokenize("governu rdtl aprova"), &m);
        let pairs: Vec<(&str, u32)> = out.iter().map(|t| (t.text.as_str(), t.position)).collect();
        assert_eq!(
            pairs,
            [
                ("governu", 0),
                ("rdtl", 1),
                ("republika", 1),
                ("demokratika", 1),
                ("timor-leste", 1),
                ("aprova", 2)
            ]
        );
    }

    #[test]
    fn synonym_examples() {
        let m = map(&[
            ("subsidi", &["subsídiu"]),
            ("funsionario", &["funsionáriu"]),
            ("funsionáriu", &["funsionario"]),
        ]);
        assert_eq!(expand_synonyms("subsidi", &m), ["subsidi", "subsídiu"]);
        assert_eq!(expand_synonyms("uma", &m), ["uma"]);

        let a: BTreeSet<String> = expand_synonyms("funsionario", &m).into_iter().collect();
        let b: BTreeSet<String> = expand_synonyms("funsionáriu", &m).into_iter().collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
    }
}
