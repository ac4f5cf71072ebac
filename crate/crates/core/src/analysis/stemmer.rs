//! Light suffix-stripping stemmer for Tetun nominal derivations.

use super::lexicon::SuffixRule;

/// Strips the longest registered suffix, provided at least `min_stem_len`
/// characters remain. A hyphen directly before the suffix goes with it.
/// At most one suffix is removed; otherwise the term is returned unchanged.
pub fn stem(term: &str, rules: &[SuffixRule]) -> String {
    let best = rules
        .iter()
        .filter(|r| !r.suffix.is_empty() && term.ends_with(r.suffix.as_str()))
        .max_by_key(|r| r.suffix.chars().count());

    let Some(rule) = best else {
        return term.to_string();
    };
    let head = &term[..term.len() - rule.suffix.len()];
    let stem = head.strip_suffix('-').unwrap_or(head);
    if stem.chars().count() >= rule.min_stem_len {
        stem.to_string()
    } else {
        term.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::Lexicons;

    fn rules() -> Vec<SuffixRule> {
        Lexicons::bundled().stemmer_suffixes
    }

    #[test]
    fn four_suffix_families() {
        let r = rules();
        assert_eq!(stem("selebrasaun", &r), "selebra");
        assert_eq!(stem("juramentu", &r), "jura");
        assert_eq!(stem("lohidór", &r), "lohi");
        assert_eq!(stem("nauktén", &r), "nauk");
        assert_eq!(stem("naukteen", &r), "nauk");
        assert_eq!(stem("nauk-teen", &r), "nauk");
    }

    #[test]
    fn minimum_stem_length_guard() {
        let r = rules();
        assert_eq!(stem("saun", &r), "saun");
        assert_eq!(stem("basaun", &r), "basaun");
        assert_eq!(stem("-teen", &r), "-teen");
        assert_eq!(stem("abcsaun", &r), "abc");
    }

    #[test]
    fn non_matching_terms_unchanged() {
        let r = rules();
        assert_eq!(stem("governu", &r), "governu");
        assert_eq!(stem("dor", &r), "dor");
        assert_eq!(stem("", &r), "");
    }

    #[test]
    fn longest_suffix_wins() {
        let r = vec![SuffixRule::new("un", 1), SuffixRule::new("saun", 1)];
        assert_eq!(stem("edukasaun", &r), "eduka");
    }

    #[test]
    fn strips_only_once() {
        assert_eq!(stem("selebrasaunsaun", &rules()), "selebrasaun");
    }
}
