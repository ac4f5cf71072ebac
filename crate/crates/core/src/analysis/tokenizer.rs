use serde::{Deserialize, Serialize};

/// A term at an ordinal position of the analyzed text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub position: u32,
}

impl Token {
    pub fn new(text: impl Into<String>, position: u32) -> Self {
        Self { text: text.into(), position }
    }
}

const RIGHT_SINGLE_QUOTE: char = '\u{2019}';

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == RIGHT_SINGLE_QUOTE
}

fn is_word_char(c: char) -> bool {
    // combining diacritics keep decomposed letters (e + U+0301) in one token
    c.is_alphanumeric() || ('\u{0300}'..='\u{036F}').contains(&c)
}

/// Unicode lowercasing. Typographic apostrophes become ASCII `'` so that
/// `ne’e` and `ne'e` fold to the same term.
pub fn fold_case(term: &str) -> String {
    term.chars()
        .flat_map(char::to_lowercase)
        .map(|c| if c == RIGHT_SINGLE_QUOTE { '\'' } else { c })
        .collect()
}

/// Splits on whitespace and punctuation. Apostrophes and hyphens survive
/// when they sit between two word characters (`ha'u`, `nauk-teen`).
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();

    for (i, &c) in chars.iter().enumerate() {
        let joins = if is_word_char(c) {
            true
        } else if is_apostrophe(c) || c == '-' {
            !current.is_empty() && chars.get(i + 1).copied().is_some_and(is_word_char)
        } else {
            false
        };

        if joins {
            current.push(c);
        } else if !current.is_empty() {
            let position = tokens.len() as u32;
            tokens.push(Token::new(std::mem::take(&mut current), position));
        }
    }
    if !current.is_empty() {
        let position = tokens.len() as u32;
        tokens.push(Token::new(current, position));
    }
    tokens
}
