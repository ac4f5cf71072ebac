//! Markup removal.

/// Elements whose content is never text.
const SKIP_ELEMENTS: [&str; 2] = ["script", "style"];

/// Tags that separate words even when written without surrounding spaces.
const BLOCK_TAGS: [&str; 14] = [
    "p", "br", "div", "li", "ul", "ol", "tr", "td", "th", "h1", "h2", "h3", "h4", "table",
];

/// Removes tags, comments, `<script>`/`<style>` bodies, and decodes entities.
/// Runs of whitespace collapse to a single space and the result is trimmed.
///
/// Malformed markup is handled best-effort: an unterminated `<` drops the rest
/// of the input as a tag, a `<` not followed by a tag-like character is kept
/// as text.
pub fn strip_html(raw: &str) -> String {
    let mut text = String::with_capacity(raw.len());
    let mut rest = raw;

    while let Some(lt) = rest.find('<') {
        text.push_str(&rest[..lt]);
        let after = &rest[lt + 1..];

        if let Some(comment) = after.strip_prefix("!--") {
            rest = match comment.find("-->") {
                Some(end) => &comment[end + 3..],
                None => "",
            };
            continue;
        }

        let starts_tag = after
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '/' || c == '!' || c == '?');
        if !starts_tag {
            text.push('<');
            rest = after;
            continue;
        }

        let Some(gt) = after.find('>') else {
            rest = "";
            break;
        };
        let tag = &after[..gt];
        rest = &after[gt + 1..];

        let name: String = tag
            .trim_start_matches('/')
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();

        if !tag.starts_with('/') && SKIP_ELEMENTS.contains(&name.as_str()) {
            let close = format!("</{name}");
            rest = match find_ascii_case_insensitive(rest, &close) {
                Some(pos) => match rest[pos..].find('>') {
                    Some(end) => &rest[pos + end + 1..],
                    None => "",
                },
                None => "",
            };
        }
        if BLOCK_TAGS.contains(&name.as_str()) {
            text.push(' ');
        }
    }
    text.push_str(rest);

    let decoded = html_escape::decode_html_entities(&text);
    collapse_whitespace(&decoded)
}

fn find_ascii_case_insensitive(haystack: &str, needle: &str) -> Option<usize> {
    let h = haystack.as_bytes();
    let n = needle.as_bytes();
    h.windows(n.len()).position(|w| w.eq_ignore_ascii_case(n))
}

pub(crate) fn collapse_whitespace(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for word in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn removes_tags() {
        assert_eq!(strip_html("<p>Governu aprova</p>"), "Governu aprova");
    }

    #[test]
    fn decodes_entities() {
        assert_eq!(strip_html("A &amp; B"), "A & B");
        assert_eq!(strip_html("ne&rsquo;e ju&ntilde;u &#233;"), "ne\u{2019}e juñu é");
    }

    #[test]
    fn tag_free_input_unchanged() {
        assert_eq!(strip_html("plain text"), "plain text");
    }

    #[test]
    fn collapses_whitespace() {
        assert_eq!(strip_html("  a\n\t b  "), "a b");
        assert_eq!(strip_html("<p>uma</p><p>rai</p>"), "uma rai");
        assert_eq!(strip_html("a<br/>b"), "a b");
    }

    #[test]
    fn drops_script_style_and_comments() {
        assert_eq!(
            strip_html("a<script type='x'>var x = '<b>';</script>b<STYLE>p{}</STYLE>c<!-- hidden -->d"),
            "abcd"
        );
    }

    #[test]
    fn malformed_markup_is_best_effort() {
        assert_eq!(strip_html("1 < 2 and 3 > 2"), "1 < 2 and 3 > 2");
        assert_eq!(strip_html("text <b unterminated"), "text");
        assert_eq!(strip_html("<!-- never closed"), "");
        assert_eq!(strip_html("<script>no end"), "");
        assert_eq!(strip_html(""), "");
    }
}
