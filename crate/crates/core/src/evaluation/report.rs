//! Preset × scheme summary matrix over a set of run reports.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{EvalError, EvalReport, MeanMetrics};
use crate::analysis::Preset;
use crate::index::FieldScheme;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixCell {
    pub preset: Preset,
    pub scheme: FieldScheme,
    #[serde(flatten)]
    pub means: Option<MeanMetrics>,
}

fn parse_tag(tag: &str) -> Option<(Preset, FieldScheme)> {
    let (preset, scheme) = tag.rsplit_once('_')?;
    Some((preset.parse().ok()?, scheme.parse().ok()?))
}

fn cells(reports: &[EvalReport]) -> Result<Vec<MatrixCell>, EvalError> {
    let mut by_strategy: BTreeMap<(Preset, FieldScheme), MeanMetrics> = BTreeMap::new();
    for r in reports {
        let key = parse_tag(&r.run_tag)
            .ok_or_else(|| EvalError::Report(format!("run tag {:?} is not <preset>_<scheme>", r.run_tag)))?;
        if by_strategy.insert(key, r.means).is_some() {
            return Err(EvalError::Report(format!("run tag {:?} appears twice", r.run_tag)));
        }
    }
    Ok(Preset::ALL
        .iter()
        .flat_map(|p| FieldScheme::ALL.iter().map(move |s| (*p, *s)))
        .map(|(preset, scheme)| MatrixCell { preset, scheme, means: by_strategy.get(&(preset, scheme)).copied() })
        .collect())
}

const RULE: &str = "------------------------------------------------------";

/// Three preset blocks of four scheme rows with MAP, P@5, P@10 and nDCG at
/// three decimals. Strategies without a report show `-`.
pub fn render_matrix(reports: &[EvalReport]) -> Result<String, EvalError> {
    let cells = cells(reports)?;
    let mut out = String::new();
    out.push_str(&format!("{:<18}{:<8}{:>7}{:>7}{:>7}{:>7}\n", "", "", "MAP", "P@5", "P@10", "nDCG"));
    for block in cells.chunks(FieldScheme::ALL.len()) {
        out.push_str(RULE);
        out.push('\n');
        for (i, cell) in block.iter().enumerate() {
            let label = if i == 0 { cell.preset.label() } else { "" };
            let values = match &cell.means {
                Some(m) => format!("{:>7.3}{:>7.3}{:>7.3}{:>7.3}", m.map, m.p5, m.p10, m.ndcg),
                None => format!("{:>7}{:>7}{:>7}{:>7}", "-", "-", "-", "-"),
            };
            out.push_str(&format!("{:<18}{:<8}{}\n", label, cell.scheme.name(), values));
        }
    }
    out.push_str(RULE);
    out.push('\n');
    Ok(out)
}

pub fn render_matrix_json(reports: &[EvalReport]) -> Result<String, EvalError> {
    Ok(serde_json::to_string_pretty(&cells(reports)?).expect("matrix serializes"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(tag: &str, map: f64) -> EvalReport {
        EvalReport { run_tag: tag.into(), topics: vec![], means: MeanMetrics { map, p5: 0.2, p10: 0.1, ndcg: 0.5 } }
    }

    #[test]
    fn tags_parse() {
        assert_eq!(parse_tag("without_stemming_T+L+C"), Some((Preset::WithoutStemming, FieldScheme::TitleLeadContent)));
        assert_eq!(parse_tag("default_L+C"), Some((Preset::Default, FieldScheme::LeadContent)));
        assert_eq!(parse_tag("default"), None);
        assert_eq!(parse_tag("bm25_T"), None);
    }

    #[test]
    fn missing_cells_are_dashed() {
        let text = render_matrix(&[report("with_stopwords_T+C", 0.25)]).unwrap();
        assert!(text.contains("T+C       0.250  0.200  0.100  0.500"), "{text}");
        assert_eq!(text.matches("      -      -      -      -").count(), 11);
        assert_eq!(text.lines().count(), 1 + 3 * 4 + 4);
    }

    #[test]
    fn rejects_bad_and_duplicate_tags() {
        assert!(render_matrix(&[report("nope", 0.1)]).is_err());
        assert!(render_matrix(&[report("default_T", 0.1), report("default_T", 0.2)]).is_err());
    }

    #[test]
    fn json_cells() {
        let v: serde_json::Value = serde_json::from_str(&render_matrix_json(&[report("default_T", 0.7)]).unwrap()).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 12);
        assert_eq!(v[0]["preset"], "default");
        assert_eq!(v[0]["scheme"], "T");
        assert_eq!(v[0]["map"], 0.7);
        assert!(v[1].get("map").is_none());
    }
}
