use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::AnalysisError;

/// Which stages of the analysis pipeline run.
///
/// Stages always execute in a fixed order (see [`super::analyze`]); a disabled
/// stage is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnalyzerConfig {
    pub html_removal: bool,
    pub case_folding: bool,
    pub tokenization: bool,
    pub text_normalization: bool,
    pub stopword_removal: bool,
    pub abbreviation_expansion: bool,
    pub synonym_expansion: bool,
    pub light_stemming: bool,
}

impl AnalyzerConfig {
    /// Every stage enabled.
    pub const fn all() -> Self {
        Self {
            html_removal: true,
            case_folding: true,
            tokenization: true,
            text_normalization: true,
            stopword_removal: true,
            abbreviation_expansion: true,
            synonym_expansion: true,
            light_stemming: true,
        }
    }

    pub fn preset(preset: Preset) -> Self {
        let mut config = Self::all();
        match preset {
            Preset::Default => {}
            Preset::WithStopwords => config.stopword_removal = false,
            Preset::WithoutStemming => config.light_stemming = false,
        }
        config
    }

    /// Rejects configurations that run a token-level stage without tokenizing.
    pub fn validate(&self) -> Result<(), AnalysisError> {
        let token_stages = self.text_normalization
            || self.stopword_removal
            || self.abbreviation_expansion
            || self.synonym_expansion
            || self.light_stemming;
        if !self.tokenization && token_stages {
            return Err(AnalysisError::InvalidConfig(
                "tokenization cannot be disabled while token-level stages are enabled".into(),
            ));
        }
        Ok(())
    }

    fn bits(&self) -> [bool; 8] {
        [
            self.html_removal,
            self.case_folding,
            self.tokenization,
            self.text_normalization,
            self.stopword_removal,
            self.abbreviation_expansion,
            self.synonym_expansion,
            self.light_stemming,
        ]
    }

    /// The named preset this configuration equals, if any.
    pub fn as_preset(&self) -> Option<Preset> {
        Preset::ALL
            .into_iter()
            .find(|p| AnalyzerConfig::preset(*p) == *self)
    }

    /// Stable identifier stored in index headers: the preset name, or
    /// `custom-` followed by one `0`/`1` per stage in pipeline order.
    pub fn id(&self) -> String {
        match self.as_preset() {
            Some(preset) => preset.name().to_string(),
            None => {
                let bits: String = self.bits().iter().map(|b| if *b { '1' } else { '0' }).collect();
                format!("custom-{bits}")
            }
        }
    }

    pub fn from_id(id: &str) -> Result<Self, AnalysisError> {
        if let Ok(preset) = id.parse::<Preset>() {
            return Ok(Self::preset(preset));
        }
        let bits = id
            .strip_prefix("custom-")
            .filter(|b| b.len() == 8 && b.chars().all(|c| c == '0' || c == '1'))
            .ok_or_else(|| AnalysisError::UnknownAnalyzer(id.to_string()))?;
        let b: Vec<bool> = bits.chars().map(|c| c == '1').collect();
        Ok(Self {
            html_removal: b[0],
            case_folding: b[1],
            tokenization: b[2],
            text_normalization: b[3],
            stopword_removal: b[4],
            abbreviation_expansion: b[5],
            synonym_expansion: b[6],
            light_stemming: b[7],
        })
    }
}

impl Default for AnalyzerConfig {
    fn default() -> Self {
        Self::preset(Preset::Default)
    }
}

/// The three processing configurations of the experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Default,
    WithStopwords,
    WithoutStemming,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Default, Preset::WithStopwords, Preset::WithoutStemming];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Default => "default",
            Preset::WithStopwords => "with_stopwords",
            Preset::WithoutStemming => "without_stemming",
        }
    }

    /// Row label used in report matrices.
    pub fn label(&self) -> &'static str {
        match self {
            Preset::Default => "Default",
            Preset::WithStopwords => "With stopwords",
            Preset::WithoutStemming => "Without stemming",
        }
    }

    pub fn config(&self) -> AnalyzerConfig {
        AnalyzerConfig::preset(*self)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "default" => Ok(Preset::Default),
            "with_stopwords" => Ok(Preset::WithStopwords),
            "without_stemming" => Ok(Preset::WithoutStemming),
            other => Err(AnalysisError::UnknownAnalyzer(other.to_string())),
        }
    }
}
