//! Experiment manifest read with `--config`. Every key is optional and any
//! matching flag wins over it.
//!
//! ```toml
//! lexicons = "lexicons/"     # directory with the five lexicon files
//! ndcg_depth = 10            # unset = full ranking
//!
//! [bm25]
//! k1 = 1.2
//! b = 0.75
//!
//! [depths]
//! run = 30                   # run-grid and search cutoff
//! pool = 10
//! per_query = 10
//!
//! [serve]
//! addr = "127.0.0.1:8080"
//! cors_origin = "http://localhost:5173"
//! evaluators = ["ev1", "ev2"]
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub lexicons: Option<PathBuf>,
    pub ndcg_depth: Option<usize>,
    #[serde(default)]
    pub bm25: Bm25Section,
    #[serde(default)]
    pub depths: DepthSection,
    #[serde(default)]
    pub serve: ServeSection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bm25Section {
    pub k1: Option<f64>,
    pub b: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DepthSection {
    pub run: Option<usize>,
    pub pool: Option<usize>,
    pub per_query: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServeSection {
    pub addr: Option<String>,
    pub cors_origin: Option<String>,
    pub evaluators: Option<Vec<String>>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    /// Relative lexicon paths resolve against the config file's directory.
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut config = Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        if let (Some(lex), Some(dir)) = (&config.lexicons, path.parent()) {
            if lex.is_relative() {
                config.lexicons = Some(dir.join(lex));
            }
        }
        Ok(config)
    }
}
