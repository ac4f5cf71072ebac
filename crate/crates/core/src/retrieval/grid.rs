use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use super::{search, Bm25Params, Query, RetrievalError, RunFile};
use crate::analysis::{Lexicons, Preset};
use crate::index::{build_index, Document, FieldScheme};

/// Ranking depth used for pooling all strategies.
pub const DEFAULT_RUN_DEPTH: usize = 30;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("no topics")]
    NoTopics,
    #[error("strategy {strategy}: {source}")]
    Strategy {
        strategy: String,
        #[source]
        source: RetrievalError,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// `<preset>_<scheme>`, e.g. `without_stemming_T`.
pub fn run_tag(analyzer_id: &str, scheme: FieldScheme) -> String {
    format!("{analyzer_id}_{}", scheme.name())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyGrid {
    pub presets: Vec<Preset>,
    pub schemes: Vec<FieldScheme>,
    pub depth: usize,
}

impl StrategyGrid {
    /// All three presets × all four schemes.
    pub fn full(depth: usize) -> Self {
        Self { presets: Preset::ALL.to_vec(), schemes: FieldScheme::ALL.to_vec(), depth }
    }

    pub fn strategies(&self) -> Vec<(Preset, FieldScheme)> {
        self.presets
            .iter()
            .flat_map(|p| self.schemes.iter().map(move |s| (*p, *s)))
            .collect()
    }
}

impl Default for StrategyGrid {
    fn default() -> Self {
        Self::full(DEFAULT_RUN_DEPTH)
    }
}

/// One run per (preset, scheme), in preset-major order. Strategies execute in
/// parallel; output order and contents do not depend on scheduling.
pub fn run_grid(
    corpus: &[Document],
    topics: &[Query],
    grid: &StrategyGrid,
    lexicons: &Lexicons,
    params: &Bm25Params,
) -> Result<Vec<RunFile>, GridError> {
    if topics.is_empty() {
        return Err(GridError::NoTopics);
    }
    grid.strategies()
        .into_par_iter()
        .map(|(preset, scheme)| {
            let tag = run_tag(preset.name(), scheme);
            let wrap = |source: RetrievalError| GridError::Strategy { strategy: tag.clone(), source };
            let config = preset.config();
            let index = build_index(corpus, scheme, &config, lexicons).map_err(|e| wrap(e.into()))?;
            let mut entries = Vec::with_capacity(topics.len() * grid.depth);
            for topic in topics {
                let results = search(&index, topic, &config, lexicons, grid.depth, params).map_err(wrap)?;
                entries.extend(results.entries);
            }
            Ok(RunFile::new(tag.clone(), entries))
        })
        .collect()
}

/// Writes each run to `<dir>/<tag>.run` via a temporary file and rename.
pub fn write_runs(runs: &[RunFile], dir: impl AsRef<Path>) -> Result<Vec<PathBuf>, GridError> {
    let dir = dir.as_ref();
    let io = |path: &Path, source| GridError::Io { path: path.display().to_string(), source };
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut paths = Vec::with_capacity(runs.len());
    for run in runs {
        let path = dir.join(format!("{}.run", run.tag));
        let tmp = dir.join(format!(".{}.run.tmp", run.tag));
        fs::write(&tmp, run.to_trec()).map_err(|e| io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| io(&path, e))?;
        paths.push(path);
    }
    Ok(paths)
}
