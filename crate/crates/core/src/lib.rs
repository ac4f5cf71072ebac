//! Ad-hoc retrieval and TREC-style evaluation for Tetun text.
//!
//! The crate is organised as a pipeline:
//!
//! - [`analysis`]: HTML removal, case folding, tokenization, normalization,
//!   stopword removal, abbreviation/synonym expansion and light stemming.
//! - [`index`]: inverted indexes over one of the four field schemes.
//! - [`retrieval`]: BM25 ranking, TREC run files and the preset × scheme grid.
//! - [`evaluation`]: qrels, P@k, average precision, nDCG and reports.
//! - [`collection`]: pooling, judging candidates, journals and majority voting.
//! - [`corpus`]: corpus/topic loading, characterization and a synthetic corpus.

pub mod analysis;
pub mod collection;
pub mod corpus;
pub mod evaluation;
pub mod index;
pub mod retrieval;

pub use analysis::{analyze, AnalyzerConfig, Lexicons, Preset, Token};
pub use index::{build_index, Document, FieldScheme, InvertedIndex};
pub use retrieval::{search, Bm25Params, Query, RunEntry, RunFile, SearchResults};
