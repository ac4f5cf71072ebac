mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Tetun ad-hoc retrieval experiments: indexing, BM25 runs, pooling,
/// judging and TREC-style evaluation.
#[derive(Debug, Parser)]
#[command(name = "tetun", version)]
pub struct Cli {
    /// TOML experiment manifest; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Directory holding stopwords.txt, normalization.tsv, abbreviations.tsv,
    /// synonyms.tsv and stemmer.tsv (default: bundled lexicons).
    #[arg(long, global = true, value_name = "DIR")]
    pub lexicons: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a corpus (and optionally a topic file) and print statistics.
    IngestCheck(IngestCheckArgs),
    /// Build an index over one field scheme and save it.
    Index(IndexArgs),
    /// Rank documents of a saved index for one query.
    Search(SearchArgs),
    /// Produce one run file per preset × field scheme.
    RunGrid(RunGridArgs),
    /// Merge the top documents of several runs per topic.
    Pool(PoolArgs),
    /// Choose the documents of each topic that evaluators will judge.
    SelectCandidates(SelectArgs),
    /// Majority-vote a judgment journal into qrels.
    Vote(VoteArgs),
    /// Write already adjudicated grades as a qrels file.
    ExportQrels(ExportArgs),
    /// Score one run against qrels.
    Eval(EvalArgs),
    /// Render the preset × scheme matrix from evaluation reports.
    Report(ReportArgs),
    /// Start the HTTP search and judging service.
    Serve(ServeArgs),
    /// Write the synthetic corpus, topics and intended grades.
    GenCorpus(GenCorpusArgs),
}

#[derive(Debug, Args)]
pub struct BmArgs {
    /// BM25 term-frequency saturation.
    #[arg(long)]
    pub k1: Option<f64>,
    /// BM25 length normalization.
    #[arg(long)]
    pub b: Option<f64>,
}

#[derive(Debug, Args)]
pub struct IngestCheckArgs {
    #[arg(long, value_name = "JSONL")]
    pub corpus: PathBuf,
    #[arg(long, value_name = "TSV")]
    pub topics: Option<PathBuf>,
    /// Analyzer preset for the token statistics.
    #[arg(long, default_value = "default")]
    pub preset: String,
    /// Number of most frequent terms to list.
    #[arg(long, default_value_t = 20)]
    pub top: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    #[arg(long, value_name = "JSONL")]
    pub corpus: PathBuf,
    /// T, T+C, L+C or T+L+C.
    #[arg(long)]
    pub scheme: String,
    #[arg(long, default_value = "default")]
    pub preset: String,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, value_name = "FILE")]
    pub index: PathBuf,
    #[arg(long, short)]
    pub query: String,
    /// Query id written in the run lines.
    #[arg(long, default_value = "q")]
    pub qid: String,
    /// Number of results (default: depths.run from the config, else 10).
    #[arg(long, short)]
    pub k: Option<usize>,
    /// Must name the preset the index was built with.
    #[arg(long)]
    pub preset: Option<String>,
    #[command(flatten)]
    pub bm25: BmArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct RunGridArgs {
    #[arg(long, value_name = "JSONL")]
    pub corpus: PathBuf,
    #[arg(long, value_name = "TSV")]
    pub topics: PathBuf,
    /// Ranked documents kept per topic (default 30).
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Restrict to these presets (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub presets: Vec<String>,
    /// Restrict to these field schemes (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub schemes: Vec<String>,
    #[command(flatten)]
    pub bm25: BmArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PoolArgs {
    /// Run files, or directories whose *.run files are all used.
    #[arg(long, required = true, num_args = 1..)]
    pub runs: Vec<PathBuf>,
    /// Documents taken from each run per topic (default 10).
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, value_name = "TSV")]
    pub out: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long, value_name = "TSV")]
    pub pool: PathBuf,
    /// Documents per topic (default 10).
    #[arg(long)]
    pub per_query: Option<usize>,
    #[arg(long, value_name = "TSV")]
    pub out: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VoteArgs {
    /// Judgment journal (JSON lines).
    #[arg(long, value_name = "JSONL")]
    pub judgments: PathBuf,
    /// Fail unless every candidate pair received a grade.
    #[arg(long, value_name = "TSV")]
    pub candidates: Option<PathBuf>,
    #[arg(long, value_name = "QRELS")]
    pub out: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// qid<TAB>docid<TAB>grade lines.
    #[arg(long, value_name = "TSV")]
    pub grades: PathBuf,
    #[arg(long, value_name = "TSV")]
    pub candidates: Option<PathBuf>,
    #[arg(long, value_name = "QRELS")]
    pub out: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_name = "RUN")]
    pub run: PathBuf,
    #[arg(long, value_name = "QRELS")]
    pub qrels: PathBuf,
    /// Cut nDCG at this rank (default: the whole ranking).
    #[arg(long)]
    pub ndcg_depth: Option<usize>,
    /// Also write the JSON report here.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// JSON reports from `eval --json`, or directories of *.json files.
    #[arg(long, required = true, num_args = 1..)]
    pub reports: Vec<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, value_name = "JSONL")]
    pub corpus: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub index: Option<PathBuf>,
    #[arg(long, value_name = "TSV")]
    pub topics: Option<PathBuf>,
    #[arg(long, value_name = "TSV")]
    pub candidates: Option<PathBuf>,
    #[arg(long, value_name = "JSONL")]
    pub journal: Option<PathBuf>,
    /// Allowed evaluator ids (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub evaluators: Vec<String>,
    /// Bind address (default 127.0.0.1:8080).
    #[arg(long)]
    pub addr: Option<String>,
    /// Origin allowed by CORS (default: any).
    #[arg(long)]
    pub cors_origin: Option<String>,
    #[command(flatten)]
    pub bm25: BmArgs,
}

#[derive(Debug, Args)]
pub struct GenCorpusArgs {
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = tetun_core::corpus::synth::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
