use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;
use tetun_core::collection::{
    adjudicate, check_coverage, export_qrels, parse_adjudicated, pool_runs, read_journal,
    select_judging_candidates, Candidates, Pool,
};
use tetun_core::corpus::synth::generate;
use tetun_core::corpus::{characterize, corpus_to_jsonl, load_corpus, load_topics, TopicSet};
use tetun_core::evaluation::{evaluate, render_matrix, render_matrix_json, EvalOptions, EvalReport, Qrels};
use tetun_core::index::{load_index, save_index};
use tetun_core::retrieval::{run_grid, write_runs, SearchStatus, StrategyGrid, DEFAULT_RUN_DEPTH};
use tetun_core::{build_index, search, Bm25Params, FieldScheme, Lexicons, Preset, Query, RunFile};

use crate::config::Config;
use crate::{BmArgs, Cli, Command};

const DEFAULT_SEARCH_K: usize = 10;
const DEFAULT_POOL_DEPTH: usize = tetun_core::collection::DEFAULT_POOL_DEPTH;
const DEFAULT_PER_QUERY: usize = tetun_core::collection::DEFAULT_PER_QUERY;
const DEFAULT_ADDR: &str = "127.0.0.1:8080";

#[derive(Debug)]
pub enum Failure {
    /// Bad flags, missing input files.
    Usage(String),
    /// Inputs that exist but are invalid, or outputs that cannot be written.
    Data(String),
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Internal(m) => f.write_str(m),
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn data(e: impl fmt::Display) -> Failure {
    Failure::Data(e.to_string())
}

fn input(path: &Path) -> Result<&Path, Failure> {
    if path.exists() {
        Ok(path)
    } else {
        Err(usage(format!("{}: no such file or directory", path.display())))
    }
}

fn write(path: &Path, contents: &str) -> Outcome {
    fs::write(path, contents).map_err(|e| data(format!("{}: {e}", path.display())))
}

fn print_json(value: &impl Serialize) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn positive(name: &str, value: usize) -> Result<usize, Failure> {
    if value == 0 {
        Err(usage(format!("--{name} must be at least 1")))
    } else {
        Ok(value)
    }
}

fn parse_preset(name: &str) -> Result<Preset, Failure> {
    name.parse().map_err(|e: tetun_core::analysis::AnalysisError| usage(e.to_string()))
}

fn parse_scheme(name: &str) -> Result<FieldScheme, Failure> {
    name.parse().map_err(|e: tetun_core::index::IndexError| usage(e.to_string()))
}

/// Values shared by all subcommands after merging the config file.
struct Context {
    config: Config,
    lexicons_dir: Option<PathBuf>,
}

impl Context {
    fn lexicons(&self) -> Result<Lexicons, Failure> {
        match &self.lexicons_dir {
            None => Ok(Lexicons::bundled()),
            Some(dir) => Lexicons::load_dir(input(dir)?).map_err(data),
        }
    }

    fn bm25(&self, flags: &BmArgs) -> Result<Bm25Params, Failure> {
        let d = Bm25Params::default();
        let params = Bm25Params {
            k1: flags.k1.or(self.config.bm25.k1).unwrap_or(d.k1),
            b: flags.b.or(self.config.bm25.b).unwrap_or(d.b),
        };
        if !(params.k1 >= 0.0 && params.k1.is_finite()) {
            return Err(usage(format!("k1 must be a non-negative number, got {}", params.k1)));
        }
        if !(0.0..=1.0).contains(&params.b) {
            return Err(usage(format!("b must lie in [0, 1], got {}", params.b)));
        }
        Ok(params)
    }
}

pub fn run(cli: Cli) -> Outcome {
    let config = match &cli.config {
        Some(path) => Config::load(input(path)?).map_err(usage)?,
        None => Config::default(),
    };
    let lexicons_dir = cli.lexicons.clone().or_else(|| config.lexicons.clone());
    let ctx = Context { config, lexicons_dir };
    match cli.command {
        Command::IngestCheck(a) => ingest_check(&ctx, a),
        Command::Index(a) => index(&ctx, a),
        Command::Search(a) => search_cmd(&ctx, a),
        Command::RunGrid(a) => run_grid_cmd(&ctx, a),
        Command::Pool(a) => pool(&ctx, a),
        Command::SelectCandidates(a) => select(&ctx, a),
        Command::Vote(a) => vote(a),
        Command::ExportQrels(a) => export(a),
        Command::Eval(a) => eval(&ctx, a),
        Command::Report(a) => report(a),
        Command::Serve(a) => serve(&ctx, a),
        Command::GenCorpus(a) => gen_corpus(a),
    }
}

fn ingest_check(ctx: &Context, a: crate::IngestCheckArgs) -> Outcome {
    let preset = parse_preset(&a.preset)?;
    input(&a.corpus)?;
    if let Some(t) = &a.topics {
        input(t)?;
    }
    let lex = ctx.lexicons()?;
    let docs = load_corpus(&a.corpus).map_err(data)?;
    let topics = a.topics.as_ref().map(load_topics).transpose().map_err(data)?;
    let stats = characterize(&docs, preset, &lex, a.top);
    if a.json {
        return print_json(&json!({
            "corpus": a.corpus.display().to_string(),
            "topics": topics.as_ref().map(TopicSet::len),
            "stats": stats,
        }));
    }
    println!("corpus ok: {} documents", docs.len());
    if let Some(t) = &topics {
        println!("topics ok: {} topics", t.len());
    }
    print!("\n{}", stats.to_text());
    Ok(())
}

fn index(ctx: &Context, a: crate::IndexArgs) -> Outcome {
    let scheme = parse_scheme(&a.scheme)?;
    let preset = parse_preset(&a.preset)?;
    input(&a.corpus)?;
    let lex = ctx.lexicons()?;
    let docs = load_corpus(&a.corpus).map_err(data)?;
    let idx = build_index(&docs, scheme, &preset.config(), &lex).map_err(data)?;
    save_index(&idx, &a.out).map_err(data)?;
    let summary = json!({
        "path": a.out.display().to_string(),
        "scheme": scheme,
        "analyzer": idx.analyzer_id(),
        "documents": idx.doc_count(),
        "vocabulary": idx.vocabulary_size(),
        "avg_doc_length": idx.avg_doc_length(),
    });
    if a.json {
        return print_json(&summary);
    }
    println!(
        "indexed {} documents ({} terms, {} {}) into {}",
        idx.doc_count(),
        idx.vocabulary_size(),
        idx.analyzer_id(),
        scheme.name(),
        a.out.display()
    );
    Ok(())
}

fn search_cmd(ctx: &Context, a: crate::SearchArgs) -> Outcome {
    let k = positive("k", a.k.or(ctx.config.depths.run).unwrap_or(DEFAULT_SEARCH_K))?;
    let params = ctx.bm25(&a.bm25)?;
    let wanted = a.preset.as_deref().map(parse_preset).transpose()?;
    input(&a.index)?;
    let lex = ctx.lexicons()?;
    let idx = load_index(&a.index).map_err(data)?;
    let config = idx.analyzer_config().map_err(data)?;
    if let Some(p) = wanted {
        if p.config() != config {
            return Err(usage(format!("index was built with {:?}, not {:?}", idx.analyzer_id(), p.name())));
        }
    }
    let results = search(&idx, &Query::new(&a.qid, &a.query), &config, &lex, k, &params).map_err(data)?;
    if a.json {
        return print_json(&results);
    }
    if results.status == SearchStatus::EmptyQuery {
        eprintln!("query has no terms after analysis");
    }
    for e in &results.entries {
        println!("{}", e.to_line());
    }
    Ok(())
}

fn run_grid_cmd(ctx: &Context, a: crate::RunGridArgs) -> Outcome {
    let depth = positive("depth", a.depth.or(ctx.config.depths.run).unwrap_or(DEFAULT_RUN_DEPTH))?;
    let params = ctx.bm25(&a.bm25)?;
    let mut grid = StrategyGrid::full(depth);
    if !a.presets.is_empty() {
        grid.presets = a.presets.iter().map(|p| parse_preset(p)).collect::<Result<_, _>>()?;
    }
    if !a.schemes.is_empty() {
        grid.schemes = a.schemes.iter().map(|s| parse_scheme(s)).collect::<Result<_, _>>()?;
    }
    input(&a.corpus)?;
    input(&a.topics)?;
    let lex = ctx.lexicons()?;
    let docs = load_corpus(&a.corpus).map_err(data)?;
    let topics = load_topics(&a.topics).map_err(data)?;
    let runs = run_grid(&docs, topics.queries(), &grid, &lex, &params).map_err(data)?;
    let paths = write_runs(&runs, &a.out).map_err(data)?;

    let total: usize = runs.iter().map(RunFile::len).sum();
    if a.json {
        let list: Vec<_> = runs
            .iter()
            .zip(&paths)
            .map(|(r, p)| json!({ "tag": r.tag, "path": p.display().to_string(), "entries": r.len() }))
            .collect();
        return print_json(&json!({ "depth": depth, "runs": list, "total_entries": total }));
    }
    for (r, p) in runs.iter().zip(&paths) {
        println!("{:<26}{:>6}  {}", r.tag, r.len(), p.display());
    }
    println!("{} runs, {} entries", runs.len(), total);
    Ok(())
}

/// Expands directories to their files with `ext`, sorted by name.
fn expand(paths: &[PathBuf], ext: &str) -> Result<Vec<PathBuf>, Failure> {
    let mut out = Vec::new();
    for p in paths {
        if input(p)?.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(p)
                .map_err(|e| data(format!("{}: {e}", p.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == ext))
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(p.clone());
        }
    }
    if out.is_empty() {
        return Err(usage(format!("no .{ext} files found")));
    }
    Ok(out)
}

fn pool(ctx: &Context, a: crate::PoolArgs) -> Outcome {
    let depth = positive("depth", a.depth.or(ctx.config.depths.pool).unwrap_or(DEFAULT_POOL_DEPTH))?;
    let files = expand(&a.runs, "run")?;
    let runs = files
        .iter()
        .map(|f| RunFile::read(f).map_err(|e| data(format!("{}: {e}", f.display()))))
        .collect::<Result<Vec<_>, _>>()?;
    let outcome = pool_runs(&runs, depth).map_err(data)?;
    outcome.pool.write(&a.out).map_err(data)?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let after: BTreeMap<&str, usize> = outcome.pool.topics.iter().map(|(q, e)| (q.as_str(), e.len())).collect();
    if a.json {
        return print_json(&json!({
            "runs": runs.len(),
            "depth": depth,
            "entries_before_dedup": outcome.entries_before_dedup,
            "topic_entries_before_dedup": outcome.topic_entries_before_dedup,
            "entries_after_dedup": outcome.entries_after_dedup,
            "topic_entries_after_dedup": after,
            "warnings": outcome.warnings,
        }));
    }
    println!("{:<12}{:>8}{:>8}", "topic", "pooled", "unique");
    for (q, n) in &outcome.topic_entries_before_dedup {
        println!("{:<12}{:>8}{:>8}", q, n, after.get(q.as_str()).copied().unwrap_or(0));
    }
    println!("{:<12}{:>8}{:>8}", "all", outcome.entries_before_dedup, outcome.entries_after_dedup);
    Ok(())
}

fn select(ctx: &Context, a: crate::SelectArgs) -> Outcome {
    let per_query = positive("per-query", a.per_query.or(ctx.config.depths.per_query).unwrap_or(DEFAULT_PER_QUERY))?;
    let pool = Pool::read(input(&a.pool)?).map_err(data)?;
    let candidates = select_judging_candidates(&pool, per_query).map_err(data)?;
    candidates.write(&a.out).map_err(data)?;
    for q in &candidates.short {
        eprintln!("warning: topic {q} has fewer than {per_query} pooled documents");
    }
    let per_topic: BTreeMap<&str, usize> = candidates.topics.iter().map(|(q, d)| (q.as_str(), d.len())).collect();
    if a.json {
        return print_json(&json!({
            "pairs": candidates.pair_count(),
            "per_topic": per_topic,
            "short_topics": candidates.short,
        }));
    }
    println!("{} judging pairs over {} topics", candidates.pair_count(), per_topic.len());
    Ok(())
}

fn coverage(adjudicated: &BTreeMap<(String, String), tetun_core::evaluation::Grade>, c: Option<&PathBuf>) -> Outcome {
    if let Some(path) = c {
        let candidates = Candidates::read(input(path)?).map_err(data)?;
        check_coverage(adjudicated, &candidates).map_err(data)?;
    }
    Ok(())
}

fn qrels_summary(qrels: &Qrels, judgments: Option<usize>, json_out: bool, out: &Path) -> Outcome {
    let mut histogram = [0usize; 4];
    for e in qrels.entries() {
        histogram[e.grade.value() as usize] += 1;
    }
    if json_out {
        return print_json(&json!({
            "judgments": judgments,
            "qrels_lines": qrels.len(),
            "topics": qrels.qids().count(),
            "grades": histogram,
            "path": out.display().to_string(),
        }));
    }
    println!(
        "wrote {} qrels lines for {} topics to {} (grades 0/1/2/3: {}/{}/{}/{})",
        qrels.len(),
        qrels.qids().count(),
        out.display(),
        histogram[0],
        histogram[1],
        histogram[2],
        histogram[3]
    );
    Ok(())
}

fn vote(a: crate::VoteArgs) -> Outcome {
    let latest = read_journal(input(&a.judgments)?).map_err(data)?;
    let adjudicated = adjudicate(latest.values()).map_err(data)?;
    coverage(&adjudicated, a.candidates.as_ref())?;
    let qrels = export_qrels(&adjudicated, &a.out).map_err(data)?;
    qrels_summary(&qrels, Some(latest.len()), a.json, &a.out)
}

fn export(a: crate::ExportArgs) -> Outcome {
    let text = fs::read_to_string(input(&a.grades)?).map_err(|e| data(format!("{}: {e}", a.grades.display())))?;
    let adjudicated = parse_adjudicated(&text).map_err(data)?;
    coverage(&adjudicated, a.candidates.as_ref())?;
    let qrels = export_qrels(&adjudicated, &a.out).map_err(data)?;
    qrels_summary(&qrels, None, a.json, &a.out)
}

fn eval(ctx: &Context, a: crate::EvalArgs) -> Outcome {
    let ndcg_depth = a.ndcg_depth.or(ctx.config.ndcg_depth).map(|d| positive("ndcg-depth", d)).transpose()?;
    input(&a.run)?;
    input(&a.qrels)?;
    let run = RunFile::read(&a.run).map_err(|e| data(format!("{}: {e}", a.run.display())))?;
    let qrels = Qrels::read(&a.qrels).map_err(data)?;
    let report = evaluate(&run, &qrels, &EvalOptions { ndcg_depth }).map_err(data)?;
    if let Some(out) = &a.out {
        write(out, &(report.to_json() + "\n"))?;
    }
    if a.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(())
}

fn report(a: crate::ReportArgs) -> Outcome {
    let files = expand(&a.reports, "json")?;
    let reports = files
        .iter()
        .map(|f| {
            let text = fs::read_to_string(f).map_err(|e| data(format!("{}: {e}", f.display())))?;
            EvalReport::from_json(&text).map_err(|e| data(format!("{}: {e}", f.display())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rendered = if a.json {
        render_matrix_json(&reports).map_err(data)? + "\n"
    } else {
        render_matrix(&reports).map_err(data)?
    };
    if let Some(out) = &a.out {
        write(out, &rendered)?;
    }
    print!("{rendered}");
    Ok(())
}

fn serve(ctx: &Context, a: crate::ServeArgs) -> Outcome {
    let params = ctx.bm25(&a.bm25)?;
    let addr_text = a.addr.or_else(|| ctx.config.serve.addr.clone()).unwrap_or_else(|| DEFAULT_ADDR.to_string());
    let addr: std::net::SocketAddr =
        addr_text.parse().map_err(|e| usage(format!("--addr {addr_text:?}: {e}")))?;
    let evaluators =
        if a.evaluators.is_empty() { ctx.config.serve.evaluators.clone().unwrap_or_default() } else { a.evaluators };
    let campaign_files = match (&a.topics, &a.candidates) {
        (Some(t), Some(c)) => Some((t, c)),
        (None, None) => None,
        _ => return Err(usage("--topics and --candidates go together")),
    };
    if campaign_files.is_some() && evaluators.is_empty() {
        return Err(usage("a judging campaign needs --evaluators"));
    }
    input(&a.corpus)?;
    let lex = ctx.lexicons()?;
    let docs = load_corpus(&a.corpus).map_err(data)?;
    let mut state = tetun_service::AppState::new(docs, lex, params);
    if let Some(path) = &a.index {
        state = state.with_index(load_index(input(path)?).map_err(data)?).map_err(data)?;
    }
    if let Some((t, c)) = campaign_files {
        let topics = load_topics(input(t)?).map_err(data)?;
        let candidates = Candidates::read(input(c)?).map_err(data)?;
        let journal = a.journal.clone().unwrap_or_else(|| PathBuf::from("journal.jsonl"));
        let campaign = tetun_service::Campaign::open(topics, candidates, evaluators, &journal).map_err(data)?;
        state = state.with_campaign(campaign).map_err(data)?;
    }
    let cors = a.cors_origin.or_else(|| ctx.config.serve.cors_origin.clone());
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Internal(e.to_string()))?;
    eprintln!("listening on http://{addr}");
    runtime
        .block_on(tetun_service::serve(state, addr, cors.as_deref()))
        .map_err(|e| data(format!("{addr}: {e}")))
}

fn gen_corpus(a: crate::GenCorpusArgs) -> Outcome {
    let synth = generate(a.seed);
    fs::create_dir_all(&a.out_dir).map_err(|e| data(format!("{}: {e}", a.out_dir.display())))?;
    let topics = TopicSet::new(synth.topics.clone()).map_err(|e| Failure::Internal(e.to_string()))?;
    let files = [
        ("corpus.jsonl", corpus_to_jsonl(&synth.documents)),
        ("topics.tsv", topics.to_tsv()),
        ("truth.qrels", synth.truth.to_trec()),
    ];
    for (name, text) in &files {
        write(&a.out_dir.join(name), text)?;
    }
    if a.json {
        return print_json(&json!({
            "seed": a.seed,
            "documents": synth.documents.len(),
            "topics": synth.topics.len(),
            "truth_lines": synth.truth.len(),
            "out_dir": a.out_dir.display().to_string(),
        }));
    }
    println!(
        "wrote {} documents, {} topics and {} graded pairs to {}",
        synth.documents.len(),
        synth.topics.len(),
        synth.truth.len(),
        a.out_dir.display()
    );
    Ok(())
}
