use std::path::PathBuf;

use tetun_core::collection::{adjudicate, pool_runs, replay, select_judging_candidates, Judgment};
use tetun_core::corpus::synth::{generate, simulate_judgments, DEFAULT_SEED, EVALUATORS};
use tetun_core::corpus::{corpus_to_jsonl, load_corpus, load_topics, TopicSet};
use tetun_core::retrieval::{run_grid, StrategyGrid};
use tetun_core::{Bm25Params, Lexicons};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn journal_text(js: &[Judgment]) -> String {
    js.iter().map(|j| serde_json::to_string(j).unwrap() + "\n").collect()
}

// Regenerate with TETUN_BLESS=1 cargo test -p tetun-core --test synthetic
#[test]
fn bundled_data_matches_generator() {
    let synth = generate(DEFAULT_SEED);
    let corpus = corpus_to_jsonl(&synth.documents);
    let topics = TopicSet::new(synth.topics.clone()).unwrap().to_tsv();
    let dir = data_dir();
    if std::env::var_os("TETUN_BLESS").is_some() {
        std::fs::write(dir.join("corpus.jsonl"), &corpus).unwrap();
        std::fs::write(dir.join("topics.tsv"), &topics).unwrap();
        std::fs::write(dir.join("truth.qrels"), synth.truth.to_trec()).unwrap();
    }
    assert_eq!(std::fs::read_to_string(dir.join("corpus.jsonl")).unwrap(), corpus);
    assert_eq!(std::fs::read_to_string(dir.join("topics.tsv")).unwrap(), topics);
    assert_eq!(std::fs::read_to_string(dir.join("truth.qrels")).unwrap(), synth.truth.to_trec());

    let loaded = load_corpus(dir.join("corpus.jsonl")).unwrap();
    assert_eq!(loaded.len(), 442);
    assert_eq!(loaded, synth.documents);
    let t = load_topics(dir.join("topics.tsv")).unwrap();
    assert_eq!(t.len(), 5);
    assert!(t.queries().iter().any(|q| q.text == "opiniaun ba subsidi governu ba funsionario publiko"));
}

#[test]
fn every_strategy_fills_depth_30() {
    let synth = generate(DEFAULT_SEED);
    let lex = Lexicons::bundled();
    let runs = run_grid(&synth.documents, &synth.topics, &StrategyGrid::full(30), &lex, &Bm25Params::default()).unwrap();
    assert_eq!(runs.len(), 12);
    for run in &runs {
        for q in &synth.topics {
            let n = run.entries.iter().filter(|e| e.qid == q.qid).count();
            assert_eq!(n, 30, "{} {}", run.tag, q.qid);
        }
    }
    let pooled = pool_runs(&runs, 30).unwrap();
    assert_eq!(pooled.entries_before_dedup, 1800);
    let pooled = pool_runs(&runs, 10).unwrap();
    assert!(pooled.topic_entries_before_dedup.values().all(|n| *n == 120));

    let candidates = select_judging_candidates(&pooled.pool, 10).unwrap();
    assert_eq!(candidates.pair_count(), 50);
    let js = simulate_judgments(&candidates, &synth.truth, &EVALUATORS, DEFAULT_SEED);
    let latest = replay(&journal_text(&js)).unwrap();
    let adjudicated = adjudicate(latest.values()).unwrap();
    assert_eq!(adjudicated.len(), 50);
    // the pool should contain relevant material for every topic
    for q in &synth.topics {
        assert!(adjudicated.iter().any(|((qid, _), g)| *qid == q.qid && g.is_relevant()), "{}", q.qid);
    }
}
