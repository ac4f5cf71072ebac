//! Brute-force reference implementations shared by property tests and the
//! acceptance suite. Nothing here calls the scoring code under test.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

/// Words the default analyzer leaves untouched, so whitespace splitting is
/// an exact stand-in for analysis.
pub const PLAIN_WORDS: &[&str] = &[
    "uma", "rai", "ema", "bee", "ahi", "kafé", "hare", "batar", "tasi", "foho", "mota", "dalan", "knua", "suku",
    "osan", "folin", "udan", "anin",
];

#[derive(Debug, Clone)]
pub struct ToyDoc {
    pub id: String,
    pub title: String,
    pub lead: String,
    pub content: String,
}

fn words(rng: &mut impl Rng, max: usize) -> String {
    let n = rng.gen_range(0..=max);
    (0..n).map(|_| *PLAIN_WORDS.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

/// 1 to `max_docs` documents over [`PLAIN_WORDS`], in shuffled id order.
pub fn random_docs(rng: &mut impl Rng, max_docs: usize) -> Vec<ToyDoc> {
    let n = rng.gen_range(1..=max_docs);
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    ids.into_iter()
        .map(|i| ToyDoc { id: format!("d{i:02}"), title: words(rng, 4), lead: words(rng, 6), content: words(rng, 12) })
        .collect()
}

/// 1 to `max_terms` query words, sometimes including an unseen one.
pub fn random_query(rng: &mut impl Rng, max_terms: usize) -> Vec<String> {
    let n = rng.gen_range(1..=max_terms);
    (0..n)
        .map(|_| if rng.gen_bool(0.1) { "zzz".to_string() } else { PLAIN_WORDS.choose(rng).unwrap().to_string() })
        .collect()
}

/// Field texts for a scheme name (T, T+C, L+C, T+L+C).
pub fn fields<'a>(doc: &'a ToyDoc, scheme: &str) -> Vec<&'a str> {
    scheme
        .split('+')
        .map(|f| match f {
            "T" => doc.title.as_str(),
            "L" => doc.lead.as_str(),
            "C" => doc.content.as_str(),
            other => panic!("unknown field {other}"),
        })
        .collect()
}

/// BM25 of every document, straight from the formula.
pub fn bm25_scores(docs: &[Vec<&str>], query: &[String], k1: f64, b: f64) -> Vec<f64> {
    let n = docs.len() as f64;
    let avgdl = docs.iter().map(|d| d.len()).sum::<usize>() as f64 / n;
    docs.iter()
        .map(|d| {
            let mut s = 0.0;
            for q in query {
                let tf = d.iter().filter(|t| **t == q.as_str()).count() as f64;
                if tf == 0.0 {
                    continue;
                }
                let df = docs.iter().filter(|o| o.iter().any(|t| *t == q.as_str())).count() as f64;
                let idf = (1.0 + (n - df + 0.5) / (df + 0.5)).ln();
                s += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * d.len() as f64 / avgdl));
            }
            s
        })
        .collect()
}

/// Positive-score documents by descending score, then ascending id.
pub fn bm25_ranking(ids: &[&str], tokens: &[Vec<&str>], query: &[String], k1: f64, b: f64) -> Vec<(String, f64)> {
    let scores = bm25_scores(tokens, query, k1, b);
    let mut ranked: Vec<(String, f64)> = ids
        .iter()
        .zip(scores)
        .filter(|(_, s)| *s > 0.0)
        .map(|(id, s)| (id.to_string(), s))
        .collect();
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    ranked
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn grade_of(grades: &BTreeMap<String, u8>, doc: &str) -> u8 {
    grades.get(doc).copied().unwrap_or(0)
}

pub fn precision(ranked: &[String], grades: &BTreeMap<String, u8>, k: usize) -> f64 {
    let mut hits = 0;
    for i in 0..k {
        if i < ranked.len() && grade_of(grades, &ranked[i]) >= 1 {
            hits += 1;
        }
    }
    hits as f64 / k as f64
}

pub fn average_precision(ranked: &[String], grades: &BTreeMap<String, u8>) -> f64 {
    let total = grades.values().filter(|g| **g >= 1).count();
    if total == 0 {
        return 0.0;
    }
    let mut sum = 0.0;
    for i in 0..ranked.len() {
        if grade_of(grades, &ranked[i]) >= 1 {
            let above = ranked[..=i].iter().filter(|d| grade_of(grades, d) >= 1).count();
            sum += above as f64 / (i + 1) as f64;
        }
    }
    sum / total as f64
}

pub fn dcg(gains: &[u8]) -> f64 {
    let mut s = 0.0;
    for (i, g) in gains.iter().enumerate() {
        s += f64::from(*g) / ((i + 2) as f64).log2();
    }
    s
}

pub fn ndcg(ranked: &[String], grades: &BTreeMap<String, u8>) -> f64 {
    let gains: Vec<u8> = ranked.iter().map(|d| grade_of(grades, d)).collect();
    let mut ideal: Vec<u8> = grades.values().copied().filter(|g| *g > 0).collect();
    ideal.sort_unstable_by(|a, b| b.cmp(a));
    let idcg = dcg(&ideal);
    if idcg == 0.0 {
        0.0
    } else {
        dcg(&gains) / idcg
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleTopic {
    pub qid: String,
    pub ap: f64,
    pub p5: f64,
    pub p10: f64,
    pub ndcg: f64,
}

/// Topics of the qrels having at least one relevant document, in qid order.
/// A topic missing from the run has an empty ranking.
pub fn evaluate(
    run: &BTreeMap<String, Vec<String>>,
    qrels: &BTreeMap<String, BTreeMap<String, u8>>,
) -> (Vec<OracleTopic>, [f64; 4]) {
    let mut topics = Vec::new();
    for (qid, grades) in qrels {
        if !grades.values().any(|g| *g >= 1) {
            continue;
        }
        let ranked = run.get(qid).cloned().unwrap_or_default();
        topics.push(OracleTopic {
            qid: qid.clone(),
            ap: average_precision(&ranked, grades),
            p5: precision(&ranked, grades, 5),
            p10: precision(&ranked, grades, 10),
            ndcg: ndcg(&ranked, grades),
        });
    }
    let n = topics.len() as f64;
    let mean = |f: fn(&OracleTopic) -> f64| if topics.is_empty() { 0.0 } else { topics.iter().map(f).sum::<f64>() / n };
    let means = [mean(|t| t.ap), mean(|t| t.p5), mean(|t| t.p10), mean(|t| t.ndcg)];
    (topics, means)
}

/// Up to 10 topics over up to 50 documents: graded qrels and a run.
pub fn random_eval_instance(
    rng: &mut impl Rng,
) -> (BTreeMap<String, Vec<String>>, BTreeMap<String, BTreeMap<String, u8>>) {
    let n_docs = rng.gen_range(1..=50);
    let docs: Vec<String> = (0..n_docs).map(|i| format!("doc{i}")).collect();
    let n_topics = rng.gen_range(1..=10);
    let mut run = BTreeMap::new();
    let mut qrels = BTreeMap::new();
    for t in 0..n_topics {
        let qid = format!("t{t}");
        let mut judged = BTreeMap::new();
        for d in &docs {
            if rng.gen_bool(0.4) {
                judged.insert(d.clone(), rng.gen_range(0..=3u8));
            }
        }
        if !judged.is_empty() {
            qrels.insert(qid.clone(), judged);
        }
        if rng.gen_bool(0.9) {
            let mut ranked = docs.clone();
            ranked.shuffle(rng);
            ranked.truncate(rng.gen_range(1..=n_docs));
            run.insert(qid, ranked);
        }
    }
    if qrels.is_empty() {
        qrels.insert("t0".to_string(), BTreeMap::from([(docs[0].clone(), 2u8)]));
    }
    if !qrels.keys().any(|q| run.contains_key(q)) {
        let q = qrels.keys().next().unwrap().clone();
        run.insert(q, docs.clone());
    }
    (run, qrels)
}

/// Grade chosen by an exhaustive reading of the voting rule.
pub fn vote(grades: &[u8]) -> u8 {
    let count = |g: u8| grades.iter().filter(|x| **x == g).count();
    let best = (0..=3).map(count).max().unwrap();
    let modes: Vec<u8> = (0..=3).filter(|g| count(*g) == best).collect();
    if modes.len() == 1 {
        return modes[0];
    }
    let mut s = grades.to_vec();
    s.sort();
    let n = s.len();
    let median = if n % 2 == 1 { s[n / 2] as i32 } else { (s[n / 2 - 1] as i32 + s[n / 2] as i32) / 2 };
    let mut chosen = modes[0];
    for m in modes {
        if (m as i32 - median).abs() < (chosen as i32 - median).abs() {
            chosen = m;
        }
    }
    chosen
}
