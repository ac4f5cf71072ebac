//! Seeded generator of a Tetun-like news corpus with five topics.
//!
//! Every topic owns a cluster of documents whose titles always contain a
//! query word, so each topic matches well over 30 documents under every
//! preset and field scheme. The generator also knows the grade it intended
//! for each clustered document, which drives [`simulate_judgments`].

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::collection::{Candidates, Judgment};
use crate::evaluation::{Grade, Qrels};
use crate::index::Document;
use crate::retrieval::Query;

pub const DEFAULT_SEED: u64 = 442;
pub const DOC_COUNT: usize = 442;
pub const CLUSTER_SIZE: usize = 56;
pub const EVALUATORS: [&str; 5] = ["ev1", "ev2", "ev3", "ev4", "ev5"];

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub documents: Vec<Document>,
    pub topics: Vec<Query>,
    /// Intended grade of every clustered document.
    pub truth: Qrels,
}

struct TopicSpec {
    qid: &'static str,
    text: &'static str,
    /// Surface forms that match a query term under every preset.
    query_forms: &'static [&'static str],
    related: &'static [&'static str],
}

const TOPICS: [TopicSpec; 5] = [
    TopicSpec {
        qid: "q1",
        text: "opiniaun ba subsidi governu ba funsionario publiko",
        query_forms: &["subsidi", "subsídiu", "funsionáriu", "funsionariu", "públiku", "publiko", "governu", "governo", "opiniaun"],
        related: &["saláriu", "osan", "pagamentu", "ministériu finansas", "apoiu", "Covid-19", "lei", "dólar"],
    },
    TopicSpec {
        qid: "q2",
        text: "selebrasaun loron restaurasaun independénsia",
        query_forms: &["selebrasaun", "restaurasaun", "independénsia", "loron"],
        related: &["bandeira", "serimónia", "veteranu", "istória", "20 de maio", "selebra", "restaura", "feriadu"],
    },
    TopicSpec {
        qid: "q3",
        text: "orsamentu jerál estadu ba setór saúde",
        query_forms: &["orsamentu", "OJE", "saúde", "saude", "setór", "jerál", "estadu"],
        related: &["hospitál", "parlamentu", "aprova", "milhaun", "millaun", "dólar", "ai-moruk", "klínika"],
    },
    TopicSpec {
        qid: "q4",
        text: "juramentu membru governu foun",
        query_forms: &["juramentu", "membru", "governu", "governo", "foun"],
        related: &["ministru", "ministro", "PM", "palásiu", "jura", "posse", "vise-ministru", "gabinete"],
    },
    TopicSpec {
        qid: "q5",
        text: "eleisaun prezidensiál no kandidatu prezidente",
        query_forms: &["eleisaun", "prezidensiál", "kandidatu", "prezidente", "presidente", "PR"],
        related: &["votu", "kampaña", "CNE", "STAE", "elei", "segunda volta", "rezultadu", "presiden"],
    },
];

const FUNCTION_WORDS: &[&str] = &[
    "no", "ho", "ba", "husi", "iha", "ne'e", "ne’e", "sira", "nia", "mak", "atu", "hodi", "ona", "sei", "la",
    "mós", "tanba", "maibé", "hanesan", "kona-ba", "ida", "hotu", "ne'ebé", "bele", "tenke", "de'it", "to'o",
];

const CONTENT_WORDS: &[&str] = &[
    "uma", "rai", "ema", "tinan", "fulan", "semana", "eskola", "sekola", "estudante", "profesór", "doutór",
    "polísia", "dalan", "ponte", "bee", "eletrisidade", "agrikultura", "agrikultór", "to'os", "hare", "batar",
    "kafé", "merkadu", "komérsiu", "negósiu", "empreza", "folin", "hahán", "knua", "suku", "munisípiu",
    "administrasaun", "komunidade", "joventude", "feto", "mane", "labarik", "inan", "aman", "família", "igreja",
    "udan", "anin", "tasi", "foho", "mota", "estrada", "konstrusaun", "projetu", "dezenvolvimentu", "edukasaun",
    "formasaun", "treinamentu", "servisu", "traballadór", "jornalista", "notísia", "rádiu", "televizaun",
    "internet", "telefone", "futeból", "desportu", "kompetisaun", "ekipa", "xefe", "lideransa", "polítika",
    "partidu", "demokrasia", "tribunál", "justisa", "krime", "seguransa", "ajuda", "programa", "atividade",
    "enkontru", "reuniaun", "sorumutu", "diskusaun", "problema", "solusaun", "relatóriu", "dadus",
    "populasaun", "nasaun", "mundu", "internasionál", "rejiaun", "fronteira", "hala'o", "halo", "hatete",
    "dehan", "fó", "simu", "hetan", "haree", "rona", "hakerek", "lee", "ko'alia", "hatudu", "harii", "hadi'a",
    "hamenus", "hasa'e", "foti", "lori", "sai", "tama", "hela", "moris", "serbisu", "aprende", "hanorin",
    "kontinua", "hahú", "remata", "prepara", "organiza", "partisipa", "vizita", "rekoñese", "husu", "hatán",
    "di'ak", "aat", "boot", "ki'ik", "tuan", "makaas", "naruk", "furak", "moos", "importante", "nesesáriu",
    "lohidór", "nauktén", "nauk-teen", "hanoin", "sentimentu", "pagamentu", "osan", "rumah", "dolar",
    "junho", "junu", "julho", "janeiro", "agosto", "dezembro", "milhaun",
];

const PLACES: &[&str] = &[
    "Díli", "Baucau", "Ermera", "Liquiçá", "Aileu", "Manatuto", "Viqueque", "Lautém", "Covalima", "Bobonaro",
    "Manufahi", "Ainaro", "Oecusse", "Ataúru",
];

const ABBREVIATIONS: &[&str] = &["RDTL", "TL", "PN", "PNTL", "ONU", "ASEAN", "UNTL", "F-FDTL"];

/// One planned document: owning topic (if any) and intended grade.
#[derive(Clone, Copy)]
struct Plan {
    topic: Option<usize>,
    grade: u8,
}

struct Writer<'a> {
    rng: &'a mut ChaCha8Rng,
}

impl Writer<'_> {
    fn pick(&mut self, words: &[&'static str]) -> &'static str {
        words.choose(self.rng).expect("non-empty word list")
    }

    fn filler(&mut self) -> &'static str {
        let roll: f64 = self.rng.gen();
        if roll < 0.34 {
            self.pick(FUNCTION_WORDS)
        } else if roll < 0.40 {
            self.pick(PLACES)
        } else if roll < 0.42 {
            self.pick(ABBREVIATIONS)
        } else {
            self.pick(CONTENT_WORDS)
        }
    }

    /// Words of one sentence; `topic_rate` is the chance a slot holds a topic word.
    fn words(&mut self, len: usize, topic: Option<&TopicSpec>, topic_rate: f64) -> Vec<&'static str> {
        (0..len)
            .map(|_| match topic {
                Some(t) if self.rng.gen_bool(topic_rate) => {
                    if self.rng.gen_bool(0.6) {
                        self.pick(t.query_forms)
                    } else {
                        self.pick(t.related)
                    }
                }
                _ => self.filler(),
            })
            .collect()
    }

    fn insert(&mut self, words: &mut Vec<&'static str>, word: &'static str) {
        let at = self.rng.gen_range(0..=words.len());
        words.insert(at, word);
    }

    fn sentence(&mut self, words: &[&str]) -> String {
        let mut s = String::new();
        for (i, w) in words.iter().enumerate() {
            if i > 0 {
                s.push_str(if self.rng.gen_bool(0.08) { ", " } else { " " });
            }
            if i == 0 {
                s.push_str(&capitalize(w));
            } else {
                s.push_str(w);
            }
        }
        s.push('.');
        s
    }
}

fn capitalize(w: &str) -> String {
    let mut chars = w.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn title(w: &mut Writer, plan: Plan) -> String {
    let len = w.rng.gen_range(3..=6);
    let mut words = w.words(len, None, 0.0);
    if let Some(t) = plan.topic.map(|i| &TOPICS[i]) {
        let forms = if plan.grade == 3 { 2 } else { 1 };
        for _ in 0..forms {
            let form = w.pick(t.query_forms);
            w.insert(&mut words, form);
        }
    }
    capitalize(&words.join(" "))
}

fn lead(w: &mut Writer, plan: Plan) -> String {
    let topic = plan.topic.map(|i| &TOPICS[i]);
    let sentences = w.rng.gen_range(1..=2);
    let mut out = Vec::new();
    for s in 0..sentences {
        let len = w.rng.gen_range(8..=16);
        let mut words = w.words(len, None, 0.0);
        if let (Some(t), 0) = (topic, s) {
            for _ in 0..plan.grade.min(2) {
                let form = w.pick(t.query_forms);
                w.insert(&mut words, form);
            }
        }
        out.push(w.sentence(&words));
    }
    let text = out.join(" ");
    if w.rng.gen_bool(0.05) {
        text.replacen(' ', " &amp; ", 1)
    } else {
        text
    }
}

fn content(w: &mut Writer, plan: Plan) -> String {
    let (topic, rate) = match plan.topic {
        Some(i) => (Some(&TOPICS[i]), [0.06, 0.04, 0.12, 0.25][plan.grade as usize]),
        None => (Some(&TOPICS[w.rng.gen_range(0..TOPICS.len())]), 0.02),
    };
    let paragraphs = w.rng.gen_range(2..=5);
    let mut html = String::new();
    if w.rng.gen_bool(0.03) {
        html.push_str("<script>var visits = 0;</script>");
    }
    for _ in 0..paragraphs {
        let sentences = w.rng.gen_range(1..=3);
        let mut para = Vec::new();
        for _ in 0..sentences {
            let len = w.rng.gen_range(6..=14);
            let words = w.words(len, topic, rate);
            let mut s = w.sentence(&words);
            if w.rng.gen_bool(0.1) {
                if let Some(word) = s.split(' ').nth(1).map(str::to_string) {
                    s = s.replacen(&format!(" {word}"), &format!(" <b>{word}</b>"), 1);
                }
            }
            para.push(s);
        }
        let sep = if w.rng.gen_bool(0.1) { "&nbsp; " } else { " " };
        html.push_str(&format!("<p>{}</p>", para.join(sep)));
    }
    html
}

/// Builds the corpus for `seed`. The same seed always yields the same corpus.
pub fn generate(seed: u64) -> SynthCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut plans = Vec::with_capacity(DOC_COUNT);
    for t in 0..TOPICS.len() {
        for i in 0..CLUSTER_SIZE {
            // 8 near misses, then 14 / 18 / 16 of grades 1 / 2 / 3
            let grade = match i {
                0..=7 => 0,
                8..=21 => 1,
                22..=39 => 2,
                _ => 3,
            };
            plans.push(Plan { topic: Some(t), grade });
        }
    }
    while plans.len() < DOC_COUNT {
        plans.push(Plan { topic: None, grade: 0 });
    }
    plans.shuffle(&mut rng);

    let mut documents = Vec::with_capacity(DOC_COUNT);
    let mut truth = Qrels::new();
    for (n, plan) in plans.iter().enumerate() {
        let id = format!("tn{:04}", n + 1);
        let mut w = Writer { rng: &mut rng };
        let title = title(&mut w, *plan);
        let lead = lead(&mut w, *plan);
        let content = content(&mut w, *plan);
        let day = rng.gen_range(0..730);
        let date = chrono::NaiveDate::from_ymd_opt(2021, 1, 1).expect("valid date") + chrono::Days::new(day);
        documents.push(Document {
            url: Some(format!("https://news.example.org/artigu/{id}")),
            published_at: Some(date.format("%Y-%m-%d").to_string()),
            ..Document::new(id.clone(), title, lead, content)
        });
        if let Some(t) = plan.topic {
            truth.insert(TOPICS[t].qid, id, Grade::new(i64::from(plan.grade)).expect("grade in range"));
        }
    }

    let topics = TOPICS.iter().map(|t| Query::new(t.qid, t.text)).collect();
    SynthCorpus { documents, topics, truth }
}

pub fn topics() -> Vec<Query> {
    TOPICS.iter().map(|t| Query::new(t.qid, t.text)).collect()
}

/// Grades from simulated evaluators for every candidate pair. Each evaluator
/// reports the intended grade most of the time and is off by one otherwise.
/// Timestamps advance one minute per judgment from a fixed start.
pub fn simulate_judgments(candidates: &Candidates, truth: &Qrels, evaluators: &[&str], seed: u64) -> Vec<Judgment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = chrono::DateTime::parse_from_rfc3339("2022-07-20T09:00:00Z").expect("valid start");
    let mut out = Vec::new();
    for ev in evaluators {
        for (qid, docid) in candidates.pairs() {
            let intended = truth.grade(qid, docid).map_or(0, |g| g.value()) as i64;
            let roll: f64 = rng.gen();
            let grade = if roll < 0.7 {
                intended
            } else if roll < 0.85 {
                intended - 1
            } else {
                intended + 1
            }
            .clamp(0, i64::from(Grade::MAX));
            let ts = start + chrono::Duration::minutes(out.len() as i64);
            out.push(Judgment {
                qid: qid.to_string(),
                docid: docid.to_string(),
                evaluator_id: ev.to_string(),
                grade: Grade::new(grade).expect("clamped"),
                timestamp: ts.to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape() {
        let c = generate(DEFAULT_SEED);
        assert_eq!(c.documents.len(), DOC_COUNT);
        assert_eq!(c.topics.len(), 5);
        assert_eq!(c.truth.len(), 5 * CLUSTER_SIZE);
        assert_eq!(c.topics[0].text, "opiniaun ba subsidi governu ba funsionario publiko");
        let mut ids: Vec<&str> = c.documents.iter().map(|d| d.id.as_str()).collect();
        ids.dedup();
        assert_eq!(ids.len(), DOC_COUNT);
    }

    #[test]
    fn seeded() {
        assert_eq!(generate(7), generate(7));
        assert_ne!(generate(7).documents, generate(8).documents);
    }

    #[test]
    fn judgments_cover_every_pair() {
        let c = generate(DEFAULT_SEED);
        let mut cand = Candidates::default();
        cand.topics.insert("q1".into(), vec![c.documents[0].id.clone(), c.documents[1].id.clone()]);
        let js = simulate_judgments(&cand, &c.truth, &EVALUATORS, 1);
        assert_eq!(js.len(), 10);
        assert!(js.iter().all(|j| chrono::DateTime::parse_from_rfc3339(&j.timestamp).is_ok()));
        assert_eq!(js, simulate_judgments(&cand, &c.truth, &EVALUATORS, 1));
    }
}
