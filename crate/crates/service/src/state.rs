use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use parking_lot::RwLock;
use thiserror::Error;
use tetun_core::collection::{Candidates, CollectionError, Journal, Judgment};
use tetun_core::corpus::TopicSet;
use tetun_core::{AnalyzerConfig, Bm25Params, Document, InvertedIndex, Lexicons};

#[derive(Debug, Error)]
pub enum SetupError {
    #[error("index analyzer {0:?} is not a known configuration")]
    UnknownAnalyzer(String),
    #[error("index document {0:?} is missing from the corpus")]
    MissingDocument(String),
    #[error("candidate topic {0:?} is not in the topic file")]
    UnknownTopic(String),
    #[error("candidate document {0:?} is missing from the corpus")]
    UnknownCandidate(String),
    #[error("the evaluator roster is empty")]
    NoEvaluators,
    #[error("the campaign has no candidate pairs")]
    NoCandidates,
    #[error(transparent)]
    Journal(#[from] CollectionError),
}

/// The index being served together with what search needs around it.
#[derive(Debug)]
pub struct SearchIndex {
    pub index: InvertedIndex,
    pub config: AnalyzerConfig,
}

/// A judging campaign. Candidates are fixed when the campaign opens.
#[derive(Debug)]
pub struct Campaign {
    pub topics: TopicSet,
    pub candidates: Candidates,
    pub evaluators: BTreeSet<String>,
    journal: RwLock<Journal>,
}

impl Campaign {
    /// Opens (or creates) the journal at `journal` and replays it.
    pub fn open(
        topics: TopicSet,
        candidates: Candidates,
        evaluators: impl IntoIterator<Item = String>,
        journal: impl AsRef<Path>,
    ) -> Result<Self, SetupError> {
        let evaluators: BTreeSet<String> = evaluators.into_iter().filter(|e| !e.is_empty()).collect();
        if evaluators.is_empty() {
            return Err(SetupError::NoEvaluators);
        }
        if candidates.pair_count() == 0 {
            return Err(SetupError::NoCandidates);
        }
        if let Some(qid) = candidates.topics.keys().find(|q| topics.get(q).is_none()) {
            return Err(SetupError::UnknownTopic(qid.clone()));
        }
        let journal = Journal::open(journal)?;
        Ok(Self { topics, candidates, evaluators, journal: RwLock::new(journal) })
    }

    pub fn total_pairs(&self) -> usize {
        self.candidates.pair_count()
    }

    /// First pair the evaluator has not judged, topics in qid order and
    /// documents in selection order.
    pub fn next_for(&self, evaluator: &str) -> Option<(String, String)> {
        let journal = self.journal.read();
        self.candidates
            .pairs()
            .find(|(q, d)| journal.get(q, d, evaluator).is_none())
            .map(|(q, d)| (q.to_string(), d.to_string()))
    }

    pub fn judged_by(&self, evaluator: &str) -> usize {
        let journal = self.journal.read();
        self.candidates.pairs().filter(|(q, d)| journal.get(q, d, evaluator).is_some()).count()
    }

    /// Appends one judgment. Concurrent submissions are serialized here.
    pub fn record(&self, judgment: Judgment) -> Result<(), CollectionError> {
        self.journal.write().append(judgment)
    }

    pub fn journal_lines(&self) -> usize {
        self.journal.read().line_count()
    }

    /// Latest judgment of every evaluator on campaign pairs.
    pub fn latest(&self) -> Vec<Judgment> {
        let journal = self.journal.read();
        journal
            .latest()
            .values()
            .filter(|j| self.evaluators.contains(&j.evaluator_id) && self.candidates.contains(&j.qid, &j.docid))
            .cloned()
            .collect()
    }

    pub fn progress(&self) -> Progress {
        let latest = self.latest();
        let total = self.total_pairs();
        let mut by_evaluator: BTreeMap<&str, usize> = self.evaluators.iter().map(|e| (e.as_str(), 0)).collect();
        let mut by_topic: BTreeMap<&str, usize> = self.candidates.topics.keys().map(|q| (q.as_str(), 0)).collect();
        for j in &latest {
            *by_evaluator.get_mut(j.evaluator_id.as_str()).expect("filtered") += 1;
            *by_topic.get_mut(j.qid.as_str()).expect("filtered") += 1;
        }
        Progress {
            total_pairs: total,
            judgments: latest.len(),
            evaluators: by_evaluator
                .into_iter()
                .map(|(e, judged)| EvaluatorProgress { evaluator: e.to_string(), judged, total })
                .collect(),
            topics: by_topic
                .into_iter()
                .map(|(q, judged)| TopicProgress {
                    qid: q.to_string(),
                    judged,
                    total: self.candidates.topics[q].len() * self.evaluators.len(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct EvaluatorProgress {
    pub evaluator: String,
    pub judged: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TopicProgress {
    pub qid: String,
    /// Judgments over all evaluators.
    pub judged: usize,
    /// Candidates × evaluators.
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Progress {
    pub total_pairs: usize,
    /// Distinct (qid, docid, evaluator) judgments.
    pub judgments: usize,
    pub evaluators: Vec<EvaluatorProgress>,
    pub topics: Vec<TopicProgress>,
}

/// Everything the service holds. Only the journal changes after start-up.
#[derive(Debug)]
pub struct AppState {
    pub documents: HashMap<String, Document>,
    pub lexicons: Lexicons,
    pub params: Bm25Params,
    pub index: Option<SearchIndex>,
    pub campaign: Option<Campaign>,
}

impl AppState {
    pub fn new(documents: Vec<Document>, lexicons: Lexicons, params: Bm25Params) -> Self {
        Self {
            documents: documents.into_iter().map(|d| (d.id.clone(), d)).collect(),
            lexicons,
            params,
            index: None,
            campaign: None,
        }
    }

    pub fn with_index(mut self, index: InvertedIndex) -> Result<Self, SetupError> {
        let config = index
            .analyzer_config()
            .map_err(|_| SetupError::UnknownAnalyzer(index.analyzer_id().to_string()))?;
        if let Some(id) = index.doc_ids().iter().find(|id| !self.documents.contains_key(*id)) {
            return Err(SetupError::MissingDocument(id.clone()));
        }
        self.index = Some(SearchIndex { index, config });
        Ok(self)
    }

    pub fn with_campaign(mut self, campaign: Campaign) -> Result<Self, SetupError> {
        if let Some((_, d)) = campaign.candidates.pairs().find(|(_, d)| !self.documents.contains_key(*d)) {
            return Err(SetupError::UnknownCandidate(d.to_string()));
        }
        self.campaign = Some(campaign);
        Ok(self)
    }
}
