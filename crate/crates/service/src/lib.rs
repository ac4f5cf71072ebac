//! JSON-over-HTTP front end for search and relevance judging.
//!
//! | method | path               | purpose                                  |
//! |--------|--------------------|------------------------------------------|
//! | GET    | `/search`          | `q`, `k` (default 10), optional `preset` |
//! | GET    | `/judge/next`      | next pair for `evaluator`                |
//! | POST   | `/judge`           | `{qid, docid, evaluator, grade}`         |
//! | GET    | `/campaign/progress` | per-evaluator and per-topic counts     |
//! | GET    | `/campaign/scale`  | the grading scale and guidelines         |

mod state;

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Query, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tetun_core::analysis::strip_html;
use tetun_core::collection::{Judgment, ScaleLevel, GUIDELINES, RELEVANCE_SCALE};
use tetun_core::evaluation::Grade;
use tetun_core::retrieval::{RetrievalError, SearchStatus};
use tetun_core::{search, Preset};
use tower_http::cors::{Any, CorsLayer};

pub use state::{AppState, Campaign, EvaluatorProgress, Progress, SearchIndex, SetupError, TopicProgress};

pub const DEFAULT_K: usize = 10;

type Shared = Arc<AppState>;

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(json!({ "error": message.into() }))).into_response()
}

#[derive(Debug, Deserialize)]
pub struct SearchParams {
    pub q: Option<String>,
    pub k: Option<usize>,
    pub preset: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hit {
    pub rank: u32,
    pub docid: String,
    pub score: f64,
    pub title: String,
    pub lead: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResponse {
    pub status: SearchStatus,
    pub run_tag: String,
    pub query_terms: Vec<String>,
    pub hits: Vec<Hit>,
}

async fn search_handler(State(state): State<Shared>, Query(params): Query<SearchParams>) -> Response {
    let Some(served) = &state.index else {
        return error(StatusCode::SERVICE_UNAVAILABLE, "no index loaded");
    };
    let k = params.k.unwrap_or(DEFAULT_K);
    if k == 0 {
        return error(StatusCode::BAD_REQUEST, "k must be at least 1");
    }
    if let Some(p) = params.preset.as_deref().filter(|p| !p.is_empty()) {
        match p.parse::<Preset>() {
            Ok(preset) if preset.config() == served.config => {}
            Ok(_) => {
                return error(
                    StatusCode::BAD_REQUEST,
                    format!("preset {p:?} is not served; the index uses {:?}", served.index.analyzer_id()),
                )
            }
            Err(e) => return error(StatusCode::BAD_REQUEST, e.to_string()),
        }
    }
    let text = params.q.unwrap_or_default();
    let query = tetun_core::Query::new("q", text);
    let results = match search(&served.index, &query, &served.config, &state.lexicons, k, &state.params) {
        Ok(r) => r,
        Err(RetrievalError::InvalidCutoff) => return error(StatusCode::BAD_REQUEST, "k must be at least 1"),
        Err(e) => return error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    };
    let run_tag = tetun_core::retrieval::run_tag(served.index.analyzer_id(), served.index.scheme());
    if results.status == SearchStatus::EmptyQuery {
        let body = SearchResponse { status: results.status, run_tag, query_terms: vec![], hits: vec![] };
        return (StatusCode::BAD_REQUEST, Json(body)).into_response();
    }
    let hits = results
        .entries
        .into_iter()
        .map(|e| {
            let doc = &state.documents[&e.docid];
            Hit { rank: e.rank, score: e.score, title: strip_html(&doc.title), lead: strip_html(&doc.lead), docid: e.docid }
        })
        .collect();
    Json(SearchResponse { status: results.status, run_tag, query_terms: results.query_terms, hits }).into_response()
}

#[derive(Debug, Deserialize)]
pub struct NextParams {
    pub evaluator: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderedDocument {
    pub title: String,
    pub lead: String,
    pub content: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NextPair {
    pub qid: String,
    pub query: String,
    pub docid: String,
    pub document: RenderedDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NextResponse {
    /// True once the evaluator has judged every pair.
    pub done: bool,
    pub judged: usize,
    pub total: usize,
    pub next: Option<NextPair>,
    pub scale: Vec<ScaleLevelView>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleLevelView {
    pub grade: u8,
    pub label: String,
    pub description: String,
}

impl From<&ScaleLevel> for ScaleLevelView {
    fn from(l: &ScaleLevel) -> Self {
        Self { grade: l.grade, label: l.label.into(), description: l.description.into() }
    }
}

fn scale() -> Vec<ScaleLevelView> {
    RELEVANCE_SCALE.iter().map(ScaleLevelView::from).collect()
}

fn campaign_or_503(state: &AppState) -> Result<&Campaign, Response> {
    state.campaign.as_ref().ok_or_else(|| error(StatusCode::SERVICE_UNAVAILABLE, "no judging campaign active"))
}

async fn next_handler(State(state): State<Shared>, Query(params): Query<NextParams>) -> Response {
    let campaign = match campaign_or_503(&state) {
        Ok(c) => c,
        Err(r) => return r,
    };
    let evaluator = params.evaluator.unwrap_or_default();
    if !campaign.evaluators.contains(&evaluator) {
        return error(StatusCode::FORBIDDEN, format!("unknown evaluator {evaluator:?}"));
    }
    let next = campaign.next_for(&evaluator).map(|(qid, docid)| {
        let doc = &state.documents[&docid];
        NextPair {
            query: campaign.topics.get(&qid).map(|q| q.text.clone()).unwrap_or_default(),
            document: RenderedDocument {
                title: strip_html(&doc.title),
                lead: strip_html(&doc.lead),
                content: strip_html(&doc.content),
            },
            qid,
            docid,
        }
    });
    Json(NextResponse {
        done: next.is_none(),
        judged: campaign.judged_by(&evaluator),
        total: campaign.total_pairs(),
        next,
        scale: scale(),
    })
    .into_response()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JudgeRequest {
    pub qid: String,
    pub docid: String,
    pub evaluator: String,
    pub grade: i64,
}

async fn judge_handler(State(state): State<Shared>, Json(req): Json<JudgeRequest>) -> Response {
    let campaign = match campaign_or_503(&state) {
        Ok(c) => c,
        Err(r) => return r,
    };
    if !campaign.evaluators.contains(&req.evaluator) {
        return error(StatusCode::FORBIDDEN, format!("unknown evaluator {:?}", req.evaluator));
    }
    let Some(grade) = Grade::new(req.grade) else {
        return error(StatusCode::UNPROCESSABLE_ENTITY, format!("grade {} is outside 0..=3", req.grade));
    };
    if !campaign.candidates.contains(&req.qid, &req.docid) {
        return error(
            StatusCode::UNPROCESSABLE_ENTITY,
            format!("pair {} {} is not part of the campaign", req.qid, req.docid),
        );
    }
    let judgment = Judgment {
        qid: req.qid,
        docid: req.docid,
        evaluator_id: req.evaluator.clone(),
        grade,
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
    };
    if let Err(e) = campaign.record(judgment) {
        return error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string());
    }
    Json(json!({
        "ok": true,
        "judged": campaign.judged_by(&req.evaluator),
        "total": campaign.total_pairs(),
    }))
    .into_response()
}

async fn progress_handler(State(state): State<Shared>) -> Response {
    match campaign_or_503(&state) {
        Ok(c) => Json(c.progress()).into_response(),
        Err(r) => r,
    }
}

async fn scale_handler() -> Response {
    Json(json!({ "scale": scale(), "guidelines": GUIDELINES })).into_response()
}

/// All routes. `cors_origin` of `None` allows any origin.
pub fn router(state: AppState, cors_origin: Option<&str>) -> Router {
    let cors = CorsLayer::new().allow_methods(Any).allow_headers(Any);
    let cors = match cors_origin.and_then(|o| HeaderValue::from_str(o).ok()) {
        Some(origin) => cors.allow_origin(origin),
        None => cors.allow_origin(Any),
    };
    Router::new()
        .route("/search", get(search_handler))
        .route("/judge/next", get(next_handler))
        .route("/judge", axum::routing::post(judge_handler))
        .route("/campaign/progress", get(progress_handler))
        .route("/campaign/scale", get(scale_handler))
        .layer(cors)
        .with_state(Arc::new(state))
}

/// Serves until ctrl-c.
pub async fn serve(state: AppState, addr: SocketAddr, cors_origin: Option<&str>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state, cors_origin))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
