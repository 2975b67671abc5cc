//! Sessions over HTTP. Each session sits behind its own mutex so requests
//! to one session are serialized while different sessions proceed
//! independently. An execution runs on its own thread; prompts it raises
//! are answered through `POST /sessions/{id}/exec/answer`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc::{channel, Receiver, Sender};
use std::sync::{Arc, Mutex, MutexGuard};
use std::thread;

use ace_core::executor::{Env, ExecEvent, ExecOptions, Prompt};
use ace_core::lexicon::Lexicon;
use ace_core::session::{Session, SessionFile};
use ace_core::ErrorReport;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Default)]
struct ExecLog {
    events: Vec<ExecEvent>,
    waiting: bool,
    finished: bool,
}

struct ExecRun {
    log: Arc<Mutex<ExecLog>>,
    answers: Sender<String>,
}

struct Slot {
    session: Session,
    exec: Option<ExecRun>,
}

pub struct AppState {
    base: Lexicon,
    depth_limit: Option<usize>,
    next: AtomicU64,
    sessions: Mutex<HashMap<String, Arc<Mutex<Slot>>>>,
}

type Shared = Arc<AppState>;

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

impl AppState {
    pub fn new(base: Lexicon) -> Self {
        AppState {
            base,
            depth_limit: None,
            next: AtomicU64::new(1),
            sessions: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_depth_limit(mut self, limit: usize) -> Self {
        self.depth_limit = Some(limit);
        self
    }

    fn insert(&self, mut session: Session) -> String {
        if let Some(d) = self.depth_limit {
            session.set_depth_limit(d);
        }
        let id = format!("s{}", self.next.fetch_add(1, Ordering::Relaxed));
        lock(&self.sessions).insert(id.clone(), Arc::new(Mutex::new(Slot { session, exec: None })));
        id
    }

    fn slot(&self, id: &str) -> Result<Arc<Mutex<Slot>>, ApiError> {
        lock(&self.sessions)
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "unknown-session", format!("no session `{id}`")))
    }
}

pub struct ApiError {
    status: StatusCode,
    report: ErrorReport,
}

impl ApiError {
    fn new(status: StatusCode, kind: &str, message: String) -> Self {
        ApiError {
            status,
            report: ErrorReport {
                kind: kind.into(),
                message,
                pos: None,
                words: Vec::new(),
            },
        }
    }
}

impl From<ace_core::Error> for ApiError {
    fn from(e: ace_core::Error) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            report: e.report(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({"status": "error", "error": self.report}))).into_response()
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/load", post(load))
        .route("/sessions/{id}/sentences", post(submit))
        .route("/sessions/{id}/accept", post(accept))
        .route("/sessions/{id}/discard", post(discard))
        .route("/sessions/{id}/query", post(query))
        .route("/sessions/{id}/kb", get(kb))
        .route("/sessions/{id}/drs", get(drs))
        .route("/sessions/{id}/lexicon", get(lexicon).post(edit_lexicon))
        .route("/sessions/{id}/save", get(save))
        .route("/sessions/{id}/exec", post(exec))
        .route("/sessions/{id}/exec/events", get(events))
        .route("/sessions/{id}/exec/answer", post(answer))
        .with_state(Arc::new(state))
}

async fn create(State(st): State<Shared>) -> ApiResult {
    let id = st.insert(Session::new(st.base.clone()));
    Ok(Json(json!({ "id": id })))
}

async fn load(State(st): State<Shared>, Json(file): Json<SessionFile>) -> ApiResult {
    let session = Session::load(st.base.clone(), &file)?;
    let id = st.insert(session);
    Ok(Json(json!({ "id": id })))
}

#[derive(Deserialize)]
struct Text {
    text: String,
}

async fn submit(State(st): State<Shared>, Path(id): Path<String>, Json(body): Json<Text>) -> ApiResult {
    let slot = st.slot(&id)?;
    let mut slot = lock(&slot);
    let sub = slot.session.submit(&body.text);
    let warnings: Vec<_> = sub.sentences.iter().flat_map(|s| s.warnings.clone()).collect();
    Ok(Json(json!({
        "status": sub.status,
        "paraphrase": sub.paraphrase(),
        "drs": sub.drs,
        "sentences": sub.sentences,
        "warnings": warnings,
        "errors": sub.error.into_iter().collect::<Vec<_>>(),
    })))
}

async fn accept(State(st): State<Shared>, Path(id): Path<String>) -> ApiResult {
    let slot = st.slot(&id)?;
    let mut slot = lock(&slot);
    let warnings = slot.session.accept()?;
    Ok(Json(json!({
        "status": "ok",
        "warnings": warnings,
        "kb": slot.session.kb_dump(),
    })))
}

async fn discard(State(st): State<Shared>, Path(id): Path<String>) -> ApiResult {
    let slot = st.slot(&id)?;
    let dropped = lock(&slot).session.discard();
    Ok(Json(json!({ "status": "ok", "discarded": dropped })))
}

async fn query(State(st): State<Shared>, Path(id): Path<String>, Json(body): Json<Text>) -> ApiResult {
    let slot = st.slot(&id)?;
    let answer = lock(&slot).session.query(&body.text)?;
    Ok(Json(serde_json::to_value(answer).expect("answer serializes")))
}

async fn kb(State(st): State<Shared>, Path(id): Path<String>) -> ApiResult {
    let slot = st.slot(&id)?;
    Ok(Json(json!({ "kb": lock(&slot).session.kb_dump() })))
}

async fn drs(State(st): State<Shared>, Path(id): Path<String>) -> ApiResult {
    let slot = st.slot(&id)?;
    let slot = lock(&slot);
    Ok(Json(json!({
        "drs": slot.session.drs().dump(),
        "resolved": slot.session.discourse().drs.dump(),
    })))
}

async fn lexicon(State(st): State<Shared>, Path(id): Path<String>) -> ApiResult {
    let slot = st.slot(&id)?;
    let records: Vec<String> = lock(&slot).session.lexicon().save().lines().map(String::from).collect();
    Ok(Json(json!({ "records": records })))
}

#[derive(Deserialize)]
struct Record {
    record: String,
}

async fn edit_lexicon(State(st): State<Shared>, Path(id): Path<String>, Json(body): Json<Record>) -> ApiResult {
    let slot = st.slot(&id)?;
    lock(&slot).session.edit_lexicon(&body.record)?;
    Ok(Json(json!({ "status": "ok" })))
}

async fn save(State(st): State<Shared>, Path(id): Path<String>) -> ApiResult {
    let slot = st.slot(&id)?;
    let file = lock(&slot).session.save();
    Ok(Json(serde_json::to_value(file).expect("session file serializes")))
}

/// Scripted answers first, then whatever the client posts.
struct ChannelEnv {
    scripted: std::vec::IntoIter<String>,
    replies: Receiver<String>,
    log: Arc<Mutex<ExecLog>>,
}

impl Env for ChannelEnv {
    fn answer(&mut self, prompt: &Prompt) -> Option<String> {
        if let Some(a) = self.scripted.next() {
            return Some(a);
        }
        {
            let mut log = lock(&self.log);
            log.events.push(ExecEvent::Prompt {
                text: prompt.text.clone(),
            });
            log.waiting = true;
        }
        let reply = self.replies.recv().ok();
        lock(&self.log).waiting = false;
        reply
    }

    fn emit(&mut self, event: ExecEvent) {
        // Prompts are logged when the run actually blocks on them.
        if !matches!(event, ExecEvent::Prompt { .. }) {
            lock(&self.log).events.push(event);
        }
    }
}

#[derive(Deserialize, Default)]
struct ExecBody {
    #[serde(default)]
    answers: Vec<String>,
    #[serde(default)]
    scaffold: Option<String>,
    #[serde(default)]
    raw: bool,
}

async fn exec(State(st): State<Shared>, Path(id): Path<String>, body: Option<Json<ExecBody>>) -> ApiResult {
    let body = body.map(|Json(b)| b).unwrap_or_default();
    let slot = st.slot(&id)?;
    let mut slot = lock(&slot);
    if let Some(run) = &slot.exec {
        if !lock(&run.log).finished {
            return Err(ApiError::new(
                StatusCode::CONFLICT,
                "exec-running",
                "an execution is already running in this session".into(),
            ));
        }
    }
    let log = Arc::new(Mutex::new(ExecLog::default()));
    let (tx, rx) = channel();
    let session = slot.session.clone();
    let mut env = ChannelEnv {
        scripted: body.answers.into_iter(),
        replies: rx,
        log: log.clone(),
    };
    let opts = ExecOptions {
        raw: body.raw,
        depth_limit: session.depth_limit(),
        ..ExecOptions::default()
    };
    let finished = log.clone();
    thread::spawn(move || {
        let r = session.execute(body.scaffold.as_deref(), &opts, &mut env);
        let mut log = lock(&finished);
        // Errors raised before the executor started (scaffold, KB) have no event yet.
        if let Err(e) = r {
            if !matches!(log.events.last(), Some(ExecEvent::Error { .. })) {
                log.events.push(ExecEvent::Error { text: e.report().to_string() });
            }
        }
        log.finished = true;
    });
    slot.exec = Some(ExecRun { log, answers: tx });
    Ok(Json(json!({ "status": "started" })))
}

#[derive(Deserialize)]
struct Since {
    #[serde(default)]
    since: usize,
}

async fn events(State(st): State<Shared>, Path(id): Path<String>, Query(q): Query<Since>) -> ApiResult {
    let slot = st.slot(&id)?;
    let slot = lock(&slot);
    let Some(run) = &slot.exec else {
        return Err(ApiError::new(StatusCode::NOT_FOUND, "no-exec", "no execution has been started".into()));
    };
    let log = lock(&run.log);
    let from = q.since.min(log.events.len());
    Ok(Json(json!({
        "events": &log.events[from..],
        "next": log.events.len(),
        "waiting": log.waiting,
        "finished": log.finished,
    })))
}

async fn answer(State(st): State<Shared>, Path(id): Path<String>, Json(body): Json<Text>) -> ApiResult {
    let slot = st.slot(&id)?;
    let slot = lock(&slot);
    let run = slot
        .exec
        .as_ref()
        .ok_or_else(|| ApiError::new(StatusCode::CONFLICT, "no-prompt", "no execution is waiting for an answer".into()))?;
    let mut log = lock(&run.log);
    if !log.waiting {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            "no-prompt",
            "no execution is waiting for an answer".into(),
        ));
    }
    log.waiting = false;
    run.answers
        .send(body.text)
        .map_err(|_| ApiError::new(StatusCode::CONFLICT, "no-prompt", "the execution has ended".into()))?;
    Ok(Json(json!({ "status": "ok" })))
}
