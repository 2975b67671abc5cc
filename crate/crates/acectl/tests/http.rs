use std::time::{Duration, Instant};

use ace_core::fixtures::simplemat_lexicon;
use acectl::service::{router, AppState};
use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

const SENTENCE_1: &str = "The customer enters a card and a numeric personal code that SimpleMat checks.";
const SENTENCE_2: &str = "If the personal code is not valid then SM rejects the card.";

struct Client {
    app: Router,
    rt: tokio::runtime::Runtime,
}

impl Client {
    fn new() -> Self {
        Client {
            app: router(AppState::new(simplemat_lexicon())),
            rt: tokio::runtime::Builder::new_current_thread().build().unwrap(),
        }
    }

    fn call(&self, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
        let req = Request::builder().method(method).uri(uri);
        let req = match body {
            Some(b) => req
                .header("content-type", "application/json")
                .body(Body::from(b.to_string())),
            None => req.body(Body::empty()),
        }
        .unwrap();
        self.rt.block_on(async {
            let resp = self.app.clone().oneshot(req).await.unwrap();
            let status = resp.status();
            let bytes = resp.into_body().collect().await.unwrap().to_bytes();
            (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
        })
    }

    fn post(&self, uri: &str, body: Value) -> (StatusCode, Value) {
        self.call(Method::POST, uri, Some(body))
    }

    fn get(&self, uri: &str) -> Value {
        let (status, v) = self.call(Method::GET, uri, None);
        assert_eq!(status, StatusCode::OK, "{uri}: {v}");
        v
    }

    fn session(&self) -> String {
        let (_, v) = self.call(Method::POST, "/sessions", None);
        v["id"].as_str().unwrap().to_string()
    }

    fn add(&self, id: &str, text: &str) {
        let (_, v) = self.post(&format!("/sessions/{id}/sentences"), json!({ "text": text }));
        assert_eq!(v["status"], "ok", "{v}");
        let (status, v) = self.call(Method::POST, &format!("/sessions/{id}/accept"), None);
        assert_eq!(status, StatusCode::OK, "{v}");
    }

    fn ask(&self, id: &str, q: &str) -> String {
        let (_, v) = self.post(&format!("/sessions/{id}/query"), json!({ "text": q }));
        v["answer"].as_str().unwrap_or_default().to_string()
    }

    /// Polls the event log until the run finishes or waits for an answer.
    fn settle(&self, id: &str, since: usize) -> Value {
        let start = Instant::now();
        loop {
            let v = self.get(&format!("/sessions/{id}/exec/events?since={since}"));
            if v["finished"] == true || v["waiting"] == true {
                return v;
            }
            assert!(start.elapsed() < Duration::from_secs(10), "execution did not settle");
            std::thread::sleep(Duration::from_millis(5));
        }
    }
}

fn kinds(events: &Value) -> Vec<String> {
    events
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["kind"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn submit_accept_and_kb() {
    let c = Client::new();
    let id = c.session();
    let (status, v) = c.post(&format!("/sessions/{id}/sentences"), json!({ "text": SENTENCE_1 }));
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["status"], "ok");
    assert_eq!(
        v["paraphrase"],
        "The customer enters a card and the customer enters a numeric personal code that SimpleMat checks."
    );
    assert!(v["drs"].as_str().unwrap().starts_with("drs([A,B,C,D],[gender(A,masc)"));
    // Staged only: nothing asserted yet.
    assert_eq!(c.get(&format!("/sessions/{id}/kb"))["kb"], "% fact/1\n");

    c.call(Method::POST, &format!("/sessions/{id}/accept"), None);
    c.add(&id, SENTENCE_2);
    let kb = c.get(&format!("/sessions/{id}/kb"))["kb"].as_str().unwrap().to_string();
    assert_eq!(kb.lines().count(), 10);
    assert!(kb.ends_with("fact((reject(3, 1):-neg(valid(2)))).\n"));

    let drs = c.get(&format!("/sessions/{id}/drs"));
    assert!(drs["drs"].as_str().unwrap().ends_with("drs([],[reject(D,B)]))])"));
    assert!(drs["resolved"].as_str().unwrap().contains("the(card(G)), G=B"));
}

#[test]
fn discard_leaves_kb_unchanged() {
    let c = Client::new();
    let id = c.session();
    c.add(&id, SENTENCE_1);
    let before = c.get(&format!("/sessions/{id}/kb"));
    c.post(&format!("/sessions/{id}/sentences"), json!({ "text": SENTENCE_2 }));
    let (_, v) = c.call(Method::POST, &format!("/sessions/{id}/discard"), None);
    assert_eq!(v["discarded"], 1);
    assert_eq!(c.get(&format!("/sessions/{id}/kb")), before);
}

#[test]
fn errors_carry_kind_and_position() {
    let c = Client::new();
    let id = c.session();
    let (status, v) = c.post(&format!("/sessions/{id}/sentences"), json!({ "text": "The custmer enters a card." }));
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["status"], "error");
    assert_eq!(v["errors"][0]["kind"], "unknown-word");
    assert_eq!(v["errors"][0]["words"], json!(["custmer"]));
    assert_eq!(v["errors"][0]["pos"], json!({"sentence": 0, "token": 1}));

    let (status, v) = c.post(&format!("/sessions/{id}/query"), json!({ "text": "Does the bank wait?" }));
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["status"], "error");

    let (status, v) = c.call(Method::GET, "/sessions/nope/kb", None);
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(v["error"]["kind"], "unknown-session");
}

#[test]
fn queries_and_lexicon_edit() {
    let c = Client::new();
    let id = c.session();
    c.add(&id, SENTENCE_1);
    c.add(&id, SENTENCE_2);
    assert_eq!(c.ask(&id, "Does SimpleMat reject the card?"), "Yes.");
    assert_eq!(c.ask(&id, "Who enters a card?"), "The customer.");
    c.add(&id, "The personal code is valid.");
    assert_eq!(c.ask(&id, "Does SimpleMat reject the card?"), "No.");

    let (_, v) = c.post(&format!("/sessions/{id}/sentences"), json!({ "text": "A clerk waits." }));
    assert_eq!(v["errors"][0]["kind"], "unknown-word");
    let (status, _) = c.post(
        &format!("/sessions/{id}/lexicon"),
        json!({ "record": "noun(clerk, clerks, masc, count)." }),
    );
    assert_eq!(status, StatusCode::OK);
    let records = c.get(&format!("/sessions/{id}/lexicon"))["records"].clone();
    assert!(records.as_array().unwrap().iter().any(|r| r == "noun(clerk, clerks, masc, count)."));
    c.add(&id, "A clerk waits.");

    let (status, v) = c.post(&format!("/sessions/{id}/lexicon"), json!({ "record": "noun(card)." }));
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"]["kind"], "parse-error");
}

#[test]
fn exec_events_for_simplemat() {
    let c = Client::new();
    let id = c.session();
    c.add(&id, SENTENCE_1);
    c.add(&id, SENTENCE_2);
    let (status, _) = c.post(&format!("/sessions/{id}/exec"), json!({}));
    assert_eq!(status, StatusCode::OK);
    let v = c.settle(&id, 0);
    assert_eq!(kinds(&v["events"]), ["trace", "trace", "trace", "trace", "done"]);
    assert_eq!(v["events"][3]["text"], "event: SimpleMat rejects the card");
    let later = c.get(&format!("/sessions/{id}/exec/events?since=4"));
    assert_eq!(kinds(&later["events"]), ["done"]);
}

#[test]
fn exec_prompt_and_answer() {
    let c = Client::new();
    let id = c.session();
    c.add(&id, "Every customer has a card.");
    c.post(&format!("/sessions/{id}/exec"), json!({}));
    let v = c.settle(&id, 0);
    assert_eq!(v["waiting"], true);
    assert_eq!(v["events"], json!([{"kind": "prompt", "text": "Please enter a customer:"}]));

    let (status, _) = c.post(&format!("/sessions/{id}/exec/answer"), json!({ "text": "John" }));
    assert_eq!(status, StatusCode::OK);
    let v = c.settle(&id, 1);
    assert_eq!(v["finished"], true);
    assert_eq!(
        v["events"],
        json!([{"kind": "trace", "text": "event: John has a card"}, {"kind": "done"}])
    );

    let (status, v) = c.post(&format!("/sessions/{id}/exec/answer"), json!({ "text": "Mary" }));
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(v["error"]["kind"], "no-prompt");
}

#[test]
fn exec_with_scripted_answers() {
    let c = Client::new();
    let id = c.session();
    c.add(&id, "Every customer has a card.");
    c.post(&format!("/sessions/{id}/exec"), json!({ "answers": ["John"] }));
    let v = c.settle(&id, 0);
    assert_eq!(kinds(&v["events"]), ["trace", "done"]);
}

#[test]
fn save_and_load_replays() {
    let c = Client::new();
    let id = c.session();
    c.post(&format!("/sessions/{id}/lexicon"), json!({ "record": "noun(clerk, clerks, masc, count)." }));
    c.add(&id, SENTENCE_1);
    c.add(&id, "A clerk waits.");
    let file = c.get(&format!("/sessions/{id}/save"));
    let (status, v) = c.post("/sessions/load", file);
    assert_eq!(status, StatusCode::OK);
    let copy = v["id"].as_str().unwrap();
    assert_ne!(copy, id);
    assert_eq!(c.get(&format!("/sessions/{copy}/kb")), c.get(&format!("/sessions/{id}/kb")));
}

#[test]
fn service_and_library_dumps_agree() {
    let c = Client::new();
    let id = c.session();
    c.add(&id, &format!("{SENTENCE_1} {SENTENCE_2}"));
    let mut s = ace_core::session::Session::new(simplemat_lexicon());
    s.add(&format!("{SENTENCE_1} {SENTENCE_2}")).unwrap();
    assert_eq!(c.get(&format!("/sessions/{id}/kb"))["kb"], s.kb_dump());
    assert_eq!(c.get(&format!("/sessions/{id}/drs"))["drs"], s.drs().dump());
}
