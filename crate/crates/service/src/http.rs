//! HTTP/1.1 API and the server-sent event stream.

use std::collections::VecDeque;
use std::convert::Infallible;
use std::time::Duration;

use axum::extract::{Path, Query, State};
use axum::http::{HeaderMap, StatusCode};
use axum::response::sse::{Event, Sse};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use futures::stream::{self, Stream};
use miriam_core::mission::plan_to_json;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::Notify;

use crate::hub::{HubError, SharedHub, StreamItem};

pub const HEARTBEAT: Duration = Duration::from_secs(15);

#[derive(Clone)]
pub struct AppState {
    pub hub: SharedHub,
    pub heartbeat: Duration,
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/sessions", post(open_session))
        .route("/api/sessions/:id", axum::routing::delete(close_session))
        .route("/api/sessions/:id/messages", post(post_message))
        .route("/api/sessions/:id/stream", get(stream))
        .route("/api/mission/plan", get(plan))
        .route("/api/mission/progress", get(progress))
        .with_state(state)
}

pub struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

impl From<HubError> for ApiError {
    fn from(e: HubError) -> Self {
        let status = match e {
            HubError::UnknownSession(_) => StatusCode::NOT_FOUND,
            HubError::Superseded => StatusCode::CONFLICT,
        };
        ApiError(status, e.to_string())
    }
}

#[derive(Serialize)]
struct Opened {
    session_id: String,
    greeting: miriam_core::dialogue::ChatMessage,
}

async fn open_session(State(app): State<AppState>) -> impl IntoResponse {
    let (session_id, greeting) = app.hub.lock().unwrap().open_session();
    (StatusCode::CREATED, Json(Opened { session_id, greeting }))
}

async fn close_session(State(app): State<AppState>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    if app.hub.lock().unwrap().close_session(&id) {
        Ok(StatusCode::NO_CONTENT)
    } else {
        Err(HubError::UnknownSession(id).into())
    }
}

#[derive(Deserialize)]
struct PostBody {
    text: String,
}

async fn post_message(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Json(body): Json<PostBody>,
) -> Result<Response, ApiError> {
    let reply = app.hub.lock().unwrap().post(&id, &body.text)?;
    Ok(Json(reply).into_response())
}

async fn plan(State(app): State<AppState>) -> Json<serde_json::Value> {
    let hub = app.hub.lock().unwrap();
    Json(plan_to_json(hub.runtime().store().plan()))
}

async fn progress(State(app): State<AppState>) -> Json<serde_json::Value> {
    let hub = app.hub.lock().unwrap();
    let mut body = serde_json::to_value(hub.progress()).expect("progress serializes");
    body["t"] = json!(hub.runtime().now());
    body["finished"] = json!(hub.runtime().is_finished());
    Json(body)
}

#[derive(Deserialize)]
struct StreamQuery {
    after: Option<u64>,
}

fn chat_event(m: &miriam_core::dialogue::ChatMessage) -> Event {
    Event::default()
        .event("chat")
        .id(m.msg_id.to_string())
        .json_data(m)
        .expect("chat message serializes")
}

fn item_event(item: &StreamItem) -> Event {
    match item {
        StreamItem::Chat(m) => chat_event(m),
        StreamItem::Track(t) => Event::default()
            .event("track")
            .json_data(t)
            .expect("track update serializes"),
    }
}

struct Reader {
    hub: SharedHub,
    id: String,
    reader: u64,
    notify: std::sync::Arc<Notify>,
    pending: VecDeque<Event>,
    heartbeat: Duration,
}

async fn next_event(mut r: Reader) -> Option<(Result<Event, Infallible>, Reader)> {
    loop {
        if let Some(e) = r.pending.pop_front() {
            return Some((Ok(e), r));
        }
        let drained = r.hub.lock().unwrap().drain(&r.id, r.reader);
        match drained {
            Err(_) => return None,
            Ok(items) if !items.is_empty() => {
                r.pending.extend(items.iter().map(item_event));
                continue;
            }
            Ok(_) => {}
        }
        tokio::select! {
            _ = r.notify.notified() => {}
            _ = tokio::time::sleep(r.heartbeat) => {
                let t = r.hub.lock().unwrap().runtime().now();
                let e = Event::default().event("heartbeat").data(json!({ "t": t }).to_string());
                return Some((Ok(e), r));
            }
        }
    }
}

/// `after` wins over a `Last-Event-ID` header; without either the whole
/// chat log is replayed.
async fn stream(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<StreamQuery>,
    headers: HeaderMap,
) -> Result<Sse<impl Stream<Item = Result<Event, Infallible>>>, ApiError> {
    let after = q.after.or_else(|| {
        headers
            .get("last-event-id")
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.parse().ok())
    });
    let sub = app.hub.lock().unwrap().subscribe(&id, after)?;
    let reader = Reader {
        hub: app.hub.clone(),
        id,
        reader: sub.reader,
        notify: sub.notify,
        pending: sub.replay.iter().map(chat_event).collect(),
        heartbeat: app.heartbeat,
    };
    Ok(Sse::new(stream::unfold(reader, next_event)))
}
