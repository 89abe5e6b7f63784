//! JSON-over-HTTP API for graph editing and algorithm runs.

use std::path::Path;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, patch, post};
use axum::{Json, Router};
use route_core::format::{EdgeRecord, NodeRecord};
use route_core::{EdgeId, Error, Graph, Mutation, MutationOutcome, NodeId};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::json;

use crate::run::{run_algorithm, AlgorithmRequest};
use crate::store::{GraphStore, StoreError};

pub type AppState = Arc<GraphStore>;

pub fn router(store: AppState) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/graphs", post(create_graph))
        .route("/graphs/{id}", get(get_graph).put(put_graph))
        .route("/graphs/{id}/nodes", post(add_node))
        .route("/graphs/{id}/nodes/{nid}", patch(update_node).delete(remove_node))
        .route("/graphs/{id}/edges", post(add_edge))
        .route("/graphs/{id}/edges/{eid}", delete(remove_edge))
        .route("/graphs/{id}/run", post(run))
        .route("/graphs/{id}/overlay", get(overlay))
        .with_state(store)
}

#[derive(Debug)]
pub enum ApiError {
    BadRequest(String),
    NotFound(String),
    Conflict(String),
    Unprocessable(String),
    Internal(String),
}

impl ApiError {
    fn status(&self) -> StatusCode {
        match self {
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::Conflict(_) => StatusCode::CONFLICT,
            ApiError::Unprocessable(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::UnknownNode(_) | Error::UnknownEdge(_) => ApiError::NotFound(msg),
            e if e.is_invariant_violation() => ApiError::Conflict(msg),
            _ => ApiError::Unprocessable(msg),
        }
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::NotFound(_) => ApiError::NotFound(e.to_string()),
            StoreError::InvalidId(_) => ApiError::BadRequest(e.to_string()),
            StoreError::Graph(g) => g.into(),
            StoreError::Io(_) => {
                tracing::error!(error = %e, "store write failed");
                ApiError::Internal(e.to_string())
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = self.status();
        let (ApiError::BadRequest(m)
        | ApiError::NotFound(m)
        | ApiError::Conflict(m)
        | ApiError::Unprocessable(m)
        | ApiError::Internal(m)) = self;
        (status, Json(json!({ "error": m }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn parse<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::BadRequest(e.to_string()))
}

/// Graph bodies: bad JSON is a 400, a well-formed document that breaks a
/// graph invariant is a 409.
fn parse_graph(body: &Bytes) -> ApiResult<Graph> {
    let text = std::str::from_utf8(body).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    route_core::format::from_json(text).map_err(|e| match e {
        Error::Malformed(m) => ApiError::BadRequest(m),
        other => ApiError::Conflict(other.to_string()),
    })
}

async fn healthz() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

#[derive(Serialize)]
struct GraphEnvelope<'a> {
    id: &'a str,
    graph: &'a Graph,
}

async fn create_graph(State(store): State<AppState>, body: Bytes) -> ApiResult<Response> {
    let graph = parse_graph(&body)?;
    let id = store.create(graph)?;
    let g = store.get(&id)?;
    Ok((StatusCode::CREATED, Json(GraphEnvelope { id: &id, graph: &g })).into_response())
}

async fn get_graph(State(store): State<AppState>, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Graph>> {
    Ok(Json(Graph::clone(&*store.get(&id)?)))
}

async fn put_graph(
    State(store): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> ApiResult<Response> {
    let graph = parse_graph(&body)?;
    let created = store.put(&id, graph)?;
    let g = store.get(&id)?;
    let status = if created { StatusCode::CREATED } else { StatusCode::OK };
    Ok((status, Json(GraphEnvelope { id: &id, graph: &g })).into_response())
}

#[derive(Deserialize)]
struct NewNode {
    x: f64,
    y: f64,
    #[serde(default)]
    label: Option<String>,
}

async fn add_node(
    State(store): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> ApiResult<Response> {
    let req: NewNode = parse(&body)?;
    let (outcome, g) =
        store.update(&id, |g| g.apply(&Mutation::AddNode { x: req.x, y: req.y, label: req.label }))?;
    let MutationOutcome::NodeAdded(nid) = outcome else { unreachable!("add node outcome") };
    Ok((StatusCode::CREATED, Json(NodeRecord::from(g.node(nid)?))).into_response())
}

/// Distinguishes an absent field from an explicit `null`.
fn double_option<'de, D: Deserializer<'de>, T: Deserialize<'de>>(d: D) -> Result<Option<Option<T>>, D::Error> {
    Option::<T>::deserialize(d).map(Some)
}

#[derive(Deserialize)]
struct NodePatch {
    #[serde(default)]
    x: Option<f64>,
    #[serde(default)]
    y: Option<f64>,
    /// `null` clears the label; absent leaves it alone.
    #[serde(default, deserialize_with = "double_option")]
    label: Option<Option<String>>,
}

async fn update_node(
    State(store): State<AppState>,
    UrlPath((id, nid)): UrlPath<(String, u64)>,
    body: Bytes,
) -> ApiResult<Response> {
    let req: NodePatch = parse(&body)?;
    let nid = NodeId(nid);
    let (_, g) = store.update(&id, |g| {
        let current = g.node(nid)?.clone();
        if req.x.is_some() || req.y.is_some() {
            g.move_node(nid, req.x.unwrap_or(current.x), req.y.unwrap_or(current.y))?;
        }
        if let Some(label) = req.label {
            g.relabel_node(nid, label)?;
        }
        Ok(())
    })?;
    Ok(Json(NodeRecord::from(g.node(nid)?)).into_response())
}

async fn remove_node(
    State(store): State<AppState>,
    UrlPath((id, nid)): UrlPath<(String, u64)>,
) -> ApiResult<StatusCode> {
    store.update(&id, |g| g.apply(&Mutation::RemoveNode(NodeId(nid))))?;
    Ok(StatusCode::NO_CONTENT)
}

#[derive(Deserialize)]
struct NewEdge {
    u: NodeId,
    v: NodeId,
    #[serde(default)]
    weight: Option<f64>,
}

async fn add_edge(
    State(store): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> ApiResult<Response> {
    let req: NewEdge = parse(&body)?;
    let (outcome, g) =
        store.update(&id, |g| g.apply(&Mutation::AddEdge { u: req.u, v: req.v, weight: req.weight }))?;
    let MutationOutcome::EdgeAdded(eid) = outcome else { unreachable!("add edge outcome") };
    Ok((StatusCode::CREATED, Json(EdgeRecord::from(g.edge(eid)?))).into_response())
}

async fn remove_edge(
    State(store): State<AppState>,
    UrlPath((id, eid)): UrlPath<(String, u64)>,
) -> ApiResult<StatusCode> {
    store.update(&id, |g| g.apply(&Mutation::RemoveEdge(EdgeId(eid))))?;
    Ok(StatusCode::NO_CONTENT)
}

async fn run(
    State(store): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> ApiResult<Response> {
    let req: AlgorithmRequest = parse(&body)?;
    let snapshot = store.get(&id)?;
    let result = tokio::task::spawn_blocking(move || run_algorithm(&snapshot, &req))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))??;
    Ok(Json(result).into_response())
}

fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("png") => "image/png",
        Some("jpg" | "jpeg") => "image/jpeg",
        Some("gif") => "image/gif",
        Some("webp") => "image/webp",
        Some("svg") => "image/svg+xml",
        Some("bmp") => "image/bmp",
        Some("tif" | "tiff") => "image/tiff",
        _ => "application/octet-stream",
    }
}

async fn overlay(State(store): State<AppState>, UrlPath(id): UrlPath<String>) -> ApiResult<Response> {
    let path = store
        .overlay_path(&id)?
        .ok_or_else(|| ApiError::NotFound(format!("graph {id} has no overlay image")))?;
    let bytes = tokio::fs::read(&path)
        .await
        .map_err(|_| ApiError::NotFound(format!("overlay image {} is missing", path.display())))?;
    Ok(([(header::CONTENT_TYPE, content_type(&path))], bytes).into_response())
}
