use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Query, State};
use axum::http::{HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use ppco_core::model::{ArtifactField, ContentId};
use ppco_core::workflow::{ChangePayload, Decision, FieldChange};
use ppco_core::Error;
use serde::Serialize;
use serde_json::Value;

use crate::api::{ActorQuery, ApiRequest, ApiResponse, Operation, ViewQuery};
use crate::{ProposeRequest, Service, VoteRequest};

pub const CORRELATION_HEADER: &str = "x-correlation-id";

pub fn router(service: Service) -> Router {
    Router::new()
        .route("/filter", get(filter))
        .route("/export", get(export))
        .route("/log", get(log))
        .route("/propose", post(propose))
        .route("/vote", post(vote))
        .route("/api", post(api))
        .with_state(service)
}

/// Failure before any module operation ran.
struct BadRequest(String);

enum Failure {
    BadRequest(BadRequest),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::Domain(err)
    }
}

impl From<BadRequest> for Failure {
    fn from(err: BadRequest) -> Self {
        Failure::BadRequest(err)
    }
}

fn status_for(name: &str) -> StatusCode {
    match name {
        "UnknownActor" | "UnknownArtifact" | "UnknownTarget" | "UnknownProposal"
        | "UnknownViewpoint" | "UnknownId" => StatusCode::NOT_FOUND,
        "InsufficientAccess" | "NotConcerned" | "NoApplicableViewpoint"
        | "ArtifactBatchNotGranted" => StatusCode::FORBIDDEN,
        "AlreadyVoted" | "NotPending" => StatusCode::CONFLICT,
        "Io" => StatusCode::INTERNAL_SERVER_ERROR,
        _ => StatusCode::UNPROCESSABLE_ENTITY,
    }
}

fn correlation_id(service: &Service, headers: &HeaderMap, explicit: Option<String>) -> String {
    explicit
        .or_else(|| {
            headers
                .get(CORRELATION_HEADER)
                .and_then(|v| v.to_str().ok())
                .map(str::to_owned)
        })
        .unwrap_or_else(|| service.next_correlation_id())
}

fn respond<T: Serialize>(cid: String, result: Result<T, Failure>) -> Response {
    let (status, envelope) = match result {
        Ok(body) => (
            StatusCode::OK,
            ApiResponse::ok(cid, serde_json::to_value(body).expect("response body serializes")),
        ),
        Err(Failure::BadRequest(BadRequest(msg))) => (
            StatusCode::BAD_REQUEST,
            ApiResponse::error(cid, "BadRequest", msg),
        ),
        Err(Failure::Domain(err)) => (
            status_for(err.name()),
            ApiResponse::error(cid, err.name(), err.to_string()),
        ),
    };
    (status, Json(envelope)).into_response()
}

async fn filter(
    State(service): State<Service>,
    headers: HeaderMap,
    query: Result<Query<ViewQuery>, QueryRejection>,
) -> Response {
    let cid = correlation_id(&service, &headers, None);
    let result = query
        .map_err(|e| BadRequest(e.body_text()).into())
        .and_then(|Query(q)| Ok(service.filter(&q.actor, &q.artifact)?));
    respond(cid, result)
}

async fn export(
    State(service): State<Service>,
    headers: HeaderMap,
    query: Result<Query<ViewQuery>, QueryRejection>,
) -> Response {
    let cid = correlation_id(&service, &headers, None);
    let result = query
        .map_err(|e| BadRequest(e.body_text()).into())
        .and_then(|Query(q)| Ok(service.export(&q.actor, &q.artifact)?));
    respond(cid, result)
}

async fn log(
    State(service): State<Service>,
    headers: HeaderMap,
    query: Result<Query<ActorQuery>, QueryRejection>,
) -> Response {
    let cid = correlation_id(&service, &headers, None);
    let result = query
        .map_err(|e| BadRequest(e.body_text()).into())
        .and_then(|Query(q)| Ok(service.log(&q.actor)?));
    respond(cid, result)
}

async fn propose(
    State(service): State<Service>,
    headers: HeaderMap,
    body: Result<Json<ProposeRequest>, JsonRejection>,
) -> Response {
    let cid = correlation_id(&service, &headers, None);
    let result = match body {
        Ok(Json(req)) => service.propose(req).await.map_err(Failure::from),
        Err(e) => Err(BadRequest(e.body_text()).into()),
    };
    respond(cid, result)
}

async fn vote(
    State(service): State<Service>,
    headers: HeaderMap,
    body: Result<Json<VoteRequest>, JsonRejection>,
) -> Response {
    let cid = correlation_id(&service, &headers, None);
    let result = match body {
        Ok(Json(req)) => service.vote(req).await.map_err(Failure::from),
        Err(e) => Err(BadRequest(e.body_text()).into()),
    };
    respond(cid, result)
}

async fn api(
    State(service): State<Service>,
    headers: HeaderMap,
    body: Result<Json<ApiRequest>, JsonRejection>,
) -> Response {
    let req = match body {
        Ok(Json(req)) => req,
        Err(e) => {
            let cid = correlation_id(&service, &headers, None);
            return respond::<Value>(cid, Err(BadRequest(e.body_text()).into()));
        }
    };
    let cid = correlation_id(&service, &headers, req.correlation_id.clone());
    respond(cid, dispatch(&service, req).await)
}

async fn dispatch(service: &Service, req: ApiRequest) -> Result<Value, Failure> {
    let param = |key: &str| {
        req.params
            .get(key)
            .cloned()
            .ok_or_else(|| BadRequest(format!("missing parameter {key:?}")))
    };
    Ok(match req.operation {
        Operation::Filter => to_json(service.filter(&req.actor, &param("artifact")?)?),
        Operation::Export => to_json(service.export(&req.actor, &param("artifact")?)?),
        Operation::ViewLog => to_json(service.log(&req.actor)?),
        Operation::Propose => {
            let payload = match req.params.get("content_id") {
                Some(id) => ChangePayload::Content {
                    id: ContentId::new(id.as_str()),
                    text: param("text")?,
                    function: req.params.get("function").map(|f| ContentId::new(f.as_str())),
                },
                None => {
                    let changes = req
                        .params
                        .iter()
                        .filter_map(|(k, v)| k.strip_prefix("field:").map(|f| (f, v)))
                        .map(|(field, value)| {
                            Ok(FieldChange {
                                field: field.parse::<ArtifactField>().map_err(Error::from)?,
                                value: value.clone(),
                            })
                        })
                        .collect::<Result<Vec<_>, Failure>>()?;
                    ChangePayload::Fields { changes }
                }
            };
            let proposal = service
                .propose(ProposeRequest {
                    actor: req.actor.clone(),
                    artifact: param("artifact")?,
                    batch: param("batch")?,
                    payload,
                })
                .await?;
            to_json(proposal)
        }
        Operation::Vote => {
            let decision: Decision = param("decision")?
                .parse()
                .map_err(BadRequest)?;
            let proposal = service
                .vote(VoteRequest {
                    proposal: param("proposal")?,
                    actor: req.actor.clone(),
                    decision,
                })
                .await?;
            to_json(proposal)
        }
    })
}

fn to_json<T: Serialize>(value: T) -> Value {
    serde_json::to_value(value).expect("response body serializes")
}
