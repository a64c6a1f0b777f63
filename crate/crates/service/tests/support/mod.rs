//! Test server and the serial-replay oracle for concurrent schedules.
#![allow(dead_code)]

use std::sync::Arc;

use ppco_core::model::Timestamp;
use ppco_core::workflow::{ChangePayload, Decision, FieldChange, FixedClock};
use ppco_core::{load_cyclone_fixture, Snapshot};
use ppco_service::api::{ApiResponse, Status};
use ppco_service::{router, Persistence, ProposeRequest, Service, VoteRequest};
use serde_json::json;

pub const NOW: &str = "Mon Nov 14 09:00:00 EET 2005";

pub fn clock() -> FixedClock {
    FixedClock(Timestamp::parse(NOW).unwrap())
}

pub struct Server {
    pub base: String,
    pub service: Service,
    pub client: reqwest::Client,
}

impl Server {
    pub async fn start(snapshot: Snapshot, persistence: Persistence) -> Server {
        let service = Service::new(snapshot, Arc::new(clock()), persistence);
        let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
        let addr = listener.local_addr().unwrap();
        let app = router(service.clone());
        tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });
        Server {
            base: format!("http://{addr}"),
            service,
            client: reqwest::Client::new(),
        }
    }

    pub async fn get(&self, path: &str) -> (u16, ApiResponse) {
        let resp = self.client.get(format!("{}{path}", self.base)).send().await.unwrap();
        let status = resp.status().as_u16();
        (status, resp.json().await.unwrap())
    }

    pub async fn post(&self, path: &str, body: serde_json::Value) -> (u16, ApiResponse) {
        let resp = self
            .client
            .post(format!("{}{path}", self.base))
            .json(&body)
            .send()
            .await
            .unwrap();
        let status = resp.status().as_u16();
        (status, resp.json().await.unwrap())
    }
}

/// A write request as sent to the service.
#[derive(Debug, Clone)]
pub enum Write {
    Propose(ProposeRequest),
    Vote(VoteRequest),
}

impl Write {
    pub fn vote(proposal: &str, actor: &str, decision: Decision) -> Write {
        Write::Vote(VoteRequest {
            proposal: proposal.into(),
            actor: actor.into(),
            decision,
        })
    }

    pub fn path_and_body(&self) -> (&'static str, serde_json::Value) {
        match self {
            Write::Propose(p) => ("/propose", serde_json::to_value(p).unwrap()),
            Write::Vote(v) => ("/vote", serde_json::to_value(v).unwrap()),
        }
    }
}

/// What a client observed for one request: the proposal id and state, or the error name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Ok { id: String, state: String },
    Err(String),
}

impl Outcome {
    pub fn from_response(r: &ApiResponse) -> Outcome {
        match r.status {
            Status::Ok => Outcome::Ok {
                id: r.body["id"].as_str().unwrap().to_owned(),
                state: r.body["state"].as_str().unwrap().to_owned(),
            },
            Status::Error => Outcome::Err(r.error.clone().unwrap()),
        }
    }
}

/// Applies `writes` one after another to a copy of `start`, directly through the core.
pub fn serial_replay(start: &Snapshot, writes: &[&Write]) -> (Snapshot, Vec<Outcome>) {
    let mut s = start.clone();
    let outcomes = writes
        .iter()
        .map(|w| {
            let result = match w {
                Write::Propose(p) => s.propose_change(
                    &p.actor,
                    &p.artifact,
                    p.batch.parse().unwrap(),
                    p.payload.clone(),
                    &clock(),
                ),
                Write::Vote(v) => s.vote(&v.proposal, &v.actor, v.decision, &clock()),
            };
            match result {
                Ok((p, _)) => Outcome::Ok {
                    id: p.id.to_string(),
                    state: format!("{:?}", p.state),
                },
                Err(e) => Outcome::Err(e.name().to_owned()),
            }
        })
        .collect();
    (s, outcomes)
}

/// Result of running one concurrent schedule of two writes.
pub struct ScheduleCheck {
    /// The committed store equals the store of every serial order.
    pub store_agrees_with_all_orders: bool,
    /// The full state and both responses match at least one serial order.
    pub linearizable: bool,
}

/// Sends `a` and `b` concurrently to a fresh server started from `start` and compares
/// the result with both serial orders.
pub async fn run_pair(start: &Snapshot, a: &Write, b: &Write) -> ScheduleCheck {
    let server = Server::start(start.clone(), Persistence::default()).await;
    let (pa, ba) = a.path_and_body();
    let (pb, bb) = b.path_and_body();
    let (ra, rb) = tokio::join!(server.post(pa, ba), server.post(pb, bb));
    let observed = vec![Outcome::from_response(&ra.1), Outcome::from_response(&rb.1)];
    let committed = server.service.snapshot();

    let (ab, out_ab) = serial_replay(start, &[a, b]);
    let (ba_state, mut out_ba) = serial_replay(start, &[b, a]);
    out_ba.reverse();

    let store_agrees_with_all_orders =
        committed.model == ab.model && committed.model == ba_state.model;
    let linearizable = (*committed == ab && observed == out_ab)
        || (*committed == ba_state && observed == out_ba);
    ScheduleCheck {
        store_agrees_with_all_orders,
        linearizable,
    }
}

/// Cyclone corpus with ActorX's pending Constraints proposal `P1`, which ActorY and
/// ActorZ must both approve.
pub fn with_two_party_proposal() -> Snapshot {
    let mut s = load_cyclone_fixture();
    s.propose_change(
        "ActorX",
        "381009",
        "Constraints".parse().unwrap(),
        constraint_payload(),
        &clock(),
    )
    .unwrap();
    s
}

pub fn constraint_payload() -> ChangePayload {
    ChangePayload::Content {
        id: "CS-900".into(),
        text: "operating pressure below 8 bar".into(),
        function: None,
    }
}

pub fn constraint_proposal() -> Write {
    Write::Propose(ProposeRequest {
        actor: "ActorX".into(),
        artifact: "381009".into(),
        batch: "Constraints".into(),
        payload: constraint_payload(),
    })
}

pub fn rename_proposal() -> Write {
    Write::Propose(ProposeRequest {
        actor: "ActorZ".into(),
        artifact: "381009".into(),
        batch: "Sub-Artifact".into(),
        payload: ChangePayload::Fields {
            changes: vec![FieldChange {
                field: "name".parse().unwrap(),
                value: "Closed Cyclone Vessel".into(),
            }],
        },
    })
}

/// Every two-request schedule exercised by the linearizability checks: all decision
/// pairs of ActorY and ActorZ on `P1`, a repeated vote, and two racing proposals.
pub fn two_actor_schedules() -> Vec<(&'static str, Snapshot, Write, Write)> {
    use Decision::{Approve, Reject};
    let mut out = Vec::new();
    for (y, z, label) in [
        (Approve, Approve, "approve/approve"),
        (Approve, Reject, "approve/reject"),
        (Reject, Approve, "reject/approve"),
        (Reject, Reject, "reject/reject"),
    ] {
        out.push((
            label,
            with_two_party_proposal(),
            Write::vote("P1", "ActorY", y),
            Write::vote("P1", "ActorZ", z),
        ));
    }
    out.push((
        "same actor twice",
        with_two_party_proposal(),
        Write::vote("P1", "ActorY", Approve),
        Write::vote("P1", "ActorY", Reject),
    ));
    out.push((
        "racing proposals",
        load_cyclone_fixture(),
        constraint_proposal(),
        rename_proposal(),
    ));
    out
}

pub fn json_vote(proposal: &str, actor: &str, decision: &str) -> serde_json::Value {
    json!({ "proposal": proposal, "actor": actor, "decision": decision })
}
