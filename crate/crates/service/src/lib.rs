//! Request/response facade over a shared PPCO snapshot.
//!
//! Reads run concurrently against the most recently published [`Snapshot`]. Proposals
//! and votes are queued to a single writer thread, which applies them one at a time
//! to a private copy, persists it when configured, and then publishes it.

pub mod api;
mod config;
mod http;

use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};
use std::thread;

use ppco_core::store::StoreError;
use ppco_core::viewpoint::{InformationSet, ViewpointError};
use ppco_core::workflow::{append_event_log, Annotation, ChangeProposal, Clock};
use ppco_core::{Error, Snapshot};
use tokio::sync::{mpsc, oneshot};

pub use api::{ApiRequest, ApiResponse, ProposeRequest, VoteRequest};
pub use config::{ConfigError, ServiceConfig};
pub use http::router;

type Reply = oneshot::Sender<Result<ChangeProposal, Error>>;

enum Job {
    Propose(ProposeRequest, Reply),
    Vote(VoteRequest, Reply),
}

/// Where committed state goes besides memory.
#[derive(Debug, Clone, Default)]
pub struct Persistence {
    pub snapshot: Option<PathBuf>,
    pub event_log: Option<PathBuf>,
}

/// Cheap to clone; all clones share one store and one writer.
#[derive(Clone)]
pub struct Service {
    published: Arc<RwLock<Arc<Snapshot>>>,
    jobs: mpsc::UnboundedSender<Job>,
    requests: Arc<AtomicU64>,
}

impl Service {
    pub fn new(
        snapshot: Snapshot,
        clock: Arc<dyn Clock + Send + Sync>,
        persistence: Persistence,
    ) -> Self {
        let published = Arc::new(RwLock::new(Arc::new(snapshot.clone())));
        let (jobs, rx) = mpsc::unbounded_channel();
        let target = Arc::clone(&published);
        thread::Builder::new()
            .name("ppco-writer".into())
            .spawn(move || writer(snapshot, rx, target, clock, persistence))
            .expect("spawn writer thread");
        Self {
            published,
            jobs,
            requests: Arc::new(AtomicU64::new(0)),
        }
    }

    /// The committed state as of now.
    pub fn snapshot(&self) -> Arc<Snapshot> {
        Arc::clone(&self.published.read().expect("publication lock"))
    }

    pub fn filter(&self, actor: &str, artifact: &str) -> Result<InformationSet, Error> {
        Ok(self.snapshot().effective_view(artifact, actor)?)
    }

    pub fn export(&self, actor: &str, artifact: &str) -> Result<String, Error> {
        let snapshot = self.snapshot();
        let set = snapshot.effective_view(artifact, actor)?;
        Ok(snapshot.export_drp(&set)?)
    }

    pub fn log(&self, actor: &str) -> Result<Vec<Annotation>, Error> {
        let snapshot = self.snapshot();
        if snapshot.model.actor(actor).is_none() {
            return Err(ViewpointError::UnknownActor(actor.into()).into());
        }
        Ok(snapshot.workflow.annotations_for(actor).cloned().collect())
    }

    pub async fn propose(&self, request: ProposeRequest) -> Result<ChangeProposal, Error> {
        self.submit(|reply| Job::Propose(request, reply)).await
    }

    pub async fn vote(&self, request: VoteRequest) -> Result<ChangeProposal, Error> {
        self.submit(|reply| Job::Vote(request, reply)).await
    }

    async fn submit(&self, job: impl FnOnce(Reply) -> Job) -> Result<ChangeProposal, Error> {
        let (tx, rx) = oneshot::channel();
        let stopped = || Error::from(StoreError::Io(std::io::Error::other("writer stopped")));
        self.jobs.send(job(tx)).map_err(|_| stopped())?;
        rx.await.map_err(|_| stopped())?
    }

    fn next_correlation_id(&self) -> String {
        format!("req-{}", self.requests.fetch_add(1, Ordering::Relaxed) + 1)
    }
}

fn writer(
    mut current: Snapshot,
    mut jobs: mpsc::UnboundedReceiver<Job>,
    published: Arc<RwLock<Arc<Snapshot>>>,
    clock: Arc<dyn Clock + Send + Sync>,
    persistence: Persistence,
) {
    while let Some(job) = jobs.blocking_recv() {
        let mut next = current.clone();
        let (result, reply) = match job {
            Job::Propose(req, reply) => {
                let outcome = req
                    .batch
                    .parse()
                    .map_err(Error::from)
                    .and_then(|batch| {
                        next.propose_change(
                            &req.actor,
                            &req.artifact,
                            batch,
                            req.payload,
                            clock.as_ref(),
                        )
                        .map_err(Error::from)
                    });
                (outcome, reply)
            }
            Job::Vote(req, reply) => {
                let outcome = next
                    .vote(&req.proposal, &req.actor, req.decision, clock.as_ref())
                    .map_err(Error::from);
                (outcome, reply)
            }
        };
        let result = result.and_then(|(proposal, notes)| {
            if let Some(path) = &persistence.snapshot {
                next.save(path)?;
            }
            if let Some(path) = &persistence.event_log {
                if let Err(err) = append_event_log(path, &notes) {
                    eprintln!("warning: cannot append to event log {}: {err}", path.display());
                }
            }
            current = next;
            *published.write().expect("publication lock") = Arc::new(current.clone());
            Ok(proposal)
        });
        let _ = reply.send(result);
    }
}
