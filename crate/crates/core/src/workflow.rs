//! Staged changes and their approval.
//!
//! A change is proposed by an actor holding the affected batch at level 1. It is kept
//! aside from the committed model and announced to every other actor whose viewpoints
//! cover the target and grant the batch. The change is applied once all of them approve;
//! a single rejection discards it.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    ActorId, ArtifactField, ArtifactId, ContentId, ContentKind, ContentRecord, ModelError,
    ProposalId, Timestamp,
};
use crate::store::Snapshot;
use crate::viewpoint::{BatchKind, InformationSet, ViewpointError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorkflowError {
    #[error("unknown target artifact {0}")]
    UnknownTarget(ArtifactId),
    #[error("unknown actor {0}")]
    UnknownActor(ActorId),
    #[error("unknown proposal {0}")]
    UnknownProposal(ProposalId),
    #[error("{actor} lacks level-1 access to {batch} on {target}")]
    InsufficientAccess {
        actor: ActorId,
        target: ArtifactId,
        batch: BatchKind,
    },
    #[error("{actor} is not concerned by proposal {proposal}")]
    NotConcerned { proposal: ProposalId, actor: ActorId },
    #[error("{actor} already voted on proposal {proposal}")]
    AlreadyVoted { proposal: ProposalId, actor: ActorId },
    #[error("proposal {0} is no longer pending")]
    NotPending(ProposalId),
    #[error("payload does not fit batch {batch}: {reason}")]
    IncompatiblePayload { batch: BatchKind, reason: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Viewpoint(#[from] ViewpointError),
}

impl WorkflowError {
    pub fn name(&self) -> &'static str {
        match self {
            WorkflowError::UnknownTarget(_) => "UnknownTarget",
            WorkflowError::UnknownActor(_) => "UnknownActor",
            WorkflowError::UnknownProposal(_) => "UnknownProposal",
            WorkflowError::InsufficientAccess { .. } => "InsufficientAccess",
            WorkflowError::NotConcerned { .. } => "NotConcerned",
            WorkflowError::AlreadyVoted { .. } => "AlreadyVoted",
            WorkflowError::NotPending(_) => "NotPending",
            WorkflowError::IncompatiblePayload { .. } => "IncompatiblePayload",
            WorkflowError::Model(e) => e.name(),
            WorkflowError::Viewpoint(e) => e.name(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProposalState {
    Pending,
    Approved,
    Rejected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Approve,
    Reject,
}

impl std::str::FromStr for Decision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "approve" => Ok(Decision::Approve),
            "reject" => Ok(Decision::Reject),
            other => Err(format!("unknown decision {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldChange {
    pub field: ArtifactField,
    pub value: String,
}

/// What a proposal changes once approved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ChangePayload {
    /// Scalar artifact fields; valid for the `Artifact` and `Sub-Artifact` batches.
    Fields { changes: Vec<FieldChange> },
    /// Insert or rewrite a content record of the matching batch on the target.
    Content {
        id: ContentId,
        text: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        function: Option<ContentId>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeProposal {
    pub id: ProposalId,
    pub author: ActorId,
    pub target: ArtifactId,
    pub batch: BatchKind,
    pub payload: ChangePayload,
    pub state: ProposalState,
    /// Frozen when the proposal is created.
    pub concerned: Vec<ActorId>,
    #[serde(default)]
    pub votes: BTreeMap<ActorId, Decision>,
    pub created: Timestamp,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolved: Option<Timestamp>,
}

impl ChangeProposal {
    pub fn is_pending(&self) -> bool {
        self.state == ProposalState::Pending
    }
}

/// A notice sent to a concerned actor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub proposal: ProposalId,
    pub recipient: ActorId,
    pub timestamp: Timestamp,
    pub message: String,
}

impl Annotation {
    /// `timestamp<TAB>proposal<TAB>recipient<TAB>message`
    pub fn log_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}",
            self.timestamp,
            self.proposal,
            self.recipient,
            self.message.replace(['\n', '\t'], " ")
        )
    }
}

/// Appends one line per annotation to a human-readable event log.
pub fn append_event_log(path: &Path, annotations: &[Annotation]) -> io::Result<()> {
    if annotations.is_empty() {
        return Ok(());
    }
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    for a in annotations {
        writeln!(file, "{}", a.log_line())?;
    }
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkflowState {
    #[serde(default)]
    pub proposals: Vec<ChangeProposal>,
    #[serde(default)]
    pub annotations: Vec<Annotation>,
    #[serde(default)]
    pub next_proposal: u64,
}

impl WorkflowState {
    pub fn proposal(&self, id: &str) -> Option<&ChangeProposal> {
        self.proposals.iter().find(|p| p.id == id)
    }

    pub fn annotations_for<'a>(&'a self, actor: &'a str) -> impl Iterator<Item = &'a Annotation> {
        self.annotations.iter().filter(move |a| a.recipient == actor)
    }
}

pub trait Clock {
    fn now(&self) -> Timestamp;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> Timestamp {
        Timestamp::now()
    }
}

/// Always reports the same instant.
#[derive(Debug, Clone)]
pub struct FixedClock(pub Timestamp);

impl Clock for FixedClock {
    fn now(&self) -> Timestamp {
        self.0.clone()
    }
}

impl Snapshot {
    /// Actors holding a viewpoint that covers `target` and grants `batch` at any level.
    pub fn concerned_actors(
        &self,
        target: &str,
        batch: &BatchKind,
    ) -> Result<BTreeSet<ActorId>, WorkflowError> {
        if !self.model.contains_artifact(target) {
            return Err(WorkflowError::UnknownTarget(target.into()));
        }
        let engine = self.engine();
        let all: Vec<_> = self.viewpoints.viewpoints().iter().collect();
        let covering = engine.filter_viewpoints_for_artifact(&all, target)?;
        Ok(covering
            .into_iter()
            .filter(|vp| {
                engine
                    .restitute_connexions(vp)
                    .is_ok_and(|grants| grants.iter().any(|g| &g.kind == batch))
            })
            .map(|vp| vp.actor.clone())
            .collect())
    }

    /// The information set over committed data only. Pending payloads never show.
    pub fn effective_view(
        &self,
        artifact: &str,
        actor: &str,
    ) -> Result<InformationSet, ViewpointError> {
        self.engine().filter_info_artifact(artifact, actor)
    }

    /// Stages a change. Returns the stored proposal and the annotations it produced.
    pub fn propose_change(
        &mut self,
        author: &str,
        target: &str,
        batch: BatchKind,
        payload: ChangePayload,
        clock: &dyn Clock,
    ) -> Result<(ChangeProposal, Vec<Annotation>), WorkflowError> {
        if !self.model.contains_artifact(target) {
            return Err(WorkflowError::UnknownTarget(target.into()));
        }
        if self.model.actor(author).is_none() {
            return Err(WorkflowError::UnknownActor(author.into()));
        }
        let insufficient = || WorkflowError::InsufficientAccess {
            actor: author.into(),
            target: target.into(),
            batch: batch.clone(),
        };
        let view = match self.effective_view(target, author) {
            Ok(view) => view,
            Err(ViewpointError::NoApplicableViewpoint { .. }) => return Err(insufficient()),
            Err(e) => return Err(e.into()),
        };
        if !view.level_of(&batch).is_some_and(|l| l.is_full()) {
            return Err(insufficient());
        }

        let now = clock.now();
        let mut proposal = ChangeProposal {
            id: ProposalId::new(format!("P{}", self.workflow.next_proposal + 1)),
            author: author.into(),
            target: target.into(),
            batch: batch.clone(),
            payload,
            state: ProposalState::Pending,
            concerned: Vec::new(),
            votes: BTreeMap::new(),
            created: now.clone(),
            resolved: None,
        };
        // Dry run so a malformed payload is refused up front.
        self.clone().apply_payload(&proposal, &now)?;

        let mut concerned = self.concerned_actors(target, &batch)?;
        concerned.remove(author);
        proposal.concerned = concerned.into_iter().collect();

        let notes: Vec<Annotation> = proposal
            .concerned
            .iter()
            .map(|recipient| Annotation {
                proposal: proposal.id.clone(),
                recipient: recipient.clone(),
                timestamp: now.clone(),
                message: format!(
                    "{} proposes a change to {} on {}; your approval is requested",
                    author, batch, target
                ),
            })
            .collect();

        if proposal.concerned.is_empty() {
            // Nobody else holds the batch, so the author's own approval is enough.
            self.apply_payload(&proposal, &now)?;
            proposal.state = ProposalState::Approved;
            proposal.resolved = Some(now);
        }

        self.workflow.next_proposal += 1;
        self.workflow.proposals.push(proposal.clone());
        self.workflow.annotations.extend(notes.iter().cloned());
        Ok((proposal, notes))
    }

    /// Records a vote. Returns the updated proposal and any annotations produced.
    pub fn vote(
        &mut self,
        proposal_id: &str,
        actor: &str,
        decision: Decision,
        clock: &dyn Clock,
    ) -> Result<(ChangeProposal, Vec<Annotation>), WorkflowError> {
        let idx = self
            .workflow
            .proposals
            .iter()
            .position(|p| p.id == proposal_id)
            .ok_or_else(|| WorkflowError::UnknownProposal(proposal_id.into()))?;
        let proposal = &self.workflow.proposals[idx];
        if !proposal.is_pending() {
            return Err(WorkflowError::NotPending(proposal.id.clone()));
        }
        if !proposal.concerned.iter().any(|a| a == actor) {
            return Err(WorkflowError::NotConcerned {
                proposal: proposal.id.clone(),
                actor: actor.into(),
            });
        }
        if proposal.votes.contains_key(actor) {
            return Err(WorkflowError::AlreadyVoted {
                proposal: proposal.id.clone(),
                actor: actor.into(),
            });
        }

        let now = clock.now();
        let mut updated = proposal.clone();
        updated.votes.insert(actor.into(), decision);
        let unanimous = updated
            .concerned
            .iter()
            .all(|a| updated.votes.get(a) == Some(&Decision::Approve));
        let outcome = match decision {
            Decision::Reject => Some(ProposalState::Rejected),
            Decision::Approve if unanimous => Some(ProposalState::Approved),
            Decision::Approve => None,
        };

        let mut notes = Vec::new();
        if let Some(state) = outcome {
            if state == ProposalState::Approved {
                // Nothing is written unless the whole payload applies.
                let mut next = self.clone();
                next.apply_payload(&updated, &now)?;
                self.model = next.model;
            }
            updated.state = state;
            updated.resolved = Some(now.clone());
            let verdict = match state {
                ProposalState::Approved => "approved and applied",
                _ => "rejected",
            };
            notes = updated
                .concerned
                .iter()
                .map(|recipient| Annotation {
                    proposal: updated.id.clone(),
                    recipient: recipient.clone(),
                    timestamp: now.clone(),
                    message: format!("proposal {} was {verdict}", updated.id),
                })
                .collect();
            self.workflow.annotations.extend(notes.iter().cloned());
        }
        self.workflow.proposals[idx] = updated.clone();
        Ok((updated, notes))
    }

    fn apply_payload(
        &mut self,
        proposal: &ChangeProposal,
        now: &Timestamp,
    ) -> Result<(), WorkflowError> {
        let incompatible = |reason: String| WorkflowError::IncompatiblePayload {
            batch: proposal.batch.clone(),
            reason,
        };
        let author_name = self
            .model
            .actor(proposal.author.as_str())
            .map(|a| a.name.clone())
            .ok_or_else(|| WorkflowError::UnknownActor(proposal.author.clone()))?;
        let mut node = self
            .model
            .artifact(proposal.target.as_str())
            .cloned()
            .ok_or_else(|| WorkflowError::UnknownTarget(proposal.target.clone()))?;

        match &proposal.payload {
            ChangePayload::Fields { changes } => {
                if !matches!(proposal.batch, BatchKind::Artifact | BatchKind::SubArtifact) {
                    return Err(incompatible("field changes need Artifact or Sub-Artifact".into()));
                }
                if changes.is_empty() {
                    return Err(incompatible("no field changes".into()));
                }
                for change in changes {
                    change.field.apply(&mut node, &change.value)?;
                }
            }
            ChangePayload::Content { id, text, function } => {
                let kind = ContentKind::for_batch(&proposal.batch)
                    .ok_or_else(|| incompatible("batch has no content records".into()))?;
                self.model.upsert_content(ContentRecord {
                    id: id.clone(),
                    owner: proposal.target.clone(),
                    kind,
                    payload: text.clone(),
                    function: function.clone(),
                })?;
            }
        }
        node.last_update_by = author_name;
        node.last_update_date = now.clone();
        self.model.replace_artifact(node)?;
        Ok(())
    }
}
