//! Snapshot persistence.
//!
//! A snapshot is a sectioned TOML file holding the product model, the viewpoint
//! registry, export settings and the workflow state. Loading replays every record
//! through the same mutation API used at runtime, so a file that loads is consistent.

mod fixture;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::drp::{self, DrpConfig, XmlError};
use crate::model::{
    ActivityNode, ActorRecord, ArtifactNode, AssemblyEdge, Competence, ContentRecord,
    InfoFlowEdge, Interaction, ModelError, ProcessNode, ProductModel, TaskNode, Team,
    TeamInteraction,
};
use crate::viewpoint::{
    BatchAccessProfile, InformationSet, Viewpoint, ViewpointEngine, ViewpointError,
    ViewpointRegistry, ViewpointRelationship,
};
use crate::workflow::{ProposalState, WorkflowState};

pub use fixture::{load_cyclone_fixture, CYCLONE_FIXTURE};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse snapshot: {0}")]
    ParseError(String),
    #[error("dangling reference: {0}")]
    ReferentialIntegrity(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl StoreError {
    pub fn name(&self) -> &'static str {
        match self {
            StoreError::Io(_) => "Io",
            StoreError::ParseError(_) => "ParseError",
            StoreError::ReferentialIntegrity(_) => "ReferentialIntegrity",
            StoreError::InvariantViolation(_) => "InvariantViolation",
        }
    }
}

impl From<ModelError> for StoreError {
    fn from(err: ModelError) -> Self {
        match err {
            ModelError::UnknownId { .. } => StoreError::ReferentialIntegrity(err.to_string()),
            other => StoreError::InvariantViolation(other.to_string()),
        }
    }
}

impl From<ViewpointError> for StoreError {
    fn from(err: ViewpointError) -> Self {
        match err {
            ViewpointError::UnknownActor(_)
            | ViewpointError::UnknownArtifact(_)
            | ViewpointError::UnknownViewpoint(_) => {
                StoreError::ReferentialIntegrity(err.to_string())
            }
            other => StoreError::InvariantViolation(other.to_string()),
        }
    }
}

/// Full engine state: committed model, viewpoints, export settings and staged changes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Snapshot {
    pub model: ProductModel,
    pub viewpoints: ViewpointRegistry,
    pub drp: DrpConfig,
    pub workflow: WorkflowState,
}

impl Snapshot {
    pub fn engine(&self) -> ViewpointEngine<'_> {
        ViewpointEngine::new(&self.model, &self.viewpoints)
    }

    pub fn filter_info_artifact(
        &self,
        artifact: &str,
        actor: &str,
    ) -> Result<InformationSet, ViewpointError> {
        self.engine().filter_info_artifact(artifact, actor)
    }

    pub fn export_drp(&self, set: &InformationSet) -> Result<String, XmlError> {
        drp::export_drp(set, &self.model, &self.drp)
    }

    pub fn to_toml(&self) -> String {
        let file = SnapshotFile::capture(self);
        toml::to_string(&file).expect("snapshot sections serialize")
    }

    pub fn from_toml(text: &str) -> Result<Snapshot, StoreError> {
        let file: SnapshotFile =
            toml::from_str(text).map_err(|e| StoreError::ParseError(e.to_string()))?;
        file.replay()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), StoreError> {
        fs::write(path, self.to_toml())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Snapshot, StoreError> {
        Snapshot::from_toml(&fs::read_to_string(path)?)
    }
}

pub fn save(snapshot: &Snapshot, path: impl AsRef<Path>) -> Result<(), StoreError> {
    snapshot.save(path)
}

pub fn load(path: impl AsRef<Path>) -> Result<Snapshot, StoreError> {
    Snapshot::load(path)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SnapshotFile {
    format: u32,
    #[serde(default)]
    next_proposal: u64,
    drp: DrpConfig,
    #[serde(default)]
    artifacts: Vec<ArtifactNode>,
    #[serde(default)]
    edges: Vec<AssemblyEdge>,
    #[serde(default)]
    interactions: Vec<Interaction>,
    #[serde(default)]
    contents: Vec<ContentRecord>,
    #[serde(default)]
    tasks: Vec<TaskNode>,
    #[serde(default)]
    activities: Vec<ActivityNode>,
    #[serde(default)]
    processes: Vec<ProcessNode>,
    #[serde(default)]
    info_flows: Vec<InfoFlowEdge>,
    #[serde(default)]
    teams: Vec<Team>,
    #[serde(default)]
    actors: Vec<ActorRecord>,
    #[serde(default)]
    competences: Vec<Competence>,
    #[serde(default)]
    team_interactions: Vec<TeamInteraction>,
    #[serde(default)]
    viewpoints: Vec<Viewpoint>,
    #[serde(default)]
    relationships: Vec<ViewpointRelationship>,
    #[serde(default)]
    profiles: Vec<BatchAccessProfile>,
    #[serde(default)]
    proposals: Vec<crate::workflow::ChangeProposal>,
    #[serde(default)]
    annotations: Vec<crate::workflow::Annotation>,
}

impl SnapshotFile {
    fn capture(s: &Snapshot) -> Self {
        let m = &s.model;
        SnapshotFile {
            format: FORMAT_VERSION,
            next_proposal: s.workflow.next_proposal,
            drp: s.drp.clone(),
            artifacts: m.artifacts().to_vec(),
            edges: m.edges().to_vec(),
            interactions: m.interactions().to_vec(),
            contents: m.contents().to_vec(),
            tasks: m.tasks().to_vec(),
            activities: m.activities().to_vec(),
            processes: m.processes().to_vec(),
            info_flows: m.info_flows().to_vec(),
            teams: m.teams().to_vec(),
            actors: m.actors().to_vec(),
            competences: m.competences().to_vec(),
            team_interactions: m.team_interactions().to_vec(),
            viewpoints: s.viewpoints.viewpoints().to_vec(),
            relationships: s.viewpoints.relationships().to_vec(),
            profiles: s.viewpoints.profiles().to_vec(),
            proposals: s.workflow.proposals.clone(),
            annotations: s.workflow.annotations.clone(),
        }
    }

    fn replay(self) -> Result<Snapshot, StoreError> {
        if self.format != FORMAT_VERSION {
            return Err(StoreError::ParseError(format!(
                "unsupported snapshot format {}",
                self.format
            )));
        }
        let mut model = ProductModel::new();
        for node in self.artifacts {
            model.add_artifact(node)?;
        }
        for edge in &self.edges {
            model.add_assembly_edge(&edge.parent, &edge.child, edge.relationship_note.clone())?;
        }
        for i in &self.interactions {
            if i.a >= i.b {
                return Err(StoreError::InvariantViolation(format!(
                    "interaction {}-{} is not stored canonically",
                    i.a, i.b
                )));
            }
            let before = model.interactions().len();
            model.add_interaction(&i.a, &i.b, i.kind, i.note.clone())?;
            if model.interactions().len() == before {
                return Err(StoreError::InvariantViolation(format!(
                    "duplicate interaction {}-{} ({})",
                    i.a, i.b, i.kind
                )));
            }
        }
        for record in self.contents {
            model.add_content(record)?;
        }
        for task in self.tasks {
            model.add_task(task)?;
        }
        for activity in self.activities {
            model.add_activity(activity)?;
        }
        for process in self.processes {
            model.add_process(process)?;
        }
        for flow in self.info_flows {
            model.add_info_flow(flow)?;
        }
        let declared_members: Vec<_> = self
            .teams
            .iter()
            .map(|t| (t.id.clone(), t.members.clone()))
            .collect();
        for team in self.teams {
            model.add_team(team)?;
        }
        for actor in self.actors {
            model.add_actor(actor)?;
        }
        for (team, members) in declared_members {
            let actual = &model.team(team.as_str()).expect("team replayed").members;
            if !members.is_empty() && &members != actual {
                return Err(StoreError::ReferentialIntegrity(format!(
                    "team {team} lists members {members:?} but actors place {actual:?} in it"
                )));
            }
        }
        for competence in self.competences {
            model.add_competence(competence)?;
        }
        for link in self.team_interactions {
            model.add_team_interaction(&link.a, &link.b, link.frequency)?;
        }
        model.validate()?;

        let mut viewpoints = ViewpointRegistry::new();
        for vp in self.viewpoints {
            viewpoints.add_viewpoint(&model, vp)?;
        }
        for rel in self.relationships {
            viewpoints.add_relationship(rel)?;
        }
        for profile in self.profiles {
            viewpoints.add_profile(profile)?;
        }

        let workflow = WorkflowState {
            proposals: self.proposals,
            annotations: self.annotations,
            next_proposal: self.next_proposal,
        };
        check_workflow(&model, &workflow)?;

        Ok(Snapshot {
            model,
            viewpoints,
            drp: self.drp,
            workflow,
        })
    }
}

fn check_workflow(model: &ProductModel, wf: &WorkflowState) -> Result<(), StoreError> {
    use crate::workflow::Decision;

    let dangling = |what: String| Err(StoreError::ReferentialIntegrity(what));
    let broken = |what: String| Err(StoreError::InvariantViolation(what));
    for (i, p) in wf.proposals.iter().enumerate() {
        if model.actor(p.author.as_str()).is_none() {
            return dangling(format!("proposal {} author {}", p.id, p.author));
        }
        if !model.contains_artifact(&p.target) {
            return dangling(format!("proposal {} target {}", p.id, p.target));
        }
        if let Some(a) = p.concerned.iter().find(|a| model.actor(a.as_str()).is_none()) {
            return dangling(format!("proposal {} concerned actor {a}", p.id));
        }
        if wf.proposals[..i].iter().any(|q| q.id == p.id) {
            return broken(format!("duplicate proposal id {}", p.id));
        }
        if let Some(voter) = p.votes.keys().find(|v| !p.concerned.contains(v)) {
            return broken(format!("proposal {} has a vote from {voter}", p.id));
        }
        let all_approve = p
            .concerned
            .iter()
            .all(|a| p.votes.get(a) == Some(&Decision::Approve));
        let any_reject = p.votes.values().any(|d| *d == Decision::Reject);
        let consistent = match p.state {
            ProposalState::Approved => all_approve,
            ProposalState::Rejected => any_reject,
            ProposalState::Pending => !all_approve && !any_reject,
        };
        if !consistent {
            return broken(format!("proposal {} state disagrees with its votes", p.id));
        }
        let numeric = p.id.as_str().strip_prefix('P').and_then(|n| n.parse::<u64>().ok());
        if numeric.is_some_and(|n| n > wf.next_proposal) {
            return broken(format!("proposal {} is beyond the id counter", p.id));
        }
    }
    for a in &wf.annotations {
        let Some(p) = wf.proposal(a.proposal.as_str()) else {
            return dangling(format!("annotation for unknown proposal {}", a.proposal));
        };
        if !p.concerned.contains(&a.recipient) {
            return dangling(format!(
                "annotation of {} addressed to {} who is not concerned",
                a.proposal, a.recipient
            ));
        }
    }
    Ok(())
}
