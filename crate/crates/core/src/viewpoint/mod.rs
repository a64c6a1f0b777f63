//! Actor viewpoints and the information-filtering pipeline.
//!
//! An actor holds one or more [`Viewpoint`]s. Filtering an artifact for an actor
//! walks five steps:
//!
//! 1. collect the actor's viewpoints,
//! 2. keep those whose scope covers the artifact (directly or through an ancestor),
//! 3. order them by decreasing competence,
//! 4. look up the batch grants each viewpoint earns from its `(domain, level)` profile,
//! 5. fold the grant lists together, keeping the fullest level per batch.
//!
//! The result is an [`InformationSet`].

mod batch;
mod engine;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ActivityId, ActorId, ArtifactId, ProductModel, ViewpointId};

pub use batch::{optimize_connexions, BatchConnexion, BatchKind, Level};
pub use engine::{classify_viewpoints, ViewpointEngine};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ViewpointError {
    #[error("unknown actor {0}")]
    UnknownActor(ActorId),
    #[error("unknown artifact {0}")]
    UnknownArtifact(ArtifactId),
    #[error("unknown viewpoint {0}")]
    UnknownViewpoint(ViewpointId),
    #[error("no viewpoint of {actor} applies to artifact {artifact}")]
    NoApplicableViewpoint { actor: ActorId, artifact: ArtifactId },
    #[error("no batch profile for domain {domain:?} at competence level {level}")]
    MissingProfile { domain: String, level: u32 },
    #[error("{kind} {id} already exists")]
    DuplicateId { kind: &'static str, id: String },
    #[error("invalid viewpoint data: {0}")]
    Invalid(String),
}

impl ViewpointError {
    pub fn name(&self) -> &'static str {
        match self {
            ViewpointError::UnknownActor(_) => "UnknownActor",
            ViewpointError::UnknownArtifact(_) => "UnknownArtifact",
            ViewpointError::UnknownViewpoint(_) => "UnknownViewpoint",
            ViewpointError::NoApplicableViewpoint { .. } => "NoApplicableViewpoint",
            ViewpointError::MissingProfile { .. } => "MissingProfile",
            ViewpointError::DuplicateId { .. } => "DuplicateId",
            ViewpointError::Invalid(_) => "InvalidViewpoint",
        }
    }
}

/// What the actor wants to achieve through a viewpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewpointObjective {
    pub focus: String,
    pub activity: ActivityId,
    pub domain: String,
}

/// An actor's perspective on part of the product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Viewpoint {
    pub id: ViewpointId,
    pub actor: ActorId,
    pub focus: String,
    pub domain: String,
    /// Higher is more competent.
    pub competence_level: u32,
    /// Artifacts this viewpoint applies to. Descendants are covered too.
    pub scope: Vec<ArtifactId>,
    pub objective: ViewpointObjective,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewpointRelationship {
    pub from_vp: ViewpointId,
    pub to_vp: ViewpointId,
    #[serde(default)]
    pub label: String,
}

/// Batch grants earned by a `(domain, competence level)` pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchAccessProfile {
    pub domain: String,
    pub competence_level: u32,
    pub grants: Vec<BatchConnexion>,
}

impl BatchAccessProfile {
    pub fn key(&self) -> (&str, u32) {
        (&self.domain, self.competence_level)
    }
}

/// Which viewpoints granted a batch that ended up in an information set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: BatchKind,
    pub viewpoints: Vec<ViewpointId>,
}

/// Merged batch connexions delivered to one actor for one artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InformationSet {
    pub actor: ActorId,
    pub artifact: ArtifactId,
    pub connexions: Vec<BatchConnexion>,
    pub provenance: Vec<Provenance>,
    /// Relationships between the contributing viewpoints.
    #[serde(default)]
    pub relationships: Vec<ViewpointRelationship>,
}

impl InformationSet {
    pub fn level_of(&self, kind: &BatchKind) -> Option<Level> {
        self.connexions
            .iter()
            .find(|c| &c.kind == kind)
            .map(|c| c.level)
    }

    pub fn sources_of(&self, kind: &BatchKind) -> &[ViewpointId] {
        self.provenance
            .iter()
            .find(|p| &p.kind == kind)
            .map(|p| p.viewpoints.as_slice())
            .unwrap_or(&[])
    }

    /// Table-style listing, one `Batch (Level): description` line per connexion.
    pub fn render_lines(&self) -> String {
        self.connexions
            .iter()
            .map(|c| format!("{c}\n"))
            .collect()
    }
}

/// Viewpoints, their relationships and the batch profiles they resolve against.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ViewpointRegistry {
    viewpoints: Vec<Viewpoint>,
    relationships: Vec<ViewpointRelationship>,
    profiles: Vec<BatchAccessProfile>,
}

impl ViewpointRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_viewpoint(
        &mut self,
        model: &ProductModel,
        viewpoint: Viewpoint,
    ) -> Result<(), ViewpointError> {
        if self.viewpoint(viewpoint.id.as_str()).is_some() {
            return Err(ViewpointError::DuplicateId {
                kind: "viewpoint",
                id: viewpoint.id.to_string(),
            });
        }
        if model.actor(viewpoint.actor.as_str()).is_none() {
            return Err(ViewpointError::UnknownActor(viewpoint.actor));
        }
        if viewpoint.competence_level < 1 {
            return Err(ViewpointError::Invalid(format!(
                "viewpoint {} has competence level 0",
                viewpoint.id
            )));
        }
        if viewpoint.scope.is_empty() {
            return Err(ViewpointError::Invalid(format!(
                "viewpoint {} has an empty scope",
                viewpoint.id
            )));
        }
        if let Some(missing) = viewpoint
            .scope
            .iter()
            .find(|id| !model.contains_artifact(id))
        {
            return Err(ViewpointError::UnknownArtifact(missing.clone()));
        }
        if model
            .activity(viewpoint.objective.activity.as_str())
            .is_none()
        {
            return Err(ViewpointError::Invalid(format!(
                "objective of {} names unknown activity {}",
                viewpoint.id, viewpoint.objective.activity
            )));
        }
        self.viewpoints.push(viewpoint);
        Ok(())
    }

    pub fn viewpoint(&self, id: &str) -> Option<&Viewpoint> {
        self.viewpoints.iter().find(|v| v.id == id)
    }

    pub fn viewpoints(&self) -> &[Viewpoint] {
        &self.viewpoints
    }

    pub fn add_relationship(
        &mut self,
        relationship: ViewpointRelationship,
    ) -> Result<(), ViewpointError> {
        for end in [&relationship.from_vp, &relationship.to_vp] {
            if self.viewpoint(end.as_str()).is_none() {
                return Err(ViewpointError::UnknownViewpoint(end.clone()));
            }
        }
        if relationship.from_vp == relationship.to_vp {
            return Err(ViewpointError::Invalid(format!(
                "viewpoint {} related to itself",
                relationship.from_vp
            )));
        }
        self.relationships.push(relationship);
        Ok(())
    }

    pub fn relationships(&self) -> &[ViewpointRelationship] {
        &self.relationships
    }

    pub fn add_profile(&mut self, profile: BatchAccessProfile) -> Result<(), ViewpointError> {
        if self.profile(&profile.domain, profile.competence_level).is_some() {
            return Err(ViewpointError::DuplicateId {
                kind: "profile",
                id: format!("{}/{}", profile.domain, profile.competence_level),
            });
        }
        let mut kinds = HashSet::new();
        if let Some(dup) = profile.grants.iter().find(|g| !kinds.insert(&g.kind)) {
            return Err(ViewpointError::Invalid(format!(
                "profile {}/{} grants {} twice",
                profile.domain, profile.competence_level, dup.kind
            )));
        }
        self.profiles.push(profile);
        Ok(())
    }

    pub fn profile(&self, domain: &str, level: u32) -> Option<&BatchAccessProfile> {
        self.profiles.iter().find(|p| p.key() == (domain, level))
    }

    pub fn profiles(&self) -> &[BatchAccessProfile] {
        &self.profiles
    }

    /// Re-checks viewpoint references against a model, e.g. after the model changed.
    pub fn validate(&self, model: &ProductModel) -> Result<(), ViewpointError> {
        let mut fresh = ViewpointRegistry::new();
        for vp in &self.viewpoints {
            fresh.add_viewpoint(model, vp.clone())?;
        }
        for rel in &self.relationships {
            fresh.add_relationship(rel.clone())?;
        }
        for profile in &self.profiles {
            fresh.add_profile(profile.clone())?;
        }
        Ok(())
    }
}
