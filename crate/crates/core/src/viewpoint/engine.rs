use super::{
    optimize_connexions, BatchConnexion, InformationSet, Provenance, Viewpoint, ViewpointError,
    ViewpointRegistry,
};
use crate::model::{ActorId, ArtifactId, ProductModel};

/// Read-only view over a model and its viewpoint registry.
#[derive(Debug, Clone, Copy)]
pub struct ViewpointEngine<'a> {
    model: &'a ProductModel,
    registry: &'a ViewpointRegistry,
}

impl<'a> ViewpointEngine<'a> {
    pub fn new(model: &'a ProductModel, registry: &'a ViewpointRegistry) -> Self {
        Self { model, registry }
    }

    pub fn model(&self) -> &'a ProductModel {
        self.model
    }

    pub fn registry(&self) -> &'a ViewpointRegistry {
        self.registry
    }

    /// Every viewpoint held by `actor`, ordered by viewpoint id.
    pub fn restitute_viewpoints(&self, actor: &str) -> Result<Vec<&'a Viewpoint>, ViewpointError> {
        if self.model.actor(actor).is_none() {
            return Err(ViewpointError::UnknownActor(actor.into()));
        }
        let mut vps: Vec<_> = self
            .registry
            .viewpoints()
            .iter()
            .filter(|vp| vp.actor == actor)
            .collect();
        vps.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(vps)
    }

    /// Keeps the viewpoints whose scope names `artifact` or one of its ancestors.
    pub fn filter_viewpoints_for_artifact<'v>(
        &self,
        vps: &[&'v Viewpoint],
        artifact: &str,
    ) -> Result<Vec<&'v Viewpoint>, ViewpointError> {
        if !self.model.contains_artifact(artifact) {
            return Err(ViewpointError::UnknownArtifact(artifact.into()));
        }
        let ancestors = self.model.ancestors(artifact);
        Ok(vps
            .iter()
            .copied()
            .filter(|vp| {
                vp.scope
                    .iter()
                    .any(|s| s == artifact || ancestors.contains(s))
            })
            .collect())
    }

    /// The grant list of the profile matching the viewpoint's domain and competence.
    pub fn restitute_connexions(
        &self,
        vp: &Viewpoint,
    ) -> Result<Vec<BatchConnexion>, ViewpointError> {
        self.registry
            .profile(&vp.domain, vp.competence_level)
            .map(|p| p.grants.clone())
            .ok_or_else(|| ViewpointError::MissingProfile {
                domain: vp.domain.clone(),
                level: vp.competence_level,
            })
    }

    /// Runs the full pipeline for one actor on one artifact.
    pub fn filter_info_artifact(
        &self,
        artifact: &str,
        actor: &str,
    ) -> Result<InformationSet, ViewpointError> {
        if !self.model.contains_artifact(artifact) {
            return Err(ViewpointError::UnknownArtifact(artifact.into()));
        }
        let all = self.restitute_viewpoints(actor)?;
        let applicable = self.filter_viewpoints_for_artifact(&all, artifact)?;
        if applicable.is_empty() {
            return Err(ViewpointError::NoApplicableViewpoint {
                actor: actor.into(),
                artifact: artifact.into(),
            });
        }
        let classified = classify_viewpoints(&applicable);

        let mut grants = Vec::with_capacity(classified.len());
        let mut acc: Vec<BatchConnexion> = Vec::new();
        for (i, vp) in classified.iter().enumerate() {
            let connexions = self.restitute_connexions(vp)?;
            acc = if i == 0 {
                connexions.clone()
            } else {
                optimize_connexions(&acc, &connexions)
            };
            grants.push((*vp, connexions));
        }
        // A single viewpoint's list is kept verbatim; folding normalizes it otherwise.
        let connexions = acc;

        let provenance = connexions
            .iter()
            .map(|c| Provenance {
                kind: c.kind.clone(),
                viewpoints: grants
                    .iter()
                    .filter(|(_, list)| list.iter().any(|g| g.kind == c.kind))
                    .map(|(vp, _)| vp.id.clone())
                    .collect(),
            })
            .collect();
        let relationships = self
            .registry
            .relationships()
            .iter()
            .filter(|r| {
                classified.iter().any(|vp| vp.id == r.from_vp)
                    && classified.iter().any(|vp| vp.id == r.to_vp)
            })
            .cloned()
            .collect();

        Ok(InformationSet {
            actor: ActorId::from(actor),
            artifact: ArtifactId::from(artifact),
            connexions,
            provenance,
            relationships,
        })
    }
}

/// Orders viewpoints by decreasing competence, then by id.
pub fn classify_viewpoints<'v>(vps: &[&'v Viewpoint]) -> Vec<&'v Viewpoint> {
    let mut out = vps.to_vec();
    out.sort_by(|a, b| {
        b.competence_level
            .cmp(&a.competence_level)
            .then_with(|| a.id.cmp(&b.id))
    });
    out
}
