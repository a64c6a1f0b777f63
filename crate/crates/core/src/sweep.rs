//! Batch evaluation of many `(artifact, actor)` filter requests.
//!
//! With the `parallel` feature (on by default) requests fan out over rayon's pool.
//! Without it, [`filter_many`] runs sequentially. Results keep the order of the
//! requests either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::model::{
    ActivityId, ActivityNode, ActorId, ActorRecord, ArtifactId, ArtifactNode, ProcessNode,
    TaskNode, Team, Timestamp,
};
use crate::store::Snapshot;
use crate::viewpoint::{
    BatchAccessProfile, BatchConnexion, BatchKind, InformationSet, Level, Viewpoint,
    ViewpointEngine, ViewpointError, ViewpointObjective,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterRequest {
    pub artifact: ArtifactId,
    pub actor: ActorId,
}

pub type FilterOutcome = Result<InformationSet, ViewpointError>;

pub fn filter_many_sequential(engine: &ViewpointEngine<'_>, requests: &[FilterRequest]) -> Vec<FilterOutcome> {
    requests
        .iter()
        .map(|r| engine.filter_info_artifact(r.artifact.as_str(), r.actor.as_str()))
        .collect()
}

#[cfg(feature = "parallel")]
pub fn filter_many_parallel(engine: &ViewpointEngine<'_>, requests: &[FilterRequest]) -> Vec<FilterOutcome> {
    requests
        .par_iter()
        .map(|r| engine.filter_info_artifact(r.artifact.as_str(), r.actor.as_str()))
        .collect()
}

pub fn filter_many(engine: &ViewpointEngine<'_>, requests: &[FilterRequest]) -> Vec<FilterOutcome> {
    #[cfg(feature = "parallel")]
    {
        filter_many_parallel(engine, requests)
    }
    #[cfg(not(feature = "parallel"))]
    {
        filter_many_sequential(engine, requests)
    }
}

/// Every `(artifact, actor)` pair in the snapshot, artifacts outermost.
pub fn all_pairs(snapshot: &Snapshot) -> Vec<FilterRequest> {
    let actors = snapshot.model.actors();
    snapshot
        .model
        .artifacts()
        .iter()
        .flat_map(|a| {
            actors.iter().map(move |actor| FilterRequest {
                artifact: a.id.clone(),
                actor: actor.id.clone(),
            })
        })
        .collect()
}

/// Information sets for every pair that has an applicable viewpoint.
pub fn restitution_table(snapshot: &Snapshot) -> Vec<InformationSet> {
    let engine = snapshot.engine();
    filter_many(&engine, &all_pairs(snapshot))
        .into_iter()
        .filter_map(Result::ok)
        .collect()
}

/// Deterministic synthetic workload for benchmarks: a balanced product tree of
/// `components + 1` artifacts and `actors` actors holding `viewpoints_per_actor`
/// viewpoints each, scoped at varying depths.
pub fn synthetic_snapshot(components: usize, actors: usize, viewpoints_per_actor: usize) -> Snapshot {
    const FANOUT: usize = 4;
    const DOMAINS: [&str; 4] = ["geometry", "mechanic", "process", "manufacturing"];
    let mut s = Snapshot::default();
    let ts = Timestamp::from_epoch(1_131_773_684);
    for i in 0..=components {
        s.model
            .add_artifact(ArtifactNode {
                id: ArtifactId::new((1_000_000 + i).to_string()),
                name: format!("component {i}"),
                class_name: "ARTIFACT".into(),
                properties_ref: format!("PR{i:04}"),
                methods_ref: "No methods".into(),
                documentation_ref: "No documentation".into(),
                description: String::new(),
                created_by: "bench".into(),
                creation_date: ts.clone(),
                last_update_by: "bench".into(),
                last_update_date: ts.clone(),
                type_code: i as i64,
                is_complete: (i == 0).then_some(false),
            })
            .expect("fresh id");
        if i > 0 {
            let parent = ArtifactId::new((1_000_000 + (i - 1) / FANOUT).to_string());
            let child = ArtifactId::new((1_000_000 + i).to_string());
            s.model
                .add_assembly_edge(&parent, &child, "")
                .expect("tree edge");
        }
    }
    s.model
        .add_task(TaskNode {
            id: "T".into(),
            name: "work".into(),
            domain: "geometry".into(),
        })
        .expect("task");
    s.model
        .add_activity(ActivityNode {
            id: "A".into(),
            name: "work".into(),
            tasks: vec!["T".into()],
        })
        .expect("activity");
    s.model
        .add_process(ProcessNode {
            id: "P".into(),
            name: "work".into(),
            parent: None,
            activities: vec!["A".into()],
        })
        .expect("process");
    s.model
        .add_team(Team {
            id: "T1".into(),
            name: "everyone".into(),
            responsible_for: ArtifactId::new("1000000"),
            members: vec![],
        })
        .expect("team");

    for (d, domain) in DOMAINS.iter().enumerate() {
        for level in 1..=3u32 {
            let grants = BatchKind::GENERIC
                .iter()
                .enumerate()
                .filter(|(k, _)| !(k + d + level as usize).is_multiple_of(3))
                .map(|(k, kind)| {
                    BatchConnexion::new(
                        kind.clone(),
                        Level::new(1 + ((k as u32 + level) % 3)).expect("non-zero"),
                        format!("{domain} view of {kind}"),
                    )
                })
                .collect();
            s.viewpoints
                .add_profile(BatchAccessProfile {
                    domain: (*domain).into(),
                    competence_level: level,
                    grants,
                })
                .expect("unique profile");
        }
    }

    for a in 0..actors {
        let actor = ActorId::new(format!("actor{a:04}"));
        s.model
            .add_actor(ActorRecord {
                id: actor.clone(),
                name: actor.to_string(),
                role: "engineer".into(),
                team: "T1".into(),
            })
            .expect("actor");
        for v in 0..viewpoints_per_actor {
            let seed = a * 31 + v * 7;
            let domain = DOMAINS[seed % DOMAINS.len()];
            let scope = ArtifactId::new((1_000_000 + (seed * 13) % (components / 8 + 1)).to_string());
            s.viewpoints
                .add_viewpoint(
                    &s.model,
                    Viewpoint {
                        id: format!("VP{a:04}-{v}").into(),
                        actor: actor.clone(),
                        focus: format!("{domain} focus"),
                        domain: domain.into(),
                        competence_level: 1 + (seed % 3) as u32,
                        scope: vec![scope],
                        objective: ViewpointObjective {
                            focus: format!("{domain} focus"),
                            activity: ActivityId::from("A"),
                            domain: domain.into(),
                        },
                    },
                )
                .expect("viewpoint");
        }
    }
    s
}
