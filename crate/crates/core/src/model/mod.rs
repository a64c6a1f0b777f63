//! Neutral product, process and organization model.
//!
//! [`ProductModel`] owns every record and enforces the structural invariants on each
//! mutation: unique ids, an acyclic decomposition, canonical undirected interactions,
//! resolvable owners and a symmetric zero-diagonal team matrix.

mod artifact;
mod ids;
mod organization;
mod process;
mod timestamp;

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

pub use artifact::{
    parse_yes_no, yes_no, ArtifactField, ArtifactNode, AssemblyEdge, ContentKind, ContentRecord,
    Interaction, InteractionKind,
};
pub use ids::{
    ActivityId, ActorId, ArtifactId, ContentId, ProcessId, ProposalId, TaskId, TeamId, ViewpointId,
};
pub use organization::{ActorRecord, Competence, Team, TeamInteraction, TeamMatrix};
pub use process::{ActivityNode, InfoFlowEdge, ProcessNode, TaskNode};
pub use timestamp::Timestamp;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{kind} {id} already exists")]
    DuplicateId { kind: &'static str, id: String },
    #[error("unknown {kind} {id}")]
    UnknownId { kind: &'static str, id: String },
    #[error("edge {parent} -> {child} would create a cycle")]
    CycleDetected { parent: ArtifactId, child: ArtifactId },
    #[error("artifact {0} cannot interact with itself")]
    SelfInteraction(ArtifactId),
    #[error("malformed artifact id {0:?}")]
    InvalidId(String),
    #[error("invalid timestamp {0:?}")]
    InvalidTimestamp(String),
    #[error("artifact {0} was updated before it was created")]
    UpdateBeforeCreation(ArtifactId),
    #[error("artifact {0} has a parent but carries is_complete")]
    CompletenessOnNonRoot(ArtifactId),
    #[error("root artifact {0} lacks is_complete")]
    MissingCompleteness(ArtifactId),
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("inconsistent model: {0}")]
    Inconsistent(String),
}

impl ModelError {
    pub fn name(&self) -> &'static str {
        match self {
            ModelError::DuplicateId { .. } => "DuplicateId",
            ModelError::UnknownId { .. } => "UnknownId",
            ModelError::CycleDetected { .. } => "CycleDetected",
            ModelError::SelfInteraction(_) => "SelfInteraction",
            ModelError::InvalidId(_) => "InvalidId",
            ModelError::InvalidTimestamp(_) => "InvalidTimestamp",
            ModelError::UpdateBeforeCreation(_) => "UpdateBeforeCreation",
            ModelError::CompletenessOnNonRoot(_) => "CompletenessOnNonRoot",
            ModelError::MissingCompleteness(_) => "MissingCompleteness",
            ModelError::InvalidValue(_) => "InvalidValue",
            ModelError::Inconsistent(_) => "Inconsistent",
        }
    }

    fn unknown(kind: &'static str, id: impl ToString) -> Self {
        ModelError::UnknownId {
            kind,
            id: id.to_string(),
        }
    }

    fn duplicate(kind: &'static str, id: impl ToString) -> Self {
        ModelError::DuplicateId {
            kind,
            id: id.to_string(),
        }
    }
}

/// The base-level product, process and organization graph.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProductModel {
    artifacts: Vec<ArtifactNode>,
    artifact_index: HashMap<ArtifactId, usize>,
    edges: Vec<AssemblyEdge>,
    children: HashMap<ArtifactId, Vec<ArtifactId>>,
    parents: HashMap<ArtifactId, Vec<ArtifactId>>,
    interactions: Vec<Interaction>,
    contents: Vec<ContentRecord>,
    content_index: HashMap<ContentId, usize>,

    tasks: Vec<TaskNode>,
    activities: Vec<ActivityNode>,
    processes: Vec<ProcessNode>,
    flows: Vec<InfoFlowEdge>,
    task_activity: HashMap<TaskId, ActivityId>,
    activity_process: HashMap<ActivityId, ProcessId>,

    teams: Vec<Team>,
    actors: Vec<ActorRecord>,
    competences: Vec<Competence>,
    team_interactions: Vec<TeamInteraction>,
}

impl ProductModel {
    pub fn new() -> Self {
        Self::default()
    }

    // ---- product structure ----

    pub fn add_artifact(&mut self, node: ArtifactNode) -> Result<ArtifactId, ModelError> {
        node.check()?;
        if self.artifact_index.contains_key(&node.id) {
            return Err(ModelError::duplicate("artifact", &node.id));
        }
        let id = node.id.clone();
        self.artifact_index.insert(id.clone(), self.artifacts.len());
        self.artifacts.push(node);
        Ok(id)
    }

    pub fn artifact(&self, id: &str) -> Option<&ArtifactNode> {
        self.artifact_index.get(id).map(|&i| &self.artifacts[i])
    }

    pub fn contains_artifact(&self, id: &str) -> bool {
        self.artifact_index.contains_key(id)
    }

    pub fn artifacts(&self) -> &[ArtifactNode] {
        &self.artifacts
    }

    /// Swaps in a new version of an existing artifact.
    pub fn replace_artifact(&mut self, node: ArtifactNode) -> Result<(), ModelError> {
        node.check()?;
        let idx = *self
            .artifact_index
            .get(&node.id)
            .ok_or_else(|| ModelError::unknown("artifact", &node.id))?;
        let is_root = self.is_root(&node.id);
        if is_root != node.is_complete.is_some() {
            return Err(if is_root {
                ModelError::MissingCompleteness(node.id)
            } else {
                ModelError::CompletenessOnNonRoot(node.id)
            });
        }
        self.artifacts[idx] = node;
        Ok(())
    }

    pub fn add_assembly_edge(
        &mut self,
        parent: &ArtifactId,
        child: &ArtifactId,
        relationship_note: impl Into<String>,
    ) -> Result<AssemblyEdge, ModelError> {
        for id in [parent, child] {
            if !self.contains_artifact(id) {
                return Err(ModelError::unknown("artifact", id));
            }
        }
        if parent == child || self.reaches(child, parent) {
            return Err(ModelError::CycleDetected {
                parent: parent.clone(),
                child: child.clone(),
            });
        }
        if self.children_of(parent).contains(child) {
            return Err(ModelError::duplicate(
                "assembly edge",
                format!("{parent}->{child}"),
            ));
        }
        if self.artifact(child).and_then(|n| n.is_complete).is_some() {
            return Err(ModelError::CompletenessOnNonRoot(child.clone()));
        }
        let edge = AssemblyEdge {
            parent: parent.clone(),
            child: child.clone(),
            relationship_note: relationship_note.into(),
        };
        self.children
            .entry(parent.clone())
            .or_default()
            .push(child.clone());
        self.parents
            .entry(child.clone())
            .or_default()
            .push(parent.clone());
        self.edges.push(edge.clone());
        Ok(edge)
    }

    pub fn edges(&self) -> &[AssemblyEdge] {
        &self.edges
    }

    pub fn children_of(&self, id: &str) -> &[ArtifactId] {
        self.children.get(id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn parents_of(&self, id: &str) -> &[ArtifactId] {
        self.parents.get(id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_root(&self, id: &str) -> bool {
        self.parents_of(id).is_empty()
    }

    /// True when `to` is reachable from `from` along parent -> child edges.
    fn reaches(&self, from: &ArtifactId, to: &ArtifactId) -> bool {
        let mut stack = vec![from];
        let mut seen = HashSet::new();
        while let Some(id) = stack.pop() {
            if id == to {
                return true;
            }
            if seen.insert(id) {
                stack.extend(self.children_of(id));
            }
        }
        false
    }

    /// All transitive parents of `id`, excluding `id` itself.
    pub fn ancestors(&self, id: &str) -> HashSet<&ArtifactId> {
        let mut out = HashSet::new();
        let mut stack: Vec<&ArtifactId> = self.parents_of(id).iter().collect();
        while let Some(p) = stack.pop() {
            if out.insert(p) {
                stack.extend(self.parents_of(p));
            }
        }
        out
    }

    /// Depth-first pre-order listing of `root` and everything below it.
    ///
    /// Children are visited in edge insertion order; a component shared by several
    /// parents is listed once, at its first visit.
    pub fn decomposition(&self, root: &str) -> Result<Vec<ArtifactId>, ModelError> {
        let root = self
            .artifact_index
            .get_key_value(root)
            .map(|(k, _)| k)
            .ok_or_else(|| ModelError::unknown("artifact", root))?;
        let mut order = Vec::new();
        let mut seen = HashSet::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            order.push(id.clone());
            stack.extend(self.children_of(id).iter().rev());
        }
        Ok(order)
    }

    /// Records an undirected interaction. Re-adding the same link in either direction
    /// leaves the store unchanged and returns the stored record.
    pub fn add_interaction(
        &mut self,
        a: &ArtifactId,
        b: &ArtifactId,
        kind: InteractionKind,
        note: impl Into<String>,
    ) -> Result<Interaction, ModelError> {
        for id in [a, b] {
            if !self.contains_artifact(id) {
                return Err(ModelError::unknown("artifact", id));
            }
        }
        if a == b {
            return Err(ModelError::SelfInteraction(a.clone()));
        }
        let candidate = Interaction::new(a.clone(), b.clone(), kind, note);
        if let Some(existing) = self.interactions.iter().find(|i| i.same_link(&candidate)) {
            return Ok(existing.clone());
        }
        self.interactions.push(candidate.clone());
        Ok(candidate)
    }

    pub fn interactions(&self) -> &[Interaction] {
        &self.interactions
    }

    pub fn interaction_histogram(&self) -> BTreeMap<InteractionKind, usize> {
        let mut hist: BTreeMap<_, _> = InteractionKind::ALL.iter().map(|k| (*k, 0)).collect();
        for interaction in &self.interactions {
            *hist.entry(interaction.kind).or_default() += 1;
        }
        hist
    }

    pub fn add_content(&mut self, record: ContentRecord) -> Result<(), ModelError> {
        if self.content_index.contains_key(&record.id) {
            return Err(ModelError::duplicate("content", &record.id));
        }
        self.check_content(&record)?;
        self.content_index
            .insert(record.id.clone(), self.contents.len());
        self.contents.push(record);
        Ok(())
    }

    /// Replaces the payload of an existing record, or inserts it when new.
    pub fn upsert_content(&mut self, record: ContentRecord) -> Result<(), ModelError> {
        self.check_content(&record)?;
        match self.content_index.get(&record.id) {
            Some(&i) => {
                let current = &self.contents[i];
                if current.owner != record.owner || current.kind != record.kind {
                    return Err(ModelError::InvalidValue(format!(
                        "content {} belongs to {} as {:?}",
                        record.id, current.owner, current.kind
                    )));
                }
                self.contents[i] = record;
            }
            None => {
                self.content_index
                    .insert(record.id.clone(), self.contents.len());
                self.contents.push(record);
            }
        }
        Ok(())
    }

    fn check_content(&self, record: &ContentRecord) -> Result<(), ModelError> {
        if !self.contains_artifact(&record.owner) {
            return Err(ModelError::unknown("artifact", &record.owner));
        }
        if let Some(function) = &record.function {
            let target = self.content(function.as_str());
            if record.kind != ContentKind::Flow
                || !matches!(target, Some(f) if f.kind == ContentKind::Function)
            {
                return Err(ModelError::InvalidValue(format!(
                    "content {} cannot reference function {function}",
                    record.id
                )));
            }
        }
        Ok(())
    }

    pub fn content(&self, id: &str) -> Option<&ContentRecord> {
        self.content_index.get(id).map(|&i| &self.contents[i])
    }

    pub fn contents(&self) -> &[ContentRecord] {
        &self.contents
    }

    pub fn contents_of<'a>(
        &'a self,
        owner: &'a str,
    ) -> impl Iterator<Item = &'a ContentRecord> + 'a {
        self.contents.iter().filter(move |c| c.owner == owner)
    }

    // ---- process ----

    pub fn add_task(&mut self, task: TaskNode) -> Result<(), ModelError> {
        if self.task(task.id.as_str()).is_some() {
            return Err(ModelError::duplicate("task", &task.id));
        }
        self.tasks.push(task);
        Ok(())
    }

    pub fn task(&self, id: &str) -> Option<&TaskNode> {
        self.tasks.iter().find(|t| t.id == id)
    }

    pub fn add_activity(&mut self, activity: ActivityNode) -> Result<(), ModelError> {
        if self.activity(activity.id.as_str()).is_some() {
            return Err(ModelError::duplicate("activity", &activity.id));
        }
        for task in &activity.tasks {
            if self.task(task.as_str()).is_none() {
                return Err(ModelError::unknown("task", task));
            }
            if let Some(owner) = self.task_activity.get(task) {
                return Err(ModelError::Inconsistent(format!(
                    "task {task} already belongs to activity {owner}"
                )));
            }
        }
        for task in &activity.tasks {
            self.task_activity
                .insert(task.clone(), activity.id.clone());
        }
        self.activities.push(activity);
        Ok(())
    }

    pub fn activity(&self, id: &str) -> Option<&ActivityNode> {
        self.activities.iter().find(|a| a.id == id)
    }

    pub fn add_process(&mut self, process: ProcessNode) -> Result<(), ModelError> {
        if self.process(process.id.as_str()).is_some() {
            return Err(ModelError::duplicate("process", &process.id));
        }
        if process.activities.is_empty() {
            return Err(ModelError::InvalidValue(format!(
                "process {} has no activity",
                process.id
            )));
        }
        if let Some(parent) = &process.parent {
            if self.process(parent.as_str()).is_none() {
                return Err(ModelError::unknown("process", parent));
            }
        }
        for activity in &process.activities {
            if self.activity(activity.as_str()).is_none() {
                return Err(ModelError::unknown("activity", activity));
            }
            if let Some(owner) = self.activity_process.get(activity) {
                return Err(ModelError::Inconsistent(format!(
                    "activity {activity} already belongs to process {owner}"
                )));
            }
        }
        for activity in &process.activities {
            self.activity_process
                .insert(activity.clone(), process.id.clone());
        }
        self.processes.push(process);
        Ok(())
    }

    pub fn process(&self, id: &str) -> Option<&ProcessNode> {
        self.processes.iter().find(|p| p.id == id)
    }

    pub fn processes(&self) -> &[ProcessNode] {
        &self.processes
    }

    pub fn activities(&self) -> &[ActivityNode] {
        &self.activities
    }

    pub fn tasks(&self) -> &[TaskNode] {
        &self.tasks
    }

    fn process_root_of_task(&self, task: &str) -> Option<&ProcessId> {
        let activity = self.task_activity.get(task)?;
        let mut process = self.activity_process.get(activity)?;
        while let Some(parent) = self.process(process.as_str())?.parent.as_ref() {
            process = parent;
        }
        Some(process)
    }

    pub fn add_info_flow(&mut self, flow: InfoFlowEdge) -> Result<(), ModelError> {
        let mut roots = Vec::with_capacity(2);
        for task in [&flow.from, &flow.to] {
            if self.task(task.as_str()).is_none() {
                return Err(ModelError::unknown("task", task));
            }
            roots.push(self.process_root_of_task(task.as_str()).ok_or_else(|| {
                ModelError::Inconsistent(format!("task {task} is not attached to a process"))
            })?);
        }
        if roots[0] != roots[1] {
            return Err(ModelError::Inconsistent(format!(
                "flow {} -> {} crosses process trees",
                flow.from, flow.to
            )));
        }
        if flow.from == flow.to || self.task_reaches(&flow.to, &flow.from) {
            return Err(ModelError::Inconsistent(format!(
                "flow {} -> {} would create a task cycle",
                flow.from, flow.to
            )));
        }
        self.flows.push(flow);
        Ok(())
    }

    fn task_reaches(&self, from: &TaskId, to: &TaskId) -> bool {
        let mut stack = vec![from];
        let mut seen = HashSet::new();
        while let Some(task) = stack.pop() {
            if task == to {
                return true;
            }
            if seen.insert(task) {
                stack.extend(self.flows.iter().filter(|f| &f.from == task).map(|f| &f.to));
            }
        }
        false
    }

    pub fn info_flows(&self) -> &[InfoFlowEdge] {
        &self.flows
    }

    // ---- organization ----

    pub fn add_team(&mut self, mut team: Team) -> Result<(), ModelError> {
        if self.team(team.id.as_str()).is_some() {
            return Err(ModelError::duplicate("team", &team.id));
        }
        if !self.contains_artifact(&team.responsible_for) {
            return Err(ModelError::unknown("artifact", &team.responsible_for));
        }
        team.members.clear();
        self.teams.push(team);
        Ok(())
    }

    pub fn team(&self, id: &str) -> Option<&Team> {
        self.teams.iter().find(|t| t.id == id)
    }

    pub fn teams(&self) -> &[Team] {
        &self.teams
    }

    pub fn add_actor(&mut self, actor: ActorRecord) -> Result<(), ModelError> {
        if self.actor(actor.id.as_str()).is_some() {
            return Err(ModelError::duplicate("actor", &actor.id));
        }
        let team = self
            .teams
            .iter_mut()
            .find(|t| t.id == actor.team)
            .ok_or_else(|| ModelError::unknown("team", &actor.team))?;
        team.members.push(actor.id.clone());
        self.actors.push(actor);
        Ok(())
    }

    pub fn actor(&self, id: &str) -> Option<&ActorRecord> {
        self.actors.iter().find(|a| a.id == id)
    }

    pub fn actors(&self) -> &[ActorRecord] {
        &self.actors
    }

    pub fn add_competence(&mut self, competence: Competence) -> Result<(), ModelError> {
        if self.actor(competence.actor.as_str()).is_none() {
            return Err(ModelError::unknown("actor", &competence.actor));
        }
        if competence.level < 1 {
            return Err(ModelError::InvalidValue(format!(
                "competence level of {} must be at least 1",
                competence.actor
            )));
        }
        if self
            .competences
            .iter()
            .any(|c| c.actor == competence.actor && c.domain == competence.domain)
        {
            return Err(ModelError::duplicate(
                "competence",
                format!("{}/{}", competence.actor, competence.domain),
            ));
        }
        self.competences.push(competence);
        Ok(())
    }

    pub fn competences(&self) -> &[Competence] {
        &self.competences
    }

    pub fn add_team_interaction(
        &mut self,
        a: &TeamId,
        b: &TeamId,
        frequency: f64,
    ) -> Result<TeamInteraction, ModelError> {
        for id in [a, b] {
            if self.team(id.as_str()).is_none() {
                return Err(ModelError::unknown("team", id));
            }
        }
        if a == b {
            return Err(ModelError::InvalidValue(format!(
                "team {a} cannot interact with itself"
            )));
        }
        if !frequency.is_finite() || frequency < 0.0 {
            return Err(ModelError::InvalidValue(format!(
                "frequency {frequency} between {a} and {b}"
            )));
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if self.team_interactions.iter().any(|t| &t.a == a && &t.b == b) {
            return Err(ModelError::duplicate("team interaction", format!("{a}/{b}")));
        }
        let link = TeamInteraction {
            a: a.clone(),
            b: b.clone(),
            frequency,
        };
        self.team_interactions.push(link.clone());
        Ok(link)
    }

    pub fn team_interactions(&self) -> &[TeamInteraction] {
        &self.team_interactions
    }

    pub fn team_matrix(&self) -> TeamMatrix {
        let teams: Vec<TeamId> = self.teams.iter().map(|t| t.id.clone()).collect();
        let n = teams.len();
        let pos = |id: &TeamId| teams.iter().position(|t| t == id);
        let mut values = vec![0.0; n * n];
        for link in &self.team_interactions {
            if let (Some(i), Some(j)) = (pos(&link.a), pos(&link.b)) {
                values[i * n + j] = link.frequency;
                values[j * n + i] = link.frequency;
            }
        }
        TeamMatrix::new(teams, values)
    }

    /// Whole-model consistency check, run after bulk loads.
    pub fn validate(&self) -> Result<(), ModelError> {
        for node in &self.artifacts {
            node.check()?;
            match (self.is_root(&node.id), node.is_complete.is_some()) {
                (true, false) => return Err(ModelError::MissingCompleteness(node.id.clone())),
                (false, true) => return Err(ModelError::CompletenessOnNonRoot(node.id.clone())),
                _ => {}
            }
        }
        // Kahn's algorithm over the decomposition graph.
        let mut indegree: HashMap<&ArtifactId, usize> =
            self.artifacts.iter().map(|a| (&a.id, 0)).collect();
        for edge in &self.edges {
            *indegree
                .get_mut(&edge.child)
                .ok_or_else(|| ModelError::unknown("artifact", &edge.child))? += 1;
        }
        let mut ready: Vec<&ArtifactId> = indegree
            .iter()
            .filter(|(_, d)| **d == 0)
            .map(|(id, _)| *id)
            .collect();
        let mut visited = 0;
        while let Some(id) = ready.pop() {
            visited += 1;
            for child in self.children_of(id) {
                let d = indegree.get_mut(child).expect("child indexed");
                *d -= 1;
                if *d == 0 {
                    ready.push(child);
                }
            }
        }
        if visited != self.artifacts.len() {
            return Err(ModelError::Inconsistent(
                "decomposition graph contains a cycle".into(),
            ));
        }
        for i in &self.interactions {
            if i.a >= i.b || !self.contains_artifact(&i.a) || !self.contains_artifact(&i.b) {
                return Err(ModelError::Inconsistent(format!(
                    "interaction {}-{} is not canonical",
                    i.a, i.b
                )));
            }
        }
        for c in &self.contents {
            if !self.contains_artifact(&c.owner) {
                return Err(ModelError::unknown("artifact", &c.owner));
            }
        }
        for actor in &self.actors {
            let owners = self
                .teams
                .iter()
                .filter(|t| t.members.contains(&actor.id))
                .count();
            if owners != 1 || !self.team(actor.team.as_str()).is_some_and(|t| t.members.contains(&actor.id)) {
                return Err(ModelError::Inconsistent(format!(
                    "actor {} must belong to exactly one team",
                    actor.id
                )));
            }
        }
        let matrix = self.team_matrix();
        for row in 0..matrix.dim() {
            if matrix.get(row, row) != 0.0 {
                return Err(ModelError::Inconsistent("team matrix diagonal".into()));
            }
            for col in 0..row {
                if matrix.get(row, col) != matrix.get(col, row) {
                    return Err(ModelError::Inconsistent("team matrix symmetry".into()));
                }
            }
        }
        Ok(())
    }
}
