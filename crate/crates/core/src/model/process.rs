use serde::{Deserialize, Serialize};

use super::{ActivityId, ProcessId, TaskId};

/// A development process. Processes form a tree through `parent`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessNode {
    pub id: ProcessId,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<ProcessId>,
    pub activities: Vec<ActivityId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivityNode {
    pub id: ActivityId,
    pub name: String,
    pub tasks: Vec<TaskId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskNode {
    pub id: TaskId,
    pub name: String,
    /// Discipline tag such as `geometry` or `mechanic`.
    pub domain: String,
}

/// Information or data passed from one task to another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfoFlowEdge {
    pub from: TaskId,
    pub to: TaskId,
    pub payload: String,
}
