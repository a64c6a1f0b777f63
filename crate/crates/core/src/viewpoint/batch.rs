use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ViewpointError;

/// Category of information granted as a unit.
///
/// The ordering is the canonical listing order: application batches (such as
/// `Mechanic`) first by name, then the generic product batches.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum BatchKind {
    /// Discipline-specific batch outside the generic product set.
    Application(String),
    Artifact,
    Function,
    Behavior,
    Flows,
    GeometryForm,
    SubArtifact,
    Assembly,
    Constraints,
    Requirements,
    Group,
}

impl BatchKind {
    pub const GENERIC: [BatchKind; 10] = [
        BatchKind::Artifact,
        BatchKind::Function,
        BatchKind::Behavior,
        BatchKind::Flows,
        BatchKind::GeometryForm,
        BatchKind::SubArtifact,
        BatchKind::Assembly,
        BatchKind::Constraints,
        BatchKind::Requirements,
        BatchKind::Group,
    ];

    pub fn as_str(&self) -> &str {
        match self {
            BatchKind::Application(name) => name,
            BatchKind::Artifact => "Artifact",
            BatchKind::Function => "Function",
            BatchKind::Behavior => "Behavior",
            BatchKind::Flows => "Flows",
            BatchKind::GeometryForm => "Geometry-Form",
            BatchKind::SubArtifact => "Sub-Artifact",
            BatchKind::Assembly => "Assembly",
            BatchKind::Constraints => "Constraints",
            BatchKind::Requirements => "Requirements",
            BatchKind::Group => "Group",
        }
    }
}

impl fmt::Display for BatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BatchKind {
    type Err = ViewpointError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ViewpointError::Invalid("empty batch kind".into()));
        }
        Ok(Self::GENERIC
            .into_iter()
            .find(|kind| kind.as_str() == s)
            .unwrap_or_else(|| BatchKind::Application(s.to_owned())))
    }
}

impl TryFrom<String> for BatchKind {
    type Error = ViewpointError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<BatchKind> for String {
    fn from(kind: BatchKind) -> Self {
        kind.as_str().to_owned()
    }
}

/// Access tier on a batch. `1` is the fullest access; larger numbers carry less detail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Level(u32);

impl Level {
    pub const FULL: Level = Level(1);

    pub fn new(value: u32) -> Option<Self> {
        (value >= 1).then_some(Self(value))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn is_full(self) -> bool {
        self == Self::FULL
    }
}

impl TryFrom<u32> for Level {
    type Error = ViewpointError;

    fn try_from(value: u32) -> Result<Self, Self::Error> {
        Level::new(value).ok_or_else(|| ViewpointError::Invalid(format!("level {value} < 1")))
    }
}

impl From<Level> for u32 {
    fn from(level: Level) -> Self {
        level.0
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A `(batch kind, level)` access grant with the prose describing what it covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchConnexion {
    pub kind: BatchKind,
    pub level: Level,
    #[serde(default)]
    pub description: String,
}

impl BatchConnexion {
    pub fn new(kind: BatchKind, level: Level, description: impl Into<String>) -> Self {
        Self {
            kind,
            level,
            description: description.into(),
        }
    }

    /// Merge preference: lower level wins, description breaks ties.
    fn outranks(&self, other: &BatchConnexion) -> bool {
        (self.level, &self.description) < (other.level, &other.description)
    }
}

impl fmt::Display for BatchConnexion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}): {}", self.kind, self.level, self.description)
    }
}

/// Folds `next` into `acc`: the union of batch kinds, each at the fuller of the two levels.
///
/// The result holds one connexion per kind in canonical [`BatchKind`] order, which makes
/// the merge commutative, associative and idempotent as a list operation.
pub fn optimize_connexions(acc: &[BatchConnexion], next: &[BatchConnexion]) -> Vec<BatchConnexion> {
    let mut merged: BTreeMap<&BatchKind, &BatchConnexion> = BTreeMap::new();
    for connexion in acc.iter().chain(next) {
        merged
            .entry(&connexion.kind)
            .and_modify(|kept| {
                if connexion.outranks(kept) {
                    *kept = connexion;
                }
            })
            .or_insert(connexion);
    }
    merged.into_values().cloned().collect()
}
