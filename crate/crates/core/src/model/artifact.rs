use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ArtifactId, ContentId, ModelError, Timestamp};
use crate::viewpoint::BatchKind;

/// A product component and its authorship metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactNode {
    pub id: ArtifactId,
    pub name: String,
    pub class_name: String,
    pub properties_ref: String,
    pub methods_ref: String,
    pub documentation_ref: String,
    pub description: String,
    pub created_by: String,
    pub creation_date: Timestamp,
    pub last_update_by: String,
    pub last_update_date: Timestamp,
    /// Opaque code carried through unchanged.
    pub type_code: i64,
    /// Only root artifacts carry a completeness flag.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_complete: Option<bool>,
}

impl ArtifactNode {
    pub(crate) fn check(&self) -> Result<(), ModelError> {
        if !self.id.is_well_formed() {
            return Err(ModelError::InvalidId(self.id.to_string()));
        }
        if self.creation_date.epoch() > self.last_update_date.epoch() {
            return Err(ModelError::UpdateBeforeCreation(self.id.clone()));
        }
        Ok(())
    }
}

/// Editable scalar fields of an artifact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtifactField {
    Name,
    ClassName,
    Properties,
    Methods,
    Documentation,
    Description,
    Type,
    IsComplete,
}

impl ArtifactField {
    pub const ALL: [ArtifactField; 8] = [
        ArtifactField::Name,
        ArtifactField::ClassName,
        ArtifactField::Properties,
        ArtifactField::Methods,
        ArtifactField::Documentation,
        ArtifactField::Description,
        ArtifactField::Type,
        ArtifactField::IsComplete,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ArtifactField::Name => "name",
            ArtifactField::ClassName => "class_name",
            ArtifactField::Properties => "properties",
            ArtifactField::Methods => "methods",
            ArtifactField::Documentation => "documentation",
            ArtifactField::Description => "description",
            ArtifactField::Type => "type",
            ArtifactField::IsComplete => "is_complete",
        }
    }

    /// Writes `value` into `node`, parsing it where the field is not free text.
    pub fn apply(self, node: &mut ArtifactNode, value: &str) -> Result<(), ModelError> {
        match self {
            ArtifactField::Name => node.name = value.to_owned(),
            ArtifactField::ClassName => node.class_name = value.to_owned(),
            ArtifactField::Properties => node.properties_ref = value.to_owned(),
            ArtifactField::Methods => node.methods_ref = value.to_owned(),
            ArtifactField::Documentation => node.documentation_ref = value.to_owned(),
            ArtifactField::Description => node.description = value.to_owned(),
            ArtifactField::Type => {
                node.type_code = value
                    .trim()
                    .parse()
                    .map_err(|_| ModelError::InvalidValue(format!("type: {value:?}")))?;
            }
            ArtifactField::IsComplete => {
                if node.is_complete.is_none() {
                    return Err(ModelError::CompletenessOnNonRoot(node.id.clone()));
                }
                node.is_complete = Some(parse_yes_no(value).ok_or_else(|| {
                    ModelError::InvalidValue(format!("is_complete: {value:?}"))
                })?);
            }
        }
        Ok(())
    }
}

impl fmt::Display for ArtifactField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ArtifactField {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|field| field.as_str() == s)
            .ok_or_else(|| ModelError::InvalidValue(format!("unknown artifact field {s:?}")))
    }
}

pub fn parse_yes_no(value: &str) -> Option<bool> {
    match value {
        "Yes" => Some(true),
        "No" => Some(false),
        _ => None,
    }
}

pub fn yes_no(flag: bool) -> &'static str {
    if flag {
        "Yes"
    } else {
        "No"
    }
}

/// Parent/child link in the product decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblyEdge {
    pub parent: ArtifactId,
    pub child: ArtifactId,
    #[serde(default)]
    pub relationship_note: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum InteractionKind {
    Space,
    Energy,
    Material,
    Information,
}

impl InteractionKind {
    pub const ALL: [InteractionKind; 4] = [
        InteractionKind::Space,
        InteractionKind::Energy,
        InteractionKind::Material,
        InteractionKind::Information,
    ];
}

impl fmt::Display for InteractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Undirected interaction between two components, stored with `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interaction {
    pub a: ArtifactId,
    pub b: ArtifactId,
    pub kind: InteractionKind,
    #[serde(default)]
    pub note: String,
}

impl Interaction {
    pub fn new(
        a: ArtifactId,
        b: ArtifactId,
        kind: InteractionKind,
        note: impl Into<String>,
    ) -> Self {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Self {
            a,
            b,
            kind,
            note: note.into(),
        }
    }

    pub(crate) fn same_link(&self, other: &Interaction) -> bool {
        self.a == other.a && self.b == other.b && self.kind == other.kind
    }
}

/// Category of a batch content record. Each maps to exactly one batch kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ContentKind {
    Function,
    Behavior,
    Flow,
    Geometry,
    Constraint,
    Requirement,
}

impl ContentKind {
    pub fn batch_kind(self) -> BatchKind {
        match self {
            ContentKind::Function => BatchKind::Function,
            ContentKind::Behavior => BatchKind::Behavior,
            ContentKind::Flow => BatchKind::Flows,
            ContentKind::Geometry => BatchKind::GeometryForm,
            ContentKind::Constraint => BatchKind::Constraints,
            ContentKind::Requirement => BatchKind::Requirements,
        }
    }

    pub fn for_batch(kind: &BatchKind) -> Option<ContentKind> {
        Some(match kind {
            BatchKind::Function => ContentKind::Function,
            BatchKind::Behavior => ContentKind::Behavior,
            BatchKind::Flows => ContentKind::Flow,
            BatchKind::GeometryForm => ContentKind::Geometry,
            BatchKind::Constraints => ContentKind::Constraint,
            BatchKind::Requirements => ContentKind::Requirement,
            _ => return None,
        })
    }
}

/// Function, behavior, flow, geometry reference, constraint or requirement attached to
/// an artifact.
///
/// Flows hang off the owning artifact and may name the function they realize.
/// Geometry payloads are references to external CAD documents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContentRecord {
    pub id: ContentId,
    pub owner: ArtifactId,
    pub kind: ContentKind,
    pub payload: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<ContentId>,
}

impl ContentRecord {
    pub fn batch_kind(&self) -> BatchKind {
        self.kind.batch_kind()
    }
}
