//! DRP XML documents: the exchange format for filtered artifact information.
//!
//! A document carries one root artifact (`One-Artifact`) and the records of its
//! direct components (`Sub-artifact`). Field contents are redacted according to the
//! level at which the reader was granted the `Artifact` and `Sub-Artifact` batches.

mod diff;
mod read;
mod write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ArtifactField, ArtifactNode, ProductModel};
use crate::viewpoint::{BatchKind, InformationSet, Level};

pub use diff::{diff_drp, DrpDifference};
pub use read::import_drp;

pub const XSI_NAMESPACE: &str = "http://www.w3.org/2001/XMLSchema-instance";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum XmlError {
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error("missing required field {0}")]
    MissingRequiredField(String),
    #[error("invalid value at {path}: {value:?}")]
    InvalidValue { path: String, value: String },
    #[error("the information set does not grant the Artifact batch")]
    ArtifactBatchNotGranted,
    #[error("unknown artifact {0}")]
    UnknownArtifact(String),
}

impl XmlError {
    pub fn name(&self) -> &'static str {
        match self {
            XmlError::MalformedXml(_) => "MalformedXml",
            XmlError::UnknownElement(_) => "UnknownElement",
            XmlError::MissingRequiredField(_) => "MissingRequiredField",
            XmlError::InvalidValue { .. } => "InvalidValue",
            XmlError::ArtifactBatchNotGranted => "ArtifactBatchNotGranted",
            XmlError::UnknownArtifact(_) => "UnknownArtifact",
        }
    }
}

/// One `One-Artifact` or `Sub-artifact` record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrpArtifact {
    pub id: String,
    pub name: String,
    pub class_name: String,
    pub properties: String,
    pub methods: String,
    pub documentation: String,
    pub description: String,
    pub created_by: String,
    pub creation_date: String,
    pub last_update_by: String,
    pub last_update_date: String,
    pub type_code: i64,
    /// Present on the root record only.
    pub is_complete: Option<bool>,
}

impl DrpArtifact {
    fn from_node(node: &ArtifactNode) -> Self {
        Self {
            id: node.id.to_string(),
            name: node.name.clone(),
            class_name: node.class_name.clone(),
            properties: node.properties_ref.clone(),
            methods: node.methods_ref.clone(),
            documentation: node.documentation_ref.clone(),
            description: node.description.clone(),
            created_by: node.created_by.clone(),
            creation_date: node.creation_date.display().to_owned(),
            last_update_by: node.last_update_by.clone(),
            last_update_date: node.last_update_date.display().to_owned(),
            type_code: node.type_code,
            is_complete: node.is_complete,
        }
    }

    fn text_field_mut(&mut self, field: ArtifactField) -> Option<&mut String> {
        Some(match field {
            ArtifactField::Name => &mut self.name,
            ArtifactField::ClassName => &mut self.class_name,
            ArtifactField::Properties => &mut self.properties,
            ArtifactField::Methods => &mut self.methods,
            ArtifactField::Documentation => &mut self.documentation,
            ArtifactField::Description => &mut self.description,
            ArtifactField::Type | ArtifactField::IsComplete => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrpDocument {
    pub schema_location: String,
    pub root: DrpArtifact,
    pub sub_artifacts: Vec<DrpArtifact>,
}

impl DrpDocument {
    pub fn to_xml(&self) -> String {
        write::render(self)
    }
}

/// Field visibility rule: `field` is shown in full up to `max_level`, and replaced by a
/// reference note above it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RedactionRule {
    pub field: ArtifactField,
    pub max_level: u32,
}

/// Export settings stored next to the batch profiles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrpConfig {
    pub schema_location: String,
    pub redaction: Vec<RedactionRule>,
}

impl Default for DrpConfig {
    fn default() -> Self {
        Self {
            schema_location: "drp.xsd".into(),
            redaction: [
                ArtifactField::Properties,
                ArtifactField::Methods,
                ArtifactField::Documentation,
            ]
            .into_iter()
            .map(|field| RedactionRule { field, max_level: 1 })
            .collect(),
        }
    }
}

impl DrpConfig {
    fn redact(&self, record: &mut DrpArtifact, level: Level) {
        let id = record.id.clone();
        for rule in &self.redaction {
            if level.get() <= rule.max_level {
                continue;
            }
            if let Some(slot) = record.text_field_mut(rule.field) {
                *slot = format!("Restricted: see {} of {id}", rule.field);
            }
        }
    }
}

/// Builds the document an information set entitles its actor to.
pub fn build_drp(
    set: &InformationSet,
    model: &ProductModel,
    config: &DrpConfig,
) -> Result<DrpDocument, XmlError> {
    let root_level = set
        .level_of(&BatchKind::Artifact)
        .ok_or(XmlError::ArtifactBatchNotGranted)?;
    let node = model
        .artifact(set.artifact.as_str())
        .ok_or_else(|| XmlError::UnknownArtifact(set.artifact.to_string()))?;

    let mut root = DrpArtifact::from_node(node);
    // Sub-components never carry the flag, so a non-root export still needs one.
    root.is_complete = Some(node.is_complete.unwrap_or(false));
    config.redact(&mut root, root_level);

    let sub_artifacts = match set.level_of(&BatchKind::SubArtifact) {
        Some(level) => model
            .children_of(&node.id)
            .iter()
            .filter_map(|id| model.artifact(id.as_str()))
            .map(|child| {
                let mut record = DrpArtifact::from_node(child);
                record.is_complete = None;
                config.redact(&mut record, level);
                record
            })
            .collect(),
        None => Vec::new(),
    };

    Ok(DrpDocument {
        schema_location: config.schema_location.clone(),
        root,
        sub_artifacts,
    })
}

/// Builds and serializes the DRP document for an information set.
pub fn export_drp(
    set: &InformationSet,
    model: &ProductModel,
    config: &DrpConfig,
) -> Result<String, XmlError> {
    build_drp(set, model, config).map(|doc| doc.to_xml())
}
