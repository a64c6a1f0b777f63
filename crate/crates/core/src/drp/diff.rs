use serde::{Deserialize, Serialize};

use super::{DrpArtifact, DrpDocument};
use crate::model::yes_no;

/// One field that differs between two documents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrpDifference {
    pub path: String,
    pub left: Option<String>,
    pub right: Option<String>,
}

fn fields(a: &DrpArtifact, id_name: &'static str) -> Vec<(&'static str, Option<String>)> {
    vec![
        (id_name, Some(a.id.clone())),
        ("name", Some(a.name.clone())),
        ("class_name", Some(a.class_name.clone())),
        ("properties", Some(a.properties.clone())),
        ("methods", Some(a.methods.clone())),
        ("documentation", Some(a.documentation.clone())),
        ("description", Some(a.description.clone())),
        ("created_by", Some(a.created_by.clone())),
        ("creation_date", Some(a.creation_date.clone())),
        ("last_update_by", Some(a.last_update_by.clone())),
        ("last_update_date", Some(a.last_update_date.clone())),
        ("type", Some(a.type_code.to_string())),
        ("is_complete", a.is_complete.map(|f| yes_no(f).to_owned())),
    ]
}

fn compare(out: &mut Vec<DrpDifference>, path: &str, id_name: &'static str, a: &DrpArtifact, b: &DrpArtifact) {
    for ((name, left), (_, right)) in fields(a, id_name).into_iter().zip(fields(b, id_name)) {
        if left != right {
            out.push(DrpDifference {
                path: format!("{path}/{name}"),
                left,
                right,
            });
        }
    }
}

/// Field-by-field comparison. Empty exactly when the documents are equal.
pub fn diff_drp(a: &DrpDocument, b: &DrpDocument) -> Vec<DrpDifference> {
    let mut out = Vec::new();
    if a.schema_location != b.schema_location {
        out.push(DrpDifference {
            path: "DRP/@xsi:noNamespaceSchemaLocation".into(),
            left: Some(a.schema_location.clone()),
            right: Some(b.schema_location.clone()),
        });
    }
    compare(&mut out, "Artifact/One-Artifact", "id_artifact", &a.root, &b.root);
    if a.sub_artifacts.len() != b.sub_artifacts.len() {
        out.push(DrpDifference {
            path: "Artifact/Sub-artifact".into(),
            left: Some(a.sub_artifacts.len().to_string()),
            right: Some(b.sub_artifacts.len().to_string()),
        });
    }
    for (i, (left, right)) in a.sub_artifacts.iter().zip(&b.sub_artifacts).enumerate() {
        compare(&mut out, &format!("Artifact/Sub-artifact[{i}]"), "id_sub_artifact", left, right);
    }
    out
}
