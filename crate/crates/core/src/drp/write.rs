use std::fmt::Write;

use quick_xml::escape::{escape, partial_escape};

use super::{DrpArtifact, DrpDocument, XSI_NAMESPACE};
use crate::model::yes_no;

pub(super) fn render(doc: &DrpDocument) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" ?>\n");
    let _ = writeln!(
        out,
        "<DRP xmlns:xsi=\"{XSI_NAMESPACE}\" xsi:noNamespaceSchemaLocation=\"{}\">",
        escape(doc.schema_location.as_str())
    );
    out.push_str("<Artifact>\n");
    record(&mut out, "One-Artifact", "id_artifact", &doc.root);
    for sub in &doc.sub_artifacts {
        record(&mut out, "Sub-artifact", "id_sub_artifact", sub);
    }
    out.push_str("</Artifact>\n");
    out.push_str("</DRP>\n");
    out
}

fn record(out: &mut String, element: &str, id_element: &str, a: &DrpArtifact) {
    let _ = writeln!(out, "  <{element}>");
    let type_code = a.type_code.to_string();
    let fields: [(&str, &str); 12] = [
        (id_element, &a.id),
        ("name", &a.name),
        ("class_name", &a.class_name),
        ("properties", &a.properties),
        ("methods", &a.methods),
        ("documentation", &a.documentation),
        ("description", &a.description),
        ("created_by", &a.created_by),
        ("creation_date", &a.creation_date),
        ("last_update_by", &a.last_update_by),
        ("last_update_date", &a.last_update_date),
        ("type", &type_code),
    ];
    for (name, value) in fields {
        leaf(out, name, value);
    }
    if let Some(flag) = a.is_complete {
        leaf(out, "is_complete", yes_no(flag));
    }
    let _ = writeln!(out, "  </{element}>");
}

fn leaf(out: &mut String, name: &str, value: &str) {
    let _ = writeln!(out, "    <{name}>{}</{name}>", partial_escape(value));
}
