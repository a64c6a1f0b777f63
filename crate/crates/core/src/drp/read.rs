use quick_xml::escape::unescape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::{DrpArtifact, DrpDocument, XmlError};
use crate::model::parse_yes_no;

#[derive(Debug, Default)]
struct Element {
    name: String,
    attrs: Vec<(String, String)>,
    children: Vec<Element>,
    text: String,
}

fn malformed(err: impl std::fmt::Display) -> XmlError {
    XmlError::MalformedXml(err.to_string())
}

fn open(start: &BytesStart<'_>) -> Result<Element, XmlError> {
    let name = String::from_utf8(start.name().as_ref().to_vec()).map_err(malformed)?;
    let mut attrs = Vec::new();
    for attr in start.attributes() {
        let attr = attr.map_err(malformed)?;
        let key = String::from_utf8(attr.key.as_ref().to_vec()).map_err(malformed)?;
        let value = attr.unescape_value().map_err(malformed)?.into_owned();
        attrs.push((key, value));
    }
    Ok(Element {
        name,
        attrs,
        ..Element::default()
    })
}

/// Parses the text into a small element tree. Whitespace between elements is dropped;
/// leaf text is kept exactly.
fn parse_tree(text: &str) -> Result<Element, XmlError> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(false);
    let mut stack: Vec<Element> = Vec::new();
    let mut root = None;
    loop {
        let event = reader.read_event().map_err(malformed)?;
        match event {
            Event::Decl(_) | Event::Comment(_) | Event::PI(_) | Event::DocType(_) => {}
            Event::Start(start) => stack.push(open(&start)?),
            Event::Empty(start) => {
                let element = open(&start)?;
                attach(&mut stack, &mut root, element)?;
            }
            Event::End(_) => {
                let element = stack.pop().ok_or_else(|| malformed("unbalanced end tag"))?;
                attach(&mut stack, &mut root, element)?;
            }
            Event::Text(t) => {
                let chunk = t.decode().map_err(malformed)?;
                push_text(&mut stack, &chunk)?;
            }
            Event::CData(t) => {
                let chunk = t.decode().map_err(malformed)?;
                push_text(&mut stack, &chunk)?;
            }
            Event::GeneralRef(r) => {
                let name = r.decode().map_err(malformed)?;
                let resolved = unescape(&format!("&{name};")).map_err(malformed)?.into_owned();
                push_text(&mut stack, &resolved)?;
            }
            Event::Eof => break,
        }
    }
    if !stack.is_empty() {
        return Err(malformed("unexpected end of document"));
    }
    root.ok_or_else(|| malformed("no root element"))
}

fn push_text(stack: &mut [Element], chunk: &str) -> Result<(), XmlError> {
    match stack.last_mut() {
        Some(top) => top.text.push_str(chunk),
        None if chunk.trim().is_empty() => {}
        None => return Err(malformed("text outside the root element")),
    }
    Ok(())
}

fn attach(
    stack: &mut [Element],
    root: &mut Option<Element>,
    element: Element,
) -> Result<(), XmlError> {
    match stack.last_mut() {
        Some(parent) => parent.children.push(element),
        None if root.is_none() => *root = Some(element),
        None => return Err(malformed("more than one root element")),
    }
    Ok(())
}

fn only_whitespace(element: &Element, path: &str) -> Result<(), XmlError> {
    if element.text.trim().is_empty() {
        Ok(())
    } else {
        Err(malformed(format!("unexpected text in {path}")))
    }
}

/// Parses DRP XML text back into a document.
pub fn import_drp(text: &str) -> Result<DrpDocument, XmlError> {
    let root = parse_tree(text)?;
    if root.name != "DRP" {
        return Err(XmlError::UnknownElement(root.name));
    }
    only_whitespace(&root, "DRP")?;
    let mut schema_location = None;
    for (key, value) in &root.attrs {
        match key.as_str() {
            "xmlns:xsi" => {}
            "xsi:noNamespaceSchemaLocation" => schema_location = Some(value.clone()),
            other => return Err(XmlError::UnknownElement(format!("DRP/@{other}"))),
        }
    }
    let schema_location = schema_location.ok_or_else(|| {
        XmlError::MissingRequiredField("DRP/@xsi:noNamespaceSchemaLocation".into())
    })?;

    let mut artifact = None;
    for child in root.children {
        match child.name.as_str() {
            "Artifact" if artifact.is_none() => artifact = Some(child),
            "Artifact" => return Err(malformed("duplicate Artifact element")),
            other => return Err(XmlError::UnknownElement(other.to_owned())),
        }
    }
    let artifact = artifact.ok_or_else(|| XmlError::MissingRequiredField("Artifact".into()))?;
    only_whitespace(&artifact, "Artifact")?;
    if let Some((key, _)) = artifact.attrs.first() {
        return Err(XmlError::UnknownElement(format!("Artifact/@{key}")));
    }

    let mut one = None;
    let mut subs = Vec::new();
    for child in artifact.children {
        match child.name.as_str() {
            "One-Artifact" if one.is_none() => {
                one = Some(record(child, "Artifact/One-Artifact", "id_artifact", true)?)
            }
            "One-Artifact" => return Err(malformed("duplicate One-Artifact element")),
            "Sub-artifact" => {
                let path = format!("Artifact/Sub-artifact[{}]", subs.len());
                subs.push(record(child, &path, "id_sub_artifact", false)?);
            }
            other => return Err(XmlError::UnknownElement(format!("Artifact/{other}"))),
        }
    }
    let root = one.ok_or_else(|| XmlError::MissingRequiredField("Artifact/One-Artifact".into()))?;
    Ok(DrpDocument {
        schema_location,
        root,
        sub_artifacts: subs,
    })
}

fn record(
    element: Element,
    path: &str,
    id_name: &str,
    is_root: bool,
) -> Result<DrpArtifact, XmlError> {
    only_whitespace(&element, path)?;
    if let Some((key, _)) = element.attrs.first() {
        return Err(XmlError::UnknownElement(format!("{path}/@{key}")));
    }
    let mut names: Vec<&str> = vec![
        id_name,
        "name",
        "class_name",
        "properties",
        "methods",
        "documentation",
        "description",
        "created_by",
        "creation_date",
        "last_update_by",
        "last_update_date",
        "type",
    ];
    if is_root {
        names.push("is_complete");
    }
    let mut values: Vec<Option<String>> = vec![None; names.len()];
    for field in element.children {
        let field_path = format!("{path}/{}", field.name);
        let slot = names
            .iter()
            .position(|n| *n == field.name)
            .ok_or_else(|| XmlError::UnknownElement(field_path.clone()))?;
        if !field.children.is_empty() {
            return Err(XmlError::UnknownElement(format!(
                "{field_path}/{}",
                field.children[0].name
            )));
        }
        if values[slot].is_some() {
            return Err(malformed(format!("duplicate {field_path}")));
        }
        values[slot] = Some(field.text);
    }
    let mut values = values.into_iter().zip(&names).map(|(value, name)| {
        value.ok_or_else(|| XmlError::MissingRequiredField(format!("{path}/{name}")))
    });
    let mut next = || values.next().expect("field list length");
    let id = next()?;
    let name = next()?;
    let class_name = next()?;
    let properties = next()?;
    let methods = next()?;
    let documentation = next()?;
    let description = next()?;
    let created_by = next()?;
    let creation_date = next()?;
    let last_update_by = next()?;
    let last_update_date = next()?;
    let type_text = next()?;
    let type_code = type_text.trim().parse().map_err(|_| XmlError::InvalidValue {
        path: format!("{path}/type"),
        value: type_text.clone(),
    })?;
    let is_complete = if is_root {
        let text = next()?;
        Some(parse_yes_no(text.trim()).ok_or_else(|| XmlError::InvalidValue {
            path: format!("{path}/is_complete"),
            value: text.clone(),
        })?)
    } else {
        None
    };
    Ok(DrpArtifact {
        id,
        name,
        class_name,
        properties,
        methods,
        documentation,
        description,
        created_by,
        creation_date,
        last_update_by,
        last_update_date,
        type_code,
        is_complete,
    })
}
