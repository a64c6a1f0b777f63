mod common;

use common::*;
use ppco_core::drp::{build_drp, diff_drp, import_drp, DrpConfig, XmlError};
use ppco_core::load_cyclone_fixture;
use ppco_core::model::ProductModel;
use ppco_core::viewpoint::{BatchKind, InformationSet};
use proptest::prelude::*;

fn trimmed_lines(text: &str) -> Vec<&str> {
    text.lines().map(str::trim_end).collect()
}

#[test]
fn full_access_export_contains_reference_block() {
    let s = load_cyclone_fixture();
    let xml = s.export_drp(&full_access_set("ActorX", ROOT)).unwrap();
    let lines = trimmed_lines(&xml);
    assert_eq!(lines[0], REFERENCE_DRP_PREAMBLE[0]);
    assert!(lines[1].starts_with(REFERENCE_DRP_PREAMBLE[1]));
    let expected = trimmed_lines(REFERENCE_DRP_BODY);
    let found = lines
        .windows(expected.len())
        .any(|w| w == expected.as_slice());
    assert!(found, "reference lines not found in:\n{xml}");
}

#[test]
fn actor_x_export_reproduces_the_root_record() {
    let s = load_cyclone_fixture();
    let set = s.filter_info_artifact(ROOT, "ActorX").unwrap();
    let doc = build_drp(&set, &s.model, &s.drp).unwrap();
    assert_eq!(doc.root.id, "381009");
    assert_eq!(doc.root.name, "Cyclone Vessel");
    assert_eq!(doc.root.description, "Industrial Closed Cyclone vessel");
    assert_eq!(doc.root.created_by, "Michel");
    assert_eq!(doc.root.type_code, -732469182);
    assert_eq!(doc.root.is_complete, Some(false));
    assert_eq!(doc.root.creation_date, "Sat Nov 12 07:34:44 EET 2005");
    let ids: Vec<_> = doc.sub_artifacts.iter().map(|a| a.id.as_str()).collect();
    assert_eq!(&ids[..3], ["3011010", "5010120", "30141280"]);
    let xml = doc.to_xml();
    let root_block = trimmed_lines(REFERENCE_DRP_BODY)[..16].join("\n");
    assert!(trimmed_lines(&xml).join("\n").contains(&root_block));
}

#[test]
fn level_two_sub_artifacts_hide_reference_fields() {
    let s = load_cyclone_fixture();
    // ActorX holds Sub-Artifact at level 2 only.
    let set = s.filter_info_artifact(ROOT, "ActorX").unwrap();
    let xml = s.export_drp(&set).unwrap();
    for secret in [
        "316L Stainless Steel",
        "Thick Custom cut",
        "Gylon Blue 3504",
    ] {
        assert!(!xml.contains(secret), "{secret} leaked");
    }
    assert!(xml.contains("See Properties N° PR012"));
}

#[test]
fn level_two_root_hides_reference_fields() {
    let s = load_cyclone_fixture();
    // ActorY sees Artifact at level 2 and no Sub-Artifact batch.
    let set = s.filter_info_artifact(ROOT, "ActorY").unwrap();
    let doc = build_drp(&set, &s.model, &s.drp).unwrap();
    assert!(doc.sub_artifacts.is_empty());
    let xml = doc.to_xml();
    for secret in ["PR012", "MT002", "DOC055"] {
        assert!(!xml.contains(secret), "{secret} leaked");
    }
    assert!(!xml.contains("Sub-artifact"));
    assert!(xml.contains("<name>Cyclone Vessel</name>"));
}

#[test]
fn export_requires_the_artifact_batch() {
    let s = load_cyclone_fixture();
    let mut set = full_access_set("ActorX", ROOT);
    set.connexions.retain(|c| c.kind == BatchKind::Constraints);
    assert_eq!(
        s.export_drp(&set).unwrap_err(),
        XmlError::ArtifactBatchNotGranted
    );
}

#[test]
fn single_node_product_exports_without_sub_artifacts() {
    let mut model = ProductModel::new();
    let mut node = artifact("7", "lonely", true);
    node.description.clear();
    node.methods_ref.clear();
    model.add_artifact(node).unwrap();
    let doc = build_drp(&full_access_set("A", "7"), &model, &DrpConfig::default()).unwrap();
    let xml = doc.to_xml();
    assert!(!xml.contains("Sub-artifact"));
    assert!(xml.contains("<description></description>") || xml.contains("<description/>"));
    assert_eq!(import_drp(&xml).unwrap(), doc);
}

#[test]
fn reference_document_round_trips() {
    let s = load_cyclone_fixture();
    let doc = build_drp(&full_access_set("A", ROOT), &s.model, &s.drp).unwrap();
    let back = import_drp(&doc.to_xml()).unwrap();
    assert_eq!(back, doc);
    assert_eq!(back.sub_artifacts[2].name, "Casket 14\" ");
}

#[test]
fn import_rejects_unknown_and_missing_elements() {
    let s = load_cyclone_fixture();
    let xml = s.export_drp(&full_access_set("A", ROOT)).unwrap();

    let bogus = xml.replacen("<Artifact>", "<Artifact>\n<bogus/>", 1);
    assert!(matches!(import_drp(&bogus), Err(XmlError::UnknownElement(_))));

    let missing = xml.replacen("    <name>Cyclone Vessel</name>\n", "", 1);
    assert!(matches!(
        import_drp(&missing),
        Err(XmlError::MissingRequiredField(_))
    ));

    let broken = xml.replacen("</One-Artifact>", "", 1);
    assert!(matches!(import_drp(&broken), Err(XmlError::MalformedXml(_))));

    let bad_type = xml.replacen("-732469182", "minus seven", 1);
    assert!(matches!(import_drp(&bad_type), Err(XmlError::InvalidValue { .. })));
}

#[test]
fn diff_examples() {
    let s = load_cyclone_fixture();
    let doc = build_drp(&full_access_set("A", ROOT), &s.model, &s.drp).unwrap();
    assert!(diff_drp(&doc, &doc).is_empty());

    let mut renamed = doc.clone();
    renamed.root.name = "Cyclone".into();
    let d = diff_drp(&doc, &renamed);
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].path, "Artifact/One-Artifact/name");

    let mut shorter = doc.clone();
    shorter.sub_artifacts.pop();
    let d = diff_drp(&doc, &shorter);
    assert!(d.iter().any(|x| x.path == "Artifact/Sub-artifact"));
}

fn any_set() -> impl Strategy<Value = (String, InformationSet)> {
    let s = load_cyclone_fixture();
    let ids: Vec<String> = s.model.artifacts().iter().map(|a| a.id.to_string()).collect();
    (prop::sample::select(ids), any::<bool>(), 1u32..=3).prop_map(|(id, subs, sub_level)| {
        let mut set = full_access_set("A", &id);
        if subs {
            for c in &mut set.connexions {
                if c.kind == BatchKind::SubArtifact {
                    c.level = ppco_core::viewpoint::Level::new(sub_level).unwrap();
                }
            }
        } else {
            set.connexions.retain(|c| c.kind != BatchKind::SubArtifact);
        }
        (id, set)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn import_inverts_export((_id, set) in any_set()) {
        let s = load_cyclone_fixture();
        let doc = build_drp(&set, &s.model, &s.drp).unwrap();
        let back = import_drp(&doc.to_xml()).unwrap();
        prop_assert!(diff_drp(&doc, &back).is_empty());
        prop_assert_eq!(back, doc);
    }

    #[test]
    fn diff_finds_each_changed_field(field in 0usize..6, text in "[a-zA-Z<&> ]{1,12}") {
        let s = load_cyclone_fixture();
        let doc = build_drp(&full_access_set("A", ROOT), &s.model, &s.drp).unwrap();
        let mut other = doc.clone();
        let (slot, name) = match field {
            0 => (&mut other.root.name, "name"),
            1 => (&mut other.root.class_name, "class_name"),
            2 => (&mut other.root.properties, "properties"),
            3 => (&mut other.root.methods, "methods"),
            4 => (&mut other.root.documentation, "documentation"),
            _ => (&mut other.root.description, "description"),
        };
        prop_assume!(*slot != text);
        *slot = text;
        let d = diff_drp(&doc, &other);
        prop_assert_eq!(d.len(), 1);
        prop_assert_eq!(d[0].path.clone(), format!("Artifact/One-Artifact/{name}"));
        prop_assert_eq!(import_drp(&other.to_xml()).unwrap(), other);
    }
}
