//! Oracle data and builders shared by the integration tests.
//!
//! The reference connexion lists and DRP lines here are typed in independently of the
//! fixture file so that the fixture is checked against them, not against itself.
#![allow(dead_code)]

use std::collections::BTreeMap;

use ppco_core::model::{
    ActivityNode, ActorRecord, ArtifactId, ArtifactNode, ProcessNode, TaskNode, Team, Timestamp,
};
use ppco_core::viewpoint::{
    BatchAccessProfile, BatchConnexion, BatchKind, InformationSet, Level, Provenance, Viewpoint,
    ViewpointObjective,
};
use ppco_core::Snapshot;
use proptest::prelude::*;

pub const ROOT: &str = "381009";

pub const VP01_REFERENCE: [(&str, u32); 10] = [
    ("Artifact", 1),
    ("Function", 2),
    ("Behavior", 2),
    ("Flows", 2),
    ("Geometry-Form", 1),
    ("Sub-Artifact", 2),
    ("Assembly", 2),
    ("Constraints", 1),
    ("Requirements", 2),
    ("Group", 1),
];

pub const VP02_REFERENCE: [(&str, u32); 11] = [
    ("Mechanic", 1),
    ("Artifact", 2),
    ("Function", 2),
    ("Behavior", 2),
    ("Flows", 3),
    ("Geometry-Form", 2),
    ("Sub-Artifact", 3),
    ("Assembly", 3),
    ("Constraints", 1),
    ("Requirements", 3),
    ("Group", 1),
];

/// Description of each reference batch, per viewpoint.
pub const VP01_DESCRIPTIONS: [&str; 10] = [
    "Standard Information about the product",
    "Different function of the final-product and sub-artifact",
    "Different behaviors of the final-product and sub-artifact in relation with their respective functions",
    "Different flows of the final-product functions",
    "All information about the detailed-geometry with a CAD model",
    "Different information about the second level of direct-component assembly",
    "The relationship with Sub-Artifacts",
    "All constraints of the product (design, assembly...)",
    "Requirements about the product and different phases of its lifecycle",
    "All information about actors of collaboration-team",
];

pub const VP02_DESCRIPTIONS: [&str; 11] = [
    "All information about the mechanic application of the product (see activity of VP09 and VP08)",
    "Standard Information about the product",
    "Different function of the final-product and sub-artifact",
    "Different behaviors of the final-product and sub-artifact in relation with their respective functions",
    "Different flows of the final-product functions",
    "Different information about the geometry with a CAD model",
    "Different information about the first level of direct-component assembly",
    "The relationship with Sub-Artifacts",
    "All constraints design of the product",
    "Requirements about the product and different phases of its lifecycle",
    "All information about the actors in the group",
];

/// The reference DRP lines that follow the truncated schema attribute line.
pub const REFERENCE_DRP_BODY: &str = r#"<Artifact>
  <One-Artifact>
    <id_artifact>381009</id_artifact>
    <name>Cyclone Vessel</name>
    <class_name>ARTIFACT</class_name>
    <properties>See Properties N° PR012</properties>
    <methods>See Methods N°MT002</methods>
    <documentation>See Documentation N°DOC055</documentation>
    <description>Industrial Closed Cyclone vessel</description>
    <created_by>Michel</created_by>
    <creation_date>Sat Nov 12 07:34:44 EET 2005</creation_date>
    <last_update_by>Michel</last_update_by>
    <last_update_date>Sat Nov 12 07:34:44 EET 2005</last_update_date>
    <type>-732469182</type>
    <is_complete>No</is_complete>
  </One-Artifact>
  <Sub-artifact>
    <id_sub_artifact>3011010</id_sub_artifact>
    <name>CP Vessel Body</name>
    <class_name>ARTIFACT</class_name>
    <properties>316L Stainless Steel</properties>
    <methods>No methods</methods>
    <documentation>No documentation</documentation>
    <description>Gudgeon Pin Group 1 debug</description>
    <created_by>Jean</created_by>
    <creation_date>Sat Nov 12 07:32:27 EET 2005</creation_date>
    <last_update_by>Jean</last_update_by>
    <last_update_date>Sat Nov 12 07:32:27 EET 2005</last_update_date>
    <type>-732469187</type>
  </Sub-artifact>
  <Sub-artifact>
    <id_sub_artifact>5010120</id_sub_artifact>
    <name>CP Vessel Cover</name>
    <class_name>ARTIFACT</class_name>
    <properties>316L Stainless Steel with Lifting Eye</properties>
    <methods>No methods</methods>
    <documentation>No documentation</documentation>
    <description>Piston Ring Set</description>
    <created_by>Jean</created_by>
    <creation_date>Sat Nov 12 07:26:12 EET 2005</creation_date>
    <last_update_by>Jean</last_update_by>
    <last_update_date>Sat Nov 12 07:26:12 EET 2005</last_update_date>
    <type>-732469183</type>
  </Sub-artifact>
  <Sub-artifact>
    <id_sub_artifact>30141280</id_sub_artifact>
    <name>Casket 14" </name>
    <class_name>ARTIFACT</class_name>
    <properties>Thick Custom cut for 10" (250 mm) 150# ANSI Flange, Gylon Blue 3504</properties>
    <methods>No methods</methods>"#;

pub const REFERENCE_DRP_PREAMBLE: [&str; 2] = [
    r#"<?xml version="1.0" ?>"#,
    r#"<DRP xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" xsi:noNamespaceSchemaLocation="C:"#,
];

/// `"Kind (level)"` per connexion, in list order.
pub fn kind_levels(list: &[BatchConnexion]) -> Vec<String> {
    list.iter().map(|c| format!("{} ({})", c.kind, c.level)).collect()
}

pub fn table_lines(table: &[(&str, u32)]) -> Vec<String> {
    table.iter().map(|(k, l)| format!("{k} ({l})")).collect()
}

/// Per-kind minimum level over the union of the lists, keyed by kind name.
pub fn brute_force_min(lists: &[&[(&str, u32)]]) -> BTreeMap<String, u32> {
    let mut out: BTreeMap<String, u32> = BTreeMap::new();
    for list in lists {
        for (kind, level) in list.iter() {
            let slot = out.entry(kind.to_string()).or_insert(*level);
            if *level < *slot {
                *slot = *level;
            }
        }
    }
    out
}

/// Same oracle over connexions, keeping the winning description (lowest level, then
/// lexicographically smallest text).
pub fn oracle_merge(lists: &[&[BatchConnexion]]) -> BTreeMap<String, (u32, String)> {
    let mut out: BTreeMap<String, (u32, String)> = BTreeMap::new();
    for list in lists {
        for c in list.iter() {
            let candidate = (c.level.get(), c.description.clone());
            match out.get(c.kind.as_str()) {
                Some(best) if *best <= candidate => {}
                _ => {
                    out.insert(c.kind.to_string(), candidate);
                }
            }
        }
    }
    out
}

pub fn as_map(list: &[BatchConnexion]) -> BTreeMap<String, (u32, String)> {
    list.iter()
        .map(|c| (c.kind.to_string(), (c.level.get(), c.description.clone())))
        .collect()
}

pub fn connexion(kind: &str, level: u32, description: &str) -> BatchConnexion {
    BatchConnexion::new(
        kind.parse().expect("batch kind"),
        Level::new(level).expect("level"),
        description,
    )
}

/// A set granting every generic batch at level 1 on `artifact`.
pub fn full_access_set(actor: &str, artifact: &str) -> InformationSet {
    let connexions: Vec<_> = BatchKind::GENERIC
        .iter()
        .map(|k| BatchConnexion::new(k.clone(), Level::FULL, "all"))
        .collect();
    InformationSet {
        actor: actor.into(),
        artifact: artifact.into(),
        provenance: connexions
            .iter()
            .map(|c| Provenance {
                kind: c.kind.clone(),
                viewpoints: vec!["VPX".into()],
            })
            .collect(),
        connexions,
        relationships: vec![],
    }
}

const KIND_POOL: [&str; 13] = [
    "Artifact",
    "Function",
    "Behavior",
    "Flows",
    "Geometry-Form",
    "Sub-Artifact",
    "Assembly",
    "Constraints",
    "Requirements",
    "Group",
    "Mechanic",
    "Thermal",
    "Fluidics",
];

const DESCRIPTION_POOL: [&str; 3] = ["all detail", "summary", "reference only"];

/// Random one-per-kind connexion lists in random order, with levels 1..=4 and a small
/// description pool so level ties with differing text occur often.
pub fn connexion_list() -> impl Strategy<Value = Vec<BatchConnexion>> {
    prop::collection::btree_map(0..KIND_POOL.len(), (1u32..=4, 0..DESCRIPTION_POOL.len()), 0..=KIND_POOL.len())
        .prop_map(|m| {
            m.into_iter()
                .map(|(k, (level, d))| connexion(KIND_POOL[k], level, DESCRIPTION_POOL[d]))
                .collect::<Vec<_>>()
        })
        .prop_shuffle()
}

pub fn timestamp() -> Timestamp {
    Timestamp::parse("Sat Nov 12 07:34:44 EET 2005").expect("fixture date")
}

pub fn artifact(id: &str, name: &str, root: bool) -> ArtifactNode {
    ArtifactNode {
        id: id.into(),
        name: name.into(),
        class_name: "ARTIFACT".into(),
        properties_ref: format!("props of {id}"),
        methods_ref: format!("methods of {id}"),
        documentation_ref: format!("docs of {id}"),
        description: String::new(),
        created_by: "tester".into(),
        creation_date: timestamp(),
        last_update_by: "tester".into(),
        last_update_date: timestamp(),
        type_code: 0,
        is_complete: root.then_some(false),
    }
}

/// One product (`100` with children `101`, `102`), one actor `A` and, for every
/// entry of `grants`, a viewpoint with its own profile.
///
/// `ids[i]` names viewpoint `i` and `insert_order` decides registration order, so
/// callers can permute both the fold order and the storage order.
pub fn mini_snapshot(
    grants: &[Vec<BatchConnexion>],
    competence: &[u32],
    ids: &[String],
    insert_order: &[usize],
) -> Snapshot {
    let mut s = Snapshot::default();
    s.model.add_artifact(artifact("100", "root", true)).unwrap();
    for child in ["101", "102"] {
        s.model.add_artifact(artifact(child, "part", false)).unwrap();
        s.model
            .add_assembly_edge(&ArtifactId::from("100"), &ArtifactId::from(child), "")
            .unwrap();
    }
    s.model
        .add_task(TaskNode {
            id: "T".into(),
            name: "task".into(),
            domain: "any".into(),
        })
        .unwrap();
    s.model
        .add_activity(ActivityNode {
            id: "ACT".into(),
            name: "activity".into(),
            tasks: vec!["T".into()],
        })
        .unwrap();
    s.model
        .add_process(ProcessNode {
            id: "P".into(),
            name: "process".into(),
            parent: None,
            activities: vec!["ACT".into()],
        })
        .unwrap();
    s.model
        .add_team(Team {
            id: "TEAM".into(),
            name: "team".into(),
            responsible_for: "100".into(),
            members: vec![],
        })
        .unwrap();
    s.model
        .add_actor(ActorRecord {
            id: "A".into(),
            name: "A".into(),
            role: "engineer".into(),
            team: "TEAM".into(),
        })
        .unwrap();
    for i in 0..grants.len() {
        s.viewpoints
            .add_profile(BatchAccessProfile {
                domain: format!("d{i}"),
                competence_level: competence[i],
                grants: grants[i].clone(),
            })
            .unwrap();
    }
    for &i in insert_order {
        s.viewpoints
            .add_viewpoint(&s.model, mini_viewpoint(&ids[i], i, competence[i]))
            .unwrap();
    }
    s
}

pub fn mini_viewpoint(id: &str, domain_index: usize, competence: u32) -> Viewpoint {
    Viewpoint {
        id: id.into(),
        actor: "A".into(),
        focus: format!("focus {domain_index}"),
        domain: format!("d{domain_index}"),
        competence_level: competence,
        scope: vec!["100".into()],
        objective: ViewpointObjective {
            focus: format!("focus {domain_index}"),
            activity: "ACT".into(),
            domain: format!("d{domain_index}"),
        },
    }
}
