use std::path::Path;
use std::process::{Command, Output};

const NOW: &str = "Mon Nov 14 09:00:00 EET 2005";

fn ppco(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppco"))
        .args(args)
        .output()
        .expect("run ppco")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn seeded(dir: &Path) -> String {
    let path = dir.join("snap.toml").to_str().unwrap().to_owned();
    let out = ppco(&["--snapshot", &path, "load"]);
    assert!(out.status.success(), "{}", stderr(&out));
    path
}

#[test]
fn filter_prints_the_merged_table() {
    let out = ppco(&["filter", "--actor", "ActorX", "--artifact", "381009"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(
        lines[0],
        "Mechanic (1): All information about the mechanic application of the product (see activity of VP09 and VP08)"
    );
    assert!(lines.contains(&"Flows (2): Different flows of the final-product functions"));
    let again = ppco(&["filter", "--actor", "ActorX", "--artifact", "381009"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn export_writes_drp_xml() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("out.xml");
    let out = ppco(&[
        "export",
        "--actor",
        "ActorX",
        "--artifact",
        "381009",
        "--output",
        file.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let xml = std::fs::read_to_string(&file).unwrap();
    assert!(xml.starts_with("<?xml version=\"1.0\" ?>\n<DRP "));
    for needle in [
        "<id_artifact>381009</id_artifact>",
        "<name>Cyclone Vessel</name>",
        "<description>Industrial Closed Cyclone vessel</description>",
        "<created_by>Michel</created_by>",
        "<creation_date>Sat Nov 12 07:34:44 EET 2005</creation_date>",
        "<type>-732469182</type>",
        "<is_complete>No</is_complete>",
        "<id_sub_artifact>3011010</id_sub_artifact>",
        "<id_sub_artifact>5010120</id_sub_artifact>",
        "<id_sub_artifact>30141280</id_sub_artifact>",
    ] {
        assert!(xml.contains(needle), "missing {needle}");
    }
}

#[test]
fn format_switches_rendering() {
    let xml = ppco(&["filter", "--actor", "ActorY", "--artifact", "381009", "--format", "xml"]);
    assert!(stdout(&xml).starts_with("<?xml"));
    let text = ppco(&["export", "--actor", "ActorY", "--artifact", "381009", "--format", "text"]);
    assert!(stdout(&text).starts_with("One-Artifact 381009\n"));
}

#[test]
fn domain_errors_exit_one_with_their_name() {
    let out = ppco(&["filter", "--actor", "Michel", "--artifact", "381009"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error: NoApplicableViewpoint: "));

    let out = ppco(&["show", "--artifact", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: UnknownId: "));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ppco(&["filter", "--actor", "ActorX"]).status.code(), Some(2));
    assert_eq!(ppco(&["filter", "--bogus"]).status.code(), Some(2));
    assert_eq!(ppco(&[]).status.code(), Some(2));
    let out = ppco(&["vote", "--proposal", "P1", "--actor", "ActorY", "--decision", "approve"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn workflow_round_trip_through_the_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let snap = seeded(dir.path());
    let log = dir.path().join("events.log");
    let log = log.to_str().unwrap();

    let out = ppco(&[
        "--snapshot", &snap, "--event-log", log, "--now", NOW,
        "propose", "--actor", "ActorZ", "--artifact", "381009", "--batch", "Sub-Artifact",
        "--set", "name=Closed Cyclone Vessel",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("P1 Pending Sub-Artifact on 381009 by ActorZ\nconcerned: ActorX\n"));

    let out = ppco(&[
        "--snapshot", &snap, "vote", "--proposal", "P1", "--actor", "ActorY", "--decision", "approve",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("NotConcerned"));

    let pending = ppco(&["--snapshot", &snap, "show", "--artifact", "381009"]);
    assert!(stdout(&pending).contains("name: Cyclone Vessel\n"));

    let out = ppco(&[
        "--snapshot", &snap, "--event-log", log, "--now", NOW,
        "vote", "--proposal", "P1", "--actor", "ActorX", "--decision", "approve",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("P1 Approved"));

    let shown = stdout(&ppco(&["--snapshot", &snap, "show", "--artifact", "381009"]));
    assert!(shown.contains("name: Closed Cyclone Vessel\n"));
    assert!(shown.contains(&format!("last_update_by: ActorZ on {NOW}")));

    let logged = stdout(&ppco(&["--snapshot", &snap, "log", "--actor", "ActorX"]));
    assert_eq!(logged.lines().count(), 2);
    let file = std::fs::read_to_string(log).unwrap();
    assert_eq!(file, logged);
    assert!(file.lines().all(|l| l.starts_with(&format!("{NOW}\tP1\tActorX\t"))));
}

#[test]
fn content_proposals_and_access_checks() {
    let dir = tempfile::tempdir().unwrap();
    let snap = seeded(dir.path());
    let out = ppco(&[
        "--snapshot", &snap, "--now", NOW, "propose", "--actor", "ActorX", "--artifact", "381009",
        "--batch", "Flows", "--content-id", "FL-900", "--text", "steam",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: InsufficientAccess: "));

    let out = ppco(&[
        "--snapshot", &snap, "--now", NOW, "propose", "--actor", "ActorX", "--artifact", "381009",
        "--batch", "Constraints", "--content-id", "CS-900", "--text", "max 8 bar",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("concerned: ActorY, ActorZ\n"));
    let summary = stdout(&ppco(&["--snapshot", &snap, "show"]));
    assert!(summary.contains("proposals: 1 (1 pending)"));
}

#[test]
fn load_validates_external_files() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.toml");
    std::fs::write(&broken, "format = 1\n[drp]\nschema_location = \"x\"\nredaction = []\n[[viewpoints]]\n").unwrap();
    let out = ppco(&["load", "--from", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: ParseError: "));

    let summary = stdout(&ppco(&["load"]));
    assert!(summary.contains("artifacts: 19\n"));
    assert!(summary.contains("interactions: 38\n"));
    assert!(summary.contains("teams: 3\n"));
}
