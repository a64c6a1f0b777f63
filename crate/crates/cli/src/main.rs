//! `ppco`: inspect a PPCO snapshot, filter it through actor viewpoints, export DRP
//! documents and drive the change-approval workflow.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use ppco_core::drp::{build_drp, DrpArtifact};
use ppco_core::model::{yes_no, ArtifactField, Timestamp};
use ppco_core::store::StoreError;
use ppco_core::viewpoint::{BatchKind, InformationSet};
use ppco_core::workflow::{
    append_event_log, Annotation, ChangePayload, ChangeProposal, Clock, Decision, FieldChange,
    FixedClock, SystemClock,
};
use ppco_core::{load_cyclone_fixture, Error, Snapshot};

#[derive(Debug, Parser)]
#[command(name = "ppco", version, about = "PPCO metadata and viewpoint filtering")]
struct Cli {
    /// Snapshot file. Read-only verbs fall back to the built-in cyclone corpus.
    #[arg(long, global = true, value_name = "PATH")]
    snapshot: Option<PathBuf>,
    /// Write the command's output here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Rendering for `filter` and `export`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Append workflow annotations to this file.
    #[arg(long, global = true, value_name = "PATH")]
    event_log: Option<PathBuf>,
    /// Use this instant instead of the system clock, e.g. "Mon Nov 14 09:00:00 EET 2005".
    #[arg(long, global = true, value_name = "DATE")]
    now: Option<String>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Xml,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Validate a snapshot (or the built-in corpus) and write it to --snapshot.
    Load {
        /// Snapshot to read; defaults to the built-in cyclone corpus.
        #[arg(long, value_name = "PATH")]
        from: Option<PathBuf>,
    },
    /// Summarize the model, or describe one artifact.
    Show {
        #[arg(long)]
        artifact: Option<String>,
    },
    /// Batch connexions an actor receives on an artifact.
    Filter {
        #[arg(long)]
        actor: String,
        #[arg(long)]
        artifact: String,
    },
    /// DRP document for an actor's view of an artifact.
    Export {
        #[arg(long)]
        actor: String,
        #[arg(long)]
        artifact: String,
    },
    /// Stage a change for approval by the concerned actors.
    #[command(group(ArgGroup::new("payload").required(true).args(["set", "content_id"])))]
    Propose {
        #[arg(long)]
        actor: String,
        #[arg(long)]
        artifact: String,
        /// Batch kind the change belongs to, e.g. Constraints or Sub-Artifact.
        #[arg(long)]
        batch: String,
        /// Artifact field change `field=value`; repeatable.
        #[arg(long, value_name = "FIELD=VALUE", conflicts_with = "content_id")]
        set: Vec<String>,
        /// Content record to insert or rewrite.
        #[arg(long, requires = "text")]
        content_id: Option<String>,
        #[arg(long)]
        text: Option<String>,
        /// Function the content record serves (flows).
        #[arg(long, requires = "content_id")]
        function: Option<String>,
    },
    /// Approve or reject a pending proposal.
    Vote {
        #[arg(long)]
        proposal: String,
        #[arg(long)]
        actor: String,
        #[arg(long, value_parser = ["approve", "reject"])]
        decision: String,
    },
    /// Annotations addressed to an actor.
    Log {
        #[arg(long)]
        actor: String,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(err: E) -> Self {
        Failure::Domain(err.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: UsageError: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(err)) => {
            eprintln!("error: {}: {err}", err.name());
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let clock: Box<dyn Clock> = match &cli.now {
        Some(text) => Box::new(FixedClock(Timestamp::parse(text)?)),
        None => Box::new(SystemClock),
    };
    let out = match &cli.verb {
        Verb::Load { from } => {
            let snapshot = match from {
                Some(path) => Snapshot::load(path)?,
                None => load_cyclone_fixture(),
            };
            if let Some(path) = &cli.snapshot {
                snapshot.save(path)?;
            }
            summary(&snapshot)
        }
        Verb::Show { artifact } => {
            let snapshot = open(cli)?;
            match artifact {
                Some(id) => describe(&snapshot, id)?,
                None => summary(&snapshot),
            }
        }
        Verb::Filter { actor, artifact } => {
            let snapshot = open(cli)?;
            let set = snapshot.filter_info_artifact(artifact, actor)?;
            match cli.format.unwrap_or(Format::Text) {
                Format::Text => set.render_lines(),
                Format::Xml => snapshot.export_drp(&set)?,
            }
        }
        Verb::Export { actor, artifact } => {
            let snapshot = open(cli)?;
            let set = snapshot.filter_info_artifact(artifact, actor)?;
            match cli.format.unwrap_or(Format::Xml) {
                Format::Xml => snapshot.export_drp(&set)?,
                Format::Text => drp_text(&snapshot, &set)?,
            }
        }
        Verb::Propose {
            actor,
            artifact,
            batch,
            set,
            content_id,
            text,
            function,
        } => {
            let path = require_snapshot(cli)?;
            let mut snapshot = Snapshot::load(path)?;
            let batch: BatchKind = batch.parse()?;
            let payload = match content_id {
                Some(id) => ChangePayload::Content {
                    id: id.as_str().into(),
                    text: text.clone().unwrap_or_default(),
                    function: function.as_deref().map(Into::into),
                },
                None => ChangePayload::Fields {
                    changes: set.iter().map(|s| field_change(s)).collect::<Result<_, _>>()?,
                },
            };
            let (proposal, notes) =
                snapshot.propose_change(actor, artifact, batch, payload, clock.as_ref())?;
            commit(cli, path, &snapshot, &notes)?;
            proposal_text(&proposal)
        }
        Verb::Vote {
            proposal,
            actor,
            decision,
        } => {
            let path = require_snapshot(cli)?;
            let mut snapshot = Snapshot::load(path)?;
            let decision: Decision = decision.parse().map_err(Failure::Usage)?;
            let (proposal, notes) = snapshot.vote(proposal, actor, decision, clock.as_ref())?;
            commit(cli, path, &snapshot, &notes)?;
            proposal_text(&proposal)
        }
        Verb::Log { actor } => {
            let snapshot = open(cli)?;
            snapshot
                .workflow
                .annotations_for(actor)
                .map(|a| format!("{}\n", a.log_line()))
                .collect()
        }
    };
    emit(cli, &out)
}

fn open(cli: &Cli) -> Result<Snapshot, Failure> {
    Ok(match &cli.snapshot {
        Some(path) => Snapshot::load(path)?,
        None => load_cyclone_fixture(),
    })
}

fn require_snapshot(cli: &Cli) -> Result<&Path, Failure> {
    cli.snapshot
        .as_deref()
        .ok_or_else(|| Failure::Usage("this verb changes state and needs --snapshot".into()))
}

fn commit(cli: &Cli, path: &Path, snapshot: &Snapshot, notes: &[Annotation]) -> Result<(), Failure> {
    snapshot.save(path)?;
    if let Some(log) = &cli.event_log {
        append_event_log(log, notes).map_err(StoreError::Io)?;
    }
    Ok(())
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(StoreError::Io)?,
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(StoreError::Io)?,
    }
    Ok(())
}

fn field_change(spec: &str) -> Result<FieldChange, Failure> {
    let (field, value) = spec
        .split_once('=')
        .ok_or_else(|| Failure::Usage(format!("--set expects FIELD=VALUE, got {spec:?}")))?;
    Ok(FieldChange {
        field: field.trim().parse::<ArtifactField>()?,
        value: value.to_owned(),
    })
}

fn summary(s: &Snapshot) -> String {
    let m = &s.model;
    let mut out = String::new();
    let roots: Vec<_> = m
        .artifacts()
        .iter()
        .filter(|a| m.is_root(&a.id))
        .map(|a| format!("{} ({})", a.id, a.name))
        .collect();
    let _ = writeln!(out, "artifacts: {}", m.artifacts().len());
    let _ = writeln!(out, "roots: {}", roots.join(", "));
    let _ = writeln!(out, "assembly edges: {}", m.edges().len());
    let _ = writeln!(out, "interactions: {}", m.interactions().len());
    for (kind, n) in m.interaction_histogram() {
        let _ = writeln!(out, "  {kind}: {n}");
    }
    let _ = writeln!(out, "content records: {}", m.contents().len());
    let _ = writeln!(out, "processes: {}", m.processes().len());
    let _ = writeln!(out, "teams: {}", m.teams().len());
    let matrix = m.team_matrix();
    for (team, row) in matrix.teams().iter().zip(matrix.rows()) {
        let cells: Vec<_> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "  {team}: {}", cells.join(" "));
    }
    let _ = writeln!(out, "actors: {}", m.actors().len());
    let _ = writeln!(out, "viewpoints: {}", s.viewpoints.viewpoints().len());
    let _ = writeln!(out, "profiles: {}", s.viewpoints.profiles().len());
    let pending = s.workflow.proposals.iter().filter(|p| p.is_pending()).count();
    let _ = writeln!(
        out,
        "proposals: {} ({pending} pending)",
        s.workflow.proposals.len()
    );
    out
}

fn describe(s: &Snapshot, id: &str) -> Result<String, Failure> {
    let node = s
        .model
        .artifact(id)
        .ok_or_else(|| ppco_core::model::ModelError::UnknownId {
            kind: "artifact",
            id: id.to_owned(),
        })?;
    let mut out = String::new();
    let _ = writeln!(out, "id: {}", node.id);
    let _ = writeln!(out, "name: {}", node.name);
    let _ = writeln!(out, "class_name: {}", node.class_name);
    let _ = writeln!(out, "description: {}", node.description);
    let _ = writeln!(out, "created_by: {} on {}", node.created_by, node.creation_date);
    let _ = writeln!(
        out,
        "last_update_by: {} on {}",
        node.last_update_by, node.last_update_date
    );
    let _ = writeln!(out, "type: {}", node.type_code);
    if let Some(flag) = node.is_complete {
        let _ = writeln!(out, "is_complete: {}", yes_no(flag));
    }
    let children: Vec<_> = s.model.children_of(id).iter().map(|c| c.as_str()).collect();
    let _ = writeln!(out, "sub-artifacts: {}", children.join(", "));
    let _ = writeln!(
        out,
        "components below: {}",
        s.model.decomposition(id)?.len() - 1
    );
    for record in s.model.contents_of(id) {
        let _ = writeln!(out, "{} {}: {}", record.batch_kind(), record.id, record.payload);
    }
    Ok(out)
}

fn drp_text(s: &Snapshot, set: &InformationSet) -> Result<String, Failure> {
    let doc = build_drp(set, &s.model, &s.drp)?;
    let mut out = String::new();
    record_text(&mut out, "One-Artifact", &doc.root);
    for sub in &doc.sub_artifacts {
        record_text(&mut out, "Sub-artifact", sub);
    }
    Ok(out)
}

fn record_text(out: &mut String, title: &str, a: &DrpArtifact) {
    let _ = writeln!(out, "{title} {}", a.id);
    for (name, value) in [
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
    ] {
        let _ = writeln!(out, "  {name}: {value}");
    }
    let _ = writeln!(out, "  type: {}", a.type_code);
    if let Some(flag) = a.is_complete {
        let _ = writeln!(out, "  is_complete: {}", yes_no(flag));
    }
}

fn proposal_text(p: &ChangeProposal) -> String {
    let concerned: Vec<_> = p.concerned.iter().map(|a| a.as_str()).collect();
    let votes: Vec<_> = p
        .votes
        .iter()
        .map(|(actor, d)| format!("{actor}={}", if *d == Decision::Approve { "approve" } else { "reject" }))
        .collect();
    format!(
        "{} {:?} {} on {} by {}\nconcerned: {}\nvotes: {}\n",
        p.id,
        p.state,
        p.batch,
        p.target,
        p.author,
        concerned.join(", "),
        votes.join(", ")
    )
}
