use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use ppco_core::model::Timestamp;
use ppco_core::workflow::{Clock, FixedClock, SystemClock};
use ppco_core::{load_cyclone_fixture, Error, Snapshot};
use serde::Deserialize;

use crate::{Persistence, Service};

#[derive(Debug)]
pub enum ConfigError {
    Read(PathBuf, std::io::Error),
    Parse(PathBuf, String),
    Startup(Error),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Read(path, err) => write!(f, "cannot read {}: {err}", path.display()),
            ConfigError::Parse(path, err) => write!(f, "cannot parse {}: {err}", path.display()),
            ConfigError::Startup(err) => write!(f, "{}: {err}", err.name()),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Service settings, read from a TOML file and/or command-line flags.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceConfig {
    #[serde(default = "default_listen")]
    pub listen: SocketAddr,
    /// Snapshot to serve and to write commits back to. Unset serves the built-in
    /// cyclone corpus from memory.
    #[serde(default)]
    pub snapshot: Option<PathBuf>,
    #[serde(default)]
    pub event_log: Option<PathBuf>,
    /// Fixed clock for reproducible runs, e.g. "Mon Nov 14 09:00:00 EET 2005".
    #[serde(default)]
    pub now: Option<String>,
}

fn default_listen() -> SocketAddr {
    ([127, 0, 0, 1], 8080).into()
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            listen: default_listen(),
            snapshot: None,
            event_log: None,
            now: None,
        }
    }
}

impl ServiceConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError::Read(path.into(), e))?;
        toml::from_str(&text).map_err(|e| ConfigError::Parse(path.into(), e.to_string()))
    }

    /// Loads the snapshot and starts the writer.
    pub fn build(&self) -> Result<Service, ConfigError> {
        let snapshot = match &self.snapshot {
            Some(path) => Snapshot::load(path).map_err(|e| ConfigError::Startup(e.into()))?,
            None => load_cyclone_fixture(),
        };
        let clock: Arc<dyn Clock + Send + Sync> = match &self.now {
            Some(text) => Arc::new(FixedClock(
                Timestamp::parse(text).map_err(|e| ConfigError::Startup(e.into()))?,
            )),
            None => Arc::new(SystemClock),
        };
        Ok(Service::new(
            snapshot,
            clock,
            Persistence {
                snapshot: self.snapshot.clone(),
                event_log: self.event_log.clone(),
            },
        ))
    }
}
