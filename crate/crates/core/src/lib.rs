//! Product, process and organization metadata with per-actor viewpoint filtering.
//!
//! The crate is organised around a [`Snapshot`]: the committed
//! [`model::ProductModel`], the [`viewpoint::ViewpointRegistry`], DRP export settings
//! and the staged-change [`workflow`]. Reads go through a
//! [`viewpoint::ViewpointEngine`]; writes to committed data go through proposals.

pub mod drp;
pub mod model;
pub mod store;
pub mod sweep;
pub mod viewpoint;
pub mod workflow;

use thiserror::Error;

pub use store::{load_cyclone_fixture, Snapshot};

/// Any error raised by the engine, tagged with a stable name.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] model::ModelError),
    #[error(transparent)]
    Viewpoint(#[from] viewpoint::ViewpointError),
    #[error(transparent)]
    Xml(#[from] drp::XmlError),
    #[error(transparent)]
    Workflow(#[from] workflow::WorkflowError),
    #[error(transparent)]
    Store(#[from] store::StoreError),
}

impl Error {
    /// The error's variant name, e.g. `NotConcerned`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Model(e) => e.name(),
            Error::Viewpoint(e) => e.name(),
            Error::Xml(e) => e.name(),
            Error::Workflow(e) => e.name(),
            Error::Store(e) => e.name(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
