use std::path::Path;

use thiserror::Error;
use twofactor::embed::EmbedError;
use twofactor::graph::GraphError;
use twofactor::partition::PartitionError;
use twofactor::template::TemplateError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 2;
    pub const INFEASIBLE: i32 = 3;
    pub const CAPABILITY: i32 = 4;
    pub const STAGE: i32 = 5;
    pub const VERIFICATION: i32 = 6;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Graph {
        path: String,
        #[source]
        source: GraphError,
    },
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("{0}")]
    Stage(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io { .. } | CliError::Graph { .. } => exit::PARSE,
            CliError::Stage(_) | CliError::Partition(_) => exit::STAGE,
            CliError::Verification(_) => exit::VERIFICATION,
            CliError::Embed(e) => match e {
                EmbedError::Parse { .. } | EmbedError::Io(_) => exit::PARSE,
                EmbedError::Infeasible(_) | EmbedError::Budget(_) => exit::INFEASIBLE,
                EmbedError::Capability(_) => exit::CAPABILITY,
                EmbedError::Verification(_) => exit::VERIFICATION,
                EmbedError::Gate(_)
                | EmbedError::Path { .. }
                | EmbedError::Absorber { .. }
                | EmbedError::Partition { .. }
                | EmbedError::Stage { .. } => exit::STAGE,
            },
            CliError::Template(e) => match e {
                TemplateError::Parse { .. } | TemplateError::Io(_) => exit::PARSE,
                TemplateError::Parameter(_) | TemplateError::DegreeTooLow { .. } => exit::INFEASIBLE,
                _ => exit::STAGE,
            },
        }
    }

    /// Stage tag for the report, when the failure has one.
    pub fn stage(&self) -> Option<&'static str> {
        match self {
            CliError::Embed(e) => e.stage(),
            CliError::Template(TemplateError::Gate(_)) => Some("gate"),
            CliError::Template(_) => Some("template"),
            CliError::Partition(_) => Some("partition"),
            _ => None,
        }
    }
}
