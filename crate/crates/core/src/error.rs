use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text (dictionary line, DSL file, gold TSV, ...).
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A morpheme graph calls a subgraph that is not in the registry.
    #[error("unresolved graph reference `{0}`")]
    UnresolvedGraph(String),

    /// One or more stem classes have no inflection transducer. Collected
    /// exhaustively, never fail-fast.
    #[error("no inflection transducer for stem classes: {}", .0.join(", "))]
    MissingStemClasses(Vec<String>),

    /// One or more affix classes have no morpheme graph.
    #[error("no morpheme graph for affix classes: {}", .0.join(", "))]
    MissingAffixClasses(Vec<String>),

    /// An edit program cannot be applied to a lemma.
    #[error("cannot inflect `{lemma}` (path {path}): {reason}")]
    Edit {
        lemma: String,
        path: usize,
        reason: String,
    },

    /// A morpheme graph violates a structural constraint.
    #[error("graph `{graph}`: {message}")]
    GraphIntegrity { graph: String, message: String },

    /// Paradigm enumeration produced more forms than the configured ceiling.
    #[error("paradigm for `{lemma}` exceeds the ceiling of {ceiling} forms")]
    ParadigmCeiling { lemma: String, ceiling: usize },

    /// Gold annotations are inconsistent with themselves or the resources.
    #[error("gold data: {0}")]
    Gold(String),

    /// A lemma was requested that the root dictionary does not contain.
    #[error("unknown lemma `{0}`")]
    UnknownLemma(String),

    /// Wraps an error with the resource file it came from.
    #[error("{path}: {source}")]
    Resource {
        path: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Re-number a single-line parse error with its position in a file.
    pub fn at_line(self, line: usize) -> Self {
        match self {
            Error::Parse {
                column, message, ..
            } => Error::Parse {
                line,
                column,
                message,
            },
            other => other,
        }
    }

    /// Attach the originating file path.
    pub fn in_file(self, path: impl Into<String>) -> Self {
        Error::Resource {
            path: path.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
