use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid vertex `{encoding}`: {reason}")]
    InvalidVertex { encoding: String, reason: String },

    #[error("invalid graph descriptor `{descriptor}`: {reason}")]
    InvalidDescriptor { descriptor: String, reason: String },

    #[error(
        "ball of radius {radius} would hold about {estimated} vertices (budget {budget}); \
         largest feasible radius is {max_feasible_radius}"
    )]
    BudgetExceeded {
        radius: u64,
        estimated: u64,
        budget: u64,
        max_feasible_radius: u64,
    },

    #[error("syntax error at {line}:{column}: expected {}, found {found}", expected.join(" | "))]
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },

    #[error("unknown identifier `{name}` at {line}:{column}")]
    UnknownIdentifier {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("evaluation failed at vertex {vertex}: {message}")]
    Evaluation { vertex: String, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("resolvent undefined: |psi(v) - lambda| = {gap} < c = {c} at vertex {vertex}")]
    ResolventUndefined { vertex: String, gap: f64, c: f64 },

    #[error("no certificate: {0}")]
    NoCertificate(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("multiplication operator is unbounded: {0}")]
    UnboundedSymbol(String),

    #[error("support escapes the ball: {0}")]
    SupportEscape(String),

    #[error("table format error on line {line}: {message}")]
    TableFormat { line: usize, message: String },
}

impl Error {
    pub(crate) fn invalid_vertex(encoding: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidVertex {
            encoding: encoding.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn eval(vertex: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Evaluation {
            vertex: vertex.into(),
            message: message.into(),
        }
    }
}
