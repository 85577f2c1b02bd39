use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("dangling next: {state} -[{action}/{reaction}]-> {target}, which is not a state")]
    DanglingNext {
        state: String,
        action: String,
        reaction: String,
        target: String,
    },

    #[error("table is not a function: key {0} is bound more than once")]
    NonFunctionTable(String),

    #[error("outside the domain of {system}: {what}")]
    OutOfDomain { system: String, what: String },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("explosion guard: {count} actions at state {state} exceed the cap of {cap}")]
    ExplosionGuard { state: String, count: String, cap: usize },

    #[error("system {0} does not have a finite state set")]
    NotFinite(String),

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("type error: {0}")]
    Type(String),

    #[error("unbound atomic type `{0}`")]
    UnboundAtom(String),

    #[error("not monotone: {smaller} is included in {larger} but its image is not")]
    NotMonotone { smaller: String, larger: String },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// True for the errors that mean "ran out of budget" rather than "wrong input".
    pub fn is_exhaustion(&self) -> bool {
        matches!(self, Error::BudgetExceeded(_) | Error::ExplosionGuard { .. })
    }

    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            msg: msg.into(),
        }
    }
}
