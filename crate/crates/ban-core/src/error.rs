use crate::expr::VarId;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("variable x{0} is not bound by the evaluation state")]
    UnboundVariable(VarId),

    #[error("unknown variable name `{0}`")]
    UnknownName(String),

    #[error("invalid or duplicate variable name `{0}`")]
    InvalidName(String),

    #[error("expression depends on {support} variables, above the truth-table limit of {limit}")]
    SupportTooLarge { support: usize, limit: usize },

    #[error("{n} automata exceed the exhaustive-enumeration limit of {limit}")]
    TooManyStates { n: usize, limit: usize },

    #[error("automaton {0} is not part of the network")]
    UnknownAutomaton(VarId),

    #[error("automaton ids are 1-based; 0 is not a valid id")]
    ZeroId,

    #[error("automaton {0} is declared twice")]
    DuplicateAutomaton(VarId),

    #[error("the function of automaton {automaton} references x{var}, which is not an automaton of the network")]
    ForeignVariable { automaton: VarId, var: VarId },

    #[error("state has {got} coordinates but the network has {expected} automata")]
    StateLength { expected: usize, got: usize },

    #[error("state belongs to a different automaton set")]
    StateIdMismatch,

    #[error("parse error at {line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("update blocks must be nonempty")]
    EmptyBlock,

    #[error("schedule has {blocks} blocks and is not periodic; cannot run {steps} steps")]
    ScheduleExhausted { blocks: usize, steps: usize },

    #[error("hiding failed: the observed function of automaton {automaton} still depends on hidden automaton {hidden}")]
    HidingFailed { automaton: VarId, hidden: VarId },

    #[error("invalid observation spec: {0}")]
    InvalidSpec(String),
}

impl Error {
    pub(crate) fn parse(col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line: 1,
            col,
            msg: msg.into(),
        }
    }

    /// Relocate a parse error produced on an embedded substring.
    pub(crate) fn at(self, line: usize, col_offset: usize) -> Self {
        match self {
            Error::Parse { col, msg, .. } => Error::Parse {
                line,
                col: col + col_offset,
                msg,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
