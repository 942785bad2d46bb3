use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Input violates a type invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// Input is well formed but an operation's precondition does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A problem exceeds the size the operation is prepared to enumerate.
    #[error("size limit exceeded: {what} = {got}, limit {limit}")]
    Size {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    /// The table factorizes, so there is nothing to certify.
    #[error("table is not spooky: |det| = {det:e} is within tolerance")]
    NotSpooky { det: f64 },

    /// The chosen effect does not separate the two states.
    #[error("effect gives equal values on both states; try another effect")]
    NoWitness,

    /// Descriptive significance is only defined for lambda-independent,
    /// parameter-independent models.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// Every element of an assemblage has vanishing normalization.
    #[error("degenerate assemblage: all normalizations vanish")]
    DegenerateAssemblage,

    /// Something that a proven identity rules out has happened.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
