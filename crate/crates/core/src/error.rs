use thiserror::Error;

/// Everything that can go wrong when building or transforming the
/// structures in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid inversion table: {0}")]
    InvalidInversionTable(String),

    #[error("invalid ballot: {0}")]
    InvalidBallot(String),

    #[error("invalid ballot matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("invalid construction choice: {0}")]
    InvalidConstructionChoice(String),

    #[error("set {set:?} is not a subset of [1, {max}]")]
    SetOutOfRange { set: Vec<u32>, max: u32 },

    #[error("ascent bottom {0} is not in the allowed set")]
    AscentBottomOutsideSet(u32),

    #[error("matrix is not fixed by the componentwise ballot involution")]
    NotPsiFixed,

    #[error("matrix is not a fixed point of the involution")]
    NotFixedPoint,

    #[error("every element is a row minimum; nothing to move")]
    NoNonMinimalElement,

    #[error("no row qualifies for the inverse move")]
    NoMergeableRow,

    #[error("{0} is not an element of the poset")]
    UnknownElement(u32),

    #[error("{what} is limited to size {max}, got {got}")]
    SizeGuard {
        what: &'static str,
        max: usize,
        got: usize,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn guard(what: &'static str, got: usize, max: usize) -> Result<()> {
    if got > max {
        Err(Error::SizeGuard { what, max, got })
    } else {
        Ok(())
    }
}
