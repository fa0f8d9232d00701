use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("element does not belong to the group {0}")]
    SpecMismatch(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("subgroup generated by an element of infinite order has no finite element list")]
    InfiniteSubgroup,
    #[error("{what} has size {size}, above the bound {bound}")]
    BoundExceeded { what: &'static str, size: u64, bound: u64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no matching exists")]
    NoMatching,
    #[error("instance is matchable; no violation certificate exists")]
    Matchable,
    #[error("audit failure: {0}")]
    Audit(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("vector length {got} does not match the ambient dimension {expected}")]
    TowerMismatch { expected: usize, got: usize },
    #[error("subspace containment violated: {0}")]
    NotContained(&'static str),
    #[error("singular system")]
    Singular,
}

impl Error {
    pub fn is_bound(&self) -> bool {
        matches!(self, Error::BoundExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn bound_check(what: &'static str, size: u64, bound: u64) -> Result<()> {
    if size > bound {
        Err(Error::BoundExceeded { what, size, bound })
    } else {
        Ok(())
    }
}
