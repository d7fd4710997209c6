use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid point data: {0}")]
    InvalidData(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point {id} is null and has no feature vector")]
    NullPoint { id: u64 },

    #[error("need at least {needed} non-null points, found {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error("similarity graph has no edges; Eps/MinPts are undefined")]
    EmptyGraph,

    #[error("reduced dataset has no representatives")]
    NoRepresentatives,

    #[error("slab {slab}: {source}")]
    Slab {
        slab: usize,
        #[source]
        source: alloc::boxed::Box<Error>,
    },
}
