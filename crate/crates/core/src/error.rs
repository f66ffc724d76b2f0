use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("image array is not a permutation")]
    NotAPermutation,
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("permutation is not an element of the group")]
    NotInGroup,
    #[error("subgroup generator is not contained in the group")]
    NotASubgroup,
    #[error("partition is not invariant under the group")]
    PartitionNotInvariant,
    #[error("group is not transitive")]
    Intransitive,
    #[error("{divisor} does not divide {order}")]
    NotADivisor { divisor: u64, order: u64 },
    #[error("generator is not an automorphism of the graph")]
    NotAnAutomorphism,

    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(&'static str),
    #[error("common-neighbour relation for s = {0} is not an equivalence")]
    NotAnEquivalence(usize),

    #[error("n = {0} is below 4")]
    ModulusTooSmall(i64),
    #[error("offset {name} is zero modulo n")]
    ZeroOffset { name: &'static str },
    #[error("spoke offsets a, b, c are not pairwise distinct")]
    OffsetsNotDistinct,
    #[error("hub offset k equals n/2")]
    HubIsHalf,
    #[error("parameter family mismatch: {0}")]
    FamilyMismatch(String),
    #[error("cannot parse parameters {0:?}: expected n,a,b,c,k")]
    ParamSyntax(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed census record: {message}")]
    MalformedRecord {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
