use thiserror::Error;

/// Errors raised by complex construction, invariants, moves and persistence.
#[derive(Debug, Error)]
pub enum Error {
    #[error("no facets")]
    NoFacets,
    #[error("bad vertex {0}: vertex indices must be positive")]
    BadVertex(i64),
    #[error("label list too short: {got} labels for vertex {needed}")]
    MissingLabel { needed: usize, got: usize },
    #[error("not a face: {0:?}")]
    NotAFace(Vec<u32>),
    #[error("complex is not pure")]
    NotPure,
    #[error("complex is not a closed pseudomanifold")]
    NotClosedPseudomanifold,
    #[error("complex is not a pseudomanifold")]
    NotPseudomanifold,
    #[error("complex is not connected")]
    Disconnected,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(isize, isize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("handle addition needs disjoint facets with disjoint vertex stars")]
    StarsNotDisjoint,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("move not applicable: {0}")]
    MoveNotApplicable(String),
    #[error("only 3-manifold slicings supported (got dimension {0})")]
    SlicingDimension(isize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("not a closed surface: {0}")]
    NotClosedSurface(String),
    #[error("unsupported singularity type at vertex {0}")]
    UnsupportedSingularity(u32),
    #[error("boundaries could not be mapped")]
    BoundariesNotMapped,
    #[error("invalid resolution block: {0}")]
    InvalidBlock(String),
    #[error("schema version mismatch: expected {expected}, found {found}")]
    SchemaVersion { expected: u32, found: u32 },
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("cached property `{key}` does not match recomputed value")]
    CacheMismatch { key: String },
    #[error(
        "unparsable predicate `{query}`: {reason}\n\
         grammar: COND ('and' COND)*; COND := PROP OP VALUE | 'homology[' K '].torsion' ('empty'|'nonempty'); \
         PROP := dim | chi | f0..f9 | n | betti[K] | pure | closed | connected | orientable | name; \
         OP := == | != | < | <= | > | >="
    )]
    Predicate { query: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
