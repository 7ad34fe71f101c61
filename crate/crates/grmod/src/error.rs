use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("inner lattice is not contained in the outer lattice")]
    NotContained,
    #[error("matrix is not an endomorphism of the given torsion module (column {col}, row {row})")]
    NotEndomorphism { row: usize, col: usize },
    #[error("diagonal moduli must all be >= 1")]
    InvalidDiagonal,
    #[error("generators span a rank-{rank} lattice inside Z^{dim}; full rank required")]
    RankDeficient { dim: usize, rank: usize },
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("not a subgroup of the given group")]
    NotSubgroup,
    #[error("subgroup lattice is not stable under the module action")]
    NotStable,
    #[error("group is not cyclic")]
    NotCyclic,
    #[error("element does not generate the group")]
    NotGenerator,
    #[error("subgroup order {0} is not prime")]
    NotPrimeOrder(u64),
    #[error("{what} exceeds the configured cap {limit} (requested {requested})")]
    CapExceeded {
        what: &'static str,
        limit: String,
        requested: String,
    },
    #[error("module is invalid: {0}")]
    InvalidModule(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown verification target `{0}`")]
    UnknownTheorem(String),
    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),
}
