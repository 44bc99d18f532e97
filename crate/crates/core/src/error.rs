use thiserror::Error;

use crate::io::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty candidate set")]
    EmptyCandidateSet,
    #[error("ordinal profile required")]
    OrdinalProfileRequired,
    #[error("not a scoring rule: {0}")]
    NotAScoringRule(String),
    #[error("rule {rule} cannot be evaluated on {kind} ballots")]
    IncompatibleRule { rule: String, kind: String },
    #[error("ballot and axis are over different candidate universes")]
    UniverseMismatch,
    #[error("axis required")]
    AxisRequired,
    #[error("profile is not single-peaked with respect to the axis")]
    NotSinglePeaked,
    #[error("instance too large for oracle: {subsets} subsets exceed the cap of {cap}")]
    OracleCapExceeded { subsets: String, cap: u128 },
    #[error(
        "{cell} has no polynomial counter and is too large for the oracle ({subsets} subsets, cap {cap}); \
         rerun with --algorithm oracle and a larger cap"
    )]
    HardCell { cell: String, subsets: String, cap: u128 },
    #[error("no polynomial-time counter for {0}")]
    NoPolynomialRoute(String),
    #[error("{algorithm} does not handle {cell}")]
    WrongCell { algorithm: &'static str, cell: String },
    #[error("{0} pool missing")]
    MissingPool(&'static str),
    #[error("invalid election: {0}")]
    InvalidElection(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("reduction precondition violated: {0}")]
    ReductionPrecondition(String),
    #[error("inconsistent profile: {0}")]
    InconsistentProfile(String),
    #[error("invalid turnout model: {0}")]
    InvalidTurnout(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    pub fn is_oracle_cap(&self) -> bool {
        matches!(self, Error::OracleCapExceeded { .. } | Error::HardCell { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
