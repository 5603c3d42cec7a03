use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "matrix is not Hermitian: |M[{row}][{col}] - conj(M[{col}][{row}])| = {deviation:.3e}"
    )]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("state is not normalized: norm² deficit {deficit:.3e}")]
    Normalization { deficit: f64 },

    #[error("density matrix trace is {trace}, expected 1")]
    Trace { trace: f64 },

    #[error("density matrix is not positive: eigenvalue {eigenvalue:.3e}")]
    NotPositive { eigenvalue: f64 },

    #[error("{name} = {value} is out of range: {constraint}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        constraint: String,
    },

    #[error("{0}")]
    Domain(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn out_of_range(
        name: &'static str,
        value: f64,
        constraint: impl Into<String>,
    ) -> Self {
        Error::OutOfRange {
            name,
            value,
            constraint: constraint.into(),
        }
    }
}
