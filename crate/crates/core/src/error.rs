use crate::rational::ParseRationalError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid auction instance: {0}")]
    InvalidSpec(String),
    #[error("instance too large for exhaustive mode: {profiles} profiles exceeds the cap of {cap}")]
    CapExceeded { profiles: u128, cap: u128 },
    #[error("linear program too large: {cells} allocation cells exceed the cap of {cap} (use a smaller instance or raise the LP cap)")]
    LpTooLarge { cells: u128, cap: u128 },
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error(transparent)]
    Parse(#[from] ParseRationalError),
    #[error("linear program: {0}")]
    Lp(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
