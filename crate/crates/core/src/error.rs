use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("E({n}) does not lie in the cyclotomic field of conductor {target}")]
    ConductorMismatch { n: u32, target: u32 },

    #[error("{r} is not coprime to the conductor {n}")]
    NotCoprime { r: u32, n: u32 },

    #[error("table schema: {0}")]
    Schema(String),

    #[error("value at row {row}, column {col}: {source}")]
    Value {
        row: usize,
        col: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io { path: std::path::PathBuf, source: std::io::Error },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid character table: {0}")]
    InvalidTable(String),

    #[error("partition: {0}")]
    Partition(String),

    #[error("table has {k} classes, the limit for this operation is {max}")]
    TooLarge { k: usize, max: usize },

    #[error("class subset {0} is not a normal subgroup")]
    NotASubgroup(String),

    #[error("automorphism list is not closed under composition")]
    NotClosed,
}
