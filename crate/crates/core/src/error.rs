use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("group order {order} exceeds the configured cap of {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("unknown builtin group {0:?}")]
    UnknownBuiltin(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Error)]
pub enum RepError {
    #[error("functions are defined on different groups")]
    GroupMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("group order {order} exceeds the cap of {cap} for this computation")]
    GroupTooLarge { order: usize, cap: usize },
    #[error("irrep construction failed after {attempts} seeds: {reason}")]
    NumericalFailure { attempts: usize, reason: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("value at element {index} has modulus {modulus} > 1")]
    Unbounded { index: usize, modulus: f64 },
}

#[derive(Debug, Error)]
pub enum TesterError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("query budget overflows 64 bits ({0})")]
    BudgetOverflow(String),
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("family {family} cannot be used with tester {tester}")]
    IncompatibleFamily { tester: String, family: String },
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Tester(#[from] TesterError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
