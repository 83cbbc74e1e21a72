use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants carry enough location information (series, row, column) for a
/// command-line user to find the offending input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NonPositiveValue: series `{series}` has non-positive value at index {index}")]
    NonPositiveValue { series: String, index: usize },

    #[error("NonFiniteValue: series `{series}` has a non-finite value at index {index}")]
    NonFiniteValue { series: String, index: usize },

    #[error("SeriesTooShort: need at least {needed} observations, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("BadPeriodFormat: `{text}` is not a YYYYQn period (line {line})")]
    BadPeriodFormat { text: String, line: usize },

    #[error("NonConsecutivePeriods: line {line} expected {expected}, found {found}")]
    NonConsecutivePeriods {
        line: usize,
        expected: String,
        found: String,
    },

    #[error("NonNumericCell: line {line}, column `{column}`: `{text}`")]
    NonNumericCell {
        line: usize,
        column: String,
        text: String,
    },

    #[error("DuplicateColumn: `{0}`")]
    DuplicateColumn(String),

    #[error("EmptyFile: no header or no data rows")]
    EmptyFile,

    #[error("MalformedCsv: {0}")]
    MalformedCsv(String),

    #[error("MissingColumn: `{0}` is not in the data set")]
    MissingColumn(String),

    #[error("RankDeficient: column `{column}` is collinear with the preceding columns")]
    RankDeficient { column: String },

    #[error("InsufficientObservations: {n} observations for {k} parameters")]
    InsufficientObservations { n: usize, k: usize },

    #[error("DegenerateFit: regression fits exactly, residual variance is zero")]
    DegenerateFit,

    #[error("DegenerateResiduals: residuals have no variation")]
    DegenerateResiduals,

    #[error("MissingRegressor: no value supplied for `{0}`")]
    MissingRegressor(String),

    #[error("OrderExceeded: `{series}` still has a unit root after {max_diff} difference(s)")]
    OrderExceeded { series: String, max_diff: usize },

    #[error("UnsupportedLevel: {0} (critical values exist for 0.01, 0.05 and 0.10 only)")]
    UnsupportedLevel(f64),

    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),

    #[error("Config: {0}")]
    Config(String),

    #[error("Report: {0}")]
    Report(String),

    #[error("Io: {path}: {message}")]
    Io { path: String, message: String },
}
