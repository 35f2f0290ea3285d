use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("zero matrix has no Smith normal form")]
    ZeroMatrix,
    #[error("matrix is not in GL(2,Z): {0}")]
    NotInGl2z(String),
    #[error("accepted product leaves the subgroup")]
    NotInSubgroup,
    #[error("resource limit exceeded: {what} (limit {limit})")]
    ResourceLimit { what: &'static str, limit: usize },
    #[error("generators all lie in GL(2,Z); not a proper extension")]
    NotAnExtension,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("label {label} is not in monoid {monoid}")]
    LabelClass { label: String, monoid: String },
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Budgets shared by the decision procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of states created by a determinization or product.
    pub states: usize,
    /// Maximum number of coset representatives explored by a coset BFS;
    /// `None` uses the bound derived from `|SL(2, Z/qZ)|`.
    pub cosets: Option<usize>,
    /// Maximum number of saturation rounds and shortcut insertions.
    pub saturation: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            states: 1_000_000,
            cosets: None,
            saturation: 1_000_000,
        }
    }
}
