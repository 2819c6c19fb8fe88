//! Expressions over coordinate charts and exact first derivatives.
//!
//! Expressions are parsed from text, evaluated over any [`Analytic`]
//! scalar, and differentiated by running them over [`Jet`]s. Finite
//! differences never appear outside of tests.
//!
//! [`Analytic`]: crate::scalar::Analytic

mod expr;
mod jet;
mod map;
mod parser;

pub use expr::Expr;
pub use jet::Jet;
pub use map::{
    directional_derivative, eval, jacobian, lie_bracket, pushforward, value_and_jacobian,
    ChartMap, MatrixMap, SmoothMap,
};
pub(crate) use map::{check_len, check_vector_field};
pub use parser::parse;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChartError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("variable x{index} out of range for chart dimension {dim}")]
    VariableOutOfRange {
        index: usize,
        dim: usize,
        offset: Option<usize>,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
}
