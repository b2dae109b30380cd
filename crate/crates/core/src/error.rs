use alloc::string::String;
use thiserror::Error;

/// Errors raised by function construction, parsing and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FnError {
    #[error("point outside the open poly-half-plane: Re z[{index}] = {re}")]
    DomainViolation { index: usize, re: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid atom: {0}")]
    InvalidAtom(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("expression not supported here: {0}")]
    Unsupported(String),
}

/// Errors raised by the cubature engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("integrand returned a non-finite value at {point:?}")]
    NonFinite { point: alloc::vec::Vec<f64> },
    #[error("invalid quadrature specification: {0}")]
    InvalidSpec(String),
    #[error("integral appears to diverge: {0}")]
    Divergent(String),
    #[error("integrability check failed: {0}")]
    NotIntegrable(String),
}

/// Errors raised by matrix-level routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalcError {
    #[error("tuple is empty or matrices are not square of equal size")]
    Shape,
    #[error("tuple length {got} does not match function dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrices {i} and {j} do not commute: relative commutator {rel:.3e}")]
    NotCommuting { i: usize, j: usize, rel: f64 },
    #[error("matrix {index} has eigenvalue {re:.6e}{im:+.6e}i in the open left half-plane")]
    SpectrumOutside { index: usize, re: f64, im: f64 },
    #[error("ill-conditioned linear solve (condition estimate {0:.3e})")]
    IllConditioned(f64),
    #[error("tuple is not jointly diagonalizable: {0}")]
    NotDiagonalizable(String),
    #[error(transparent)]
    Fn(#[from] FnError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}
