//! Analytic Besov algebras on the poly-half-plane `C_+^n`, their
//! reproducing formulas, and the induced functional calculus for tuples of
//! commuting matrices with spectra in the closed right half-plane.
#![no_std]

extern crate alloc;

pub mod besov;
pub mod decomp;
pub mod estimates;
pub mod error;
pub mod kernel;
pub mod fnalg;
pub mod linalg;
pub mod opcalc;
pub mod quad;
pub mod repro;
pub mod spectral;
pub mod varset;

pub use error::{CalcError, FnError, QuadError};
pub use fnalg::FnExpr;
pub use num_complex::Complex64 as C64;
pub use varset::VarSet;
