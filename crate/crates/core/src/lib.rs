//! Numerical toolkit for functions of two commuting matrix contractions.
//!
//! The crate evaluates the polynomial functional calculus `f(T, R)`, checks
//! the exact difference and quasicommutator identities built from the
//! coefficient shift operators, implements the Littlewood–Paley / Besov
//! machinery on the two-torus, and runs randomized experiment suites that
//! estimate the constants in the associated Lipschitz, Hölder and
//! Schatten–von Neumann perturbation bounds.

pub mod besov;
pub mod bipoly;
pub mod error;
pub mod funcalc;
pub mod matnum;
pub mod opineq;
pub mod pairs;
pub mod torus;
pub mod xp;

pub use num_complex::Complex64 as C64;

pub use besov::{DyadicBump, LittlewoodPaley, ModulusOfContinuity, TrigPolynomial2D};
pub use bipoly::{BiPolynomial, SupNorm, UniPolynomial, Var};
pub use error::{Error, Result};
pub use funcalc::{ContractionPair, PairCalculus, Tolerances};
pub use matnum::{MatrixOperator, SingularSpectrum};
pub use opineq::{OperatorFamily, PolynomialFamily};
pub use pairs::{GeneratedPair, PairScheme, SchemeKind};
