//! Exact integer relations and minimal polynomials from decimal approximations.
//!
//! The pipeline: [`arith`] sets the working precision, [`pslq`] holds the
//! PSLQ(τ) matrices, [`relation`] drives the search, and [`minpoly`]
//! turns a decimal `α̃` plus degree and height bounds into a certified
//! minimal polynomial. [`identify`] and [`factor`] are built on top;
//! [`oracle`] is a brute-force reference for tests.
//!
//! ```
//! use pslq_minpoly::minpoly::reconstruct;
//! use pslq_minpoly::arith::parse_decimal;
//!
//! let alpha = parse_decimal("11.937253933").unwrap();
//! let report = reconstruct(&alpha, 2, 47).unwrap();
//! assert_eq!(report.polynomial().unwrap().to_string(), "x^2 - 8*x - 47");
//! ```
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod arith;
pub mod cli;
pub mod factor;
pub mod identify;
pub mod minpoly;
pub mod oracle;
pub mod polynomial;
pub mod pslq;
pub mod relation;

pub use arith::{make_context, parse_decimal, BigReal, PrecisionContext};
pub use factor::{factor_primitive, real_roots, FactorizationResult};
pub use identify::{identify_form, FormKind, TranscendentalForm};
pub use minpoly::{digits_required, epsilon_bound, reconstruct, ReconstructionReport};
pub use polynomial::IntPolynomial;
pub use relation::{find_relation, IntegerRelation, RelationOutcome, RelationParams};
