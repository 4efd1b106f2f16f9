//! Elementary-function solutions of the Bachelier pricing equation
//!
//! ```text
//! r S C_S + sigma^2/2 C_SS + C_t - r C = 0
//! ```
//!
//! and the new solution families produced from them by the equation's Lie
//! point symmetries.
//!
//! * [`kummer`]: truncated Kummer polynomials `F(-m, b; u)`.
//! * [`solutions`]: the four base classes `C_{q,n}`, their exact partial
//!   derivatives, and linear combinations.
//! * [`symmetry`]: generators, the six one-parameter groups, and the
//!   pullback that turns a solution into a one-parameter family.
//! * [`pde_verify`]: analytic and finite-difference PDE residuals.
//! * [`dsl`]: the `2*C1[0] + C4[-2] | G3(0.1)` expression language.
//! * [`verify`]: the self-check suites behind `bachelier verify`.
//!
//! ```
//! use bachelier_core::{dsl::parse_expr, EvalPoint, ModelParams, SolutionFn};
//!
//! let mp = ModelParams::new(0.05, 0.2).unwrap();
//! let expr = parse_expr("C1[0] | G4(0.5)").unwrap();
//! let c = expr.value(EvalPoint::new(0.0, 1.0), &mp).unwrap();
//! assert!(c > 0.0);
//! ```

pub mod closed_forms;
pub mod dsl;
pub mod error;
pub mod kummer;
pub mod numeric;
pub mod pde_verify;
pub mod solutions;
pub mod symmetry;
pub mod tolerances;
pub mod verify;

pub use dsl::{format_expr, parse_expr, SolutionExpr};
pub use error::{Error, Result};
pub use pde_verify::{GridSpec, ResidualReport, ScanMode};
pub use solutions::{BaseCombo, EvalPoint, ModelParams, Partials, SolutionFn, SolutionTerm};
pub use symmetry::{GroupElement, JetPoint};
