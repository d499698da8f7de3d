//! Certified evaluation of the Green's-function metric masses of
//! S²×S², G(2,4) and ℝP²×ℝP².
//!
//! Every quantity in the underlying spectral series lives in the field
//! ℚ + ℚ·ln 2, so the whole pipeline runs in exact arithmetic: the only
//! irrational constant, ln 2, stays symbolic until output time, where it
//! is replaced by a rational enclosure of arbitrary precision. Partial
//! sums of the series are therefore computed exactly, and the truncation
//! error is bounded by an explicit rational-root envelope, so every
//! interval this crate emits is a proved enclosure of the true mass.
//!
//! Module map:
//!
//! * [`exactnum`] — rationals, the `a + b·ln 2` field, interval plumbing.
//! * [`basis`] — shifted Legendre coefficients and combinatorial data.
//! * [`xyfunc`] — exact calculus of rational functions with `(x+y)`-power
//!   denominators; the conformal Laplacian on the unit square.
//! * [`integrals`] — exact triangle/square integration and the moment
//!   table for the source term.
//! * [`quad`] — floating-point adaptive quadrature, used only as an
//!   independent cross-check, never in the certified path.
//! * [`mass`] — the mass series, truncation envelopes, certified
//!   enclosures for the masses and the derived critical values.

pub mod basis;
pub mod exactnum;
pub mod integrals;
pub mod mass;
pub mod quad;
pub mod xyfunc;

pub use exactnum::{ExactValue, RatInterval, Rational};
pub use mass::{Manifold, MassEstimate};

use thiserror::Error;

/// Errors raised by domain-restricted operations.
///
/// All operations in this crate are total on their documented domains;
/// these variants signal caller bugs, not numerical failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("square root of negative rational {0}")]
    NegativeSqrt(String),
    #[error("evaluation at a pole: x + y = 0 with denominator power {0}")]
    PoleEvaluation(u32),
    #[error("divergent integral: I({p},{q};{n}) violates p+q > n-2")]
    DivergentIntegral { p: u32, q: u32, n: u32 },
    #[error("integrand unbounded on the unit square: monomial x^{a} y^{b} / (x+y)^{k}")]
    UnboundedIntegrand { a: u32, b: u32, k: u32 },
    #[error("coefficient index out of range: need p <= j and q <= k, got ({j},{k},{p},{q})")]
    CoefficientRange { j: u32, k: u32, p: u32, q: u32 },
    #[error("mass interval touches zero; critical value t0 = -1/(9m) undefined")]
    NonPositiveMass,
}

pub type Result<T> = std::result::Result<T, Error>;
