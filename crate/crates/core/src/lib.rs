//! Validated numerics with interval arithmetic.
//!
//! Intervals are generic over their endpoint type ([`Scalar`]). Two families
//! of backends ship with the crate: IEEE binary floating point (`f64`, `f32`)
//! with outward rounding, and exact rationals ([`Rational`]). On top of the
//! arithmetic sit interval extensions of elementary functions, a small
//! expression language, rigorous algorithms (range enclosure by bisection,
//! interval quadrature, interval Newton), and an interpreter for interval
//! machine programs.
//!
//! ```
//! use rigor::{F64Interval, RatInterval};
//!
//! let x = F64Interval::parse("[1, 2]").unwrap();
//! let y = x.sub(&x).unwrap();
//! assert_eq!(y, F64Interval::parse("[-1, 1]").unwrap());
//!
//! let third = RatInterval::parse("1/3").unwrap();
//! assert!(third.is_degenerate());
//! ```

pub mod algorithms;
pub mod elementary;
pub mod error;
pub mod expr;
pub mod interval;
pub mod machine;
pub mod scalar;

pub use error::{IntervalError, ParseScalarError};
pub use interval::{Interval, IntervalRepr, Tri};
pub use scalar::{Rational, Round, Scalar};

/// Intervals with binary64 endpoints.
pub type F64Interval = Interval<f64>;
/// Intervals with binary32 endpoints.
pub type F32Interval = Interval<f32>;
/// Intervals with exact rational endpoints.
pub type RatInterval = Interval<Rational>;
