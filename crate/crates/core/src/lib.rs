//! Euler's constant from geometrically convergent dyadic-block series.
//!
//! The crate is split into three layers:
//!
//! - [`exact`]: binomials, harmonic numbers and the rational coefficient
//!   sequences `e_m` and `c_m(s)`, all kept in canonical reduced form.
//! - [`fixed`]: a binary fixed-point type over big integers with truncating
//!   arithmetic and a handful of constants and elementary functions that
//!   carry explicit error bounds (in units of the last place).
//! - [`series`]: the level-ℓ series for γ, the matching η(s) series, the
//!   planner that picks level, term count and working precision, and the
//!   diagnostic checks on the coefficient sequence.
//!
//! ```
//! use dyadic_gamma::series::{gamma_series, plan_for_digits};
//!
//! let plan = plan_for_digits(20, 3).unwrap();
//! let approx = gamma_series(&plan).unwrap();
//! assert_eq!(approx.value.to_decimal(20), "0.57721566490153286060");
//! ```

pub mod error;
pub mod exact;
pub mod fixed;
pub mod reference;
pub mod series;

pub use error::{Error, Result};
pub use exact::Rational;
pub use fixed::{Enclosure, FixedPoint, PrecisionCtx};
