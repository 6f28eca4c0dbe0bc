//! Function interfaces for numerical codes.
//!
//! * [`concepts`]: the `Function`, `DifferentiableFunction`,
//!   `GridViewFunction` and `LocalFunction` traits, plus run-time
//!   conformance reports with readable diagnostics.
//! * [`traits`]: which space the derivative of a `D -> R` map lives in.
//! * [`erasure`]: type-erased handles with small-object storage.
//! * [`analytic`]: polynomials, composition and test fixtures.
//! * [`grid`] and [`gridfn`]: a uniform 1-D grid, grid-view functions and
//!   element-bound local functions.
//! * [`bench`]: the static versus dynamic dispatch benchmark.
//!
//! ```
//! use fnspace::analytic::{sin_squared, Polynomial, SinSquared};
//! use fnspace::concepts::Function;
//! use fnspace::erasure::ScalarFunction;
//!
//! let mut f = ScalarFunction::new(Polynomial::new(vec![1.0, 2.0, 3.0]))?;
//! let df = f.derivative()?;
//! assert_eq!(df.eval(0.0), 2.0);
//!
//! let x = 0.5 * std::f64::consts::PI;
//! let g = fnspace::erasure::ErasedFunction::<f64, f64>::new(SinSquared)?;
//! assert_eq!(g.eval(x), sin_squared(x));
//! # f.assign(Polynomial::<f64>::zero())?;
//! # Ok::<(), fnspace::Error>(())
//! ```

pub mod analytic;
pub mod bench;
pub mod concepts;
pub mod erasure;
mod error;
pub mod grid;
pub mod gridfn;
pub mod traits;

pub use error::{Error, Result};
