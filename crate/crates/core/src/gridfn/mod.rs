//! Grid-view functions and their element-local restrictions.
//!
//! A [`GridViewFunction`](crate::concepts::GridViewFunction) is evaluated in
//! global coordinates. Its local function is bound to one element at a time
//! and evaluated in that element's reference coordinates. Derivatives of
//! local functions are always reported in global coordinates:
//! `(Df)_e = (Df) ∘ Φ_e`, without the factor `DΦ_e`.
//!
//! ```
//! use fnspace::concepts::{GridViewFunction, LocalFunction};
//! use fnspace::grid::make_uniform_grid;
//! use fnspace::gridfn::lift_with_derivative;
//!
//! let gv = make_uniform_grid(2)?;
//! let f = lift_with_derivative(|x: f64| x * x, |x: f64| 2.0 * x, gv);
//! let mut local = f.local_function();
//! local.bind(&gv.element(0)?)?;
//! assert_eq!(local.evaluate(0.5)?, 0.0625);
//! assert_eq!(local.derivative()?.evaluate(0.5)?, 0.5);
//! # Ok::<(), fnspace::Error>(())
//! ```

mod erased;
mod lift;
mod p1;

pub use erased::{ErasedGridViewFunction, ErasedLocalFunction};
pub use lift::{lift, lift_fn, lift_with_derivative, AnalyticGridFunction, AnalyticLocalFunction};
pub use p1::{
    p1_interpolate, Coefficients, CountingCoefficients, P1Derivative, P1DerivativeLocal,
    P1Function, P1Local,
};
