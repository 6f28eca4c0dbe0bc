//! Type-erased function handles with small-object storage.
//!
//! A handle stores the wrapped callable inline when it fits in `CAP` bytes
//! (default [`DEFAULT_BUFFER_SIZE`]) and in one heap allocation otherwise.
//! Calls go through a single function pointer and never allocate.

mod differentiable;
mod function;
pub(crate) mod storage;

pub use differentiable::ErasedDifferentiableFunction;
pub use function::ErasedFunction;
pub use storage::{fits_inline, MAX_ALIGN};

use crate::concepts::{Space, Value};
use crate::error::{Error, Result};

pub const DEFAULT_BUFFER_SIZE: usize = 56;

/// Differentiable scalar function behind an erased handle.
pub type ScalarFunction = ErasedDifferentiableFunction<f64, f64>;

pub(crate) fn check_range<S: Value, R: Space>() -> Result<()> {
    match R::KIND.as_space() {
        Some(target) if S::KIND.converts_to(target) => Ok(()),
        _ => Err(Error::RangeNotConvertible {
            from: S::KIND,
            to: R::KIND,
        }),
    }
}
