use std::fmt;

use super::check_range;
use super::storage::Slot;
use super::DEFAULT_BUFFER_SIZE;
use crate::concepts::{convert, Function, Signature, Space, Value};
use crate::error::{Error, Result};

/// Polymorphic `D -> R` function, the analogue of `std::function<R(D)>`.
///
/// Any [`Function`] whose range converts to `R` can be stored: integer
/// results widen to scalars, other kinds must match shape exactly.
///
/// ```
/// use fnspace::analytic::{sin_squared, SinSquared};
/// use fnspace::concepts::Function;
/// use fnspace::erasure::ErasedFunction;
///
/// let mut f = ErasedFunction::<f64, f64>::new(sin_squared)?;
/// f.assign(|x: f64| x.sin() * x.sin())?;
/// f.assign(SinSquared)?;
/// assert!((f.eval(0.5 * std::f64::consts::PI) - 1.0).abs() < 1e-12);
///
/// f.assign(|x: f64| x.floor() as i64)?;
/// assert_eq!(f.eval(2.7), 2.0);
///
/// let complex = |x: f64| num_complex::Complex::new(x, 0.0);
/// assert!(ErasedFunction::<f64, f64>::new(complex).is_err());
/// # Ok::<(), fnspace::Error>(())
/// ```
pub struct ErasedFunction<D, R, const CAP: usize = DEFAULT_BUFFER_SIZE> {
    inner: Option<Inner<D, R, CAP>>,
}

struct Inner<D, R, const CAP: usize> {
    slot: Slot<CAP>,
    call: unsafe fn(*const u8, D) -> R,
}

unsafe fn call_thunk<F, D, R>(object: *const u8, x: D) -> R
where
    F: Function<D>,
    F::Range: Value,
    R: Space,
{
    convert((*object.cast::<F>()).eval(x))
}

impl<D: Space, R: Space, const CAP: usize> ErasedFunction<D, R, CAP> {
    pub const CAPACITY: usize = CAP;

    /// Wraps `f`. Fails if `f`'s range does not convert to `R`.
    pub fn new<F>(f: F) -> Result<Self>
    where
        F: Function<D> + Clone + Send + Sync + 'static,
        F::Range: Value,
    {
        check_range::<F::Range, R>()?;
        Ok(ErasedFunction {
            inner: Some(Inner {
                slot: Slot::new(f),
                call: call_thunk::<F, D, R>,
            }),
        })
    }

    pub fn assign<F>(&mut self, f: F) -> Result<()>
    where
        F: Function<D> + Clone + Send + Sync + 'static,
        F::Range: Value,
    {
        *self = ErasedFunction::new(f)?;
        Ok(())
    }

    pub fn try_call(&self, x: D) -> Result<R> {
        let inner = self.inner.as_ref().ok_or(Error::EmptyHandle)?;
        // SAFETY: `call` was instantiated for the type stored in `slot`.
        Ok(unsafe { (inner.call)(inner.slot.as_ptr(), x) })
    }

    /// # Panics
    ///
    /// If the range type is [`Invalid`](crate::concepts::Invalid).
    pub fn signature(&self) -> Signature {
        Signature::of::<D, R>().expect("handle range is a space")
    }
}

impl<D, R, const CAP: usize> ErasedFunction<D, R, CAP> {
    pub const fn empty() -> Self {
        ErasedFunction { inner: None }
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_none()
    }

    /// Whether the wrapped callable lives in the inline buffer. Empty handles store nothing.
    pub fn is_inline(&self) -> bool {
        self.inner.as_ref().is_some_and(|i| i.slot.is_inline())
    }

    /// Size in bytes of the wrapped callable.
    pub fn footprint(&self) -> Option<usize> {
        self.inner.as_ref().map(|i| i.slot.footprint())
    }

    pub fn target_type_name(&self) -> Option<&'static str> {
        self.inner.as_ref().map(|i| i.slot.type_name())
    }

    pub(super) fn object(&self) -> Option<*const u8> {
        self.inner.as_ref().map(|i| i.slot.as_ptr())
    }
}

impl<D: Space, R: Space, const CAP: usize> Function<D> for ErasedFunction<D, R, CAP> {
    type Range = R;

    /// # Panics
    ///
    /// On an empty handle.
    #[inline]
    fn eval(&self, x: D) -> R {
        match &self.inner {
            // SAFETY: see `try_call`.
            Some(inner) => unsafe { (inner.call)(inner.slot.as_ptr(), x) },
            None => empty_handle(),
        }
    }
}

#[cold]
#[inline(never)]
pub(super) fn empty_handle() -> ! {
    panic!("{}", Error::EmptyHandle)
}

impl<D, R, const CAP: usize> Clone for ErasedFunction<D, R, CAP> {
    fn clone(&self) -> Self {
        ErasedFunction {
            inner: self.inner.as_ref().map(|i| Inner {
                slot: i.slot.clone(),
                call: i.call,
            }),
        }
    }
}

impl<D, R, const CAP: usize> Default for ErasedFunction<D, R, CAP> {
    fn default() -> Self {
        ErasedFunction::empty()
    }
}

impl<D, R, const CAP: usize> fmt::Debug for ErasedFunction<D, R, CAP> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ErasedFunction")
            .field("target", &self.target_type_name())
            .field("inline", &self.is_inline())
            .finish()
    }
}
