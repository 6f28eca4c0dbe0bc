use std::fmt;

use super::function::ErasedFunction;
use super::DEFAULT_BUFFER_SIZE;
use crate::concepts::{DifferentiableFunction, Function, Signature, Space, Value};
use crate::error::{Error, Result};
use crate::traits::{
    DefaultDerivativeTraits, DerivativeRangeKind, DerivativeTraits, DerivativeTraitsPolicy,
};

type Derived<D, R, T, const CAP: usize> =
    ErasedDifferentiableFunction<D, <T as DerivativeTraits>::Range<D, R>, T, CAP>;

type DeriveFn<D, R, T, const CAP: usize> = unsafe fn(*const u8) -> Result<Derived<D, R, T, CAP>>;

/// Polymorphic differentiable function `D -> R`.
///
/// The derivative handle has range `T::Range<D, R>` and is built on each
/// [`derivative`](Self::derivative) call from the wrapped object's own
/// derivative. Signatures the traits map to
/// [`Invalid`](crate::concepts::Invalid) fail there, not at construction.
///
/// ```
/// use fnspace::analytic::Polynomial;
/// use fnspace::concepts::Function;
/// use fnspace::erasure::ScalarFunction;
///
/// let f = ScalarFunction::new(Polynomial::new(vec![1.0, 2.0, 3.0]))?;
/// let df = f.derivative()?;
/// assert_eq!(df.eval(0.0), 2.0);
/// assert_eq!(df.derivative()?.eval(10.0), 6.0);
/// # Ok::<(), fnspace::Error>(())
/// ```
pub struct ErasedDifferentiableFunction<
    D: Space,
    R: Space,
    T: DerivativeTraits = DefaultDerivativeTraits,
    const CAP: usize = DEFAULT_BUFFER_SIZE,
> {
    function: ErasedFunction<D, R, CAP>,
    derive: Option<DeriveFn<D, R, T, CAP>>,
}

unsafe fn derive_thunk<F, D, R, T, const CAP: usize>(
    object: *const u8,
) -> Result<Derived<D, R, T, CAP>>
where
    F: DifferentiableFunction<D>,
    D: Space,
    R: Space,
    T: DerivativeTraits,
{
    let df = (*object.cast::<F>()).derivative()?;
    ErasedDifferentiableFunction::new(df)
}

impl<D: Space, R: Space, T: DerivativeTraits, const CAP: usize>
    ErasedDifferentiableFunction<D, R, T, CAP>
{
    pub const CAPACITY: usize = CAP;

    /// Wraps `f`. Fails if `f`'s range does not convert to `R`.
    pub fn new<F>(f: F) -> Result<Self>
    where
        F: DifferentiableFunction<D> + Clone + Send + Sync + 'static,
    {
        Ok(ErasedDifferentiableFunction {
            function: ErasedFunction::new(f)?,
            derive: Some(derive_thunk::<F, D, R, T, CAP>),
        })
    }

    pub fn assign<F>(&mut self, f: F) -> Result<()>
    where
        F: DifferentiableFunction<D> + Clone + Send + Sync + 'static,
    {
        *self = ErasedDifferentiableFunction::new(f)?;
        Ok(())
    }

    pub const fn empty() -> Self {
        ErasedDifferentiableFunction {
            function: ErasedFunction::empty(),
            derive: None,
        }
    }

    /// Erased derivative of the wrapped function.
    pub fn derivative(&self) -> Result<Derived<D, R, T, CAP>> {
        let (Some(object), Some(derive)) = (self.function.object(), self.derive) else {
            return Err(Error::EmptyHandle);
        };
        if self.derivative_range() == DerivativeRangeKind::Invalid {
            return Err(Error::InvalidDerivativeRange {
                signature: self.signature(),
                traits: T::policy().name().to_owned(),
            });
        }
        // SAFETY: `derive` was instantiated for the type stored behind `object`.
        unsafe { derive(object) }
    }

    pub fn try_call(&self, x: D) -> Result<R> {
        self.function.try_call(x)
    }

    pub fn signature(&self) -> Signature {
        self.function.signature()
    }

    /// Range kind of [`derivative`](Self::derivative), as computed by the type-level traits.
    pub fn derivative_range(&self) -> DerivativeRangeKind {
        <T::Range<D, R> as Value>::KIND.into()
    }

    pub fn traits(&self) -> DerivativeTraitsPolicy {
        T::policy()
    }

    pub fn is_empty(&self) -> bool {
        self.function.is_empty()
    }

    pub fn is_inline(&self) -> bool {
        self.function.is_inline()
    }

    pub fn footprint(&self) -> Option<usize> {
        self.function.footprint()
    }

    pub fn target_type_name(&self) -> Option<&'static str> {
        self.function.target_type_name()
    }

    /// The same object viewed as a plain function handle.
    pub fn as_function(&self) -> &ErasedFunction<D, R, CAP> {
        &self.function
    }
}

impl<D: Space, R: Space, T: DerivativeTraits, const CAP: usize> Function<D>
    for ErasedDifferentiableFunction<D, R, T, CAP>
{
    type Range = R;

    /// # Panics
    ///
    /// On an empty handle.
    #[inline]
    fn eval(&self, x: D) -> R {
        self.function.eval(x)
    }
}

impl<D: Space, R: Space, T: DerivativeTraits, const CAP: usize> DifferentiableFunction<D>
    for ErasedDifferentiableFunction<D, R, T, CAP>
{
    type Derivative = Derived<D, R, T, CAP>;

    fn derivative(&self) -> Result<Self::Derivative> {
        ErasedDifferentiableFunction::derivative(self)
    }
}

impl<D: Space, R: Space, T: DerivativeTraits, const CAP: usize> Clone
    for ErasedDifferentiableFunction<D, R, T, CAP>
{
    fn clone(&self) -> Self {
        ErasedDifferentiableFunction {
            function: self.function.clone(),
            derive: self.derive,
        }
    }
}

impl<D: Space, R: Space, T: DerivativeTraits, const CAP: usize> Default
    for ErasedDifferentiableFunction<D, R, T, CAP>
{
    fn default() -> Self {
        ErasedDifferentiableFunction::empty()
    }
}

impl<D: Space, R: Space, T: DerivativeTraits, const CAP: usize> fmt::Debug
    for ErasedDifferentiableFunction<D, R, T, CAP>
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ErasedDifferentiableFunction")
            .field("target", &self.target_type_name())
            .field("inline", &self.is_inline())
            .field("traits", &T::policy().name())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{Analytic, Polynomial};
    use crate::concepts::{Covector, Invalid, Matrix};
    use crate::erasure::ScalarFunction;
    use std::f64::consts::FRAC_PI_2;

    fn p123() -> Polynomial {
        Polynomial::new(vec![1.0, 2.0, 3.0])
    }

    #[test]
    fn derivative_handle_values() {
        let f = ScalarFunction::new(p123()).unwrap();
        let df = f.derivative().unwrap();
        assert_eq!(df.eval(0.0), 2.0);
        let ddf = df.derivative().unwrap();
        for x in [-3.0, 0.0, 0.25, 7.5] {
            assert_eq!(ddf.eval(x), 6.0);
        }
    }

    #[test]
    fn erased_matches_unerased_bitwise() {
        let p = p123();
        let f = ScalarFunction::new(p.clone()).unwrap();
        assert_eq!(f.eval(FRAC_PI_2).to_bits(), p.eval(FRAC_PI_2).to_bits());
        let dp = p.derivative();
        let df = f.derivative().unwrap();
        assert_eq!(df.eval(FRAC_PI_2).to_bits(), dp.eval(FRAC_PI_2).to_bits());
        let erased_dp = ScalarFunction::new(dp.clone()).unwrap();
        assert_eq!(erased_dp.eval(1.3).to_bits(), df.eval(1.3).to_bits());
    }

    #[test]
    fn derivative_is_stable_across_calls() {
        let f = ScalarFunction::new(p123()).unwrap();
        let a = f.derivative().unwrap();
        let b = f.derivative().unwrap();
        assert_eq!(a.eval(0.7).to_bits(), b.eval(0.7).to_bits());
    }

    #[test]
    fn missing_derivative_faults_on_request() {
        let f = ScalarFunction::new(Analytic::new(|x: f64| x.sin())).unwrap();
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(f.derivative().unwrap_err(), Error::DerivativeUnavailable);
    }

    #[test]
    fn empty_handle_has_no_derivative() {
        assert_eq!(
            ScalarFunction::empty().derivative().unwrap_err(),
            Error::EmptyHandle
        );
    }

    #[test]
    fn derivative_signature_follows_traits() {
        let f = ScalarFunction::new(p123()).unwrap();
        let df = f.derivative().unwrap();
        assert_eq!(
            Some(df.signature().range),
            f.traits().map(f.signature()).as_space()
        );
    }

    fn gradient_chain() -> ErasedDifferentiableFunction<[f64; 2], f64> {
        let hessian = Analytic::new(|_: [f64; 2]| Matrix([[2.0, 0.0], [0.0, 2.0]]));
        let gradient =
            Analytic::with_derivative(|x: [f64; 2]| Covector([2.0 * x[0], 2.0 * x[1]]), hessian);
        let f = Analytic::with_derivative(|x: [f64; 2]| x[0] * x[0] + x[1] * x[1], gradient);
        ErasedDifferentiableFunction::new(f).unwrap()
    }

    #[test]
    fn vector_domain_derivatives_reach_the_hessian() {
        let f = gradient_chain();
        assert_eq!(f.eval([1.0, 2.0]), 5.0);
        let g = f.derivative().unwrap();
        assert_eq!(g.eval([1.0, 2.0]), Covector([2.0, 4.0]));
        let h = g.derivative().unwrap();
        assert_eq!(h.eval([0.0, 0.0]).0, [[2.0, 0.0], [0.0, 2.0]]);
        let err = h.derivative().unwrap_err();
        assert!(matches!(err, Error::InvalidDerivativeRange { .. }), "{err}");
        assert_eq!(h.derivative_range(), DerivativeRangeKind::Invalid);
    }

    #[test]
    fn invalid_range_type_is_uninhabited() {
        let _: Option<ErasedDifferentiableFunction<[f64; 2], Invalid>> = None;
    }

    #[test]
    fn clone_keeps_derivative() {
        let f = ScalarFunction::new(p123()).unwrap();
        let g = f.clone();
        drop(f);
        assert_eq!(g.derivative().unwrap().eval(1.0), 8.0);
    }
}
