use std::fmt;

use crate::concepts::{convert, GridViewFunction, LocalFunction, Signature, Space, Value};
use crate::erasure::storage::Slot;
use crate::erasure::{check_range, DEFAULT_BUFFER_SIZE};
use crate::error::{Error, Result};
use crate::grid::{Element, GridView};
use crate::traits::{
    local_forwarding_policy, DefaultDerivativeTraits, DerivativeRangeKind, DerivativeTraits,
    DerivativeTraitsPolicy,
};

type DerivedGrid<R, T, const CAP: usize> =
    ErasedGridViewFunction<<T as DerivativeTraits>::Range<f64, R>, T, CAP>;
type DerivedLocal<R, T, const CAP: usize> =
    ErasedLocalFunction<<T as DerivativeTraits>::Range<f64, R>, T, CAP>;

/// Polymorphic grid-view function with range `R`.
///
/// `T` is the derivative traits of the global signature `f64 -> R`; the
/// local functions it hands out forward their derivative range to it.
pub struct ErasedGridViewFunction<
    R: Space,
    T: DerivativeTraits = DefaultDerivativeTraits,
    const CAP: usize = DEFAULT_BUFFER_SIZE,
> {
    slot: Slot<CAP>,
    grid_view: GridView,
    evaluate: unsafe fn(*const u8, f64) -> Result<R>,
    local: unsafe fn(*const u8) -> Result<ErasedLocalFunction<R, T, CAP>>,
    derive: unsafe fn(*const u8) -> Result<DerivedGrid<R, T, CAP>>,
}

/// Polymorphic local function with range `R`, the restriction of an
/// [`ErasedGridViewFunction`] with the same parameters.
pub struct ErasedLocalFunction<
    R: Space,
    T: DerivativeTraits = DefaultDerivativeTraits,
    const CAP: usize = DEFAULT_BUFFER_SIZE,
> {
    slot: Slot<CAP>,
    bind: unsafe fn(*mut u8, &Element) -> Result<()>,
    unbind: unsafe fn(*mut u8),
    bound_element: unsafe fn(*const u8) -> Option<*const Element>,
    evaluate: unsafe fn(*const u8, f64) -> Result<R>,
    derive: unsafe fn(*const u8) -> Result<DerivedLocal<R, T, CAP>>,
}

unsafe fn grid_evaluate<G: GridViewFunction, R: Space>(object: *const u8, x: f64) -> Result<R> {
    (*object.cast::<G>()).evaluate(x).map(convert)
}

unsafe fn grid_local<G, R, T, const CAP: usize>(
    object: *const u8,
) -> Result<ErasedLocalFunction<R, T, CAP>>
where
    G: GridViewFunction,
    R: Space,
    T: DerivativeTraits,
{
    ErasedLocalFunction::new((*object.cast::<G>()).local_function())
}

unsafe fn grid_derive<G, R, T, const CAP: usize>(
    object: *const u8,
) -> Result<DerivedGrid<R, T, CAP>>
where
    G: GridViewFunction,
    R: Space,
    T: DerivativeTraits,
{
    ErasedGridViewFunction::new((*object.cast::<G>()).derivative()?)
}

unsafe fn local_bind<L: LocalFunction>(object: *mut u8, element: &Element) -> Result<()> {
    (*object.cast::<L>()).bind(element)
}

unsafe fn local_unbind<L: LocalFunction>(object: *mut u8) {
    (*object.cast::<L>()).unbind()
}

unsafe fn local_bound_element<L: LocalFunction>(object: *const u8) -> Option<*const Element> {
    (*object.cast::<L>())
        .bound_element()
        .map(|e| e as *const Element)
}

unsafe fn local_evaluate<L: LocalFunction, R: Space>(object: *const u8, xhat: f64) -> Result<R> {
    (*object.cast::<L>()).evaluate(xhat).map(convert)
}

unsafe fn local_derive<L, R, T, const CAP: usize>(
    object: *const u8,
) -> Result<DerivedLocal<R, T, CAP>>
where
    L: LocalFunction,
    R: Space,
    T: DerivativeTraits,
{
    ErasedLocalFunction::new((*object.cast::<L>()).derivative()?)
}

fn derivative_range<R: Space, T: DerivativeTraits>() -> DerivativeRangeKind {
    <T::Range<f64, R> as Value>::KIND.into()
}

fn invalid_derivative<R: Space>(traits: &DerivativeTraitsPolicy) -> Error {
    Error::InvalidDerivativeRange {
        signature: Signature::of::<f64, R>().expect("handle range is a space"),
        traits: traits.name().to_owned(),
    }
}

impl<R: Space, T: DerivativeTraits, const CAP: usize> ErasedGridViewFunction<R, T, CAP> {
    /// Wraps `f`. Fails if `f`'s range does not convert to `R`.
    ///
    /// ```
    /// use fnspace::concepts::{GridViewFunction, LocalFunction};
    /// use fnspace::grid::make_uniform_grid;
    /// use fnspace::gridfn::{lift_with_derivative, ErasedGridViewFunction};
    ///
    /// let gv = make_uniform_grid(2)?;
    /// let f = lift_with_derivative(|x: f64| x * x, |x: f64| 2.0 * x, gv);
    /// let erased = ErasedGridViewFunction::<f64>::new(f)?;
    /// let mut local = erased.local_function();
    /// local.bind(&gv.element(1)?)?;
    /// assert_eq!(local.evaluate(0.5)?, 0.5625);
    /// # Ok::<(), fnspace::Error>(())
    /// ```
    pub fn new<G: GridViewFunction>(f: G) -> Result<Self> {
        check_range::<G::Range, R>()?;
        // The local function inherits the range, so its check cannot fail later.
        Ok(ErasedGridViewFunction {
            grid_view: *f.grid_view(),
            slot: Slot::new(f),
            evaluate: grid_evaluate::<G, R>,
            local: grid_local::<G, R, T, CAP>,
            derive: grid_derive::<G, R, T, CAP>,
        })
    }

    pub fn is_inline(&self) -> bool {
        self.slot.is_inline()
    }

    pub fn footprint(&self) -> usize {
        self.slot.footprint()
    }

    pub fn target_type_name(&self) -> &'static str {
        self.slot.type_name()
    }

    pub fn traits(&self) -> DerivativeTraitsPolicy {
        T::policy()
    }

    pub fn derivative_range(&self) -> DerivativeRangeKind {
        derivative_range::<R, T>()
    }
}

impl<R: Space, T: DerivativeTraits, const CAP: usize> GridViewFunction
    for ErasedGridViewFunction<R, T, CAP>
{
    type Range = R;
    type Derivative = DerivedGrid<R, T, CAP>;
    type Local = ErasedLocalFunction<R, T, CAP>;

    fn grid_view(&self) -> &GridView {
        &self.grid_view
    }

    fn evaluate(&self, x: f64) -> Result<R> {
        // SAFETY: every thunk was instantiated for the type stored in `slot`.
        unsafe { (self.evaluate)(self.slot.as_ptr(), x) }
    }

    fn local_function(&self) -> ErasedLocalFunction<R, T, CAP> {
        // SAFETY: as above.
        unsafe { (self.local)(self.slot.as_ptr()) }.expect("local range checked at construction")
    }

    fn derivative(&self) -> Result<Self::Derivative> {
        if self.derivative_range() == DerivativeRangeKind::Invalid {
            return Err(invalid_derivative::<R>(&T::policy()));
        }
        // SAFETY: as above.
        unsafe { (self.derive)(self.slot.as_ptr()) }
    }
}

impl<R: Space, T: DerivativeTraits, const CAP: usize> ErasedLocalFunction<R, T, CAP> {
    /// Wraps `f`, bound or not. Fails if `f`'s range does not convert to `R`.
    pub fn new<L: LocalFunction>(f: L) -> Result<Self> {
        check_range::<L::Range, R>()?;
        Ok(ErasedLocalFunction {
            slot: Slot::new(f),
            bind: local_bind::<L>,
            unbind: local_unbind::<L>,
            bound_element: local_bound_element::<L>,
            evaluate: local_evaluate::<L, R>,
            derive: local_derive::<L, R, T, CAP>,
        })
    }

    pub fn is_inline(&self) -> bool {
        self.slot.is_inline()
    }

    pub fn footprint(&self) -> usize {
        self.slot.footprint()
    }

    pub fn target_type_name(&self) -> &'static str {
        self.slot.type_name()
    }

    /// Forwards every local signature to the derivative range of the global
    /// signature `f64 -> R` under `T`.
    pub fn traits(&self) -> DerivativeTraitsPolicy {
        let global = Signature::of::<f64, R>().expect("handle range is a space");
        local_forwarding_policy(global, &T::policy())
    }

    pub fn derivative_range(&self) -> DerivativeRangeKind {
        derivative_range::<R, T>()
    }
}

impl<R: Space, T: DerivativeTraits, const CAP: usize> LocalFunction
    for ErasedLocalFunction<R, T, CAP>
{
    type Range = R;
    type Derivative = DerivedLocal<R, T, CAP>;

    fn bind(&mut self, element: &Element) -> Result<()> {
        // SAFETY: every thunk was instantiated for the type stored in `slot`.
        unsafe { (self.bind)(self.slot.as_mut_ptr(), element) }
    }

    fn unbind(&mut self) {
        // SAFETY: as above.
        unsafe { (self.unbind)(self.slot.as_mut_ptr()) }
    }

    fn bound_element(&self) -> Option<&Element> {
        // SAFETY: as above; the element lives inside the stored object, borrowed through `self`.
        unsafe { (self.bound_element)(self.slot.as_ptr()).map(|e| &*e) }
    }

    fn evaluate(&self, local: f64) -> Result<R> {
        // SAFETY: as above.
        unsafe { (self.evaluate)(self.slot.as_ptr(), local) }
    }

    fn derivative(&self) -> Result<Self::Derivative> {
        if self.derivative_range() == DerivativeRangeKind::Invalid {
            return Err(invalid_derivative::<R>(&self.traits()));
        }
        // SAFETY: as above.
        unsafe { (self.derive)(self.slot.as_ptr()) }
    }
}

impl<R: Space, T: DerivativeTraits, const CAP: usize> Clone for ErasedGridViewFunction<R, T, CAP> {
    fn clone(&self) -> Self {
        ErasedGridViewFunction {
            slot: self.slot.clone(),
            grid_view: self.grid_view,
            evaluate: self.evaluate,
            local: self.local,
            derive: self.derive,
        }
    }
}

impl<R: Space, T: DerivativeTraits, const CAP: usize> Clone for ErasedLocalFunction<R, T, CAP> {
    fn clone(&self) -> Self {
        ErasedLocalFunction {
            slot: self.slot.clone(),
            bind: self.bind,
            unbind: self.unbind,
            bound_element: self.bound_element,
            evaluate: self.evaluate,
            derive: self.derive,
        }
    }
}

impl<R: Space, T: DerivativeTraits, const CAP: usize> fmt::Debug
    for ErasedGridViewFunction<R, T, CAP>
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ErasedGridViewFunction")
            .field("target", &self.target_type_name())
            .field("grid_view", &self.grid_view)
            .field("inline", &self.is_inline())
            .finish()
    }
}

impl<R: Space, T: DerivativeTraits, const CAP: usize> fmt::Debug
    for ErasedLocalFunction<R, T, CAP>
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ErasedLocalFunction")
            .field("target", &self.target_type_name())
            .field("bound", &self.bound_element())
            .field("inline", &self.is_inline())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::SpaceKind;
    use crate::grid::make_uniform_grid;
    use crate::gridfn::{lift_with_derivative, p1_interpolate};

    #[test]
    fn erased_workflow_matches_unerased() {
        let gv = make_uniform_grid(4).unwrap();
        let f = lift_with_derivative(|x: f64| x.exp(), |x: f64| x.exp(), gv);
        let erased = ErasedGridViewFunction::<f64>::new(f.clone()).unwrap();
        assert!(erased.is_inline());
        let mut a = f.local_function();
        let mut b = erased.local_function();
        for e in gv.elements() {
            a.bind(&e).unwrap();
            b.bind(&e).unwrap();
            assert_eq!(b.bound_element(), Some(&e));
            for xhat in [0.0, 0.1, 0.5, 0.9, 1.0] {
                assert_eq!(
                    a.evaluate(xhat).unwrap().to_bits(),
                    b.evaluate(xhat).unwrap().to_bits()
                );
                let da = a.derivative().unwrap().evaluate(xhat).unwrap();
                let db = b.derivative().unwrap().evaluate(xhat).unwrap();
                assert_eq!(da.to_bits(), db.to_bits());
            }
        }
        assert_eq!(
            erased.evaluate(0.3).unwrap().to_bits(),
            f.evaluate(0.3).unwrap().to_bits()
        );
    }

    #[test]
    fn erased_p1_and_derivatives() {
        let gv = make_uniform_grid(2).unwrap();
        let f =
            ErasedGridViewFunction::<f64>::new(p1_interpolate(gv, vec![0.0, 1.0, 0.0]).unwrap())
                .unwrap();
        let df = f.derivative().unwrap();
        assert_eq!(df.evaluate(0.25).unwrap(), 2.0);
        assert_eq!(df.derivative().unwrap_err(), Error::DerivativeUnavailable);
        let mut local = f.local_function();
        local.bind(&gv.element(1).unwrap()).unwrap();
        assert_eq!(local.derivative().unwrap().evaluate(0.0).unwrap(), -2.0);
        local.unbind();
        assert_eq!(
            local.evaluate(0.0).unwrap_err(),
            Error::UnboundLocalFunction
        );
    }

    #[test]
    fn local_traits_forward_to_global() {
        let gv = make_uniform_grid(1).unwrap();
        let f = lift_with_derivative(|x: f64| [x, x], |_: f64| [1.0, 1.0], gv);
        let erased = ErasedGridViewFunction::<[f64; 2]>::new(f).unwrap();
        let local = erased.local_function();
        let policy = local.traits();
        assert!(policy.name().contains("forwarding"));
        let global = Signature::new(SpaceKind::Scalar, SpaceKind::Vector(2));
        assert_eq!(policy.map(Signature::scalar()), erased.traits().map(global));
        assert_eq!(local.derivative_range(), DerivativeRangeKind::Vector(2));
    }

    #[test]
    fn clones_keep_binding() {
        let gv = make_uniform_grid(3).unwrap();
        let f = ErasedGridViewFunction::<f64>::new(
            p1_interpolate(gv, vec![0.0, 1.0, 2.0, 3.0]).unwrap(),
        )
        .unwrap();
        let mut local = f.local_function();
        local.bind(&gv.element(2).unwrap()).unwrap();
        let copy = local.clone();
        local.bind(&gv.element(0).unwrap()).unwrap();
        assert_eq!(copy.bound_element().map(Element::index), Some(2));
        assert_eq!(copy.evaluate(1.0).unwrap(), 3.0);
    }

    #[test]
    fn range_mismatch_is_rejected() {
        let gv = make_uniform_grid(1).unwrap();
        let f = lift_with_derivative(|x: f64| [x, x], |_: f64| [1.0, 1.0], gv);
        assert!(ErasedGridViewFunction::<f64>::new(f).is_err());
    }
}
