//! Compile-time capability probes backing [`describe!`](crate::describe).
//!
//! Each probe has a specific impl on `Probe` (chosen when the candidate
//! implements the concept trait) and a fallback impl on `&Probe`. Method
//! resolution on a `&Probe` receiver tries the specific impl first.

use std::marker::PhantomData;

use super::{
    DifferentiableFunction, Function, GridShape, GridViewFunction, LocalFunction, LocalShape,
    Value, ValueKind,
};

pub struct Probe<'a, T: ?Sized, D>(&'a T, PhantomData<fn(D)>);

impl<'a, T: ?Sized, D> Probe<'a, T, D> {
    pub fn new(candidate: &'a T) -> Self {
        Probe(candidate, PhantomData)
    }

    pub fn type_name(&self) -> &'static str {
        std::any::type_name::<T>()
    }
}

pub trait ProbeCall {
    fn probe_call(&self) -> bool;
}

impl<T: Function<D> + ?Sized, D> ProbeCall for Probe<'_, T, D> {
    fn probe_call(&self) -> bool {
        true
    }
}

pub trait FallbackCall {
    fn probe_call(&self) -> bool {
        false
    }
}

impl<T: ?Sized, D> FallbackCall for &Probe<'_, T, D> {}

pub trait ProbeRange {
    fn probe_range(&self) -> Option<ValueKind>;
}

impl<T, D> ProbeRange for Probe<'_, T, D>
where
    T: Function<D> + ?Sized,
    T::Range: Value,
{
    fn probe_range(&self) -> Option<ValueKind> {
        Some(<T::Range as Value>::KIND)
    }
}

pub trait FallbackRange {
    fn probe_range(&self) -> Option<ValueKind> {
        None
    }
}

impl<T: ?Sized, D> FallbackRange for &Probe<'_, T, D> {}

pub trait ProbeDerivative {
    fn probe_derivative(&self) -> Option<ValueKind>;
}

impl<T, D> ProbeDerivative for Probe<'_, T, D>
where
    T: DifferentiableFunction<D>,
    <T::Derivative as Function<D>>::Range: Value,
{
    fn probe_derivative(&self) -> Option<ValueKind> {
        Some(<<T::Derivative as Function<D>>::Range as Value>::KIND)
    }
}

pub trait FallbackDerivative {
    fn probe_derivative(&self) -> Option<ValueKind> {
        None
    }
}

impl<T: ?Sized, D> FallbackDerivative for &Probe<'_, T, D> {}

pub trait ProbeLocal {
    fn probe_local(&self) -> Option<LocalShape>;
}

impl<T: LocalFunction, D> ProbeLocal for Probe<'_, T, D> {
    fn probe_local(&self) -> Option<LocalShape> {
        Some(LocalShape::of::<T>())
    }
}

pub trait FallbackLocal {
    fn probe_local(&self) -> Option<LocalShape> {
        None
    }
}

impl<T: ?Sized, D> FallbackLocal for &Probe<'_, T, D> {}

pub trait ProbeGrid {
    fn probe_grid(&self) -> Option<GridShape>;
}

impl<T: GridViewFunction, D> ProbeGrid for Probe<'_, T, D> {
    fn probe_grid(&self) -> Option<GridShape> {
        Some(GridShape {
            range: <T::Range as Value>::KIND,
            derivative_range: <<T::Derivative as GridViewFunction>::Range as Value>::KIND,
            num_elements: self.0.grid_view().num_elements(),
            local: LocalShape::of::<T::Local>(),
        })
    }
}

pub trait FallbackGrid {
    fn probe_grid(&self) -> Option<GridShape> {
        None
    }
}

impl<T: ?Sized, D> FallbackGrid for &Probe<'_, T, D> {}

/// Describes the concept-relevant capabilities of any value.
///
/// The optional second argument is the domain type probed for invocation
/// (default `f64`).
///
/// ```
/// use fnspace::concepts::{check_function, Signature};
///
/// let square = |x: f64| x * x;
/// assert!(check_function(&fnspace::describe!(square), Signature::scalar()).models());
/// assert!(!check_function(&fnspace::describe!(1), Signature::scalar()).models());
/// ```
#[macro_export]
macro_rules! describe {
    ($candidate:expr) => {
        $crate::describe!($candidate, f64)
    };
    ($candidate:expr, $domain:ty) => {{
        #[allow(unused_imports)]
        use $crate::concepts::probe::{
            FallbackCall as _, FallbackDerivative as _, FallbackGrid as _, FallbackLocal as _,
            FallbackRange as _, ProbeCall as _, ProbeDerivative as _, ProbeGrid as _,
            ProbeLocal as _, ProbeRange as _,
        };
        // A match keeps temporaries in the candidate expression alive.
        match &$candidate {
            candidate => {
                let probe = $crate::concepts::probe::Probe::<_, $domain>::new(candidate);
                $crate::concepts::Descriptor {
                    type_name: probe.type_name(),
                    domain: <$domain as $crate::concepts::Value>::KIND,
                    invocation: if (&probe).probe_call() {
                        $crate::concepts::Invocation::Callable((&probe).probe_range())
                    } else {
                        $crate::concepts::Invocation::NotCallable
                    },
                    derivative: (&probe).probe_derivative(),
                    local: (&probe).probe_local(),
                    grid: (&probe).probe_grid(),
                }
            }
        }
    }};
}
