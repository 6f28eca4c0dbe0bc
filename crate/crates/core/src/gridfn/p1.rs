use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use crate::concepts::{GridViewFunction, LocalFunction};
use crate::error::{Error, Result};
use crate::grid::{Element, GridView};

/// Read access to a vector of nodal values.
pub trait Coefficients: Send + Sync + 'static {
    fn len(&self) -> usize;

    fn get(&self, index: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Coefficients for Vec<f64> {
    fn len(&self) -> usize {
        self.as_slice().len()
    }

    fn get(&self, index: usize) -> f64 {
        self[index]
    }
}

impl<const N: usize> Coefficients for [f64; N] {
    fn len(&self) -> usize {
        N
    }

    fn get(&self, index: usize) -> f64 {
        self[index]
    }
}

/// Nodal values that count every read.
#[derive(Debug, Default)]
pub struct CountingCoefficients {
    values: Vec<f64>,
    reads: AtomicUsize,
}

impl CountingCoefficients {
    pub fn new(values: Vec<f64>) -> Self {
        CountingCoefficients {
            values,
            reads: AtomicUsize::new(0),
        }
    }

    pub fn reads(&self) -> usize {
        self.reads.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.reads.store(0, Ordering::Relaxed);
    }
}

impl Coefficients for CountingCoefficients {
    fn len(&self) -> usize {
        self.values.len()
    }

    fn get(&self, index: usize) -> f64 {
        self.reads.fetch_add(1, Ordering::Relaxed);
        self.values[index]
    }
}

/// Continuous piecewise linear function with value `nodal[k]` at vertex `k/M`.
#[derive(Debug)]
pub struct P1Function<C> {
    grid_view: GridView,
    coefficients: Arc<C>,
}

/// Element-wise slope of a [`P1Function`], in global coordinates.
#[derive(Debug)]
pub struct P1Derivative<C> {
    grid_view: GridView,
    coefficients: Arc<C>,
}

/// A [`P1Function`] on one element. Binding caches the element's two nodal values.
#[derive(Debug)]
pub struct P1Local<C> {
    grid_view: GridView,
    coefficients: Arc<C>,
    bound: Option<(Element, [f64; 2])>,
}

/// A [`P1Derivative`] on one element. Binding caches the element's slope.
#[derive(Debug)]
pub struct P1DerivativeLocal<C> {
    grid_view: GridView,
    coefficients: Arc<C>,
    bound: Option<(Element, f64)>,
}

macro_rules! shared_clone {
    ($($t:ident { $($field:ident),* }),*) => {$(
        impl<C> Clone for $t<C> {
            fn clone(&self) -> Self {
                $t { coefficients: Arc::clone(&self.coefficients), $($field: self.$field.clone()),* }
            }
        }
    )*};
}

shared_clone!(
    P1Function { grid_view },
    P1Derivative { grid_view },
    P1Local { grid_view, bound },
    P1DerivativeLocal { grid_view, bound }
);

/// Interpolates `nodal` (one value per vertex, `M + 1` in total) on `grid_view`.
///
/// ```
/// use fnspace::concepts::GridViewFunction;
/// use fnspace::grid::make_uniform_grid;
/// use fnspace::gridfn::p1_interpolate;
///
/// let f = p1_interpolate(make_uniform_grid(2)?, vec![0.0, 1.0, 0.0])?;
/// assert_eq!(f.evaluate(0.25)?, 0.5);
/// assert_eq!(f.derivative()?.evaluate(0.75)?, -2.0);
/// # Ok::<(), fnspace::Error>(())
/// ```
pub fn p1_interpolate<C: Coefficients>(grid_view: GridView, nodal: C) -> Result<P1Function<C>> {
    P1Function::new(grid_view, Arc::new(nodal))
}

impl<C: Coefficients> P1Function<C> {
    pub fn new(grid_view: GridView, coefficients: Arc<C>) -> Result<Self> {
        let expected = grid_view.num_vertices();
        if coefficients.len() != expected {
            return Err(Error::NodalCount {
                expected,
                found: coefficients.len(),
            });
        }
        Ok(P1Function {
            grid_view,
            coefficients,
        })
    }

    pub fn coefficients(&self) -> &Arc<C> {
        &self.coefficients
    }
}

fn check_element(grid_view: &GridView, element: &Element) -> Result<()> {
    if grid_view.contains(element) {
        Ok(())
    } else {
        Err(Error::ForeignElement)
    }
}

fn check_local(local: f64) -> Result<()> {
    if (0.0..=1.0).contains(&local) {
        Ok(())
    } else {
        Err(Error::LocalCoordinateOutOfRange(local))
    }
}

fn nodal_pair<C: Coefficients>(c: &C, element: &Element) -> [f64; 2] {
    [c.get(element.index()), c.get(element.index() + 1)]
}

fn interpolate([v0, v1]: [f64; 2], xhat: f64) -> f64 {
    (1.0 - xhat) * v0 + xhat * v1
}

fn slope([v0, v1]: [f64; 2], element: &Element) -> f64 {
    (v1 - v0) / element.width()
}

impl<C: Coefficients> GridViewFunction for P1Function<C> {
    type Range = f64;
    type Derivative = P1Derivative<C>;
    type Local = P1Local<C>;

    fn grid_view(&self) -> &GridView {
        &self.grid_view
    }

    fn evaluate(&self, x: f64) -> Result<f64> {
        let (element, xhat) = self.grid_view.locate(x)?;
        Ok(interpolate(nodal_pair(&*self.coefficients, &element), xhat))
    }

    fn local_function(&self) -> P1Local<C> {
        P1Local {
            grid_view: self.grid_view,
            coefficients: Arc::clone(&self.coefficients),
            bound: None,
        }
    }

    fn derivative(&self) -> Result<P1Derivative<C>> {
        Ok(P1Derivative {
            grid_view: self.grid_view,
            coefficients: Arc::clone(&self.coefficients),
        })
    }
}

impl<C: Coefficients> LocalFunction for P1Local<C> {
    type Range = f64;
    type Derivative = P1DerivativeLocal<C>;

    fn bind(&mut self, element: &Element) -> Result<()> {
        check_element(&self.grid_view, element)?;
        self.bound = Some((*element, nodal_pair(&*self.coefficients, element)));
        Ok(())
    }

    fn unbind(&mut self) {
        self.bound = None;
    }

    fn bound_element(&self) -> Option<&Element> {
        self.bound.as_ref().map(|(e, _)| e)
    }

    /// Uses only the values cached by [`bind`](LocalFunction::bind).
    fn evaluate(&self, local: f64) -> Result<f64> {
        let (_, nodal) = self.bound.as_ref().ok_or(Error::UnboundLocalFunction)?;
        check_local(local)?;
        Ok(interpolate(*nodal, local))
    }

    fn derivative(&self) -> Result<P1DerivativeLocal<C>> {
        let bound = self.bound.map(|(e, nodal)| (e, slope(nodal, &e)));
        Ok(P1DerivativeLocal {
            grid_view: self.grid_view,
            coefficients: Arc::clone(&self.coefficients),
            bound,
        })
    }
}

/// The slope is discontinuous at vertices; an interior vertex takes the
/// slope of the element on its right.
impl<C: Coefficients> GridViewFunction for P1Derivative<C> {
    type Range = f64;
    type Derivative = P1Derivative<C>;
    type Local = P1DerivativeLocal<C>;

    fn grid_view(&self) -> &GridView {
        &self.grid_view
    }

    fn evaluate(&self, x: f64) -> Result<f64> {
        let (element, _) = self.grid_view.locate(x)?;
        Ok(slope(nodal_pair(&*self.coefficients, &element), &element))
    }

    fn local_function(&self) -> P1DerivativeLocal<C> {
        P1DerivativeLocal {
            grid_view: self.grid_view,
            coefficients: Arc::clone(&self.coefficients),
            bound: None,
        }
    }

    /// Second derivatives of piecewise linear functions are not provided.
    fn derivative(&self) -> Result<P1Derivative<C>> {
        Err(Error::DerivativeUnavailable)
    }
}

impl<C: Coefficients> LocalFunction for P1DerivativeLocal<C> {
    type Range = f64;
    type Derivative = P1DerivativeLocal<C>;

    fn bind(&mut self, element: &Element) -> Result<()> {
        check_element(&self.grid_view, element)?;
        self.bound = Some((
            *element,
            slope(nodal_pair(&*self.coefficients, element), element),
        ));
        Ok(())
    }

    fn unbind(&mut self) {
        self.bound = None;
    }

    fn bound_element(&self) -> Option<&Element> {
        self.bound.as_ref().map(|(e, _)| e)
    }

    fn evaluate(&self, local: f64) -> Result<f64> {
        let (_, slope) = self.bound.as_ref().ok_or(Error::UnboundLocalFunction)?;
        check_local(local)?;
        Ok(*slope)
    }

    fn derivative(&self) -> Result<P1DerivativeLocal<C>> {
        Err(Error::DerivativeUnavailable)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_uniform_grid;

    #[test]
    fn nodal_count_is_checked() {
        let gv = make_uniform_grid(2).unwrap();
        let err = p1_interpolate(gv, vec![0.0, 1.0]).unwrap_err();
        assert_eq!(
            err,
            Error::NodalCount {
                expected: 3,
                found: 2
            }
        );
    }

    #[test]
    fn interpolates_the_identity() {
        let f = p1_interpolate(make_uniform_grid(2).unwrap(), vec![0.0, 0.5, 1.0]).unwrap();
        for k in 0..=20 {
            let x = k as f64 / 20.0;
            assert!((f.evaluate(x).unwrap() - x).abs() <= 1e-15);
        }
    }

    #[test]
    fn midpoint_and_constants() {
        let gv = make_uniform_grid(1).unwrap();
        let mut local = p1_interpolate(gv, [0.0, 1.0]).unwrap().local_function();
        local.bind(&gv.element(0).unwrap()).unwrap();
        assert_eq!(local.evaluate(0.5).unwrap(), 0.5);
        assert_eq!(local.derivative().unwrap().evaluate(0.3).unwrap(), 1.0);

        let gv = make_uniform_grid(2).unwrap();
        let f = p1_interpolate(gv, vec![2.0; 3]).unwrap();
        let mut local = f.local_function();
        for e in gv.elements() {
            local.bind(&e).unwrap();
            for xhat in [0.0, 0.3, 1.0] {
                assert_eq!(local.evaluate(xhat).unwrap(), 2.0);
            }
        }
    }

    #[test]
    fn slopes() {
        let gv = make_uniform_grid(1).unwrap();
        let f = p1_interpolate(gv, vec![1.0, 0.0]).unwrap();
        assert_eq!(f.derivative().unwrap().evaluate(0.4).unwrap(), -1.0);

        let gv = make_uniform_grid(2).unwrap();
        let df = p1_interpolate(gv, vec![0.0, 1.0, 0.0])
            .unwrap()
            .derivative()
            .unwrap();
        let mut local = df.local_function();
        local.bind(&gv.element(0).unwrap()).unwrap();
        assert_eq!(local.evaluate(0.5).unwrap(), 2.0);
        local.bind(&gv.element(1).unwrap()).unwrap();
        assert_eq!(local.evaluate(0.5).unwrap(), -2.0);
        // the shared vertex belongs to the right element
        assert_eq!(df.evaluate(0.5).unwrap(), -2.0);
        assert_eq!(df.derivative().unwrap_err(), Error::DerivativeUnavailable);
    }

    #[test]
    fn evaluation_after_bind_reads_nothing() {
        let gv = make_uniform_grid(4).unwrap();
        let f = p1_interpolate(
            gv,
            CountingCoefficients::new(vec![0.0, 1.0, 4.0, 9.0, 16.0]),
        )
        .unwrap();
        let mut local = f.local_function();
        local.bind(&gv.element(2).unwrap()).unwrap();
        assert_eq!(f.coefficients().reads(), 2);
        f.coefficients().reset();
        assert_eq!(local.evaluate(0.5).unwrap(), 6.5);
        let dl = local.derivative().unwrap();
        assert_eq!(dl.evaluate(0.1).unwrap(), 20.0);
        assert_eq!(f.coefficients().reads(), 0);
    }

    #[test]
    fn unbound_and_out_of_range() {
        let gv = make_uniform_grid(2).unwrap();
        let f = p1_interpolate(gv, vec![0.0, 1.0, 0.0]).unwrap();
        let mut local = f.local_function();
        assert_eq!(
            local.evaluate(0.0).unwrap_err(),
            Error::UnboundLocalFunction
        );
        assert_eq!(
            local.derivative().unwrap().evaluate(0.0).unwrap_err(),
            Error::UnboundLocalFunction
        );
        local.bind(&gv.element(1).unwrap()).unwrap();
        assert_eq!(
            local.evaluate(-0.5).unwrap_err(),
            Error::LocalCoordinateOutOfRange(-0.5)
        );
    }
}
