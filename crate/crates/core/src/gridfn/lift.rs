use crate::analytic::{Analytic, NoDerivative};
use crate::concepts::{DifferentiableFunction, Function, GridViewFunction, LocalFunction};
use crate::error::{Error, Result};
use crate::grid::{global_from_local, Element, GridView};

/// An analytic function on `[0, 1]` viewed as a grid function.
#[derive(Debug, Clone)]
pub struct AnalyticGridFunction<F> {
    f: F,
    grid_view: GridView,
}

/// Restriction of an [`AnalyticGridFunction`] to one element.
#[derive(Debug, Clone)]
pub struct AnalyticLocalFunction<F> {
    f: F,
    grid_view: GridView,
    element: Option<Element>,
}

pub fn lift<F>(f: F, grid_view: GridView) -> AnalyticGridFunction<F>
where
    F: DifferentiableFunction<f64> + Clone + Send + Sync + 'static,
{
    AnalyticGridFunction { f, grid_view }
}

/// Lifts a callable without a derivative; [`GridViewFunction::derivative`] fails on the result.
pub fn lift_fn<F, R>(
    f: F,
    grid_view: GridView,
) -> AnalyticGridFunction<Analytic<F, NoDerivative<R>>>
where
    F: Function<f64, Range = R> + Clone + Send + Sync + 'static,
    R: crate::concepts::Value,
{
    lift(Analytic::new(f), grid_view)
}

#[allow(clippy::type_complexity)]
pub fn lift_with_derivative<F, DF>(
    f: F,
    df: DF,
    grid_view: GridView,
) -> AnalyticGridFunction<Analytic<F, Analytic<DF, NoDerivative<DF::Range>>>>
where
    F: Function<f64, Range: crate::concepts::Value> + Clone + Send + Sync + 'static,
    DF: Function<f64, Range: crate::concepts::Value> + Clone + Send + Sync + 'static,
{
    lift(Analytic::with_derivative(f, Analytic::new(df)), grid_view)
}

impl<F> AnalyticGridFunction<F> {
    pub fn function(&self) -> &F {
        &self.f
    }
}

impl<F> GridViewFunction for AnalyticGridFunction<F>
where
    F: DifferentiableFunction<f64> + Clone + Send + Sync + 'static,
{
    type Range = F::Range;
    type Derivative = AnalyticGridFunction<F::Derivative>;
    type Local = AnalyticLocalFunction<F>;

    fn grid_view(&self) -> &GridView {
        &self.grid_view
    }

    fn evaluate(&self, x: f64) -> Result<F::Range> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::PointOutsideGrid(x));
        }
        Ok(self.f.eval(x))
    }

    fn local_function(&self) -> AnalyticLocalFunction<F> {
        AnalyticLocalFunction {
            f: self.f.clone(),
            grid_view: self.grid_view,
            element: None,
        }
    }

    fn derivative(&self) -> Result<Self::Derivative> {
        Ok(AnalyticGridFunction {
            f: self.f.derivative()?,
            grid_view: self.grid_view,
        })
    }
}

impl<F> LocalFunction for AnalyticLocalFunction<F>
where
    F: DifferentiableFunction<f64> + Clone + Send + Sync + 'static,
{
    type Range = F::Range;
    type Derivative = AnalyticLocalFunction<F::Derivative>;

    fn bind(&mut self, element: &Element) -> Result<()> {
        if !self.grid_view.contains(element) {
            return Err(Error::ForeignElement);
        }
        self.element = Some(*element);
        Ok(())
    }

    fn unbind(&mut self) {
        self.element = None;
    }

    fn bound_element(&self) -> Option<&Element> {
        self.element.as_ref()
    }

    fn evaluate(&self, local: f64) -> Result<F::Range> {
        let element = self.element.as_ref().ok_or(Error::UnboundLocalFunction)?;
        Ok(self.f.eval(global_from_local(element, local)?))
    }

    /// `(Df) ∘ Φ_e`, bound to the same element.
    fn derivative(&self) -> Result<Self::Derivative> {
        Ok(AnalyticLocalFunction {
            f: self.f.derivative()?,
            grid_view: self.grid_view,
            element: self.element,
        })
    }
}
