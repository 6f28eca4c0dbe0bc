//! Concrete differentiable functions: polynomials, closures with an attached
//! derivative, scalar composition, and the `sin²` fixtures.

use std::convert::Infallible;
use std::fmt;
use std::marker::PhantomData;

use num_traits::Float;

use crate::concepts::{DifferentiableFunction, Function, Value};
use crate::erasure::ScalarFunction;
use crate::error::{Error, Result};

/// `Σ coefficients[i] · x^i`. The empty coefficient list is the zero function.
///
/// ```
/// use fnspace::analytic::Polynomial;
///
/// let p = Polynomial::new(vec![1.0, 2.0, 3.0]);
/// assert_eq!(p.eval(1.0), 6.0);
/// assert_eq!(p.derivative().coefficients(), &[2.0, 6.0]);
/// ```
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial<K = f64> {
    coefficients: Vec<K>,
}

impl<K: Float> Polynomial<K> {
    pub fn new(coefficients: Vec<K>) -> Self {
        Polynomial { coefficients }
    }

    pub fn zero() -> Self {
        Polynomial {
            coefficients: Vec::new(),
        }
    }

    pub fn coefficients(&self) -> &[K] {
        &self.coefficients
    }

    /// Length of the coefficient list minus one; `None` for the empty list.
    /// Trailing zero coefficients are counted.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    /// Plain power sum, term by term in ascending order (not Horner).
    pub fn eval(&self, x: K) -> K {
        let mut y = K::zero();
        for (i, &c) in self.coefficients.iter().enumerate() {
            y = y + c * x.powf(index::<K>(i));
        }
        y
    }

    /// `{c₁·1, c₂·2, …}`; constants and the zero polynomial give the zero polynomial.
    pub fn derivative(&self) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * index::<K>(i))
            .collect();
        Polynomial { coefficients }
    }
}

fn index<K: Float>(i: usize) -> K {
    K::from(i).expect("coefficient index representable in the field")
}

impl<K: Float> From<Vec<K>> for Polynomial<K> {
    fn from(coefficients: Vec<K>) -> Self {
        Polynomial::new(coefficients)
    }
}

impl<K: Float> Function<K> for Polynomial<K> {
    type Range = K;

    #[inline]
    fn eval(&self, x: K) -> K {
        Polynomial::eval(self, x)
    }
}

impl<K: Float + Value> DifferentiableFunction<K> for Polynomial<K> {
    type Derivative = Polynomial<K>;

    fn derivative(&self) -> Result<Polynomial<K>> {
        Ok(Polynomial::derivative(self))
    }
}

/// Derivative type of a function that has none. It has no values.
pub struct NoDerivative<R>(Infallible, PhantomData<fn() -> R>);

impl<R> Clone for NoDerivative<R> {
    fn clone(&self) -> Self {
        match self.0 {}
    }
}

impl<R> fmt::Debug for NoDerivative<R> {
    fn fmt(&self, _: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {}
    }
}

impl<D, R: Value> Function<D> for NoDerivative<R> {
    type Range = R;

    fn eval(&self, _: D) -> R {
        match self.0 {}
    }
}

impl<D, R: Value> DifferentiableFunction<D> for NoDerivative<R> {
    type Derivative = Self;

    fn derivative(&self) -> Result<Self> {
        match self.0 {}
    }
}

/// A callable together with an optional derivative.
///
/// Without a derivative the wrapper still implements
/// [`DifferentiableFunction`]; asking for the derivative fails with
/// [`Error::DerivativeUnavailable`].
#[derive(Debug, Clone, Copy)]
pub struct Analytic<F, DF> {
    f: F,
    df: Option<DF>,
}

impl<F, R> Analytic<F, NoDerivative<R>> {
    pub fn new<D>(f: F) -> Self
    where
        F: Function<D, Range = R>,
    {
        Analytic { f, df: None }
    }
}

impl<F, DF> Analytic<F, DF> {
    pub fn with_derivative(f: F, df: DF) -> Self {
        Analytic { f, df: Some(df) }
    }

    pub fn has_derivative(&self) -> bool {
        self.df.is_some()
    }
}

impl<D, F: Function<D>, DF> Function<D> for Analytic<F, DF> {
    type Range = F::Range;

    #[inline]
    fn eval(&self, x: D) -> F::Range {
        self.f.eval(x)
    }
}

impl<D, F, DF> DifferentiableFunction<D> for Analytic<F, DF>
where
    F: Function<D, Range: Value>,
    DF: DifferentiableFunction<D> + Clone + Send + Sync + 'static,
{
    type Derivative = DF;

    fn derivative(&self) -> Result<DF> {
        self.df.clone().ok_or(Error::DerivativeUnavailable)
    }
}

/// `outer ∘ inner` for scalar functions, differentiated by the chain rule.
///
/// ```
/// use fnspace::analytic::{compose, Polynomial};
/// use fnspace::concepts::{DifferentiableFunction, Function};
///
/// let square = Polynomial::new(vec![0.0, 0.0, 1.0]);
/// let shift = Polynomial::new(vec![1.0, 1.0]);
/// let f = compose(square, shift);
/// assert_eq!(f.eval(2.0), 9.0);
/// assert_eq!(f.derivative()?.eval(2.0), 6.0);
/// # Ok::<(), fnspace::Error>(())
/// ```
#[derive(Debug, Clone)]
pub struct Composition<O, I> {
    outer: O,
    inner: I,
}

pub fn compose<O, I>(outer: O, inner: I) -> Composition<O, I>
where
    O: DifferentiableFunction<f64> + Function<f64, Range = f64>,
    I: DifferentiableFunction<f64> + Function<f64, Range = f64>,
{
    Composition { outer, inner }
}

impl<O, I> Function<f64> for Composition<O, I>
where
    O: Function<f64, Range = f64>,
    I: Function<f64, Range = f64>,
{
    type Range = f64;

    #[inline]
    fn eval(&self, x: f64) -> f64 {
        self.outer.eval(self.inner.eval(x))
    }
}

fn erase<F>(f: F) -> Result<ScalarFunction>
where
    F: DifferentiableFunction<f64> + Clone + Send + Sync + 'static,
{
    ScalarFunction::new(f)
}

impl<O, I> DifferentiableFunction<f64> for Composition<O, I>
where
    O: DifferentiableFunction<f64> + Function<f64, Range = f64> + Clone + Send + Sync + 'static,
    I: DifferentiableFunction<f64> + Function<f64, Range = f64> + Clone + Send + Sync + 'static,
{
    type Derivative = ScalarFunction;

    /// `(outer' ∘ inner) · inner'`
    fn derivative(&self) -> Result<ScalarFunction> {
        let outer_prime = Composition {
            outer: erase(self.outer.derivative()?)?,
            inner: erase(self.inner.clone())?,
        };
        erase(Product(
            erase(outer_prime)?,
            erase(self.inner.derivative()?)?,
        ))
    }
}

#[derive(Debug, Clone)]
struct Product(ScalarFunction, ScalarFunction);

impl Function<f64> for Product {
    type Range = f64;

    fn eval(&self, x: f64) -> f64 {
        self.0.eval(x) * self.1.eval(x)
    }
}

impl DifferentiableFunction<f64> for Product {
    type Derivative = ScalarFunction;

    fn derivative(&self) -> Result<ScalarFunction> {
        let left = Product(self.0.derivative()?, self.1.clone());
        let right = Product(self.0.clone(), self.1.derivative()?);
        erase(Sum(erase(left)?, erase(right)?))
    }
}

#[derive(Debug, Clone)]
struct Sum(ScalarFunction, ScalarFunction);

impl Function<f64> for Sum {
    type Range = f64;

    fn eval(&self, x: f64) -> f64 {
        self.0.eval(x) + self.1.eval(x)
    }
}

impl DifferentiableFunction<f64> for Sum {
    type Derivative = ScalarFunction;

    fn derivative(&self) -> Result<ScalarFunction> {
        erase(Sum(self.0.derivative()?, self.1.derivative()?))
    }
}

/// `x ↦ sin(x)²` as a free function.
pub fn sin_squared(x: f64) -> f64 {
    x.sin() * x.sin()
}

/// `x ↦ sin(x)²` as a closure.
pub fn sin_squared_closure() -> impl Fn(f64) -> f64 + Copy + Send + Sync + 'static {
    |x: f64| x.sin() * x.sin()
}

/// `x ↦ sin(x)²` as a function object.
#[derive(Debug, Clone, Copy, Default)]
pub struct SinSquared;

impl Function<f64> for SinSquared {
    type Range = f64;

    #[inline]
    fn eval(&self, x: f64) -> f64 {
        x.sin() * x.sin()
    }
}

/// The `order`-th derivative of `cos`: `cos, -sin, -cos, sin, cos, …`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Cosine {
    pub order: u8,
}

impl Cosine {
    pub const fn new() -> Self {
        Cosine { order: 0 }
    }
}

impl Function<f64> for Cosine {
    type Range = f64;

    fn eval(&self, x: f64) -> f64 {
        match self.order % 4 {
            0 => x.cos(),
            1 => -x.sin(),
            2 => -x.cos(),
            _ => x.sin(),
        }
    }
}

impl DifferentiableFunction<f64> for Cosine {
    type Derivative = Cosine;

    fn derivative(&self) -> Result<Cosine> {
        Ok(Cosine {
            order: (self.order + 1) % 4,
        })
    }
}

/// `x ↦ n · arccos(x)` on `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledArccos {
    pub n: f64,
}

impl Function<f64> for ScaledArccos {
    type Range = f64;

    fn eval(&self, x: f64) -> f64 {
        self.n * x.acos()
    }
}

impl DifferentiableFunction<f64> for ScaledArccos {
    type Derivative = ScaledArccosDerivative;

    fn derivative(&self) -> Result<ScaledArccosDerivative> {
        Ok(ScaledArccosDerivative { n: self.n })
    }
}

/// `x ↦ -n / sqrt(1 - x²)`, singular at `|x| = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledArccosDerivative {
    pub n: f64,
}

impl Function<f64> for ScaledArccosDerivative {
    type Range = f64;

    fn eval(&self, x: f64) -> f64 {
        -self.n / (1.0 - x * x).sqrt()
    }
}

impl DifferentiableFunction<f64> for ScaledArccosDerivative {
    type Derivative = NoDerivative<f64>;

    fn derivative(&self) -> Result<NoDerivative<f64>> {
        Err(Error::DerivativeUnavailable)
    }
}

/// Chebyshev polynomial `T_n(x) = cos(n · arccos(x))` on `[-1, 1]`.
pub fn chebyshev(n: u32) -> Composition<Cosine, ScaledArccos> {
    compose(Cosine::new(), ScaledArccos { n: f64::from(n) })
}
