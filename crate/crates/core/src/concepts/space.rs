//! Shapes of domain and range values.
//!
//! Every value a function handle can consume or produce implements [`Value`],
//! which reports its [`ValueKind`] at compile time. Types that may appear as
//! the domain or range of an erased handle additionally implement [`Space`],
//! which also carries the type-level derivative-range mapping used by
//! [`DefaultDerivativeTraits`](crate::traits::DefaultDerivativeTraits).

use std::any::Any;
use std::fmt;

use num_complex::Complex;

/// Shape of a domain or range space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    Scalar,
    Vector(usize),
    /// Row vector; the derivative range of a vector-to-scalar map.
    Covector(usize),
    /// `rows x cols`
    Matrix(usize, usize),
}

impl SpaceKind {
    /// Number of scalar components a value of this shape stores.
    pub fn components(self) -> usize {
        match self {
            SpaceKind::Scalar => 1,
            SpaceKind::Vector(n) | SpaceKind::Covector(n) => n,
            SpaceKind::Matrix(m, n) => m * n,
        }
    }

    /// All dimensions are at least one.
    pub fn is_valid(self) -> bool {
        match self {
            SpaceKind::Scalar => true,
            SpaceKind::Vector(n) | SpaceKind::Covector(n) => n >= 1,
            SpaceKind::Matrix(m, n) => m >= 1 && n >= 1,
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceKind::Scalar => f.write_str("Scalar"),
            SpaceKind::Vector(n) => write!(f, "Vector({n})"),
            SpaceKind::Covector(n) => write!(f, "Covector({n})"),
            SpaceKind::Matrix(m, n) => write!(f, "Matrix({m}, {n})"),
        }
    }
}

/// Kind of any value a callable may return, including kinds that are not
/// spaces (integers, complex numbers) and the invalid derivative range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueKind {
    Scalar,
    Vector(usize),
    Covector(usize),
    Matrix(usize, usize),
    Integer,
    Complex,
    Invalid,
}

impl ValueKind {
    pub fn as_space(self) -> Option<SpaceKind> {
        match self {
            ValueKind::Scalar => Some(SpaceKind::Scalar),
            ValueKind::Vector(n) => Some(SpaceKind::Vector(n)),
            ValueKind::Covector(n) => Some(SpaceKind::Covector(n)),
            ValueKind::Matrix(m, n) => Some(SpaceKind::Matrix(m, n)),
            ValueKind::Integer | ValueKind::Complex | ValueKind::Invalid => None,
        }
    }

    /// Integer-to-scalar widening and same-shape numeric conversion; nothing else.
    pub fn converts_to(self, target: SpaceKind) -> bool {
        match self {
            ValueKind::Integer => target == SpaceKind::Scalar,
            other => other.as_space() == Some(target),
        }
    }
}

impl From<SpaceKind> for ValueKind {
    fn from(kind: SpaceKind) -> Self {
        match kind {
            SpaceKind::Scalar => ValueKind::Scalar,
            SpaceKind::Vector(n) => ValueKind::Vector(n),
            SpaceKind::Covector(n) => ValueKind::Covector(n),
            SpaceKind::Matrix(m, n) => ValueKind::Matrix(m, n),
        }
    }
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueKind::Integer => f.write_str("Integer"),
            ValueKind::Complex => f.write_str("Complex"),
            ValueKind::Invalid => f.write_str("Invalid"),
            other => other.as_space().expect("space kind").fmt(f),
        }
    }
}

/// Domain and range of a function, `f: D -> R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub domain: SpaceKind,
    pub range: SpaceKind,
}

impl Signature {
    pub const fn new(domain: SpaceKind, range: SpaceKind) -> Self {
        Signature { domain, range }
    }

    pub const fn scalar() -> Self {
        Signature::new(SpaceKind::Scalar, SpaceKind::Scalar)
    }

    /// Signature of `D -> R`, or `None` if either type has no space kind
    /// (only [`Invalid`] lacks one).
    pub fn of<D: Space, R: Space>() -> Option<Self> {
        Some(Signature::new(D::KIND.as_space()?, R::KIND.as_space()?))
    }

    pub fn is_valid(&self) -> bool {
        self.domain.is_valid() && self.range.is_valid()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.domain, self.range)
    }
}

/// A value a function may return.
pub trait Value: Copy + Send + Sync + 'static {
    const KIND: ValueKind;

    /// Scalar component `i`, row-major for matrices.
    fn component(&self, i: usize) -> f64;
}

/// A value type usable as the domain or range of an erased handle.
pub trait Space: Value {
    /// Default derivative range of a scalar-domain map into `Self`.
    type OverScalar: Space;
    /// Default derivative range of a map from `Vector(N)` into `Self`.
    type OverVector<const N: usize>: Space;
    /// Default derivative range of a map from `Self` into `R`.
    type DerivativeRange<R: Space>: Space;

    fn from_components(f: impl FnMut(usize) -> f64) -> Self;
}

/// Converts a returned value into the handle's range type.
///
/// Identical types pass through untouched so erased evaluation stays
/// bitwise identical to direct evaluation.
#[inline(always)]
pub fn convert<S: Value, R: Space>(value: S) -> R {
    match (&value as &dyn Any).downcast_ref::<R>() {
        Some(same) => *same,
        None => R::from_components(|i| value.component(i)),
    }
}

impl Value for f64 {
    const KIND: ValueKind = ValueKind::Scalar;

    #[inline]
    fn component(&self, _: usize) -> f64 {
        *self
    }
}

impl Space for f64 {
    type OverScalar = f64;
    type OverVector<const N: usize> = Covector<N>;
    type DerivativeRange<R: Space> = R::OverScalar;

    #[inline]
    fn from_components(mut f: impl FnMut(usize) -> f64) -> Self {
        f(0)
    }
}

impl Value for f32 {
    const KIND: ValueKind = ValueKind::Scalar;

    fn component(&self, _: usize) -> f64 {
        f64::from(*self)
    }
}

macro_rules! integer_values {
    ($($t:ty),*) => {$(
        impl Value for $t {
            const KIND: ValueKind = ValueKind::Integer;

            fn component(&self, _: usize) -> f64 {
                *self as f64
            }
        }
    )*};
}

integer_values!(i8, i16, i32, i64, isize, u8, u16, u32, u64, usize);

impl<T: Copy + Send + Sync + Into<f64> + 'static> Value for Complex<T> {
    const KIND: ValueKind = ValueKind::Complex;

    fn component(&self, i: usize) -> f64 {
        if i == 0 {
            self.re.into()
        } else {
            self.im.into()
        }
    }
}

impl<const N: usize> Value for [f64; N] {
    const KIND: ValueKind = {
        assert!(N >= 1, "vector dimension must be at least one");
        ValueKind::Vector(N)
    };

    #[inline]
    fn component(&self, i: usize) -> f64 {
        self[i]
    }
}

impl<const M: usize> Space for [f64; M] {
    type OverScalar = [f64; M];
    type OverVector<const N: usize> = Matrix<M, N>;
    type DerivativeRange<R: Space> = R::OverVector<M>;

    #[inline]
    fn from_components(f: impl FnMut(usize) -> f64) -> Self {
        std::array::from_fn(f)
    }
}

/// Row vector with `N` entries, the derivative of a `Vector(N) -> Scalar` map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Covector<const N: usize>(pub [f64; N]);

impl<const N: usize> Value for Covector<N> {
    const KIND: ValueKind = {
        assert!(N >= 1, "covector dimension must be at least one");
        ValueKind::Covector(N)
    };

    fn component(&self, i: usize) -> f64 {
        self.0[i]
    }
}

// Covectors are vector-like when differentiated again, so the Hessian of a
// `Vector(n) -> Scalar` map is `Matrix(n, n)`.
impl<const M: usize> Space for Covector<M> {
    type OverScalar = Covector<M>;
    type OverVector<const N: usize> = Matrix<M, N>;
    type DerivativeRange<R: Space> = Invalid;

    fn from_components(f: impl FnMut(usize) -> f64) -> Self {
        Covector(std::array::from_fn(f))
    }
}

/// Dense `M x N` matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix<const M: usize, const N: usize>(pub [[f64; N]; M]);

impl<const M: usize, const N: usize> Value for Matrix<M, N> {
    const KIND: ValueKind = {
        assert!(M >= 1 && N >= 1, "matrix dimensions must be at least one");
        ValueKind::Matrix(M, N)
    };

    fn component(&self, i: usize) -> f64 {
        self.0[i / N][i % N]
    }
}

impl<const M: usize, const N: usize> Space for Matrix<M, N> {
    type OverScalar = Invalid;
    type OverVector<const K: usize> = Invalid;
    type DerivativeRange<R: Space> = Invalid;

    fn from_components(mut f: impl FnMut(usize) -> f64) -> Self {
        Matrix(std::array::from_fn(|r| {
            std::array::from_fn(|c| f(r * N + c))
        }))
    }
}

/// Uninhabited range of a derivative the traits policy leaves undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Invalid {}

impl Value for Invalid {
    const KIND: ValueKind = ValueKind::Invalid;

    fn component(&self, _: usize) -> f64 {
        match *self {}
    }
}

impl Space for Invalid {
    type OverScalar = Invalid;
    type OverVector<const N: usize> = Invalid;
    type DerivativeRange<R: Space> = Invalid;

    fn from_components(_: impl FnMut(usize) -> f64) -> Self {
        // Nothing converts into Invalid, so handles reject it before any call.
        unreachable!("no value converts into an invalid derivative range")
    }
}
