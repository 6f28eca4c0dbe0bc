//! Derivative traits: which space represents `L(D, R)` for a signature `D -> R`.
//!
//! The mapping exists twice: [`DerivativeTraits`] computes the derivative
//! range *type* for erased handles, and [`DerivativeTraitsPolicy`] computes
//! the derivative range *kind* at run time for reports and handle metadata.
//! The built-in implementations agree with each other.

use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use crate::concepts::{Signature, Space, SpaceKind, ValueKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivativeRangeKind {
    Scalar,
    Vector(usize),
    Covector(usize),
    Matrix(usize, usize),
    Invalid,
}

impl DerivativeRangeKind {
    pub fn as_space(self) -> Option<SpaceKind> {
        match self {
            DerivativeRangeKind::Scalar => Some(SpaceKind::Scalar),
            DerivativeRangeKind::Vector(n) => Some(SpaceKind::Vector(n)),
            DerivativeRangeKind::Covector(n) => Some(SpaceKind::Covector(n)),
            DerivativeRangeKind::Matrix(m, n) => Some(SpaceKind::Matrix(m, n)),
            DerivativeRangeKind::Invalid => None,
        }
    }
}

impl From<SpaceKind> for DerivativeRangeKind {
    fn from(kind: SpaceKind) -> Self {
        match kind {
            SpaceKind::Scalar => DerivativeRangeKind::Scalar,
            SpaceKind::Vector(n) => DerivativeRangeKind::Vector(n),
            SpaceKind::Covector(n) => DerivativeRangeKind::Covector(n),
            SpaceKind::Matrix(m, n) => DerivativeRangeKind::Matrix(m, n),
        }
    }
}

impl From<ValueKind> for DerivativeRangeKind {
    fn from(kind: ValueKind) -> Self {
        kind.as_space()
            .map_or(DerivativeRangeKind::Invalid, Into::into)
    }
}

impl fmt::Display for DerivativeRangeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_space() {
            Some(kind) => kind.fmt(f),
            None => f.write_str("Invalid"),
        }
    }
}

/// The built-in mapping.
///
/// | domain      | range        | derivative range |
/// |-------------|--------------|------------------|
/// | Scalar      | Scalar       | Scalar           |
/// | Scalar      | Vector(m)    | Vector(m)        |
/// | Scalar      | Covector(m)  | Covector(m)      |
/// | Vector(n)   | Scalar       | Covector(n)      |
/// | Vector(n)   | Vector(m)    | Matrix(m, n)     |
/// | Vector(n)   | Covector(m)  | Matrix(m, n)     |
///
/// Everything else, including matrix-valued ranges, is `Invalid`. The
/// `Covector` row makes repeated derivatives of `Vector(n) -> Scalar`
/// terminate in the Hessian `Matrix(n, n)`.
pub fn default_derivative_range(sig: Signature) -> DerivativeRangeKind {
    use DerivativeRangeKind as K;
    if !sig.is_valid() {
        return K::Invalid;
    }
    match (sig.domain, sig.range) {
        (SpaceKind::Scalar, SpaceKind::Scalar) => K::Scalar,
        (SpaceKind::Scalar, SpaceKind::Vector(m)) => K::Vector(m),
        (SpaceKind::Scalar, SpaceKind::Covector(m)) => K::Covector(m),
        (SpaceKind::Vector(n), SpaceKind::Scalar) => K::Covector(n),
        (SpaceKind::Vector(n), SpaceKind::Vector(m) | SpaceKind::Covector(m)) => K::Matrix(m, n),
        _ => K::Invalid,
    }
}

/// Run-time derivative-range mapping with a name. The mapping is total.
#[derive(Clone)]
pub struct DerivativeTraitsPolicy {
    name: Arc<str>,
    mapping: Arc<dyn Fn(Signature) -> DerivativeRangeKind + Send + Sync>,
}

impl DerivativeTraitsPolicy {
    pub fn new(
        name: impl Into<Arc<str>>,
        mapping: impl Fn(Signature) -> DerivativeRangeKind + Send + Sync + 'static,
    ) -> Self {
        DerivativeTraitsPolicy {
            name: name.into(),
            mapping: Arc::new(mapping),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn map(&self, sig: Signature) -> DerivativeRangeKind {
        (self.mapping)(sig)
    }
}

impl Default for DerivativeTraitsPolicy {
    fn default() -> Self {
        DerivativeTraitsPolicy::new("default", default_derivative_range)
    }
}

impl fmt::Debug for DerivativeTraitsPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DerivativeTraitsPolicy")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

/// Policy for local functions: every local signature maps to the derivative
/// range of the global function, `global_policy(global_sig)`.
pub fn local_forwarding_policy(
    global_sig: Signature,
    global_policy: &DerivativeTraitsPolicy,
) -> DerivativeTraitsPolicy {
    let target = global_policy.map(global_sig);
    let name = format!(
        "local forwarding of {} for {}",
        global_policy.name(),
        global_sig
    );
    DerivativeTraitsPolicy::new(name, move |_| target)
}

/// Type-level derivative-range mapping used by erased differentiable handles.
pub trait DerivativeTraits: Send + Sync + 'static {
    type Range<D: Space, R: Space>: Space;

    fn policy() -> DerivativeTraitsPolicy;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DefaultDerivativeTraits;

impl DerivativeTraits for DefaultDerivativeTraits {
    type Range<D: Space, R: Space> = D::DerivativeRange<R>;

    fn policy() -> DerivativeTraitsPolicy {
        DerivativeTraitsPolicy::default()
    }
}

/// Forwards any local signature to `T`'s derivative range of the global
/// signature `GD -> GR`.
#[allow(clippy::type_complexity)]
pub struct LocalForwardingTraits<GD, GR, T = DefaultDerivativeTraits>(
    PhantomData<fn() -> (GD, GR, T)>,
);

impl<GD: Space, GR: Space, T: DerivativeTraits> DerivativeTraits
    for LocalForwardingTraits<GD, GR, T>
{
    type Range<D: Space, R: Space> = T::Range<GD, GR>;

    fn policy() -> DerivativeTraitsPolicy {
        let sig = Signature::of::<GD, GR>().expect("global signature of a local function");
        local_forwarding_policy(sig, &T::policy())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::{Covector, Invalid, Matrix, Value};

    fn sig(domain: SpaceKind, range: SpaceKind) -> Signature {
        Signature::new(domain, range)
    }

    #[test]
    fn default_mapping_examples() {
        use SpaceKind::*;
        assert_eq!(
            default_derivative_range(sig(Scalar, Scalar)),
            DerivativeRangeKind::Scalar
        );
        assert_eq!(
            default_derivative_range(sig(Vector(3), Scalar)),
            DerivativeRangeKind::Covector(3)
        );
        assert_eq!(
            default_derivative_range(sig(Vector(2), Vector(4))),
            DerivativeRangeKind::Matrix(4, 2)
        );
        assert_eq!(
            default_derivative_range(sig(Scalar, Vector(5))),
            DerivativeRangeKind::Vector(5)
        );
    }

    #[test]
    fn second_derivative_is_the_hessian() {
        use SpaceKind::*;
        let first = default_derivative_range(sig(Vector(3), Scalar))
            .as_space()
            .unwrap();
        assert_eq!(
            default_derivative_range(sig(Vector(3), first)),
            DerivativeRangeKind::Matrix(3, 3)
        );
        assert_eq!(
            default_derivative_range(sig(Vector(3), Matrix(3, 3))),
            DerivativeRangeKind::Invalid
        );
        assert_eq!(
            default_derivative_range(sig(Vector(0), Scalar)),
            DerivativeRangeKind::Invalid
        );
    }

    #[test]
    fn never_invalid_for_scalar_and_vector_signatures() {
        let spaces = |n: usize| [SpaceKind::Scalar, SpaceKind::Vector(n)];
        for n in 1..6 {
            for m in 1..6 {
                for d in spaces(n) {
                    for r in spaces(m) {
                        assert_ne!(
                            default_derivative_range(sig(d, r)),
                            DerivativeRangeKind::Invalid
                        );
                    }
                }
            }
        }
    }

    fn type_level<D: Space, R: Space>() -> DerivativeRangeKind {
        <DefaultDerivativeTraits as DerivativeTraits>::Range::<D, R>::KIND.into()
    }

    fn run_time<D: Space, R: Space>() -> DerivativeRangeKind {
        default_derivative_range(Signature::of::<D, R>().unwrap())
    }

    #[test]
    fn type_level_mapping_matches_policy() {
        assert_eq!(type_level::<f64, f64>(), run_time::<f64, f64>());
        assert_eq!(type_level::<f64, [f64; 3]>(), run_time::<f64, [f64; 3]>());
        assert_eq!(
            type_level::<f64, Covector<2>>(),
            run_time::<f64, Covector<2>>()
        );
        assert_eq!(
            type_level::<f64, Matrix<2, 2>>(),
            run_time::<f64, Matrix<2, 2>>()
        );
        assert_eq!(type_level::<[f64; 3], f64>(), run_time::<[f64; 3], f64>());
        assert_eq!(
            type_level::<[f64; 2], [f64; 4]>(),
            run_time::<[f64; 2], [f64; 4]>()
        );
        assert_eq!(
            type_level::<[f64; 3], Covector<3>>(),
            run_time::<[f64; 3], Covector<3>>()
        );
        assert_eq!(
            type_level::<[f64; 3], Matrix<3, 3>>(),
            run_time::<[f64; 3], Matrix<3, 3>>()
        );
        assert_eq!(
            type_level::<Covector<2>, f64>(),
            run_time::<Covector<2>, f64>()
        );
        assert_eq!(<Invalid as Value>::KIND, ValueKind::Invalid);
    }

    #[test]
    fn forwarding_examples() {
        use SpaceKind::*;
        let default = DerivativeTraitsPolicy::default();
        let scalar = local_forwarding_policy(sig(Scalar, Scalar), &default);
        assert_eq!(scalar.map(sig(Scalar, Scalar)), DerivativeRangeKind::Scalar);

        let gradient = local_forwarding_policy(sig(Vector(2), Scalar), &default);
        assert_eq!(
            gradient.map(sig(Scalar, Scalar)),
            DerivativeRangeKind::Covector(2)
        );

        let jacobian = local_forwarding_policy(sig(Vector(2), Vector(2)), &default);
        for local in [Scalar, Vector(1), Vector(2), Vector(7)] {
            assert_eq!(
                jacobian.map(sig(local, Vector(2))),
                default.map(sig(Vector(2), Vector(2)))
            );
        }
    }

    #[test]
    fn forwarding_is_idempotent() {
        use SpaceKind::*;
        let global = sig(Vector(3), Scalar);
        let default = DerivativeTraitsPolicy::default();
        let once = local_forwarding_policy(global, &default);
        let twice = local_forwarding_policy(global, &once);
        for local in [Scalar, Vector(3), Vector(1)] {
            assert_eq!(once.map(sig(local, Scalar)), twice.map(sig(local, Scalar)));
        }
    }

    #[test]
    fn forwarding_type_level() {
        type Fwd = LocalForwardingTraits<[f64; 2], f64>;
        assert_eq!(
            <Fwd as DerivativeTraits>::Range::<f64, f64>::KIND,
            ValueKind::Covector(2)
        );
        assert_eq!(
            Fwd::policy().map(Signature::scalar()),
            DerivativeRangeKind::Covector(2)
        );
    }

    #[test]
    fn custom_policy_overrides() {
        let flat = DerivativeTraitsPolicy::new("flat", |s: Signature| s.range.into());
        assert_eq!(flat.name(), "flat");
        let s = sig(SpaceKind::Vector(2), SpaceKind::Scalar);
        assert_eq!(flat.map(s), DerivativeRangeKind::Scalar);
    }
}
