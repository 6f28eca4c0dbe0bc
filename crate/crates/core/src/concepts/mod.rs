//! The four function concepts and their conformance checks.
//!
//! Conformance is available twice. At compile time a type models a concept
//! by implementing its trait ([`Function`], [`DifferentiableFunction`],
//! [`GridViewFunction`], [`LocalFunction`]). At run time
//! [`describe!`](crate::describe) records what an arbitrary value supports
//! and the `check_*` functions turn that [`Descriptor`] into a
//! [`ConceptReport`] with a readable diagnostic.

use std::fmt;

use crate::error::Result;
use crate::grid::{Element, GridView};
use crate::traits::{DerivativeRangeKind, DerivativeTraitsPolicy};

#[doc(hidden)]
pub mod probe;
mod space;

pub use space::{
    convert, Covector, Invalid, Matrix, Signature, Space, SpaceKind, Value, ValueKind,
};

/// Anything that maps a domain value to a range value.
///
/// Closures and function items implement this automatically; other types
/// (function objects) implement it by hand.
pub trait Function<D> {
    type Range;

    fn eval(&self, x: D) -> Self::Range;
}

impl<D, R, F: Fn(D) -> R> Function<D> for F {
    type Range = R;

    #[inline(always)]
    fn eval(&self, x: D) -> R {
        self(x)
    }
}

/// A function that also provides its derivative `Df: D -> L(D, R)`.
pub trait DifferentiableFunction<D>: Function<D, Range: Value> {
    type Derivative: DifferentiableFunction<D> + Clone + Send + Sync + 'static;

    /// Computes the whole derivative function; store it when evaluating repeatedly.
    fn derivative(&self) -> Result<Self::Derivative>;
}

pub fn derivative<D, F: DifferentiableFunction<D>>(f: &F) -> Result<F::Derivative> {
    f.derivative()
}

/// Restriction `f_e = f ∘ Φ_e` of a grid function to one element, evaluated
/// in the element's reference coordinates once bound.
///
/// Derivatives are reported in global coordinates: a bound local derivative
/// evaluates `(Df)(Φ_e(xhat))`.
pub trait LocalFunction: Clone + Send + Sync + 'static {
    type Range: Value;
    type Derivative: LocalFunction;

    /// Attaches to `element`, performing any element-dependent setup.
    fn bind(&mut self, element: &Element) -> Result<()>;

    fn unbind(&mut self);

    fn bound_element(&self) -> Option<&Element>;

    fn evaluate(&self, local: f64) -> Result<Self::Range>;

    /// Derivative bound to the same element as `self`.
    fn derivative(&self) -> Result<Self::Derivative>;
}

/// A function on the global domain of a grid view that also offers
/// element-local evaluation through [`GridViewFunction::local_function`].
pub trait GridViewFunction: Clone + Send + Sync + 'static {
    type Range: Value;
    type Derivative: GridViewFunction;
    type Local: LocalFunction<Range = Self::Range>;

    fn grid_view(&self) -> &GridView;

    fn evaluate(&self, x: f64) -> Result<Self::Range>;

    fn local_function(&self) -> Self::Local;

    fn derivative(&self) -> Result<Self::Derivative>;
}

pub fn local_function<G: GridViewFunction>(f: &G) -> G::Local {
    f.local_function()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConceptName {
    Function,
    DifferentiableFunction,
    GridViewFunction,
    LocalFunction,
}

impl ConceptName {
    fn prose(self) -> &'static str {
        match self {
            ConceptName::Function => "function",
            ConceptName::DifferentiableFunction => "differentiable function",
            ConceptName::GridViewFunction => "grid view function",
            ConceptName::LocalFunction => "local function",
        }
    }
}

impl fmt::Display for ConceptName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ConceptName::Function => "Function",
            ConceptName::DifferentiableFunction => "DifferentiableFunction",
            ConceptName::GridViewFunction => "GridViewFunction",
            ConceptName::LocalFunction => "LocalFunction",
        };
        f.write_str(name)
    }
}

/// A single named requirement of a concept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Requirement {
    CallableWithDomain,
    ConvertibleRange,
    HasDerivative,
    DerivativeRange,
    HasBind,
    HasLocalFunction,
    HasGridView,
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Requirement::CallableWithDomain => "callable with domain argument",
            Requirement::ConvertibleRange => "yields a value convertible to the range",
            Requirement::HasDerivative => "has derivative operation",
            Requirement::DerivativeRange => "derivative range matches the derivative traits",
            Requirement::HasBind => "has bind operation",
            Requirement::HasLocalFunction => "has localFunction operation",
            Requirement::HasGridView => "has associated grid view",
        })
    }
}

/// Outcome of a conformance check. A candidate models the concept exactly
/// when no requirement is missing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptReport {
    concept: ConceptName,
    type_name: String,
    missing: Vec<Requirement>,
}

impl ConceptReport {
    pub fn new(
        concept: ConceptName,
        type_name: impl Into<String>,
        missing: Vec<Requirement>,
    ) -> Self {
        ConceptReport {
            concept,
            type_name: type_name.into(),
            missing,
        }
    }

    pub fn concept_name(&self) -> ConceptName {
        self.concept
    }

    pub fn type_name(&self) -> &str {
        &self.type_name
    }

    pub fn models(&self) -> bool {
        self.missing.is_empty()
    }

    pub fn missing_requirements(&self) -> &[Requirement] {
        &self.missing
    }

    /// Human-readable verdict. Always names the concept.
    pub fn diagnostic(&self) -> String {
        if self.models() {
            return format!("`{}` models Concept::{}", self.type_name, self.concept);
        }
        let missing: Vec<String> = self.missing.iter().map(ToString::to_string).collect();
        format!(
            "Type does not model {} concept: `{}` is not a Concept::{} (missing: {})",
            self.concept.prose(),
            self.type_name,
            self.concept,
            missing.join(", ")
        )
    }

    pub fn into_result(self) -> Result<Self> {
        if self.models() {
            Ok(self)
        } else {
            Err(crate::Error::ConceptViolation(self))
        }
    }
}

impl fmt::Display for ConceptReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.diagnostic())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invocation {
    NotCallable,
    /// Invocable on the probed domain; the range kind is `None` when the
    /// returned type is not a [`Value`] (e.g. `()`).
    Callable(Option<ValueKind>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalShape {
    pub range: ValueKind,
    pub derivative_range: ValueKind,
}

impl LocalShape {
    pub fn of<L: LocalFunction>() -> Self {
        LocalShape {
            range: <L::Range as Value>::KIND,
            derivative_range: <<L::Derivative as LocalFunction>::Range as Value>::KIND,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridShape {
    pub range: ValueKind,
    pub derivative_range: ValueKind,
    pub num_elements: usize,
    pub local: LocalShape,
}

/// What a candidate value supports, as recorded by [`describe!`](crate::describe).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descriptor {
    pub type_name: &'static str,
    /// Kind of the domain type invocation was probed with.
    pub domain: ValueKind,
    pub invocation: Invocation,
    /// Range kind of the derivative, if the candidate is differentiable on the probed domain.
    pub derivative: Option<ValueKind>,
    pub local: Option<LocalShape>,
    pub grid: Option<GridShape>,
}

impl Descriptor {
    /// Range kind when evaluated on `domain`, if evaluation is possible at all.
    fn evaluation(&self, domain: SpaceKind) -> Option<Option<ValueKind>> {
        if let Invocation::Callable(range) = self.invocation {
            if self.domain.as_space() == Some(domain) {
                return Some(range);
            }
        }
        // Grid and local functions of the 1-D grid take scalar coordinates.
        if domain == SpaceKind::Scalar {
            if let Some(grid) = self.grid {
                return Some(Some(grid.range));
            }
            if let Some(local) = self.local {
                return Some(Some(local.range));
            }
        }
        None
    }

    fn derivative_range(&self, domain: SpaceKind) -> Option<ValueKind> {
        if self.domain.as_space() == Some(domain) && self.derivative.is_some() {
            return self.derivative;
        }
        if domain == SpaceKind::Scalar {
            if let Some(grid) = self.grid {
                return Some(grid.derivative_range);
            }
            if let Some(local) = self.local {
                return Some(local.derivative_range);
            }
        }
        None
    }
}

fn function_requirements(candidate: &Descriptor, sig: Signature, missing: &mut Vec<Requirement>) {
    match candidate.evaluation(sig.domain) {
        None => {
            missing.push(Requirement::CallableWithDomain);
            missing.push(Requirement::ConvertibleRange);
        }
        Some(Some(range)) if range.converts_to(sig.range) => {}
        Some(_) => missing.push(Requirement::ConvertibleRange),
    }
}

fn derivative_requirements(
    candidate: &Descriptor,
    sig: Signature,
    traits: &DerivativeTraitsPolicy,
    missing: &mut Vec<Requirement>,
) {
    let Some(range) = candidate.derivative_range(sig.domain) else {
        missing.push(Requirement::HasDerivative);
        return;
    };
    match traits.map(sig) {
        DerivativeRangeKind::Invalid => missing.push(Requirement::DerivativeRange),
        expected => {
            let expected = expected.as_space().expect("valid derivative range");
            if !range.converts_to(expected) {
                missing.push(Requirement::DerivativeRange);
            }
        }
    }
}

/// Is `candidate` invocable on `sig.domain`, yielding something convertible to `sig.range`?
pub fn check_function(candidate: &Descriptor, sig: Signature) -> ConceptReport {
    let mut missing = Vec::new();
    function_requirements(candidate, sig, &mut missing);
    ConceptReport::new(ConceptName::Function, candidate.type_name, missing)
}

/// [`check_function`] plus a derivative whose range matches the default derivative traits.
pub fn check_differentiable_function(candidate: &Descriptor, sig: Signature) -> ConceptReport {
    check_differentiable_function_with(candidate, sig, &DerivativeTraitsPolicy::default())
}

pub fn check_differentiable_function_with(
    candidate: &Descriptor,
    sig: Signature,
    traits: &DerivativeTraitsPolicy,
) -> ConceptReport {
    let mut missing = Vec::new();
    function_requirements(candidate, sig, &mut missing);
    derivative_requirements(candidate, sig, traits, &mut missing);
    ConceptReport::new(
        ConceptName::DifferentiableFunction,
        candidate.type_name,
        missing,
    )
}

/// Local-coordinate evaluation, a derivative, and a bind operation.
pub fn check_local_function(candidate: &Descriptor) -> ConceptReport {
    let mut missing = Vec::new();
    let local = candidate.local;
    let range = local
        .map(|l| l.range)
        .or_else(|| candidate.evaluation(SpaceKind::Scalar).flatten());
    match range.and_then(ValueKind::as_space) {
        Some(range) => {
            let sig = Signature::new(SpaceKind::Scalar, range);
            function_requirements(candidate, sig, &mut missing);
            derivative_requirements(
                candidate,
                sig,
                &DerivativeTraitsPolicy::default(),
                &mut missing,
            );
        }
        None => {
            if candidate.evaluation(SpaceKind::Scalar).is_none() {
                missing.push(Requirement::CallableWithDomain);
            }
            missing.push(Requirement::ConvertibleRange);
            if candidate.derivative_range(SpaceKind::Scalar).is_none() {
                missing.push(Requirement::HasDerivative);
            }
        }
    }
    if local.is_none() {
        missing.push(Requirement::HasBind);
    }
    ConceptReport::new(ConceptName::LocalFunction, candidate.type_name, missing)
}

/// Global evaluation, a derivative, an associated grid view, and a
/// `localFunction` operation yielding a model of [`LocalFunction`].
pub fn check_grid_view_function(candidate: &Descriptor) -> ConceptReport {
    let mut missing = Vec::new();
    match candidate.evaluation(SpaceKind::Scalar) {
        None => {
            missing.push(Requirement::CallableWithDomain);
            missing.push(Requirement::ConvertibleRange);
        }
        Some(range) => {
            if range.and_then(ValueKind::as_space).is_none() {
                missing.push(Requirement::ConvertibleRange);
            }
        }
    }
    if candidate.derivative_range(SpaceKind::Scalar).is_none() {
        missing.push(Requirement::HasDerivative);
    }
    match candidate.grid {
        Some(grid) => {
            let local = Descriptor {
                type_name: candidate.type_name,
                domain: ValueKind::Scalar,
                invocation: Invocation::NotCallable,
                derivative: None,
                local: Some(grid.local),
                grid: None,
            };
            missing.extend(check_local_function(&local).missing);
        }
        None => {
            missing.push(Requirement::HasLocalFunction);
            missing.push(Requirement::HasGridView);
        }
    }
    ConceptReport::new(ConceptName::GridViewFunction, candidate.type_name, missing)
}
