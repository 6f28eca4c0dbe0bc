use fnspace::analytic::{chebyshev, sin_squared, sin_squared_closure, Polynomial, SinSquared};
use fnspace::concepts::{
    check_differentiable_function, check_differentiable_function_with, check_function,
    check_grid_view_function, check_local_function, ConceptName, GridViewFunction, Requirement,
    Signature, SpaceKind,
};
use fnspace::describe;
use fnspace::erasure::{ErasedFunction, ScalarFunction};
use fnspace::grid::make_uniform_grid;
use fnspace::gridfn::{lift_with_derivative, p1_interpolate, ErasedGridViewFunction};
use fnspace::traits::{DerivativeRangeKind, DerivativeTraitsPolicy};

#[test]
fn reports_agree_with_invocability() {
    let closure = sin_squared_closure();
    let p = Polynomial::new(vec![1.0, 2.0, 3.0]);
    let t2 = chebyshev(2);
    let scalar = Signature::scalar();
    // Each of these compiles as a call, so each must model Function.
    let _ = (
        sin_squared(0.1),
        closure(0.1),
        fnspace::concepts::Function::eval(&SinSquared, 0.1),
    );
    for descriptor in [
        describe!(sin_squared),
        describe!(closure),
        describe!(SinSquared),
        describe!(p),
        describe!(t2),
    ] {
        let report = check_function(&descriptor, scalar);
        assert!(report.models(), "{report}");
    }
    for descriptor in [describe!(1), describe!("sin"), describe!(3.5)] {
        let report = check_function(&descriptor, scalar);
        assert!(!report.models());
        assert!(report.diagnostic().contains("function concept"), "{report}");
    }
}

#[test]
fn refinement_implies_base_concept() {
    let scalar = Signature::scalar();
    let candidates = [
        describe!(sin_squared),
        describe!(Polynomial::new(vec![1.0])),
        describe!(chebyshev(3)),
        describe!(ScalarFunction::new(Polynomial::new(vec![1.0, 2.0])).unwrap()),
        describe!(1),
    ];
    for d in candidates {
        if check_differentiable_function(&d, scalar).models() {
            assert!(check_function(&d, scalar).models(), "{}", d.type_name);
        }
    }
}

#[test]
fn models_iff_nothing_missing() {
    let reports = [
        check_function(&describe!(sin_squared), Signature::scalar()),
        check_differentiable_function(&describe!(sin_squared), Signature::scalar()),
        check_grid_view_function(&describe!(sin_squared)),
        check_local_function(&describe!(sin_squared)),
    ];
    for r in reports {
        assert_eq!(r.models(), r.missing_requirements().is_empty());
        assert!(r
            .diagnostic()
            .contains(&format!("Concept::{}", r.concept_name())));
    }
}

#[test]
fn grid_functions_and_their_local_functions() {
    let gv = make_uniform_grid(4).unwrap();
    let f = lift_with_derivative(|x: f64| x * x, |x: f64| 2.0 * x, gv);
    let report = check_grid_view_function(&describe!(f));
    assert!(report.models(), "{report}");
    assert_eq!(report.concept_name(), ConceptName::GridViewFunction);
    let local = f.local_function();
    assert!(check_local_function(&describe!(local)).models());

    let p1 = p1_interpolate(gv, vec![0.0; 5]).unwrap();
    assert!(check_grid_view_function(&describe!(p1)).models());
    let erased = ErasedGridViewFunction::<f64>::new(p1).unwrap();
    assert!(check_grid_view_function(&describe!(erased)).models());
    assert!(check_local_function(&describe!(erased.local_function())).models());

    let report = check_grid_view_function(&describe!(Polynomial::new(vec![1.0])));
    assert!(report
        .missing_requirements()
        .contains(&Requirement::HasLocalFunction));
    assert!(report.diagnostic().contains("grid view function concept"));
}

#[test]
fn erased_handles_model_their_concepts() {
    let h = ErasedFunction::<f64, f64>::new(sin_squared).unwrap();
    assert!(check_function(&describe!(h), Signature::scalar()).models());
    // A plain function handle carries no derivative.
    let report = check_differentiable_function(&describe!(h), Signature::scalar());
    assert_eq!(report.missing_requirements(), &[Requirement::HasDerivative]);
}

#[test]
fn derivative_range_is_checked_against_the_policy() {
    let gradient = |x: [f64; 2]| x[0] * x[1];
    let f = fnspace::analytic::Analytic::with_derivative(
        gradient,
        fnspace::analytic::Analytic::new(|x: [f64; 2]| fnspace::concepts::Covector([x[1], x[0]])),
    );
    let sig = Signature::new(SpaceKind::Vector(2), SpaceKind::Scalar);
    assert!(check_differentiable_function(&describe!(f, [f64; 2]), sig).models());

    let vector_gradients =
        DerivativeTraitsPolicy::new("vector gradients", |s: Signature| match s.domain {
            SpaceKind::Vector(n) => DerivativeRangeKind::Vector(n),
            _ => DerivativeRangeKind::Scalar,
        });
    let report =
        check_differentiable_function_with(&describe!(f, [f64; 2]), sig, &vector_gradients);
    assert_eq!(
        report.missing_requirements(),
        &[Requirement::DerivativeRange]
    );
}
