use proptest::prelude::*;

use fnspace::analytic::{chebyshev, sin_squared, sin_squared_closure, Polynomial, SinSquared};
use fnspace::bench::{midpoint_integrate, StaticIntegrand};
use fnspace::concepts::{DifferentiableFunction, Function, GridViewFunction, LocalFunction};
use fnspace::erasure::{ErasedFunction, ScalarFunction};
use fnspace::grid::{global_from_local, make_uniform_grid};
use fnspace::gridfn::{lift, p1_interpolate, ErasedGridViewFunction};

const H: f64 = 1e-5;

fn central_difference(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    (f(x + H) - f(x - H)) / (2.0 * H)
}

fn coefficients() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0_f64, 0..7)
}

proptest! {
    #[test]
    fn polynomial_derivative_matches_finite_differences(c in coefficients(), x in -2.0..2.0_f64) {
        let p = Polynomial::new(c);
        let exact = p.derivative().eval(x);
        let approx = central_difference(|t| p.eval(t), x);
        prop_assert!((exact - approx).abs() <= 1e-6 * (1.0 + exact.abs()), "{exact} vs {approx}");
    }

    #[test]
    fn repeated_derivatives_vanish(c in coefficients()) {
        let mut p = Polynomial::new(c.clone());
        for _ in 0..c.len() {
            p = p.derivative();
        }
        prop_assert_eq!(p, Polynomial::zero());
    }

    #[test]
    fn polynomial_at_one_is_coefficient_sum(c in prop::collection::vec(-100i32..100, 0..8)) {
        let c: Vec<f64> = c.into_iter().map(f64::from).collect();
        prop_assert_eq!(Polynomial::new(c.clone()).eval(1.0), c.iter().sum::<f64>());
    }

    #[test]
    fn chebyshev_chain_rule(n in 1u32..6, x in -0.9..0.9_f64) {
        let t = chebyshev(n);
        let exact = t.derivative().unwrap().eval(x);
        let approx = central_difference(|s| t.eval(s), x);
        prop_assert!((exact - approx).abs() <= 1e-6 * (1.0 + exact.abs()), "T{n}'({x}): {exact} vs {approx}");
    }

    #[test]
    fn erasure_is_transparent(x in 0.0..std::f64::consts::TAU, c in coefficients()) {
        let p = Polynomial::new(c);
        let erased = ScalarFunction::new(p.clone()).unwrap();
        prop_assert_eq!(erased.eval(x).to_bits(), p.eval(x).to_bits());
        let dp = p.derivative();
        prop_assert_eq!(erased.derivative().unwrap().eval(x).to_bits(), dp.eval(x).to_bits());
        prop_assert_eq!(ScalarFunction::new(dp).unwrap().eval(x).to_bits(), erased.derivative().unwrap().eval(x).to_bits());

        let fixtures = [
            ErasedFunction::<f64, f64>::new(sin_squared).unwrap(),
            ErasedFunction::new(sin_squared_closure()).unwrap(),
            ErasedFunction::new(SinSquared).unwrap(),
        ];
        for h in &fixtures {
            prop_assert_eq!(h.eval(x).to_bits(), sin_squared(x).to_bits());
            prop_assert_eq!(h.clone().eval(x).to_bits(), h.eval(x).to_bits());
        }
    }

    #[test]
    fn locate_inverts_the_geometry_map(m in 1usize..64, k in 0usize..64, xhat in 0.0..=1.0_f64) {
        let gv = make_uniform_grid(m).unwrap();
        let e = gv.element(k % m).unwrap();
        let x = global_from_local(&e, xhat).unwrap();
        let (found, local) = gv.locate(x).unwrap();
        if found.index() == e.index() {
            prop_assert!((local - xhat).abs() <= 1e-12, "{local} vs {xhat}");
        } else {
            // Right end of an interior element: owned by the next element.
            prop_assert_eq!(found.index(), e.index() + 1);
            prop_assert!(local <= 1e-12 && (1.0 - xhat) <= 1e-12);
        }
    }

    #[test]
    fn geometry_map_is_affine(m in 1usize..64, k in 0usize..64, a in 0.0..=1.0_f64, b in 0.0..=1.0_f64) {
        let e = make_uniform_grid(m).unwrap().element(k % m).unwrap();
        let mid = global_from_local(&e, 0.5 * (a + b)).unwrap();
        let avg = 0.5 * (global_from_local(&e, a).unwrap() + global_from_local(&e, b).unwrap());
        prop_assert!((mid - avg).abs() <= 2.0 * f64::EPSILON);
    }

    #[test]
    fn localization_is_consistent(m in 1usize..16, nodal in prop::collection::vec(-10.0..10.0_f64, 17), c in coefficients()) {
        let gv = make_uniform_grid(m).unwrap();
        let p1 = p1_interpolate(gv, nodal[..=m].to_vec()).unwrap();
        let lifted = lift(Polynomial::new(c), gv);
        let mut p1_local = p1.local_function();
        let mut lifted_local = lifted.local_function();
        for e in gv.elements() {
            p1_local.bind(&e).unwrap();
            lifted_local.bind(&e).unwrap();
            for s in 0..10 {
                let xhat = f64::from(s) / 9.0;
                let x = global_from_local(&e, xhat).unwrap();
                let (expected, got) = (p1.evaluate(x).unwrap(), p1_local.evaluate(xhat).unwrap());
                prop_assert!((expected - got).abs() <= 1e-12, "P1 {expected} vs {got}");
                let (expected, got) = (lifted.evaluate(x).unwrap(), lifted_local.evaluate(xhat).unwrap());
                prop_assert!((expected - got).abs() <= 1e-12 * (1.0 + expected.abs()), "lift {expected} vs {got}");
            }
        }
    }

    #[test]
    fn local_derivatives_commute(m in 1usize..16, nodal in prop::collection::vec(-10.0..10.0_f64, 17), c in coefficients()) {
        let gv = make_uniform_grid(m).unwrap();
        let p1 = p1_interpolate(gv, nodal[..=m].to_vec()).unwrap();
        let lifted = lift(Polynomial::new(c), gv);
        let erased = ErasedGridViewFunction::<f64>::new(p1.clone()).unwrap();
        for e in gv.elements() {
            let mut p1_local = p1.local_function();
            p1_local.bind(&e).unwrap();
            let mut p1_global = p1.derivative().unwrap().local_function();
            p1_global.bind(&e).unwrap();
            let mut lifted_local = lifted.local_function();
            lifted_local.bind(&e).unwrap();
            let mut lifted_global = lifted.derivative().unwrap().local_function();
            lifted_global.bind(&e).unwrap();
            let mut erased_local = erased.local_function();
            erased_local.bind(&e).unwrap();
            for s in 0..10 {
                let xhat = f64::from(s) / 9.0;
                let a = p1_local.derivative().unwrap().evaluate(xhat).unwrap();
                prop_assert_eq!(a.to_bits(), p1_global.evaluate(xhat).unwrap().to_bits());
                prop_assert_eq!(a.to_bits(), erased_local.derivative().unwrap().evaluate(xhat).unwrap().to_bits());
                let b = lifted_local.derivative().unwrap().evaluate(xhat).unwrap();
                prop_assert_eq!(b.to_bits(), lifted_global.evaluate(xhat).unwrap().to_bits());
            }
        }
    }

    #[test]
    fn midpoint_rule_is_exact_for_the_integrand(n in 1usize..5000) {
        let r = midpoint_integrate(&StaticIntegrand::<5>, n);
        for (i, v) in r.iter().enumerate() {
            prop_assert!((v - (i as f64 + 0.5)).abs() <= 1e-10);
        }
    }
}
