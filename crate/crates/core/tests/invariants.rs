use approx::assert_abs_diff_eq;
use indefsum::asymptotics::{binet, binet_integral};
use indefsum::catalog::{builtin, reference_ln_hyperfactorial, reference_psi2, NAMES};
use indefsum::constants::{asymptotic_constant, euler_constant_gen, gamma_piecewise_interp, SIGMA_TOL};
use indefsum::identities::{mult_residual, psi2};
use indefsum::numerics::{gen_binomial, gregory_coeff};
use indefsum::sigma::{sigma, sigma_direct, sigma_eulerian, sigma_gregory, GREGORY_ORDER, LIMIT_TOL};
use indefsum::{parse, GFunction, Shape};
use proptest::prelude::*;

fn entry(name: &str) -> GFunction {
    builtin(name).unwrap().g
}

#[test]
fn catalog_matches_references_on_grid() {
    for name in NAMES {
        let e = builtin(name).unwrap();
        for i in 0..200 {
            let x = 0.1 + 29.9 * i as f64 / 199.0;
            let got = sigma(&e.g, x).unwrap().value + e.offset;
            let want = (e.reference)(x).unwrap();
            assert!((got - want).abs() <= 1e-8 * want.abs().max(1.0), "{name} at {x}: {got} vs {want}");
        }
    }
}

#[test]
fn closed_form_constants() {
    for name in NAMES {
        let e = builtin(name).unwrap();
        if let Some(s) = e.sigma_closed {
            assert_abs_diff_eq!(asymptotic_constant(&e.g, SIGMA_TOL).unwrap(), s, epsilon = 1e-8);
        }
        if let Some(c) = e.gamma_closed {
            assert_abs_diff_eq!(euler_constant_gen(&e.g).unwrap(), c, epsilon = 1e-8);
        }
    }
}

#[test]
fn normalization() {
    for name in NAMES {
        assert_abs_diff_eq!(sigma(&entry(name), 1.0).unwrap().value, 0.0, epsilon = 1e-10);
    }
}

#[test]
fn piecewise_route_agrees_with_gregory_form() {
    for name in ["ln", "psi2g", "recip"] {
        let g = entry(name);
        let a = gamma_piecewise_interp(&g, g.p(), 10_000).unwrap();
        let b = euler_constant_gen(&g).unwrap();
        assert!((a - b).abs() <= 1e-4, "{name}: {a} vs {b}");
    }
}

#[test]
fn binet_forms_agree_for_catalog() {
    for name in NAMES {
        let g = entry(name);
        for x in [0.7, 3.0, 16.0] {
            let a = binet(&g, x).unwrap();
            let b = binet_integral(&g, x).unwrap();
            assert!((a - b).abs() <= 1e-7, "{name} at {x}: {a} vs {b}");
        }
    }
}

#[test]
fn hyperfactorial_relation() {
    // at integers Σ(x ln x)(n) = ln(1^1 2^2 ... (n-1)^(n-1))
    let xlnx = builtin("xlnx").unwrap();
    for x in [1.5, 2.0, 4.25, 9.0] {
        let got = sigma(&xlnx.g, x).unwrap().value + xlnx.offset;
        assert_abs_diff_eq!(got, reference_ln_hyperfactorial(x).unwrap(), epsilon = 1e-8);
    }
    for n in 2..8 {
        let direct: f64 = (1..n).map(|k| k as f64 * (k as f64).ln()).sum();
        assert_abs_diff_eq!(sigma(&xlnx.g, n as f64).unwrap().value, direct, epsilon = 1e-9);
    }
}

#[test]
fn polynomial_sums_are_exact() {
    // Σ x^2 = (x-1)x(2x-1)/6
    let g = GFunction::new("sq", parse("x^2").unwrap(), 3, Shape::Convex).with_primitive(parse("x^3/3").unwrap());
    for x in [0.4, 2.5, 7.0] {
        let want = (x - 1.0) * x * (2.0 * x - 1.0) / 6.0;
        assert_abs_diff_eq!(sigma(&g, x).unwrap().value, want, epsilon = 1e-9);
    }
}

#[test]
fn gregory_coefficients_sum() {
    assert_abs_diff_eq!(gregory_coeff(1), 0.5);
    assert_abs_diff_eq!(gregory_coeff(2), -1.0 / 12.0, epsilon = 1e-17);
    assert_abs_diff_eq!(gregory_coeff(3), 1.0 / 24.0, epsilon = 1e-17);
    // Σ|G_n| = 1, approached slowly from below
    let partial: f64 = (1..=12).map(|n| gregory_coeff(n).abs()).sum();
    assert!(partial < 1.0 && partial > 0.73);
    assert_abs_diff_eq!(gen_binomial(5.0, 2), 10.0);
}

#[test]
fn psi2_reference_agreement_far_out() {
    for x in [40.0, 75.0] {
        let got = psi2(x).unwrap();
        let want = reference_psi2(x).unwrap();
        assert!((got - want).abs() <= 1e-8 * want.abs(), "{x}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn difference_equation(idx in 0usize..4, x in 0.05f64..25.0) {
        let g = entry(NAMES[idx]);
        let r = sigma(&g, x + 1.0).unwrap().value - sigma(&g, x).unwrap().value - g.eval(x).unwrap();
        prop_assert!(r.abs() <= 1e-9, "{} at {x}: {r}", NAMES[idx]);
    }

    #[test]
    fn strategies_agree(idx in 0usize..4, x in 0.05f64..20.0) {
        let g = entry(NAMES[idx]);
        asymptotic_constant(&g, SIGMA_TOL).unwrap();
        let d = sigma_direct(&g, g.p(), x, LIMIT_TOL).unwrap().value;
        let e = sigma_eulerian(&g, g.p(), x, LIMIT_TOL).unwrap().value;
        let r = sigma_gregory(&g, g.p(), x, None, GREGORY_ORDER).unwrap().value;
        prop_assert!((d - e).abs() <= 1e-8 && (d - r).abs() <= 1e-8, "{d} {e} {r}");
    }

    #[test]
    fn engine_matches_reference(idx in 0usize..4, x in 0.1f64..30.0) {
        let e = builtin(NAMES[idx]).unwrap();
        let got = sigma(&e.g, x).unwrap().value + e.offset;
        let want = (e.reference)(x).unwrap();
        prop_assert!((got - want).abs() <= 1e-8 * want.abs().max(1.0));
    }

    #[test]
    fn multiplication_identity(m in 1u32..5, x in 0.2f64..10.0) {
        prop_assert!(mult_residual(&entry("ln"), m, x).unwrap().abs() <= 1e-7);
    }

    #[test]
    fn linear_combination(a in -3.0f64..3.0, b in -3.0f64..3.0, x in 0.3f64..12.0) {
        // Σ(a ln + b) = a ln Γ + b(x - 1)
        let expr = parse(&format!("({a})*ln(x) + ({b})")).unwrap();
        let g = GFunction::new("lin", expr, 1, if a >= 0.0 { Shape::Concave } else { Shape::Convex });
        let want = a * sigma(&entry("ln"), x).unwrap().value + b * (x - 1.0);
        let got = sigma(&g, x).unwrap().value;
        prop_assert!((got - want).abs() <= 1e-8 * want.abs().max(1.0), "{got} vs {want}");
    }
}
