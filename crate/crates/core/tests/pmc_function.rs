use pmc_core::pmc::{
    eval_pmc, parse_pmc, pmc_derivatives, BinOp, Expr, Func, PmcFunction, Var,
};
use pmc_core::Error;
use proptest::prelude::*;

#[test]
fn golden_power_tree() {
    let e = parse_pmc("p0^2").unwrap();
    assert_eq!(
        e.root,
        Expr::bin(BinOp::Pow, Expr::var(Var::P0), Expr::lit(2.0))
    );
}

#[test]
fn golden_nested_negation_tree() {
    let e = parse_pmc("-(N0*exp(-rho^2))").unwrap();
    let rho2 = Expr::bin(BinOp::Pow, Expr::var(Var::Rho), Expr::lit(2.0));
    let reference = Expr::neg(Expr::bin(
        BinOp::Mul,
        Expr::var(Var::N0),
        Expr::call(Func::Exp, Expr::neg(rho2)),
    ));
    assert_eq!(e.root, reference);
}

#[test]
fn unbalanced_paren_offset() {
    match parse_pmc("(p0") {
        Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn malformed_inputs_are_rejected() {
    for s in ["", "p0 +", "* p0", "p1", "sin", "sin()", "((p0)", "p0 p0", "2 ^", "x0"] {
        assert!(matches!(parse_pmc(s), Err(Error::Syntax { .. })), "{s}");
    }
}

const CORPUS: &[&str] = &[
    "p0", "rho", "N0", "Nrho", "1", "2.5", "1e-3", "3.25E+2",
    "p0^2", "-p0^2", "(-p0)^2", "p0^2^3", "p0-rho-N0", "p0/rho/2",
    "p0*rho+N0*Nrho", "-(N0*exp(-rho^2))", "sin(p0)*cos(rho)", "sqrt(abs(p0))",
    "log(1+rho^2)", "exp(-p0^2-rho^2)", "--p0", "2*-p0", "p0^-1", "(p0+1)*(p0-1)",
    "abs(N0)^0.5*p0", "cos(sin(exp(log(2+rho))))", "1/(1+p0^2)", "p0 * (rho - 2) / 3",
    "N0*p0 + Nrho*rho", "-1.5*p0^2 + 0.25*rho^4 - N0", "sqrt(p0^2+rho^2)",
    "((((p0))))", "2^3^2", "exp(-(p0-1)^2/0.1)",
];

#[test]
fn round_trip_corpus() {
    assert!(CORPUS.len() >= 30);
    for s in CORPUS {
        let a = parse_pmc(s).unwrap();
        let b = parse_pmc(&a.to_string()).unwrap();
        assert_eq!(a, b, "{s} -> {a}");
    }
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0.0f64..100.0).prop_map(Expr::lit),
        (0u32..1000).prop_map(|n| Expr::lit(n as f64)),
        prop_oneof![Just(Var::P0), Just(Var::Rho), Just(Var::N0), Just(Var::NRho)]
            .prop_map(Expr::var),
    ];
    leaf.prop_recursive(5, 48, 3, |inner| {
        let op = prop_oneof![
            Just(BinOp::Add),
            Just(BinOp::Sub),
            Just(BinOp::Mul),
            Just(BinOp::Div),
            Just(BinOp::Pow)
        ];
        let func = prop_oneof![
            Just(Func::Sin),
            Just(Func::Cos),
            Just(Func::Exp),
            Just(Func::Log),
            Just(Func::Sqrt),
            Just(Func::Abs)
        ];
        prop_oneof![
            inner.clone().prop_map(Expr::neg),
            (op, inner.clone(), inner.clone()).prop_map(|(o, a, b)| Expr::bin(o, a, b)),
            (func, inner).prop_map(|(f, a)| Expr::call(f, a)),
        ]
    })
}

fn rotate(v: [f64; 3], a: f64) -> [f64; 3] {
    let (s, c) = a.sin_cos();
    [v[0], c * v[1] - s * v[2], s * v[1] + c * v[2]]
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

proptest! {
    #[test]
    fn printed_trees_reparse_identically(e in arb_expr()) {
        let printed = e.to_string();
        let back = parse_pmc(&printed).unwrap();
        prop_assert_eq!(back.root, e);
    }

    #[test]
    fn rotation_about_axis_leaves_values_unchanged(
        p in prop::array::uniform3(-3.0f64..3.0),
        n in prop::array::uniform3(-1.0f64..1.0),
        angle in 0.0f64..std::f64::consts::TAU,
    ) {
        prop_assume!(n.iter().map(|x| x * x).sum::<f64>() > 1e-3);
        let n = unit(n);
        let f = PmcFunction::from_spec("p0^2 + rho*Nrho - N0*p0 + exp(-rho^2)*cos(p0)").unwrap();
        let a = eval_pmc(&f, p, n).unwrap();
        let b = eval_pmc(&f, rotate(p, angle), rotate(n, angle)).unwrap();
        prop_assert!((a - b).abs() <= 1e-14 * (1.0 + a.abs()), "{} vs {}", a, b);
    }

    #[test]
    fn polynomial_derivatives_match_analytic(
        p in prop::array::uniform3(-2.0f64..2.0),
        n in prop::array::uniform3(-1.0f64..1.0),
    ) {
        prop_assume!(p[1].hypot(p[2]) > 0.1);
        prop_assume!(n.iter().map(|x| x * x).sum::<f64>() > 1e-2);
        let n = unit(n);
        let f = PmcFunction::from_spec("p0^3 + rho^2*N0 + Nrho*p0").unwrap();
        let (d1, d2) = pmc_derivatives(&f, p, n).unwrap();
        let rho = p[1].hypot(p[2]);
        let npp = n[1] * p[1] + n[2] * p[2];
        let nrho = npp / rho;
        // d/dp_i of rho^2 = 2 p_i, of Nrho = N_i/rho - (N·p⊥) p_i / rho^3.
        let dnrho = |i: usize| n[i] / rho - npp * p[i] / rho.powi(3);
        let a1 = [
            3.0 * p[0] * p[0] + nrho,
            2.0 * p[1] * n[0] + p[0] * dnrho(1),
            2.0 * p[2] * n[0] + p[0] * dnrho(2),
        ];
        let a2 = [rho * rho, p[0] * p[1] / rho, p[0] * p[2] / rho];
        for i in 0..3 {
            prop_assert!((d1[i] - a1[i]).abs() < 1e-8, "D1[{}] {} vs {}", i, d1[i], a1[i]);
            prop_assert!((d2[i] - a2[i]).abs() < 1e-8, "D2[{}] {} vs {}", i, d2[i], a2[i]);
        }
    }
}

#[test]
fn rotating_drop_value() {
    let f = PmcFunction::rotating_drop(1.0);
    assert_eq!(eval_pmc(&f, [3.0, 0.0, 0.0], [0.0, 1.0, 0.0]).unwrap(), 9.0);
}

#[test]
fn rotated_input_gives_identical_value() {
    let f = PmcFunction::from_spec("p0^2").unwrap();
    let p = [1.0, 0.6, 0.8];
    let n = [0.0, 0.6, 0.8];
    let base = eval_pmc(&f, p, n).unwrap();
    for k in 0..16 {
        let a = k as f64 * 0.41;
        let v = eval_pmc(&f, rotate(p, a), rotate(n, a)).unwrap();
        assert!((v - base).abs() <= 1e-15);
    }
}

#[test]
fn charged_film_with_axial_potential_is_minus_n0() {
    let f = PmcFunction::from_spec("charged_film(1, p0)").unwrap();
    let cases = [
        ([0.3, 0.2, -0.4], unit([0.5, -0.2, 0.7])),
        ([-2.0, 0.0, 0.0], [1.0, 0.0, 0.0]),
        ([1.0, 1.0, 1.0], unit([-0.3, 0.9, 0.1])),
    ];
    for (p, n) in cases {
        let v = eval_pmc(&f, p, n).unwrap();
        assert!((v + n[0]).abs() < 1e-9, "{v} vs {}", -n[0]);
    }
}

#[test]
fn charged_film_radial_potential() {
    // phi = rho^2 / 2 has gradient p⊥, so F = -C <p⊥, N> = -C rho Nrho.
    let f = PmcFunction::from_spec("charged_film(2, rho^2/2)").unwrap();
    let p = [0.1, 0.6, 0.8];
    let n = unit([0.2, 0.3, 0.4]);
    let expect = -2.0 * (p[1] * n[1] + p[2] * n[2]);
    assert!((eval_pmc(&f, p, n).unwrap() - expect).abs() < 1e-8);
}

#[test]
fn derivative_examples() {
    let f = PmcFunction::from_spec("p0^2").unwrap();
    let (d1, d2) = pmc_derivatives(&f, [3.0f64, 0.0, 0.0], [1.0, 0.0, 0.0]).unwrap();
    assert!((d1[0] - 6.0).abs() < 1e-8 && d1[1].abs() < 1e-12 && d1[2].abs() < 1e-12);
    assert_eq!(d2, [0.0; 3]);

    let one = PmcFunction::constant(1.0);
    let (d1, d2) = pmc_derivatives(&one, [0.2, 0.3, 0.1], [0.0, 1.0, 0.0]).unwrap();
    assert_eq!((d1, d2), ([0.0; 3], [0.0; 3]));
}

#[test]
fn mixed_product_derivatives() {
    let f = PmcFunction::from_spec("N0*p0").unwrap();
    let p = [0.7, -0.4, 1.3];
    let n = unit([0.3, -0.8, 0.2]);
    let (d1, d2) = pmc_derivatives(&f, p, n).unwrap();
    let a1 = [n[0], 0.0, 0.0];
    let a2 = [p[0], 0.0, 0.0];
    for i in 0..3 {
        assert!((d1[i] - a1[i]).abs() < 1e-8);
        assert!((d2[i] - a2[i]).abs() < 1e-8);
    }
}

#[test]
fn evaluation_is_deterministic() {
    let f = PmcFunction::from_spec("sin(p0)*exp(rho) + sqrt(abs(N0))/(1+Nrho^2)").unwrap();
    let p = [0.123, 0.456, -0.789];
    let n = unit([0.1, 0.2, 0.3]);
    let a = eval_pmc(&f, p, n).unwrap();
    for _ in 0..10 {
        assert_eq!(eval_pmc(&f, p, n).unwrap().to_bits(), a.to_bits());
    }
}

#[test]
fn domain_error_propagates_from_stencil() {
    let f = PmcFunction::from_spec("sqrt(p0)").unwrap();
    assert!(matches!(
        pmc_derivatives(&f, [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]),
        Err(Error::Domain(_))
    ));
}

#[test]
fn single_precision_evaluation() {
    let f = PmcFunction::from_spec("p0^2 + rho").unwrap();
    let v: f32 = eval_pmc(&f, [2.0f32, 0.6, 0.8], [1.0, 0.0, 0.0]).unwrap();
    assert!((v - 5.0).abs() < 1e-6);
}
