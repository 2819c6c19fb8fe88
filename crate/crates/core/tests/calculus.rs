//! Chart calculus against finite differences and classical identities.

use proptest::prelude::*;

use dvbwarp::chartcalc::{eval, jacobian, lie_bracket, parse, pushforward};
use dvbwarp::sampling;
use dvbwarp::scalar::scaled_residual_vec;
use dvbwarp::tangentmodels::{lie_bracket_via_warp, Chart};
use dvbwarp::{ChartError, Expr, SmoothMap};

/// Central differences, step `h`; error O(h²).
fn fd_jacobian(f: &SmoothMap, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    (0..x.len())
        .map(|j| {
            let mut hi = x.to_vec();
            let mut lo = x.to_vec();
            hi[j] += h;
            lo[j] -= h;
            let (fh, fl): (Vec<f64>, Vec<f64>) = (eval(f, &hi).unwrap(), eval(f, &lo).unwrap());
            fh.iter().zip(&fl).map(|(a, b)| (a - b) / (2.0 * h)).collect()
        })
        .collect()
}

fn fd_bracket(x: &SmoothMap, y: &SmoothMap, p: &[f64]) -> Vec<f64> {
    let (jx, jy) = (fd_jacobian(x, p, 1e-5), fd_jacobian(y, p, 1e-5));
    let (xv, yv): (Vec<f64>, Vec<f64>) = (eval(x, p).unwrap(), eval(y, p).unwrap());
    (0..p.len())
        .map(|i| (0..p.len()).map(|j| jy[j][i] * xv[j] - jx[j][i] * yv[j]).sum())
        .collect()
}

fn linear_field(dim: usize, m: &[f64]) -> SmoothMap {
    let rows = (0..dim)
        .map(|i| Expr::sum((0..dim).map(|j| Expr::num(m[i * dim + j]) * Expr::var(j))))
        .collect();
    SmoothMap::new(dim, rows).unwrap()
}

#[test]
fn jacobian_matches_finite_differences() {
    let f = SmoothMap::parse(3, &["sin(x0)*x1 + exp(x2)", "x0^3 - log(2 + x1)", "cos(x0*x2)/(1 + x1^2)"]).unwrap();
    let x = [0.3, -0.4, 0.8];
    let j = jacobian(&f, &x).unwrap();
    let fd = fd_jacobian(&f, &x, 1e-5);
    for r in 0..3 {
        for c in 0..3 {
            assert!((j.get(r, c) - fd[c][r]).abs() < 1e-8, "({r},{c})");
        }
    }
}

#[test]
fn chain_rule_for_pushforward() {
    let g = SmoothMap::parse(2, &["x0*x1", "sin(x0) + x1"]).unwrap();
    let f = SmoothMap::parse(2, &["exp(x0) - x1^2", "x0*x1*x1"]).unwrap();
    // f∘g spelled out symbolically.
    let fg = SmoothMap::parse(2, &["exp(x0*x1) - (sin(x0) + x1)^2", "x0*x1*(sin(x0) + x1)^2"]).unwrap();
    let x = [0.7, -0.3];
    let v = [0.25, 1.5];
    let inner = pushforward(&g, &x, &v).unwrap();
    let gx: Vec<f64> = eval(&g, &x).unwrap();
    let composed = pushforward(&f, &gx, &inner).unwrap();
    let direct = pushforward(&fg, &x, &v).unwrap();
    assert!(scaled_residual_vec(&composed, &direct) < 1e-14);
}

#[test]
fn demo_bracket_is_unit_vertical() {
    let x = SmoothMap::parse(2, &["1", "0"]).unwrap();
    let y = SmoothMap::parse(2, &["0", "x0"]).unwrap();
    assert_eq!(lie_bracket(&x, &y, &[0.4, 0.1]).unwrap(), vec![0.0, 1.0]);
}

#[test]
fn parser_reports_locations() {
    match parse("x0 + * x1", 2) {
        Err(ChartError::Syntax { offset, .. }) => assert_eq!(offset, 5),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse("x3", 2), Err(ChartError::VariableOutOfRange { index: 3, dim: 2, .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bracket_matches_finite_differences(seed in any::<u64>(), dim in 1usize..=3) {
        let mut r = sampling::rng(seed);
        let x = sampling::vector_field(&mut r, dim, 3);
        let y = sampling::vector_field(&mut r, dim, 3);
        let p = sampling::in_box(&mut r, &Chart::unit(dim));
        let exact = lie_bracket(&x, &y, &p).unwrap();
        prop_assert!(scaled_residual_vec(&exact, &fd_bracket(&x, &y, &p)) < 1e-6);
        let warp: Vec<f64> = lie_bracket_via_warp(&x, &y, &p).unwrap();
        prop_assert!(scaled_residual_vec(&warp, &exact) < 1e-13);
    }

    #[test]
    fn bracket_is_antisymmetric(seed in any::<u64>(), dim in 1usize..=3) {
        let mut r = sampling::rng(seed);
        let x = sampling::vector_field(&mut r, dim, 3);
        let y = sampling::vector_field(&mut r, dim, 3);
        let p = sampling::in_box(&mut r, &Chart::unit(dim));
        let xy = lie_bracket(&x, &y, &p).unwrap();
        let yx: Vec<f64> = lie_bracket(&y, &x, &p).unwrap().iter().map(|v| -v).collect();
        prop_assert!(scaled_residual_vec(&xy, &yx) < 1e-14);
    }

    #[test]
    fn jacobi_identity_for_linear_fields(seed in any::<u64>(), dim in 1usize..=3) {
        // Linear fields close under the bracket, [Ax, Bx] = (BA − AB)x, so
        // nested brackets need only first derivatives of linear fields.
        let mut r = sampling::rng(seed);
        let mats: Vec<Vec<f64>> = (0..3).map(|_| sampling::unit_vec(&mut r, dim * dim)).collect();
        let pt = sampling::in_box(&mut r, &Chart::unit(dim));
        let commutator = |p: &[f64], q: &[f64]| -> Vec<f64> {
            (0..dim * dim)
                .map(|e| {
                    let (i, j) = (e / dim, e % dim);
                    (0..dim).map(|k| q[i * dim + k] * p[k * dim + j] - p[i * dim + k] * q[k * dim + j]).sum()
                })
                .collect()
        };
        let (a, b, c) = (&mats[0], &mats[1], &mats[2]);

        let ab = linear_field(dim, &commutator(a, b));
        prop_assert!(scaled_residual_vec(
            &lie_bracket(&linear_field(dim, a), &linear_field(dim, b), &pt).unwrap(),
            &eval(&ab, &pt).unwrap(),
        ) < 1e-14);

        let terms = [
            lie_bracket(&linear_field(dim, a), &linear_field(dim, &commutator(b, c)), &pt).unwrap(),
            lie_bracket(&linear_field(dim, b), &linear_field(dim, &commutator(c, a)), &pt).unwrap(),
            lie_bracket(&linear_field(dim, c), &ab, &pt).unwrap(),
        ];
        for i in 0..dim {
            prop_assert!((terms[0][i] + terms[1][i] + terms[2][i]).abs() < 1e-14);
        }
    }

    #[test]
    fn print_parse_roundtrip(seed in any::<u64>(), dim in 1usize..=4) {
        let mut r = sampling::rng(seed);
        let e = sampling::polynomial(&mut r, dim, 4, 5);
        let text = e.to_string();
        let again = parse(&text, dim).unwrap();
        prop_assert_eq!(again.to_string(), text);
        let p = sampling::in_box(&mut r, &Chart::unit(dim));
        prop_assert_eq!(e.eval(&p).unwrap(), again.eval(&p).unwrap());
    }
}
