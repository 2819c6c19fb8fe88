//! Algebraic laws of decomposed DVBs and their duals, over random shapes.

use proptest::prelude::*;

use dvbwarp::dvbcore::{
    core_difference, pair_a, pair_b, pair_cstar_a, pair_cstar_b, rm_da, rm_da_inverse, rm_db,
    solve_rm_db, solve_theorem31, solve_z_a, z_a, z_b, DvbElement, DvbError,
};
use dvbwarp::sampling;
use dvbwarp::scalar::{scaled_residual, scaled_residual_vec};
use dvbwarp::{Rational, RationalDvbElement};

fn q(r: &mut sampling::SampleRng, n: usize) -> Vec<Rational> {
    sampling::unit_vec(r, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn interchange_law_is_exact(seed in any::<u64>()) {
        let mut r = sampling::rng(seed);
        let s = sampling::shape(&mut r, 4, 2);
        let m = q(&mut r, s.base_dim);
        let (a1, a2, b1, b2) = (q(&mut r, s.dim_a), q(&mut r, s.dim_a), q(&mut r, s.dim_b), q(&mut r, s.dim_b));
        let mut el = |a: &[Rational], b: &[Rational]| {
            RationalDvbElement::new(m.clone(), a.to_vec(), b.to_vec(), q(&mut r, s.dim_c))
        };
        let (d11, d12, d21, d22) = (el(&a1, &b1), el(&a1, &b2), el(&a2, &b1), el(&a2, &b2));
        let lhs = d11.add_over_a(&d12).unwrap().add_over_b(&d21.add_over_a(&d22).unwrap()).unwrap();
        let rhs = d11.add_over_b(&d21).unwrap().add_over_a(&d12.add_over_b(&d22).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn scalar_interchange_is_exact(seed in any::<u64>()) {
        let mut r = sampling::rng(seed);
        let s = sampling::shape(&mut r, 3, 2);
        let d: RationalDvbElement = sampling::element(&mut r, s);
        let (t, u) = (q(&mut r, 1).remove(0), q(&mut r, 1).remove(0));
        prop_assert_eq!(d.scale_over_a(&t).scale_over_b(&u), d.scale_over_b(&u).scale_over_a(&t));
    }

    #[test]
    fn zeros_are_neutral(seed in any::<u64>()) {
        let mut r = sampling::rng(seed);
        let s = sampling::shape(&mut r, 3, 2);
        let d: RationalDvbElement = sampling::element(&mut r, s);
        let za = DvbElement::zero_over_a(s, d.m.clone(), d.a.clone());
        let zb = DvbElement::zero_over_b(s, d.m.clone(), d.b.clone());
        prop_assert_eq!(d.add_over_a(&za).unwrap(), d.clone());
        prop_assert_eq!(d.add_over_b(&zb).unwrap(), d.clone());
        prop_assert_eq!(d.flip().flip(), d);
    }

    #[test]
    fn core_difference_inverts_core_addition(seed in any::<u64>()) {
        let mut r = sampling::rng(seed);
        let s = sampling::shape(&mut r, 4, 2);
        let d: RationalDvbElement = sampling::element(&mut r, s);
        let c = q(&mut r, s.dim_c);
        // d +_A (c +_B 0_a)
        let lifted = DvbElement::core(s, d.m.clone(), c.clone())
            .add_over_b(&DvbElement::zero_over_a(s, d.m.clone(), d.a.clone()))
            .unwrap();
        let shifted = d.add_over_a(&lifted).unwrap();
        prop_assert_eq!(core_difference(&shifted, &d).unwrap(), c);
    }

    #[test]
    fn pairings_are_bilinear(seed in any::<u64>()) {
        let mut r = sampling::rng(seed);
        let s = sampling::shape(&mut r, 3, 2);
        let phi = sampling::dual_a::<Rational, _>(&mut r, s);
        let phi2 = sampling::dual_a_over(&mut r, s, &phi.m, &phi.kappa);
        let phi2 = dvbwarp::dvbcore::DualAElement { a: phi.a.clone(), ..phi2 };
        let t = q(&mut r, 1).remove(0);
        let d = RationalDvbElement::new(phi.m.clone(), phi.a.clone(), q(&mut r, s.dim_b), q(&mut r, s.dim_c));
        let e = RationalDvbElement::new(phi.m.clone(), phi.a.clone(), q(&mut r, s.dim_b), q(&mut r, s.dim_c));

        // Linear in d over A...
        let sum = d.add_over_a(&e).unwrap();
        prop_assert_eq!(pair_a(&phi, &sum).unwrap(), pair_a(&phi, &d).unwrap() + pair_a(&phi, &e).unwrap());
        prop_assert_eq!(pair_a(&phi, &d.scale_over_a(&t)).unwrap(), t.clone() * pair_a(&phi, &d).unwrap());
        // ...and in Φ within the fiber of D*_A over a.
        let phi_sum = phi.add_over_a(&phi2).unwrap();
        prop_assert_eq!(pair_a(&phi_sum, &d).unwrap(), pair_a(&phi, &d).unwrap() + pair_a(&phi2, &d).unwrap());

        let psi = sampling::dual_b::<Rational, _>(&mut r, s);
        let f = RationalDvbElement::new(psi.m.clone(), q(&mut r, s.dim_a), psi.b.clone(), q(&mut r, s.dim_c));
        let g = RationalDvbElement::new(psi.m.clone(), q(&mut r, s.dim_a), psi.b.clone(), q(&mut r, s.dim_c));
        prop_assert_eq!(
            pair_b(&psi, &f.add_over_b(&g).unwrap()).unwrap(),
            pair_b(&psi, &f).unwrap() + pair_b(&psi, &g).unwrap()
        );
    }

    #[test]
    fn rm_da_is_linear_over_cstar_and_invertible(seed in any::<u64>()) {
        let mut r = sampling::rng(seed);
        let s = sampling::shape(&mut r, 3, 2);
        let mb = sampling::iter_bc::<Rational, _>(&mut r, s);
        let mut other = sampling::iter_bc::<Rational, _>(&mut r, s);
        other.m = mb.m.clone();
        other.kappa = mb.kappa.clone();
        let t = q(&mut r, 1).remove(0);
        prop_assert_eq!(
            rm_da(&mb.add_over_cstar(&other).unwrap()),
            rm_da(&mb).add_over_cstar(&rm_da(&other)).unwrap()
        );
        prop_assert_eq!(rm_da(&mb.scale_over_cstar(&t)), rm_da(&mb).scale_over_cstar(&t));
        prop_assert_eq!(rm_da_inverse(&rm_da(&mb)), mb);
    }

    #[test]
    fn brute_force_solvers_agree_exactly(seed in any::<u64>()) {
        let mut r = sampling::rng(seed);
        let s = sampling::shape(&mut r, 3, 2);
        let mb = sampling::iter_bc::<Rational, _>(&mut r, s);
        prop_assert_eq!(solve_theorem31(&mb).unwrap(), rm_da(&mb));
        let phi = sampling::dual_a::<Rational, _>(&mut r, s);
        prop_assert_eq!(solve_z_a(&phi).unwrap(), z_a(&phi));
        let ma = sampling::iter_ac::<Rational, _>(&mut r, s);
        prop_assert_eq!(solve_rm_db(&ma).unwrap(), rm_db(&ma));
    }

    #[test]
    fn z_maps_realize_the_nonstandard_pairing(seed in any::<u64>()) {
        let mut r = sampling::rng(seed);
        let s = sampling::shape(&mut r, 3, 2);
        let phi = sampling::dual_a::<f64, _>(&mut r, s);
        let psi = sampling::dual_b_over(&mut r, s, &phi.m, &phi.kappa);
        let nsp = dvbwarp::dvbcore::nsp_ab(&phi, &psi).unwrap();
        prop_assert!(scaled_residual(pair_cstar_b(&z_a(&phi), &psi).unwrap(), nsp) < 1e-14);
        prop_assert!(scaled_residual(pair_cstar_a(&z_b(&psi), &phi).unwrap(), nsp) < 1e-14);
    }
}

#[test]
fn core_difference_routes_agree_over_many_samples() {
    for i in 0..1000 {
        let mut r = sampling::stream(9, i);
        let s = sampling::shape(&mut r, 4, 3);
        let d: RationalDvbElement = sampling::element(&mut r, s);
        let d2 = DvbElement { c: q(&mut r, s.dim_c), ..d.clone() };
        let c = core_difference(&d, &d2).expect("two routes agree");
        let expected: Vec<Rational> = d.c.iter().zip(&d2.c).map(|(x, y)| x - y).collect();
        assert_eq!(c, expected);
    }
}

#[test]
fn core_difference_rejects_mismatched_outlines() {
    let mut r = sampling::rng(3);
    let s = sampling::shape(&mut r, 3, 1);
    let d: RationalDvbElement = sampling::element(&mut r, s);
    let e: RationalDvbElement = sampling::element(&mut r, s);
    assert!(matches!(core_difference(&d, &e), Err(DvbError::Incompatible { .. })));
}

#[test]
fn single_precision_solve_is_close() {
    let mut r = sampling::rng(4);
    for _ in 0..50 {
        let s = sampling::shape(&mut r, 4, 1);
        let mb = sampling::iter_bc::<f32, _>(&mut r, s);
        match solve_theorem31(&mb) {
            Ok(phi) => {
                let expect = rm_da(&mb);
                let flat = |p: &dvbwarp::dvbcore::DualAElement<f32>| [p.a.clone(), p.beta.clone(), p.kappa.clone()].concat();
                assert!(scaled_residual_vec(&flat(&phi), &flat(&expect)) < 1e-5);
            }
            // The internal consistency check is calibrated for double
            // precision; a rejection is acceptable in f32, a wrong answer
            // is not.
            Err(DvbError::Inconsistent { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
}
