mod common;

use std::f64::consts::{FRAC_PI_2, TAU};

use bellparity::bellcat::{
    closed_form_elements, dense_total_elements, local_elements, nonlocal_elements, oracle_elements,
    oracle_projections,
};
use bellparity::{parity_factor, Direction, StateParams};
use common::{arb_dir, arb_params, random_dir, random_params, rng, spin};
use proptest::prelude::*;

fn max_gap(x: [f64; 4], y: [f64; 4]) -> f64 {
    x.iter()
        .zip(&y)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

#[test]
fn closed_form_matches_oracle() {
    let mut r = rng(21);
    for i in 0..1000 {
        let s = spin(1 + i % 10);
        let p = random_params(&mut r, s);
        let (a, b) = (random_dir(&mut r), random_dir(&mut r));
        let closed = closed_form_elements(&p, &a, &b);
        let oracle = oracle_elements(&p, &a, &b);
        assert!(max_gap(closed.local, oracle.local) < 1e-12, "{p:?}");
        assert!(max_gap(closed.nonlocal, oracle.nonlocal) < 1e-12, "{p:?}");
    }
}

#[test]
fn spin_two_nonlocal_first_two_equal() {
    let mut r = rng(22);
    for _ in 0..100 {
        let p = random_params(&mut r, spin(4));
        let e = oracle_elements(&p, &random_dir(&mut r), &random_dir(&mut r));
        assert!((e.nonlocal[0] - e.nonlocal[1]).abs() < 1e-12);
    }
}

#[test]
fn spin_half_diagonal_sums_to_one() {
    let mut r = rng(23);
    for _ in 0..1000 {
        let p = random_params(&mut r, spin(1));
        let e = oracle_elements(&p, &random_dir(&mut r), &random_dir(&mut r));
        assert!((e.weight() - 1.0).abs() < 1e-12);
        assert!((e.local_weight() - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn parity_structure(p in arb_params(10), a in arb_dir(), b in arb_dir()) {
        let n = nonlocal_elements(&p, &a, &b);
        let f = parity_factor(p.spin);
        prop_assert_eq!(n[0], n[3]);
        prop_assert_eq!(n[1], n[2]);
        prop_assert!((n[1] - f * n[0]).abs() < 1e-12);
        let o = oracle_elements(&p, &a, &b).nonlocal;
        prop_assert!((o[1] - f * o[0]).abs() < 1e-12);
        prop_assert!((o[3] - o[0]).abs() < 1e-12);
    }

    #[test]
    fn oracle_projections_are_real(p in arb_params(10), a in arb_dir(), b in arb_dir()) {
        let (local, nonlocal) = oracle_projections(&p, &a, &b);
        for z in local.iter().chain(&nonlocal) {
            prop_assert!(z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn local_elements_bounded(p in arb_params(50), a in arb_dir(), b in arb_dir()) {
        let l = local_elements(&p, &a, &b);
        for x in l {
            prop_assert!((0.0..=1.0).contains(&x));
        }
        prop_assert!(l.iter().sum::<f64>() <= 1.0 + 1e-12);
    }

    #[test]
    fn total_weight_at_most_one(p in arb_params(10), a in arb_dir(), b in arb_dir()) {
        let e = closed_form_elements(&p, &a, &b);
        for x in e.total() {
            prop_assert!(x >= -1e-12);
        }
        prop_assert!(e.weight() <= 1.0 + 1e-12);
        let dense = dense_total_elements(&p, &a, &b);
        prop_assert!(max_gap(dense, e.total()) < 1e-12);
    }

    /// `xi -> pi/2 - xi, eta -> -eta` swaps the roles of `|+s,+s>` and
    /// `|-s,-s>`. With `phi -> -phi` for both directions it maps
    /// `(rho11, rho22) -> (rho44, rho33)` locally and fixes the non-local part.
    #[test]
    fn xi_reflection(p in arb_params(10), a in arb_dir(), b in arb_dir()) {
        let q = StateParams::new(p.spin, FRAC_PI_2 - p.xi, -p.eta).unwrap();
        let reflect = |d: &Direction| Direction::new(d.theta(), TAU - d.phi()).unwrap();
        let (ra, rb) = (reflect(&a), reflect(&b));
        let e = closed_form_elements(&p, &a, &b);
        let f = closed_form_elements(&q, &ra, &rb);
        let swapped = [e.local[3], e.local[2], e.local[1], e.local[0]];
        prop_assert!(max_gap(f.local, swapped) < 1e-12);
        prop_assert!(max_gap(f.nonlocal, e.nonlocal) < 1e-12);
        // without the azimuth reflection only the local part swaps
        let g = closed_form_elements(&q, &a, &b);
        prop_assert!(max_gap(g.local, swapped) < 1e-12);
    }

    #[test]
    fn product_state_has_no_interference(twice in 1u32..=20, eta in -3.0..3.0f64, a in arb_dir(), b in arb_dir()) {
        for xi in [0.0, FRAC_PI_2] {
            let p = StateParams::new(spin(twice), xi, eta).unwrap();
            let n = nonlocal_elements(&p, &a, &b);
            prop_assert!(n.iter().all(|x| x.abs() < 1e-15));
        }
    }
}
