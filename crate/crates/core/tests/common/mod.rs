#![allow(dead_code)]

use bellparity::montecarlo::{batch_rng, uniform};
use bellparity::{Direction, Spin, StateParams};
use proptest::prelude::*;
use rand_xoshiro::Xoshiro256PlusPlus;
use std::f64::consts::{PI, TAU};

pub fn spin(twice: u32) -> Spin {
    Spin::from_twice(twice).unwrap()
}

pub fn rng(seed: u64) -> Xoshiro256PlusPlus {
    batch_rng(seed, 0)
}

pub fn random_dir(rng: &mut Xoshiro256PlusPlus) -> Direction {
    let z = 2.0 * uniform(rng) - 1.0;
    Direction::new(z.acos(), TAU * uniform(rng)).unwrap()
}

pub fn random_params(rng: &mut Xoshiro256PlusPlus, spin: Spin) -> StateParams {
    StateParams::new(spin, PI * uniform(rng), TAU * uniform(rng) - PI).unwrap()
}

pub fn arb_dir() -> impl Strategy<Value = Direction> {
    (0.0..=PI, 0.0..TAU).prop_map(|(t, p)| Direction::new(t, p).unwrap())
}

pub fn arb_params(max_twice: u32) -> impl Strategy<Value = StateParams> {
    (1..=max_twice, -PI..PI, -PI..PI)
        .prop_map(|(twice, xi, eta)| StateParams::new(spin(twice), xi, eta).unwrap())
}
