//! Single spin-s kinematics in the Dicke basis.
//!
//! Every amplitude vector in this crate is ordered by descending magnetic
//! quantum number, `m = s, s-1, ..., -s`; index `k` holds `m = s - k`.

use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A spin quantum number, stored as the integer `2s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Spin(u32);

impl Spin {
    /// Largest supported `2s`; keeps `binom(50, 25)` inside a `u64`.
    pub const MAX_TWICE: u32 = 50;

    pub const HALF: Spin = Spin(1);
    pub const ONE: Spin = Spin(2);

    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice == 0 || twice > Self::MAX_TWICE {
            return Err(Error::SpinOutOfRange {
                got: twice,
                max: Self::MAX_TWICE,
            });
        }
        Ok(Spin(twice))
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// Hilbert-space dimension `2s + 1`.
    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    pub fn is_integer(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Magnetic quantum number held at Dicke index `k`.
    pub fn m_at(self, k: usize) -> f64 {
        self.value() - k as f64
    }

    /// All spins from 1/2 up to and including `self`.
    pub fn up_to(self) -> impl Iterator<Item = Spin> {
        (1..=self.0).map(Spin)
    }
}

impl TryFrom<u32> for Spin {
    type Error = Error;

    fn try_from(twice: u32) -> Result<Self> {
        Spin::from_twice(twice)
    }
}

impl From<Spin> for u32 {
    fn from(s: Spin) -> u32 {
        s.0
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// A unit measurement direction given by polar and azimuthal angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    pub const NORTH: Direction = Direction {
        theta: 0.0,
        phi: 0.0,
    };

    /// Requires `theta` in `[0, pi]`; `phi` is wrapped into `[0, 2pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFinite {
                name: "theta",
                value: theta,
            });
        }
        if !phi.is_finite() {
            return Err(Error::NonFinite {
                name: "phi",
                value: phi,
            });
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::PolarAngle(theta));
        }
        Ok(Direction {
            theta,
            phi: wrap_azimuth(phi),
        })
    }

    /// Maps arbitrary finite angles onto the same point of the sphere with
    /// `theta` folded back into `[0, pi]`.
    pub fn from_unbounded(theta: f64, phi: f64) -> Self {
        let mut t = theta.rem_euclid(TAU);
        let mut p = phi;
        if t > PI {
            t = TAU - t;
            p += PI;
        }
        Direction {
            theta: t.clamp(0.0, PI),
            phi: wrap_azimuth(p),
        }
    }

    /// Direction at signed angle `alpha` from `+z` inside the x-z plane.
    /// Negative angles land on the `phi = pi` half-plane.
    pub fn in_plane(alpha: f64) -> Self {
        let a = (alpha + PI).rem_euclid(TAU) - PI;
        if a < 0.0 {
            Direction { theta: -a, phi: PI }
        } else {
            Direction { theta: a, phi: 0.0 }
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        let a = self.unit_vector();
        let b = other.unit_vector();
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    /// `(cos^m(theta/2), sin^m(theta/2))`.
    pub fn half_angle_powers(&self, m: u32) -> (f64, f64) {
        let (s, c) = (self.theta / 2.0).sin_cos();
        (powu(c, m), powu(s, m))
    }
}

fn wrap_azimuth(phi: f64) -> f64 {
    let p = phi.rem_euclid(TAU);
    if p >= TAU {
        0.0
    } else {
        p
    }
}

pub(crate) fn powu(x: f64, n: u32) -> f64 {
    x.powi(n as i32)
}

/// Exact `binom(n, k)` for `n <= 62`.
pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc * u64::from(n - i) / u64::from(i + 1);
    }
    acc
}

/// Which extreme eigenvalue of `s . a` a coherent state carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherentState {
    spin: Spin,
    amplitudes: Vec<Complex64>,
}

impl CoherentState {
    pub fn from_amplitudes(spin: Spin, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != spin.dim() {
            return Err(Error::DimensionMismatch {
                left: amplitudes.len(),
                right: spin.dim(),
            });
        }
        Ok(CoherentState { spin, amplitudes })
    }

    /// The Dicke ket `|+s>` or `|-s>`.
    pub fn extreme(spin: Spin, sign: Sign) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); spin.dim()];
        let k = match sign {
            Sign::Plus => 0,
            Sign::Minus => spin.dim() - 1,
        };
        amplitudes[k] = Complex64::new(1.0, 0.0);
        CoherentState { spin, amplitudes }
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Representative with the highest-m nonzero amplitude real and non-negative.
    pub fn canonical(&self) -> CoherentState {
        let lead = self.amplitudes.iter().find(|a| a.norm() > 1e-12);
        let phase = match lead {
            Some(a) => a.conj() / a.norm(),
            None => Complex64::new(1.0, 0.0),
        };
        CoherentState {
            spin: self.spin,
            amplitudes: self.amplitudes.iter().map(|a| a * phase).collect(),
        }
    }
}

/// Closed-form Dicke expansion of the spin coherent state `|+a>_s` or `|-a>_s`.
pub fn coherent_state(spin: Spin, dir: &Direction, sign: Sign) -> CoherentState {
    let n = spin.twice();
    let (sh, ch) = (dir.theta() / 2.0).sin_cos();
    let amplitudes = (0..=n)
        .map(|k| {
            // k = s - m
            let (weight, phase) = match sign {
                Sign::Plus => (
                    (binomial(n, n - k) as f64).sqrt() * powu(ch, n - k) * powu(sh, k),
                    f64::from(k) * dir.phi(),
                ),
                Sign::Minus => (
                    (binomial(n, k) as f64).sqrt() * powu(ch, k) * powu(sh, n - k),
                    f64::from(k) * (dir.phi() + PI),
                ),
            };
            Complex64::from_polar(weight, phase)
        })
        .collect();
    CoherentState { spin, amplitudes }
}

/// Spin matrices `(s_x, s_y)` built from ladder-operator matrix elements.
pub fn spin_matrices(spin: Spin) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let d = spin.dim();
    let s = spin.value();
    let mut raise = DMatrix::<Complex64>::zeros(d, d);
    for k in 1..d {
        let m = spin.m_at(k);
        raise[(k - 1, k)] = Complex64::new((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let sx = (&raise + &lower) * Complex64::new(0.5, 0.0);
    let sy = (&raise - &lower) * Complex64::new(0.0, -0.5);
    (sx, sy)
}

/// Diagonal `s_z` in the descending Dicke order.
pub fn spin_z(spin: Spin) -> DMatrix<Complex64> {
    DMatrix::from_fn(spin.dim(), spin.dim(), |i, j| {
        if i == j {
            Complex64::new(spin.m_at(i), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `exp(i t H)` for Hermitian `H`, through its eigendecomposition.
pub fn unitary_exp(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(h.clone());
    let phases = DMatrix::from_diagonal(&DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues
            .iter()
            .map(|&l| Complex64::from_polar(1.0, t * l)),
    ));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// Coherent state generated as `exp(i theta n . s) |+-s>`, with the rotation
/// axis `n = (sin phi, -cos phi, 0)` carrying `+z` onto the direction.
pub fn rotation_oracle(spin: Spin, dir: &Direction, sign: Sign) -> CoherentState {
    let (sx, sy) = spin_matrices(spin);
    let (sp, cp) = dir.phi().sin_cos();
    let generator = sx * Complex64::new(sp, 0.0) - sy * Complex64::new(cp, 0.0);
    let rotation = unitary_exp(&generator, dir.theta());
    let column = match sign {
        Sign::Plus => 0,
        Sign::Minus => spin.dim() - 1,
    };
    CoherentState {
        spin,
        amplitudes: rotation.column(column).iter().copied().collect(),
    }
}

/// `<x|y>`, conjugating `x`.
pub fn overlap(x: &CoherentState, y: &CoherentState) -> Result<Complex64> {
    if x.amplitudes.len() != y.amplitudes.len() {
        return Err(Error::DimensionMismatch {
            left: x.amplitudes.len(),
            right: y.amplitudes.len(),
        });
    }
    Ok(x.amplitudes
        .iter()
        .zip(&y.amplitudes)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn spin(twice: u32) -> Spin {
        Spin::from_twice(twice).unwrap()
    }

    fn dir(theta: f64, phi: f64) -> Direction {
        Direction::new(theta, phi).unwrap()
    }

    fn close(a: Complex64, re: f64, im: f64, tol: f64) -> bool {
        (a.re - re).abs() < tol && (a.im - im).abs() < tol
    }

    #[test]
    fn spin_bounds() {
        assert!(Spin::from_twice(0).is_err());
        assert!(Spin::from_twice(51).is_err());
        assert_eq!(spin(50).dim(), 51);
        assert!(spin(4).is_integer());
        assert!(!spin(3).is_integer());
        assert_eq!(spin(3).to_string(), "3/2");
        assert_eq!(spin(4).to_string(), "2");
    }

    #[test]
    fn direction_validation() {
        assert!(Direction::new(-0.1, 0.0).is_err());
        assert!(Direction::new(PI + 1e-9, 0.0).is_err());
        assert!(Direction::new(f64::NAN, 0.0).is_err());
        assert!(Direction::new(1.0, f64::INFINITY).is_err());
        let d = dir(1.0, -FRAC_PI_2);
        assert!((d.phi() - 3.0 * FRAC_PI_2).abs() < 1e-15);
        let v = d.unit_vector();
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        assert!((n - 1.0).abs() < 1e-14);
    }

    #[test]
    fn unbounded_and_in_plane_fold_onto_sphere() {
        let d = Direction::from_unbounded(-FRAC_PI_4, 0.0);
        assert!((d.theta() - FRAC_PI_4).abs() < 1e-15);
        assert!((d.phi() - PI).abs() < 1e-15);
        let e = Direction::in_plane(-FRAC_PI_4);
        assert_eq!((e.theta(), e.phi()), (FRAC_PI_4, PI));
        let raw = [
            0.3_f64.sin() * 2.0_f64.cos(),
            0.3_f64.sin() * 2.0_f64.sin(),
            0.3_f64.cos(),
        ];
        let f = Direction::from_unbounded(0.3 + TAU, 2.0 - TAU).unit_vector();
        for i in 0..3 {
            assert!((raw[i] - f[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn half_angle_powers_examples() {
        assert_eq!(dir(0.0, 0.0).half_angle_powers(2), (1.0, 0.0));
        let (k, g) = dir(FRAC_PI_2, 0.0).half_angle_powers(2);
        assert!((k - 0.5).abs() < 1e-15 && (g - 0.5).abs() < 1e-15);
        // cos^4(pi/6) = 9/16, sin^4(pi/6) = 1/16
        let (k, g) = dir(FRAC_PI_3, 0.0).half_angle_powers(4);
        assert!((k - 0.5625).abs() < 1e-15 && (g - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn binomial_exact() {
        assert_eq!(binomial(50, 25), 126_410_606_437_752);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(7, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        for n in 1..=50u32 {
            for k in 1..n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }

    #[test]
    fn spin_half_matches_pole_gauges() {
        let (theta, phi) = (1.1, 0.7);
        let plus = coherent_state(Spin::HALF, &dir(theta, phi), Sign::Plus);
        let a = plus.amplitudes();
        assert!(close(a[0], (theta / 2.0).cos(), 0.0, 1e-15));
        let lower = Complex64::from_polar((theta / 2.0).sin(), phi);
        assert!((a[1] - lower).norm() < 1e-15);
        let minus = coherent_state(Spin::HALF, &dir(theta, phi), Sign::Minus);
        let b = minus.amplitudes();
        assert!(close(b[0], (theta / 2.0).sin(), 0.0, 1e-15));
        assert!((b[1] + Complex64::from_polar((theta / 2.0).cos(), phi)).norm() < 1e-15);
    }

    #[test]
    fn spin_one_equator() {
        let st = coherent_state(Spin::ONE, &dir(FRAC_PI_2, 0.0), Sign::Plus);
        let a = st.amplitudes();
        assert!(close(a[0], 0.5, 0.0, 1e-15));
        assert!(close(a[1], FRAC_1_SQRT_2, 0.0, 1e-15));
        assert!(close(a[2], 0.5, 0.0, 1e-15));
        let oracle = rotation_oracle(Spin::ONE, &dir(FRAC_PI_2, 0.0), Sign::Plus).canonical();
        for (x, y) in oracle.amplitudes().iter().zip(a) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn pole_is_extreme_ket() {
        let st = coherent_state(spin(3), &dir(0.0, 2.3), Sign::Minus);
        let want = [0.0, 0.0, 0.0, 1.0];
        for (a, w) in st.amplitudes().iter().zip(want) {
            assert!((a.norm() - w).abs() < 1e-15);
        }
        assert_eq!(
            coherent_state(spin(3), &dir(0.0, 2.3), Sign::Plus).amplitudes()[0],
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn rotation_full_flip() {
        let st = rotation_oracle(Spin::HALF, &dir(PI, 0.0), Sign::Plus);
        let a = st.amplitudes();
        assert!(a[0].norm() < 1e-15);
        assert!(close(a[1], 1.0, 0.0, 1e-15));
    }

    #[test]
    fn rotation_oracle_unitary() {
        let s = spin(7);
        let (sx, sy) = spin_matrices(s);
        let h = sx * Complex64::new(0.3, 0.0) + sy * Complex64::new(-0.8, 0.0);
        let u = unitary_exp(&h, 1.7);
        let id = &u * u.adjoint();
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((id[(i, j)] - Complex64::new(want, 0.0)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn spin_matrix_commutator() {
        // [s_x, s_y] = i s_z
        let s = spin(5);
        let (sx, sy) = spin_matrices(s);
        let comm = &sx * &sy - &sy * &sx;
        let want = spin_z(s) * Complex64::new(0.0, 1.0);
        assert!((comm - want).norm() < 1e-12);
    }

    #[test]
    fn overlap_examples() {
        let a = coherent_state(Spin::HALF, &dir(0.0, 0.0), Sign::Plus);
        let b = coherent_state(Spin::HALF, &dir(FRAC_PI_2, 0.0), Sign::Plus);
        let o = overlap(&a, &b).unwrap();
        assert!(close(o, FRAC_PI_4.cos(), 0.0, 1e-15));
        let d = dir(0.9, 4.0);
        let p = coherent_state(spin(6), &d, Sign::Plus);
        let m = coherent_state(spin(6), &d, Sign::Minus);
        assert!((overlap(&p, &p).unwrap() - 1.0).norm() < 1e-14);
        assert!(overlap(&p, &m).unwrap().norm() < 1e-14);
    }

    #[test]
    fn overlap_dimension_mismatch() {
        let a = CoherentState::extreme(Spin::HALF, Sign::Plus);
        let b = CoherentState::extreme(Spin::ONE, Sign::Plus);
        assert_eq!(
            overlap(&a, &b),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn amplitudes_serialize_as_pairs() {
        let st = coherent_state(Spin::HALF, &dir(FRAC_PI_2, FRAC_PI_2), Sign::Plus);
        let v: serde_json::Value = serde_json::to_value(&st).unwrap();
        assert_eq!(v["spin"], 1);
        let amps = v["amplitudes"].as_array().unwrap();
        assert_eq!(amps.len(), 2);
        assert_eq!(amps[0].as_array().unwrap().len(), 2);
        let back: CoherentState = serde_json::from_value(v).unwrap();
        assert_eq!(back, st);
    }

    #[test]
    fn canonical_fixes_leading_phase() {
        let st = coherent_state(spin(2), &dir(0.4, 1.0), Sign::Minus);
        let rotated = CoherentState::from_amplitudes(
            st.spin(),
            st.amplitudes()
                .iter()
                .map(|a| a * Complex64::from_polar(1.0, 2.2))
                .collect(),
        )
        .unwrap();
        let (x, y) = (st.canonical(), rotated.canonical());
        assert!(x.amplitudes()[0].im.abs() < 1e-15 && x.amplitudes()[0].re > 0.0);
        for (a, b) in x.amplitudes().iter().zip(y.amplitudes()) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
