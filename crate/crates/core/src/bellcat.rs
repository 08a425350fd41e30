//! Parallel-polarization Bell cat state `c+|+s,+s> + c-|-s,-s>` and its
//! diagonal density-matrix elements in the coherent-outcome basis.
//!
//! The density operator splits into an interference-free mixture (local
//! part) and the two cross terms between the extreme kets (non-local part).
//! Closed forms live next to an oracle that evaluates the same elements by
//! projecting onto explicit Dicke-basis coherent states.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{self, coherent_state, overlap, powu, CoherentState, Direction, Sign, Spin};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateParams {
    pub spin: Spin,
    pub xi: f64,
    pub eta: f64,
}

impl StateParams {
    pub fn new(spin: Spin, xi: f64, eta: f64) -> Result<Self> {
        for (name, value) in [("xi", xi), ("eta", eta)] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
        }
        Ok(StateParams { spin, xi, eta })
    }

    /// `xi = pi/4, eta = 0`: the maximally entangled member of the family.
    pub fn maximal(spin: Spin) -> Self {
        StateParams {
            spin,
            xi: std::f64::consts::FRAC_PI_4,
            eta: 0.0,
        }
    }

    /// `(c+, c-) = (e^{i eta} cos xi, e^{-i eta} sin xi)`.
    pub fn coefficients(&self) -> (Complex64, Complex64) {
        (
            Complex64::from_polar(self.xi.cos(), self.eta),
            Complex64::from_polar(self.xi.sin(), -self.eta),
        )
    }

    /// Full two-spin state vector; entry `i * d + j` is `<m_i, m_j|psi>`.
    pub fn state_vector(&self) -> Vec<Complex64> {
        let d = self.spin.dim();
        let (cp, cm) = self.coefficients();
        let mut psi = vec![Complex64::new(0.0, 0.0); d * d];
        psi[0] = cp;
        psi[d * d - 1] = cm;
        psi
    }
}

/// The four product outcomes `|1> = |+a,+b>, |2> = |+a,-b>, |3> = |-a,+b>, |4> = |-a,-b>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    PlusPlus,
    PlusMinus,
    MinusPlus,
    MinusMinus,
}

impl Outcome {
    pub const ALL: [Outcome; 4] = [
        Outcome::PlusPlus,
        Outcome::PlusMinus,
        Outcome::MinusPlus,
        Outcome::MinusMinus,
    ];

    pub fn signs(self) -> (Sign, Sign) {
        match self {
            Outcome::PlusPlus => (Sign::Plus, Sign::Plus),
            Outcome::PlusMinus => (Sign::Plus, Sign::Minus),
            Outcome::MinusPlus => (Sign::Minus, Sign::Plus),
            Outcome::MinusMinus => (Sign::Minus, Sign::Minus),
        }
    }

    /// Diagonal element of `(s.a)(s.b)` normalized to the outcome values: +1 or -1.
    pub fn correlation_sign(self) -> f64 {
        let (a, b) = self.signs();
        a.value() * b.value()
    }

    pub fn label(self) -> usize {
        self as usize + 1
    }
}

/// Diagonal elements `rho_ii` split into local and non-local parts,
/// indexed by [`Outcome`] order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "ElementsRecord", into = "ElementsRecord")]
pub struct DensityElements {
    pub local: [f64; 4],
    pub nonlocal: [f64; 4],
}

impl DensityElements {
    pub fn total(&self) -> [f64; 4] {
        std::array::from_fn(|i| self.local[i] + self.nonlocal[i])
    }

    /// Sum of the local elements.
    pub fn local_weight(&self) -> f64 {
        self.local.iter().sum()
    }

    /// Probability captured by the four coherent outcomes.
    pub fn weight(&self) -> f64 {
        self.total().iter().sum()
    }
}

#[derive(Serialize, Deserialize)]
struct ElementsRecord {
    rho11_lc: f64,
    rho22_lc: f64,
    rho33_lc: f64,
    rho44_lc: f64,
    rho11_nlc: f64,
    rho22_nlc: f64,
    rho33_nlc: f64,
    rho44_nlc: f64,
}

impl From<DensityElements> for ElementsRecord {
    fn from(e: DensityElements) -> Self {
        let [rho11_lc, rho22_lc, rho33_lc, rho44_lc] = e.local;
        let [rho11_nlc, rho22_nlc, rho33_nlc, rho44_nlc] = e.nonlocal;
        ElementsRecord {
            rho11_lc,
            rho22_lc,
            rho33_lc,
            rho44_lc,
            rho11_nlc,
            rho22_nlc,
            rho33_nlc,
            rho44_nlc,
        }
    }
}

impl From<ElementsRecord> for DensityElements {
    fn from(r: ElementsRecord) -> Self {
        DensityElements {
            local: [r.rho11_lc, r.rho22_lc, r.rho33_lc, r.rho44_lc],
            nonlocal: [r.rho11_nlc, r.rho22_nlc, r.rho33_nlc, r.rho44_nlc],
        }
    }
}

/// Geometric phase `e^{i 2 s pi} = (-1)^{2s}` picked up by reversed-direction outcomes.
pub fn parity_factor(spin: Spin) -> f64 {
    if spin.is_integer() {
        1.0
    } else {
        -1.0
    }
}

pub fn local_elements(p: &StateParams, a: &Direction, b: &Direction) -> [f64; 4] {
    let n = 2 * p.spin.twice();
    let (ka, ga) = a.half_angle_powers(n);
    let (kb, gb) = b.half_angle_powers(n);
    let c2 = p.xi.cos().powi(2);
    let s2 = p.xi.sin().powi(2);
    [
        c2 * ka * kb + s2 * ga * gb,
        c2 * ka * gb + s2 * ga * kb,
        c2 * ga * kb + s2 * ka * gb,
        c2 * ga * gb + s2 * ka * kb,
    ]
}

pub fn nonlocal_elements(p: &StateParams, a: &Direction, b: &Direction) -> [f64; 4] {
    let twice = p.spin.twice();
    let s2 = f64::from(twice);
    let (sa, ca) = (a.theta() / 2.0).sin_cos();
    let (sb, cb) = (b.theta() / 2.0).sin_cos();
    let phase = s2 * (a.phi() + b.phi()) + 2.0 * p.eta;
    let same =
        2.0 * p.xi.sin() * p.xi.cos() * powu(ca * sa, twice) * powu(cb * sb, twice) * phase.cos();
    let reversed = parity_factor(p.spin) * same;
    [same, reversed, reversed, same]
}

pub fn closed_form_elements(p: &StateParams, a: &Direction, b: &Direction) -> DensityElements {
    DensityElements {
        local: local_elements(p, a, b),
        nonlocal: nonlocal_elements(p, a, b),
    }
}

/// Complex projections `(<i|rho_lc|i>, <i|rho_nlc|i>)` for each outcome,
/// evaluated from explicit coherent-state kets and single-spin overlaps.
///
/// Both operators are kept in their rank-two form over the product kets
/// `|+s,+s>` and `|-s,-s>`, so each element is a product of four overlaps.
pub fn oracle_projections(
    p: &StateParams,
    a: &Direction,
    b: &Direction,
) -> ([Complex64; 4], [Complex64; 4]) {
    let top = CoherentState::extreme(p.spin, Sign::Plus);
    let bottom = CoherentState::extreme(p.spin, Sign::Minus);
    let (cp, cm) = p.coefficients();
    let mut local = [Complex64::new(0.0, 0.0); 4];
    let mut nonlocal = [Complex64::new(0.0, 0.0); 4];
    for (i, outcome) in Outcome::ALL.into_iter().enumerate() {
        let (sa, sb) = outcome.signs();
        let alpha = coherent_state(p.spin, a, sa);
        let beta = coherent_state(p.spin, b, sb);
        // <alpha beta | +s,+s> and <alpha beta | -s,-s>
        let up = overlap(&alpha, &top).unwrap() * overlap(&beta, &top).unwrap();
        let down = overlap(&alpha, &bottom).unwrap() * overlap(&beta, &bottom).unwrap();
        local[i] = cp.norm_sqr() * up * up.conj() + cm.norm_sqr() * down * down.conj();
        nonlocal[i] = cp * cm.conj() * up * down.conj() + cm * cp.conj() * down * up.conj();
    }
    (local, nonlocal)
}

/// Ground-truth density elements from explicit projections.
pub fn oracle_elements(p: &StateParams, a: &Direction, b: &Direction) -> DensityElements {
    let (local, nonlocal) = oracle_projections(p, a, b);
    DensityElements {
        local: local.map(|z| z.re),
        nonlocal: nonlocal.map(|z| z.re),
    }
}

/// Total elements `|<alpha beta|psi>|^2` from the dense `(2s+1)^2` state vector.
pub fn dense_total_elements(p: &StateParams, a: &Direction, b: &Direction) -> [f64; 4] {
    let d = p.spin.dim();
    let psi = p.state_vector();
    Outcome::ALL.map(|outcome| {
        let (sa, sb) = outcome.signs();
        let alpha = coherent_state(p.spin, a, sa);
        let beta = coherent_state(p.spin, b, sb);
        let mut amp = Complex64::new(0.0, 0.0);
        for (i, x) in alpha.amplitudes().iter().enumerate() {
            for (j, y) in beta.amplitudes().iter().enumerate() {
                amp += (x * y).conj() * psi[i * d + j];
            }
        }
        amp.norm_sqr()
    })
}

fn projection_operator(spin: Spin, dir: &Direction) -> DMatrix<Complex64> {
    let (sx, sy) = spin::spin_matrices(spin);
    let [x, y, z] = dir.unit_vector();
    sx * Complex64::new(x, 0.0)
        + sy * Complex64::new(y, 0.0)
        + spin::spin_z(spin) * Complex64::new(z, 0.0)
}

/// Full-operator expectation `<(s.a)(s.b)>/s^2`. Coincides with the
/// four-outcome correlation only at `s = 1/2`; kept for comparison.
pub fn spin_operator_correlation(p: &StateParams, a: &Direction, b: &Direction) -> f64 {
    let d = p.spin.dim();
    let op_a = projection_operator(p.spin, a);
    let op_b = projection_operator(p.spin, b);
    let (cp, cm) = p.coefficients();
    let terms = [(0usize, cp), (d - 1, cm)];
    let mut acc = Complex64::new(0.0, 0.0);
    for &(i, ci) in &terms {
        for &(j, cj) in &terms {
            acc += ci.conj() * cj * op_a[(i, j)] * op_b[(i, j)];
        }
    }
    acc.re / (p.spin.value() * p.spin.value())
}
