//! Outcome correlations and the two inequalities tested against them.

use serde::{Deserialize, Serialize};

use crate::bellcat::{
    closed_form_elements, oracle_elements, DensityElements, Outcome, StateParams,
};
use crate::spin::Direction;

/// Absolute slack allowed before a bound counts as violated.
pub const VIOLATION_TOL: f64 = 1e-12;

/// Classical CHSH bound.
pub const CHSH_CLASSICAL: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    ClosedForm,
    Oracle,
}

/// Which part of the density operator enters an inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    LocalOnly,
    #[default]
    Total,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationBreakdown {
    pub p_lc: f64,
    pub p_nlc: f64,
    pub p_total: f64,
    /// Probability carried by the four coherent outcomes.
    pub w: f64,
}

impl CorrelationBreakdown {
    pub fn from_elements(e: &DensityElements) -> Self {
        let signed = |rho: &[f64; 4]| -> f64 {
            Outcome::ALL
                .iter()
                .zip(rho)
                .map(|(o, r)| o.correlation_sign() * r)
                .sum()
        };
        let p_lc = signed(&e.local);
        let p_nlc = signed(&e.nonlocal);
        CorrelationBreakdown {
            p_lc,
            p_nlc,
            p_total: p_lc + p_nlc,
            w: e.weight(),
        }
    }

    pub fn part(&self, which: Part) -> f64 {
        match which {
            Part::LocalOnly => self.p_lc,
            Part::Total => self.p_total,
        }
    }
}

pub fn elements(p: &StateParams, a: &Direction, b: &Direction, mode: Mode) -> DensityElements {
    match mode {
        Mode::ClosedForm => closed_form_elements(p, a, b),
        Mode::Oracle => oracle_elements(p, a, b),
    }
}

pub fn correlate(
    p: &StateParams,
    a: &Direction,
    b: &Direction,
    mode: Mode,
) -> CorrelationBreakdown {
    CorrelationBreakdown::from_elements(&elements(p, a, b, mode))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellTriple {
    pub params: StateParams,
    pub a: Direction,
    pub b: Direction,
    pub c: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshQuad {
    pub params: StateParams,
    pub a: Direction,
    pub b: Direction,
    pub c: Direction,
    pub d: Direction,
}

/// Both sides of `|P(ab) - P(ac)| <= 1 - P(bc)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellOutcome {
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
}

impl BellOutcome {
    fn new(lhs: f64, rhs: f64) -> Self {
        BellOutcome {
            lhs,
            rhs,
            violated: lhs > rhs + VIOLATION_TOL,
        }
    }

    /// `lhs - rhs`; positive exactly when the inequality fails.
    pub fn margin(&self) -> f64 {
        self.lhs - self.rhs
    }
}

pub fn bell_lhs_rhs(t: &BellTriple, which: Part) -> BellOutcome {
    bell_lhs_rhs_with(t, which, Mode::ClosedForm)
}

pub fn bell_lhs_rhs_with(t: &BellTriple, which: Part, mode: Mode) -> BellOutcome {
    let p = |x: &Direction, y: &Direction| correlate(&t.params, x, y, mode).part(which);
    let lhs = (p(&t.a, &t.b) - p(&t.a, &t.c)).abs();
    let rhs = 1.0 - p(&t.b, &t.c);
    BellOutcome::new(lhs, rhs)
}

/// `|P(ab) + P(ac) + P(db) - P(dc)|`.
pub fn chsh(q: &ChshQuad, which: Part) -> f64 {
    chsh_with(q, which, Mode::ClosedForm)
}

pub fn chsh_with(q: &ChshQuad, which: Part, mode: Mode) -> f64 {
    let p = |x: &Direction, y: &Direction| correlate(&q.params, x, y, mode).part(which);
    (p(&q.a, &q.b) + p(&q.a, &q.c) + p(&q.d, &q.b) - p(&q.d, &q.c)).abs()
}
