//! Flat output records shared by the JSON and CSV emitters.
//!
//! Every record starts with `schema_version`. Field order is the CSV column
//! order. Unused direction slots are empty in CSV and `null` in JSON.

use serde::{Deserialize, Serialize};

use crate::bellcat::StateParams;
use crate::correlation::{
    BellOutcome, CorrelationBreakdown, Mode, Part, CHSH_CLASSICAL, VIOLATION_TOL,
};
use crate::montecarlo::SampleStats;
use crate::search::{Objective, ViolationReport};
use crate::spin::Direction;
use crate::DensityElements;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRecord {
    pub schema_version: u32,
    pub s2: u32,
    pub xi: f64,
    pub eta: f64,
    pub theta_a: f64,
    pub phi_a: f64,
    pub theta_b: f64,
    pub phi_b: f64,
    pub p_lc: f64,
    pub p_nlc: f64,
    pub p_total: f64,
    #[serde(rename = "W")]
    pub w: f64,
    pub mode: Mode,
    pub rho11_lc: f64,
    pub rho22_lc: f64,
    pub rho33_lc: f64,
    pub rho44_lc: f64,
    pub rho11_nlc: f64,
    pub rho22_nlc: f64,
    pub rho33_nlc: f64,
    pub rho44_nlc: f64,
}

impl CorrelationRecord {
    pub fn new(
        p: &StateParams,
        a: &Direction,
        b: &Direction,
        mode: Mode,
        elements: &DensityElements,
    ) -> Self {
        let c = CorrelationBreakdown::from_elements(elements);
        let [rho11_lc, rho22_lc, rho33_lc, rho44_lc] = elements.local;
        let [rho11_nlc, rho22_nlc, rho33_nlc, rho44_nlc] = elements.nonlocal;
        CorrelationRecord {
            schema_version: SCHEMA_VERSION,
            s2: p.spin.twice(),
            xi: p.xi,
            eta: p.eta,
            theta_a: a.theta(),
            phi_a: a.phi(),
            theta_b: b.theta(),
            phi_b: b.phi(),
            p_lc: c.p_lc,
            p_nlc: c.p_nlc,
            p_total: c.p_total,
            w: c.w,
            mode,
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

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellRecord {
    pub schema_version: u32,
    pub s2: u32,
    pub xi: f64,
    pub eta: f64,
    pub theta_a: f64,
    pub phi_a: f64,
    pub theta_b: f64,
    pub phi_b: f64,
    pub theta_c: f64,
    pub phi_c: f64,
    pub which: Part,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub violated: bool,
}

impl BellRecord {
    pub fn new(p: &StateParams, dirs: &[Direction; 3], which: Part, r: &BellOutcome) -> Self {
        let [a, b, c] = dirs;
        BellRecord {
            schema_version: SCHEMA_VERSION,
            s2: p.spin.twice(),
            xi: p.xi,
            eta: p.eta,
            theta_a: a.theta(),
            phi_a: a.phi(),
            theta_b: b.theta(),
            phi_b: b.phi(),
            theta_c: c.theta(),
            phi_c: c.phi(),
            which,
            lhs: r.lhs,
            rhs: r.rhs,
            margin: r.margin(),
            violated: r.violated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshRecord {
    pub schema_version: u32,
    pub s2: u32,
    pub xi: f64,
    pub eta: f64,
    pub theta_a: f64,
    pub phi_a: f64,
    pub theta_b: f64,
    pub phi_b: f64,
    pub theta_c: f64,
    pub phi_c: f64,
    pub theta_d: f64,
    pub phi_d: f64,
    pub which: Part,
    pub value: f64,
    pub bound: f64,
    pub violated: bool,
}

impl ChshRecord {
    pub fn new(p: &StateParams, dirs: &[Direction; 4], which: Part, value: f64) -> Self {
        let [a, b, c, d] = dirs;
        ChshRecord {
            schema_version: SCHEMA_VERSION,
            s2: p.spin.twice(),
            xi: p.xi,
            eta: p.eta,
            theta_a: a.theta(),
            phi_a: a.phi(),
            theta_b: b.theta(),
            phi_b: b.phi(),
            theta_c: c.theta(),
            phi_c: c.phi(),
            theta_d: d.theta(),
            phi_d: d.phi(),
            which,
            value,
            bound: CHSH_CLASSICAL,
            violated: value > CHSH_CLASSICAL + VIOLATION_TOL,
        }
    }
}

/// One row of a search or parity sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub schema_version: u32,
    pub s2: u32,
    pub s: String,
    pub objective: Objective,
    pub best_value: f64,
    pub bound: f64,
    pub violated: bool,
    pub grid_value: f64,
    pub xi: f64,
    pub eta: f64,
    pub theta_a: Option<f64>,
    pub phi_a: Option<f64>,
    pub theta_b: Option<f64>,
    pub phi_b: Option<f64>,
    pub theta_c: Option<f64>,
    pub phi_c: Option<f64>,
    pub theta_d: Option<f64>,
    pub phi_d: Option<f64>,
}

impl From<&ViolationReport> for SweepRecord {
    fn from(r: &ViolationReport) -> Self {
        let angle = |i: usize| r.best_angles.get(i).map(|d| (d.theta(), d.phi()));
        let (theta_a, phi_a) = angle(0).unzip();
        let (theta_b, phi_b) = angle(1).unzip();
        let (theta_c, phi_c) = angle(2).unzip();
        let (theta_d, phi_d) = angle(3).unzip();
        SweepRecord {
            schema_version: SCHEMA_VERSION,
            s2: r.spin.twice(),
            s: r.spin.to_string(),
            objective: r.objective,
            best_value: r.best_value,
            bound: r.bound,
            violated: r.violated,
            grid_value: r.grid_value,
            xi: r.best_state.0,
            eta: r.best_state.1,
            theta_a,
            phi_a,
            theta_b,
            phi_b,
            theta_c,
            phi_c,
            theta_d,
            phi_d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    Quantum,
    Lhv,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub schema_version: u32,
    pub kind: SampleKind,
    pub s2: Option<u32>,
    pub xi: Option<f64>,
    pub eta: Option<f64>,
    pub theta_a: f64,
    pub phi_a: f64,
    pub theta_b: f64,
    pub phi_b: f64,
    pub shots: u64,
    pub seed: u64,
    pub n1: u64,
    pub n2: u64,
    pub n3: u64,
    pub n4: u64,
    pub n_other: u64,
    pub raw_estimate: f64,
    pub raw_std_error: f64,
    pub post_selected: f64,
    pub std_error: f64,
    /// Closed-form `P_total` for quantum runs.
    pub analytic: Option<f64>,
}

impl SampleRecord {
    pub fn new(
        kind: SampleKind,
        params: Option<&StateParams>,
        a: &Direction,
        b: &Direction,
        seed: u64,
        stats: &SampleStats,
        analytic: Option<f64>,
    ) -> Self {
        let [n1, n2, n3, n4] = stats.counts;
        SampleRecord {
            schema_version: SCHEMA_VERSION,
            kind,
            s2: params.map(|p| p.spin.twice()),
            xi: params.map(|p| p.xi),
            eta: params.map(|p| p.eta),
            theta_a: a.theta(),
            phi_a: a.phi(),
            theta_b: b.theta(),
            phi_b: b.phi(),
            shots: stats.shots,
            seed,
            n1,
            n2,
            n3,
            n4,
            n_other: stats.n_other,
            raw_estimate: stats.raw_estimate,
            raw_std_error: stats.raw_std_error,
            post_selected: stats.post_selected,
            std_error: stats.std_error,
            analytic,
        }
    }
}
