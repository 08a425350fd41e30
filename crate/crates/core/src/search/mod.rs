//! Maximizing inequality objectives over measurement directions.
//!
//! A deterministic grid scan seeds a Nelder-Mead refinement. CHSH and Bell
//! objectives are pre-scanned on coplanar directions (x-z plane, both
//! half-planes); the non-local magnitude objective is scanned on the full
//! `(theta, phi)` grid. Refinement then runs over every free angle and,
//! optionally, the state parameters `(xi, eta)`.

pub mod simplex;

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_4, PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bellcat::StateParams;
use crate::correlation::{
    bell_lhs_rhs, chsh, correlate, BellTriple, ChshQuad, Mode, Part, CHSH_CLASSICAL, VIOLATION_TOL,
};
use crate::error::{Error, Result};
use crate::spin::{Direction, Spin};

use simplex::SimplexOptions;

/// Grid seeds handed to the simplex refinement.
const SEEDS: usize = 4;
/// Simplex restarts from the incumbent after a converged run.
const RESTARTS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// `|P(ab)+P(ac)+P(db)-P(dc)|` with the full correlation.
    ChshTotal,
    /// Same, local part only. Never exceeds 2.
    ChshLocal,
    /// `|P(ab)-P(ac)| - (1 - P(bc))` with the full correlation.
    BellMarginTotal,
    /// Same, local part only. Never positive.
    BellMarginLocal,
    /// `|P_nlc(ab)|`.
    NlcMagnitude,
}

impl Objective {
    pub const ALL: [Objective; 5] = [
        Objective::ChshTotal,
        Objective::ChshLocal,
        Objective::BellMarginTotal,
        Objective::BellMarginLocal,
        Objective::NlcMagnitude,
    ];

    pub fn directions(self) -> usize {
        match self {
            Objective::ChshTotal | Objective::ChshLocal => 4,
            Objective::BellMarginTotal | Objective::BellMarginLocal => 3,
            Objective::NlcMagnitude => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::ChshTotal => "chsh_total",
            Objective::ChshLocal => "chsh_local",
            Objective::BellMarginTotal => "bell_margin_total",
            Objective::BellMarginLocal => "bell_margin_local",
            Objective::NlcMagnitude => "nlc_magnitude",
        }
    }

    fn coplanar_seed(self) -> bool {
        !matches!(self, Objective::NlcMagnitude)
    }

    /// Objective value at the given state and directions.
    pub fn evaluate(self, params: &StateParams, dirs: &[Direction]) -> f64 {
        debug_assert_eq!(dirs.len(), self.directions());
        match self {
            Objective::ChshTotal | Objective::ChshLocal => {
                let q = ChshQuad {
                    params: *params,
                    a: dirs[0],
                    b: dirs[1],
                    c: dirs[2],
                    d: dirs[3],
                };
                chsh(&q, self.part())
            }
            Objective::BellMarginTotal | Objective::BellMarginLocal => {
                bell_lhs_rhs(&self.triple(params, dirs), self.part()).margin()
            }
            Objective::NlcMagnitude => correlate(params, &dirs[0], &dirs[1], Mode::ClosedForm)
                .p_nlc
                .abs(),
        }
    }

    fn part(self) -> Part {
        match self {
            Objective::ChshLocal | Objective::BellMarginLocal => Part::LocalOnly,
            _ => Part::Total,
        }
    }

    fn triple(self, params: &StateParams, dirs: &[Direction]) -> BellTriple {
        BellTriple {
            params: *params,
            a: dirs[0],
            b: dirs[1],
            c: dirs[2],
        }
    }

    /// Bound the objective is compared against, and whether it is exceeded.
    fn judge(self, value: f64, params: &StateParams, dirs: &[Direction]) -> (f64, bool) {
        match self {
            Objective::ChshTotal | Objective::ChshLocal => {
                (CHSH_CLASSICAL, value > CHSH_CLASSICAL + VIOLATION_TOL)
            }
            Objective::BellMarginTotal | Objective::BellMarginLocal => {
                let r = bell_lhs_rhs(&self.triple(params, dirs), self.part());
                (r.rhs, r.violated)
            }
            Objective::NlcMagnitude => (0.0, value > VIOLATION_TOL),
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Objective::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::InvalidSearch(format!("unknown objective {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub spin: Spin,
    /// Let `(xi, eta)` float during refinement; otherwise fixed at `(pi/4, 0)`.
    pub optimize_state: bool,
    pub objective: Objective,
    pub grid_points_per_angle: usize,
    /// Simplex iteration cap per seed; 0 skips refinement.
    pub refine_iterations: usize,
}

impl SearchSpec {
    pub fn new(spin: Spin, objective: Objective) -> Self {
        SearchSpec {
            spin,
            optimize_state: false,
            objective,
            grid_points_per_angle: 16,
            refine_iterations: 4000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_points_per_angle < 4 {
            return Err(Error::InvalidSearch(format!(
                "grid_points_per_angle must be >= 4, got {}",
                self.grid_points_per_angle
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub spin: Spin,
    pub objective: Objective,
    pub best_value: f64,
    pub best_angles: Vec<Direction>,
    /// `(xi, eta)` at the optimum.
    pub best_state: (f64, f64),
    pub violated: bool,
    pub bound: f64,
    /// Best value found by the grid scan alone.
    pub grid_value: f64,
}

impl ViolationReport {
    pub fn params(&self) -> StateParams {
        StateParams {
            spin: self.spin,
            xi: self.best_state.0,
            eta: self.best_state.1,
        }
    }

    /// Recomputes the objective at the reported optimum.
    pub fn reevaluate(&self) -> f64 {
        self.objective.evaluate(&self.params(), &self.best_angles)
    }
}

/// `n` polar angles from 0 to pi inclusive.
pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                PI
            } else {
                PI * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// `n` azimuths from 0 up to (excluding) 2 pi.
pub fn phi_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| TAU * i as f64 / n as f64).collect()
}

/// Candidate `(theta, phi)` per direction, in lexicographic order.
fn direction_options(objective: Objective, n: usize) -> Vec<(f64, f64)> {
    let thetas = theta_grid(n);
    let phis = if objective.coplanar_seed() {
        vec![0.0, PI]
    } else {
        phi_grid(n)
    };
    thetas
        .iter()
        .flat_map(|&t| phis.iter().map(move |&p| (t, p)))
        .collect()
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    value: f64,
    index: u64,
}

/// Higher value first; ties go to the lexicographically smaller tuple.
fn rank(a: &Candidate, b: &Candidate) -> Ordering {
    b.value.total_cmp(&a.value).then(a.index.cmp(&b.index))
}

fn merge_top(mut a: Vec<Candidate>, b: Vec<Candidate>) -> Vec<Candidate> {
    a.extend(b);
    a.sort_by(rank);
    a.truncate(SEEDS);
    a
}

fn decode(index: u64, options: &[(f64, f64)], k: usize) -> Vec<(f64, f64)> {
    let base = options.len() as u64;
    let mut digits = vec![(0.0, 0.0); k];
    let mut rest = index;
    for slot in digits.iter_mut().rev() {
        *slot = options[(rest % base) as usize];
        rest /= base;
    }
    digits
}

fn to_directions(angles: &[f64]) -> Vec<Direction> {
    angles
        .chunks_exact(2)
        .map(|c| Direction::from_unbounded(c[0], c[1]))
        .collect()
}

/// Top grid cells, best first. Deterministic regardless of thread count.
fn grid_scan(spec: &SearchSpec, params: &StateParams) -> Vec<Candidate> {
    let k = spec.objective.directions();
    let options = direction_options(spec.objective, spec.grid_points_per_angle);
    let total = (options.len() as u64).pow(k as u32);
    (0..total)
        .into_par_iter()
        .fold(Vec::new, |top, index| {
            let dirs: Vec<Direction> = decode(index, &options, k)
                .into_iter()
                .map(|(t, p)| Direction::from_unbounded(t, p))
                .collect();
            let value = spec.objective.evaluate(params, &dirs);
            merge_top(top, vec![Candidate { value, index }])
        })
        .reduce(Vec::new, merge_top)
}

struct Point {
    value: f64,
    dirs: Vec<Direction>,
    state: (f64, f64),
}

pub fn maximize(spec: &SearchSpec) -> Result<ViolationReport> {
    spec.validate()?;
    let start = StateParams::maximal(spec.spin);
    let k = spec.objective.directions();
    let options = direction_options(spec.objective, spec.grid_points_per_angle);
    let seeds = grid_scan(spec, &start);
    let grid_value = seeds[0].value;

    let evaluate = |x: &[f64]| -> Point {
        let dirs = to_directions(&x[..2 * k]);
        let state = if spec.optimize_state {
            (x[2 * k], x[2 * k + 1])
        } else {
            (start.xi, start.eta)
        };
        let params = StateParams {
            spin: spec.spin,
            xi: state.0,
            eta: state.1,
        };
        Point {
            value: spec.objective.evaluate(&params, &dirs),
            dirs,
            state,
        }
    };

    let seed_vector = |c: &Candidate| -> Vec<f64> {
        let mut x: Vec<f64> = decode(c.index, &options, k)
            .into_iter()
            .flat_map(|(t, p)| [t, p])
            .collect();
        if spec.optimize_state {
            x.extend([FRAC_PI_4, 0.0]);
        }
        x
    };

    let mut best = evaluate(&seed_vector(&seeds[0]));
    if spec.refine_iterations > 0 {
        let opts = SimplexOptions {
            initial_step: PI / (spec.grid_points_per_angle - 1) as f64,
            max_iterations: spec.refine_iterations,
            min_diameter: 1e-10,
        };
        for seed in &seeds {
            let mut x = seed_vector(seed);
            for _ in 0..=RESTARTS {
                let run = simplex::maximize(|v| evaluate(v).value, &x, &opts);
                let improved = run.value > evaluate(&x).value;
                x = run.x;
                let candidate = evaluate(&x);
                if candidate.value > best.value {
                    best = candidate;
                }
                if !improved {
                    break;
                }
            }
        }
    }

    let params = StateParams {
        spin: spec.spin,
        xi: best.state.0,
        eta: best.state.1,
    };
    let (bound, violated) = spec.objective.judge(best.value, &params, &best.dirs);
    Ok(ViolationReport {
        spin: spec.spin,
        objective: spec.objective,
        best_value: best.value,
        best_angles: best.dirs,
        best_state: best.state,
        violated,
        bound,
        grid_value,
    })
}

/// One report per spin from 1/2 up to `s_max`, using `template` for
/// everything but the spin.
pub fn parity_sweep(s_max: Spin, template: &SearchSpec) -> Result<Vec<ViolationReport>> {
    template.validate()?;
    s_max
        .up_to()
        .map(|spin| maximize(&SearchSpec { spin, ..*template }))
        .collect()
}
