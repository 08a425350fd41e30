//! Sampling checks: projective measurements drawn from the Bell cat state,
//! and local hidden-variable models for the modified Bell inequality.
//!
//! Randomness comes from Xoshiro256++ seeded through SplitMix64
//! (`Xoshiro256PlusPlus::seed_from_u64`). Shots are split into batches of
//! [`BATCH_SHOTS`]; batch `i` of a run with seed `s` is seeded with
//! `s + i * 0x9E3779B97F4A7C15` (wrapping). Uniform variates are
//! `(next_u64 >> 11) * 2^-53`. Batches run in parallel and merge in batch
//! order, so results depend only on the seed.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bellcat::{closed_form_elements, StateParams};
use crate::error::{Error, Result};
use crate::spin::Direction;

pub const BATCH_SHOTS: u64 = 1 << 16;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Probabilities below this are rounding noise and get clamped to zero.
const NEGATIVE_SLACK: f64 = -1e-12;

/// Hidden-variable draws used to probe a model for deterministic outcomes.
const DETERMINISM_PROBES: u64 = 256;

pub fn batch_rng(seed: u64, batch: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed.wrapping_add(batch.wrapping_mul(GOLDEN_GAMMA)))
}

pub fn uniform<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform point on the unit sphere by inverse CDF on `cos(theta)`.
pub fn uniform_sphere<R: RngCore>(rng: &mut R) -> [f64; 3] {
    let z = 2.0 * uniform(rng) - 1.0;
    let phi = std::f64::consts::TAU * uniform(rng);
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

/// Counts over the four coherent outcomes `(++, +-, -+, --)` plus everything else.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub counts: [u64; 4],
    pub n_other: u64,
    pub shots: u64,
    /// Signed mean over all shots; "other" contributes zero.
    pub raw_estimate: f64,
    pub raw_std_error: f64,
    /// Signed mean over the four coherent outcomes only.
    pub post_selected: f64,
    /// `sqrt((1 - P^2) / n)` with `n` the post-selected count.
    pub std_error: f64,
}

impl SampleStats {
    pub fn from_counts(counts: [u64; 4], n_other: u64) -> Self {
        let selected: u64 = counts.iter().sum();
        let shots = selected + n_other;
        let signed = counts[0] as f64 + counts[3] as f64 - counts[1] as f64 - counts[2] as f64;
        let raw_estimate = signed / shots as f64;
        let weight = selected as f64 / shots as f64;
        let raw_std_error = ((weight - raw_estimate * raw_estimate).max(0.0) / shots as f64).sqrt();
        let (post_selected, std_error) = if selected == 0 {
            (0.0, f64::INFINITY)
        } else {
            let p = signed / selected as f64;
            (p, ((1.0 - p * p).max(0.0) / selected as f64).sqrt())
        };
        SampleStats {
            counts,
            n_other,
            shots,
            raw_estimate,
            raw_std_error,
            post_selected,
            std_error,
        }
    }
}

fn run_batches<F>(shots: u64, seed: u64, per_batch: F) -> [u64; 5]
where
    F: Fn(&mut Xoshiro256PlusPlus, u64) -> [u64; 5] + Sync,
{
    let batches = shots.div_ceil(BATCH_SHOTS);
    let tallies: Vec<[u64; 5]> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let n = BATCH_SHOTS.min(shots - b * BATCH_SHOTS);
            per_batch(&mut batch_rng(seed, b), n)
        })
        .collect();
    tallies.iter().fold([0; 5], |mut acc, t| {
        for (a, x) in acc.iter_mut().zip(t) {
            *a += x;
        }
        acc
    })
}

/// Outcome probabilities `(rho11, rho22, rho33, rho44, 1 - W)`.
pub fn outcome_probabilities(p: &StateParams, a: &Direction, b: &Direction) -> Result<[f64; 5]> {
    let rho = closed_form_elements(p, a, b).total();
    let other = 1.0 - rho.iter().sum::<f64>();
    let mut probs = [rho[0], rho[1], rho[2], rho[3], other];
    for (category, q) in probs.iter_mut().enumerate() {
        if *q < NEGATIVE_SLACK {
            return Err(Error::NegativeProbability {
                category: category + 1,
                value: *q,
            });
        }
        *q = q.max(0.0);
    }
    Ok(probs)
}

/// Draws `shots` joint measurements of `s.a` and `s.b` on the Bell cat state.
pub fn sample_quantum(
    p: &StateParams,
    a: &Direction,
    b: &Direction,
    shots: u64,
    seed: u64,
) -> Result<SampleStats> {
    if shots == 0 {
        return Err(Error::ZeroCount("shots"));
    }
    let probs = outcome_probabilities(p, a, b)?;
    let mut cdf = [0.0; 4];
    let mut acc = 0.0;
    for (c, q) in cdf.iter_mut().zip(&probs) {
        acc += q;
        *c = acc;
    }
    let tally = run_batches(shots, seed, |rng, n| {
        let mut t = [0u64; 5];
        for _ in 0..n {
            let u = uniform(rng);
            let k = cdf.iter().position(|&c| u < c).unwrap_or(4);
            t[k] += 1;
        }
        t
    });
    Ok(SampleStats::from_counts(
        [tally[0], tally[1], tally[2], tally[3]],
        tally[4],
    ))
}

/// A local hidden-variable model with deterministic outcomes.
///
/// Both particles answer through the same function, `B(x, l) = A(x, l)`,
/// as required for the parallel-polarization state.
pub trait LhvModel: Sync {
    type Hidden;

    fn sample_hidden<R: RngCore>(&self, rng: &mut R) -> Self::Hidden;

    /// Must return +1 or -1, and the same value for the same inputs.
    fn outcome(&self, dir: &Direction, hidden: &Self::Hidden) -> i8;
}

/// `A(x, l) = sgn(l . x)` with `l` uniform on the sphere; `sgn(0) = +1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SignModel;

impl LhvModel for SignModel {
    type Hidden = [f64; 3];

    fn sample_hidden<R: RngCore>(&self, rng: &mut R) -> [f64; 3] {
        uniform_sphere(rng)
    }

    fn outcome(&self, dir: &Direction, hidden: &[f64; 3]) -> i8 {
        let x = dir.unit_vector();
        if x[0] * hidden[0] + x[1] * hidden[1] + x[2] * hidden[2] >= 0.0 {
            1
        } else {
            -1
        }
    }
}

fn pair_category(x: i8, y: i8) -> usize {
    match (x, y) {
        (1, 1) => 0,
        (1, -1) => 1,
        (-1, 1) => 2,
        (-1, -1) => 3,
        _ => 4,
    }
}

pub fn sample_lhv<M: LhvModel>(
    model: &M,
    a: &Direction,
    b: &Direction,
    shots: u64,
    seed: u64,
) -> Result<SampleStats> {
    if shots == 0 {
        return Err(Error::ZeroCount("shots"));
    }
    let tally = run_batches(shots, seed, |rng, n| {
        let mut t = [0u64; 5];
        for _ in 0..n {
            let l = model.sample_hidden(rng);
            t[pair_category(model.outcome(a, &l), model.outcome(b, &l))] += 1;
        }
        t
    });
    Ok(SampleStats::from_counts(
        [tally[0], tally[1], tally[2], tally[3]],
        tally[4],
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LhvBellRow {
    pub p_ab: f64,
    pub p_ac: f64,
    pub p_bc: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// Combined standard error of the three estimates.
    pub sigma: f64,
    /// `lhs > rhs + 4 sigma`.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelDefect {
    NonDeterministic,
    OutcomeNotUnit,
    SignificantViolation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LhvBellReport {
    pub rows: Vec<LhvBellRow>,
    pub shots: u64,
    pub defects: Vec<ModelDefect>,
}

impl LhvBellReport {
    pub fn valid(&self) -> bool {
        self.defects.is_empty()
    }

    pub fn flagged(&self) -> usize {
        self.rows.iter().filter(|r| r.flagged).count()
    }
}

/// Estimates the three correlations of each triple from one shared stream
/// of hidden variables and checks `|P(ab) - P(ac)| <= 1 - P(bc)` within
/// four combined standard errors.
pub fn verify_lhv_bell<M: LhvModel>(
    model: &M,
    triples: &[[Direction; 3]],
    shots: u64,
    seed: u64,
) -> Result<LhvBellReport> {
    if triples.is_empty() {
        return Err(Error::ZeroCount("triples"));
    }
    if shots == 0 {
        return Err(Error::ZeroCount("shots"));
    }
    let outcomes: Vec<([i64; 3], bool)> = triples
        .par_iter()
        .enumerate()
        .map(|(i, [a, b, c])| {
            let mut rng = batch_rng(seed, i as u64);
            let mut sums = [0i64; 3];
            let mut unit = true;
            for _ in 0..shots {
                let l = model.sample_hidden(&mut rng);
                let pairs = [
                    (model.outcome(a, &l), model.outcome(b, &l)),
                    (model.outcome(a, &l), model.outcome(c, &l)),
                    (model.outcome(b, &l), model.outcome(c, &l)),
                ];
                for (s, (x, y)) in sums.iter_mut().zip(pairs) {
                    unit &= x.abs() == 1 && y.abs() == 1;
                    *s += i64::from(x) * i64::from(y);
                }
            }
            (sums, unit)
        })
        .collect();

    let n = shots as f64;
    let se = |p: f64| ((1.0 - p * p).max(0.0) / n).sqrt();
    let rows: Vec<LhvBellRow> = outcomes
        .iter()
        .map(|(sums, _)| {
            let [p_ab, p_ac, p_bc] = sums.map(|s| s as f64 / n);
            let lhs = (p_ab - p_ac).abs();
            let rhs = 1.0 - p_bc;
            let sigma = (se(p_ab).powi(2) + se(p_ac).powi(2) + se(p_bc).powi(2)).sqrt();
            LhvBellRow {
                p_ab,
                p_ac,
                p_bc,
                lhs,
                rhs,
                sigma,
                flagged: lhs > rhs + 4.0 * sigma + 1e-12,
            }
        })
        .collect();

    let mut defects = Vec::new();
    if outcomes.iter().any(|(_, unit)| !unit) {
        defects.push(ModelDefect::OutcomeNotUnit);
    }
    if !deterministic(model, triples, seed) {
        defects.push(ModelDefect::NonDeterministic);
    }
    if rows.iter().any(|r| r.flagged) {
        defects.push(ModelDefect::SignificantViolation);
    }
    Ok(LhvBellReport {
        rows,
        shots,
        defects,
    })
}

fn deterministic<M: LhvModel>(model: &M, triples: &[[Direction; 3]], seed: u64) -> bool {
    let mut rng = batch_rng(seed ^ GOLDEN_GAMMA, u64::MAX);
    let dirs = triples.iter().flatten();
    for _ in 0..DETERMINISM_PROBES {
        let l = model.sample_hidden(&mut rng);
        for d in dirs.clone() {
            if model.outcome(d, &l) != model.outcome(d, &l) {
                return false;
            }
        }
    }
    true
}
