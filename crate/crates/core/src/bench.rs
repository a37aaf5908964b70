//! Monte Carlo characterization of point-counting measurement error.
//!
//! Each *cell* of the experiment fixes a lattice and a cap size, places `n`
//! caps with uniformly random centers, and records the rmse and maximum of
//! the absolute measurement errors. Sweeps over cap sizes feed power-law
//! fits of the maximum rmse against the (effective) point count.
//!
//! Randomness is counter-based: every trial owns an independent generator
//! keyed by `(seed, cell, trial)`, so results are bit-identical for a fixed
//! seed no matter how the trials are scheduled across threads.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::estimate::{absolute_error, effective_point_count, estimate_area};
use crate::geo::{cap_area_fraction, cap_radius_from_fraction, great_circle_distance, random_cap_center, Cap, GeoPoint};
use crate::lattice::{generate_fibonacci, generate_latlon, Chirality, Lattice, LatticeFamily};
use crate::sum::ExactSum;
use crate::{Error, Result};

/// Sampling scheme a benchmark cell was measured on: one of the two lattice
/// families, or independently random points (the Monte Carlo baseline).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchFamily {
    LatLon,
    Fibonacci,
    Random,
}

impl From<LatticeFamily> for BenchFamily {
    fn from(family: LatticeFamily) -> Self {
        match family {
            LatticeFamily::LatLon => BenchFamily::LatLon,
            LatticeFamily::Fibonacci => BenchFamily::Fibonacci,
        }
    }
}

impl fmt::Display for BenchFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchFamily::LatLon => "latlon",
            BenchFamily::Fibonacci => "fibonacci",
            BenchFamily::Random => "random",
        })
    }
}

impl FromStr for BenchFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "latlon" => Ok(BenchFamily::LatLon),
            "fibonacci" => Ok(BenchFamily::Fibonacci),
            "random" => Ok(BenchFamily::Random),
            other => Err(Error::InvalidParam(format!("unknown family `{other}`"))),
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mix(seed: u64, word: u64) -> u64 {
    let mut state = seed;
    let mut absorbed = splitmix64(&mut state) ^ word;
    splitmix64(&mut absorbed)
}

/// Derive an independent seed for a labelled subexperiment.
pub fn derive_seed(seed: u64, tag: u64, index: u64) -> u64 {
    mix(mix(seed, tag), index)
}

/// Random stream of one benchmark cell.
///
/// `trial_rng(j)` returns the generator for trial `j`: a ChaCha8 cipher
/// keyed from `(seed, cell, j)`, independent of every other trial and cheap
/// to construct, so trials may run in any order on any number of threads.
#[derive(Debug, Clone, Copy)]
pub struct RngStream {
    state: u64,
}

impl RngStream {
    pub fn new(seed: u64, cell: u64) -> Self {
        RngStream { state: mix(seed, cell) }
    }

    pub fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(mix(self.state, trial))
    }
}

/// Parameters of one benchmark sweep: a lattice, a list of cap sizes, and
/// the trial count and seed shared by every cell.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialPlan {
    family: LatticeFamily,
    param: u64,
    cap_fractions: Vec<f64>,
    trials: u64,
    seed: u64,
}

impl TrialPlan {
    /// Cap fractions must be sorted ascending, each in `(0, 0.5]`, and the
    /// trial count at least 1.
    pub fn new(
        family: LatticeFamily,
        param: u64,
        cap_fractions: Vec<f64>,
        trials: u64,
        seed: u64,
    ) -> Result<Self> {
        if trials < 1 {
            return Err(Error::InvalidPlan("trial count must be >= 1".into()));
        }
        for pair in cap_fractions.windows(2) {
            // Non-finite values fall through to the range check below.
            if pair[0] >= pair[1] {
                return Err(Error::InvalidPlan(format!(
                    "cap fractions must be strictly ascending, got {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        for &f in &cap_fractions {
            if !(f > 0.0 && f <= 0.5) {
                return Err(Error::InvalidPlan(format!("cap fraction {f} is outside (0, 0.5]")));
            }
        }
        Ok(TrialPlan { family, param, cap_fractions, trials, seed })
    }

    pub fn family(&self) -> LatticeFamily {
        self.family
    }

    pub fn param(&self) -> u64 {
        self.param
    }

    pub fn cap_fractions(&self) -> &[f64] {
        &self.cap_fractions
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Build the lattice this plan measures. The Fibonacci lattice is built
    /// eastward; both chiralities place the same points.
    pub fn build_lattice(&self) -> Result<Lattice> {
        match self.family {
            LatticeFamily::LatLon => generate_latlon(self.param),
            LatticeFamily::Fibonacci => generate_fibonacci(self.param, Chirality::Eastward),
        }
    }
}

/// Error statistics of one (lattice, cap fraction) cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorStats {
    pub family: BenchFamily,
    /// Number of sample points P.
    pub points: u64,
    /// Sum of sample weights (equals P for homogeneous sampling).
    pub effective_points: f64,
    /// Normalized cap area F of this cell.
    pub cap_fraction: f64,
    /// Number of random caps measured.
    pub trials: u64,
    pub rmse: f64,
    pub max_error: f64,
}

/// Coefficient and exponent of a fitted `y ~ k x^a` relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub coefficient: f64,
    pub exponent: f64,
    /// Root mean squared residual in log space.
    pub residual: f64,
}

fn summarize_errors(errors: &[f64]) -> (f64, f64) {
    let mut squares = ExactSum::new();
    let mut max_error = 0.0f64;
    for &e in errors {
        squares.add(e * e);
        if e > max_error {
            max_error = e;
        }
    }
    let rmse = (squares.value() / errors.len() as f64).sqrt();
    // rmse <= max holds exactly in the reals; trim the sub-ulp overshoot the
    // square/sqrt round trip can introduce.
    (rmse.min(max_error), max_error)
}

/// Measure one cell: `trials` caps of area fraction `cap_fraction` with
/// uniformly random centers on `lattice`.
///
/// Deterministic for a given stream, independent of thread count.
pub fn run_cell(
    lattice: &Lattice,
    cap_fraction: f64,
    trials: u64,
    stream: &RngStream,
) -> Result<ErrorStats> {
    if !(cap_fraction > 0.0 && cap_fraction < 1.0) {
        return Err(Error::FractionOutOfRange(cap_fraction, "(0, 1)"));
    }
    if trials < 1 {
        return Err(Error::InvalidPlan("trial count must be >= 1".into()));
    }
    let radius = cap_radius_from_fraction(cap_fraction)?;
    let effective_points = effective_point_count(lattice);
    if lattice.is_empty() {
        return Err(Error::EmptyLattice);
    }
    if effective_points <= 0.0 {
        return Err(Error::ZeroWeight);
    }

    let errors: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream.trial_rng(trial);
            let center = random_cap_center(&mut rng);
            let cap = Cap::new(center, radius).expect("radius validated above");
            let est = estimate_area(lattice, &cap).expect("lattice validated above");
            absolute_error(est.fraction, cap_fraction)
        })
        .collect();

    let (rmse, max_error) = summarize_errors(&errors);
    Ok(ErrorStats {
        family: lattice.family().into(),
        points: lattice.len() as u64,
        effective_points,
        cap_fraction,
        trials,
        rmse,
        max_error,
    })
}

/// Run every cell of a plan. Cells use distinct substreams (cell id = index
/// of the fraction in the plan), so they are statistically independent and
/// the output order matches the plan order.
pub fn run_sweep(plan: &TrialPlan) -> Result<Vec<ErrorStats>> {
    let lattice = plan.build_lattice()?;
    plan.cap_fractions
        .iter()
        .enumerate()
        .map(|(cell, &fraction)| {
            run_cell(&lattice, fraction, plan.trials, &RngStream::new(plan.seed, cell as u64))
        })
        .collect()
}

/// The cell with the largest rmse; ties resolve toward the smaller cap
/// fraction. Returns `(cap_fraction, rmse)`.
pub fn rmse_max(sweep: &[ErrorStats]) -> Result<(f64, f64)> {
    let mut best: Option<&ErrorStats> = None;
    for stats in sweep {
        let better = match best {
            None => true,
            Some(b) => {
                stats.rmse > b.rmse || (stats.rmse == b.rmse && stats.cap_fraction < b.cap_fraction)
            }
        };
        if better {
            best = Some(stats);
        }
    }
    best.map(|s| (s.cap_fraction, s.rmse)).ok_or(Error::EmptySweep)
}

/// Ordinary least squares of `ln y` on `ln x`: returns `k = exp(intercept)`
/// and `a = slope` of `y ~ k x^a`.
pub fn fit_power_law(samples: &[(f64, f64)]) -> Result<PowerLawFit> {
    if samples.len() < 2 {
        return Err(Error::InvalidFitInput("at least 2 samples"));
    }
    if samples.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite()) {
        return Err(Error::InvalidFitInput("strictly positive finite samples"));
    }

    let n = samples.len() as f64;
    let logs: Vec<(f64, f64)> = samples.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mean_x = logs.iter().map(|&(x, _)| x).sum::<f64>() / n;
    let mean_y = logs.iter().map(|&(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mean_x) * (x - mean_x)).sum();
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mean_x) * (y - mean_y)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidFitInput("at least two distinct x values"));
    }

    let exponent = sxy / sxx;
    let intercept = mean_y - exponent * mean_x;
    let residual = (logs
        .iter()
        .map(|&(x, y)| {
            let r = y - (intercept + exponent * x);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();

    Ok(PowerLawFit { coefficient: intercept.exp(), exponent, residual })
}

/// Exact supremum of the measurement error over every cap centered at
/// `center` with area fraction up to `max_fraction`.
///
/// For a fixed center the estimate is a right-continuous step function of
/// the radius, jumping where the radius crosses a point distance, while the
/// true fraction grows continuously. The supremum of their difference is
/// therefore attained just below a jump, at a jump, or at the end of the
/// radius range — all evaluated here exactly (up to floating point).
///
/// Serves as an independent oracle for the Monte Carlo machinery: no sampled
/// cap at this center can exceed it.
pub fn exact_max_error_for_center(
    lattice: &Lattice,
    center: GeoPoint,
    max_fraction: f64,
) -> Result<f64> {
    if !(max_fraction > 0.0 && max_fraction <= 0.5) {
        return Err(Error::FractionOutOfRange(max_fraction, "(0, 0.5]"));
    }
    if lattice.is_empty() {
        return Err(Error::EmptyLattice);
    }
    let max_radius = cap_radius_from_fraction(max_fraction)?;
    let weight_total = effective_point_count(lattice);
    if weight_total <= 0.0 {
        return Err(Error::ZeroWeight);
    }

    let mut by_distance: Vec<(f64, f64)> = lattice
        .points()
        .iter()
        .map(|wp| (great_circle_distance(wp.point, center), wp.weight))
        .collect();
    by_distance.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

    let mut covered = ExactSum::new();
    let mut supremum = 0.0f64;
    let mut i = 0;
    while i < by_distance.len() && by_distance[i].0 <= max_radius {
        let jump = by_distance[i].0;
        let below = covered.value() / weight_total;
        while i < by_distance.len() && by_distance[i].0 == jump {
            covered.add(by_distance[i].1);
            i += 1;
        }
        let at = covered.value() / weight_total;
        let true_fraction = cap_area_fraction(jump)?;
        supremum = supremum
            .max((below - true_fraction).abs())
            .max((at - true_fraction).abs());
    }
    let end_gap = (covered.value() / weight_total - max_fraction).abs();
    Ok(supremum.max(end_gap))
}

/// Baseline cell with the lattice replaced by `points` independently random
/// sample points (fresh set per trial, unit weights). Expected rmse is the
/// binomial `sqrt(F (1 - F) / P)`.
pub fn random_baseline_cell(
    points: u64,
    cap_fraction: f64,
    trials: u64,
    stream: &RngStream,
) -> Result<ErrorStats> {
    if points < 1 {
        return Err(Error::InvalidPlan("baseline needs at least 1 sample point".into()));
    }
    if !(cap_fraction > 0.0 && cap_fraction < 1.0) {
        return Err(Error::FractionOutOfRange(cap_fraction, "(0, 1)"));
    }
    if trials < 1 {
        return Err(Error::InvalidPlan("trial count must be >= 1".into()));
    }
    let radius = cap_radius_from_fraction(cap_fraction)?;

    let errors: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream.trial_rng(trial);
            // Center first, then the sample points.
            let center = random_cap_center(&mut rng);
            let mut inside = 0u64;
            for _ in 0..points {
                if great_circle_distance(random_cap_center(&mut rng), center) <= radius {
                    inside += 1;
                }
            }
            absolute_error(inside as f64 / points as f64, cap_fraction)
        })
        .collect();

    let (rmse, max_error) = summarize_errors(&errors);
    Ok(ErrorStats {
        family: BenchFamily::Random,
        points,
        effective_points: points as f64,
        cap_fraction,
        trials,
        rmse,
        max_error,
    })
}
