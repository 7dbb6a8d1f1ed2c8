//! Empirical ergodic disintegration.
//!
//! The ergodic component measure at a base point is represented only through
//! its action on a finite dictionary of observables: the moment vector
//! beta_x(phi) = lim A(F_n, phi)(x), estimated at a finite index. The
//! disintegration identity and the 0-1 law are checked statistically.

use crate::averaging::{average_trace, ergodic_average, AverageTrace};
use crate::error::{Error, Result};
use crate::folner::FolnerSequence;
use crate::systems::{Action, MeasureSampler, Observable, Point};

/// Moment-vector estimate of the ergodic component at a base point.
#[derive(Debug, Clone)]
pub struct ComponentEstimate {
    pub point: Point,
    pub labels: Vec<String>,
    pub estimates: Vec<f64>,
    pub oscillations: Vec<f64>,
    pub n: usize,
}

impl ComponentEstimate {
    pub fn get(&self, label: &str) -> Option<f64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.estimates[i])
    }
}

fn trailing_indices(n: usize) -> Vec<usize> {
    let step = (n / 10).max(1);
    let mut idx: Vec<usize> = [n.saturating_sub(2 * step).max(1), n.saturating_sub(step).max(1), n]
        .into_iter()
        .collect();
    idx.sort_unstable();
    idx.dedup();
    idx
}

/// Estimate beta_x(phi) for every dictionary entry at index n, with a short
/// trailing trace as the oscillation diagnostic.
pub fn component_estimate(
    action: &Action,
    seq: &FolnerSequence,
    x: &Point,
    dictionary: &[Observable],
    n: usize,
) -> Result<ComponentEstimate> {
    if n == 0 {
        return Err(Error::InvalidSpec("component estimate needs n >= 1".into()));
    }
    let indices = trailing_indices(n);
    let mut labels = Vec::with_capacity(dictionary.len());
    let mut estimates = Vec::with_capacity(dictionary.len());
    let mut oscillations = Vec::with_capacity(dictionary.len());
    for phi in dictionary {
        phi.require_bounded()?;
        let trace: AverageTrace = average_trace(action, seq, phi, x, &indices, indices.len())?;
        labels.push(phi.label().to_string());
        estimates.push(trace.last_value().unwrap());
        oscillations.push(trace.oscillation());
    }
    Ok(ComponentEstimate {
        point: x.clone(),
        labels,
        estimates,
        oscillations,
        n,
    })
}

/// One dictionary row of the disintegration identity mu = int beta_x dmu(x).
#[derive(Debug, Clone)]
pub struct DisintegrationRow {
    pub label: String,
    /// Estimate of int phi dmu (exact oracle when available, else Monte Carlo).
    pub space_mean: f64,
    /// Estimate of E_mu[beta_x(phi)] over sampled base points.
    pub component_mean: f64,
    pub diff: f64,
}

/// Check the disintegration identity on every dictionary entry, using one
/// shared sample of base points for both sides (matched seeds).
pub fn disintegration_check(
    action: &Action,
    seq: &FolnerSequence,
    sampler: &MeasureSampler,
    dictionary: &[Observable],
    n: usize,
    sample_count: usize,
    seed: u64,
) -> Result<Vec<DisintegrationRow>> {
    let points = sampler.sample(sample_count, seed)?;
    let f_n = seq.set(n)?;
    let mut rows = Vec::with_capacity(dictionary.len());
    for phi in dictionary {
        phi.require_bounded()?;
        let space_mean = match phi.exact_integral() {
            Some(v) => v,
            None => {
                crate::averaging::tree_sum(
                    &points.iter().map(|p| phi.evaluate(p)).collect::<Vec<_>>(),
                ) / points.len() as f64
            }
        };
        let per_point: Result<Vec<f64>> = points
            .iter()
            .map(|p| ergodic_average(action, &f_n, phi, p))
            .collect();
        let per_point = per_point?;
        let component_mean = crate::averaging::tree_sum(&per_point) / per_point.len() as f64;
        rows.push(DisintegrationRow {
            label: phi.label().to_string(),
            space_mean,
            component_mean,
            diff: (space_mean - component_mean).abs(),
        });
    }
    Ok(rows)
}

/// Max over dictionary entries of the population standard deviation of
/// beta_x(phi) across the given points. Small scores are consistent with the
/// points lying in one ergodic component; the score is reported, never
/// thresholded here.
pub fn ergodicity_score(
    action: &Action,
    seq: &FolnerSequence,
    component_points: &[Point],
    dictionary: &[Observable],
    n: usize,
) -> Result<f64> {
    if component_points.is_empty() {
        return Err(Error::InvalidSpec("ergodicity score needs >= 1 point".into()));
    }
    let f_n = seq.set(n)?;
    let mut score = 0.0f64;
    for phi in dictionary {
        phi.require_bounded()?;
        let values: Result<Vec<f64>> = component_points
            .iter()
            .map(|p| ergodic_average(action, &f_n, phi, p))
            .collect();
        let values = values?;
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64;
        score = score.max(var.sqrt());
    }
    Ok(score)
}

/// The default dictionary for a circle-like system: constants, low trig
/// modes, and dyadic arc indicators.
pub fn default_circle_dictionary(max_mode: u32) -> Vec<Observable> {
    let mut dict = vec![Observable::constant(1.0)];
    for k in 1..=max_mode {
        dict.push(Observable::cos(k));
        dict.push(Observable::sin(k));
    }
    for denom_log in 1..=3u32 {
        let denom = 2u32.pow(denom_log);
        for num in 1..denom {
            dict.push(Observable::arc(num as f64 / denom as f64).expect("dyadic arc in (0,1)"));
        }
    }
    dict
}
