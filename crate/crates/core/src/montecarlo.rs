//! Monte Carlo estimators for the synchronization probabilities and the
//! large-deviation tail.
//!
//! Trial `k` always draws from stream `(seed, k)`, so results do not depend
//! on the rayon pool size, and sweeping a parameter with a fixed seed pairs
//! trials across sweep points (common random numbers). Results are reduced
//! by counting, which is order-insensitive.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::bounds::ldp_rate;
use crate::error::{Error, Result};
use crate::model::{ou_variance, NetworkParams, NetworkState};
use crate::rng::trial_rng;
use crate::simulator::{advance_to_next_firing, simulate, Advance, InitialCondition, SimConfig};

pub const DEFAULT_CONFIDENCE: f64 = 0.95;

const BRIDGE_LOG_CUTOFF: f64 = -50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
    pub successes: u64,
}

impl Estimate {
    pub fn from_counts(successes: u64, trials: u64, confidence: f64) -> Result<Self> {
        let (ci_low, ci_high) = wilson_interval(successes, trials, confidence)?;
        Ok(Estimate {
            point: successes as f64 / trials as f64,
            ci_low,
            ci_high,
            trials,
            successes,
        })
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    if successes > trials {
        return Err(Error::InvalidArgument(format!(
            "{successes} successes out of {trials} trials"
        )));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    let z = Normal::standard().inverse_cdf(0.5 + 0.5 * confidence);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2n = z * z / n;
    let center = (p + 0.5 * z2n) / (1.0 + z2n);
    let half = z / (1.0 + z2n) * (p * (1.0 - p) / n + 0.25 * z2n / n).sqrt();
    let low = if successes == 0 {
        0.0
    } else {
        (center - half).clamp(0.0, p)
    };
    let high = if successes == trials {
        1.0
    } else {
        (center + half).clamp(p, 1.0)
    };
    Ok((low, high))
}

fn require_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaySyncResult {
    pub estimate: Estimate,
    /// Trials that produced no spike within the horizon (counted as failures).
    pub truncated: u64,
}

/// Estimates `P(S_{n+1} | S_n)` by starting every trial synchronized at the
/// reset potential and checking whether the next firing involves everyone.
pub fn estimate_stay_sync(
    params: &NetworkParams,
    config: &SimConfig,
    trials: u64,
) -> Result<StaySyncResult> {
    require_trials(trials)?;
    config.validate()?;
    let start = NetworkState::new(vec![params.reset; params.n_neurons()]);
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|k| {
            let cfg = config.for_trial(k);
            let mut rng = cfg.rng();
            Ok(
                match advance_to_next_firing(&start, params, &cfg, &mut rng)? {
                    Advance::Fired { event, .. } => (event.is_full_sync, false),
                    Advance::Truncated { .. } | Advance::NeverFires => (false, true),
                },
            )
        })
        .collect::<Result<Vec<(bool, bool)>>>()?;
    let successes = outcomes.iter().filter(|o| o.0).count() as u64;
    let truncated = outcomes.iter().filter(|o| o.1).count() as u64;
    Ok(StaySyncResult {
        estimate: Estimate::from_counts(successes, trials, DEFAULT_CONFIDENCE)?,
        truncated,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyncCurve {
    pub n_values: Vec<usize>,
    /// `P(BS_n)`.
    pub bs_estimates: Vec<Estimate>,
    /// `P(BS_n \ BS_{n-1})`, first synchronization exactly at the n-th firing.
    pub first_sync_pmf: Vec<Estimate>,
    /// Trials that stopped at the horizon before synchronizing.
    pub truncated: u64,
    pub trials: u64,
}

pub fn estimate_bs(
    params: &NetworkParams,
    config: &SimConfig,
    trials: u64,
    n_max: usize,
    init: InitialCondition,
) -> Result<SyncCurve> {
    require_trials(trials)?;
    config.validate()?;
    if n_max == 0 {
        return Ok(SyncCurve {
            n_values: Vec::new(),
            bs_estimates: Vec::new(),
            first_sync_pmf: Vec::new(),
            truncated: 0,
            trials,
        });
    }
    let summaries = (0..trials)
        .into_par_iter()
        .map(|k| {
            let cfg = config.for_trial(k);
            let mut rng = cfg.rng();
            let initial = init.draw(params, &mut rng);
            let rec = simulate(&initial, params, &cfg, n_max, true, &mut rng)?;
            Ok((
                rec.first_sync_index,
                rec.truncated && rec.first_sync_index.is_none(),
            ))
        })
        .collect::<Result<Vec<(Option<usize>, bool)>>>()?;

    let mut first_counts = vec![0u64; n_max + 1];
    let mut truncated = 0;
    for (first, trunc) in summaries {
        if let Some(k) = first {
            first_counts[k] += 1;
        }
        if trunc {
            truncated += 1;
        }
    }
    let mut n_values = Vec::with_capacity(n_max);
    let mut bs_estimates = Vec::with_capacity(n_max);
    let mut first_sync_pmf = Vec::with_capacity(n_max);
    let mut cumulative = 0;
    for (n, &count) in first_counts.iter().enumerate().skip(1).take(n_max) {
        cumulative += count;
        n_values.push(n);
        bs_estimates.push(Estimate::from_counts(
            cumulative,
            trials,
            DEFAULT_CONFIDENCE,
        )?);
        first_sync_pmf.push(Estimate::from_counts(count, trials, DEFAULT_CONFIDENCE)?);
    }
    Ok(SyncCurve {
        n_values,
        bs_estimates,
        first_sync_pmf,
        truncated,
        trials,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LdpPoint {
    pub epsilon: f64,
    pub estimate: Estimate,
    /// `ε ln P̂`; with zero successes, `ε ln` of the one-sided upper bound.
    pub eps_log_p: f64,
    /// `-rate`, the limit of `ε ln P` as `ε → 0`.
    pub neg_rate: f64,
    pub below_resolution: bool,
}

/// Estimates `P(sup_{[0,T]} |X^ε - x| ≥ δ)` for a single OU neuron and
/// compares `ε ln P` with the large-deviation limit.
///
/// The deviation `X^ε - x` from the noiseless flow is itself an OU process
/// started at 0 with the same leak rate, whatever the drive and starting
/// point, so it is simulated directly.
pub fn estimate_ldp_tail(
    leak_rate: f64,
    delta: f64,
    horizon: f64,
    eps_list: &[f64],
    config: &SimConfig,
    trials: u64,
) -> Result<Vec<LdpPoint>> {
    require_trials(trials)?;
    config.validate()?;
    let neg_rate = -ldp_rate(leak_rate, delta, horizon)?;
    let steps = (horizon / config.dt).ceil().max(1.0) as u64;
    let h = horizon / steps as f64;

    eps_list
        .iter()
        .map(|&eps| {
            if !(eps > 0.0) || !eps.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "noise intensity must be positive, got {eps}"
                )));
            }
            let decay = (-leak_rate * h).exp();
            let sd = ou_variance(h, leak_rate, eps).sqrt();
            let eps_h = eps * h;
            let bridge = config.bridge_correction;
            let successes = (0..trials)
                .into_par_iter()
                .filter(|&k| {
                    let mut rng = trial_rng(config.seed, k);
                    deviation_exceeds(delta, steps, decay, sd, eps_h, bridge, &mut rng)
                })
                .count() as u64;
            let estimate = Estimate::from_counts(successes, trials, DEFAULT_CONFIDENCE)?;
            let below_resolution = successes == 0;
            let eps_log_p = if below_resolution {
                let (_, upper) = wilson_interval(0, trials, 2.0 * DEFAULT_CONFIDENCE - 1.0)?;
                eps * upper.ln()
            } else {
                eps * estimate.point.ln()
            };
            Ok(LdpPoint {
                epsilon: eps,
                estimate,
                eps_log_p,
                neg_rate,
                below_resolution,
            })
        })
        .collect()
}

fn deviation_exceeds<R: Rng + ?Sized>(
    delta: f64,
    steps: u64,
    decay: f64,
    sd: f64,
    eps_h: f64,
    bridge: bool,
    rng: &mut R,
) -> bool {
    let mut y = 0.0f64;
    for _ in 0..steps {
        let z: f64 = rng.sample(StandardNormal);
        let next = y * decay + sd * z;
        if next.abs() >= delta {
            return true;
        }
        if bridge {
            let up = -2.0 * (delta - y) * (delta - next) / eps_h;
            let down = -2.0 * (delta + y) * (delta + next) / eps_h;
            if up.max(down) > BRIDGE_LOG_CUTOFF && rng.random::<f64>() < up.exp() + down.exp() {
                return true;
            }
        }
        y = next;
    }
    false
}
