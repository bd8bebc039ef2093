//! Event-driven network simulation.
//!
//! Each inter-spike interval is simulated on a fixed grid with the exact OU
//! transition, so potentials at grid points carry no discretisation bias. A
//! neuron that stays below threshold at both ends of a step may still have
//! crossed in between; with `bridge_correction` on, that excursion is detected
//! with the Brownian-bridge maximum law `exp(-2(θ-a)(θ-b)/(ε dt))`. This
//! ignores the drift inside the step and is exact only as `γ dt → 0`.
//!
//! Without noise the grid is bypassed: the next firing time is the analytic
//! hitting time of the highest potential.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::cascade::{resolve_firing, FiringOutcome};
use crate::error::{Error, Result};
use crate::model::{flow_unchecked, ou_variance, NetworkParams, NetworkState};
use crate::rng::{trial_rng, TrialRng};

/// Bridge tests with a log-probability below this are skipped without a draw.
const BRIDGE_LOG_CUTOFF: f64 = -50.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Grid step for crossing detection, seconds.
    pub dt: f64,
    pub bridge_correction: bool,
    /// Longest inter-spike interval simulated before giving up, seconds.
    pub max_time: f64,
    pub seed: u64,
    pub trial_index: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: 1e-4,
            bridge_correction: true,
            max_time: 10.0,
            seed: 0,
            trial_index: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.max_time > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "max_time must be positive, got {}",
                self.max_time
            )));
        }
        Ok(())
    }

    pub fn for_trial(&self, trial_index: u64) -> SimConfig {
        SimConfig {
            trial_index,
            ..self.clone()
        }
    }

    /// The random stream owned by this trial.
    pub fn rng(&self) -> TrialRng {
        trial_rng(self.seed, self.trial_index)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiringEvent {
    /// `τ_n`, absolute.
    pub time: f64,
    pub outcome: FiringOutcome,
    pub is_full_sync: bool,
}

/// Result of simulating up to the next firing time.
#[derive(Debug, Clone, PartialEq)]
pub enum Advance {
    Fired {
        state: NetworkState,
        event: FiringEvent,
    },
    /// No spike within `max_time`; `state` is the network at the horizon.
    Truncated { state: NetworkState },
    /// Noiseless network with `β ≤ θ` and every potential below threshold.
    NeverFires,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialCondition {
    /// Every potential at the reset value.
    Synchronized,
    /// I.i.d. uniform on `[floor, threshold)`.
    Uniform,
}

impl InitialCondition {
    pub fn draw<R: Rng + ?Sized>(&self, params: &NetworkParams, rng: &mut R) -> Vec<f64> {
        let n = params.n_neurons();
        match self {
            InitialCondition::Synchronized => vec![params.reset; n],
            InitialCondition::Uniform => {
                let width = params.threshold - params.floor;
                (0..n)
                    .map(|_| {
                        let v = params.floor + width * rng.random::<f64>();
                        // rounding can land exactly on θ
                        if v >= params.threshold {
                            params.floor
                        } else {
                            v
                        }
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub events: Vec<FiringEvent>,
    /// Least `k` (1-based) with `J(k) = I`.
    pub first_sync_index: Option<usize>,
    pub truncated: bool,
}

impl TrialRecord {
    /// Whether the event `BS_n` occurred.
    pub fn synchronized_by(&self, n: usize) -> bool {
        self.first_sync_index.is_some_and(|k| k <= n)
    }
}

/// Time for the noiseless flow to carry `x_max` up to the threshold, or
/// `None` when `β ≤ θ` and it never gets there.
pub fn deterministic_next_fire_time(x_max: f64, params: &NetworkParams) -> Result<Option<f64>> {
    if x_max >= params.threshold {
        return Err(Error::AtOrAboveThreshold {
            potential: x_max,
            threshold: params.threshold,
        });
    }
    let (beta, theta) = (params.drive, params.threshold);
    if beta <= theta {
        return Ok(None);
    }
    Ok(Some(
        ((beta - x_max) / (beta - theta)).ln() / params.leak_rate,
    ))
}

/// Probability that a path from `a` to `b` over `dt` touched the threshold
/// in between.
pub fn bridge_crossing_prob(a: f64, b: f64, dt: f64, params: &NetworkParams) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if !(params.noise_intensity > 0.0) {
        return Err(Error::InvalidArgument(
            "bridge crossing needs positive noise intensity".into(),
        ));
    }
    let theta = params.threshold;
    if a >= theta || b >= theta {
        return Ok(1.0);
    }
    Ok(bridge_log_prob(a, b, theta, params.noise_intensity * dt).exp())
}

#[inline]
fn bridge_log_prob(a: f64, b: f64, level: f64, eps_dt: f64) -> f64 {
    -2.0 * (level - a) * (level - b) / eps_dt
}

/// Samples `X(s)` of an OU path pinned at `X(0) = a` and `X(dt) = b`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn ou_bridge_sample<R: Rng + ?Sized>(
    a: f64,
    b: f64,
    s: f64,
    dt: f64,
    leak_rate: f64,
    drive: f64,
    noise_intensity: f64,
    rng: &mut R,
) -> f64 {
    let prior_mean = (a - drive) * (-leak_rate * s).exp();
    let prior_var = ou_variance(s, leak_rate, noise_intensity);
    let c = (-leak_rate * (dt - s)).exp();
    let obs_var = ou_variance(dt - s, leak_rate, noise_intensity);
    let denom = c * c * prior_var + obs_var;
    if denom <= 0.0 {
        return flow_unchecked(a, s, leak_rate, drive);
    }
    let gain = prior_var * c / denom;
    let mean = prior_mean + gain * ((b - drive) - c * prior_mean);
    let var = (prior_var * obs_var / denom).max(0.0);
    let z: f64 = rng.sample(StandardNormal);
    drive + mean + var.sqrt() * z
}

fn fire(state: &NetworkState, pre: &[f64], time: f64, params: &NetworkParams) -> Result<Advance> {
    let outcome = resolve_firing(pre, params)?;
    let is_full_sync = outcome.is_full_sync();
    let next = NetworkState {
        potentials: outcome.post_potentials.clone(),
        time,
        firing_count: state.firing_count + 1,
    };
    Ok(Advance::Fired {
        state: next,
        event: FiringEvent {
            time,
            outcome,
            is_full_sync,
        },
    })
}

/// Runs the sub-threshold regime until the next firing time, then resolves the cascade.
pub fn advance_to_next_firing<R: Rng + ?Sized>(
    state: &NetworkState,
    params: &NetworkParams,
    config: &SimConfig,
    rng: &mut R,
) -> Result<Advance> {
    config.validate()?;
    let n = params.n_neurons();
    if state.potentials.len() != n {
        return Err(Error::InvalidArgument(format!(
            "state has {} potentials for a network of {n} neurons",
            state.potentials.len()
        )));
    }
    let theta = params.threshold;
    if state.potentials.iter().any(|&v| v >= theta) {
        return fire(state, &state.potentials, state.time, params);
    }
    if params.noise_intensity == 0.0 {
        advance_noiseless(state, params, config)
    } else {
        advance_noisy(state, params, config, rng)
    }
}

fn advance_noiseless(
    state: &NetworkState,
    params: &NetworkParams,
    config: &SimConfig,
) -> Result<Advance> {
    let x_max = state
        .potentials
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let Some(wait) = deterministic_next_fire_time(x_max, params)? else {
        return Ok(Advance::NeverFires);
    };
    let (gamma, beta) = (params.leak_rate, params.drive);
    if wait > config.max_time {
        let potentials = state
            .potentials
            .iter()
            .map(|&x| flow_unchecked(x, config.max_time, gamma, beta))
            .collect();
        return Ok(Advance::Truncated {
            state: NetworkState {
                potentials,
                time: state.time + config.max_time,
                firing_count: state.firing_count,
            },
        });
    }
    // The leaders hit θ by construction; pin them so rounding cannot leave them just below.
    let pre: Vec<f64> = state
        .potentials
        .iter()
        .map(|&x| {
            if x == x_max {
                params.threshold
            } else {
                flow_unchecked(x, wait, gamma, beta)
            }
        })
        .collect();
    fire(state, &pre, state.time + wait, params)
}

fn advance_noisy<R: Rng + ?Sized>(
    state: &NetworkState,
    params: &NetworkParams,
    config: &SimConfig,
    rng: &mut R,
) -> Result<Advance> {
    let (gamma, beta, theta, eps) = (
        params.leak_rate,
        params.drive,
        params.threshold,
        params.noise_intensity,
    );
    let dt = config.dt;
    let decay = (-gamma * dt).exp();
    let sd = ou_variance(dt, gamma, eps).sqrt();
    let eps_dt = eps * dt;
    let max_steps = (config.max_time / dt).ceil() as u64;

    let mut current = state.potentials.clone();
    let mut next = vec![0.0; current.len()];
    let mut bridged: Vec<usize> = Vec::new();

    for step in 0..max_steps {
        let mut grid_hit = false;
        bridged.clear();
        for (i, (&a, b)) in current.iter().zip(next.iter_mut()).enumerate() {
            let z: f64 = rng.sample(StandardNormal);
            *b = (a - beta) * decay + beta + sd * z;
            if *b >= theta {
                grid_hit = true;
            } else if config.bridge_correction {
                let log_p = bridge_log_prob(a, *b, theta, eps_dt);
                if log_p > BRIDGE_LOG_CUTOFF && rng.random::<f64>() < log_p.exp() {
                    bridged.push(i);
                }
            }
        }
        let t0 = state.time + step as f64 * dt;
        if grid_hit {
            return fire(state, &next, t0 + dt, params);
        }
        if !bridged.is_empty() {
            // (0, 1]: the crossing happened strictly after the left grid point
            let u: f64 = 1.0 - rng.random::<f64>();
            let s = u * dt;
            let mut pre = Vec::with_capacity(current.len());
            let mut crossers = bridged.iter().peekable();
            for (i, (&a, &b)) in current.iter().zip(next.iter()).enumerate() {
                if crossers.peek() == Some(&&i) {
                    crossers.next();
                    pre.push(theta);
                } else {
                    pre.push(ou_bridge_sample(a, b, s, dt, gamma, beta, eps, rng));
                }
            }
            return fire(state, &pre, t0 + s, params);
        }
        std::mem::swap(&mut current, &mut next);
    }
    Ok(Advance::Truncated {
        state: NetworkState {
            potentials: current,
            time: state.time + max_steps as f64 * dt,
            firing_count: state.firing_count,
        },
    })
}

fn validate_initial(initial: &[f64], params: &NetworkParams) -> Result<()> {
    if initial.len() != params.n_neurons() {
        return Err(Error::InvalidArgument(format!(
            "{} initial potentials for a network of {} neurons",
            initial.len(),
            params.n_neurons()
        )));
    }
    for (i, &v) in initial.iter().enumerate() {
        if !(v >= params.floor && v < params.threshold) {
            return Err(Error::InvalidArgument(format!(
                "initial potential {i} = {v} V outside [{}, {})",
                params.floor, params.threshold
            )));
        }
    }
    Ok(())
}

/// Simulates up to `n_max` firing events from `initial`.
pub fn run_trial<R: Rng + ?Sized>(
    initial: &[f64],
    params: &NetworkParams,
    config: &SimConfig,
    n_max: usize,
    rng: &mut R,
) -> Result<TrialRecord> {
    simulate(initial, params, config, n_max, false, rng)
}

/// Like [`run_trial`], optionally stopping at the first full synchronization.
pub(crate) fn simulate<R: Rng + ?Sized>(
    initial: &[f64],
    params: &NetworkParams,
    config: &SimConfig,
    n_max: usize,
    stop_at_sync: bool,
    rng: &mut R,
) -> Result<TrialRecord> {
    validate_initial(initial, params)?;
    config.validate()?;
    let mut state = NetworkState::new(initial.to_vec());
    let mut record = TrialRecord {
        events: Vec::new(),
        first_sync_index: None,
        truncated: false,
    };
    while record.events.len() < n_max {
        match advance_to_next_firing(&state, params, config, rng)? {
            Advance::Fired { state: next, event } => {
                if event.is_full_sync && record.first_sync_index.is_none() {
                    record.first_sync_index = Some(record.events.len() + 1);
                }
                record.events.push(event);
                state = next;
                if stop_at_sync && record.first_sync_index.is_some() {
                    break;
                }
            }
            Advance::Truncated { .. } | Advance::NeverFires => {
                record.truncated = true;
                break;
            }
        }
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::WeightMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fig1(eps: f64, n: usize) -> NetworkParams {
        NetworkParams::new(
            100.0,
            -0.052,
            -0.055,
            -0.070,
            -0.100,
            eps,
            WeightMatrix::uniform(n, 0.75e-3).unwrap(),
        )
        .unwrap()
    }

    // (1/100) ln 6, 50-digit reference
    const T_DET: f64 = 0.017917594692280550;

    #[test]
    fn deterministic_fire_time() {
        let p = fig1(0.0, 4);
        let t = deterministic_next_fire_time(-0.070, &p).unwrap().unwrap();
        assert!((t - T_DET).abs() <= 4.0 * f64::EPSILON * T_DET);
        let near = deterministic_next_fire_time(-0.055 - 1e-12, &p)
            .unwrap()
            .unwrap();
        assert!(near < 1e-9);
        assert!(deterministic_next_fire_time(-0.055, &p).is_err());
        let mut below = p.clone();
        below.drive = -0.0553;
        assert_eq!(deterministic_next_fire_time(-0.070, &below).unwrap(), None);
    }

    #[test]
    fn bridge_probabilities() {
        let mut p = fig1(1e-4, 2);
        assert_eq!(bridge_crossing_prob(-0.055, -0.06, 1e-3, &p).unwrap(), 1.0);
        let a = -0.055 - 1e-3;
        let got = bridge_crossing_prob(a, a, 1e-3, &p).unwrap();
        assert!((got - 2.0611536224385578e-9).abs() < 1e-12 * 2.06e-9);
        assert_eq!(bridge_crossing_prob(-1e3, -1e3, 1e-3, &p).unwrap(), 0.0);
        assert!(bridge_crossing_prob(a, a, 0.0, &p).is_err());
        p.noise_intensity = 0.0;
        assert!(bridge_crossing_prob(a, a, 1e-3, &p).is_err());
    }

    #[test]
    fn noiseless_synchronized_orbit() {
        let p = fig1(0.0, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let rec = run_trial(&[-0.070; 5], &p, &SimConfig::default(), 4, &mut rng).unwrap();
        assert_eq!(rec.events.len(), 4);
        assert_eq!(rec.first_sync_index, Some(1));
        for (k, e) in rec.events.iter().enumerate() {
            assert!(e.is_full_sync);
            let want = (k + 1) as f64 * T_DET;
            assert!((e.time - want).abs() <= 8.0 * f64::EPSILON * want);
        }
    }

    #[test]
    fn immediate_firing_when_at_threshold() {
        let p = fig1(1e-6, 3);
        let state = NetworkState {
            potentials: vec![-0.055, -0.070, -0.080],
            time: 0.25,
            firing_count: 2,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        match advance_to_next_firing(&state, &p, &SimConfig::default(), &mut rng).unwrap() {
            Advance::Fired { state: s, event } => {
                assert_eq!(event.time, 0.25);
                assert_eq!(s.firing_count, 3);
                assert_eq!(event.outcome.layers[0], vec![0]);
            }
            other => panic!("expected a firing, got {other:?}"),
        }
    }

    #[test]
    fn noiseless_subthreshold_drive_never_fires() {
        let mut p = fig1(0.0, 3);
        p.drive = -0.0553;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let state = NetworkState::new(vec![-0.07; 3]);
        assert_eq!(
            advance_to_next_firing(&state, &p, &SimConfig::default(), &mut rng).unwrap(),
            Advance::NeverFires
        );
        let rec = run_trial(&[-0.07; 3], &p, &SimConfig::default(), 3, &mut rng).unwrap();
        assert!(rec.truncated);
        assert!(rec.events.is_empty());
    }

    #[test]
    fn horizon_truncates() {
        let p = fig1(1e-8, 3);
        let config = SimConfig {
            max_time: 1e-3,
            ..SimConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let state = NetworkState::new(vec![-0.07; 3]);
        match advance_to_next_firing(&state, &p, &config, &mut rng).unwrap() {
            Advance::Truncated { state } => assert!((state.time - 1e-3).abs() < 1e-15),
            other => panic!("expected truncation, got {other:?}"),
        }
    }

    #[test]
    fn single_kick_absorbs_everyone() {
        // m ≥ θ - α: one spike lifts every other neuron over threshold
        let p = NetworkParams::new(
            100.0,
            -0.052,
            -0.055,
            -0.070,
            -0.100,
            0.0,
            WeightMatrix::uniform(4, 0.046).unwrap(),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let init = InitialCondition::Uniform.draw(&p, &mut rng);
            let rec = run_trial(&init, &p, &SimConfig::default(), 3, &mut rng).unwrap();
            assert_eq!(rec.first_sync_index, Some(1));
        }
    }

    #[test]
    fn rejects_bad_initial_state() {
        let p = fig1(0.0, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cfg = SimConfig::default();
        assert!(run_trial(&[-0.055, -0.07], &p, &cfg, 1, &mut rng).is_err());
        assert!(run_trial(&[-0.2, -0.07], &p, &cfg, 1, &mut rng).is_err());
        assert!(run_trial(&[-0.07], &p, &cfg, 1, &mut rng).is_err());
        let bad = SimConfig { dt: 0.0, ..cfg };
        assert!(run_trial(&[-0.07, -0.07], &p, &bad, 1, &mut rng).is_err());
    }

    #[test]
    fn bridge_sample_respects_endpoints() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (a, b) = (-0.06, -0.058);
        let at_start = ou_bridge_sample(a, b, 0.0, 1e-3, 100.0, -0.052, 1e-4, &mut rng);
        assert!((at_start - a).abs() < 1e-15);
        let at_end = ou_bridge_sample(a, b, 1e-3, 1e-3, 100.0, -0.052, 1e-4, &mut rng);
        assert!((at_end - b).abs() < 1e-15);
        // midpoint mean of a nearly driftless bridge is close to the average
        let n = 20000;
        let m: f64 = (0..n)
            .map(|_| ou_bridge_sample(a, b, 5e-4, 1e-3, 100.0, -0.052, 1e-4, &mut rng))
            .sum::<f64>()
            / n as f64;
        assert!((m - 0.5 * (a + b)).abs() < 2e-5, "{m}");
    }

    #[test]
    fn event_times_increase_and_potentials_stay_subthreshold() {
        let p = fig1(1e-4, 30);
        let config = SimConfig {
            seed: 11,
            ..SimConfig::default()
        };
        let mut rng = config.rng();
        let init = InitialCondition::Uniform.draw(&p, &mut rng);
        let rec = run_trial(&init, &p, &config, 40, &mut rng).unwrap();
        assert!(!rec.truncated);
        assert_eq!(rec.events.len(), 40);
        for w in rec.events.windows(2) {
            assert!(w[1].time > w[0].time);
        }
        for e in &rec.events {
            assert!(e.outcome.post_potentials.iter().all(|&v| v < p.threshold));
        }
        if let Some(k) = rec.first_sync_index {
            assert!(rec.events[k - 1].is_full_sync);
            assert!(rec.events[..k - 1].iter().all(|e| !e.is_full_sync));
        }
    }
}
