//! Network constants and the exact sub-threshold dynamics of a single neuron.
//!
//! Between firing times every potential is an independent Ornstein-Uhlenbeck
//! process `dV = -γ (V - β) dt + sqrt(ε) dW`. Its deterministic part is the
//! flow `φ_t(x) = (x - β) e^{-γt} + β` and its transition law over a step
//! `dt` is Gaussian with closed-form moments, so sampling on a grid is exact
//! at the grid points. All quantities are SI: volts, seconds, volts²/second.

use libm::erfc;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Synaptic weights `H_ji`: the jump received by neuron `i` when neuron `j` spikes.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightMatrix {
    /// Every off-diagonal entry equals `weight`.
    Uniform { n: usize, weight: f64 },
    /// Row-major `n × n`; entry `j * n + i` is `H_ji`. The diagonal is ignored.
    Dense {
        n: usize,
        entries: Vec<f64>,
        min_weight: f64,
    },
}

impl WeightMatrix {
    pub fn uniform(n: usize, weight: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams(
                "network needs at least one neuron".into(),
            ));
        }
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(Error::InvalidParams(format!(
                "weights must be positive and finite, got {weight}"
            )));
        }
        Ok(WeightMatrix::Uniform { n, weight })
    }

    /// Builds a dense matrix from rows: `rows[j][i]` is the effect on `i` of a spike of `j`.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidParams(
                "network needs at least one neuron".into(),
            ));
        }
        let mut entries = Vec::with_capacity(n * n);
        let mut min_weight = f64::INFINITY;
        for (j, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParams(format!(
                    "weight row {j} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (i, &h) in row.iter().enumerate() {
                if i != j {
                    if !(h > 0.0) || !h.is_finite() {
                        return Err(Error::InvalidParams(format!(
                            "weight H[{j}][{i}] = {h} must be positive and finite"
                        )));
                    }
                    min_weight = min_weight.min(h);
                }
            }
            entries.extend(row);
        }
        if n == 1 {
            return Err(Error::InvalidParams(
                "a dense weight matrix needs at least two neurons to define a minimum weight"
                    .into(),
            ));
        }
        Ok(WeightMatrix::Dense {
            n,
            entries,
            min_weight,
        })
    }

    pub fn n(&self) -> usize {
        match self {
            WeightMatrix::Uniform { n, .. } | WeightMatrix::Dense { n, .. } => *n,
        }
    }

    /// `m`, the smallest off-diagonal weight.
    pub fn min_weight(&self) -> f64 {
        match self {
            WeightMatrix::Uniform { weight, .. } => *weight,
            WeightMatrix::Dense { min_weight, .. } => *min_weight,
        }
    }

    /// `H_ji`.
    #[inline]
    pub fn get(&self, from: usize, to: usize) -> f64 {
        match self {
            WeightMatrix::Uniform { weight, .. } => *weight,
            WeightMatrix::Dense { n, entries, .. } => entries[from * n + to],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    /// `γ`, 1/s.
    pub leak_rate: f64,
    /// `β`, the asymptotic potential of the leak.
    pub drive: f64,
    /// `θ`.
    pub threshold: f64,
    /// `V_r`.
    pub reset: f64,
    /// `α`, lower edge of the initial-condition support.
    pub floor: f64,
    /// `ε`, V²/s.
    pub noise_intensity: f64,
    pub weights: WeightMatrix,
}

impl NetworkParams {
    pub fn new(
        leak_rate: f64,
        drive: f64,
        threshold: f64,
        reset: f64,
        floor: f64,
        noise_intensity: f64,
        weights: WeightMatrix,
    ) -> Result<Self> {
        let params = NetworkParams {
            leak_rate,
            drive,
            threshold,
            reset,
            floor,
            noise_intensity,
            weights,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("leak_rate", self.leak_rate),
            ("drive", self.drive),
            ("threshold", self.threshold),
            ("reset", self.reset),
            ("floor", self.floor),
            ("noise_intensity", self.noise_intensity),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        if self.leak_rate <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "leak_rate must be positive, got {}",
                self.leak_rate
            )));
        }
        if self.noise_intensity < 0.0 {
            return Err(Error::InvalidParams(format!(
                "noise_intensity must be nonnegative, got {}",
                self.noise_intensity
            )));
        }
        if self.reset >= self.threshold {
            return Err(Error::InvalidParams(format!(
                "reset {} must lie below threshold {}",
                self.reset, self.threshold
            )));
        }
        if self.floor > self.reset {
            return Err(Error::InvalidParams(format!(
                "floor {} must not exceed reset {}",
                self.floor, self.reset
            )));
        }
        if !(self.weights.min_weight() > 0.0) {
            return Err(Error::InvalidParams(
                "minimum weight must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn n_neurons(&self) -> usize {
        self.weights.n()
    }

    pub fn min_weight(&self) -> f64 {
        self.weights.min_weight()
    }

    /// `β ≤ θ` is legal (the deterministic network never fires) but outside
    /// the regime the bounds cover.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.drive <= self.threshold {
            out.push(format!(
                "drive {} V does not exceed threshold {} V: no spikes without noise",
                self.drive, self.threshold
            ));
        }
        out
    }

    pub fn with_noise(&self, noise_intensity: f64) -> Self {
        NetworkParams {
            noise_intensity,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    pub potentials: Vec<f64>,
    pub time: f64,
    pub firing_count: usize,
}

impl NetworkState {
    pub fn new(potentials: Vec<f64>) -> Self {
        NetworkState {
            potentials,
            time: 0.0,
            firing_count: 0,
        }
    }
}

/// Deterministic flow `φ_t(x)`.
pub fn flow(x: f64, t: f64, params: &NetworkParams) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    Ok(flow_unchecked(x, t, params.leak_rate, params.drive))
}

#[inline]
pub(crate) fn flow_unchecked(x: f64, t: f64, leak_rate: f64, drive: f64) -> f64 {
    (x - drive) * (-leak_rate * t).exp() + drive
}

/// Variance of `sqrt(ε) e^{-γt} ∫_0^t e^{γs} dW_s`.
#[inline]
pub(crate) fn ou_variance(dt: f64, leak_rate: f64, noise_intensity: f64) -> f64 {
    -noise_intensity * (-2.0 * leak_rate * dt).exp_m1() / (2.0 * leak_rate)
}

/// Mean and variance of `V(t + dt)` given `V(t) = x`.
pub fn ou_transition_moments(x: f64, dt: f64, params: &NetworkParams) -> Result<(f64, f64)> {
    let mean = flow(x, dt, params)?;
    Ok((
        mean,
        ou_variance(dt, params.leak_rate, params.noise_intensity),
    ))
}

/// Draws `V(t + dt)` given `V(t) = x` from the exact Gaussian transition law.
pub fn ou_transition_sample<R: Rng + ?Sized>(
    x: f64,
    dt: f64,
    params: &NetworkParams,
    rng: &mut R,
) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "transition step must be positive, got {dt}"
        )));
    }
    let (mean, variance) = ou_transition_moments(x, dt, params)?;
    if variance == 0.0 {
        return Ok(mean);
    }
    let z: f64 = rng.sample(StandardNormal);
    Ok(mean + variance.sqrt() * z)
}

/// Standard Gaussian CDF `Φ`, via `erfc` so the lower tail keeps full relative precision.
pub fn std_normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}
