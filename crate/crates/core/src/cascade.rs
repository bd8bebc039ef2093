//! Firing-regime resolution.
//!
//! Neurons at or above threshold spike spontaneously (layer 0). Each further
//! layer collects the neurons that reach threshold once the kicks of every
//! earlier spiker are added. The construction stops at the first empty layer;
//! spikers are reset and everyone else keeps the accumulated kicks.

use crate::error::{Error, Result};
use crate::model::{NetworkParams, WeightMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct FiringOutcome {
    /// `J⁰, J¹, …`, each sorted ascending and nonempty.
    pub layers: Vec<Vec<usize>>,
    /// Union of the layers, sorted ascending.
    pub spikers: Vec<usize>,
    pub post_potentials: Vec<f64>,
}

impl FiringOutcome {
    /// `J = I`.
    pub fn is_full_sync(&self) -> bool {
        self.spikers.len() == self.post_potentials.len()
    }
}

pub fn resolve_firing(pre_potentials: &[f64], params: &NetworkParams) -> Result<FiringOutcome> {
    let n = pre_potentials.len();
    if n != params.n_neurons() {
        return Err(Error::InvalidArgument(format!(
            "{n} potentials for a network of {} neurons",
            params.n_neurons()
        )));
    }
    let theta = params.threshold;

    let mut spiked = vec![false; n];
    let first: Vec<usize> = (0..n).filter(|&i| pre_potentials[i] >= theta).collect();
    if first.is_empty() {
        return Err(Error::NoSpontaneousSpike);
    }
    for &i in &first {
        spiked[i] = true;
    }

    // kicks[i] = Σ_{j spiked so far} H_ji
    let mut kicks = vec![0.0; n];
    let mut layers = vec![first];
    loop {
        let newest = layers.last().expect("at least one layer");
        add_kicks(&params.weights, newest, &spiked, &mut kicks);
        let next: Vec<usize> = (0..n)
            .filter(|&i| !spiked[i] && pre_potentials[i] + kicks[i] >= theta)
            .collect();
        if next.is_empty() {
            break;
        }
        for &i in &next {
            spiked[i] = true;
        }
        layers.push(next);
    }

    let spikers: Vec<usize> = (0..n).filter(|&i| spiked[i]).collect();
    let post_potentials = (0..n)
        .map(|i| {
            if spiked[i] {
                params.reset
            } else {
                pre_potentials[i] + kicks[i]
            }
        })
        .collect();
    Ok(FiringOutcome {
        layers,
        spikers,
        post_potentials,
    })
}

/// Adds the kicks of `layer` to every neuron that has not spiked yet.
fn add_kicks(weights: &WeightMatrix, layer: &[usize], spiked: &[bool], kicks: &mut [f64]) {
    match weights {
        WeightMatrix::Uniform { weight, .. } => {
            let total = weight * layer.len() as f64;
            for (k, &s) in kicks.iter_mut().zip(spiked) {
                if !s {
                    *k += total;
                }
            }
        }
        WeightMatrix::Dense { n, entries, .. } => {
            for &j in layer {
                let row = &entries[j * n..(j + 1) * n];
                for ((k, &s), &h) in kicks.iter_mut().zip(spiked).zip(row) {
                    if !s {
                        *k += h;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn net(weights: WeightMatrix) -> NetworkParams {
        NetworkParams::new(1.0, 2.0, 1.0, 0.0, -1.0, 0.0, weights).unwrap()
    }

    /// Adds one neuron at a time, in descending index order, until nothing changes.
    fn sequential_absorption(pre: &[f64], params: &NetworkParams) -> Vec<usize> {
        let n = pre.len();
        let mut spiked = vec![false; n];
        loop {
            let mut changed = false;
            for i in (0..n).rev() {
                if spiked[i] {
                    continue;
                }
                let kick: f64 = (0..n)
                    .filter(|&j| spiked[j] && j != i)
                    .map(|j| params.weights.get(j, i))
                    .sum();
                if pre[i] + kick >= params.threshold {
                    spiked[i] = true;
                    changed = true;
                    break;
                }
            }
            if !changed {
                break;
            }
        }
        (0..n).filter(|&i| spiked[i]).collect()
    }

    #[test]
    fn layered_example() {
        let p = net(WeightMatrix::uniform(3, 0.1).unwrap());
        let out = resolve_firing(&[1.0, 0.95, 0.7], &p).unwrap();
        assert_eq!(out.layers, vec![vec![0], vec![1]]);
        assert_eq!(out.spikers, vec![0, 1]);
        assert_eq!(out.post_potentials[0], 0.0);
        assert_eq!(out.post_potentials[1], 0.0);
        assert!((out.post_potentials[2] - 0.9).abs() < 1e-15);
        assert!(!out.is_full_sync());
    }

    #[test]
    fn all_at_threshold_spike_together() {
        let p = net(WeightMatrix::uniform(4, 0.1).unwrap());
        let out = resolve_firing(&[1.0; 4], &p).unwrap();
        assert_eq!(out.layers.len(), 1);
        assert!(out.is_full_sync());
        assert!(out.post_potentials.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_kick_absorption() {
        let m = 0.25;
        let p = net(WeightMatrix::uniform(2, m).unwrap());
        let out = resolve_firing(&[1.0, 1.0 - m / 2.0], &p).unwrap();
        assert_eq!(out.spikers, vec![0, 1]);
        assert!(out.is_full_sync());
    }

    #[test]
    fn rejects_subthreshold_input() {
        let p = net(WeightMatrix::uniform(2, 0.1).unwrap());
        assert!(matches!(
            resolve_firing(&[0.9, 0.5], &p),
            Err(Error::NoSpontaneousSpike)
        ));
        assert!(resolve_firing(&[1.0], &p).is_err());
    }

    #[test]
    fn dense_weights_are_directional() {
        // neuron 0 kicks 1 hard, 1 kicks 2 hard, 2 never gets enough from 0 alone
        let rows = vec![
            vec![0.0, 0.5, 0.01],
            vec![0.01, 0.0, 0.5],
            vec![0.01, 0.01, 0.0],
        ];
        let p = net(WeightMatrix::from_rows(rows).unwrap());
        let out = resolve_firing(&[1.0, 0.6, 0.6], &p).unwrap();
        assert_eq!(out.layers, vec![vec![0], vec![1], vec![2]]);
    }

    fn instance() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>)> {
        (2usize..=12).prop_flat_map(|n| {
            (
                prop::collection::vec(prop::collection::vec(0.01f64..0.6, n), n),
                prop::collection::vec(-1.0f64..1.2, n),
            )
        })
    }

    proptest! {
        #[test]
        fn matches_sequential_absorption((rows, mut pre) in instance()) {
            if pre.iter().all(|&v| v < 1.0) {
                pre[0] = 1.0;
            }
            let p = net(WeightMatrix::from_rows(rows).unwrap());
            let out = resolve_firing(&pre, &p).unwrap();
            prop_assert_eq!(&out.spikers, &sequential_absorption(&pre, &p));
            prop_assert!(out.layers.len() <= pre.len());
            prop_assert!(out.post_potentials.iter().all(|&v| v < p.threshold));
            let total: usize = out.layers.iter().map(Vec::len).sum();
            prop_assert_eq!(total, out.spikers.len());
        }

        #[test]
        fn larger_weights_enlarge_spikers((rows, mut pre) in instance(), bump in 0.0f64..0.3) {
            if pre.iter().all(|&v| v < 1.0) {
                pre[0] = 1.0;
            }
            let bigger: Vec<Vec<f64>> =
                rows.iter().map(|r| r.iter().map(|h| h + bump).collect()).collect();
            let small = net(WeightMatrix::from_rows(rows).unwrap());
            let large = net(WeightMatrix::from_rows(bigger).unwrap());
            let a = resolve_firing(&pre, &small).unwrap().spikers;
            let b = resolve_firing(&pre, &large).unwrap().spikers;
            prop_assert!(a.iter().all(|i| b.contains(i)));
        }
    }
}
