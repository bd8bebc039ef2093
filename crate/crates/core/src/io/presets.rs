//! Built-in experiment specs.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::config::{parse_spec, ExperimentSpec};

pub const PRESET_NAMES: &[&str] = &[
    "fig1_red",
    "fig1_green",
    "fig1_blue",
    "fig1_red_bounds",
    "fig2",
    "ldp",
    "theorem2_synthetic",
];

/// ε grid over [0, 2.25e-3] V²/s, dense in the lower decade.
fn fig1_noise_grid() -> Vec<f64> {
    let mut grid = vec![0.0];
    grid.extend((1..=10).map(|k| 2.25e-5 * k as f64));
    grid.extend((2..=10).map(|k| 2.25e-4 * k as f64));
    grid
}

fn fig1(drive_mv: f64, kind: &str, output: &str) -> Value {
    json!({
        "kind": kind,
        "params": {
            "n_neurons": 1599,
            "leak_rate_per_s": 100.0,
            "drive_mV": drive_mv,
            "threshold_mV": -55.0,
            "reset_mV": -70.0,
            "floor_mV": -100.0,
            "noise_intensity_V2_per_s": 0.0,
            "weight_mV": 0.75
        },
        "sim": { "dt_s": 1e-4, "bridge_correction": true, "max_time_s": 10.0, "seed": 1 },
        "trials": 1000,
        "init": "synchronized",
        "sweep": [
            { "parameter": "noise_intensity_V2_per_s", "values": fig1_noise_grid() }
        ],
        "output_path": output
    })
}

pub fn preset_json(name: &str) -> Result<Value> {
    Ok(match name {
        "fig1_red" => fig1(-52.0, "stay_sync_sweep", "results/fig1_red"),
        "fig1_green" => fig1(-54.7, "stay_sync_sweep", "results/fig1_green"),
        "fig1_blue" => fig1(-55.3, "stay_sync_sweep", "results/fig1_blue"),
        "fig1_red_bounds" => fig1(-52.0, "bounds_table", "results/fig1_red_bounds"),
        "fig2" => json!({
            "kind": "bs_curve",
            "params": {
                "n_neurons": 1599,
                "leak_rate_per_s": 100.0,
                "drive_mV": -52.0,
                "threshold_mV": -55.0,
                "reset_mV": -70.0,
                "floor_mV": -100.0,
                "noise_intensity_V2_per_s": 2.25e-5,
                "weight_mV": 0.03
            },
            "sim": { "dt_s": 1e-4, "bridge_correction": true, "max_time_s": 10.0, "seed": 2 },
            "trials": 200,
            "n_max": 100,
            "init": "uniform",
            "sweep": [
                { "parameter": "weight_mV", "values": [0.0150, 0.0225, 0.0270, 0.0300] }
            ],
            "output_path": "results/fig2"
        }),
        "ldp" => json!({
            "kind": "ldp_tail",
            "params": {
                "n_neurons": 1,
                "leak_rate_per_s": 1.0,
                "drive_V": 1.0,
                "threshold_V": 0.5,
                "reset_V": 0.0,
                "floor_V": 0.0,
                "noise_intensity_V2_per_s": 0.025,
                "weight_V": 1.0
            },
            "sim": { "dt_s": 2e-3, "bridge_correction": true, "max_time_s": 10.0, "seed": 3 },
            "trials": 1000000,
            "ldp": {
                "delta_V": 0.3,
                "horizon_s": 2.0,
                "noise_intensities_V2_per_s": [0.1, 0.05, 0.025]
            },
            "output_path": "results/ldp"
        }),
        "theorem2_synthetic" => json!({
            "kind": "bs_curve",
            "params": {
                "n_neurons": 20,
                "leak_rate_per_s": 1.0,
                "drive_V": 1.5,
                "threshold_V": 0.5,
                "reset_V": 0.0,
                "floor_V": -0.5,
                "noise_intensity_V2_per_s": 0.02,
                "weight_V": 0.5
            },
            "sim": { "dt_s": 1e-3, "bridge_correction": true, "max_time_s": 100.0, "seed": 4 },
            "trials": 10000,
            "n_max": 10,
            "init": "uniform",
            "output_path": "results/theorem2_synthetic"
        }),
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown preset '{other}'; available: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    })
}

pub fn preset(name: &str) -> Result<ExperimentSpec> {
    parse_spec(&preset_json(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::config::{ExperimentKind, SweepParameter};
    use crate::simulator::InitialCondition;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1e-300)
    }

    #[test]
    fn every_preset_parses() {
        for name in PRESET_NAMES {
            preset(name).unwrap();
        }
        assert!(preset("fig3").is_err());
    }

    #[test]
    fn fig1_red_values() {
        let s = preset("fig1_red").unwrap();
        assert_eq!(s.kind, ExperimentKind::StaySyncSweep);
        assert_eq!(s.params.n_neurons(), 1599);
        assert_eq!(s.params.leak_rate, 100.0);
        assert!(close(s.params.threshold, -0.055));
        assert!(close(s.params.reset, -0.070));
        assert!(close(s.params.min_weight(), 0.75e-3));
        assert!(close(s.params.drive, -0.052));
        let sweep = &s.sweep[0];
        assert_eq!(sweep.parameter, SweepParameter::NoiseIntensity);
        assert_eq!(sweep.values[0], 0.0);
        assert!(close(*sweep.values.last().unwrap(), 2.25e-3));
    }

    #[test]
    fn fig2_values() {
        let s = preset("fig2").unwrap();
        assert_eq!(s.init, InitialCondition::Uniform);
        assert!(close(s.params.drive, -0.052));
        assert!(close(s.params.noise_intensity, 2.25e-5));
        assert!(close(s.params.floor, -0.100));
        assert!(close(s.params.threshold, -0.055));
        let m = &s.sweep[0].values;
        for (got, want) in m.iter().zip([0.0150e-3, 0.0225e-3, 0.0270e-3, 0.0300e-3]) {
            assert!(close(*got, want));
        }
    }
}
