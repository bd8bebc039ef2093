//! JSON experiment specs.
//!
//! Every dimensional key carries its unit as a suffix (`threshold_mV`,
//! `dt_s`, `noise_intensity_V2_per_s`). Values are converted to SI on load
//! and written back in SI, so `load(write(spec)) == spec`. Unknown keys,
//! missing units and suffixes that do not match the quantity are errors.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::model::{NetworkParams, WeightMatrix};
use crate::simulator::{InitialCondition, SimConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    StaySyncSweep,
    BsCurve,
    LdpTail,
    BoundsTable,
    SingleTrialTrace,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::StaySyncSweep => "stay_sync_sweep",
            ExperimentKind::BsCurve => "bs_curve",
            ExperimentKind::LdpTail => "ldp_tail",
            ExperimentKind::BoundsTable => "bounds_table",
            ExperimentKind::SingleTrialTrace => "single_trial_trace",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "stay_sync_sweep" => ExperimentKind::StaySyncSweep,
            "bs_curve" => ExperimentKind::BsCurve,
            "ldp_tail" => ExperimentKind::LdpTail,
            "bounds_table" => ExperimentKind::BoundsTable,
            "single_trial_trace" => ExperimentKind::SingleTrialTrace,
            _ => return None,
        })
    }
}

/// Network quantities a sweep may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    NNeurons,
    LeakRate,
    Drive,
    Threshold,
    Reset,
    Floor,
    NoiseIntensity,
    Weight,
}

impl SweepParameter {
    /// Canonical (SI) key, also used in output file names.
    pub fn key(&self) -> &'static str {
        match self {
            SweepParameter::NNeurons => "n_neurons",
            SweepParameter::LeakRate => "leak_rate_per_s",
            SweepParameter::Drive => "drive_V",
            SweepParameter::Threshold => "threshold_V",
            SweepParameter::Reset => "reset_V",
            SweepParameter::Floor => "floor_V",
            SweepParameter::NoiseIntensity => "noise_intensity_V2_per_s",
            SweepParameter::Weight => "weight_V",
        }
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            SweepParameter::NNeurons => "n_neurons",
            SweepParameter::LeakRate => "leak_rate",
            SweepParameter::Drive => "drive",
            SweepParameter::Threshold => "threshold",
            SweepParameter::Reset => "reset",
            SweepParameter::Floor => "floor",
            SweepParameter::NoiseIntensity => "epsilon",
            SweepParameter::Weight => "min_weight",
        }
    }

    /// Returns a copy of `base` with this parameter set to `value` (SI).
    pub fn apply(&self, base: &NetworkParams, value: f64) -> Result<NetworkParams> {
        let mut p = base.clone();
        match self {
            SweepParameter::NNeurons => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(Error::InvalidParams(format!(
                        "n_neurons must be a positive integer, got {value}"
                    )));
                }
                let WeightMatrix::Uniform { weight, .. } = p.weights else {
                    return Err(Error::InvalidParams(
                        "cannot resize an explicit weight matrix".into(),
                    ));
                };
                p.weights = WeightMatrix::uniform(value as usize, weight)?;
            }
            SweepParameter::LeakRate => p.leak_rate = value,
            SweepParameter::Drive => p.drive = value,
            SweepParameter::Threshold => p.threshold = value,
            SweepParameter::Reset => p.reset = value,
            SweepParameter::Floor => p.floor = value,
            SweepParameter::NoiseIntensity => p.noise_intensity = value,
            SweepParameter::Weight => {
                let WeightMatrix::Uniform { n, .. } = p.weights else {
                    return Err(Error::InvalidParams(
                        "weight sweeps need uniform weights".into(),
                    ));
                };
                p.weights = WeightMatrix::uniform(n, value)?;
            }
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub parameter: SweepParameter,
    /// SI values.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LdpSpec {
    pub delta: f64,
    pub horizon: f64,
    pub noise_intensities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub params: NetworkParams,
    pub sim: SimConfig,
    pub sweep: Vec<Sweep>,
    pub trials: u64,
    /// Firing events per trial for `bs_curve` and `single_trial_trace`.
    pub n_max: usize,
    pub init: InitialCondition,
    pub ldp: Option<LdpSpec>,
    pub output_path: String,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Quantity {
    Voltage,
    Rate,
    NoiseIntensity,
    Time,
}

impl Quantity {
    fn scale(&self, unit: &str) -> Option<f64> {
        match (self, unit) {
            (Quantity::Voltage, "V") => Some(1.0),
            (Quantity::Voltage, "mV") => Some(1e3),
            (Quantity::Rate, "per_s") => Some(1.0),
            (Quantity::NoiseIntensity, "V2_per_s") => Some(1.0),
            (Quantity::NoiseIntensity, "mV2_per_s") => Some(1e6),
            (Quantity::Time, "s") => Some(1.0),
            (Quantity::Time, "ms") => Some(1e3),
            _ => None,
        }
    }

    fn describe(&self) -> &'static str {
        match self {
            Quantity::Voltage => "a voltage (suffix _V or _mV)",
            Quantity::Rate => "a rate (suffix _per_s)",
            Quantity::NoiseIntensity => "a noise intensity (suffix _V2_per_s or _mV2_per_s)",
            Quantity::Time => "a duration (suffix _s or _ms)",
        }
    }
}

/// A key split into its quantity name and unit scale (units per SI unit;
/// dividing keeps integer millivolts correctly rounded).
struct UnitKey<'a> {
    base: &'a str,
    scale: f64,
}

/// `bases` lists `(name, quantity)` with aliases spelled out.
fn split_unit_key<'a>(
    key: &'a str,
    bases: &[(&'a str, Quantity)],
    path: &str,
) -> Result<Option<UnitKey<'a>>> {
    let mut best: Option<(&str, Quantity)> = None;
    for &(base, q) in bases {
        let matches = key == base
            || (key.len() > base.len() + 1
                && key.starts_with(base)
                && key.as_bytes()[base.len()] == b'_');
        if matches && best.is_none_or(|(b, _)| base.len() > b.len()) {
            best = Some((base, q));
        }
    }
    let Some((base, quantity)) = best else {
        return Ok(None);
    };
    if key == base {
        return Err(Error::config(
            format!("{path}.{key}"),
            format!("missing unit: {base} is {}", quantity.describe()),
        ));
    }
    let unit = &key[base.len() + 1..];
    match quantity.scale(unit) {
        Some(scale) => Ok(Some(UnitKey { base, scale })),
        None => Err(Error::config(
            format!("{path}.{key}"),
            format!(
                "unit mismatch: {base} is {}, not '{unit}'",
                quantity.describe()
            ),
        )),
    }
}

fn as_f64(v: &Value, path: &str) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::config(path, "expected a finite number"))
}

fn as_u64(v: &Value, path: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::config(path, "expected a nonnegative integer"))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::config(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::config(path, "expected an array"))
}

fn numbers(v: &Value, path: &str, scale: f64) -> Result<Vec<f64>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_f64(x, &format!("{path}[{i}]")).map(|x| x / scale))
        .collect()
}

const PARAM_BASES: &[(&str, Quantity)] = &[
    ("leak_rate", Quantity::Rate),
    ("gamma", Quantity::Rate),
    ("drive", Quantity::Voltage),
    ("beta", Quantity::Voltage),
    ("threshold", Quantity::Voltage),
    ("theta", Quantity::Voltage),
    ("reset", Quantity::Voltage),
    ("floor", Quantity::Voltage),
    ("alpha", Quantity::Voltage),
    ("noise_intensity", Quantity::NoiseIntensity),
    ("epsilon", Quantity::NoiseIntensity),
    ("weight", Quantity::Voltage),
    ("min_weight", Quantity::Voltage),
    ("weight_matrix", Quantity::Voltage),
];

fn canonical_param(base: &str) -> &str {
    match base {
        "gamma" => "leak_rate",
        "beta" => "drive",
        "theta" => "threshold",
        "alpha" => "floor",
        "epsilon" => "noise_intensity",
        "min_weight" => "weight",
        other => other,
    }
}

fn parse_params(v: &Value) -> Result<NetworkParams> {
    let path = "params";
    let obj = as_object(v, path)?;
    let mut n_neurons = None;
    let mut scalars: std::collections::BTreeMap<&str, f64> = Default::default();
    let mut matrix: Option<Vec<Vec<f64>>> = None;

    for (key, value) in obj {
        let field = format!("{path}.{key}");
        if key == "n_neurons" {
            n_neurons = Some(as_u64(value, &field)?);
            continue;
        }
        let Some(uk) = split_unit_key(key, PARAM_BASES, path)? else {
            return Err(Error::config(field, "unknown key"));
        };
        let name = canonical_param(uk.base);
        if name == "weight_matrix" {
            let rows = as_array(value, &field)?
                .iter()
                .enumerate()
                .map(|(j, row)| numbers(row, &format!("{field}[{j}]"), uk.scale))
                .collect::<Result<Vec<_>>>()?;
            matrix = Some(rows);
            continue;
        }
        if scalars
            .insert(name, as_f64(value, &field)? / uk.scale)
            .is_some()
        {
            return Err(Error::config(field, format!("{name} given more than once")));
        }
    }

    let need = |name: &str| {
        scalars
            .get(name)
            .copied()
            .ok_or_else(|| Error::config(format!("{path}.{name}"), "missing required field"))
    };
    let n = n_neurons
        .ok_or_else(|| Error::config(format!("{path}.n_neurons"), "missing required field"))?;
    let weights = match (matrix, scalars.get("weight")) {
        (Some(_), Some(_)) => {
            return Err(Error::config(
                format!("{path}.weight"),
                "give either a uniform weight or a weight matrix, not both",
            ))
        }
        (Some(rows), None) => {
            if rows.len() as u64 != n {
                return Err(Error::config(
                    format!("{path}.weight_matrix"),
                    format!("{} rows for {n} neurons", rows.len()),
                ));
            }
            WeightMatrix::from_rows(rows)
                .map_err(|e| Error::config(format!("{path}.weight_matrix"), e.to_string()))?
        }
        (None, Some(&w)) => WeightMatrix::uniform(n as usize, w)
            .map_err(|e| Error::config(format!("{path}.weight"), e.to_string()))?,
        (None, None) => {
            return Err(Error::config(
                format!("{path}.weight"),
                "missing required field",
            ))
        }
    };
    NetworkParams::new(
        need("leak_rate")?,
        need("drive")?,
        need("threshold")?,
        need("reset")?,
        need("floor")?,
        need("noise_intensity")?,
        weights,
    )
    .map_err(|e| Error::config(path, e.to_string()))
}

const SIM_BASES: &[(&str, Quantity)] = &[("dt", Quantity::Time), ("max_time", Quantity::Time)];

fn parse_sim(v: Option<&Value>) -> Result<SimConfig> {
    let mut sim = SimConfig::default();
    let Some(v) = v else {
        return Ok(sim);
    };
    let path = "sim";
    for (key, value) in as_object(v, path)? {
        let field = format!("{path}.{key}");
        match key.as_str() {
            "bridge_correction" => {
                sim.bridge_correction = value
                    .as_bool()
                    .ok_or_else(|| Error::config(&field, "expected a boolean"))?
            }
            "seed" => sim.seed = as_u64(value, &field)?,
            "trial_index" => sim.trial_index = as_u64(value, &field)?,
            _ => match split_unit_key(key, SIM_BASES, path)? {
                Some(uk) if uk.base == "dt" => sim.dt = as_f64(value, &field)? / uk.scale,
                Some(uk) => sim.max_time = as_f64(value, &field)? / uk.scale,
                None => return Err(Error::config(field, "unknown key")),
            },
        }
    }
    sim.validate()
        .map_err(|e| Error::config(path, e.to_string()))?;
    Ok(sim)
}

fn sweep_parameter(key: &str, path: &str) -> Result<(SweepParameter, f64)> {
    if key == "n_neurons" {
        return Ok((SweepParameter::NNeurons, 1.0));
    }
    let Some(uk) = split_unit_key(key, PARAM_BASES, path)? else {
        return Err(Error::config(
            path,
            format!("'{key}' is not a network parameter"),
        ));
    };
    let p = match canonical_param(uk.base) {
        "leak_rate" => SweepParameter::LeakRate,
        "drive" => SweepParameter::Drive,
        "threshold" => SweepParameter::Threshold,
        "reset" => SweepParameter::Reset,
        "floor" => SweepParameter::Floor,
        "noise_intensity" => SweepParameter::NoiseIntensity,
        "weight" => SweepParameter::Weight,
        other => {
            return Err(Error::config(path, format!("'{other}' cannot be swept")));
        }
    };
    Ok((p, uk.scale))
}

fn parse_sweep(v: Option<&Value>) -> Result<Vec<Sweep>> {
    let Some(v) = v else {
        return Ok(Vec::new());
    };
    as_array(v, "sweep")?
        .iter()
        .enumerate()
        .map(|(i, entry)| {
            let path = format!("sweep[{i}]");
            let obj = as_object(entry, &path)?;
            for key in obj.keys() {
                if key != "parameter" && key != "values" {
                    return Err(Error::config(format!("{path}.{key}"), "unknown key"));
                }
            }
            let name = obj
                .get("parameter")
                .and_then(Value::as_str)
                .ok_or_else(|| {
                    Error::config(format!("{path}.parameter"), "missing required field")
                })?;
            let (parameter, scale) = sweep_parameter(name, &format!("{path}.parameter"))?;
            let values = numbers(
                obj.get("values").ok_or_else(|| {
                    Error::config(format!("{path}.values"), "missing required field")
                })?,
                &format!("{path}.values"),
                scale,
            )?;
            if values.is_empty() {
                return Err(Error::config(format!("{path}.values"), "empty sweep"));
            }
            Ok(Sweep { parameter, values })
        })
        .collect()
}

const LDP_BASES: &[(&str, Quantity)] = &[
    ("delta", Quantity::Voltage),
    ("horizon", Quantity::Time),
    ("noise_intensities", Quantity::NoiseIntensity),
    ("epsilons", Quantity::NoiseIntensity),
];

fn parse_ldp(v: Option<&Value>) -> Result<Option<LdpSpec>> {
    let Some(v) = v else {
        return Ok(None);
    };
    let path = "ldp";
    let (mut delta, mut horizon, mut eps) = (None, None, None);
    for (key, value) in as_object(v, path)? {
        let field = format!("{path}.{key}");
        let Some(uk) = split_unit_key(key, LDP_BASES, path)? else {
            return Err(Error::config(field, "unknown key"));
        };
        match uk.base {
            "delta" => delta = Some(as_f64(value, &field)? / uk.scale),
            "horizon" => horizon = Some(as_f64(value, &field)? / uk.scale),
            _ => eps = Some(numbers(value, &field, uk.scale)?),
        }
    }
    let missing = |name: &str| Error::config(format!("{path}.{name}"), "missing required field");
    Ok(Some(LdpSpec {
        delta: delta.ok_or_else(|| missing("delta"))?,
        horizon: horizon.ok_or_else(|| missing("horizon"))?,
        noise_intensities: eps.ok_or_else(|| missing("noise_intensities"))?,
    }))
}

fn parse_init(v: Option<&Value>, kind: ExperimentKind) -> Result<InitialCondition> {
    match v.map(|v| v.as_str()) {
        None => Ok(if kind == ExperimentKind::BsCurve {
            InitialCondition::Uniform
        } else {
            InitialCondition::Synchronized
        }),
        Some(Some("synchronized")) => Ok(InitialCondition::Synchronized),
        Some(Some("uniform")) => Ok(InitialCondition::Uniform),
        Some(_) => Err(Error::config(
            "init",
            "expected \"synchronized\" or \"uniform\"",
        )),
    }
}

pub fn parse_spec(value: &Value) -> Result<ExperimentSpec> {
    let obj = as_object(value, "$")?;
    const TOP: &[&str] = &[
        "kind",
        "params",
        "sim",
        "sweep",
        "trials",
        "n_max",
        "init",
        "ldp",
        "output_path",
    ];
    for key in obj.keys() {
        if !TOP.contains(&key.as_str()) {
            return Err(Error::config(key.clone(), "unknown key"));
        }
    }
    let required = |name: &str| {
        obj.get(name)
            .ok_or_else(|| Error::config(name, "missing required field"))
    };
    let kind_str = required("kind")?
        .as_str()
        .ok_or_else(|| Error::config("kind", "expected a string"))?;
    let kind = ExperimentKind::parse(kind_str)
        .ok_or_else(|| Error::config("kind", format!("unknown experiment kind '{kind_str}'")))?;
    let params = parse_params(required("params")?)?;
    let sim = parse_sim(obj.get("sim"))?;
    let sweep = parse_sweep(obj.get("sweep"))?;
    let trials = as_u64(required("trials")?, "trials")?;
    let n_max = match obj.get("n_max") {
        Some(v) => as_u64(v, "n_max")? as usize,
        None => match kind {
            ExperimentKind::BsCurve | ExperimentKind::SingleTrialTrace => {
                return Err(Error::config("n_max", "missing required field"))
            }
            _ => 1,
        },
    };
    let init = parse_init(obj.get("init"), kind)?;
    let ldp = parse_ldp(obj.get("ldp"))?;
    if kind == ExperimentKind::LdpTail {
        if ldp.is_none() {
            return Err(Error::config("ldp", "missing required field"));
        }
        if !sweep.is_empty() {
            return Err(Error::config(
                "sweep",
                "ldp_tail sweeps noise through ldp.noise_intensities",
            ));
        }
    }
    let output_path = required("output_path")?
        .as_str()
        .ok_or_else(|| Error::config("output_path", "expected a string"))?
        .to_string();
    Ok(ExperimentSpec {
        kind,
        params,
        sim,
        sweep,
        trials,
        n_max,
        init,
        ldp,
        output_path,
    })
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<ExperimentSpec> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
    parse_spec(&value)
}

fn params_to_json(p: &NetworkParams) -> Value {
    let mut obj = json!({
        "n_neurons": p.n_neurons(),
        "leak_rate_per_s": p.leak_rate,
        "drive_V": p.drive,
        "threshold_V": p.threshold,
        "reset_V": p.reset,
        "floor_V": p.floor,
        "noise_intensity_V2_per_s": p.noise_intensity,
    });
    let map = obj.as_object_mut().expect("object literal");
    match &p.weights {
        WeightMatrix::Uniform { weight, .. } => {
            map.insert("weight_V".into(), json!(weight));
        }
        WeightMatrix::Dense { n, entries, .. } => {
            let rows: Vec<&[f64]> = entries.chunks(*n).collect();
            map.insert("weight_matrix_V".into(), json!(rows));
        }
    }
    obj
}

/// Canonical SI form of a spec.
pub fn spec_to_json(spec: &ExperimentSpec) -> Value {
    let mut obj = json!({
        "kind": spec.kind.as_str(),
        "params": params_to_json(&spec.params),
        "sim": {
            "dt_s": spec.sim.dt,
            "bridge_correction": spec.sim.bridge_correction,
            "max_time_s": spec.sim.max_time,
            "seed": spec.sim.seed,
            "trial_index": spec.sim.trial_index,
        },
        "trials": spec.trials,
        "n_max": spec.n_max,
        "init": match spec.init {
            InitialCondition::Synchronized => "synchronized",
            InitialCondition::Uniform => "uniform",
        },
        "output_path": spec.output_path,
    });
    let map = obj.as_object_mut().expect("object literal");
    if !spec.sweep.is_empty() {
        let sweeps: Vec<Value> = spec
            .sweep
            .iter()
            .map(|s| json!({ "parameter": s.parameter.key(), "values": s.values }))
            .collect();
        map.insert("sweep".into(), Value::Array(sweeps));
    }
    if let Some(ldp) = &spec.ldp {
        map.insert(
            "ldp".into(),
            json!({
                "delta_V": ldp.delta,
                "horizon_s": ldp.horizon,
                "noise_intensities_V2_per_s": ldp.noise_intensities,
            }),
        );
    }
    obj
}

pub fn write_spec(spec: &ExperimentSpec, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(&spec_to_json(spec))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> Value {
        json!({
            "kind": "stay_sync_sweep",
            "params": {
                "n_neurons": 10,
                "leak_rate_per_s": 100.0,
                "drive_mV": -52.0,
                "threshold_mV": -55.0,
                "reset_mV": -70.0,
                "floor_mV": -100.0,
                "noise_intensity_V2_per_s": 1e-6,
                "weight_mV": 0.75
            },
            "trials": 10,
            "output_path": "out"
        })
    }

    fn error_path(v: &Value) -> String {
        match parse_spec(v) {
            Err(Error::Config { path, message }) => format!("{path}: {message}"),
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn converts_millivolts() {
        let spec = parse_spec(&base()).unwrap();
        assert!((spec.params.threshold + 0.055).abs() < 1e-18);
        assert!((spec.params.min_weight() - 0.75e-3).abs() < 1e-18);
        assert_eq!(spec.init, InitialCondition::Synchronized);
        assert_eq!(spec.sim, SimConfig::default());
    }

    #[test]
    fn epsilon_in_millivolts_is_a_unit_mismatch() {
        let mut v = base();
        let p = v["params"].as_object_mut().unwrap();
        p.remove("noise_intensity_V2_per_s");
        p.insert("epsilon_mV".into(), json!(1.0));
        let msg = error_path(&v);
        assert!(msg.starts_with("params.epsilon_mV: unit mismatch"), "{msg}");
    }

    #[test]
    fn unknown_and_missing_keys() {
        let mut v = base();
        v["params"]["colour_V"] = json!(1.0);
        assert_eq!(error_path(&v), "params.colour_V: unknown key");

        let mut v = base();
        v["extra"] = json!(1);
        assert_eq!(error_path(&v), "extra: unknown key");

        let mut v = base();
        v["params"].as_object_mut().unwrap().remove("reset_mV");
        assert_eq!(error_path(&v), "params.reset: missing required field");

        let mut v = base();
        v["params"]["threshold"] = json!(1.0);
        assert!(error_path(&v).contains("missing unit"));

        let mut v = base();
        v["sweep"] = json!([{"parameter": "colour_V", "values": [1.0]}]);
        assert!(error_path(&v).starts_with("sweep[0].parameter"));

        let mut v = base();
        v["kind"] = json!("bs_curve");
        assert_eq!(error_path(&v), "n_max: missing required field");
    }

    #[test]
    fn sweep_values_are_converted() {
        let mut v = base();
        v["sweep"] = json!([{"parameter": "weight_mV", "values": [0.015, 0.03]}]);
        let spec = parse_spec(&v).unwrap();
        assert_eq!(spec.sweep[0].parameter, SweepParameter::Weight);
        assert!((spec.sweep[0].values[1] - 3e-5).abs() < 1e-20);
    }

    #[test]
    fn round_trip_through_disk() {
        let mut v = base();
        v["sweep"] = json!([{"parameter": "epsilon_V2_per_s", "values": [0.0, 1e-5]}]);
        v["params"]["weight_matrix_mV"] =
            json!([[0.0, 0.5, 0.7], [0.6, 0.0, 0.8], [0.9, 1.0, 0.0]]);
        v["params"].as_object_mut().unwrap().remove("weight_mV");
        v["params"]["n_neurons"] = json!(3);
        let spec = parse_spec(&v).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("spec.json");
        write_spec(&spec, &file).unwrap();
        assert_eq!(load_spec(&file).unwrap(), spec);
    }
}
