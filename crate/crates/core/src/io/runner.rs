//! Dispatch from an [`ExperimentSpec`] to the estimators, producing one
//! [`ResultTable`] per sweep.
//!
//! CSV schemas (every network row starts with the SI parameter columns
//! `n_neurons, leak_rate, drive, threshold, reset, floor, epsilon, min_weight`):
//!
//! | kind                 | further columns |
//! |----------------------|-----------------|
//! | `bounds_table`       | `theorem1_bound, preconditions_met` |
//! | `stay_sync_sweep`    | `trials, successes, point, ci_low, ci_high, truncated, theorem1_bound` |
//! | `bs_curve`           | `n, trials, bs_point, bs_low, bs_high, first_point, first_low, first_high, truncated, theorem2_bound, theorem2_valid` |
//! | `single_trial_trace` | `event, time, n_layers, n_spikers, full_sync, min_post, max_post` |
//! | `ldp_tail`           | `leak_rate, delta, horizon, epsilon, trials, successes, point, ci_low, ci_high, below_resolution, eps_log_p, neg_rate` |

use std::path::Path;

use serde_json::json;

use crate::bounds::{ldp_rate, theorem1_bound, theorem2_bound};
use crate::error::{Error, Result};
use crate::io::config::{spec_to_json, ExperimentKind, ExperimentSpec, SweepParameter};
use crate::io::table::{Cell, ResultTable};
use crate::model::NetworkParams;
use crate::montecarlo::{estimate_bs, estimate_ldp_tail, estimate_stay_sync};
use crate::simulator::run_trial;

const PARAM_COLUMNS: &[&str] = &[
    "n_neurons",
    "leak_rate",
    "drive",
    "threshold",
    "reset",
    "floor",
    "epsilon",
    "min_weight",
];

fn param_cells(p: &NetworkParams) -> Vec<Cell> {
    vec![
        Cell::Int(p.n_neurons() as u64),
        Cell::Float(p.leak_rate),
        Cell::Float(p.drive),
        Cell::Float(p.threshold),
        Cell::Float(p.reset),
        Cell::Float(p.floor),
        Cell::Float(p.noise_intensity),
        Cell::Float(p.min_weight()),
    ]
}

fn with_params(extra: &[&'static str]) -> Vec<&'static str> {
    PARAM_COLUMNS.iter().chain(extra).copied().collect()
}

/// `(table name, sweep parameter, parameter sets)` for one output file.
type TablePlan = (String, Option<SweepParameter>, Vec<NetworkParams>);

fn sweep_points(spec: &ExperimentSpec) -> Result<Vec<TablePlan>> {
    let kind = spec.kind.as_str();
    if spec.sweep.is_empty() {
        return Ok(vec![(kind.to_string(), None, vec![spec.params.clone()])]);
    }
    spec.sweep
        .iter()
        .map(|s| {
            let points = s
                .values
                .iter()
                .map(|&v| {
                    s.parameter
                        .apply(&spec.params, v)
                        .map_err(|e| Error::SweepPoint {
                            parameter: s.parameter.key().to_string(),
                            value: v,
                            source: Box::new(e),
                        })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((
                format!("{kind}_{}", s.parameter.short_name()),
                Some(s.parameter),
                points,
            ))
        })
        .collect()
}

fn at_point<T>(sweep: Option<SweepParameter>, p: &NetworkParams, r: Result<T>) -> Result<T> {
    r.map_err(|e| match sweep {
        Some(s) => Error::SweepPoint {
            parameter: s.key().to_string(),
            value: sweep_value(s, p),
            source: Box::new(e),
        },
        None => e,
    })
}

fn sweep_value(s: SweepParameter, p: &NetworkParams) -> f64 {
    match s {
        SweepParameter::NNeurons => p.n_neurons() as f64,
        SweepParameter::LeakRate => p.leak_rate,
        SweepParameter::Drive => p.drive,
        SweepParameter::Threshold => p.threshold,
        SweepParameter::Reset => p.reset,
        SweepParameter::Floor => p.floor,
        SweepParameter::NoiseIntensity => p.noise_intensity,
        SweepParameter::Weight => p.min_weight(),
    }
}

fn validate(spec: &ExperimentSpec) -> Result<()> {
    if spec.trials == 0 && spec.kind != ExperimentKind::BoundsTable {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    spec.sim.validate()?;
    Ok(())
}

/// Runs the experiment and returns its tables without touching the disk.
pub fn execute(spec: &ExperimentSpec) -> Result<Vec<ResultTable>> {
    validate(spec)?;
    let mut tables = match spec.kind {
        ExperimentKind::LdpTail => vec![ldp_table(spec)?],
        kind => sweep_points(spec)?
            .into_iter()
            .map(|(name, sweep, points)| {
                let mut table = match kind {
                    ExperimentKind::BoundsTable => ResultTable::new(
                        name,
                        &with_params(&["theorem1_bound", "preconditions_met"]),
                        &["theorem1_bound"],
                    ),
                    ExperimentKind::StaySyncSweep => ResultTable::new(
                        name,
                        &with_params(&[
                            "trials",
                            "successes",
                            "point",
                            "ci_low",
                            "ci_high",
                            "truncated",
                            "theorem1_bound",
                        ]),
                        &["point", "ci_low", "ci_high", "theorem1_bound"],
                    ),
                    ExperimentKind::BsCurve => ResultTable::new(
                        name,
                        &with_params(&[
                            "n",
                            "trials",
                            "bs_point",
                            "bs_low",
                            "bs_high",
                            "first_point",
                            "first_low",
                            "first_high",
                            "truncated",
                            "theorem2_bound",
                            "theorem2_valid",
                        ]),
                        &[
                            "bs_point",
                            "bs_low",
                            "bs_high",
                            "first_point",
                            "first_low",
                            "first_high",
                            "theorem2_bound",
                        ],
                    ),
                    ExperimentKind::SingleTrialTrace => ResultTable::new(
                        name,
                        &with_params(&[
                            "event",
                            "time",
                            "n_layers",
                            "n_spikers",
                            "full_sync",
                            "min_post",
                            "max_post",
                        ]),
                        &[],
                    ),
                    ExperimentKind::LdpTail => unreachable!("handled above"),
                };
                for p in &points {
                    at_point(sweep, p, fill_rows(spec, p, &mut table))?;
                }
                table.metadata = metadata(spec, &table, sweep);
                Ok(table)
            })
            .collect::<Result<Vec<_>>>()?,
    };
    for t in &mut tables {
        if t.metadata.is_null() {
            t.metadata = metadata(spec, t, None);
        }
    }
    Ok(tables)
}

fn fill_rows(spec: &ExperimentSpec, p: &NetworkParams, table: &mut ResultTable) -> Result<()> {
    let base = param_cells(p);
    let row = |extra: Vec<Cell>| base.iter().copied().chain(extra).collect::<Vec<_>>();
    match spec.kind {
        ExperimentKind::BoundsTable => {
            let b = theorem1_bound(p);
            table.push(row(vec![
                Cell::Float(b.value),
                Cell::Bool(b.preconditions_met),
            ]))
        }
        ExperimentKind::StaySyncSweep => {
            let r = estimate_stay_sync(p, &spec.sim, spec.trials)?;
            let e = r.estimate;
            table.push(row(vec![
                Cell::Int(e.trials),
                Cell::Int(e.successes),
                Cell::Float(e.point),
                Cell::Float(e.ci_low),
                Cell::Float(e.ci_high),
                Cell::Int(r.truncated),
                Cell::Float(theorem1_bound(p).value),
            ]))
        }
        ExperimentKind::BsCurve => {
            let curve = estimate_bs(p, &spec.sim, spec.trials, spec.n_max, spec.init)?;
            for (i, &n) in curve.n_values.iter().enumerate() {
                // a refused bound (β ≤ θ) is reported as the trivial bound 0
                let (bound, valid) = match theorem2_bound(p, n) {
                    Ok(b) => (b.value, b.preconditions_met),
                    Err(Error::BoundRefused(_)) => (0.0, false),
                    Err(e) => return Err(e),
                };
                let bs = curve.bs_estimates[i];
                let first = curve.first_sync_pmf[i];
                table.push(row(vec![
                    Cell::Int(n as u64),
                    Cell::Int(curve.trials),
                    Cell::Float(bs.point),
                    Cell::Float(bs.ci_low),
                    Cell::Float(bs.ci_high),
                    Cell::Float(first.point),
                    Cell::Float(first.ci_low),
                    Cell::Float(first.ci_high),
                    Cell::Int(curve.truncated),
                    Cell::Float(bound),
                    Cell::Bool(valid),
                ]))?;
            }
            Ok(())
        }
        ExperimentKind::SingleTrialTrace => {
            let mut rng = spec.sim.rng();
            let initial = spec.init.draw(p, &mut rng);
            let rec = run_trial(&initial, p, &spec.sim, spec.n_max, &mut rng)?;
            for (k, e) in rec.events.iter().enumerate() {
                let post = &e.outcome.post_potentials;
                let min = post.iter().copied().fold(f64::INFINITY, f64::min);
                let max = post.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                table.push(row(vec![
                    Cell::Int(k as u64 + 1),
                    Cell::Float(e.time),
                    Cell::Int(e.outcome.layers.len() as u64),
                    Cell::Int(e.outcome.spikers.len() as u64),
                    Cell::Bool(e.is_full_sync),
                    Cell::Float(min),
                    Cell::Float(max),
                ]))?;
            }
            Ok(())
        }
        ExperimentKind::LdpTail => unreachable!("ldp_tail has its own table"),
    }
}

fn ldp_table(spec: &ExperimentSpec) -> Result<ResultTable> {
    let ldp = spec
        .ldp
        .as_ref()
        .ok_or_else(|| Error::config("ldp", "missing required field"))?;
    let gamma = spec.params.leak_rate;
    let points = estimate_ldp_tail(
        gamma,
        ldp.delta,
        ldp.horizon,
        &ldp.noise_intensities,
        &spec.sim,
        spec.trials,
    )?;
    let mut table = ResultTable::new(
        "ldp_tail",
        &[
            "leak_rate",
            "delta",
            "horizon",
            "epsilon",
            "trials",
            "successes",
            "point",
            "ci_low",
            "ci_high",
            "below_resolution",
            "eps_log_p",
            "neg_rate",
        ],
        &["point", "ci_low", "ci_high"],
    );
    for pt in points {
        let e = pt.estimate;
        table.push(vec![
            Cell::Float(gamma),
            Cell::Float(ldp.delta),
            Cell::Float(ldp.horizon),
            Cell::Float(pt.epsilon),
            Cell::Int(e.trials),
            Cell::Int(e.successes),
            Cell::Float(e.point),
            Cell::Float(e.ci_low),
            Cell::Float(e.ci_high),
            Cell::Bool(pt.below_resolution),
            Cell::Float(pt.eps_log_p),
            Cell::Float(pt.neg_rate),
        ])?;
    }
    let mut meta = metadata(spec, &table, None);
    meta["ldp_rate"] = json!(ldp_rate(gamma, ldp.delta, ldp.horizon)?);
    table.metadata = meta;
    Ok(table)
}

fn metadata(
    spec: &ExperimentSpec,
    table: &ResultTable,
    sweep: Option<SweepParameter>,
) -> serde_json::Value {
    json!({
        "spec": spec_to_json(spec),
        "code_version": env!("CARGO_PKG_VERSION"),
        "seed": spec.sim.seed,
        "kind": spec.kind.as_str(),
        "sweep_parameter": sweep.map(|s| s.key()),
        "columns": table.columns,
        "warnings": spec.params.warnings(),
    })
}

/// Runs the experiment and writes every table under `spec.output_path`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultTable>> {
    let tables = execute(spec)?;
    let dir = Path::new(&spec.output_path);
    for t in &tables {
        t.write(dir)?;
    }
    Ok(tables)
}
