//! Subcommand implementations. All human-facing output is files under the
//! configured output directory; stdout carries only short status lines
//! (and the validation table).

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use qflow::circuit::GateStats;
use qflow::error::{Error, Result};
use qflow::fluid::{
    classical_evolve, decode, encode, initial_wavefunction, pearson_r, total_mass,
    FlowObservables, GridSpec,
};
use qflow::momentum::{
    apply_truncation, build_full_step, decompose_k_squared, TruncationPolicy, TruncationReport,
};
use qflow::noise::{
    algorithmic_error, averaged_observables, equilibrium_point, fill_empirical, linear_fit,
    scaling_curves, FitResult, TradeoffCurves,
};
use qflow::qft::AqftConfig;
use qflow::validate::run_suite;

use crate::config::RunConfig;

#[derive(Serialize)]
struct PearsonTriple {
    rho: Option<f64>,
    jx: Option<f64>,
    jy: Option<f64>,
}

#[derive(Serialize)]
struct TimePointMetrics {
    label: String,
    t: f64,
    pearson_ideal_exact: PearsonTriple,
    pearson_ideal_truncated: PearsonTriple,
    pearson_exact_truncated: PearsonTriple,
    exact_stats: GateStats,
    truncated_stats: GateStats,
    truncation_x: TruncationReport,
    truncation_y: TruncationReport,
    mass_ideal: f64,
    mass_exact: f64,
    mass_truncated: f64,
}

#[derive(Serialize)]
struct SimulateMetrics {
    timestamp_unix: u64,
    config: BTreeMap<String, String>,
    time_points: Vec<TimePointMetrics>,
}

fn correlate(a: &FlowObservables, b: &FlowObservables) -> PearsonTriple {
    PearsonTriple {
        rho: pearson_r(&a.rho, &b.rho).ok(),
        jx: pearson_r(&a.jx, &b.jx).ok(),
        jy: pearson_r(&a.jy, &b.jy).ok(),
    }
}

fn write_field_csv(dir: &Path, label: &str, obs: &FlowObservables) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut file = fs::File::create(dir.join(format!("fields_t{label}.csv")))?;
    obs.write_csv(&mut file)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable metrics");
    fs::write(path, text)?;
    Ok(())
}

pub fn cmd_simulate(config: &RunConfig) -> Result<()> {
    config.validate()?;
    let grid = GridSpec::new(config.nx_qubits, config.ny_qubits);
    let field = initial_wavefunction(grid, config.initial_form);
    let initial = encode(&field);
    let out = &config.output_dir;
    fs::create_dir_all(out)?;

    let exact_cfg = AqftConfig::exact();
    let exact_policy = TruncationPolicy::no_op();
    let trunc_cfg = config.truncated_aqft_config();
    let trunc_policy = config.truncation_policy();
    let noisy = config.trajectories > 0;

    let mut metrics = SimulateMetrics {
        timestamp_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        config: config.echo(),
        time_points: Vec::new(),
    };

    for time in &config.times {
        let t = time.seconds;
        let exact_circuit =
            build_full_step(grid.nx_qubits, grid.ny_qubits, t, &exact_cfg, &exact_policy)?;
        let trunc_circuit =
            build_full_step(grid.nx_qubits, grid.ny_qubits, t, &trunc_cfg, &trunc_policy)?;

        let ideal = FlowObservables::from_field(&classical_evolve(&field, t))?;
        let observables_of = |circuit: &qflow::Circuit| -> Result<FlowObservables> {
            if noisy {
                averaged_observables(
                    circuit,
                    &initial,
                    grid,
                    field.stored_norm(),
                    &config.noise_model(),
                    config.trajectories,
                )
            } else {
                let state = circuit.executed_on(&initial)?;
                FlowObservables::from_field(&decode(&state, grid, field.stored_norm())?)
            }
        };
        let exact = observables_of(&exact_circuit)?;
        let truncated = observables_of(&trunc_circuit)?;

        write_field_csv(&out.join("ideal"), &time.label, &ideal)?;
        write_field_csv(&out.join("exact"), &time.label, &exact)?;
        write_field_csv(&out.join("truncated"), &time.label, &truncated)?;

        if config.dump_circuit {
            let dir = out.join("circuits");
            fs::create_dir_all(&dir)?;
            fs::write(dir.join(format!("exact_t{}.txt", time.label)), exact_circuit.to_text())?;
            fs::write(
                dir.join(format!("truncated_t{}.txt", time.label)),
                trunc_circuit.to_text(),
            )?;
        }

        metrics.time_points.push(TimePointMetrics {
            label: time.label.clone(),
            t,
            pearson_ideal_exact: correlate(&ideal, &exact),
            pearson_ideal_truncated: correlate(&ideal, &truncated),
            pearson_exact_truncated: correlate(&exact, &truncated),
            exact_stats: exact_circuit.stats(),
            truncated_stats: trunc_circuit.stats(),
            truncation_x: apply_truncation(
                &decompose_k_squared(grid.nx_qubits),
                t,
                &trunc_policy,
            )?,
            truncation_y: apply_truncation(
                &decompose_k_squared(grid.ny_qubits),
                t,
                &trunc_policy,
            )?,
            mass_ideal: total_mass(grid, &ideal.rho),
            mass_exact: total_mass(grid, &exact.rho),
            mass_truncated: total_mass(grid, &truncated.rho),
        });
    }

    write_json(&out.join("metrics.json"), &metrics)?;
    println!(
        "simulate: {} time points -> {}",
        config.times.len(),
        out.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct Fits {
    fit_range: (usize, usize),
    aqft_bound_vs_n: FitResult,
    momentum_bound_paper_vs_n_squared: FitResult,
    removed_gates_raw_vs_n_squared: FitResult,
    removed_gates_routed_vs_n_squared: FitResult,
}

fn compute_fits(curves: &TradeoffCurves) -> Option<Fits> {
    let points: Vec<_> = curves
        .points
        .iter()
        .filter(|p| (8..=64).contains(&p.n))
        .collect();
    let points = if points.len() >= 3 {
        points
    } else {
        curves.points.iter().collect()
    };
    if points.len() < 3 {
        return None;
    }
    let n: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
    let n2: Vec<f64> = n.iter().map(|x| x * x).collect();
    let lo = points.first().map(|p| p.n).unwrap_or(0);
    let hi = points.last().map(|p| p.n).unwrap_or(0);
    Some(Fits {
        fit_range: (lo, hi),
        aqft_bound_vs_n: linear_fit(
            &n,
            &points.iter().map(|p| p.aqft_error_bound).collect::<Vec<_>>(),
        ),
        momentum_bound_paper_vs_n_squared: linear_fit(
            &n2,
            &points.iter().map(|p| p.momentum_bound_paper).collect::<Vec<_>>(),
        ),
        removed_gates_raw_vs_n_squared: linear_fit(
            &n2,
            &points
                .iter()
                .map(|p| p.removed_gates_raw as f64)
                .collect::<Vec<_>>(),
        ),
        removed_gates_routed_vs_n_squared: linear_fit(
            &n2,
            &points
                .iter()
                .map(|p| p.removed_gates_routed as f64)
                .collect::<Vec<_>>(),
        ),
    })
}

fn build_curves(config: &RunConfig) -> Result<TradeoffCurves> {
    let params = config.scaling_params();
    let mut curves = scaling_curves(config.n_min..=config.n_max, &params)?;
    let cap = config.empirical_max_n.min(14);
    if cap >= config.n_min {
        fill_empirical(&mut curves, cap)?;
    }
    Ok(curves)
}

pub fn cmd_scaling(config: &RunConfig) -> Result<()> {
    config.validate()?;
    let out = &config.output_dir;
    fs::create_dir_all(out)?;
    let curves = build_curves(config)?;

    let mut file = fs::File::create(out.join("scaling.csv"))?;
    curves.write_csv(&mut file)?;
    if let Some(fits) = compute_fits(&curves) {
        write_json(&out.join("fits.json"), &fits)?;
    }
    println!(
        "scaling: n in [{}, {}] -> {}",
        config.n_min,
        config.n_max,
        out.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct CurveEndpoint {
    n: usize,
    algorithmic: f64,
    avoided: f64,
}

#[derive(Serialize)]
struct EquilibriumReport {
    normalization: String,
    scanned: (usize, usize),
    crossing: Option<f64>,
    first: CurveEndpoint,
    last: CurveEndpoint,
}

#[derive(Serialize)]
struct Pins {
    equilibrium_crossing: Option<f64>,
    empirical_error_n10: Option<f64>,
}

pub fn cmd_tradeoff(config: &RunConfig) -> Result<()> {
    config.validate()?;
    let out = &config.output_dir;
    fs::create_dir_all(out)?;
    let curves = build_curves(config)?;
    let normalization = config.normalization;

    let mut file = fs::File::create(out.join("tradeoff.csv"))?;
    writeln!(
        file,
        "n,removed_gates_raw,removed_gates_routed,avoided_error,aqft_bound,\
         momentum_bound_paper,momentum_bound_tight,empirical_error,algorithmic_norm"
    )?;
    for p in &curves.points {
        let empirical = p
            .empirical_error
            .map(|e| format!("{e:.11e}"))
            .unwrap_or_default();
        writeln!(
            file,
            "{},{},{},{:.11e},{:.11e},{:.11e},{:.11e},{},{:.11e}",
            p.n,
            p.removed_gates_raw,
            p.removed_gates_routed,
            p.avoided_hardware_error,
            p.aqft_error_bound,
            p.momentum_bound_paper,
            p.momentum_bound_tight,
            empirical,
            algorithmic_error(p, normalization),
        )?;
    }

    let crossing = equilibrium_point(&curves, normalization)?;
    let endpoint = |p: &qflow::noise::TradeoffPoint| CurveEndpoint {
        n: p.n,
        algorithmic: algorithmic_error(p, normalization),
        avoided: p.avoided_hardware_error,
    };
    let report = EquilibriumReport {
        normalization: normalization.label().into(),
        scanned: (config.n_min, config.n_max),
        crossing,
        first: endpoint(curves.points.first().expect("non-empty sweep")),
        last: endpoint(curves.points.last().expect("non-empty sweep")),
    };
    write_json(&out.join("equilibrium.json"), &report)?;

    let pins = Pins {
        equilibrium_crossing: crossing,
        empirical_error_n10: curves
            .points
            .iter()
            .find(|p| p.n == 10)
            .and_then(|p| p.empirical_error),
    };
    write_json(&out.join("pins.json"), &pins)?;

    match crossing {
        Some(n) => println!("tradeoff: equilibrium at n = {n:.2} -> {}", out.display()),
        None => println!("tradeoff: no crossing in range -> {}", out.display()),
    }
    Ok(())
}

pub fn cmd_validate() -> Result<bool> {
    let report = run_suite();
    print!("{}", report.render());
    Ok(report.all_passed())
}

pub fn usage_exit_code(error: &Error) -> u8 {
    match error {
        Error::InvalidConfig { .. } => 2,
        _ => 1,
    }
}
