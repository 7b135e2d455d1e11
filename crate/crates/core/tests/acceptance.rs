//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `--nocapture`, and in the failure report otherwise).
//! Criterion 6 is implemented exactly as stated; see the pinned regression
//! values in `tests/data/pins.json` for what the routed-count model
//! actually produces.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qflow::circuit::{Circuit, GateOp};
use qflow::fluid::{
    classical_evolve, decode, density, encode, initial_wavefunction, pearson_r, total_mass,
    FlowObservables, GridSpec, InitialForm,
};
use qflow::momentum::{
    build_full_step, build_momentum_circuit, decompose_k_squared, weight_model_retained_count,
    retention_window, wavenumber, TruncationPolicy,
};
use qflow::noise::{
    averaged_observables, cumulative_hardware_error, empirical_algorithmic_error,
    equilibrium_point, linear_fit, scaling_curves, NoiseModel, Normalization, ScalingParams,
};
use qflow::qft::{build_aqft, build_qft, AqftConfig};
use qflow::state::Statevector;
use qflow::validate::run_suite;

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> Statevector {
    let raw: Vec<Complex64> = (0..(1usize << n))
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    Statevector::from_amplitudes(&raw).unwrap().0
}

fn report(criterion: &str, passed: bool, detail: &str) {
    let status = if passed { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {criterion}: {status} - {detail}");
}

#[test]
fn criterion_01_pipeline_exactness() {
    let start = Instant::now();
    let grid = GridSpec::new(5, 5);
    let field = initial_wavefunction(grid, InitialForm::GaussianAmplitude);
    let initial = encode(&field);
    let mut worst = 0.0f64;
    for t in [PI / 4.0, PI / 2.0] {
        let circuit =
            build_full_step(5, 5, t, &AqftConfig::exact(), &TruncationPolicy::no_op()).unwrap();
        let quantum = circuit.executed_on(&initial).unwrap();
        let classical = classical_evolve(&field, t);
        for (a, b) in quantum.amplitudes().iter().zip(classical.values()) {
            worst = worst.max((a - b).norm());
        }
    }
    let elapsed = start.elapsed();
    let ok = worst < 1e-8 && elapsed.as_secs() < 60;
    report(
        "1 pipeline-exactness",
        ok,
        &format!("max amplitude error {worst:.2e}, {} ms", elapsed.as_millis()),
    );
    assert!(ok, "max error {worst:.2e}, elapsed {elapsed:?}");
}

#[test]
fn criterion_02_aqft_equivalence_at_full_threshold() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for n in 2..=8 {
        let qft = build_qft(n, false);
        let aqft = build_aqft(n, false, AqftConfig::new(n - 1, false));
        for _ in 0..100 {
            let state = random_state(&mut rng, n);
            let a = qft.executed_on(&state).unwrap();
            let b = aqft.executed_on(&state).unwrap();
            worst = worst.max(1.0 - a.fidelity(&b).unwrap());
        }
    }
    let ok = worst < 1e-12;
    report(
        "2 aqft-equivalence",
        ok,
        &format!("max fidelity deficit {worst:.2e} over 100 states per n <= 8"),
    );
    assert!(ok, "max deficit {worst:.2e}");
}

#[test]
fn criterion_03_periodic_removal_zero_cost() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for n in 2..=10 {
        for p in 1..=3 {
            let t = PI * 2f64.powi(-p);
            let full = build_momentum_circuit(n, t, &TruncationPolicy::no_op()).unwrap();
            let pruned =
                build_momentum_circuit(n, t, &TruncationPolicy::new(0.0, true)).unwrap();
            let state = random_state(&mut rng, n);
            let a = full.executed_on(&state).unwrap();
            let b = pruned.executed_on(&state).unwrap();
            worst = worst.max(1.0 - a.fidelity(&b).unwrap());
        }
    }
    let ok = worst < 1e-10;
    report(
        "3 periodic-removal-zero-cost",
        ok,
        &format!("max fidelity deficit {worst:.2e} for n <= 10, p in 1..=3"),
    );
    assert!(ok, "max deficit {worst:.2e}");
}

#[test]
fn criterion_04_retained_gate_bound() {
    let start = Instant::now();
    let mut worst_excess = f64::NEG_INFINITY;
    for n in 2..=20 {
        for p in 1..=3 {
            for eps in [PI / 16.0, PI / 8.0, PI / 4.0] {
                let count = weight_model_retained_count(n, p, eps) as f64;
                let bound = retention_window(p, eps).delta / 2.0 * n as f64;
                worst_excess = worst_excess.max(count - bound);
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = worst_excess <= 0.0 && elapsed.as_secs() < 1;
    report(
        "4 retained-gate-bound",
        ok,
        &format!("worst count-minus-bound {worst_excess:.2}, {} us", elapsed.as_micros()),
    );
    assert!(ok, "excess {worst_excess}, elapsed {elapsed:?}");
}

#[test]
fn criterion_05_scaling_orders() {
    let curves = scaling_curves(8..=64, &ScalingParams::default()).unwrap();
    let n: Vec<f64> = curves.points.iter().map(|p| p.n as f64).collect();
    let n2: Vec<f64> = n.iter().map(|x| x * x).collect();
    let aqft: Vec<f64> = curves.points.iter().map(|p| p.aqft_error_bound).collect();
    let mom: Vec<f64> = curves.points.iter().map(|p| p.momentum_bound_paper).collect();
    let removed: Vec<f64> = curves
        .points
        .iter()
        .map(|p| p.removed_gates_raw as f64)
        .collect();

    let r2_aqft = linear_fit(&n, &aqft).r_squared;
    let r2_mom = linear_fit(&n2, &mom).r_squared;
    let r2_removed = linear_fit(&n2, &removed).r_squared;
    let ok = r2_aqft >= 0.98 && r2_mom >= 0.98 && r2_removed >= 0.98;
    report(
        "5 scaling-orders",
        ok,
        &format!("R2: aqft-linear {r2_aqft:.5}, momentum-quadratic {r2_mom:.5}, removed-quadratic {r2_removed:.5}"),
    );
    assert!(ok, "R2 {r2_aqft} {r2_mom} {r2_removed}");
}

#[test]
fn criterion_06_hardware_error_crossing() {
    // As stated: with f = 0.9967 and LNN-routed standard-circuit two-qubit
    // counts, 1 - f^N crosses 0.99 at some n in [20, 30]; raw counts are
    // also reported. The routed metric is pinned by its own examples
    // (distance-4 gate = 1 + 18), and under it the crossing lands well
    // before 20, so this criterion records the discrepancy rather than
    // hiding it.
    let params = ScalingParams::default();
    let curves = scaling_curves(4..=64, &params).unwrap();
    let crossing = |counts: &dyn Fn(&qflow::noise::TradeoffPoint) -> usize| {
        curves
            .points
            .iter()
            .find(|p| cumulative_hardware_error(counts(p), 0.9967) >= 0.99)
            .map(|p| p.n)
    };
    let routed = crossing(&|p| p.standard_routed);
    let raw = crossing(&|p| p.standard_raw);
    let ok = matches!(routed, Some(n) if (20..=30).contains(&n));
    report(
        "6 hardware-error-crossing",
        ok,
        &format!("routed crossing at n = {routed:?}, raw at n = {raw:?}, required 20..=30 for routed"),
    );
    assert!(
        ok,
        "routed standard-count crossing at n = {routed:?} (raw at {raw:?}) is outside 20..=30; \
         the routing surcharge 6(d-1) pinned by the gate-stats contract places the crossing at \
         n = 15"
    );
}

#[test]
fn criterion_07_noisy_correlation_grid() {
    let start = Instant::now();
    let grid = GridSpec::new(5, 5);
    let field = initial_wavefunction(grid, InitialForm::GaussianAmplitude);
    let initial = encode(&field);
    let t = PI / 2.0;
    let ideal = FlowObservables::from_field(&classical_evolve(&field, t)).unwrap();
    let model = NoiseModel {
        fidelity_1q: 0.9997,
        fidelity_2q: 0.9967,
        rng_seed: 20260811,
    };

    // (b, eps, r_rho, r_jx, r_jy) per grid configuration
    let mut results = Vec::new();
    for b in [2usize, 3] {
        for eps in [PI / 16.0, PI / 8.0] {
            let circuit = build_full_step(
                5,
                5,
                t,
                &AqftConfig::new(b, true),
                &TruncationPolicy::new(eps, true),
            )
            .unwrap();
            let obs =
                averaged_observables(&circuit, &initial, grid, field.stored_norm(), &model, 200)
                    .unwrap();
            results.push((
                b,
                eps,
                pearson_r(&obs.rho, &ideal.rho).unwrap(),
                pearson_r(&obs.jx, &ideal.jx).unwrap(),
                pearson_r(&obs.jy, &ideal.jy).unwrap(),
            ));
        }
    }
    let elapsed = start.elapsed();
    let min_r = |r: &(usize, f64, f64, f64, f64)| r.2.min(r.3).min(r.4);
    let best = results
        .iter()
        .max_by(|a, b| min_r(a).partial_cmp(&min_r(b)).unwrap())
        .unwrap();
    let ok = min_r(best) >= 0.90 && elapsed.as_secs() < 1800;
    report(
        "7 noisy-correlation",
        ok,
        &format!(
            "best config b={} eps={:.4}: r_rho={:.4} r_jx={:.4} r_jy={:.4} (200 trajectories, {} s)",
            best.0,
            best.1,
            best.2,
            best.3,
            best.4,
            elapsed.as_secs()
        ),
    );
    assert!(ok, "no grid configuration reached r >= 0.90 on all observables");
}

#[test]
fn criterion_08_mass_conservation() {
    let grid = GridSpec::new(5, 5);
    let field = initial_wavefunction(grid, InitialForm::GaussianAmplitude);
    let initial = encode(&field);
    let m0 = total_mass(grid, &density(&field));
    let mut worst = 0.0f64;
    for (cfg, policy) in [
        (AqftConfig::exact(), TruncationPolicy::no_op()),
        (AqftConfig::new(2, true), TruncationPolicy::new(PI / 8.0, true)),
    ] {
        for t in [0.0, PI / 4.0, PI / 2.0] {
            let circuit = build_full_step(5, 5, t, &cfg, &policy).unwrap();
            let state = circuit.executed_on(&initial).unwrap();
            let evolved = decode(&state, grid, field.stored_norm()).unwrap();
            worst = worst.max((total_mass(grid, &density(&evolved)) - m0).abs());
        }
    }
    let ok = worst < 1e-10;
    report(
        "8 mass-conservation",
        ok,
        &format!("max |mass - mass0| = {worst:.2e} across exact and truncated runs"),
    );
    assert!(ok, "mass drift {worst:.2e}");
}

#[test]
#[allow(clippy::needless_range_loop)]
fn criterion_09_brute_force_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for n in 2..=6 {
        let dim = 1usize << n;
        let mut circuit = Circuit::new(n, "random");
        for _ in 0..30 {
            let q0 = rng.gen_range(0..n);
            let mut q1 = rng.gen_range(0..n);
            while q1 == q0 {
                q1 = rng.gen_range(0..n);
            }
            let angle = rng.gen_range(-PI..PI);
            let op = match rng.gen_range(0..5) {
                0 => GateOp::Hadamard { target: q0 },
                1 => GateOp::Rz { target: q0, angle },
                2 => GateOp::ControlledPhase { control: q0, target: q1, angle },
                3 => GateOp::ZzEntangler { a: q0, b: q1, angle },
                _ => GateOp::Swap { a: q0, b: q1 },
            };
            circuit.push(op).unwrap();
        }
        // dense unitary, column by column
        let mut dense = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for col in 0..dim {
            let out = circuit
                .executed_on(&Statevector::basis_state(n, col).unwrap())
                .unwrap();
            for row in 0..dim {
                dense[row][col] = out.amplitudes()[row];
            }
        }
        let state = random_state(&mut rng, n);
        let expected = circuit.executed_on(&state).unwrap();
        for row in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for col in 0..dim {
                acc += dense[row][col] * state.amplitudes()[col];
            }
            worst = worst.max((acc - expected.amplitudes()[row]).norm());
        }
    }

    // exact reconstruction of k^2/2 for n <= 10
    let mut worst_residual = 0.0f64;
    for n in 1..=10 {
        let decomp = decompose_k_squared(n);
        for m in 0..(1usize << n) {
            let k = wavenumber(m, n).unwrap() as f64;
            worst_residual = worst_residual.max((decomp.reconstruct(m) - k * k / 2.0).abs());
        }
    }
    let ok = worst < 1e-10 && worst_residual == 0.0;
    report(
        "9 brute-force-equivalence",
        ok,
        &format!("executor deviation {worst:.2e}; reconstruction residual {worst_residual:.2e}"),
    );
    assert!(ok, "deviation {worst:.2e}, residual {worst_residual:.2e}");
}

#[test]
fn criterion_10_validation_suite() {
    let start = Instant::now();
    let suite = run_suite();
    let elapsed = start.elapsed();
    let ok = suite.all_passed() && elapsed.as_secs() < 300;
    report(
        "10 validation-suite",
        ok,
        &format!(
            "{} checks in {} ms",
            suite.checks.len(),
            elapsed.as_millis()
        ),
    );
    assert!(ok, "\n{}", suite.render());
}

#[test]
fn regression_pins_hold() {
    let pins: serde_json::Value =
        serde_json::from_str(include_str!("data/pins.json")).expect("valid pins file");

    let params_p1 = ScalingParams {
        threshold_b: 2,
        time_exponent_p: 1,
        epsilon_th: PI / 8.0,
        compensate: true,
        periodic_removal: true,
        fidelity_2q: 0.9967,
    };
    let e1 = empirical_algorithmic_error(10, &params_p1).unwrap();
    let pin1 = pins["empirical_error_n10_b2_eps_pi8_p1"].as_f64().unwrap();
    assert!(
        (e1 - pin1).abs() < 1e-9,
        "empirical error at p=1 drifted: {e1:.12e} vs pin {pin1:.12e}"
    );

    let params_p3 = ScalingParams {
        time_exponent_p: 3,
        ..params_p1
    };
    let e3 = empirical_algorithmic_error(10, &params_p3).unwrap();
    let pin3 = pins["empirical_error_n10_b2_eps_pi8_p3"].as_f64().unwrap();
    assert!(
        (e3 - pin3).abs() < 1e-9,
        "empirical error at p=3 drifted: {e3:.12e} vs pin {pin3:.12e}"
    );

    let curves = scaling_curves(4..=64, &ScalingParams::default()).unwrap();
    let crossing = equilibrium_point(&curves, Normalization::Bounded).unwrap();
    assert!(
        pins["equilibrium_default_bounded_crossing"].is_null() == crossing.is_none(),
        "equilibrium crossing drifted: {crossing:?}"
    );

    let routed_crossing = curves
        .points
        .iter()
        .find(|p| cumulative_hardware_error(p.standard_routed, 0.9967) >= 0.99)
        .map(|p| p.n as u64);
    assert_eq!(
        routed_crossing,
        pins["hardware_error_crossing_routed_standard_n"].as_u64(),
        "routed hardware-error crossing drifted"
    );
    let raw_crossing = curves
        .points
        .iter()
        .find(|p| cumulative_hardware_error(p.standard_raw, 0.9967) >= 0.99)
        .map(|p| p.n as u64);
    assert_eq!(
        raw_crossing,
        pins["hardware_error_crossing_raw_standard_n"].as_u64(),
        "raw hardware-error crossing drifted"
    );

    report("pins regression-pins", true, "all pinned values reproduced");
}
