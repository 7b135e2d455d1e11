//! Cross-module invariant suite behind `qflow validate`: every check runs
//! at n <= 10 qubits and reports pass/fail with a short detail string.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, GateOp};
use crate::fluid::{
    classical_evolve, decode, density, encode, initial_wavefunction, pearson_r, total_mass,
    GridSpec, InitialForm,
};
use crate::momentum::{
    build_full_step, build_momentum_circuit, decompose_k_squared, exact_momentum_phases,
    weight_model_retained_count, retention_window, wavenumber, PauliDecomposition,
    TruncationPolicy,
};
use crate::noise::{cumulative_hardware_error, noisy_execute, NoiseModel};
use crate::qft::{aqft_two_qubit_count, build_aqft, build_qft, AqftConfig};
use crate::state::Statevector;

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Fixed-width pass/fail table.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for check in &self.checks {
            let status = if check.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status}  {:<46} {:>6} ms  {}\n",
                check.name, check.millis, check.detail
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.checks.len(),
            failed
        ));
        out
    }
}

type Check = (&'static str, fn() -> Result<String, String>);

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> Statevector {
    let raw: Vec<Complex64> = (0..(1usize << n))
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    Statevector::from_amplitudes(&raw).expect("random state is non-degenerate").0
}

fn random_gate(rng: &mut ChaCha8Rng, n: usize) -> GateOp {
    let q0 = rng.gen_range(0..n);
    let mut q1 = rng.gen_range(0..n);
    while q1 == q0 {
        q1 = rng.gen_range(0..n);
    }
    let angle = rng.gen_range(-PI..PI);
    match rng.gen_range(0..5) {
        0 => GateOp::Hadamard { target: q0 },
        1 => GateOp::Rz { target: q0, angle },
        2 => GateOp::ControlledPhase { control: q0, target: q1, angle },
        3 => GateOp::ZzEntangler { a: q0, b: q1, angle },
        _ => GateOp::Swap { a: q0, b: q1 },
    }
}

fn norm_preservation() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let n = 10;
    let mut state = random_state(&mut rng, n);
    for _ in 0..10_000 {
        random_gate(&mut rng, n)
            .apply(&mut state)
            .map_err(|e| e.to_string())?;
    }
    let drift = (state.norm() - 1.0).abs();
    if drift < 1e-10 {
        Ok(format!("norm drift {drift:.2e} after 10^4 gates"))
    } else {
        Err(format!("norm drift {drift:.2e} exceeds 1e-10"))
    }
}

fn gate_inverse_round_trip() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let n = 6;
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let state = random_state(&mut rng, n);
        let gate = random_gate(&mut rng, n);
        let mut round = state.clone();
        gate.apply(&mut round).map_err(|e| e.to_string())?;
        gate.inverse().apply(&mut round).map_err(|e| e.to_string())?;
        for (a, b) in round.amplitudes().iter().zip(state.amplitudes()) {
            worst = worst.max((a - b).norm());
        }
    }
    if worst < 1e-12 {
        Ok(format!("max amplitude distance {worst:.2e}"))
    } else {
        Err(format!("max amplitude distance {worst:.2e} exceeds 1e-12"))
    }
}

fn diagonal_matches_gate_product() -> Result<String, String> {
    let n = 8;
    let t = PI / 2.0;
    let circuit =
        build_momentum_circuit(n, t, &TruncationPolicy::no_op()).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let state = random_state(&mut rng, n);
    let via_gates = circuit.executed_on(&state).map_err(|e| e.to_string())?;
    let mut via_diagonal = state;
    via_diagonal.apply_diagonal_phases(exact_momentum_phases(n, t));
    let deficit = 1.0 - via_gates.fidelity(&via_diagonal).map_err(|e| e.to_string())?;
    if deficit < 1e-10 {
        Ok(format!("fidelity deficit {deficit:.2e}"))
    } else {
        Err(format!("fidelity deficit {deficit:.2e} exceeds 1e-10"))
    }
}

/// Dense matrix oracle: multiplies the 2^n x 2^n unitary assembled gate by
/// gate against executing the circuit on basis states.
#[allow(clippy::needless_range_loop)]
fn executor_matches_dense_unitary() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let n = 5;
    let dim = 1usize << n;
    let mut circuit = Circuit::new(n, "random");
    for _ in 0..40 {
        circuit.push(random_gate(&mut rng, n)).map_err(|e| e.to_string())?;
    }

    // assemble the dense unitary column by column
    let mut dense = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        let state = Statevector::basis_state(n, col).map_err(|e| e.to_string())?;
        let out = circuit.executed_on(&state).map_err(|e| e.to_string())?;
        for row in 0..dim {
            dense[row][col] = out.amplitudes()[row];
        }
    }

    let state = random_state(&mut rng, n);
    let expected = circuit.executed_on(&state).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for row in 0..dim {
        let mut acc = Complex64::new(0.0, 0.0);
        for col in 0..dim {
            acc += dense[row][col] * state.amplitudes()[col];
        }
        worst = worst.max((acc - expected.amplitudes()[row]).norm());
    }
    if worst < 1e-10 {
        Ok(format!("max deviation {worst:.2e}"))
    } else {
        Err(format!("max deviation {worst:.2e} exceeds 1e-10"))
    }
}

fn layering_is_valid() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let n = 8;
    let mut circuit = Circuit::new(n, "layered");
    for _ in 0..200 {
        circuit.push(random_gate(&mut rng, n)).map_err(|e| e.to_string())?;
    }
    // replay the greedy layering and confirm disjointness per layer
    let mut layer_of_gate = Vec::new();
    let mut free = vec![0usize; n];
    for op in circuit.ops() {
        let (q0, q1) = op.qubits();
        let mut layer = free[q0];
        if let Some(q1) = q1 {
            layer = layer.max(free[q1]);
        }
        layer_of_gate.push(layer);
        free[q0] = layer + 1;
        if let Some(q1) = q1 {
            free[q1] = layer + 1;
        }
    }
    let depth = *free.iter().max().unwrap();
    for layer in 0..depth {
        let mut used = vec![false; n];
        for (op, l) in circuit.ops().iter().zip(&layer_of_gate) {
            if *l != layer {
                continue;
            }
            let (q0, q1) = op.qubits();
            for q in [Some(q0), q1].into_iter().flatten() {
                if used[q] {
                    return Err(format!("layer {layer} reuses qubit {q}"));
                }
                used[q] = true;
            }
        }
    }
    if circuit.stats().logical_depth != depth {
        return Err("stats depth disagrees with replay".into());
    }
    Ok(format!("depth {depth} over {} gates", circuit.ops().len()))
}

fn qft_matches_dft_oracle() -> Result<String, String> {
    use std::f64::consts::TAU;
    let mut worst = 0.0f64;
    for n in 1..=6 {
        let circuit = build_qft(n, false);
        let dim = 1usize << n;
        for m in 0..dim {
            let input = Statevector::basis_state(n, m).map_err(|e| e.to_string())?;
            let raw = circuit.executed_on(&input).map_err(|e| e.to_string())?;
            let relabeled = raw.bit_reversed();
            for mp in 0..dim {
                let expected = Complex64::from_polar(
                    1.0 / (dim as f64).sqrt(),
                    TAU * (m * mp % dim) as f64 / dim as f64,
                );
                worst = worst.max((relabeled.amplitudes()[mp] - expected).norm());
            }
        }
    }
    if worst < 1e-11 {
        Ok(format!("max deviation {worst:.2e} for n <= 6"))
    } else {
        Err(format!("max deviation {worst:.2e} exceeds 1e-11"))
    }
}

fn aqft_exact_at_full_threshold() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for n in 2..=8 {
        let qft = build_qft(n, false);
        let aqft = build_aqft(n, false, AqftConfig::new(n - 1, false));
        for _ in 0..20 {
            let state = random_state(&mut rng, n);
            let a = qft.executed_on(&state).map_err(|e| e.to_string())?;
            let b = aqft.executed_on(&state).map_err(|e| e.to_string())?;
            let deficit = 1.0 - a.fidelity(&b).map_err(|e| e.to_string())?;
            if deficit > 1e-12 {
                return Err(format!("n={n}: fidelity deficit {deficit:.2e}"));
            }
        }
        for b in 0..=8usize {
            let circuit = build_aqft(n, false, AqftConfig::new(b, false));
            if circuit.stats().two_qubit_count != aqft_two_qubit_count(n, b) {
                return Err(format!("n={n} b={b}: gate-count formula mismatch"));
            }
        }
    }
    Ok("identical action and exact gate counts".into())
}

fn aqft_monotone_and_compensation() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    // monotone average accuracy in b
    for n in 4..=8 {
        let qft = build_qft(n, false);
        let states: Vec<Statevector> = (0..20).map(|_| random_state(&mut rng, n)).collect();
        let exact: Vec<Statevector> = states
            .iter()
            .map(|s| qft.executed_on(s).unwrap())
            .collect();
        let mut last_avg = f64::INFINITY;
        for b in 1..n {
            let aqft = build_aqft(n, false, AqftConfig::new(b, false));
            let mut avg = 0.0;
            for (state, reference) in states.iter().zip(&exact) {
                let out = aqft.executed_on(state).map_err(|e| e.to_string())?;
                avg += 1.0 - out.fidelity(reference).map_err(|e| e.to_string())?;
            }
            avg /= states.len() as f64;
            if avg > last_avg + 1e-12 {
                return Err(format!("n={n} b={b}: deficit rose {last_avg:.3e} -> {avg:.3e}"));
            }
            last_avg = avg;
        }
    }

    // compensation helps on the uniform superposition
    for n in 4..=8 {
        let qft = build_qft(n, false);
        let mut uniform = Statevector::zero(n).map_err(|e| e.to_string())?;
        for q in 0..n {
            uniform.apply_hadamard(q).map_err(|e| e.to_string())?;
        }
        let reference = qft.executed_on(&uniform).map_err(|e| e.to_string())?;
        for b in 1..=3usize {
            let plain = build_aqft(n, false, AqftConfig::new(b, false))
                .executed_on(&uniform)
                .map_err(|e| e.to_string())?;
            let compensated = build_aqft(n, false, AqftConfig::new(b, true))
                .executed_on(&uniform)
                .map_err(|e| e.to_string())?;
            let f_plain = plain.fidelity(&reference).map_err(|e| e.to_string())?;
            let f_comp = compensated.fidelity(&reference).map_err(|e| e.to_string())?;
            if f_comp + 1e-12 < f_plain {
                return Err(format!(
                    "n={n} b={b}: compensated {f_comp:.6} < plain {f_plain:.6}"
                ));
            }
        }
    }
    Ok("average deficit monotone in b; compensation never hurts uniform input".into())
}

/// Walsh-style projection oracle for the decomposition coefficients.
pub fn projection_oracle(n_axis: usize) -> PauliDecomposition {
    let size = 1usize << n_axis;
    let f: Vec<f64> = (0..size)
        .map(|m| {
            let k = wavenumber(m, n_axis).unwrap() as f64;
            k * k / 2.0
        })
        .collect();
    let z = |m: usize, bit: usize| if (m >> bit) & 1 == 0 { 1.0 } else { -1.0 };
    let c0 = f.iter().sum::<f64>() / size as f64;
    let c_single = (0..n_axis)
        .map(|i| {
            (0..size).map(|m| f[m] * z(m, i)).sum::<f64>() / size as f64
        })
        .collect();
    let mut c_pair = Vec::new();
    for i in 0..n_axis {
        for j in (i + 1)..n_axis {
            let c = (0..size).map(|m| f[m] * z(m, i) * z(m, j)).sum::<f64>() / size as f64;
            c_pair.push(crate::momentum::PairTerm { i, j, coefficient: c });
        }
    }
    PauliDecomposition { c0, c_single, c_pair }
}

/// Reconstruction residual of a decomposition against `k^2/2`; exposed so
/// fault-injection tests can corrupt a coefficient and watch this fail.
pub fn reconstruction_residual(decomp: &PauliDecomposition, n_axis: usize) -> f64 {
    let mut worst = 0.0f64;
    for m in 0..(1usize << n_axis) {
        let k = wavenumber(m, n_axis).unwrap() as f64;
        worst = worst.max((decomp.reconstruct(m) - k * k / 2.0).abs());
    }
    worst
}

fn decomposition_reconstructs() -> Result<String, String> {
    let mut worst = 0.0f64;
    for n in 1..=10 {
        let direct = decompose_k_squared(n);
        worst = worst.max(reconstruction_residual(&direct, n));
        let oracle = projection_oracle(n.min(8));
        if n <= 8 {
            if (direct.c0 - oracle.c0).abs() > 1e-9 {
                return Err(format!("n={n}: c0 disagrees with projection oracle"));
            }
            for (a, b) in direct.c_single.iter().zip(&oracle.c_single) {
                if (a - b).abs() > 1e-9 {
                    return Err(format!("n={n}: single-Z coefficient mismatch"));
                }
            }
            for (a, b) in direct.c_pair.iter().zip(&oracle.c_pair) {
                if (a.coefficient - b.coefficient).abs() > 1e-9 {
                    return Err(format!("n={n}: pair coefficient mismatch"));
                }
            }
        }
    }
    if worst < 1e-12 {
        Ok(format!("max residual {worst:.2e} for n <= 10"))
    } else {
        Err(format!("max residual {worst:.2e} exceeds 1e-12"))
    }
}

fn periodic_removal_costs_nothing() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for n in 2..=10 {
        for p in 1..=3 {
            let t = PI * 2f64.powi(-p);
            let full =
                build_momentum_circuit(n, t, &TruncationPolicy::no_op()).map_err(|e| e.to_string())?;
            let pruned = build_momentum_circuit(n, t, &TruncationPolicy::new(0.0, true))
                .map_err(|e| e.to_string())?;
            let state = random_state(&mut rng, n);
            let a = full.executed_on(&state).map_err(|e| e.to_string())?;
            let b = pruned.executed_on(&state).map_err(|e| e.to_string())?;
            let deficit = 1.0 - a.fidelity(&b).map_err(|e| e.to_string())?;
            if deficit > 1e-10 {
                return Err(format!("n={n} p={p}: deficit {deficit:.2e}"));
            }
        }
    }
    Ok("fidelity deficit < 1e-10 for n <= 10, p in 1..=3".into())
}

fn truncation_monotone_in_epsilon() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    for n in [6usize, 8, 10] {
        let p = 1;
        let t = PI * 2f64.powi(-p);
        let state = random_state(&mut rng, n);
        let exact =
            build_momentum_circuit(n, t, &TruncationPolicy::no_op()).map_err(|e| e.to_string())?;
        let reference = exact.executed_on(&state).map_err(|e| e.to_string())?;
        let mut last = -1.0;
        for i in 0..=32 {
            let eps = PI / 2.0 * i as f64 / 32.0;
            let circuit = build_momentum_circuit(n, t, &TruncationPolicy::new(eps, true))
                .map_err(|e| e.to_string())?;
            let out = circuit.executed_on(&state).map_err(|e| e.to_string())?;
            let deficit = 1.0 - out.fidelity(&reference).map_err(|e| e.to_string())?;
            if deficit + 1e-12 < last {
                return Err(format!("n={n} eps={eps:.3}: deficit decreased"));
            }
            last = deficit;
        }
    }
    Ok("fidelity deficit non-decreasing over the epsilon grid".into())
}

fn retained_count_within_bound() -> Result<String, String> {
    for n in 2..=20 {
        for p in 1..=3 {
            for eps in [PI / 16.0, PI / 8.0, PI / 4.0] {
                let count = weight_model_retained_count(n, p, eps);
                let bound = retention_window(p, eps).delta / 2.0 * n as f64;
                if count as f64 > bound {
                    return Err(format!("n={n} p={p} eps={eps:.3}: {count} > {bound:.1}"));
                }
            }
        }
    }
    Ok("retained pairs <= (delta/2) n for all n <= 20".into())
}

fn pipeline_matches_classical_oracle() -> Result<String, String> {
    let grid = GridSpec::new(5, 5);
    let field = initial_wavefunction(grid, InitialForm::GaussianAmplitude);
    let initial = encode(&field);
    let mut worst = 0.0f64;
    for t in [PI / 4.0, PI / 2.0] {
        let circuit = build_full_step(5, 5, t, &AqftConfig::exact(), &TruncationPolicy::no_op())
            .map_err(|e| e.to_string())?;
        let quantum = circuit.executed_on(&initial).map_err(|e| e.to_string())?;
        let classical = classical_evolve(&field, t);
        for (a, b) in quantum.amplitudes().iter().zip(classical.values()) {
            worst = worst.max((a - b).norm());
        }
    }
    if worst < 1e-8 {
        Ok(format!("max pointwise amplitude error {worst:.2e}"))
    } else {
        Err(format!("max pointwise amplitude error {worst:.2e} exceeds 1e-8"))
    }
}

fn mass_conserved_and_translation_symmetric() -> Result<String, String> {
    let grid = GridSpec::new(5, 5);
    let field = initial_wavefunction(grid, InitialForm::GaussianAmplitude);
    let initial = encode(&field);
    let m0 = total_mass(grid, &density(&field));
    let mut worst_mass = 0.0f64;
    let mut worst_sym = 0.0f64;
    for t in [0.0, PI / 4.0, PI / 2.0] {
        for policy in [
            TruncationPolicy::no_op(),
            TruncationPolicy::new(PI / 8.0, true),
        ] {
            let cfg = if policy.periodic_removal {
                AqftConfig::new(2, true)
            } else {
                AqftConfig::exact()
            };
            let circuit =
                build_full_step(5, 5, t, &cfg, &policy).map_err(|e| e.to_string())?;
            let state = circuit.executed_on(&initial).map_err(|e| e.to_string())?;
            let evolved = decode(&state, grid, field.stored_norm()).map_err(|e| e.to_string())?;
            let rho = density(&evolved);
            worst_mass = worst_mass.max((total_mass(grid, &rho) - m0).abs());
            if !policy.periodic_removal && t > 0.0 {
                // exact evolution keeps rho independent of x
                for l in 0..grid.ny_points() {
                    let first = rho[grid.index(0, l)];
                    for k in 1..grid.nx_points() {
                        worst_sym = worst_sym.max((rho[grid.index(k, l)] - first).abs());
                    }
                }
            }
        }
    }
    if worst_mass < 1e-10 && worst_sym < 1e-10 {
        Ok(format!(
            "mass drift {worst_mass:.2e}, x-asymmetry {worst_sym:.2e}"
        ))
    } else {
        Err(format!(
            "mass drift {worst_mass:.2e} or x-asymmetry {worst_sym:.2e} exceeds 1e-10"
        ))
    }
}

fn pearson_oracle_agreement() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let a: Vec<f64> = (0..500).map(|_| rng.gen::<f64>()).collect();
    let b: Vec<f64> = a.iter().map(|x| x + 0.05 * rng.gen::<f64>()).collect();
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let cov: f64 = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma) * (x - ma)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb) * (y - mb)).sum();
    let oracle = cov / (va.sqrt() * vb.sqrt());
    let r = pearson_r(&a, &b).map_err(|e| e.to_string())?;
    if (r - oracle).abs() < 1e-12 {
        Ok(format!("r = {r:.6} matches direct formula"))
    } else {
        Err(format!("r = {r} vs oracle {oracle}"))
    }
}

fn noiseless_limit_and_monotone_hardware_error() -> Result<String, String> {
    let mut circuit = Circuit::new(4, "probe");
    let mut rng = ChaCha8Rng::seed_from_u64(1212);
    for _ in 0..60 {
        circuit.push(random_gate(&mut rng, 4)).map_err(|e| e.to_string())?;
    }
    let initial = random_state(&mut rng, 4);
    let reference = circuit.executed_on(&initial).map_err(|e| e.to_string())?;
    let model = NoiseModel {
        fidelity_1q: 1.0,
        fidelity_2q: 1.0,
        rng_seed: 5,
    };
    for run in noisy_execute(&circuit, &initial, &model, 3).map_err(|e| e.to_string())? {
        if run.state.amplitudes() != reference.amplitudes() {
            return Err("unit-fidelity trajectory differs from noiseless execution".into());
        }
    }
    let mut last = -1.0;
    for n in [0usize, 1, 10, 100, 1000] {
        let e = cumulative_hardware_error(n, 0.9967);
        if e <= last {
            return Err("hardware error not strictly increasing".into());
        }
        last = e;
    }
    Ok("bit-identical noiseless limit; 1 - f^N strictly increasing".into())
}

const CHECKS: &[Check] = &[
    ("statevector norm preservation", norm_preservation),
    ("gate inverse round trip", gate_inverse_round_trip),
    ("momentum diagonal vs gate product", diagonal_matches_gate_product),
    ("executor vs dense unitary oracle", executor_matches_dense_unitary),
    ("depth layering validity", layering_is_valid),
    ("qft vs dft matrix oracle", qft_matches_dft_oracle),
    ("aqft exactness and gate counts", aqft_exact_at_full_threshold),
    ("aqft monotone accuracy and compensation", aqft_monotone_and_compensation),
    ("k^2 decomposition reconstruction", decomposition_reconstructs),
    ("periodic removal zero cost", periodic_removal_costs_nothing),
    ("truncation error monotone in epsilon", truncation_monotone_in_epsilon),
    ("retained-pair bound", retained_count_within_bound),
    ("pipeline vs classical spectral oracle", pipeline_matches_classical_oracle),
    ("mass conservation and x-symmetry", mass_conserved_and_translation_symmetric),
    ("pearson vs direct formula", pearson_oracle_agreement),
    ("noiseless limit and error monotonicity", noiseless_limit_and_monotone_hardware_error),
];

/// Runs the whole suite.
pub fn run_suite() -> ValidationReport {
    let mut report = ValidationReport::default();
    for (name, check) in CHECKS {
        let start = Instant::now();
        let outcome = check();
        let millis = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => report.checks.push(CheckResult {
                name,
                passed: true,
                detail,
                millis,
            }),
            Err(detail) => report.checks.push(CheckResult {
                name,
                passed: false,
                detail,
                millis,
            }),
        }
    }
    report
}
