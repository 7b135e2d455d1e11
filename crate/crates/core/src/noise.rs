//! Stochastic gate-noise execution, the analytic hardware-error
//! accumulation model, truncation-error scaling curves, and the
//! equilibrium-point analysis between algorithmic and avoided hardware
//! error.
//!
//! The noise channel is a stochastic-Pauli surrogate: after every gate,
//! with probability `1 - fidelity` for the gate's arity, one uniformly
//! chosen involved qubit receives a uniformly chosen non-identity Pauli.
//! Trajectories use per-index ChaCha streams derived from `(rng_seed,
//! trajectory index)` and are averaged in index order, so results do not
//! depend on scheduling.
//!
//! Hardware error accumulates as `1 - f^N` over two-qubit gate counts, the
//! simplest compounding-fidelity model.

use std::f64::consts::PI;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::fluid::{decode, encode, initial_wavefunction, FlowObservables, GridSpec, InitialForm};
use crate::momentum::{
    apply_truncation, build_full_step, decompose_k_squared, TruncationPolicy,
};
use crate::qft::{aqft_error_bound, AqftConfig};
use crate::state::Statevector;

#[derive(Clone, Copy, Debug)]
pub struct NoiseModel {
    pub fidelity_1q: f64,
    pub fidelity_2q: f64,
    pub rng_seed: u64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            fidelity_1q: 0.9997,
            fidelity_2q: 0.9967,
            rng_seed: 0,
        }
    }
}

/// One noisy trajectory: the final state and how many Pauli insertions
/// happened along the way.
#[derive(Clone, Debug)]
pub struct NoisyRun {
    pub state: Statevector,
    pub pauli_events: usize,
}

/// Runs one trajectory with the deterministic sub-stream for its index.
pub fn noisy_trajectory(
    circuit: &Circuit,
    initial: &Statevector,
    model: &NoiseModel,
    trajectory_index: u64,
) -> Result<NoisyRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(model.rng_seed);
    rng.set_stream(trajectory_index.wrapping_add(1));
    let mut state = initial.clone();
    let mut events = 0;
    for op in circuit.ops() {
        op.apply(&mut state)?;
        let (q0, q1) = op.qubits();
        let fidelity = if q1.is_some() {
            model.fidelity_2q
        } else {
            model.fidelity_1q
        };
        if fidelity < 1.0 && rng.gen::<f64>() < 1.0 - fidelity {
            let victim = match q1 {
                Some(q1) if rng.gen_range(0..2) == 1 => q1,
                _ => q0,
            };
            match rng.gen_range(0..3) {
                0 => state.apply_pauli_x(victim)?,
                1 => state.apply_pauli_y(victim)?,
                _ => state.apply_pauli_z(victim)?,
            }
            events += 1;
        }
    }
    state.apply_global_phase(circuit.global_phase());
    Ok(NoisyRun { state, pauli_events: events })
}

/// The trajectory ensemble, in index order.
pub fn noisy_execute(
    circuit: &Circuit,
    initial: &Statevector,
    model: &NoiseModel,
    trajectories: usize,
) -> Result<Vec<NoisyRun>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..trajectories as u64)
            .into_par_iter()
            .map(|idx| noisy_trajectory(circuit, initial, model, idx))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..trajectories as u64)
            .map(|idx| noisy_trajectory(circuit, initial, model, idx))
            .collect()
    }
}

/// Trajectory-averaged observables: rho, jx, jy averaged pointwise over
/// the ensemble, in trajectory order.
pub fn averaged_observables(
    circuit: &Circuit,
    initial: &Statevector,
    grid: GridSpec,
    stored_norm: f64,
    model: &NoiseModel,
    trajectories: usize,
) -> Result<FlowObservables> {
    let runs = noisy_execute(circuit, initial, model, trajectories)?;
    let mut rho = vec![0.0; grid.num_points()];
    let mut jx = vec![0.0; grid.num_points()];
    let mut jy = vec![0.0; grid.num_points()];
    for run in &runs {
        let field = decode(&run.state, grid, stored_norm)?;
        let obs = FlowObservables::from_field(&field)?;
        for i in 0..grid.num_points() {
            rho[i] += obs.rho[i];
            jx[i] += obs.jx[i];
            jy[i] += obs.jy[i];
        }
    }
    let scale = 1.0 / trajectories.max(1) as f64;
    for v in rho.iter_mut().chain(jx.iter_mut()).chain(jy.iter_mut()) {
        *v *= scale;
    }
    Ok(FlowObservables { grid, rho, jx, jy })
}

/// Cumulative hardware error `1 - f^N` over `N` two-qubit gates.
pub fn cumulative_hardware_error(two_qubit_gate_count: usize, fidelity_2q: f64) -> f64 {
    1.0 - fidelity_2q.powf(two_qubit_gate_count as f64)
}

/// Knobs for the analytic scaling sweep. Defaults match the trade-off
/// analysis setup: b = 2, t = pi/2 (p = 1), eps = pi/8, compensation on,
/// two-qubit fidelity 99.67%.
#[derive(Clone, Copy, Debug)]
pub struct ScalingParams {
    pub threshold_b: usize,
    pub time_exponent_p: i32,
    pub epsilon_th: f64,
    pub compensate: bool,
    pub periodic_removal: bool,
    pub fidelity_2q: f64,
}

impl Default for ScalingParams {
    fn default() -> Self {
        ScalingParams {
            threshold_b: 2,
            time_exponent_p: 1,
            epsilon_th: PI / 8.0,
            compensate: true,
            periodic_removal: true,
            fidelity_2q: 0.9967,
        }
    }
}

impl ScalingParams {
    pub fn aqft_config(&self) -> AqftConfig {
        AqftConfig::new(self.threshold_b, self.compensate)
    }

    pub fn truncation_policy(&self) -> TruncationPolicy {
        TruncationPolicy::new(self.epsilon_th, self.periodic_removal)
    }

    pub fn time(&self) -> f64 {
        PI * 2f64.powi(-self.time_exponent_p)
    }
}

/// Splits a total qubit count over the two axes, x getting the ceiling.
pub fn split_axes(n: usize) -> (usize, usize) {
    (n - n / 2, n / 2)
}

#[derive(Clone, Copy, Debug)]
pub struct TradeoffPoint {
    pub n: usize,
    pub standard_raw: usize,
    pub standard_routed: usize,
    pub truncated_raw: usize,
    pub truncated_routed: usize,
    pub removed_gates_raw: usize,
    pub removed_gates_routed: usize,
    /// `1 - f^removed_routed`: hardware error the truncation evades.
    pub avoided_hardware_error: f64,
    pub aqft_error_bound: f64,
    /// `eps_th * removed momentum-pair count`: the quadratic-order model.
    pub momentum_bound_paper: f64,
    /// Sum of |reduced phase| over sub-threshold removals.
    pub momentum_bound_tight: f64,
    pub empirical_error: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct TradeoffCurves {
    pub params: ScalingParams,
    pub points: Vec<TradeoffPoint>,
}

/// Analytic sweep over total qubit counts. No statevectors are touched;
/// circuits are built only for their gate statistics.
pub fn scaling_curves(
    n_values: impl IntoIterator<Item = usize>,
    params: &ScalingParams,
) -> Result<TradeoffCurves> {
    let t = params.time();
    let exact_cfg = AqftConfig::exact();
    let no_op = TruncationPolicy::no_op();
    let trunc_cfg = params.aqft_config();
    let trunc_policy = params.truncation_policy();

    let mut points = Vec::new();
    for n in n_values {
        if n < 2 {
            return Err(Error::InvalidConfig {
                field: "n_range".into(),
                reason: format!("need at least 2 qubits, got {n}"),
            });
        }
        let (nx, ny) = split_axes(n);

        let mut standard_raw = 0;
        let mut standard_routed = 0;
        let mut truncated_raw = 0;
        let mut truncated_routed = 0;
        let mut aqft_bound = 0.0;
        let mut removed_momentum = 0usize;
        let mut tight = 0.0;
        for axis in [nx, ny] {
            let std_stats = axis_stats(axis, t, &exact_cfg, &no_op)?;
            standard_raw += std_stats.0;
            standard_routed += std_stats.1;
            let trunc_stats = axis_stats(axis, t, &trunc_cfg, &trunc_policy)?;
            truncated_raw += trunc_stats.0;
            truncated_routed += trunc_stats.1;
            // the transform appears twice per axis
            aqft_bound +=
                2.0 * aqft_error_bound(axis, params.threshold_b, params.compensate);
            let report = apply_truncation(&decompose_k_squared(axis), t, &trunc_policy)?;
            removed_momentum += report.removed_count();
            tight += report.removed_phase_mass();
        }

        let removed_raw = standard_raw - truncated_raw;
        let removed_routed = standard_routed - truncated_routed;
        points.push(TradeoffPoint {
            n,
            standard_raw,
            standard_routed,
            truncated_raw,
            truncated_routed,
            removed_gates_raw: removed_raw,
            removed_gates_routed: removed_routed,
            avoided_hardware_error: cumulative_hardware_error(removed_routed, params.fidelity_2q),
            aqft_error_bound: aqft_bound,
            momentum_bound_paper: params.epsilon_th * removed_momentum as f64,
            momentum_bound_tight: tight,
            empirical_error: None,
        });
    }
    Ok(TradeoffCurves { params: *params, points })
}

fn axis_stats(
    n_axis: usize,
    t: f64,
    cfg: &AqftConfig,
    policy: &TruncationPolicy,
) -> Result<(usize, usize)> {
    let circuit = crate::momentum::build_axis_evolution(n_axis, t, cfg, policy)?;
    let stats = circuit.stats();
    Ok((stats.two_qubit_count, stats.lnn_routed_two_qubit_count))
}

/// Measured (not bounded) algorithmic error at `n` total qubits:
/// `1 - fidelity` between the exact-configuration and truncated final
/// states, starting from the encoded initial flow field, noiseless.
pub fn empirical_algorithmic_error(n: usize, params: &ScalingParams) -> Result<f64> {
    const MAX_STATEVECTOR_QUBITS: usize = 14;
    if !(2..=MAX_STATEVECTOR_QUBITS).contains(&n) {
        return Err(Error::ResourceLimit {
            requested: n,
            max: MAX_STATEVECTOR_QUBITS,
        });
    }
    let (nx, ny) = split_axes(n);
    let grid = GridSpec::new(nx, ny);
    let field = initial_wavefunction(grid, InitialForm::GaussianAmplitude);
    let initial = encode(&field);
    let t = params.time();

    let exact = build_full_step(nx, ny, t, &AqftConfig::exact(), &TruncationPolicy::no_op())?
        .executed_on(&initial)?;
    let truncated = build_full_step(
        nx,
        ny,
        t,
        &params.aqft_config(),
        &params.truncation_policy(),
    )?
    .executed_on(&initial)?;
    Ok(1.0 - exact.fidelity(&truncated)?)
}

/// Fills the empirical column for every point with `n <= max_n`.
pub fn fill_empirical(curves: &mut TradeoffCurves, max_n: usize) -> Result<()> {
    let params = curves.params;
    for point in &mut curves.points {
        if point.n <= max_n {
            point.empirical_error = Some(empirical_algorithmic_error(point.n, &params)?);
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// `min(1, bound / pi)` on the algorithmic curve.
    Bounded,
    /// Raw bound values.
    Raw,
}

impl Normalization {
    pub fn apply(&self, bound: f64) -> f64 {
        match self {
            Normalization::Bounded => (bound / PI).min(1.0),
            Normalization::Raw => bound,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Normalization::Bounded => "bounded",
            Normalization::Raw => "raw",
        }
    }
}

/// Total algorithmic-error curve value at one sweep point.
pub fn algorithmic_error(point: &TradeoffPoint, normalization: Normalization) -> f64 {
    normalization.apply(point.aqft_error_bound + point.momentum_bound_paper)
}

/// Abscissa where the avoided-hardware-error curve crosses the algorithmic
/// one, linearly interpolated; `None` when they never cross. More than one
/// strict crossing is an error listing them all.
pub fn equilibrium_point(
    curves: &TradeoffCurves,
    normalization: Normalization,
) -> Result<Option<f64>> {
    let diffs: Vec<(f64, f64)> = curves
        .points
        .iter()
        .map(|p| {
            (
                p.n as f64,
                p.avoided_hardware_error - algorithmic_error(p, normalization),
            )
        })
        .collect();

    let mut crossings = Vec::new();
    for window in diffs.windows(2) {
        let (n0, d0) = window[0];
        let (n1, d1) = window[1];
        if d0 == 0.0 {
            continue; // handled as its own grid-point crossing below
        }
        if d1 == 0.0 {
            // grid-point zero: a crossing only if the curve later leaves on
            // the other side; the strict-sign check below covers that case,
            // so a plateau of zeros is not repeatedly counted.
            continue;
        }
        if d0 * d1 < 0.0 {
            crossings.push(n0 + d0 * (n1 - n0) / (d0 - d1));
        }
    }
    // grid-point zeros flanked by opposite strict signs
    for i in 0..diffs.len() {
        if diffs[i].1 != 0.0 {
            continue;
        }
        let before = diffs[..i].iter().rev().find(|(_, d)| *d != 0.0);
        let after = diffs[i + 1..].iter().find(|(_, d)| *d != 0.0);
        if let (Some((_, db)), Some((_, da))) = (before, after) {
            if db * da < 0.0 {
                crossings.push(diffs[i].0);
            }
        }
    }
    crossings.sort_by(|a, b| a.partial_cmp(b).unwrap());
    crossings.dedup_by(|a, b| (*a - *b).abs() < 1e-9);

    match crossings.len() {
        0 => Ok(None),
        1 => Ok(Some(crossings[0])),
        _ => Err(Error::AmbiguousCrossing(crossings)),
    }
}

impl TradeoffCurves {
    /// CSV dump with the pinned column set; the empirical column is empty
    /// where it was not computed.
    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(
            out,
            "n,removed_gates_raw,removed_gates_routed,avoided_error,aqft_bound,\
             momentum_bound_paper,momentum_bound_tight,empirical_error"
        )?;
        for p in &self.points {
            let empirical = p
                .empirical_error
                .map(|e| format!("{e:.11e}"))
                .unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{:.11e},{:.11e},{:.11e},{:.11e},{}",
                p.n,
                p.removed_gates_raw,
                p.removed_gates_routed,
                p.avoided_hardware_error,
                p.aqft_error_bound,
                p.momentum_bound_paper,
                p.momentum_bound_tight,
                empirical,
            )?;
        }
        Ok(())
    }
}

/// Least-squares line fit with the coefficient of determination.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> FitResult {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let fitted = slope * x + intercept;
        ss_res += (y - fitted) * (y - fitted);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    FitResult {
        slope,
        intercept,
        r_squared: if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot },
    }
}
