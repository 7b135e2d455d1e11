//! Wavenumber operator, exact diagonal momentum evolution, its Rz/ZZ
//! decomposition, the two truncation rules, and the per-axis evolution
//! `U = QFT^dag exp(-i k^2 t / 2) QFT`.
//!
//! Basis integer `m` on an `n`-qubit axis maps to the signed wavenumber
//! `k(m) = m` for `m < 2^{n-1}` and `m - 2^n` otherwise (FFT ordering).
//! Expanding `k(m)^2 / 2` over `{I, Z}` products gives an identity
//! coefficient `c0`, single-Z coefficients `c_i`, and ZZ-pair coefficients
//! `c_ij`; the evolution factors into Rz and ZZ-entangler gates whose pair
//! phases, in the convention `theta_ij = 2 c_ij t`, are what the truncation
//! rules classify after reduction into `(-pi, pi]`.
//!
//! Two rules remove pairs: a reduced phase that is exactly zero (the gate
//! is an identity up to global phase, so removal costs nothing) and a
//! reduced phase below the threshold `epsilon_th`. Classification always
//! uses the actually computed coefficients; the analytic index window of
//! [`retention_window`] is the idealized model that charges every pair
//! `(i, j)` the weight `2^{i+j}`, kept for bound checks and scaling curves.
//! The model matches pairs that involve the sign qubit and is a factor of
//! two below the true phase for the rest, which is why reports carry both.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::circuit::{Circuit, GateOp};
use crate::error::{Error, Result};
use crate::qft::{build_aqft, AqftConfig};
use crate::state::DEFAULT_MAX_QUBITS;

/// Signed wavenumber of basis integer `m` on an `n_axis`-qubit register.
pub fn wavenumber(m: usize, n_axis: usize) -> Result<i64> {
    let size = 1usize << n_axis;
    if m >= size {
        return Err(Error::IndexOutOfRange {
            index: m,
            num_states: size,
        });
    }
    let half = size >> 1;
    if m < half {
        Ok(m as i64)
    } else {
        Ok(m as i64 - size as i64)
    }
}

/// Diagonal phase function of the truncation-free evolution:
/// `phi(m) = -k(m)^2 t / 2`. Feed it to
/// [`crate::state::Statevector::apply_diagonal_phases`].
pub fn exact_momentum_phases(n_axis: usize, t: f64) -> impl Fn(usize) -> f64 + Sync + Copy {
    let size = 1i64 << n_axis;
    let half = size >> 1;
    move |m| {
        let k = if (m as i64) < half {
            m as i64
        } else {
            m as i64 - size
        };
        -((k * k) as f64) * t / 2.0
    }
}

/// ZZ-pair coefficient entry of a [`PauliDecomposition`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairTerm {
    pub i: usize,
    pub j: usize,
    pub coefficient: f64,
}

/// `{I, Z}`-basis coefficients of the operator `k^2 / 2` on one axis:
/// `k(m)^2 / 2 = c0 + sum_i c_i z_i(m) + sum_{i<j} c_ij z_i(m) z_j(m)`
/// with `z_i(m) = +1` when bit `i` of `m` is 0 and `-1` otherwise.
#[derive(Clone, Debug)]
pub struct PauliDecomposition {
    pub c0: f64,
    pub c_single: Vec<f64>,
    pub c_pair: Vec<PairTerm>,
}

impl PauliDecomposition {
    pub fn num_qubits(&self) -> usize {
        self.c_single.len()
    }

    /// Evaluates the decomposition at basis integer `m`.
    pub fn reconstruct(&self, m: usize) -> f64 {
        let z = |bit: usize| if (m >> bit) & 1 == 0 { 1.0 } else { -1.0 };
        let mut value = self.c0;
        for (i, c) in self.c_single.iter().enumerate() {
            value += c * z(i);
        }
        for term in &self.c_pair {
            value += term.coefficient * z(term.i) * z(term.j);
        }
        value
    }
}

/// Exact `{I, Z}` expansion of `k^2 / 2`.
///
/// `k(m)` is linear in the bit variables with weight `2^i` per bit and
/// `-2^{n-1}` on the sign bit, so the square expands in closed form:
/// with `a_i = w_i / 2` and `A = sum a_i`,
/// `c0 = (A^2 + sum a_i^2) / 2`, `c_i = -A a_i`, `c_ij = a_i a_j`.
/// All coefficients are dyadic rationals and exact in double precision.
pub fn decompose_k_squared(n_axis: usize) -> PauliDecomposition {
    assert!(n_axis >= 1, "axis needs at least one qubit");
    let a: Vec<f64> = (0..n_axis)
        .map(|i| {
            let w = if i + 1 == n_axis {
                -(2f64.powi(i as i32))
            } else {
                2f64.powi(i as i32)
            };
            w / 2.0
        })
        .collect();
    let total: f64 = a.iter().sum();
    let sum_sq: f64 = a.iter().map(|x| x * x).sum();
    let c0 = (total * total + sum_sq) / 2.0;
    let c_single = a.iter().map(|ai| -total * ai).collect();
    let mut c_pair = Vec::with_capacity(n_axis * (n_axis - 1) / 2);
    for i in 0..n_axis {
        for j in (i + 1)..n_axis {
            c_pair.push(PairTerm {
                i,
                j,
                coefficient: a[i] * a[j],
            });
        }
    }
    PauliDecomposition { c0, c_single, c_pair }
}

/// Maps `theta` into `(-pi, pi]` by removing whole turns.
pub fn reduce_phase(theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::NonFinite { context: "phase" });
    }
    let mut r = theta.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    Ok(r)
}

/// Evolution time, either raw seconds or the dyadic form `t = pi 2^{-p}`
/// under which the pair phases become exact multiples of `pi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EvolutionTime {
    Seconds(f64),
    DyadicPi(i32),
}

impl EvolutionTime {
    pub fn seconds(&self) -> f64 {
        match *self {
            EvolutionTime::Seconds(t) => t,
            EvolutionTime::DyadicPi(p) => PI * 2f64.powi(-p),
        }
    }

    /// The exponent `p`, when the dyadic form applies.
    pub fn exponent(&self) -> Option<i32> {
        match *self {
            EvolutionTime::Seconds(_) => None,
            EvolutionTime::DyadicPi(p) => Some(p),
        }
    }
}

/// Truncation knobs for the ZZ-pair gates. Single-qubit Rz gates are never
/// truncated. `epsilon_th` should stay below `pi`; at or above it every
/// pair is removable.
#[derive(Clone, Copy, Debug)]
pub struct TruncationPolicy {
    pub epsilon_th: f64,
    pub periodic_removal: bool,
    pub periodic_tolerance: f64,
}

impl TruncationPolicy {
    pub fn new(epsilon_th: f64, periodic_removal: bool) -> Self {
        TruncationPolicy {
            epsilon_th,
            periodic_removal,
            periodic_tolerance: 1e-12,
        }
    }

    /// Keeps every gate: the truncation-free reference policy.
    pub fn no_op() -> Self {
        TruncationPolicy::new(0.0, false)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairClass {
    Retained,
    RemovedPeriodic,
    RemovedSubthreshold,
}

/// One classified ZZ pair: `theta = 2 c_ij t` and its reduction.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PairDecision {
    pub i: usize,
    pub j: usize,
    pub theta: f64,
    pub theta_reduced: f64,
    pub class: PairClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncationReport {
    pub entries: Vec<PairDecision>,
}

impl TruncationReport {
    pub fn class_count(&self, class: PairClass) -> usize {
        self.entries.iter().filter(|e| e.class == class).count()
    }

    pub fn retained(&self) -> impl Iterator<Item = &PairDecision> {
        self.entries.iter().filter(|e| e.class == PairClass::Retained)
    }

    pub fn removed_count(&self) -> usize {
        self.entries.len() - self.class_count(PairClass::Retained)
    }

    /// Sum of |reduced phase| over sub-threshold removals; periodic
    /// removals contribute zero by construction.
    pub fn removed_phase_mass(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.class == PairClass::RemovedSubthreshold)
            .map(|e| e.theta_reduced.abs())
            .sum()
    }
}

/// Classifies every ZZ pair of `decomp` at evolution time `t` under
/// `policy`. Periodic removal wins over the threshold rule where both
/// apply.
pub fn apply_truncation(
    decomp: &PauliDecomposition,
    t: f64,
    policy: &TruncationPolicy,
) -> Result<TruncationReport> {
    let mut entries = Vec::with_capacity(decomp.c_pair.len());
    for term in &decomp.c_pair {
        let theta = 2.0 * term.coefficient * t;
        let theta_reduced = reduce_phase(theta)?;
        let class = if policy.periodic_removal && theta_reduced.abs() <= policy.periodic_tolerance
        {
            PairClass::RemovedPeriodic
        } else if theta_reduced.abs() < policy.epsilon_th {
            PairClass::RemovedSubthreshold
        } else {
            PairClass::Retained
        };
        entries.push(PairDecision {
            i: term.i,
            j: term.j,
            theta,
            theta_reduced,
            class,
        });
    }
    Ok(TruncationReport { entries })
}

/// The idealized retention band of the analytic model: a pair `(i, j)`
/// survives both rules only if `lo <= i + j < hi`.
#[derive(Clone, Copy, Debug)]
pub struct RetentionWindow {
    /// `log2(eps/pi) + p + 2`; negative infinity when `epsilon_th = 0`.
    pub lo: f64,
    /// `p + 3`.
    pub hi: f64,
    /// Band width `1 - log2(eps/pi)`; infinite when `epsilon_th = 0`.
    pub delta: f64,
}

pub fn retention_window(p: i32, epsilon_th: f64) -> RetentionWindow {
    let hi = (p + 3) as f64;
    if epsilon_th <= 0.0 {
        return RetentionWindow {
            lo: f64::NEG_INFINITY,
            hi,
            delta: f64::INFINITY,
        };
    }
    let log_ratio = (epsilon_th / PI).log2();
    RetentionWindow {
        lo: log_ratio + (p + 2) as f64,
        hi,
        delta: 1.0 - log_ratio,
    }
}

/// Pair phase under the analytic weight model: `-pi * 2^{i+j-p-2}`.
pub fn weight_model_theta(i: usize, j: usize, p: i32) -> f64 {
    -PI * 2f64.powi((i + j) as i32 - p - 2)
}

/// Number of pairs `(i < j < n)` the analytic window retains.
pub fn weight_model_retained_count(n: usize, p: i32, epsilon_th: f64) -> usize {
    let window = retention_window(p, epsilon_th);
    let mut count = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let s = (i + j) as f64;
            if s >= window.lo && s < window.hi {
                count += 1;
            }
        }
    }
    count
}

/// Gate realization of `exp(-i k^2 t / 2)` on one axis under `policy`:
/// one Rz per qubit, then ZZ entanglers for the retained pairs, all with
/// reduced angles. The identity coefficient and every whole-turn removed
/// from an angle land in the circuit's global phase, so the no-truncation
/// build matches the exact diagonal pointwise, not just up to phase.
pub fn build_momentum_circuit(
    n_axis: usize,
    t: f64,
    policy: &TruncationPolicy,
) -> Result<Circuit> {
    let decomp = decompose_k_squared(n_axis);
    let report = apply_truncation(&decomp, t, policy)?;
    let mut circuit = Circuit::new(n_axis, format!("momentum{n_axis}"));
    circuit.add_global_phase(-decomp.c0 * t);
    for (target, c) in decomp.c_single.iter().enumerate() {
        let theta = 2.0 * c * t;
        let reduced = reduce_phase(theta)?;
        // Rz(theta) = (-1)^k Rz(reduced) for theta = reduced + 2 pi k.
        let turns = ((theta - reduced) / TAU).round();
        circuit.add_global_phase(PI * turns);
        circuit.push(GateOp::Rz { target, angle: reduced })?;
    }
    for entry in &report.entries {
        // ZZ(phi) = (-1)^k ZZ(phi - pi k); the whole-turn part of theta is
        // exact knowledge, so removed gates still credit it to the phase.
        let turns = ((entry.theta - entry.theta_reduced) / TAU).round();
        circuit.add_global_phase(PI * turns);
        if entry.class == PairClass::Retained {
            circuit.push(GateOp::ZzEntangler {
                a: entry.i,
                b: entry.j,
                angle: entry.theta_reduced / 2.0,
            })?;
        }
    }
    Ok(circuit)
}

/// One-axis evolution in the coordinate basis: forward transform, momentum
/// phases, inverse transform. The Fourier builders leave their output
/// bit-reversed, so the momentum gates are conjugated by that relabeling
/// (qubit `q` to `n-1-q`); the composite needs no relabeling at all.
pub fn build_axis_evolution(
    n_axis: usize,
    t: f64,
    cfg: &AqftConfig,
    policy: &TruncationPolicy,
) -> Result<Circuit> {
    let forward = build_aqft(n_axis, false, *cfg);
    let momentum = build_momentum_circuit(n_axis, t, policy)?
        .remap_qubits(n_axis, |q| n_axis - 1 - q)?;
    let inverse = build_aqft(n_axis, true, *cfg);
    let circuit = forward.concatenate(&momentum)?.concatenate(&inverse)?;
    debug_assert!(!circuit.bit_reversal_parity());
    Ok(circuit)
}

/// Full evolution step `U_x(t) U_y(t)` on the two disjoint registers:
/// x-axis on qubits `[0, nx)`, y-axis on `[nx, nx + ny)`.
pub fn build_full_step(
    nx: usize,
    ny: usize,
    t: f64,
    cfg: &AqftConfig,
    policy: &TruncationPolicy,
) -> Result<Circuit> {
    let total = nx + ny;
    if nx == 0 || ny == 0 || total > DEFAULT_MAX_QUBITS {
        return Err(Error::ResourceLimit {
            requested: total,
            max: DEFAULT_MAX_QUBITS,
        });
    }
    let x_axis = build_axis_evolution(nx, t, cfg, policy)?.remap_qubits(total, |q| q)?;
    let y_axis = build_axis_evolution(ny, t, cfg, policy)?.remap_qubits(total, |q| q + nx)?;
    x_axis.concatenate(&y_axis)
}
