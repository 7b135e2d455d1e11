//! Builders for the quantum Fourier transform and its truncated
//! approximation with single-qubit phase compensation.
//!
//! The forward builder realizes the discrete Fourier transform
//! `F|m> = 2^{-n/2} sum_m' exp(+2 pi i m m' / 2^n) |m'>` up to a classical
//! bit-reversal of the output index, which is recorded on the circuit
//! (see [`Circuit::bit_reversal_parity`]) instead of being repaired with
//! Swap gates. Undo it with [`Statevector::bit_reversed`] when reading the
//! transform directly.
//!
//! In this construction the controlled phase between qubits at index
//! distance `k` is `2 pi / 2^{k+1}`; the truncation threshold `b` of
//! [`AqftConfig`] retains exactly the gates with `k <= b`, so a standard
//! transform keeps all `n (n - 1) / 2` of them.

use std::f64::consts::TAU;

use crate::circuit::{Circuit, GateOp};

/// Truncation and compensation knobs for [`build_aqft`].
#[derive(Clone, Copy, Debug)]
pub struct AqftConfig {
    /// Retain controlled phases between qubits at index distance `k <= b`.
    pub threshold_b: usize,
    /// Append one merged Rz per target approximating the removed gates'
    /// average phase effect.
    pub compensate: bool,
    /// Assumed probability of a control qubit being |1>; 1/2 when nothing
    /// is known about the state.
    pub assumed_control_probability: f64,
}

impl AqftConfig {
    pub fn new(threshold_b: usize, compensate: bool) -> Self {
        AqftConfig {
            threshold_b,
            compensate,
            assumed_control_probability: 0.5,
        }
    }

    /// Threshold beyond any index distance: the exact transform.
    pub fn exact() -> Self {
        AqftConfig::new(usize::MAX, false)
    }
}

/// Phase of the retained controlled-phase gate at index distance `k`.
pub fn controlled_phase_angle(distance: usize) -> f64 {
    TAU / 2f64.powi(distance as i32 + 1)
}

/// Standard transform: every controlled phase retained.
pub fn build_qft(num_qubits: usize, inverse: bool) -> Circuit {
    build_aqft(num_qubits, inverse, AqftConfig::exact())
}

/// Truncated transform. Gates at index distance `k > cfg.threshold_b` are
/// omitted; with `cfg.compensate`, each target that lost gates gets one Rz
/// whose angle is the control-probability-weighted sum of the lost phases,
/// placed where the removed gates would have acted.
pub fn build_aqft(num_qubits: usize, inverse: bool, cfg: AqftConfig) -> Circuit {
    let n = num_qubits;
    let direction = if inverse { "inverse " } else { "" };
    let mut circuit = Circuit::new(n, format!("{direction}aqft{n}(b={})", cfg.threshold_b));
    for target in (0..n).rev() {
        circuit.push(GateOp::Hadamard { target }).expect("in range");
        let mut compensation = 0.0;
        for control in (0..target).rev() {
            let distance = target - control;
            let angle = controlled_phase_angle(distance);
            if distance <= cfg.threshold_b {
                circuit
                    .push(GateOp::ControlledPhase { control, target, angle })
                    .expect("in range");
            } else {
                compensation += cfg.assumed_control_probability * angle;
            }
        }
        if cfg.compensate && compensation != 0.0 {
            circuit
                .push(GateOp::Rz { target, angle: compensation })
                .expect("in range");
        }
    }
    circuit.set_bit_reversal_parity(true);
    if inverse {
        let mut inv = circuit.inverse();
        inv.set_bit_reversal_parity(true);
        inv
    } else {
        circuit
    }
}

/// Analytic worst-case bound on the phase mass dropped by truncation at
/// threshold `b`: `sum_{k=b+1}^{n-1} (n-k) * (2 pi / 2^k) * w` with `w = 1`
/// uncompensated and `w = 1/2` compensated (residual about the mean phase).
/// Grows linearly in `n` at fixed `b`; zero when `b >= n - 1`.
///
/// This keeps the gate-phase normalization of the source analysis, in which
/// a distance-`k` gate is charged `2 pi / 2^k`; the built circuits' actual
/// per-gate phases are half that, so the bound is conservative by a factor
/// of two.
pub fn aqft_error_bound(num_qubits: usize, threshold_b: usize, compensated: bool) -> f64 {
    let n = num_qubits;
    if n == 0 || threshold_b >= n - 1 {
        return 0.0;
    }
    let weight = if compensated { 0.5 } else { 1.0 };
    let mut total = 0.0;
    for k in (threshold_b + 1)..n {
        total += (n - k) as f64 * (TAU / 2f64.powi(k as i32)) * weight;
    }
    total
}

/// Two-qubit gate count of [`build_aqft`]: `sum_{k=1}^{min(b, n-1)} (n - k)`.
pub fn aqft_two_qubit_count(num_qubits: usize, threshold_b: usize) -> usize {
    let n = num_qubits;
    if n == 0 {
        return 0;
    }
    (1..n)
        .take_while(|k| *k <= threshold_b)
        .map(|k| n - k)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Statevector;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    /// Dense DFT oracle with the positive-exponent convention.
    fn dft_column(n: usize, m: usize) -> Vec<Complex64> {
        let size = 1usize << n;
        let scale = 1.0 / (size as f64).sqrt();
        (0..size)
            .map(|mp| Complex64::from_polar(scale, TAU * (m * mp % size) as f64 / size as f64))
            .collect()
    }

    #[test]
    fn qft_on_one_qubit_is_hadamard() {
        let c = build_qft(1, false);
        assert_eq!(c.ops().len(), 1);
        let out = c.executed_on(&Statevector::zero(1).unwrap()).unwrap();
        assert!((out.amplitudes()[0].re - 1.0 / 2.0f64.sqrt()).abs() < 1e-15);
        assert!((out.amplitudes()[1].re - 1.0 / 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn qft_of_zero_is_uniform() {
        for n in 1..=6 {
            let c = build_qft(n, false);
            let out = c.executed_on(&Statevector::zero(n).unwrap()).unwrap();
            let expected = 1.0 / ((1usize << n) as f64).sqrt();
            for a in out.amplitudes() {
                assert!((a - Complex64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn qft_matches_dft_oracle_after_relabeling() {
        for n in 1..=5 {
            let c = build_qft(n, false);
            assert!(c.bit_reversal_parity());
            for m in 0..(1usize << n) {
                let input = Statevector::basis_state(n, m).unwrap();
                let raw = c.executed_on(&input).unwrap();
                let relabeled = raw.bit_reversed();
                let oracle = dft_column(n, m);
                for (a, e) in relabeled.amplitudes().iter().zip(&oracle) {
                    assert!((a - e).norm() < 1e-12, "n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn inverse_undoes_forward() {
        let n = 5;
        let fwd = build_qft(n, false);
        let inv = build_qft(n, true);
        let round = fwd.concatenate(&inv).unwrap();
        assert!(!round.bit_reversal_parity());
        let (s, _) = Statevector::from_amplitudes(
            &(0..32)
                .map(|k| Complex64::new((k as f64).sin() + 1.5, (k as f64).cos()))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let out = round.executed_on(&s).unwrap();
        for (a, e) in out.amplitudes().iter().zip(s.amplitudes()) {
            assert!((a - e).norm() < 1e-10);
        }
    }

    #[test]
    fn full_threshold_reproduces_qft_exactly() {
        for n in 2..=6 {
            let exact = build_qft(n, false);
            let approx = build_aqft(n, false, AqftConfig::new(n - 1, false));
            assert_eq!(exact.ops(), approx.ops());
            let inv_exact = build_qft(n, true);
            let inv_approx = build_aqft(n, true, AqftConfig::new(n - 1, false));
            assert_eq!(inv_exact.ops(), inv_approx.ops());
        }
    }

    #[test]
    fn truncation_counts() {
        // n=4, b=2: the single distance-3 gate is removed, 5 of 6 remain.
        let full = build_qft(4, false);
        assert_eq!(full.stats().two_qubit_count, 6);
        let truncated = build_aqft(4, false, AqftConfig::new(2, false));
        assert_eq!(truncated.stats().two_qubit_count, 5);

        for n in 1..=20 {
            for b in 0..=8 {
                let c = build_aqft(n, false, AqftConfig::new(b, false));
                assert_eq!(
                    c.stats().two_qubit_count,
                    aqft_two_qubit_count(n, b),
                    "n={n} b={b}"
                );
            }
        }
    }

    #[test]
    fn compensation_angle_is_half_the_removed_phase() {
        // n=4, b=2: one removed gate at distance 3 with phase 2*pi/2^4, so
        // the merged Rz carries 0.5 * pi / 8.
        let c = build_aqft(4, false, AqftConfig::new(2, true));
        let rz: Vec<&GateOp> = c
            .ops()
            .iter()
            .filter(|op| matches!(op, GateOp::Rz { .. }))
            .collect();
        assert_eq!(rz.len(), 1);
        match rz[0] {
            GateOp::Rz { target, angle } => {
                assert_eq!(*target, 3);
                assert!((angle - 0.5 * TAU / 16.0).abs() < 1e-15);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn error_bound_closed_form() {
        assert_eq!(aqft_error_bound(6, 5, false), 0.0);
        assert_eq!(aqft_error_bound(4, 10, false), 0.0);

        // n=6, b=2, uncompensated: 3*(2pi/8) + 2*(2pi/16) + 1*(2pi/32)
        let by_hand = 3.0 * TAU / 8.0 + 2.0 * TAU / 16.0 + TAU / 32.0;
        assert!((aqft_error_bound(6, 2, false) - by_hand).abs() < 1e-15);
        assert!((by_hand - 1.0625 * PI).abs() < 1e-12);

        // compensation halves the bound
        assert!((aqft_error_bound(6, 2, true) - by_hand / 2.0).abs() < 1e-15);
    }

    #[test]
    fn error_bound_linear_in_n() {
        // per-qubit increment is the exact tail sum and approaches the
        // asymptotic slope 2*pi/2^b at fixed b
        let b = 3usize;
        for n in 20..30 {
            let d = aqft_error_bound(n + 1, b, false) - aqft_error_bound(n, b, false);
            let tail: f64 = ((b + 1)..=n).map(|k| TAU / 2f64.powi(k as i32)).sum();
            assert!((d - tail).abs() < 1e-12);
            assert!((d - TAU / 2f64.powi(b as i32)).abs() < 1e-4);
        }
    }
}
