//! Dense complex statevector with gate-application kernels.
//!
//! Basis convention is little-endian: qubit `i` carries binary weight `2^i`,
//! so basis index `m` assigns qubit `i` the bit `(m >> i) & 1`. All angle
//! conventions are fixed here and everything else in the crate builds on
//! them:
//!
//! * `Rz(theta)` is `exp(-i theta Z / 2)`: bit 0 gains `e^{-i theta/2}`,
//!   bit 1 gains `e^{+i theta/2}`.
//! * `apply_zz_entangler(phi)` is `exp(-i phi Z_a Z_b)`: agreeing bits gain
//!   `e^{-i phi}`, differing bits `e^{+i phi}`.
//! * `apply_controlled_phase(theta)` multiplies the both-bits-set amplitudes
//!   by `e^{+i theta}`.
//!
//! Kernels run sequentially below [`PARALLEL_THRESHOLD`] amplitudes and are
//! split across worker threads above it when the `parallel` feature is
//! enabled. Reductions (norm, inner products) stay sequential so results are
//! bit-identical regardless of thread count.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default amplitude-array memory guard: 2^28 complex doubles is 4 GiB.
pub const DEFAULT_MAX_QUBITS: usize = 28;

/// Minimum amplitude count before compute-heavy kernels (arbitrary phase
/// functions) take the parallel path.
pub const PARALLEL_THRESHOLD: usize = 1 << 13;

/// Threshold for the cheap memory-bound kernels (Hadamard, Rz, controlled
/// phase, ZZ): fork-join overhead swamps them below roughly half a million
/// amplitudes (see the kernels bench).
pub const CHEAP_KERNEL_PARALLEL_THRESHOLD: usize = 1 << 19;

#[derive(Clone, Debug)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// |0...0> on `num_qubits` qubits, guarded by [`DEFAULT_MAX_QUBITS`].
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::zero_with_guard(num_qubits, DEFAULT_MAX_QUBITS)
    }

    /// Same as [`Statevector::zero`] with a caller-chosen memory guard.
    pub fn zero_with_guard(num_qubits: usize, max_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > max_qubits {
            return Err(Error::ResourceLimit {
                requested: num_qubits,
                max: max_qubits,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Statevector { num_qubits, amps })
    }

    /// Computational basis state |index> on `num_qubits` qubits.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        let mut state = Self::zero(num_qubits)?;
        if index >= state.amps.len() {
            return Err(Error::IndexOutOfRange {
                index,
                num_states: state.amps.len(),
            });
        }
        state.amps[0] = Complex64::new(0.0, 0.0);
        state.amps[index] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    /// Normalizes `raw` into a unit statevector and returns the original
    /// Euclidean norm alongside it, for later observable rescaling.
    pub fn from_amplitudes(raw: &[Complex64]) -> Result<(Self, f64)> {
        let len = raw.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::BadShape { len });
        }
        let norm_sqr: f64 = raw.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sqr.is_finite() {
            return Err(Error::NonFinite {
                context: "input amplitudes",
            });
        }
        if norm_sqr == 0.0 {
            return Err(Error::DegenerateState);
        }
        let norm = norm_sqr.sqrt();
        let inv = 1.0 / norm;
        let amps = raw.iter().map(|a| a * inv).collect();
        Ok((
            Statevector {
                num_qubits: len.trailing_zeros() as usize,
                amps,
            },
            norm,
        ))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::DuplicateQubit { qubit: a });
        }
        Ok(())
    }

    pub fn apply_hadamard(&mut self, target: usize) -> Result<()> {
        self.check_qubit(target)?;
        kernels::hadamard(&mut self.amps, target);
        Ok(())
    }

    pub fn apply_pauli_x(&mut self, target: usize) -> Result<()> {
        self.check_qubit(target)?;
        kernels::pauli_x(&mut self.amps, target);
        Ok(())
    }

    pub fn apply_pauli_y(&mut self, target: usize) -> Result<()> {
        self.check_qubit(target)?;
        kernels::pauli_y(&mut self.amps, target);
        Ok(())
    }

    pub fn apply_pauli_z(&mut self, target: usize) -> Result<()> {
        self.check_qubit(target)?;
        kernels::pauli_z(&mut self.amps, target);
        Ok(())
    }

    /// `Rz(theta) = exp(-i theta Z/2)` on the target qubit.
    pub fn apply_rz(&mut self, target: usize, theta: f64) -> Result<()> {
        self.check_qubit(target)?;
        kernels::rz(&mut self.amps, target, theta);
        Ok(())
    }

    /// Multiplies amplitudes whose `control` and `target` bits are both set
    /// by `e^{i theta}`.
    pub fn apply_controlled_phase(
        &mut self,
        control: usize,
        target: usize,
        theta: f64,
    ) -> Result<()> {
        self.check_pair(control, target)?;
        kernels::controlled_phase(&mut self.amps, control, target, theta);
        Ok(())
    }

    /// `exp(-i phi Z_a Z_b)`.
    pub fn apply_zz_entangler(&mut self, a: usize, b: usize, phi: f64) -> Result<()> {
        self.check_pair(a, b)?;
        kernels::zz_entangler(&mut self.amps, a, b, phi);
        Ok(())
    }

    pub fn apply_swap(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_pair(a, b)?;
        kernels::swap(&mut self.amps, a, b);
        Ok(())
    }

    /// Multiplies amplitude `m` by `e^{i phase(m)}`.
    pub fn apply_diagonal_phases<F>(&mut self, phase: F)
    where
        F: Fn(usize) -> f64 + Sync,
    {
        kernels::diagonal_phases(&mut self.amps, &phase);
    }

    /// Multiplies every amplitude by `e^{i phase}`.
    pub fn apply_global_phase(&mut self, phase: f64) {
        if phase != 0.0 {
            let factor = Complex64::from_polar(1.0, phase);
            for a in &mut self.amps {
                *a *= factor;
            }
        }
    }

    /// Classical index relabeling: amplitude of basis `m` moves to the basis
    /// index with the bits of `m` reversed. Used to undo the Fourier
    /// builders' output ordering without Swap gates.
    pub fn bit_reversed(&self) -> Self {
        let n = self.num_qubits;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (m, a) in self.amps.iter().enumerate() {
            amps[reverse_bits(m, n)] = *a;
        }
        Statevector {
            num_qubits: n,
            amps,
        }
    }

    /// <self|other>, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &Statevector) -> Result<Complex64> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::SizeMismatch {
                expected: self.amps.len(),
                actual: other.amps.len(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |<self|other>|^2, clamped to [0, 1].
    pub fn fidelity(&self, other: &Statevector) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr().min(1.0))
    }
}

/// Reverses the low `n` bits of `m`.
pub fn reverse_bits(m: usize, n: usize) -> usize {
    let mut out = 0;
    for i in 0..n {
        out |= ((m >> i) & 1) << (n - 1 - i);
    }
    out
}

/// Raw amplitude-array kernels.
///
/// Each kernel has a `_seq` form and, with the `parallel` feature, a `_par`
/// form; the unsuffixed entry point picks one based on
/// [`PARALLEL_THRESHOLD`]. Both forms stay public so the benchmark suite can
/// compare them directly.
pub mod kernels {
    use super::{CHEAP_KERNEL_PARALLEL_THRESHOLD, PARALLEL_THRESHOLD};
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[cfg(feature = "parallel")]
    use rayon::prelude::*;

    macro_rules! dispatch {
        ($threshold:expr, $seq:ident, $par:ident, $amps:expr $(, $arg:expr)*) => {{
            #[cfg(feature = "parallel")]
            {
                if $amps.len() >= $threshold {
                    return $par($amps $(, $arg)*);
                }
            }
            let _ = $threshold;
            $seq($amps $(, $arg)*)
        }};
    }

    #[inline]
    fn hadamard_block(block: &mut [Complex64], step: usize) {
        let (lo, hi) = block.split_at_mut(step);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let x = *a;
            let y = *b;
            *a = FRAC_1_SQRT_2 * (x + y);
            *b = FRAC_1_SQRT_2 * (x - y);
        }
    }

    pub fn hadamard(amps: &mut [Complex64], target: usize) {
        dispatch!(CHEAP_KERNEL_PARALLEL_THRESHOLD, hadamard_seq, hadamard_par, amps, target)
    }

    pub fn hadamard_seq(amps: &mut [Complex64], target: usize) {
        let step = 1 << target;
        for block in amps.chunks_exact_mut(2 * step) {
            hadamard_block(block, step);
        }
    }

    #[cfg(feature = "parallel")]
    pub fn hadamard_par(amps: &mut [Complex64], target: usize) {
        let step = 1 << target;
        if 2 * step == amps.len() {
            let (lo, hi) = amps.split_at_mut(step);
            lo.par_iter_mut().zip(hi.par_iter_mut()).for_each(|(a, b)| {
                let x = *a;
                let y = *b;
                *a = FRAC_1_SQRT_2 * (x + y);
                *b = FRAC_1_SQRT_2 * (x - y);
            });
        } else {
            amps.par_chunks_exact_mut(2 * step)
                .for_each(|block| hadamard_block(block, step));
        }
    }

    pub fn pauli_x(amps: &mut [Complex64], target: usize) {
        let step = 1 << target;
        for block in amps.chunks_exact_mut(2 * step) {
            let (lo, hi) = block.split_at_mut(step);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                std::mem::swap(a, b);
            }
        }
    }

    pub fn pauli_y(amps: &mut [Complex64], target: usize) {
        let i = Complex64::new(0.0, 1.0);
        let step = 1 << target;
        for block in amps.chunks_exact_mut(2 * step) {
            let (lo, hi) = block.split_at_mut(step);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let x = *a;
                let y = *b;
                *a = -i * y;
                *b = i * x;
            }
        }
    }

    pub fn pauli_z(amps: &mut [Complex64], target: usize) {
        for (m, a) in amps.iter_mut().enumerate() {
            if (m >> target) & 1 == 1 {
                *a = -*a;
            }
        }
    }

    pub fn rz(amps: &mut [Complex64], target: usize, theta: f64) {
        dispatch!(CHEAP_KERNEL_PARALLEL_THRESHOLD, rz_seq, rz_par, amps, target, theta)
    }

    pub fn rz_seq(amps: &mut [Complex64], target: usize, theta: f64) {
        let lo = Complex64::from_polar(1.0, -theta / 2.0);
        let hi = Complex64::from_polar(1.0, theta / 2.0);
        for (m, a) in amps.iter_mut().enumerate() {
            *a *= if (m >> target) & 1 == 0 { lo } else { hi };
        }
    }

    #[cfg(feature = "parallel")]
    pub fn rz_par(amps: &mut [Complex64], target: usize, theta: f64) {
        let lo = Complex64::from_polar(1.0, -theta / 2.0);
        let hi = Complex64::from_polar(1.0, theta / 2.0);
        amps.par_iter_mut().enumerate().for_each(|(m, a)| {
            *a *= if (m >> target) & 1 == 0 { lo } else { hi };
        });
    }

    pub fn controlled_phase(amps: &mut [Complex64], control: usize, target: usize, theta: f64) {
        dispatch!(CHEAP_KERNEL_PARALLEL_THRESHOLD, controlled_phase_seq, controlled_phase_par, amps, control, target, theta)
    }

    pub fn controlled_phase_seq(
        amps: &mut [Complex64],
        control: usize,
        target: usize,
        theta: f64,
    ) {
        let mask = (1 << control) | (1 << target);
        let phase = Complex64::from_polar(1.0, theta);
        for (m, a) in amps.iter_mut().enumerate() {
            if m & mask == mask {
                *a *= phase;
            }
        }
    }

    #[cfg(feature = "parallel")]
    pub fn controlled_phase_par(
        amps: &mut [Complex64],
        control: usize,
        target: usize,
        theta: f64,
    ) {
        let mask = (1 << control) | (1 << target);
        let phase = Complex64::from_polar(1.0, theta);
        amps.par_iter_mut().enumerate().for_each(|(m, a)| {
            if m & mask == mask {
                *a *= phase;
            }
        });
    }

    pub fn zz_entangler(amps: &mut [Complex64], qa: usize, qb: usize, phi: f64) {
        dispatch!(CHEAP_KERNEL_PARALLEL_THRESHOLD, zz_entangler_seq, zz_entangler_par, amps, qa, qb, phi)
    }

    pub fn zz_entangler_seq(amps: &mut [Complex64], qa: usize, qb: usize, phi: f64) {
        let agree = Complex64::from_polar(1.0, -phi);
        let differ = Complex64::from_polar(1.0, phi);
        for (m, a) in amps.iter_mut().enumerate() {
            *a *= if (m >> qa) & 1 == (m >> qb) & 1 {
                agree
            } else {
                differ
            };
        }
    }

    #[cfg(feature = "parallel")]
    pub fn zz_entangler_par(amps: &mut [Complex64], qa: usize, qb: usize, phi: f64) {
        let agree = Complex64::from_polar(1.0, -phi);
        let differ = Complex64::from_polar(1.0, phi);
        amps.par_iter_mut().enumerate().for_each(|(m, a)| {
            *a *= if (m >> qa) & 1 == (m >> qb) & 1 {
                agree
            } else {
                differ
            };
        });
    }

    pub fn swap(amps: &mut [Complex64], qa: usize, qb: usize) {
        let mask = (1 << qa) | (1 << qb);
        for m in 0..amps.len() {
            if (m >> qa) & 1 == 1 && (m >> qb) & 1 == 0 {
                amps.swap(m, m ^ mask);
            }
        }
    }

    pub fn diagonal_phases<F>(amps: &mut [Complex64], phase: &F)
    where
        F: Fn(usize) -> f64 + Sync,
    {
        dispatch!(PARALLEL_THRESHOLD, diagonal_phases_seq, diagonal_phases_par, amps, phase)
    }

    pub fn diagonal_phases_seq<F>(amps: &mut [Complex64], phase: &F)
    where
        F: Fn(usize) -> f64 + Sync,
    {
        for (m, a) in amps.iter_mut().enumerate() {
            *a *= Complex64::from_polar(1.0, phase(m));
        }
    }

    #[cfg(feature = "parallel")]
    pub fn diagonal_phases_par<F>(amps: &mut [Complex64], phase: &F)
    where
        F: Fn(usize) -> f64 + Sync,
    {
        amps.par_iter_mut().enumerate().for_each(|(m, a)| {
            *a *= Complex64::from_polar(1.0, phase(m));
        });
    }
}
