//! Grid, initial condition, encode/decode between wave fields and
//! statevectors, the density/momentum observables, the classical spectral
//! reference evolution, and the Pearson-correlation comparator.
//!
//! The domain is `[-pi, pi)` per axis with `2^{nx} x 2^{ny}` points; grid
//! point `(x_k, y_l)` maps to basis index `k + 2^{nx} l`, so the x register
//! occupies qubits `[0, nx)` and the y register `[nx, nx+ny)`. Wave fields
//! store unit-normalized values plus the Euclidean norm they had at
//! construction; observables are rescaled by that norm squared so density
//! and momentum carry physical magnitudes.
//!
//! Derivatives are spectral: the single source of derivative truth on this
//! periodic grid is Fourier differentiation in the same two's-complement
//! mode ordering the quantum pipeline uses.

use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::state::Statevector;

/// Largest tolerated |Im| residue when reading the momentum observable.
const IMAGINARY_RESIDUE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub nx_qubits: usize,
    pub ny_qubits: usize,
}

impl GridSpec {
    pub fn new(nx_qubits: usize, ny_qubits: usize) -> Self {
        GridSpec { nx_qubits, ny_qubits }
    }

    pub fn nx_points(&self) -> usize {
        1 << self.nx_qubits
    }

    pub fn ny_points(&self) -> usize {
        1 << self.ny_qubits
    }

    pub fn num_points(&self) -> usize {
        self.nx_points() * self.ny_points()
    }

    pub fn num_qubits(&self) -> usize {
        self.nx_qubits + self.ny_qubits
    }

    pub fn dx(&self) -> f64 {
        TAU / self.nx_points() as f64
    }

    pub fn dy(&self) -> f64 {
        TAU / self.ny_points() as f64
    }

    pub fn x(&self, k: usize) -> f64 {
        -PI + k as f64 * self.dx()
    }

    pub fn y(&self, l: usize) -> f64 {
        -PI + l as f64 * self.dy()
    }

    /// Flat index of grid point `(x_k, y_l)`.
    pub fn index(&self, k: usize, l: usize) -> usize {
        k + self.nx_points() * l
    }
}

/// Initial-condition variants: an x-direction plane wave with the
/// Gaussian profile e^{-y^2} carried either by the amplitude (so the
/// density is its square) or by the density itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialForm {
    /// psi = exp(-y^2 + ix); density e^{-2y^2}.
    GaussianAmplitude,
    /// psi = exp(-y^2/2 + ix); density e^{-y^2}.
    GaussianDensity,
}

/// Complex field on the grid, stored unit-normalized with the construction
/// norm kept for observable rescaling.
#[derive(Clone, Debug)]
pub struct WaveField {
    pub grid: GridSpec,
    values: Vec<Complex64>,
    stored_norm: f64,
}

impl WaveField {
    /// Normalizes raw samples (flat order `k + 2^{nx} l`).
    pub fn from_samples(grid: GridSpec, raw: Vec<Complex64>) -> Result<Self> {
        if raw.len() != grid.num_points() {
            return Err(Error::SizeMismatch {
                expected: grid.num_points(),
                actual: raw.len(),
            });
        }
        let norm_sqr: f64 = raw.iter().map(|v| v.norm_sqr()).sum();
        if !norm_sqr.is_finite() {
            return Err(Error::NonFinite { context: "field samples" });
        }
        if norm_sqr == 0.0 {
            return Err(Error::DegenerateState);
        }
        let norm = norm_sqr.sqrt();
        let inv = 1.0 / norm;
        Ok(WaveField {
            grid,
            values: raw.into_iter().map(|v| v * inv).collect(),
            stored_norm: norm,
        })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn stored_norm(&self) -> f64 {
        self.stored_norm
    }

    /// Physical (un-normalized) value at flat index `idx`.
    pub fn physical(&self, idx: usize) -> Complex64 {
        self.values[idx] * self.stored_norm
    }
}

/// Samples the chosen initial condition on the grid.
pub fn initial_wavefunction(grid: GridSpec, form: InitialForm) -> WaveField {
    let mut raw = Vec::with_capacity(grid.num_points());
    for l in 0..grid.ny_points() {
        let y = grid.y(l);
        let modulus = match form {
            InitialForm::GaussianAmplitude => (-y * y).exp(),
            InitialForm::GaussianDensity => (-y * y / 2.0).exp(),
        };
        for k in 0..grid.nx_points() {
            raw.push(Complex64::from_polar(modulus, grid.x(k)));
        }
    }
    WaveField::from_samples(grid, raw).expect("gaussian profile is never the zero field")
}

/// Amplitude-encodes the field: basis index `k + 2^{nx} l` holds
/// `psi(x_k, y_l) / ||psi||`.
pub fn encode(field: &WaveField) -> Statevector {
    let (state, _) = Statevector::from_amplitudes(&field.values)
        .expect("wave fields are non-degenerate by construction");
    state
}

/// Inverse of [`encode`], reattaching the construction norm.
pub fn decode(state: &Statevector, grid: GridSpec, stored_norm: f64) -> Result<WaveField> {
    if state.amplitudes().len() != grid.num_points() {
        return Err(Error::SizeMismatch {
            expected: grid.num_points(),
            actual: state.amplitudes().len(),
        });
    }
    Ok(WaveField {
        grid,
        values: state.amplitudes().to_vec(),
        stored_norm,
    })
}

/// Pointwise density `rho = |psi|^2`, physically rescaled.
pub fn density(field: &WaveField) -> Vec<f64> {
    let scale = field.stored_norm * field.stored_norm;
    field.values.iter().map(|v| v.norm_sqr() * scale).collect()
}

/// Momentum components `J = (i/2)(psi grad psi* - psi* grad psi)` with
/// spectral gradients, physically rescaled. Errors when the literal complex
/// expression keeps an imaginary residue above 1e-8.
pub fn momentum(field: &WaveField) -> Result<(Vec<f64>, Vec<f64>)> {
    let grid = field.grid;
    let dpsi_dx = spectral_derivative(&field.values, grid, Axis::X);
    let dpsi_dy = spectral_derivative(&field.values, grid, Axis::Y);
    let scale = field.stored_norm * field.stored_norm;

    let mut jx = Vec::with_capacity(field.values.len());
    let mut jy = Vec::with_capacity(field.values.len());
    let half_i = Complex64::new(0.0, 0.5);
    let mut residue = 0.0f64;
    for (idx, psi) in field.values.iter().enumerate() {
        for (deriv, out) in [(dpsi_dx[idx], &mut jx), (dpsi_dy[idx], &mut jy)] {
            let j = half_i * (psi * deriv.conj() - psi.conj() * deriv);
            residue = residue.max(j.im.abs() * scale);
            out.push(j.re * scale);
        }
    }
    if residue > IMAGINARY_RESIDUE_TOLERANCE {
        return Err(Error::NumericConsistency {
            context: "momentum observable",
            residue,
            tolerance: IMAGINARY_RESIDUE_TOLERANCE,
        });
    }
    Ok((jx, jy))
}

/// Density plus both momentum components.
#[derive(Clone, Debug)]
pub struct FlowObservables {
    pub grid: GridSpec,
    pub rho: Vec<f64>,
    pub jx: Vec<f64>,
    pub jy: Vec<f64>,
}

impl FlowObservables {
    pub fn from_field(field: &WaveField) -> Result<Self> {
        let (jx, jy) = momentum(field)?;
        Ok(FlowObservables {
            grid: field.grid,
            rho: density(field),
            jx,
            jy,
        })
    }

    /// CSV dump: columns `x,y,rho,jx,jy`, row-major over the grid, 12
    /// significant digits, locale-independent.
    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "x,y,rho,jx,jy")?;
        for l in 0..self.grid.ny_points() {
            for k in 0..self.grid.nx_points() {
                let idx = self.grid.index(k, l);
                writeln!(
                    out,
                    "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}",
                    self.grid.x(k),
                    self.grid.y(l),
                    self.rho[idx],
                    self.jx[idx],
                    self.jy[idx],
                )?;
            }
        }
        Ok(())
    }
}

/// `sum rho dx dy`.
pub fn total_mass(grid: GridSpec, rho: &[f64]) -> f64 {
    rho.iter().sum::<f64>() * grid.dx() * grid.dy()
}

/// Exact spectral reference: every Fourier mode `(kx, ky)` is multiplied by
/// `exp(-i (kx^2 + ky^2) t / 2)` in the two's-complement mode ordering.
pub fn classical_evolve(field: &WaveField, t: f64) -> WaveField {
    let grid = field.grid;
    let mut modes = field.values.clone();
    fft_2d(&mut modes, grid, FftDirection::Forward);
    let nx = grid.nx_points();
    for (idx, mode) in modes.iter_mut().enumerate() {
        let kx = signed_mode(idx % nx, nx);
        let ky = signed_mode(idx / nx, grid.ny_points());
        let phase = -(kx * kx + ky * ky) * t / 2.0;
        *mode *= Complex64::from_polar(1.0, phase);
    }
    fft_2d(&mut modes, grid, FftDirection::Inverse);
    WaveField {
        grid,
        values: modes,
        stored_norm: field.stored_norm,
    }
}

/// Pearson correlation over the flattened arrays.
pub fn pearson_r(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (x, y) in a.iter().zip(b) {
        let da = x - mean_a;
        let db = y - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if var_a == 0.0 {
        return Err(Error::ConstantField { side: "first" });
    }
    if var_b == 0.0 {
        return Err(Error::ConstantField { side: "second" });
    }
    Ok(cov / (var_a.sqrt() * var_b.sqrt()))
}

fn signed_mode(q: usize, size: usize) -> f64 {
    if q < size - size / 2 {
        q as f64
    } else {
        q as f64 - size as f64
    }
}

enum Axis {
    X,
    Y,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum FftDirection {
    Forward,
    Inverse,
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    match direction {
        FftDirection::Forward => planner.plan_fft_forward(len),
        FftDirection::Inverse => planner.plan_fft_inverse(len),
    }
}

/// In-place 2D FFT over the flat layout `k + nx l`. The inverse pass
/// applies the 1/(nx ny) normalization.
fn fft_2d(values: &mut [Complex64], grid: GridSpec, direction: FftDirection) {
    let nx = grid.nx_points();
    let ny = grid.ny_points();

    let row_fft = plan(nx, direction);
    for row in values.chunks_exact_mut(nx) {
        row_fft.process(row);
    }

    let col_fft = plan(ny, direction);
    let mut column = vec![Complex64::new(0.0, 0.0); ny];
    for k in 0..nx {
        for l in 0..ny {
            column[l] = values[k + nx * l];
        }
        col_fft.process(&mut column);
        for l in 0..ny {
            values[k + nx * l] = column[l];
        }
    }

    if direction == FftDirection::Inverse {
        let scale = 1.0 / (nx * ny) as f64;
        for v in values.iter_mut() {
            *v *= scale;
        }
    }
}

/// d/dx or d/dy via mode multiplication by `i k`. The Nyquist mode gets a
/// zero multiplier: an odd-derivative weight of `-N/2` there breaks
/// Hermitian symmetry and leaks imaginary parts into derivatives of real
/// fields.
fn spectral_derivative(values: &[Complex64], grid: GridSpec, axis: Axis) -> Vec<Complex64> {
    let nx = grid.nx_points();
    let ny = grid.ny_points();
    let mut modes = values.to_vec();
    fft_2d(&mut modes, grid, FftDirection::Forward);
    for (idx, mode) in modes.iter_mut().enumerate() {
        let (q, size) = match axis {
            Axis::X => (idx % nx, nx),
            Axis::Y => (idx / nx, ny),
        };
        let k = if q == size / 2 { 0.0 } else { signed_mode(q, size) };
        *mode *= Complex64::new(0.0, k);
    }
    fft_2d(&mut modes, grid, FftDirection::Inverse);
    modes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(5, 5)
    }

    #[test]
    fn grid_geometry() {
        let g = GridSpec::new(2, 3);
        assert_eq!(g.nx_points(), 4);
        assert_eq!(g.ny_points(), 8);
        assert_eq!(g.num_points(), 32);
        assert!((g.dx() - TAU / 4.0).abs() < 1e-15);
        assert!((g.x(0) + PI).abs() < 1e-15);
        assert!((g.y(4) - 0.0).abs() < 1e-15);
        assert_eq!(g.index(1, 2), 9);
    }

    #[test]
    fn initial_condition_profiles() {
        let g = grid();
        let literal = initial_wavefunction(g, InitialForm::GaussianAmplitude);
        // |psi| = 1 along y = 0
        let l0 = g.ny_points() / 2; // y(l0) = 0
        assert_eq!(g.y(l0), 0.0);
        for k in 0..g.nx_points() {
            let v = literal.physical(g.index(k, l0));
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }

        // rho = e^{-2 y^2} for the literal form
        let rho = density(&literal);
        for l in 0..g.ny_points() {
            let y = g.y(l);
            for k in 0..g.nx_points() {
                assert!((rho[g.index(k, l)] - (-2.0 * y * y).exp()).abs() < 1e-10);
            }
        }

        // rho = e^{-y^2} for the density-matched form
        let matched = initial_wavefunction(g, InitialForm::GaussianDensity);
        let rho = density(&matched);
        for l in 0..g.ny_points() {
            let y = g.y(l);
            assert!((rho[g.index(0, l)] - (-y * y).exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn encode_index_arithmetic() {
        let g = GridSpec::new(2, 2);
        let mut raw = vec![Complex64::new(0.0, 0.0); g.num_points()];
        raw[g.index(1, 0)] = Complex64::new(1.0, 0.0);
        let field = WaveField::from_samples(g, raw).unwrap();
        let state = encode(&field);
        assert!((state.amplitudes()[1].re - 1.0).abs() < 1e-15);

        let mut raw = vec![Complex64::new(0.0, 0.0); g.num_points()];
        raw[g.index(1, 2)] = Complex64::new(1.0, 0.0);
        let field = WaveField::from_samples(g, raw).unwrap();
        let state = encode(&field);
        assert!((state.amplitudes()[9].re - 1.0).abs() < 1e-15);

        // constant field -> uniform state
        let raw = vec![Complex64::new(3.0, 0.0); g.num_points()];
        let field = WaveField::from_samples(g, raw).unwrap();
        let state = encode(&field);
        for a in state.amplitudes() {
            assert!((a.re - 0.25).abs() < 1e-15);
        }

        let raw = vec![Complex64::new(0.0, 0.0); g.num_points()];
        assert!(matches!(
            WaveField::from_samples(g, raw),
            Err(Error::DegenerateState)
        ));
    }

    #[test]
    fn decode_round_trip() {
        let g = GridSpec::new(3, 2);
        let raw: Vec<Complex64> = (0..g.num_points())
            .map(|i| Complex64::new((i as f64 * 0.31).sin() + 1.1, (i as f64 * 0.17).cos()))
            .collect();
        let field = WaveField::from_samples(g, raw).unwrap();
        let state = encode(&field);
        let back = decode(&state, g, field.stored_norm()).unwrap();
        for idx in 0..g.num_points() {
            let rel = (back.physical(idx) - field.physical(idx)).norm()
                / field.physical(idx).norm().max(1e-300);
            assert!(rel < 1e-12);
        }

        let other = Statevector::zero(3).unwrap();
        assert!(decode(&other, g, 1.0).is_err());
    }

    #[test]
    fn momentum_examples() {
        let g = grid();

        // real field -> J = 0
        let raw: Vec<Complex64> = (0..g.num_points())
            .map(|i| Complex64::new(1.0 + (i as f64 * 0.05).sin(), 0.0))
            .collect();
        let field = WaveField::from_samples(g, raw).unwrap();
        let (jx, jy) = momentum(&field).unwrap();
        for (a, b) in jx.iter().zip(&jy) {
            assert!(a.abs() < 1e-10 && b.abs() < 1e-10);
        }

        // psi = e^{ix} -> jx = 1, jy = 0
        let raw: Vec<Complex64> = (0..g.num_points())
            .map(|i| Complex64::from_polar(1.0, g.x(i % g.nx_points())))
            .collect();
        let field = WaveField::from_samples(g, raw).unwrap();
        let (jx, jy) = momentum(&field).unwrap();
        for idx in 0..g.num_points() {
            assert!((jx[idx] - 1.0).abs() < 1e-10);
            assert!(jy[idx].abs() < 1e-10);
        }

        // literal initial field -> jx = e^{-2y^2}, jy = 0
        let field = initial_wavefunction(g, InitialForm::GaussianAmplitude);
        let (jx, jy) = momentum(&field).unwrap();
        for l in 0..g.ny_points() {
            let y = g.y(l);
            for k in 0..g.nx_points() {
                let idx = g.index(k, l);
                assert!((jx[idx] - (-2.0 * y * y).exp()).abs() < 1e-9);
                assert!(jy[idx].abs() < 1e-9);
            }
        }
    }

    #[test]
    fn classical_evolution_basics() {
        let g = grid();
        let field = initial_wavefunction(g, InitialForm::GaussianAmplitude);

        // t = 0 is the identity
        let same = classical_evolve(&field, 0.0);
        for (a, b) in same.values().iter().zip(field.values()) {
            assert!((a - b).norm() < 1e-12);
        }

        // plane wave e^{iqx} picks up exactly e^{-i q^2 t / 2}
        let q = 3.0;
        let raw: Vec<Complex64> = (0..g.num_points())
            .map(|i| Complex64::from_polar(1.0, q * g.x(i % g.nx_points())))
            .collect();
        let wave = WaveField::from_samples(g, raw).unwrap();
        let t = 0.37;
        let evolved = classical_evolve(&wave, t);
        let expected = Complex64::from_polar(1.0, -q * q * t / 2.0);
        for (a, b) in evolved.values().iter().zip(wave.values()) {
            assert!((a - expected * b).norm() < 1e-12);
        }

        // unit norm preserved
        let t = PI / 2.0;
        let evolved = classical_evolve(&field, t);
        let norm: f64 = evolved.values().iter().map(|v| v.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mass_is_conserved_classically() {
        let g = grid();
        let field = initial_wavefunction(g, InitialForm::GaussianAmplitude);
        let m0 = total_mass(g, &density(&field));
        for t in [PI / 4.0, PI / 2.0] {
            let evolved = classical_evolve(&field, t);
            let m = total_mass(g, &density(&evolved));
            assert!((m - m0).abs() < 1e-10);
        }
    }

    #[test]
    fn pearson_examples() {
        let a: Vec<f64> = (0..100).map(|i| (i as f64 * 0.1).sin()).collect();
        assert!((pearson_r(&a, &a).unwrap() - 1.0).abs() < 1e-12);

        let neg: Vec<f64> = a.iter().map(|v| -v).collect();
        assert!((pearson_r(&a, &neg).unwrap() + 1.0).abs() < 1e-12);

        let constant = vec![2.5; 100];
        assert!(matches!(
            pearson_r(&a, &constant),
            Err(Error::ConstantField { side: "second" })
        ));

        // against the brute-force covariance formula
        let b: Vec<f64> = (0..100)
            .map(|i| (i as f64 * 0.1).sin() + 0.01 * ((i * 7919 % 100) as f64))
            .collect();
        let n = 100.0;
        let ma = a.iter().sum::<f64>() / n;
        let mb = b.iter().sum::<f64>() / n;
        let cov: f64 = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma) * (x - ma)).sum();
        let vb: f64 = b.iter().map(|y| (y - mb) * (y - mb)).sum();
        let expected = cov / (va.sqrt() * vb.sqrt());
        assert!((pearson_r(&a, &b).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn csv_format() {
        let g = GridSpec::new(1, 1);
        let field = initial_wavefunction(g, InitialForm::GaussianAmplitude);
        let obs = FlowObservables::from_field(&field).unwrap();
        let mut buf = Vec::new();
        obs.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,y,rho,jx,jy");
        assert_eq!(lines.len(), 1 + g.num_points());
        assert_eq!(lines[1].split(',').count(), 5);
    }
}
