//! Statevector simulation of a 2D compressible potential flow with
//! circuit-depth optimizations: a truncated Fourier transform with
//! single-qubit phase compensation, and momentum-operator gate truncation,
//! plus the error-scaling and hardware-noise trade-off analyses built on
//! top of them.
//!
//! The crate is organized in layers:
//!
//! * [`state`] — dense statevector and gate kernels (rayon-parallel above a
//!   size threshold when the `parallel` feature is on, sequential
//!   otherwise);
//! * [`circuit`] — typed gate list, cost metrics, executor;
//! * [`qft`] — transform builders and the truncation/compensation scheme;
//! * [`momentum`] — wavenumber operator, Rz/ZZ decomposition, truncation
//!   rules, per-axis and full evolution steps;
//! * [`fluid`] — grid, wave-field encoding, observables, classical spectral
//!   reference, correlation;
//! * [`noise`] — stochastic Pauli gate noise, hardware-error accumulation,
//!   scaling curves, equilibrium analysis;
//! * [`validate`] — the cross-module invariant suite behind `qflow
//!   validate`.

pub mod circuit;
pub mod error;
pub mod fluid;
pub mod momentum;
pub mod noise;
pub mod qft;
pub mod state;
pub mod validate;

pub use circuit::{Circuit, GateOp, GateStats};
pub use error::{Error, Result};
pub use fluid::{FlowObservables, GridSpec, InitialForm, WaveField};
pub use momentum::{EvolutionTime, PauliDecomposition, TruncationPolicy, TruncationReport};
pub use noise::{NoiseModel, TradeoffCurves};
pub use qft::AqftConfig;
pub use state::Statevector;
