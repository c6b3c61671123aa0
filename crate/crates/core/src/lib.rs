//! Numerical laboratory for 2D fully nonlinear wave equations
//! □u = N_{αβμν} ∂_α∂_β u ∂_μ∂_ν u with null-form coefficients.
//!
//! The crate is organized bottom-up:
//!
//! * [`nullform`]: coefficient tensors, symmetrization, light-cone null tests,
//!   lifting of quasilinear forms, and the good/bad derivative frame.
//! * [`grid`], [`spectral`]: periodic grids and Fourier-multiplier calculus.
//! * [`transform`]: quasilinear → fully nonlinear initial-data constructions.
//! * [`solver`]: RK4 time stepping with a pointwise fixed-point solve for ∂ₜ²u.
//! * [`diagnostics`]: vector-field energies, ghost-weight energy, weighted
//!   decay ratios and growth-exponent fits.
//! * [`experiment`]: configuration-driven scenario runner and CSV tables.
//! * [`io`]: text and binary file formats.
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`, which is what the experiment layer uses.

pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod io;
pub mod nullform;
pub mod scalar;
pub mod solver;
pub mod spectral;
pub mod transform;

pub use error::{Error, Result};
pub use grid::{GridField, PeriodicGrid};
pub use nullform::{
    frame_decompose, ConeDirection, FrameSplit, Mat3, NullFormTensor, QuasiNullForm,
};
pub use scalar::Real;
pub use solver::{SolverConfig, WaveSolver, WaveState};
pub use spectral::Spectral;
pub use transform::{FullyNonlinearIVP, QuasilinearIVP};

pub type NullFormTensor64 = NullFormTensor<f64>;
pub type QuasiNullForm64 = QuasiNullForm<f64>;
pub type PeriodicGrid64 = PeriodicGrid<f64>;
pub type GridField64 = GridField<f64>;
pub type WaveState64 = WaveState<f64>;
pub type SolverConfig64 = SolverConfig<f64>;
pub type WaveSolver64 = WaveSolver<f64>;
pub type FullyNonlinearIVP64 = FullyNonlinearIVP<f64>;
pub type QuasilinearIVP64 = QuasilinearIVP<f64>;
pub type NullFormTensor32 = NullFormTensor<f32>;
pub type GridField32 = GridField<f32>;
pub type WaveSolver32 = WaveSolver<f32>;
