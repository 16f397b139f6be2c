//! Exactly solvable pair of coupled Razavy double wells.
//!
//! Each well is truncated to its two quasi-exact levels, giving a two-qubit
//! system whose spectrum, dynamics, orthogonality times, speed limits and
//! concurrence are available in closed form. The [`oracle`] module holds the
//! independent numerical checks for every closed form.
//!
//! All numerics are generic over [`Real`]; the `*F64` aliases below are the
//! types used by the command-line tool.

#![allow(clippy::needless_range_loop, clippy::excessive_precision)]

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod optimize;
pub mod oracle;
pub mod potential;
pub mod quadrature;
pub mod scalar;
pub mod spectrum;
pub mod sweep;
pub mod wavepacket;

pub use dynamics::{
    correlation, orthogonality_time, speed_limit, Method, OrthogonalityResult, SearchOptions,
    SpeedLimit,
};
pub use entanglement::{
    cav_closed_form, concurrence_at, concurrence_average, concurrence_from_amplitudes,
    concurrence_initial, AverageOptions, ConcurrenceReport,
};
pub use error::{Error, Result};
pub use potential::{
    eigenfunction, overlap_gamma, potential, single_well_energies, PotentialParams,
    SingleWellSolution,
};
pub use scalar::Real;
pub use spectrum::{coupled_eigensystem, energy_matrix, CoupledSpectrum};
pub use wavepacket::{
    basis_amplitudes, preset, psi_grid, BasisAmplitudes, Field, GridSpec, Preset, Wavepacket,
};

pub type PotentialParamsF64 = PotentialParams<f64>;
pub type SingleWellF64 = SingleWellSolution<f64>;
pub type CoupledSpectrumF64 = CoupledSpectrum<f64>;
pub type WavepacketF64 = Wavepacket<f64>;
pub type FieldF64 = Field<f64>;
pub type FieldF32 = Field<f32>;
pub type OrthogonalityF64 = OrthogonalityResult<f64>;
pub type SpeedLimitF64 = SpeedLimit<f64>;
pub type ConcurrenceReportF64 = ConcurrenceReport<f64>;
