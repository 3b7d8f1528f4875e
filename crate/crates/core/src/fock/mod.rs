//! Truncated fermionic Fock space on a rapidity grid and the operators built
//! on it.

pub mod assemble;
pub mod basis;
pub mod car;
pub mod grid;
pub mod norms;
pub mod operator;
pub mod sparse;
pub mod vector;

pub use assemble::{assemble_observable, AssembledObservable, Cutoffs};
pub use basis::FockSpace;
pub use car::{car_residuals, CarResiduals};
pub use grid::RapidityGrid;
pub use norms::{closability_sum, qomega_norm, restricted_norm, spectral_norm, ClosabilityReport, PowerIteration, QOmegaNorm, SeriesVerdict};
pub use operator::{field, FieldKind, TruncatedFockOperator};
pub use sparse::SparseBlock;
pub use vector::FockVector;
