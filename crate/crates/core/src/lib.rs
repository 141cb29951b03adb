//! Spectra of deformed-oscillator position operators and their Harper-type
//! relatives.
//!
//! The crate builds the finite tridiagonal matrices, solves them with Sturm
//! bisection (dense cyclic Jacobi as an oracle and for periodic closures),
//! checks the phase-basis map onto Harper's operator, and extracts band
//! structure, butterfly sweeps and edge-state diagnostics.

pub mod bands;
pub mod builders;
pub mod edge;
pub mod eigen;
pub mod error;
pub mod fractal;
pub mod operator;
pub mod output;
pub mod params;
pub mod sweep;
pub mod unitary;

/// Library version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use bands::{detect_bands, total_bandwidth, Band, BandSet, GapThreshold, InGap};
pub use builders::OperatorKind;
pub use edge::{edge_state_scan, EdgeScanConfig, EdgeStateReport, EdgeSuspect};
pub use eigen::{EigenPair, Spectrum};
pub use error::{Error, Result};
pub use operator::{Boundary, BoundaryKind, TridiagonalOperator};
pub use params::{DeformationParams, Omega, Truncation};
pub use sweep::{butterfly_sweep, sweep_grid, ButterflyResult, GridPoint};
pub use unitary::{ResidualReport, TransformMatrix};
