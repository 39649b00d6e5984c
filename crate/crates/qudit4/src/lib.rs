//! Separability and entanglement analysis for four-level quantum states.
//!
//! The crate models a two-qubit (equivalently spin-3/2) system: density
//! matrices built from a diagonal spectrum, unitary rotations applied to them,
//! and the standard entanglement diagnostics (partial-transpose spectrum,
//! negativity, concurrence). On top of that sit parameter sweeps, boundary
//! searches between separable and entangled regions, and a report documenting
//! where the published formulas this work follows disagree with direct
//! computation.
//!
//! Modules:
//! - [`linalg`]: fixed-size complex matrices and a Hermitian eigensolver.
//! - [`states`]: density matrices, partial transpose, X-states, Werner states.
//! - [`unitaries`]: rotation constructions and their validation.
//! - [`measures`]: negativity, concurrence, separability verdicts.
//! - [`scan`]: grid sweeps, boundary bisection, the Werner pipeline, CSV.
//! - [`errata`]: measured evidence for defects in the published formulas.

pub mod errata;
pub mod linalg;
pub mod measures;
pub mod scan;
pub mod states;
pub mod unitaries;

pub use linalg::{ComplexMatrix2, ComplexMatrix4, LinalgError};
pub use measures::{EntanglementReport, InequalityReport, MeasureError};
pub use scan::{Family, GridAxis, ScanError, ScanRow, ScanSpec};
pub use states::{DensityMatrix4, Labeling, Spectrum4, StateError, XState};
pub use unitaries::{Unitary4, UnitaryError, UnitaryParams};
