//! Uncertainty of quantum channels: total, quantum and classical parts of
//! the two-parameter modified generalized variance, the entanglement
//! fidelity trade-offs they satisfy, and closed forms for standard
//! qubit channels and two-qubit state families.

pub mod channels;
pub mod closed_forms;
pub mod error;
pub mod infotheory;
pub mod linalg;
pub mod schema;
pub mod states;
pub mod sweep;
pub mod uncertainty;
pub mod verify;

pub use channels::KrausChannel;
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use states::{BlochQubit, DensityMatrix, PureState};
pub use uncertainty::{AlphaBeta, UncertaintyTriple};
