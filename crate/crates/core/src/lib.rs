//! Entropic uncertainty relations with a quantum memory that hovers outside a
//! Garfinkle–Horowitz–Strominger dilaton black hole.
//!
//! Alice measures one of two qubit observables; Bob keeps the other half of a
//! correlated pair as memory while the Unruh channel at the Hawking
//! temperature acts on it. [`bounds::full_report`] assembles the
//! Maassen–Uffink, Berta and Adabi bounds plus the key-rate bound, and
//! [`sweep`] evaluates them over `(p, T)` grids for the three state families.

pub mod bounds;
pub mod channel;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod random;
pub mod state;
pub mod sweep;
pub mod validate;

pub use bounds::{full_report, UncertaintyReport};
pub use channel::{
    hawking_temperature, unruh_channel, BlackHoleParams, KrausChannel, UnruhChannel,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenSystem, Subsystem};
pub use measurement::{pauli, Observable, ObservableSpec, PauliAxis};
pub use state::{CorrelationVector, DensityMatrix, Dims};
pub use sweep::{OutputFormat, ResultRow, StateFamily, SweepConfig};
