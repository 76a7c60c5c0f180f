//! Multipartite entangled states from identical particles under sLOCC post-selection.
//!
//! Bosons and fermions are handled by one code path through the η-determinant
//! (permanent for `η = +1`, determinant for `η = −1`).

pub mod catalog;
pub mod detlike;
pub mod error;
pub mod optimize;
pub mod oracle;
pub mod scheme;
pub mod slocc;
pub mod verify;

pub use detlike::{eta_det, Amplitude, ComplexMatrix, Statistics};
pub use error::{Error, Result};
pub use scheme::{DeformedQubit, Scheme, Spin};
pub use slocc::{fidelity, make_target, post_select, PostSelectedState, SpinConfig, TargetClass};
