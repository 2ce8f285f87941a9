//! Empirical mode decomposition for vector-valued signals.
//!
//! A vector-valued signal is a curve `F: [0,T] -> R^d` sampled on a uniform
//! grid. Decomposing such a curve into intrinsic mode functions (IMFs) needs
//! a notion of local extrema, which is ill-defined in more than one
//! dimension. Both methods implemented here recover it by projecting the
//! curve onto many quasi-uniform unit directions and locating the extrema of
//! each 1-D projection:
//!
//! * **MEMD** interpolates the multi-dimensional envelopes directly, one
//!   cubic spline per channel through the curve values at the projected
//!   extrema ([`envelope::envelopes_memd`]).
//! * **VEMD** interpolates the envelopes in the projected 1-D space and
//!   lifts them back to `R^d` by minimizing a discrete Sobolev seminorm
//!   under projection and interpolation constraints
//!   ([`backprojection::solve_backprojection`]).
//!
//! The ensemble average of the per-direction envelope means drives the
//! classic sifting iteration ([`sifting::decompose`]). Projection directions
//! come from Hammersley points mapped area-preservingly onto the sphere
//! ([`direction::direction_set`]).
//!
//! All numeric kernels are generic over the scalar type through the
//! [`Scalar`] trait; `f64` aliases are exported at the crate root.

pub mod backprojection;
pub mod banded;
pub mod direction;
pub mod envelope;
pub mod error;
pub mod fixture;
pub mod metrics;
pub mod scalar;
pub mod sifting;
pub mod signal;

pub use crate::error::{Result, VemdError};
pub use crate::scalar::Scalar;

pub use crate::direction::{direction_set, DirectionSet, HammersleyPoint};
pub use crate::envelope::EnvelopePair;
pub use crate::metrics::{prd, Method, SweepResult};
pub use crate::sifting::{decompose, Decomposition, SdThresholds, SiftConfig};
pub use crate::signal::{ExtremaSet, VectorSignal};

/// Double-precision vector signal, the default working type.
pub type VectorSignal64 = VectorSignal<f64>;
/// Double-precision direction set.
pub type DirectionSet64 = DirectionSet<f64>;
/// Double-precision sifting configuration.
pub type SiftConfig64 = SiftConfig<f64>;
/// Double-precision decomposition result.
pub type Decomposition64 = Decomposition<f64>;

/// Single-precision vector signal.
pub type VectorSignal32 = VectorSignal<f32>;
/// Single-precision direction set.
pub type DirectionSet32 = DirectionSet<f32>;
