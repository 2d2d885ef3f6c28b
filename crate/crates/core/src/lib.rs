//! Sampled-data models of piecewise-linear switching cycles and their
//! continuous-time surrogates.
//!
//! The pipeline runs from a [`SwitchingCycle`] through its exact one-period
//! map to a [`DiscreteBaseline`], then to a [`ContinuousSurrogate`] built
//! with the principal matrix logarithm, a truncated BCH series, state-space
//! averaging, or (for 2×2 maps with a negative eigenvalue) a three-state real
//! lift.

pub mod bch;
pub mod catalog;
pub mod error;
pub mod freqsweep;
pub mod pipeline;
pub mod pwlmap;
pub mod reconstruct;
pub mod smallmat;
pub mod transfer;
pub mod two_by_two;

pub use bch::BchOrder;
pub use error::{Error, Result};
pub use freqsweep::{ComparisonRow, FrequencyGrid, ModelPoint, ProbeOutcome};
pub use pipeline::{ConverterModel, InjectionChannel, SurrogateRequest};
pub use pwlmap::{PoincareMap, SubintervalModel, SwitchingCycle};
pub use reconstruct::{ContinuousSurrogate, DiscreteBaseline, Method};
pub use smallmat::RealMatrix;
pub use transfer::TransferMatrix;
pub use two_by_two::{EigenPair, RealLift, SignSymmetricMap};
