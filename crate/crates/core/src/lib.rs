//! Holomorphic and meromorphic extendibility of boundary data on bounded,
//! multiply connected planar domains.
//!
//! Given samples of `f` on the boundary curves, [`poles::detect`] decides
//! whether `f` is the boundary value of a meromorphic function with at most
//! `N` poles in the domain, and where those poles are. [`argument`] computes
//! winding numbers and checks the argument-principle bound `W(Pf+Q) >= -N`
//! on random rational probes.

pub mod argument;
pub mod cauchy;
pub mod error;
pub mod geometry;
pub mod poles;
pub mod poly;

pub use cauchy::{BoundarySamples, MomentSequence, ProbeConfig};
pub use error::{Error, Result};
pub use geometry::{BoundaryCurve, DomainBoundary, Orientation, RegionTag};
pub use poles::{detect, DetectConfig, ExtensionReport, Verdict};
pub use poly::Polynomial;

pub use num_complex::Complex64;
