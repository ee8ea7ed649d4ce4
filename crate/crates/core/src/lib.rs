//! Exact degree-growth analysis for dominant rational self-maps of surfaces.
//!
//! The crate is organised around four engines:
//!
//! * [`classlat`]: exceptional primes over a base surface and the class
//!   calculus on finitely supported classes (pairing, incarnations,
//!   truncation diagnostics, canonical pairing).
//! * [`toric`]: smooth complete fans, monomial maps, holomorphic lifts by
//!   star subdivision, exact pullback/pushforward and nef/psef tests.
//! * [`ratmap`]: homogeneous polynomial maps of the projective plane:
//!   composition with common-factor removal, degree sequences, stability,
//!   topological degree.
//! * [`spectral`]: spectral radii on nef cones along model towers,
//!   eigenclass approximants, asymptotic fits and recurrence detection.
//!
//! All intersection-theoretic arithmetic is exact over the rationals; floating
//! point appears only inside power iteration and fitting.

pub mod classlat;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod provenance;
pub mod rational;
pub mod ratmap;
pub mod spectral;
pub mod toric;
pub mod upoly;

pub use error::{Error, Result};
pub use provenance::Provenance;
pub use rational::Q;
