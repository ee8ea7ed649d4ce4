//! Rational self-maps of the projective plane in exact arithmetic.

mod gcd;
mod map;
mod poly;
mod stability;
mod topdeg;

pub use map::{degree_sequence, integer_terms, HomMap, MapSpec, DEFAULT_TERM_CAP};
pub use poly::{Exp, HomPoly};
pub use stability::{stability_report, StabilityReport};
pub use topdeg::{topological_degree, TopDegreeMode, TopologicalDegree};
