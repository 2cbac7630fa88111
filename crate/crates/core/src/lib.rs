//! Enumeration of GL₂(O)-classes of perfect binary Hermitian forms over
//! imaginary quadratic fields Q(√d), and the ideal hyperbolic polytopes
//! they descend to.
//!
//! The pipeline per field: exact arithmetic in Q(√d) ([`qfield`]), binary
//! Hermitian forms and the trace pairing ([`hermitian`]), certified
//! short-vector enumeration ([`enumerate`]), the perfect-form class graph
//! ([`voronoi`]), descent to ideal polytopes and combinatorial
//! classification ([`polytope`]), and report generation ([`pipeline`]).

pub mod canon;
pub mod dd;
pub mod enumerate;
pub mod error;
pub mod hermitian;
pub mod linalg;
pub mod pipeline;
pub mod polytope;
pub mod qfield;
pub mod voronoi;

pub use enumerate::MinimalData;
pub use error::{Error, Result};
pub use hermitian::{ColumnVector, FormSpaceVector, HermitianForm, UnimodularMatrix};
pub use pipeline::{RunManifest, TessellationReport};
pub use polytope::{CombinatorialType, Cusp, IdealPolytope, PolytopeKind};
pub use qfield::{make_context, AlgebraicNum, FieldContext, IntegralIdeal};
pub use voronoi::{PerfectForm, PerfectFormGraph, Stabilizer};
