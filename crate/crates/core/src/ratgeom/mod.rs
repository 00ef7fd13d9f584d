//! Exact linear algebra, vertex reduction, face enumeration and a simplex LP
//! solver, generic over [`Scalar`](crate::scalar::Scalar).
//!
//! Everything here is pure; values are immutable once built.

pub mod faces;
pub mod hull;
pub mod linalg;
pub mod lp;
mod vector;

pub use faces::{enumerate_faces, FaceDescriptor};
pub use hull::{in_convex_hull, is_affinely_independent, origin_in_relative_interior, reduce_to_vertices};
pub use lp::{optimal_face_is_singleton, solve_lp, Bound, LpProblem, LpSolution, LpStatus, Sense, SingletonCheck};
pub use vector::{sort_dedup, RatVector, Vector};
