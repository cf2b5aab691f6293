//! Exact and approximate convex geometry on polytopes: hulls, mixed volumes,
//! isoperimetric ratios of facets, Bezout-type forms and Wulff-shape
//! perturbation families.

pub mod bezout;
pub mod cli;
pub mod error;
mod hull;
pub mod io;
pub mod isoperimetric;
pub mod linalg;
pub mod mixed;
pub mod polytope;
pub mod scalar;
pub mod search;
pub mod special;
pub mod wulff;

pub use error::{Error, Result};
pub use polytope::{convex_hull, vertex_enumeration, AffineMap, Facet, HPolytope, VPolytope, Vector};
pub use scalar::{ApproxScalar, Scalar};
