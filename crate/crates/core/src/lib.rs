//! Simulation and numerical-verification engine for convex hulls of random
//! points sampled on the boundary of a simple polytope.
//!
//! The crate is organized around five subsystems:
//!
//! * [`polytope`] — simple polytopes with face lattice, flags, normal cones;
//! * [`sampler`] — reproducible uniform sampling on the boundary;
//! * [`hull`] — n-dimensional convex hull with coplanar-facet merging,
//!   facet classification against the source polytope and the missed-volume
//!   decomposition;
//! * [`asymptotics`] — evaluation of the constrained box integrals behind the
//!   facet-count and volume scaling laws, by direct quadrature, importance
//!   sampling and closed-form leading terms;
//! * [`harness`] — experiment plans over N-grids with replications, scaling
//!   fits and machine-readable reports.
//!
//! Brute-force reference implementations live in [`oracle`] and the runtime
//! check suites in [`verify`].

pub mod asymptotics;
mod error;
pub mod harness;
pub mod hull;
pub mod linalg;
pub mod oracle;
pub mod polytope;
pub mod sampler;
pub mod special;
pub mod stats;
pub mod verify;

pub use error::{ClassifyError, EvalError, GeometryError, HullError, PlanError};
pub use hull::{classify_facets, convex_hull, volume_decomposition, FacetClassification, HullMesh};
pub use polytope::{
    builtin, from_vertices, make_cube, make_prism, make_simplex, Hyperplane, Point, PolytopeJson,
    SimplePolytope,
};
pub use sampler::{sample_boundary, BoundaryPoint, SampleBatch};
