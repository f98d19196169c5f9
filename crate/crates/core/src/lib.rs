//! Continuous tool-path planning for sparse-infill 3D printing.
//!
//! The pipeline converts a stack of per-layer polygons into one continuous,
//! crossover-free print path per layer component:
//!
//! 1. Project all layers, take the convex hull, and mesh it ([`complex::mesh_region`]).
//! 2. Rewrite the mesh with the Euler transformation so every vertex of the
//!    1-skeleton has even degree ([`euler::euler_transform`]).
//! 3. Per layer, clip the transformed complex to the layer region, patch the
//!    cut back to an Eulerian complex, and add a support perimeter along
//!    unprinted boundary arcs ([`slicing`]).
//! 4. Decompose each layer graph into a tree of concentric circuits and walk
//!    it with edge-transition restrictions that rule out crossovers
//!    ([`toolpath`]).
//! 5. Emit SVG / G-code ([`io`]).
//!
//! All coordinates are millimeters, +y up; clockwise rings have negative
//! signed area.

pub mod complex;
pub mod config;
pub mod euler;
pub mod geometry;
pub mod io;
pub mod par;
pub mod pipeline;
pub mod slicing;
pub mod toolpath;

pub use config::{JobConfig, MeshScheme, PrintConfig, Tolerance};
pub use geometry::{Point2, Polygon, Region};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Error type for all planning operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("complex is not ready for the Euler transformation: {0}")]
    NotEulerReady(String),

    #[error("offset distance {0} changes face geometry (first event at {1}); use the relaxed transform")]
    OffsetChangesGeometry(f64, f64),

    #[error("graph is not Eulerian: vertex {0} has odd degree {1}")]
    NotEulerian(usize, usize),

    #[error("internal invariant violation: {0}")]
    InternalInvariantViolation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("IO error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
