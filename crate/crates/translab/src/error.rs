//! Error types shared by all modules.

use thiserror::Error;

/// Crate-wide error enumeration.
#[derive(Debug, Error)]
pub enum Error {
    /// A chart has linearly dependent coordinate tangents somewhere.
    #[error("degenerate chart: {0}")]
    DegenerateChart(String),

    /// A derivative or field evaluated to a non-finite number.
    #[error("non-finite field value in {0}")]
    NonFiniteField(String),

    /// A parameter domain touches or leaves the admissible region.
    #[error("domain error: {0}")]
    DomainError(String),

    /// An invalid parameter outside domain concerns.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Adaptive step control underflowed during ODE integration.
    #[error("ODE integration failure at s={s}: {reason}")]
    IntegrationFailure { s: f64, reason: String },

    /// A catenoid branch reached the rotation axis, which indicates a sign
    /// error in the profile equations.
    #[error("profile hit the axis (r -> 0) at s={0}")]
    SingularityError(f64),

    /// Newton iteration did not reach the requested tolerance.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        /// Last iterate, so callers can inspect or restart.
        last: Box<crate::zoo::pde::HeightField>,
    },

    /// Too few samples inside the requested fit window.
    #[error("window error: {0}")]
    WindowError(String),

    /// A field restriction left no admissible nodes.
    #[error("empty region: {0}")]
    EmptyRegion(String),

    /// Mesh orientation is inconsistent across an edge.
    #[error("non-orientable mesh: {0}")]
    NonOrientable(String),

    /// An edge bounds more than two faces.
    #[error("non-manifold edge ({0}, {1})")]
    NonManifoldEdge(usize, usize),

    /// The requested level does not intersect the surface.
    #[error("no level set at height {0}")]
    NoLevelSet(f64),

    /// Curve shortening produced a crossing that step halving could not fix.
    #[error("self-intersection during curve flow at t={0}")]
    SelfIntersection(f64),

    /// Enclosed area collapsed below threshold without normalization.
    #[error("curve collapsed at t={0}")]
    Collapsed(f64),

    /// A constructed cap violates one of its contract properties.
    #[error("cap property violation: {0}")]
    PropertyViolation(String),

    /// A boundary loop is not planar perpendicular to the translation axis.
    #[error("non-planar boundary loop {0}")]
    NonPlanarBoundary(usize),

    /// Nested caps intersect even after shrinking sigma.
    #[error("cap overlap between loops {0} and {1}")]
    CapOverlap(usize, usize),

    /// Degree counting requires a closed mesh.
    #[error("open mesh: {0} boundary loops present")]
    OpenMesh(usize),

    /// The mesh does not intersect any sweep plane.
    #[error("empty sweep: mesh misses every plane offset")]
    EmptySweep,

    /// File or serialization problem.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed input file.
    #[error("parse error: {0}")]
    Parse(String),
}
