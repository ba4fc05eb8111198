//! Triangle-mesh topology and the surgery pipeline: Euler characteristic and
//! genus, level-curve extraction, curve shortening flow, spherical-cap
//! construction, end capping, and Gauss-map degree counting.

pub mod cap;
pub mod curve;
pub mod degree;
pub mod flow;
pub mod io;
pub mod level;
pub mod mesh;
pub mod shapes;

pub use cap::{build_cap, cap_ends, CapSpec, Pole};
pub use curve::PlanarCurve;
pub use degree::gauss_degree;
pub use mesh::TriMesh;
