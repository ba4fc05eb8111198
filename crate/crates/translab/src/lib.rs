//! Numerical laboratory for translating solitons of the mean curvature flow
//! in Euclidean 3-space.
//!
//! A surface is a *translator* when its scalar mean curvature satisfies
//! `H = -<v, xi>` for a fixed unit direction `v` and unit normal `xi`.  The
//! crate constructs the classical examples (grim reaper and grim hyperplane,
//! translating paraboloid and catenoids, graphical translators), evaluates
//! the differential identities that hold on any translator to discretization
//! accuracy, and runs topology and symmetry procedures on triangle meshes:
//! spherical-cap surgery, Gauss-map degree counting, and Alexandrov
//! moving-plane sweeps.
//!
//! Modules:
//! - [`chart`]: structured parametric grids and their geometric fields
//!   (metric, second fundamental form, curvatures, covariant derivatives).
//! - [`zoo`]: exemplar generators (closed forms, profile ODE, graph PDE)
//!   and far-field asymptotic fitting.
//! - [`verify`]: identity residual suites, convergence orders, reports.
//! - [`topo`]: triangle meshes, level curves, curve shortening flow,
//!   spherical caps, Gauss-map degree.
//! - [`planes`]: discrete moving-plane reflection sweeps.

pub mod chart;
pub mod error;
pub mod planes;
pub mod topo;
pub mod util;
pub mod verify;
pub mod zoo;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
