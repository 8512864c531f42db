//! Numerics for catenoids (minimal rotation hypersurfaces) and Clifford
//! minimal hypersurfaces in the space forms of curvature c.
//!
//! - [`spaceform`]: warp functions of the constant-curvature half-space
//!   metric and Clifford second-fundamental-form data.
//! - [`profile`]: generating-curve quadrature (c <= 0) and the arclength
//!   profile ODE shared by all curvatures.
//! - [`otsuki`]: the support-function ODE of spherical rotation minimal
//!   hypersurfaces, its oscillation period, and the closed-curve search.
//! - [`simons`]: principal curvatures, the axial Laplacian, the elliptic
//!   residual of |A|, and the E-term decomposition on raw tensor data.
//! - [`cli`]: deterministic CSV/SVG/JSON export behind the `catenoid` binary.

pub mod cli;
pub mod error;
pub mod num;
pub mod otsuki;
pub mod profile;
pub mod simons;
pub mod spaceform;

pub use error::{Error, Result};
