//! Special functions and quadrature shared by every model flow: Bessel
//! functions of the first kind with their positive zeros, the error
//! function pair, Gauss–Legendre rules (simple and composite, optionally
//! graded toward an endpoint), the boundary-layer cutoff, and cubic-spline
//! interpolation for tabulated profiles.

pub mod bessel;
pub mod cutoff;
pub mod erf;
pub mod interp;
pub mod quad;

pub use bessel::{bessel_j, j1_zeros, BesselTable};
pub use cutoff::{smooth_cutoff, LayerSpec};
pub use erf::{erf, erfc};
pub use interp::CubicSpline;
pub use quad::{composite_gauss, gauss_legendre, Grading, QuadratureRule};
