//! Exact Navier–Stokes and Euler model flows on the unit disk and a
//! channel shear layer, together with the boundary-layer diagnostics and
//! viscosity-rate machinery used to study how the viscous solutions
//! approach their inviscid limits.
//!
//! The crate is organized bottom-up:
//!
//! - [`specfun`]: Bessel functions and their zeros, the error function,
//!   Gauss–Legendre quadrature, boundary-layer cutoffs, splines.
//! - [`disk`]: circularly symmetric disk flows expanded in Bessel modes.
//! - [`shear`]: planar shear flows solved by heat-kernel convolution.
//! - [`algebra`]: the antisymmetric-matrix correspondence used by the
//!   boundary-pairing identities.
//! - [`diagnostics`]: layer enstrophy and mass, boundary pairings, norm
//!   scans, and the mass budget for vortex-sheet data.
//! - [`rates`]: viscosity sweeps, sup-in-time L² errors, and power-law
//!   rate fits.
//!
//! All fallible operations return [`error::Result`], whose error type
//! spells out which contract was violated rather than panicking.

pub mod algebra;
pub mod diagnostics;
pub mod disk;
pub mod error;
pub mod rates;
pub mod shear;
pub mod specfun;

pub use error::{Error, Result};

/// Library version, re-exported so downstream artifacts can record the
/// exact code that produced them.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Caps the global worker-thread pool at `threads` (minimum 1). Call once,
/// before any parallel work starts; later calls are ignored by the pool.
/// The command-line front end wires this to an environment variable so
/// runs can be pinned to a fixed thread count for reproducibility.
pub fn set_thread_cap(threads: usize) {
    let threads = threads.max(1);
    // Ignore the error: the pool can only be built once per process, and a
    // second configuration attempt just keeps the first.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
}
