//! Boundary-layer and weak-convergence functionals.
//!
//! Every operation here evaluates, on the exact disk and channel
//! solutions, one of the quantities that decide whether the vanishing
//! viscosity limit holds: viscosity-weighted enstrophy in ν-thin wall
//! layers, L¹ vorticity mass near the wall, vorticity pairings against
//! fixed test functions (whose limits pick up a vortex-sheet term on the
//! boundary), cumulative boundary vorticity flux, vorticity-mass budgets
//! under smooth cutoffs, L^p norm scans, and the trace-inequality ratio.
//!
//! Everything is a pure function of immutable solutions, so sweeps over ν
//! parallelize without coordination and aggregate deterministically.

mod layer;
mod norms;
mod pairings;

pub use layer::{kato_layer_enstrophy, kato_recommended_modes, layer_l1_mass};
pub use norms::{lp_norm_scan, trace_ratio};
pub use pairings::{
    boundary_flux, mass_budget, sheet_pairing, weak_velocity_pairing, MassBudget,
    ProjectedTestFunction, SheetPairing,
};

use crate::disk::DiskSpectralSolution;
use crate::shear::ShearSolution;
use crate::specfun::bessel;
use std::sync::OnceLock;

/// A viscous solution on either supported geometry, so layer functionals
/// can dispatch without generics leaking into every caller.
#[derive(Debug, Clone)]
pub enum FlowCase {
    /// Spectral solution on the unit disk.
    Disk(DiskSpectralSolution),
    /// Heat-kernel solution in the half-infinite channel.
    Shear(ShearSolution),
}

impl FlowCase {
    /// The viscosity of the wrapped solution.
    pub fn nu(&self) -> f64 {
        match self {
            FlowCase::Disk(s) => s.nu,
            FlowCase::Shear(s) => s.nu,
        }
    }
}

/// First positive zero of J₁, shared by the Bessel member of the test
/// suite.
fn first_j1_zero() -> f64 {
    static ZERO: OnceLock<f64> = OnceLock::new();
    *ZERO.get_or_init(|| {
        bessel::j1_zeros(1)
            .expect("first Bessel zero is computable")
            .zeros[0]
    })
}

/// Radial test function on the closed unit disk with an analytic
/// derivative, used for vorticity pairings and trace-norm ratios.
#[derive(Debug, Clone)]
pub enum TestFunction {
    /// h(r) = Σ b_i r^{2i}.
    RadialPoly {
        /// Short label for reports.
        label: &'static str,
        /// Even-power coefficients b_0..b_n.
        coeffs: Vec<f64>,
    },
    /// h(r) = J₀(j₁ r) with j₁ the first positive zero of J₁ — the ground
    /// vorticity eigenfunction shape, smooth with a sign change inside the
    /// disk.
    GroundBessel,
}

impl TestFunction {
    /// The fixed library spanning the radial H¹ behaviors the pairings
    /// need: constants, growing and flattening polynomials, a
    /// boundary-vanishing bump, and an oscillating Bessel shape.
    pub fn suite() -> Vec<TestFunction> {
        vec![
            TestFunction::RadialPoly {
                label: "1",
                coeffs: vec![1.0],
            },
            TestFunction::RadialPoly {
                label: "r^2",
                coeffs: vec![0.0, 1.0],
            },
            TestFunction::RadialPoly {
                label: "r^4",
                coeffs: vec![0.0, 0.0, 1.0],
            },
            TestFunction::RadialPoly {
                label: "1-r^2",
                coeffs: vec![1.0, -1.0],
            },
            TestFunction::GroundBessel,
        ]
    }

    /// Monomial r^{2n}.
    pub fn even_power(n: usize) -> TestFunction {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        TestFunction::RadialPoly {
            label: "r^2n",
            coeffs,
        }
    }

    /// Display label.
    pub fn label(&self) -> &'static str {
        match self {
            TestFunction::RadialPoly { label, .. } => label,
            TestFunction::GroundBessel => "J0(j1 r)",
        }
    }

    /// h(r).
    pub fn value(&self, r: f64) -> f64 {
        match self {
            TestFunction::RadialPoly { coeffs, .. } => {
                let r2 = r * r;
                let mut acc = 0.0;
                for &b in coeffs.iter().rev() {
                    acc = acc * r2 + b;
                }
                acc
            }
            // Even in r, like every radial profile; J₀ makes that literal.
            TestFunction::GroundBessel => bessel::j0((first_j1_zero() * r).abs()),
        }
    }

    /// dh/dr.
    pub fn derivative(&self, r: f64) -> f64 {
        match self {
            TestFunction::RadialPoly { coeffs, .. } => {
                let r2 = r * r;
                let mut acc = 0.0;
                for (i, &b) in coeffs.iter().enumerate().rev() {
                    if i > 0 {
                        acc = acc * r2 + (2 * i) as f64 * b;
                    }
                }
                acc * r
            }
            TestFunction::GroundBessel => {
                let j = first_j1_zero();
                -j * bessel::j1(j * r)
            }
        }
    }

    /// Trace value h(1).
    pub fn boundary_value(&self) -> f64 {
        self.value(1.0)
    }
}
