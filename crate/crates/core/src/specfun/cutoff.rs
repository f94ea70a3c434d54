//! Boundary-layer geometry and the smooth cutoff built from it.
//!
//! A [`LayerSpec`] describes a two-radius boundary strip: an inner width δ*
//! where the cutoff is identically 1 and an outer width δ beyond which it is
//! identically 0, plus the constant c that scales the viscosity-proportional
//! layer of width c·ν used by the layer-enstrophy diagnostic. The transition
//! is the cubic smoothstep 3s² − 2s³, which is C¹ with derivative magnitude
//! at most 1.5/(δ − δ*) — inside the 2/(δ − δ*) gradient budget the
//! mass-budget estimates require.

use crate::error::{Error, Result};

/// Boundary-layer geometry: inner plateau width, outer support width, and
/// the viscosity multiple for the ν-proportional layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerSpec {
    /// Outer width δ: the cutoff vanishes at distances ≥ δ from the boundary.
    pub delta: f64,
    /// Inner width δ* < δ: the cutoff equals 1 at distances ≤ δ*.
    pub delta_star: f64,
    /// Constant c > 0 scaling the width c·ν layer.
    pub kato_constant: f64,
}

impl LayerSpec {
    /// Validated constructor: requires 0 < δ* < δ and c > 0.
    pub fn new(delta: f64, delta_star: f64, kato_constant: f64) -> Result<LayerSpec> {
        if !(delta.is_finite() && delta_star.is_finite() && kato_constant.is_finite()) {
            return Err(Error::InvalidLayer {
                detail: "layer widths must be finite".into(),
            });
        }
        if !(delta_star > 0.0 && delta_star < delta) {
            return Err(Error::InvalidLayer {
                detail: format!("need 0 < delta_star < delta, got delta_star = {delta_star}, delta = {delta}"),
            });
        }
        if !(kato_constant > 0.0) {
            return Err(Error::InvalidLayer {
                detail: format!("kato constant must be positive, got {kato_constant}"),
            });
        }
        Ok(LayerSpec {
            delta,
            delta_star,
            kato_constant,
        })
    }
}

/// Smooth cutoff φ_δ as a function of distance to the boundary: 1 on the
/// inner plateau (distance ≤ δ*), 0 outside the layer (distance ≥ δ), and a
/// monotone cubic-smoothstep transition in between.
///
/// Errors if the distance is negative or non-finite. The layer itself is
/// validated at construction, so δ* < δ always holds here.
pub fn smooth_cutoff(layer: &LayerSpec, distance_to_boundary: f64) -> Result<f64> {
    if !distance_to_boundary.is_finite() || distance_to_boundary < 0.0 {
        return Err(Error::Domain {
            op: "smooth_cutoff",
            detail: format!("distance {distance_to_boundary} must be finite and nonnegative"),
        });
    }
    Ok(cutoff_value(layer, distance_to_boundary))
}

/// Unchecked cutoff evaluation for internal quadrature loops.
#[inline]
pub(crate) fn cutoff_value(layer: &LayerSpec, distance: f64) -> f64 {
    if distance <= layer.delta_star {
        1.0
    } else if distance >= layer.delta {
        0.0
    } else {
        // Normalized gap s runs 1 → 0 as the distance runs δ* → δ.
        let s = (layer.delta - distance) / (layer.delta - layer.delta_star);
        3.0 * s * s - 2.0 * s * s * s
    }
}
