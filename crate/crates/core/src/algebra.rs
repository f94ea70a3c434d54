//! Pointwise vorticity algebra.
//!
//! A velocity gradient sampled at a point determines the local vorticity:
//! in 2D the scalar curl ∂₁u² − ∂₂u¹, in 3D the antisymmetric matrix
//! ½(∇u − ∇uᵀ). The 3D matrix form is equivalent to the curl vector
//! through the cross-product matrix C(φ) with C(φ)v = φ×v; this module
//! provides that correspondence and the identities downstream consumers
//! rely on: C(φ)·C(ψ) = 2φ·ψ under the Frobenius pairing, and
//! C(curl u) = ∇u − ∇uᵀ.
//!
//! Antisymmetrization is computed entrywise as (M[i][j] − M[j][i])/2, so
//! the result is antisymmetric exactly in floating point, not merely up
//! to rounding.

use crate::error::{Error, Result};

/// Velocity gradient ∇u sampled at a point, stored dense row-major with
/// entry (i, j) = ∂_j u^i — rows index the velocity component, columns
/// the differentiation direction. Stated bluntly because transposing the
/// convention silently flips every curl sign.
#[derive(Debug, Clone, PartialEq)]
pub enum VelocityGradientSample {
    /// Planar gradient.
    Two([[f64; 2]; 2]),
    /// Spatial gradient.
    Three([[f64; 3]; 3]),
}

impl VelocityGradientSample {
    /// A 2×2 gradient sample with finite entries.
    pub fn two(matrix: [[f64; 2]; 2]) -> Result<VelocityGradientSample> {
        if matrix.iter().flatten().all(|e| e.is_finite()) {
            Ok(VelocityGradientSample::Two(matrix))
        } else {
            Err(Error::Domain {
                op: "VelocityGradientSample",
                detail: "gradient entries must be finite".into(),
            })
        }
    }

    /// A 3×3 gradient sample with finite entries.
    pub fn three(matrix: [[f64; 3]; 3]) -> Result<VelocityGradientSample> {
        if matrix.iter().flatten().all(|e| e.is_finite()) {
            Ok(VelocityGradientSample::Three(matrix))
        } else {
            Err(Error::Domain {
                op: "VelocityGradientSample",
                detail: "gradient entries must be finite".into(),
            })
        }
    }

    /// Spatial dimension of the sample.
    pub fn dimension(&self) -> usize {
        match self {
            VelocityGradientSample::Two(_) => 2,
            VelocityGradientSample::Three(_) => 3,
        }
    }

    /// The vorticity matrix ½(∇u − ∇uᵀ), antisymmetric exactly.
    pub fn antisym_part(&self) -> VelocityGradientSample {
        match self {
            VelocityGradientSample::Two(m) => {
                let mut out = [[0.0; 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        out[i][j] = (m[i][j] - m[j][i]) / 2.0;
                    }
                }
                VelocityGradientSample::Two(out)
            }
            VelocityGradientSample::Three(m) => {
                let mut out = [[0.0; 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        out[i][j] = (m[i][j] - m[j][i]) / 2.0;
                    }
                }
                VelocityGradientSample::Three(out)
            }
        }
    }

    /// The planar scalar curl ∂₁u² − ∂₂u¹.
    pub fn scalar_curl_2d(&self) -> Result<f64> {
        match self {
            VelocityGradientSample::Two(m) => Ok(m[1][0] - m[0][1]),
            VelocityGradientSample::Three(_) => Err(Error::Domain {
                op: "scalar_curl_2d",
                detail: "scalar curl is defined for planar gradients only".into(),
            }),
        }
    }
}

/// A vector in R³ with finite components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeVector(pub [f64; 3]);

impl ThreeVector {
    /// A vector with finite components.
    pub fn new(components: [f64; 3]) -> Result<ThreeVector> {
        if components.iter().all(|c| c.is_finite()) {
            Ok(ThreeVector(components))
        } else {
            Err(Error::Domain {
                op: "ThreeVector",
                detail: "components must be finite".into(),
            })
        }
    }

    /// Euclidean inner product.
    pub fn dot(&self, other: &ThreeVector) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    /// Cross product self × other.
    pub fn cross(&self, other: &ThreeVector) -> ThreeVector {
        let a = &self.0;
        let b = &other.0;
        ThreeVector([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }
}

/// The cross-product matrix C(φ): the unique antisymmetric matrix with
/// C(φ)v = φ×v for every v.
pub fn cross_matrix(phi: &ThreeVector) -> [[f64; 3]; 3] {
    let p = &phi.0;
    [
        [0.0, -p[2], p[1]],
        [p[2], 0.0, -p[0]],
        [-p[1], p[0], 0.0],
    ]
}

/// Inverse of [`cross_matrix`]: the axial vector of an antisymmetric
/// matrix. Rejects input whose symmetric part exceeds 1e-12 in any entry.
pub fn axial_vector(m: &[[f64; 3]; 3]) -> Result<ThreeVector> {
    for i in 0..3 {
        for j in i..3 {
            if (m[i][j] + m[j][i]).abs() > 1e-12 {
                return Err(Error::Domain {
                    op: "axial_vector",
                    detail: format!(
                        "matrix is not antisymmetric: entry ({i},{j}) symmetric part {}",
                        (m[i][j] + m[j][i]) / 2.0
                    ),
                });
            }
        }
    }
    ThreeVector::new([m[2][1], m[0][2], m[1][0]])
}

/// Frobenius pairing A·B = Σ_{ij} A_ij B_ij.
pub fn frobenius(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> f64 {
    let mut sum = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            sum += a[i][j] * b[i][j];
        }
    }
    sum
}

/// Matrix-vector product M v.
pub fn apply(m: &[[f64; 3]; 3], v: &ThreeVector) -> ThreeVector {
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += m[i][j] * v.0[j];
        }
    }
    ThreeVector(out)
}
