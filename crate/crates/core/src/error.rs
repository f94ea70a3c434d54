//! Crate-wide error type.
//!
//! Every fallible operation in this crate returns [`Error`]; variants carry
//! enough context to point at the offending input or the internal check that
//! tripped. Numerical routines prefer failing loudly (truncation tails above
//! tolerance, quadrature refinements that disagree) over returning silently
//! degraded values.

use std::fmt;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the solvers, special functions, and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    Domain {
        /// Operation that rejected the argument.
        op: &'static str,
        /// Human-readable description of the violation.
        detail: String,
    },
    /// A root finder could not bracket a sign change where one must exist;
    /// this signals a defect in the underlying function evaluation.
    Bracketing {
        /// Description of the failed bracket.
        detail: String,
    },
    /// Two quadrature resolutions disagree beyond the allowed tolerance.
    QuadratureDisagreement {
        /// Operation whose refinement check failed.
        op: &'static str,
        /// Observed disagreement between the two resolutions.
        disagreement: f64,
        /// Allowed tolerance.
        tolerance: f64,
    },
    /// A series truncation tail bound exceeds the evaluation tolerance.
    TruncationTail {
        /// Operation whose tail bound is too large.
        op: &'static str,
        /// Estimated tail magnitude.
        tail: f64,
        /// Allowed tolerance.
        tolerance: f64,
    },
    /// Vorticity requested at t = 0 for data with nonzero total mass: the
    /// vorticity series has an initial-layer singularity there and does not
    /// converge pointwise.
    InitialLayerSingularity,
    /// A boundary-layer specification is inconsistent (e.g. inner width not
    /// smaller than outer width, or layer wider than the domain).
    InvalidLayer {
        /// Description of the inconsistency.
        detail: String,
    },
    /// An initial-data profile fails its structural requirements.
    InvalidProfile {
        /// Description of the defect.
        detail: String,
    },
    /// A least-squares rate fit was rejected because the data are not
    /// power-law within tolerance.
    NonPowerLaw {
        /// Root-mean-square residual of the log-log fit, in log10 units.
        residual_rms: f64,
    },
    /// A rate fit has degenerate input (too few rows, zero errors, or no
    /// spread in the abscissae).
    DegenerateFit {
        /// Description of the degeneracy.
        detail: String,
    },
    /// A sweep row failed; wraps the underlying error with the viscosity
    /// identifying the row.
    SweepRow {
        /// Viscosity of the failing row.
        nu: f64,
        /// Underlying failure.
        source: Box<Error>,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { op, detail } => write!(f, "{op}: domain error: {detail}"),
            Error::Bracketing { detail } => write!(f, "root bracketing failed: {detail}"),
            Error::QuadratureDisagreement {
                op,
                disagreement,
                tolerance,
            } => write!(
                f,
                "{op}: quadrature refinement disagreement {disagreement:.3e} exceeds {tolerance:.3e}"
            ),
            Error::TruncationTail { op, tail, tolerance } => write!(
                f,
                "{op}: truncation tail estimate {tail:.3e} exceeds tolerance {tolerance:.3e}"
            ),
            Error::InitialLayerSingularity => write!(
                f,
                "vorticity at t = 0 with nonzero total mass: initial-layer singularity"
            ),
            Error::InvalidLayer { detail } => write!(f, "invalid layer: {detail}"),
            Error::InvalidProfile { detail } => write!(f, "invalid profile: {detail}"),
            Error::NonPowerLaw { residual_rms } => write!(
                f,
                "rate fit rejected: log-log residual RMS {residual_rms:.3e} exceeds 0.05 (not a power law)"
            ),
            Error::DegenerateFit { detail } => write!(f, "rate fit degenerate: {detail}"),
            Error::SweepRow { nu, source } => write!(f, "sweep row at nu = {nu:e} failed: {source}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::SweepRow { source, .. } => Some(source),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_contains_context() {
        let e = Error::Domain {
            op: "bessel_j",
            detail: "x must be nonnegative".into(),
        };
        assert!(e.to_string().contains("bessel_j"));
        assert!(e.to_string().contains("nonnegative"));
    }

    #[test]
    fn sweep_row_exposes_source() {
        let inner = Error::InitialLayerSingularity;
        let e = Error::SweepRow {
            nu: 1e-4,
            source: Box::new(inner.clone()),
        };
        let msg = e.to_string();
        assert!(msg.contains("1e-4") || msg.contains("0.0001"));
        assert!(std::error::Error::source(&e).is_some());
        assert_eq!(*e_source(&e), inner);
    }

    fn e_source(e: &Error) -> &Error {
        match e {
            Error::SweepRow { source, .. } => source,
            _ => panic!("expected sweep row"),
        }
    }
}
