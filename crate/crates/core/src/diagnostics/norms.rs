//! Vorticity L^p norms across a viscosity sweep and the boundary-trace
//! norm ratio.

use crate::error::{Error, Result};
use crate::specfun::quad::{composite_gauss, Grading, QuadratureRule};

use super::{FlowCase, TestFunction};

/// ‖ω(t)‖_{L^p} for each requested p ≥ 1 (∞ allowed), at one time.
///
/// The vorticity is sampled once on a wall-refined grid — 256×16 Gauss
/// nodes on the disk radius, a layer-resolving rule on the channel
/// height — and every norm is read from that sample. p = ∞ is the grid
/// maximum: a documented lower bound of the essential sup, tight for
/// these monotone wall layers.
pub fn lp_norm_scan(flow: &FlowCase, t: f64, p_list: &[f64]) -> Result<Vec<f64>> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain {
            op: "lp_norm_scan",
            detail: format!("time {t} must be positive and finite"),
        });
    }
    for &p in p_list {
        if !(p >= 1.0) {
            return Err(Error::Domain {
                op: "lp_norm_scan",
                detail: format!("exponent {p} must be at least 1"),
            });
        }
    }

    let (rule, slice, thickness) = match flow {
        FlowCase::Disk(sol) => {
            // Refine toward the boundary where the vorticity sheet lives;
            // the innermost panel must dip below the sheet width √(νt).
            let floor = ((sol.nu * t).sqrt() / 4.0).clamp(1e-7, 1.0 / 256.0);
            let rule = composite_gauss(16, 0.0, 1.0, 256, Grading::TowardUpper(floor))?;
            let slice = sol.omega_slices(&[t], &rule.nodes).swap_remove(0);
            (rule, slice, None)
        }
        FlowCase::Shear(sol) => {
            let ell = (4.0 * sol.nu * t).sqrt();
            let z_far = 8.0 * ell + sol.profile.reach();
            let floor = (ell / (4.0 * z_far)).clamp(1e-7, 0.25);
            let rule = composite_gauss(16, 0.0, z_far.max(ell), 96, Grading::TowardLower(floor))?;
            let mut slice = Vec::with_capacity(rule.len());
            for &z in &rule.nodes {
                slice.push(sol.vorticity(t, z)?);
            }
            (rule, slice, Some(2.0 * sol.half_width))
        }
    };

    let mut out = Vec::with_capacity(p_list.len());
    for &p in p_list {
        if p.is_infinite() {
            out.push(slice.iter().fold(0.0f64, |m, w| m.max(w.abs())));
        } else {
            let integral = weighted_power_integral(&rule, &slice, p, thickness);
            out.push(integral.powf(1.0 / p));
        }
    }
    Ok(out)
}

/// ∫|ω|^p over the domain: against r dr dθ on the disk, against 2L dz on
/// the channel.
fn weighted_power_integral(
    rule: &QuadratureRule,
    slice: &[f64],
    p: f64,
    thickness: Option<f64>,
) -> f64 {
    let mut total = 0.0;
    match thickness {
        None => {
            for ((&r, &w), &omega) in rule.nodes.iter().zip(&rule.weights).zip(slice) {
                total += w * omega.abs().powf(p) * r;
            }
            total * 2.0 * std::f64::consts::PI
        }
        Some(width) => {
            for (&w, &omega) in rule.weights.iter().zip(slice) {
                total += w * omega.abs().powf(p);
            }
            total * width
        }
    }
}

/// Ratio of the boundary-trace L^p norm of a radial test function to the
/// interpolation product ‖f‖_{L^{(p−1)q}(Ω)}^{1−1/p}·‖f‖_{W^{1,q′}(Ω)}^{1/p}
/// with q′ = q/(q−1) — the empirical constant of the trace inequality on
/// the unit disk.
///
/// q = 1 sends q′ to ∞, handled as grid essential sups. The boundary norm
/// is exact for radial f: (2π)^{1/p}·|f(1)|. A vanishing denominator
/// (identically zero f) is an error; a vanishing boundary value gives
/// ratio 0.
pub fn trace_ratio(f: &TestFunction, p: f64, q: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Domain {
            op: "trace_ratio",
            detail: format!("trace exponent {p} must exceed 1"),
        });
    }
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::Domain {
            op: "trace_ratio",
            detail: format!("interpolation exponent {q} must be at least 1"),
        });
    }

    let rule = composite_gauss(16, 0.0, 1.0, 64, Grading::Uniform)?;
    let tau = 2.0 * std::f64::consts::PI;

    // ‖f‖_{L^s(Ω)} with s = (p−1)q (a quasinorm when s < 1 — still the
    // inequality's literal right-hand side).
    let s = (p - 1.0) * q;
    let mut lebesgue = 0.0;
    for (&r, &w) in rule.nodes.iter().zip(&rule.weights) {
        lebesgue += w * f.value(r).abs().powf(s) * r;
    }
    lebesgue = (tau * lebesgue).powf(1.0 / s);

    // ‖f‖_{W^{1,q′}(Ω)}: Lebesgue-plus-gradient, essential sups when
    // q′ = ∞ (the radial gradient is just f′).
    let sobolev = if q > 1.0 {
        let qp = q / (q - 1.0);
        let mut value_part = 0.0;
        let mut grad_part = 0.0;
        for (&r, &w) in rule.nodes.iter().zip(&rule.weights) {
            value_part += w * f.value(r).abs().powf(qp) * r;
            grad_part += w * f.derivative(r).abs().powf(qp) * r;
        }
        (tau * (value_part + grad_part)).powf(1.0 / qp)
    } else {
        let sup_value = rule
            .nodes
            .iter()
            .fold(f.value(1.0).abs(), |m, &r| m.max(f.value(r).abs()));
        let sup_grad = rule
            .nodes
            .iter()
            .fold(f.derivative(1.0).abs(), |m, &r| m.max(f.derivative(r).abs()));
        sup_value.max(sup_grad)
    };

    let denominator = lebesgue.powf(1.0 - 1.0 / p) * sobolev.powf(1.0 / p);
    if !(denominator > 0.0) || !denominator.is_finite() {
        return Err(Error::Domain {
            op: "trace_ratio",
            detail: format!("degenerate interpolation denominator {denominator}"),
        });
    }
    let trace = tau.powf(1.0 / p) * f.value(1.0).abs();
    Ok(trace / denominator)
}
