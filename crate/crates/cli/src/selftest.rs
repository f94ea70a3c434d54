//! Closed-form identity checks runnable from the installed binary.
//!
//! Each check re-derives a value the library promises exactly — special
//! function symmetries, quadrature exactness on polynomials, spectral
//! coefficients of rigid rotation, wall conditions, the cross-product
//! algebra — and compares within a stated tolerance. `vvlab selftest`
//! prints one line per check and exits nonzero if any fails, giving a
//! fast installation sanity pass that needs no config or network.

use std::process::ExitCode;

use vvlab_core::algebra::{apply, cross_matrix, frobenius, ThreeVector};
use vvlab_core::diagnostics::{sheet_pairing, trace_ratio, TestFunction};
use vvlab_core::disk::{euler_solution, DiskSpectralSolution, RadialProfile};
use vvlab_core::rates::{fit_rate, SweepResult, SweepRow};
use vvlab_core::shear::{ShearProfile, ShearSolution};
use vvlab_core::specfun::{erf, erfc, gauss_legendre, j1_zeros, smooth_cutoff, LayerSpec};

type CheckResult = Result<(), String>;

fn ensure(condition: bool, detail: impl Into<String>) -> CheckResult {
    if condition {
        Ok(())
    } else {
        Err(detail.into())
    }
}

fn close(got: f64, want: f64, tol: f64, what: &str) -> CheckResult {
    ensure(
        (got - want).abs() <= tol,
        format!("{what}: got {got}, want {want} (tol {tol})"),
    )
}

fn fallible(result: vvlab_core::Result<f64>, what: &str) -> Result<f64, String> {
    result.map_err(|e| format!("{what}: {e}"))
}

/// Runs every check, printing `ok NAME` or `FAILED NAME: detail` lines.
pub fn run() -> ExitCode {
    let checks: &[(&str, fn() -> CheckResult)] = &[
        ("erf_special_values", erf_special_values),
        ("gauss_legendre_polynomial_exactness", gauss_legendre_polynomial_exactness),
        ("bessel_zero_bounds_and_signs", bessel_zero_bounds_and_signs),
        ("cutoff_plateau_and_support", cutoff_plateau_and_support),
        ("disk_rigid_total_mass", disk_rigid_total_mass),
        ("disk_rigid_wall_velocity", disk_rigid_wall_velocity),
        ("disk_rigid_spectral_coefficients", disk_rigid_spectral_coefficients),
        ("shear_wall_condition", shear_wall_condition),
        ("shear_wall_gradient_closed_form", shear_wall_gradient_closed_form),
        ("cross_product_matrix_identities", cross_product_matrix_identities),
        ("sheet_pairing_constant_test_function", sheet_pairing_constant_test_function),
        ("trace_ratio_of_the_constant_function", trace_ratio_of_the_constant_function),
        ("config_validation_round_trip", config_validation_round_trip),
        ("rate_fit_recovers_power_law", rate_fit_recovers_power_law),
    ];

    let mut failures = 0usize;
    for (name, check) in checks {
        match check() {
            Ok(()) => println!("ok {name}"),
            Err(detail) => {
                failures += 1;
                println!("FAILED {name}: {detail}");
            }
        }
    }
    if failures == 0 {
        println!("selftest: all {} checks passed", checks.len());
        ExitCode::SUCCESS
    } else {
        println!("selftest: {failures} of {} checks failed", checks.len());
        ExitCode::FAILURE
    }
}

fn erf_special_values() -> CheckResult {
    close(fallible(erf(0.0), "erf(0)")?, 0.0, 0.0, "erf(0)")?;
    let plus = fallible(erf(1.0), "erf(1)")?;
    let minus = fallible(erf(-1.0), "erf(-1)")?;
    close(plus + minus, 0.0, 1e-15, "odd symmetry erf(1) + erf(-1)")?;
    close(fallible(erfc(0.0), "erfc(0)")?, 1.0, 1e-15, "erfc(0)")?;
    close(fallible(erf(6.0), "erf(6)")?, 1.0, 1e-12, "erf(6) saturation")
}

fn gauss_legendre_polynomial_exactness() -> CheckResult {
    let rule = gauss_legendre(8, 0.0, 1.0).map_err(|e| e.to_string())?;
    close(rule.integrate(|x| x * x * x), 0.25, 1e-15, "int_0^1 x^3 dx")?;
    close(rule.integrate(|x| x.powi(7)), 0.125, 1e-14, "int_0^1 x^7 dx")
}

fn bessel_zero_bounds_and_signs() -> CheckResult {
    let table = j1_zeros(8).map_err(|e| e.to_string())?;
    for (i, &z) in table.zeros.iter().enumerate() {
        let k = (i + 1) as f64;
        ensure(
            z > 1.0 + k && z <= std::f64::consts::PI * (0.5 + k),
            format!("zero {} = {z} violates the classical bounds", i + 1),
        )?;
        let expected_sign = if i % 2 == 0 { -1.0 } else { 1.0 };
        ensure(
            table.signs[i] == expected_sign,
            format!("sign at zero {} is {}, expected {expected_sign}", i + 1, table.signs[i]),
        )?;
    }
    Ok(())
}

fn cutoff_plateau_and_support() -> CheckResult {
    let layer = LayerSpec::new(0.1, 0.05, 1.0).map_err(|e| e.to_string())?;
    close(fallible(smooth_cutoff(&layer, 0.01), "cutoff")?, 1.0, 0.0, "plateau value")?;
    close(fallible(smooth_cutoff(&layer, 0.2), "cutoff")?, 0.0, 0.0, "support tail")?;
    let mid = fallible(smooth_cutoff(&layer, 0.075), "cutoff")?;
    ensure(mid > 0.0 && mid < 1.0, format!("ramp value {mid} not in (0, 1)"))
}

fn rigid() -> RadialProfile {
    RadialProfile::poly_r2(vec![2.0]).expect("constant vorticity 2 is a valid profile")
}

fn disk_rigid_total_mass() -> CheckResult {
    let mass = euler_solution(rigid()).total_mass();
    close(mass, 2.0 * std::f64::consts::PI, 1e-14, "total mass of omega = 2")
}

fn disk_rigid_wall_velocity() -> CheckResult {
    let euler = euler_solution(rigid());
    let at_rim = fallible(euler.velocity(0.0, 1.0), "velocity at r = 1")?;
    close(at_rim, 1.0, 1e-14, "rigid rotation rim speed")?;
    let inside = fallible(euler.velocity(0.0, 0.5), "velocity at r = 1/2")?;
    close(inside, 0.5, 1e-14, "rigid rotation interior speed")
}

fn disk_rigid_spectral_coefficients() -> CheckResult {
    let sol = DiskSpectralSolution::new(rigid(), 1.0, 8).map_err(|e| e.to_string())?;
    let two_sqrt_pi = 2.0 * std::f64::consts::PI.sqrt();
    for k in 0..sol.modes() {
        let projected = sol.coeffs[k] * sol.table.signs[k];
        let closed = -two_sqrt_pi / sol.table.zeros[k];
        close(projected, closed, 1e-9, &format!("coefficient {}", k + 1))?;
    }
    Ok(())
}

fn shear_wall_condition() -> CheckResult {
    let profile = ShearProfile::constant(1.0).map_err(|e| e.to_string())?;
    let sol = ShearSolution::new(profile, 1e-3).map_err(|e| e.to_string())?;
    close(fallible(sol.phi(0.3, 0.0), "phi at the wall")?, 0.0, 0.0, "no-slip value")
}

fn shear_wall_gradient_closed_form() -> CheckResult {
    let nu = 1e-3;
    let profile = ShearProfile::constant(1.0).map_err(|e| e.to_string())?;
    let sol = ShearSolution::new(profile, nu).map_err(|e| e.to_string())?;
    for &t in &[0.05, 0.25, 1.0] {
        let got = fallible(sol.boundary_gradient(t), "wall gradient")?;
        let want = 1.0 / (std::f64::consts::PI * nu * t).sqrt();
        close(got / want, 1.0, 1e-8, &format!("wall gradient at t = {t}"))?;
    }
    Ok(())
}

fn cross_product_matrix_identities() -> CheckResult {
    let phi = ThreeVector::new([0.3, -1.2, 0.7]).map_err(|e| e.to_string())?;
    let psi = ThreeVector::new([-0.5, 0.1, 2.0]).map_err(|e| e.to_string())?;
    let v = ThreeVector::new([1.0, 0.25, -0.75]).map_err(|e| e.to_string())?;

    let product = frobenius(&cross_matrix(&phi), &cross_matrix(&psi));
    close(product, 2.0 * phi.dot(&psi), 1e-14, "F(phi):F(psi) = 2 phi.psi")?;

    let fv = apply(&cross_matrix(&phi), &v);
    let pxv = phi.cross(&v);
    let dist_sq = fv.dot(&fv) - 2.0 * fv.dot(&pxv) + pxv.dot(&pxv);
    ensure(
        dist_sq.abs() < 1e-28,
        format!("F(phi)v differs from phi x v (squared distance {dist_sq})"),
    )
}

fn sheet_pairing_constant_test_function() -> CheckResult {
    let sol = DiskSpectralSolution::new(rigid(), 1e-3, 64).map_err(|e| e.to_string())?;
    let euler = euler_solution(rigid());
    let pairing =
        sheet_pairing(&sol, &euler, &TestFunction::even_power(0), 0.5).map_err(|e| e.to_string())?;
    ensure(
        pairing.gap <= 1e-8,
        format!("constant test function gap {} exceeds 1e-8", pairing.gap),
    )
}

fn trace_ratio_of_the_constant_function() -> CheckResult {
    let ratio = fallible(trace_ratio(&TestFunction::even_power(0), 2.0, 2.0), "trace ratio")?;
    close(ratio, 2.0f64.sqrt(), 1e-12, "trace ratio of f = 1 at p = q = 2")
}

fn config_validation_round_trip() -> CheckResult {
    let base = std::path::Path::new(".");
    let minimal =
        r#"{"flow":"disk","profile":{"type":"constant","value":2},"nu_grid":[1e-3],"T":1}"#;
    crate::config::parse_config(minimal, base)
        .map_err(|e| format!("minimal config refused: {e}"))?;

    let bad = r#"{"flow":"disk","profile":{"type":"constant","value":2},
                   "nu_grid":[0],"T":1,"diagnostics":["no_such"]}"#;
    let err = match crate::config::parse_config(bad, base) {
        Ok(_) => return Err("invalid config accepted".into()),
        Err(e) => e.to_string(),
    };
    ensure(
        err.contains("nu must be positive") && err.contains("unknown diagnostic"),
        format!("refusal not itemized: {err}"),
    )
}

fn rate_fit_recovers_power_law() -> CheckResult {
    let rows: Vec<SweepRow> = [1e-2, 1e-3, 1e-4, 1e-5]
        .iter()
        .map(|&nu| SweepRow {
            nu,
            sup_error: 3.0 * f64::powf(nu, 0.25),
            weak_gaps: Vec::new(),
        })
        .collect();
    let sweep = SweepResult {
        rows,
        weak_labels: Vec::new(),
        fit: None,
        fingerprint: 0,
    };
    let fit = fit_rate(&sweep).map_err(|e| e.to_string())?;
    close(fit.alpha, 0.25, 1e-12, "fitted exponent")?;
    close(fit.prefactor, 3.0, 1e-9, "fitted prefactor")
}
