//! Viscosity sweeps and convergence-rate fits.
//!
//! The central quantity is the sup-in-time energy distance
//! sup_{t ≤ T} ‖u^ν(t) − ū(t)‖_{L²(Ω)} between the viscous flow and the
//! stationary Euler flow sharing its initial data. [`nu_sweep`] evaluates
//! it along a grid of viscosities — one independent row per ν, reusing a
//! single spectral projection on the disk — and [`fit_rate`] extracts the
//! decay exponent α in sup_error ≈ C·ν^α by least squares on log-log
//! axes, refusing data that is not power-law within tolerance.
//!
//! On the disk the time slices come from the closed spectral form
//! Σ a_k²(1 − e^{−ν j_k² t})², completed by a two-sided bracket for the
//! untruncated modes: Parseval pins their total energy, the last retained
//! decay rate pins how much of it has already been activated, and a
//! coefficient-envelope integral caps the activation at early times. The
//! reported sup is the bracket midpoint and the bracket width must stay
//! below 1e-8 of the value. In the channel each slice is the certified
//! z-quadrature of ‖φ(t,·) − φ₀‖, plus a closed bound for the far field
//! dropped past the quadrature cutoff.

use rayon::prelude::*;

use crate::diagnostics::{weak_velocity_pairing, FlowCase, ProjectedTestFunction, TestFunction};
use crate::disk::{DiskSpectralSolution, RadialProfile};
use crate::error::{Error, Result};
use crate::shear::{ShearProfile, ShearSolution};

/// Points in the geometric time grid used by sweeps unless overridden.
pub const DEFAULT_TIME_POINTS: usize = 64;

/// The time grid spans [T·TIME_SPAN, T] geometrically.
const TIME_SPAN: f64 = 1e-6;

/// Relative accuracy demanded of a reported sup error; a wider
/// truncation bracket is an error, not a degraded value.
const SUP_REL_TOL: f64 = 1e-8;

/// Log-log residual RMS (in log10 units) above which [`fit_rate`]
/// refuses to report an exponent.
pub const FIT_RESIDUAL_TOL: f64 = 0.05;

/// Default viscosity grid: five points per decade over [1e-6, 1e-2],
/// descending.
pub fn default_nu_grid() -> Vec<f64> {
    (0..=20).map(|k| 10f64.powf(-2.0 - k as f64 / 5.0)).collect()
}

/// Which flow a sweep drives and the discretization it carries along.
#[derive(Debug, Clone)]
pub enum SweepFlow {
    /// Disk flow built from a radial vorticity profile with `modes`
    /// retained spectral modes.
    Disk {
        /// Initial vorticity profile ω₀(r).
        profile: RadialProfile,
        /// Spectral truncation K.
        modes: usize,
    },
    /// Channel shear flow built from a wall-to-interior profile.
    Shear {
        /// Initial horizontal velocity φ₀(z).
        profile: ShearProfile,
        /// Channel half-width L (the boundary has length 2L).
        half_width: f64,
    },
}

/// Everything a sweep needs besides the viscosity grid.
#[derive(Debug, Clone)]
pub struct SweepExperiment {
    /// Flow family and its discretization.
    pub flow: SweepFlow,
    /// Time horizon T of the sup norm.
    pub horizon: f64,
    /// Points in the geometric time grid over [T·1e-6, T].
    pub time_points: usize,
    /// Also measure the weak velocity pairings against the fixed test
    /// suite on every row (disk only; shear rows never carry gaps). The
    /// projections are computed once and shared across viscosities.
    pub weak_suite: bool,
}

/// One viscosity of a sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    /// Viscosity of this row.
    pub nu: f64,
    /// sup_{t ≤ T} ‖u^ν(t) − ū(t)‖_{L²(Ω)} over the time grid.
    pub sup_error: f64,
    /// Weak pairing gaps |(u^ν(T) − ū, v)|/‖v‖ aligned with
    /// [`SweepResult::weak_labels`]; empty unless the suite was requested.
    pub weak_gaps: Vec<f64>,
}

/// Least-squares power law sup_error ≈ prefactor·ν^alpha.
#[derive(Debug, Clone, Copy)]
pub struct RateFit {
    /// Fitted exponent α.
    pub alpha: f64,
    /// Fitted prefactor C.
    pub prefactor: f64,
    /// RMS residual of the fit in log10 units.
    pub residual: f64,
}

/// Outcome of a viscosity sweep: rows in strictly decreasing ν, the
/// attempted rate fit, and a fingerprint of the generating configuration.
#[derive(Debug, Clone)]
pub struct SweepResult {
    /// One entry per viscosity, ν strictly decreasing.
    pub rows: Vec<SweepRow>,
    /// Labels of the weak-suite test functions, aligned with each row's
    /// `weak_gaps`.
    pub weak_labels: Vec<&'static str>,
    /// The rate fit, or `None` when [`fit_rate`] refuses the rows (zero
    /// data, degenerate grid, non-power-law decay).
    pub fit: Option<RateFit>,
    /// FNV-1a hash of the experiment parameters and viscosity grid.
    pub fingerprint: u64,
}

/// sup over a geometric time grid in [T·1e-6, T] of the energy distance
/// ‖u^ν(t) − ū(t)‖_{L²(Ω)} to the stationary Euler flow with the same
/// initial data.
///
/// The sup is reported over the grid — a lower bound of the true sup in
/// general, exact for the monotone-in-time examples — and the truncation
/// bracket around it must close to 1e-8 relative or the call fails
/// rather than return a degraded value.
pub fn sup_l2_error(flow: &FlowCase, horizon: f64, time_points: usize) -> Result<f64> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::Domain {
            op: "sup_l2_error",
            detail: format!("horizon {horizon} must be positive and finite"),
        });
    }
    if time_points < 2 {
        return Err(Error::Domain {
            op: "sup_l2_error",
            detail: format!("time grid needs at least 2 points, got {time_points}"),
        });
    }
    let grid = time_grid(horizon, time_points);
    match flow {
        FlowCase::Disk(sol) => disk_sup(sol, &grid),
        FlowCase::Shear(sol) => shear_sup(sol, &grid),
    }
}

/// Geometric grid of `n` points from T·1e-6 up to exactly T.
fn time_grid(horizon: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let frac = i as f64 / (n - 1) as f64;
            horizon * TIME_SPAN.powf(1.0 - frac)
        })
        .collect()
}

/// Disk branch: closed spectral slices plus a two-sided tail bracket.
///
/// Writing P = ‖u₀‖² − Σ_{k≤K} a_k² for the Parseval mass of the dropped
/// modes, the dropped error energy at time t lies between P·(1−E_K)² and
/// min(P, Q(t)), where E_K = e^{−ν j_K² t} decays slower than any dropped
/// mode and Q(t) integrates the coefficient envelope |a_k| ≤ A₁/j_k
/// against (1 − e^{−ν j_k² t})² ≤ min(1, ν t j_k²)² over the zero ladder
/// (spacing > π). At early times Q ≪ P keeps the bracket tight from
/// above; once ν j_K² t ≳ 40 the two sides pinch at P.
fn disk_sup(sol: &DiskSpectralSolution, grid: &[f64]) -> Result<f64> {
    let zeros = &sol.table.zeros;
    let coeffs = sol.coeffs.as_slice();
    let j_last = zeros[sol.modes() - 1];
    let sq_sum: f64 = coeffs.iter().map(|a| a * a).sum();
    let p_tail = (sol.h_norm_sq - sq_sum).max(0.0);
    let a1 = sol.coeff_envelope;

    let mut reported = 0.0f64;
    let mut hi_sup = 0.0f64;
    let mut lo_sup = 0.0f64;
    for &t in grid {
        let c = sol.nu * t;
        let mut partial = 0.0;
        for (a, z) in coeffs.iter().zip(zeros) {
            let em = -(-c * z * z).exp_m1();
            partial += a * a * em * em;
        }
        let e_last = (-c * j_last * j_last).exp();
        let lo = p_tail * (1.0 - e_last) * (1.0 - e_last);
        let hi = p_tail.min(envelope_tail(a1, j_last, c)).max(lo);
        let mid = 0.5 * (lo + hi);
        reported = reported.max((partial + mid).sqrt());
        hi_sup = hi_sup.max((partial + hi).sqrt());
        lo_sup = lo_sup.max((partial + lo).sqrt());
    }
    let width = hi_sup - lo_sup;
    if width > SUP_REL_TOL * reported {
        return Err(Error::TruncationTail {
            op: "sup_l2_error",
            tail: width,
            tolerance: SUP_REL_TOL * reported,
        });
    }
    Ok(reported)
}

/// Upper bound for Σ_{k>K} a_k²(1 − e^{−c j_k²})² from the envelope
/// |a_k| ≤ A₁/j_k and zero spacing > π:
///
///   Σ ≤ (A₁²/π)·∫_{j_K}^∞ min(1, cx²)²/x² dx + A₁²·sup min(1, cx²)²/x².
///
/// The point term drops when the integrand is decreasing on [j_K, ∞)
/// (c·j_K² ≥ 1): each h(j_k) is then covered by (1/π)∫ over the disjoint
/// gap intervals.
fn envelope_tail(a1: f64, j_last: f64, c: f64) -> f64 {
    let pi = std::f64::consts::PI;
    if c * j_last * j_last >= 1.0 {
        a1 * a1 / (pi * j_last)
    } else {
        // ∫ splits at x* = c^{−1/2}: c²x² below, x^{−2} above; both close
        // in √c (written to avoid forming x*³ for tiny c).
        let rise = ((c.sqrt() - c * c * j_last.powi(3)) / 3.0).max(0.0);
        let fall = c.sqrt();
        a1 * a1 * ((rise + fall) / pi + c)
    }
}

/// Channel branch: certified z-quadrature slices plus the closed far
/// bound for what the cutoff drops.
fn shear_sup(sol: &ShearSolution, grid: &[f64]) -> Result<f64> {
    let mut reported = 0.0f64;
    let mut hi_sup = 0.0f64;
    for &t in grid {
        let v = sol.l2_error(t)?;
        let dropped = sol.l2_error_tail_bound(t);
        reported = reported.max(v);
        hi_sup = hi_sup.max((v * v + dropped).sqrt());
    }
    let width = hi_sup - reported;
    if width > SUP_REL_TOL * reported {
        return Err(Error::TruncationTail {
            op: "sup_l2_error",
            tail: width,
            tolerance: SUP_REL_TOL * reported,
        });
    }
    Ok(reported)
}

/// Runs [`sup_l2_error`] (and optionally the weak pairing suite) for
/// every viscosity in `nu_grid`.
///
/// The grid must hold at least four distinct positive viscosities
/// spanning at least two decades. Rows are mutually independent — the
/// disk projection is shared read-only across them — and are reported in
/// strictly decreasing ν regardless of input order. The first failing
/// row aborts the sweep with its viscosity attached.
pub fn nu_sweep(experiment: &SweepExperiment, nu_grid: &[f64]) -> Result<SweepResult> {
    let nus = validated_grid(nu_grid)?;

    // One projection serves every row.
    let (base, projected, weak_labels) = match &experiment.flow {
        SweepFlow::Disk { profile, modes } => {
            let base = DiskSpectralSolution::new(profile.clone(), nus[0], *modes)?;
            let mut projected = Vec::new();
            let mut labels = Vec::new();
            if experiment.weak_suite {
                for f in TestFunction::suite() {
                    labels.push(f.label());
                    projected.push(ProjectedTestFunction::project(&f, &base.table)?);
                }
            }
            (FlowCase::Disk(base), projected, labels)
        }
        SweepFlow::Shear {
            profile,
            half_width,
        } => {
            let base = ShearSolution::with_half_width(profile.clone(), nus[0], *half_width)?;
            (FlowCase::Shear(base), Vec::new(), Vec::new())
        }
    };

    let outcomes: Vec<Result<SweepRow>> = nus
        .par_iter()
        .map(|&nu| {
            sweep_row(&base, &projected, experiment, nu)
                .map_err(|e| Error::SweepRow {
                    nu,
                    source: Box::new(e),
                })
        })
        .collect();
    let rows = outcomes.into_iter().collect::<Result<Vec<_>>>()?;

    let fit = fit_rows(&rows).ok();
    Ok(SweepResult {
        fingerprint: fingerprint(experiment, &nus),
        rows,
        weak_labels,
        fit,
    })
}

/// One row: re-viscosify the shared base and evaluate its functionals.
fn sweep_row(
    base: &FlowCase,
    projected: &[ProjectedTestFunction],
    experiment: &SweepExperiment,
    nu: f64,
) -> Result<SweepRow> {
    match base {
        FlowCase::Disk(b) => {
            let sol = b.with_viscosity(nu)?;
            let sup_error = sup_l2_error(
                &FlowCase::Disk(sol.clone()),
                experiment.horizon,
                experiment.time_points,
            )?;
            let weak_gaps = projected
                .iter()
                .map(|v| weak_velocity_pairing(&sol, v, experiment.horizon))
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepRow {
                nu,
                sup_error,
                weak_gaps,
            })
        }
        FlowCase::Shear(b) => {
            let sol = b.with_viscosity(nu)?;
            let sup_error = sup_l2_error(
                &FlowCase::Shear(sol),
                experiment.horizon,
                experiment.time_points,
            )?;
            Ok(SweepRow {
                nu,
                sup_error,
                weak_gaps: Vec::new(),
            })
        }
    }
}

/// Checks positivity, cardinality, span, and distinctness, returning the
/// grid sorted in decreasing ν.
fn validated_grid(nu_grid: &[f64]) -> Result<Vec<f64>> {
    for &nu in nu_grid {
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(Error::Domain {
                op: "nu_sweep",
                detail: format!("viscosity {nu} must be positive and finite"),
            });
        }
    }
    if nu_grid.len() < 4 {
        return Err(Error::Domain {
            op: "nu_sweep",
            detail: format!("grid needs at least 4 viscosities, got {}", nu_grid.len()),
        });
    }
    let mut nus = nu_grid.to_vec();
    nus.sort_by(|a, b| b.partial_cmp(a).expect("finite viscosities"));
    if nus.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Domain {
            op: "nu_sweep",
            detail: "viscosity grid has duplicate entries".into(),
        });
    }
    let span = nus[0] / nus[nus.len() - 1];
    if span < 100.0 * (1.0 - 1e-12) {
        return Err(Error::Domain {
            op: "nu_sweep",
            detail: format!(
                "grid spans a factor {span:.3}, needs at least two decades (100)"
            ),
        });
    }
    Ok(nus)
}

/// Least-squares power law through a sweep's rows.
///
/// Ordinary least squares of ln(sup_error) on ln(ν): the slope is α, the
/// exponentiated intercept C. Refuses nonpositive errors, a spreadless
/// grid, fewer than four rows, and fits whose log10 residual RMS exceeds
/// [`FIT_RESIDUAL_TOL`] — a rate exponent quoted from visibly
/// non-power-law data would be meaningless.
pub fn fit_rate(sweep: &SweepResult) -> Result<RateFit> {
    fit_rows(&sweep.rows)
}

fn fit_rows(rows: &[SweepRow]) -> Result<RateFit> {
    if rows.len() < 4 {
        return Err(Error::Domain {
            op: "fit_rate",
            detail: format!("needs at least 4 rows, got {}", rows.len()),
        });
    }
    for row in rows {
        if !(row.sup_error > 0.0) || !row.sup_error.is_finite() {
            return Err(Error::DegenerateFit {
                detail: format!(
                    "row at nu = {:e} has sup_error {:e}, cannot take logs",
                    row.nu, row.sup_error
                ),
            });
        }
    }
    let n = rows.len() as f64;
    let xs: Vec<f64> = rows.iter().map(|r| r.nu.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.sup_error.ln()).collect();
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean) * (x - x_mean)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    if sxx < 1e-12 * n {
        return Err(Error::DegenerateFit {
            detail: "viscosity grid has no spread on the log axis".into(),
        });
    }
    let alpha = sxy / sxx;
    let intercept = y_mean - alpha * x_mean;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + alpha * x);
            r * r
        })
        .sum();
    let residual = (ss_res / n).sqrt() / std::f64::consts::LN_10;
    if residual > FIT_RESIDUAL_TOL {
        return Err(Error::NonPowerLaw {
            residual_rms: residual,
        });
    }
    Ok(RateFit {
        alpha,
        prefactor: intercept.exp(),
        residual,
    })
}

/// 64-bit FNV-1a over a canonical encoding of the experiment, so that
/// identical configurations — and only those — share a fingerprint.
fn fingerprint(experiment: &SweepExperiment, nus: &[f64]) -> u64 {
    let mut h = Fnv1a::new();
    match &experiment.flow {
        SweepFlow::Disk { profile, modes } => {
            h.byte(0);
            match profile {
                RadialProfile::PolyR2(c) => {
                    h.byte(0);
                    h.floats(c);
                }
                RadialProfile::Table(s) => {
                    h.byte(1);
                    h.floats(s.knots());
                    h.floats(s.values());
                }
            }
            h.word(*modes as u64);
        }
        SweepFlow::Shear {
            profile,
            half_width,
        } => {
            h.byte(1);
            let (tag, params) = profile.fingerprint_params();
            h.byte(tag);
            h.floats(&params);
            h.float(*half_width);
        }
    }
    h.float(experiment.horizon);
    h.word(experiment.time_points as u64);
    h.byte(experiment.weak_suite as u8);
    h.floats(nus);
    h.finish()
}

/// Plain FNV-1a, enough to detect configuration drift between runs.
struct Fnv1a(u64);

impl Fnv1a {
    fn new() -> Fnv1a {
        Fnv1a(0xcbf2_9ce4_8422_2325)
    }

    fn byte(&mut self, b: u8) {
        self.0 ^= b as u64;
        self.0 = self.0.wrapping_mul(0x1_0000_0000_01b3);
    }

    fn word(&mut self, w: u64) {
        for b in w.to_le_bytes() {
            self.byte(b);
        }
    }

    fn float(&mut self, x: f64) {
        self.word(x.to_bits());
    }

    fn floats(&mut self, xs: &[f64]) {
        for &x in xs {
            self.float(x);
        }
    }

    fn finish(&self) -> u64 {
        self.0
    }
}
