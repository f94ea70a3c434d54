//! Gauss–Legendre quadrature: single rules and composite (paneled) rules.
//!
//! Nodes and weights come from Newton iteration on the Legendre recurrence.
//! Composite rules concatenate Gauss panels over a partition of the interval;
//! the partition may be uniform or geometrically graded toward one endpoint,
//! which is how integrable endpoint layers (boundary sheets, t^{−1/2}-type
//! onsets after substitution) are resolved without adaptive machinery.

use crate::error::{Error, Result};

/// Nodes and weights for ∫ₐᵇ f(x) dx ≈ Σ wᵢ f(xᵢ).
///
/// `order` is the per-panel Gauss order: the rule integrates polynomials up
/// to degree 2·order − 1 exactly, and its weights sum to b − a.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    /// Evaluation points, strictly inside the integration interval.
    pub nodes: Vec<f64>,
    /// Positive weights, summing to the interval length.
    pub weights: Vec<f64>,
    /// Gauss order per panel.
    pub order: usize,
}

impl QuadratureRule {
    /// Apply the rule to an integrand.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Whether the rule has no nodes (never true for constructed rules).
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Standard Gauss–Legendre nodes and weights on [−1, 1].
fn legendre_nodes(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi-style initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_eval(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_eval(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

/// Legendre polynomial P_n and derivative P_n' by the three-term recurrence.
fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule of the given order on (a, b).
pub fn gauss_legendre(order: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if order < 1 {
        return Err(Error::Domain {
            op: "gauss_legendre",
            detail: "order must be at least 1".into(),
        });
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain {
            op: "gauss_legendre",
            detail: format!("invalid interval [{a}, {b}]"),
        });
    }
    let (xs, ws) = legendre_nodes(order);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    Ok(QuadratureRule {
        nodes: xs.iter().map(|&x| mid + half * x).collect(),
        weights: ws.iter().map(|&w| half * w).collect(),
        order,
    })
}

/// How panel widths are distributed over the interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grading {
    /// Equal-width panels.
    Uniform,
    /// Panel edges geometrically refined toward the lower endpoint; the
    /// innermost edge sits at the given fraction of the interval length.
    TowardLower(f64),
    /// Panel edges geometrically refined toward the upper endpoint.
    TowardUpper(f64),
}

/// Composite rule: `panels` Gauss panels of the given order on (a, b), with
/// the stated grading. Weights still sum to b − a.
pub fn composite_gauss(
    order: usize,
    a: f64,
    b: f64,
    panels: usize,
    grading: Grading,
) -> Result<QuadratureRule> {
    if panels < 1 {
        return Err(Error::Domain {
            op: "composite_gauss",
            detail: "panel count must be at least 1".into(),
        });
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain {
            op: "composite_gauss",
            detail: format!("invalid interval [{a}, {b}]"),
        });
    }
    let edges = panel_edges(a, b, panels, grading)?;
    let (xs, ws) = legendre_nodes(order);
    let mut nodes = Vec::with_capacity(order * panels);
    let mut weights = Vec::with_capacity(order * panels);
    for pair in edges.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        for (&x, &w) in xs.iter().zip(&ws) {
            nodes.push(mid + half * x);
            weights.push(half * w);
        }
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        order,
    })
}

/// Panel edge positions including both endpoints.
fn panel_edges(a: f64, b: f64, panels: usize, grading: Grading) -> Result<Vec<f64>> {
    let span = b - a;
    let fractions = |floor: f64| -> Result<Vec<f64>> {
        if !(floor > 0.0 && floor < 1.0) {
            return Err(Error::Domain {
                op: "composite_gauss",
                detail: format!("grading floor {floor} must lie in (0, 1)"),
            });
        }
        // Geometric sequence floor = f₀ < f₁ < … < f_{panels} = 1.
        let ratio = (1.0 / floor).powf(1.0 / panels as f64);
        let mut f = Vec::with_capacity(panels + 1);
        let mut cur = floor;
        f.push(floor);
        for _ in 0..panels {
            cur *= ratio;
            f.push(cur);
        }
        *f.last_mut().unwrap() = 1.0;
        Ok(f)
    };
    let edges = match grading {
        Grading::Uniform => (0..=panels)
            .map(|i| a + span * i as f64 / panels as f64)
            .collect(),
        Grading::TowardLower(floor) => {
            // Edges a, a + span·floor·ratio, …, b: the first panel spans the
            // endpoint layer [a, a + span·floor·ratio].
            let f = fractions(floor)?;
            let mut e: Vec<f64> = f.iter().map(|&fr| a + span * fr).collect();
            e[0] = a;
            e
        }
        Grading::TowardUpper(floor) => {
            // Mirror image: the last panel spans [b − span·floor·ratio, b].
            let f = fractions(floor)?;
            let mut e: Vec<f64> = f.iter().rev().map(|&fr| b - span * fr).collect();
            let last = e.len() - 1;
            e[last] = b;
            e
        }
    };
    Ok(edges)
}
