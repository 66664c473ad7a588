//! Fixed points of the boundary-field recursion for `k = 2`, `q = 3`,
//! restricted to the invariant line `u_1 = 1`.
//!
//! Translation-invariant solutions are counted through the reduced equation
//! `a x = ((1 + x) / (b + x))²`; two-periodic ones through the quadratic left
//! after dividing the fixed points out of `u = f(f(u))`.

mod audit;
mod periodic;
mod sweep;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::LambdaParams;
use crate::poly::{real_roots, Poly, RealRoot};

pub use audit::{case_identity_check, Case, CaseAudit, CaseSample, PrintedForm, AUDIT_TOL, ZERO_BAND};
pub use periodic::{
    periodic_quadratic, periodic_quadratic_exact, reduced_map_rational, two_periodic_report, PeriodicReport,
    PROPER_SEPARATION,
};
pub use sweep::{
    bisect_sign_change, evaluate_point, sign_changes, sweep, write_csv, write_json_lines, AxisSpec, GridPoint, Space,
    SweepConfig, SweepRow, CSV_HEADER,
};

/// Number of successors per vertex; the maps below raise to this power.
pub const TREE_ORDER: i32 = 2;

/// Above this value of `b_can` the reduced equation can have three roots.
pub const CRITICAL_B: f64 = 9.0;

/// Relative distance from `ε_1` or `ε_2` at which `a_can` counts as on the boundary.
pub const THRESHOLD_TOL: f64 = 1e-10;

/// Tolerance handed to the root isolator for the reduced cubic.
pub const ROOT_TOL: f64 = 1e-12;

/// `x̄ = exp(βc)`, `ȳ = exp(βb)`, `z̄ = exp(βa)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoltzmannWeights {
    pub xw: f64,
    pub yw: f64,
    pub zw: f64,
}

impl BoltzmannWeights {
    pub fn new(xw: f64, yw: f64, zw: f64) -> Result<Self> {
        for (name, v) in [("xw", xw), ("yw", yw), ("zw", zw)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(Self { xw, yw, zw })
    }

    pub fn from_params(p: &LambdaParams) -> Self {
        Self { xw: (p.beta * p.c).exp(), yw: (p.beta * p.b).exp(), zw: (p.beta * p.a).exp() }
    }

    /// Couplings reproducing these weights at `β = 1`.
    pub fn unit_beta_couplings(&self) -> LambdaParams {
        LambdaParams { a: self.zw.ln(), b: self.yw.ln(), c: self.xw.ln(), beta: 1.0 }
    }
}

pub fn weights_from(p: &LambdaParams) -> BoltzmannWeights {
    BoltzmannWeights::from_params(p)
}

/// The translation-invariant system: one application of the recursion to a
/// constant ratio vector `(u_1, u_2)`.
pub fn ti_map(u: (f64, f64), w: &BoltzmannWeights) -> (f64, f64) {
    let (u1, u2) = u;
    let den = w.zw * u1 + w.yw * u2 + w.xw;
    let first = (w.xw * u1 + w.yw * u2 + w.zw) / den;
    let second = (w.yw * u1 + w.xw * u2 + w.yw) / den;
    (first.powi(TREE_ORDER), second.powi(TREE_ORDER))
}

/// `f(u) = ((x̄u + 2ȳ) / (ȳu + x̄ + z̄))²`, the map on the invariant line.
pub fn reduced_map(u: f64, w: &BoltzmannWeights) -> f64 {
    ((w.xw * u + 2.0 * w.yw) / (w.yw * u + w.xw + w.zw)).powi(TREE_ORDER)
}

/// Constants of the reduced equation `a x = ((1 + x) / (b + x))²`, reached by
/// substituting `x = u x̄ / (2ȳ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CanonicalParams {
    pub a_can: f64,
    pub b_can: f64,
}

impl CanonicalParams {
    pub fn new(a_can: f64, b_can: f64) -> Result<Self> {
        if !(a_can > 0.0 && b_can > 0.0 && a_can.is_finite() && b_can.is_finite()) {
            return Err(Error::InvalidParams(format!("canonical parameters must be positive: a={a_can}, b={b_can}")));
        }
        Ok(Self { a_can, b_can })
    }

    /// `a x (b + x)² − (1 + x)²`, whose positive roots are the solutions.
    pub fn cubic(&self) -> Poly<f64> {
        let (a, b) = (self.a_can, self.b_can);
        Poly::new(vec![-1.0, a * b * b - 2.0, 2.0 * a * b - 1.0, a])
    }
}

pub fn canonical_params(w: &BoltzmannWeights) -> CanonicalParams {
    CanonicalParams { a_can: 2.0 * w.yw.powi(3) / w.xw.powi(3), b_can: w.xw * (w.xw + w.zw) / (2.0 * w.yw * w.yw) }
}

pub fn x_from_u(u: f64, w: &BoltzmannWeights) -> f64 {
    u * w.xw / (2.0 * w.yw)
}

pub fn u_from_x(x: f64, w: &BoltzmannWeights) -> f64 {
    2.0 * w.yw * x / w.xw
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Unique,
    Two,
    Three,
}

impl Regime {
    pub fn root_count(self) -> usize {
        match self {
            Regime::Unique => 1,
            Regime::Two => 2,
            Regime::Three => 3,
        }
    }
}

/// Critical points `x_1 < x_2` of `(1/x) ((1 + x) / (b + x))²` and the values
/// `ε_1 < ε_2` it takes there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub x1: f64,
    pub x2: f64,
    pub eps1: f64,
    pub eps2: f64,
}

pub fn threshold_value(x: f64, b: f64) -> f64 {
    ((1.0 + x) / (b + x)).powi(2) / x
}

/// Thresholds exist only for `b > 9`, where `x² + (3 − b)x + b` has two
/// positive roots.
pub fn thresholds(b: f64) -> Option<Thresholds> {
    if b <= CRITICAL_B {
        return None;
    }
    let half_sum = 0.5 * (b - 3.0);
    let disc = half_sum * half_sum - b;
    if disc <= 0.0 {
        return None;
    }
    let x2 = half_sum + disc.sqrt();
    let x1 = b / x2;
    Some(Thresholds { x1, x2, eps1: threshold_value(x1, b), eps2: threshold_value(x2, b) })
}

/// Root count predicted from the thresholds alone.
pub fn threshold_regime(c: &CanonicalParams) -> (Regime, Option<Thresholds>) {
    let th = thresholds(c.b_can);
    let regime = match th {
        None => Regime::Unique,
        Some(t) => {
            let a = c.a_can;
            if (a - t.eps1).abs() <= THRESHOLD_TOL * t.eps1 || (a - t.eps2).abs() <= THRESHOLD_TOL * t.eps2 {
                Regime::Two
            } else if t.eps1 < a && a < t.eps2 {
                Regime::Three
            } else {
                Regime::Unique
            }
        }
    };
    (regime, th)
}

/// Positive roots of the reduced cubic, found by root isolation.
pub fn reduced_roots(c: &CanonicalParams) -> Vec<RealRoot> {
    real_roots(&c.cubic(), ROOT_TOL).into_iter().filter(|r| r.value > 0.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalReport {
    pub canonical: CanonicalParams,
    pub x_roots: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub regime: Regime,
    pub thresholds: Option<Thresholds>,
    pub phase_transition: bool,
}

fn analyze(c: CanonicalParams) -> CanonicalReport {
    let roots = reduced_roots(&c);
    let (regime, thresholds) = threshold_regime(&c);
    CanonicalReport {
        canonical: c,
        x_roots: roots.iter().map(|r| r.value).collect(),
        multiplicities: roots.iter().map(|r| r.multiplicity).collect(),
        regime,
        thresholds,
        phase_transition: regime != Regime::Unique,
    }
}

/// Root analysis directly in canonical coordinates.
pub fn count_canonical_roots(c: &CanonicalParams) -> CanonicalReport {
    analyze(*c)
}

/// Translation-invariant fixed points on the invariant line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointReport {
    pub canonical: CanonicalParams,
    /// `u_2` values, increasing.
    pub ti_roots: Vec<f64>,
    pub multiplicities: Vec<usize>,
    /// Verdict from the thresholds; agrees with `ti_roots.len()` away from a
    /// band of relative width `THRESHOLD_TOL` around `ε_1` and `ε_2`.
    pub regime: Regime,
    pub thresholds: Option<Thresholds>,
    pub phase_transition: bool,
    pub scope: &'static str,
}

pub fn count_ti_roots(w: &BoltzmannWeights) -> FixedPointReport {
    let r = analyze(canonical_params(w));
    FixedPointReport {
        canonical: r.canonical,
        ti_roots: r.x_roots.iter().map(|&x| u_from_x(x, w)).collect(),
        multiplicities: r.multiplicities,
        regime: r.regime,
        thresholds: r.thresholds,
        phase_transition: r.phase_transition,
        scope: "invariant-line analysis only",
    }
}
