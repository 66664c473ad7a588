//! Comparison of closed-form discriminants, as printed for three special
//! weight families, against the discriminant of the division-derived
//! quadratic.

use serde::Serialize;

use super::{two_periodic_report, BoltzmannWeights};
use crate::error::{Error, Result};

/// Relative agreement required between a printed form and the computed value.
pub const AUDIT_TOL: f64 = 1e-8;

/// Width of the band around zero, relative to `B² + 4|AC|`, inside which a
/// discriminant is indistinguishable from zero.
pub const ZERO_BAND: f64 = 1e-12;

/// Weight families with one or two free parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    /// `z̄ = x̄ + 1`, `ȳ = 1`; parameter `x̄`.
    I,
    /// `z̄ = x̄`, `ȳ = 1`; parameter `x̄`.
    II,
    /// `ȳ = x̄`; parameters `(x̄, z̄)`.
    III,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrintedForm {
    Factorized,
    Expanded,
}

fn log_spaced(lo: f64, hi: f64, n: usize, phase: f64, denom: f64) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf((i as f64 + phase) / denom)).collect()
}

impl Case {
    pub const ALL: [Case; 3] = [Case::I, Case::II, Case::III];

    pub fn arity(self) -> usize {
        match self {
            Case::III => 2,
            _ => 1,
        }
    }

    pub fn weights(self, params: &[f64]) -> Result<BoltzmannWeights> {
        if params.len() != self.arity() {
            return Err(Error::InvalidParams(format!("case {self:?} takes {} parameter(s)", self.arity())));
        }
        let x = params[0];
        match self {
            Case::I => BoltzmannWeights::new(x, 1.0, x + 1.0),
            Case::II => BoltzmannWeights::new(x, 1.0, x),
            Case::III => BoltzmannWeights::new(x, x, params[1]),
        }
    }

    /// 100 log-spaced samples: `x̄ ∈ [0.05, 5]` for the one-parameter cases;
    /// for case III a 10×10 grid on `[0.1, 3]²` whose two axes are offset by
    /// half a step so that no sample has `x̄ = z̄`.
    pub fn default_grid(self) -> Vec<Vec<f64>> {
        match self {
            Case::I | Case::II => log_spaced(0.05, 5.0, 100, 0.0, 99.0).into_iter().map(|x| vec![x]).collect(),
            Case::III => {
                let xs = log_spaced(0.1, 3.0, 10, 0.0, 9.0);
                let zs = log_spaced(0.1, 3.0, 10, 0.5, 10.0);
                xs.iter().flat_map(|&x| zs.iter().map(move |&z| vec![x, z])).collect()
            }
        }
    }

    /// The discriminant as printed for this family.
    pub fn printed(self, form: PrintedForm, params: &[f64]) -> f64 {
        let x = params[0];
        match (self, form) {
            (Case::I, PrintedForm::Factorized) => {
                -x * (4.0 + 3.0 * x) * (2.0 * x + 3.0).powi(2) * (2.0 * x * x + x - 2.0).powi(2)
            }
            (Case::I, PrintedForm::Expanded) => {
                -144.0 * x + 344.0 * x.powi(3) - 156.0 * x.powi(2) + 541.0 * x.powi(4)
                    - 48.0 * x.powi(8)
                    - 256.0 * x.powi(7)
                    - 424.0 * x.powi(6)
                    - 32.0 * x.powi(5)
            }
            (Case::II, PrintedForm::Factorized) => {
                -16.0 * (3.0 * x.powi(4) + 10.0 * x.powi(3) + 6.0 * x * x - 1.0) * (x - 1.0).powi(2) * (x + 1.0).powi(2)
            }
            (Case::II, PrintedForm::Expanded) => {
                -48.0 * x.powi(8) - 160.0 * x.powi(7) + 160.0 * x.powi(4) + 320.0 * x.powi(5)
                    - 160.0 * x.powi(3)
                    - 128.0 * x * x
                    + 16.0
            }
            (Case::III, PrintedForm::Factorized) => {
                let z = params[1];
                -x.powi(3)
                    * (23.0 * x.powi(3) + 30.0 * x * x * z + 15.0 * x * z * z + 4.0 * z.powi(3))
                    * (x - z).powi(2)
            }
            (Case::III, PrintedForm::Expanded) => {
                // the last term is printed as 16 z⁷ z and evaluated as such
                let z = params[1];
                -7.0 * x.powi(4) * z.powi(4) + 22.0 * x.powi(6) * z * z
                    - 4.0 * x.powi(5) * z.powi(3)
                    - 4.0 * x.powi(3) * z.powi(5)
                    - 23.0 * x.powi(8)
                    + 16.0 * z.powi(7) * z
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseSample {
    pub params: Vec<f64>,
    pub computed: f64,
    pub printed: f64,
    pub rel_dev: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseAudit {
    pub case: Case,
    pub form: PrintedForm,
    pub samples: Vec<CaseSample>,
    pub max_rel_dev: f64,
    pub all_agree: bool,
}

/// Evaluates the printed discriminant against `B² − 4AC` at each sample.
///
/// Relative deviations are taken against the larger of the two values. Both
/// values lying within `ZERO_BAND · (B² + 4|AC|)` of zero counts as exact
/// agreement, since the computed discriminant cannot resolve a zero more finely.
pub fn case_identity_check(case: Case, form: PrintedForm, grid: &[Vec<f64>]) -> Result<CaseAudit> {
    let samples = grid
        .iter()
        .map(|params| {
            let report = two_periodic_report(&case.weights(params)?)?;
            let computed = report.discriminant;
            let printed = case.printed(form, params);
            let band = ZERO_BAND * report.discriminant_scale();
            let rel_dev = if computed.abs() <= band && printed.abs() <= band {
                0.0
            } else {
                (printed - computed).abs() / computed.abs().max(printed.abs())
            };
            Ok(CaseSample { params: params.clone(), computed, printed, rel_dev, agrees: rel_dev <= AUDIT_TOL })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_rel_dev = samples.iter().map(|s| s.rel_dev).fold(0.0, f64::max);
    Ok(CaseAudit { case, form, all_agree: samples.iter().all(|s| s.agrees), samples, max_rel_dev })
}
