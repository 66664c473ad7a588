//! Parameter sweeps over `(a, b, c, β)` or `(x̄, ȳ, z̄)`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{count_ti_roots, two_periodic_report, BoltzmannWeights, Regime};
use crate::error::{Error, Result};
use crate::format::{fmt_g, round_g};
use crate::model::LambdaParams;

pub const CSV_HEADER: &str = "a,b,c,beta,xw,yw,zw,a_can,b_can,ti_count,eps1,eps2,B,D,two_periodic,phase_transition";

const WEIGHT_NAMES: [&str; 3] = ["xw", "yw", "zw"];
const COUPLING_NAMES: [&str; 4] = ["a", "b", "c", "beta"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Weights,
    Couplings,
}

impl Space {
    fn names(self) -> &'static [&'static str] {
        match self {
            Space::Weights => &WEIGHT_NAMES,
            Space::Couplings => &COUPLING_NAMES,
        }
    }
}

/// One axis of the grid. A tied axis takes `scale · tie + offset`, where
/// `tie` names another axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisSpec {
    Range {
        name: String,
        start: f64,
        stop: f64,
        step: f64,
    },
    Fixed {
        name: String,
        value: f64,
    },
    Tied {
        name: String,
        tie: String,
        #[serde(default = "one")]
        scale: f64,
        #[serde(default)]
        offset: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl AxisSpec {
    pub fn name(&self) -> &str {
        match self {
            AxisSpec::Range { name, .. } | AxisSpec::Fixed { name, .. } | AxisSpec::Tied { name, .. } => name,
        }
    }

    fn values(&self) -> Result<Vec<f64>> {
        match *self {
            AxisSpec::Range { ref name, start, stop, step } => {
                if !(step > 0.0 && step.is_finite() && start.is_finite() && stop.is_finite()) {
                    return Err(Error::InvalidParams(format!("axis {name}: step must be positive and finite")));
                }
                if stop < start {
                    return Ok(Vec::new());
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
                Ok((0..n).map(|i| start + i as f64 * step).collect())
            }
            AxisSpec::Fixed { value, .. } => Ok(vec![value]),
            AxisSpec::Tied { .. } => Ok(Vec::new()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Inferred from the axis names when absent.
    #[serde(default)]
    pub space: Option<Space>,
    pub axes: Vec<AxisSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridPoint {
    Weights(BoltzmannWeights),
    Couplings(LambdaParams),
}

impl SweepConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidParams(format!("sweep config: {e}")))
    }

    pub fn resolved_space(&self) -> Result<Space> {
        if let Some(s) = self.space {
            return Ok(s);
        }
        let first = self.axes.first().ok_or_else(|| Error::InvalidParams("sweep config has no axes".into()))?;
        if WEIGHT_NAMES.contains(&first.name()) {
            Ok(Space::Weights)
        } else if COUPLING_NAMES.contains(&first.name()) {
            Ok(Space::Couplings)
        } else {
            Err(Error::InvalidParams(format!("unknown axis {}", first.name())))
        }
    }

    /// Grid points in row-major order, the first axis varying slowest.
    pub fn points(&self) -> Result<Vec<GridPoint>> {
        let space = self.resolved_space()?;
        let names = space.names();
        let slot = |name: &str| {
            names
                .iter()
                .position(|n| *n == name)
                .ok_or_else(|| Error::InvalidParams(format!("axis {name} does not belong to the {space:?} space")))
        };

        let mut seen = vec![false; names.len()];
        let mut free = Vec::new();
        let mut tied = Vec::new();
        for axis in &self.axes {
            let i = slot(axis.name())?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidParams(format!("axis {} given twice", axis.name())));
            }
            match axis {
                AxisSpec::Tied { tie, scale, offset, .. } => tied.push((i, slot(tie)?, *scale, *offset)),
                _ => free.push((i, axis.values()?)),
            }
        }
        if space == Space::Couplings && !seen[3] {
            free.push((3, vec![1.0]));
            seen[3] = true;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidParams(format!("axis {} is missing", names[i])));
        }
        for &(i, j, ..) in &tied {
            if tied.iter().any(|t| t.0 == j) {
                return Err(Error::InvalidParams(format!("axis {} is tied to another tied axis", names[i])));
            }
        }

        let total: usize = free.iter().map(|(_, v)| v.len()).product();
        if total == 0 {
            return Err(Error::InvalidParams("sweep grid is empty".into()));
        }
        let mut out = Vec::with_capacity(total);
        let mut vals = vec![0.0; names.len()];
        for mut idx in 0..total {
            for (i, v) in free.iter().rev() {
                vals[*i] = v[idx % v.len()];
                idx /= v.len();
            }
            for &(i, j, scale, offset) in &tied {
                vals[i] = scale * vals[j] + offset;
            }
            out.push(match space {
                Space::Weights => GridPoint::Weights(BoltzmannWeights::new(vals[0], vals[1], vals[2])?),
                Space::Couplings => GridPoint::Couplings(LambdaParams::new(vals[0], vals[1], vals[2], vals[3])?),
            });
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub beta: f64,
    pub xw: f64,
    pub yw: f64,
    pub zw: f64,
    pub a_can: f64,
    pub b_can: f64,
    pub ti_count: usize,
    pub eps1: Option<f64>,
    pub eps2: Option<f64>,
    #[serde(rename = "B")]
    pub big_b: f64,
    #[serde(rename = "D")]
    pub big_d: f64,
    pub two_periodic: bool,
    pub phase_transition: bool,
    #[serde(skip)]
    pub discriminant_scale: f64,
}

pub fn evaluate_point(point: &GridPoint) -> Result<SweepRow> {
    let (p, w) = match *point {
        GridPoint::Weights(w) => (w.unit_beta_couplings(), w),
        GridPoint::Couplings(p) => (p, checked_weights(&p)?),
    };
    let ti = count_ti_roots(&w);
    let per = two_periodic_report(&w)?;
    Ok(SweepRow {
        a: p.a,
        b: p.b,
        c: p.c,
        beta: p.beta,
        xw: w.xw,
        yw: w.yw,
        zw: w.zw,
        a_can: ti.canonical.a_can,
        b_can: ti.canonical.b_can,
        ti_count: ti.ti_roots.len(),
        eps1: ti.thresholds.map(|t| t.eps1),
        eps2: ti.thresholds.map(|t| t.eps2),
        big_b: per.quad[1],
        big_d: per.discriminant,
        two_periodic: per.two_periodic_exists,
        phase_transition: ti.regime != Regime::Unique || per.two_periodic_exists,
        discriminant_scale: per.discriminant_scale(),
    })
}

fn checked_weights(p: &LambdaParams) -> Result<BoltzmannWeights> {
    let w = BoltzmannWeights::from_params(p);
    BoltzmannWeights::new(w.xw, w.yw, w.zw)
}

/// Evaluates every point, in parallel when `threads` allows, keeping grid order.
pub fn sweep(points: &[GridPoint], threads: Option<usize>) -> Result<Vec<SweepRow>> {
    let run = || points.par_iter().map(evaluate_point).collect::<Result<Vec<_>>>();
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_g).unwrap_or_default()
}

impl SweepRow {
    pub fn csv_line(&self) -> String {
        [
            fmt_g(self.a),
            fmt_g(self.b),
            fmt_g(self.c),
            fmt_g(self.beta),
            fmt_g(self.xw),
            fmt_g(self.yw),
            fmt_g(self.zw),
            fmt_g(self.a_can),
            fmt_g(self.b_can),
            self.ti_count.to_string(),
            opt(self.eps1),
            opt(self.eps2),
            fmt_g(self.big_b),
            fmt_g(self.big_d),
            self.two_periodic.to_string(),
            self.phase_transition.to_string(),
        ]
        .join(",")
    }

    pub fn json_line(&self) -> String {
        let r = |x: f64| serde_json::Value::from(round_g(x));
        let o = |x: Option<f64>| x.map_or(serde_json::Value::Null, r);
        serde_json::json!({
            "a": r(self.a), "b": r(self.b), "c": r(self.c), "beta": r(self.beta),
            "xw": r(self.xw), "yw": r(self.yw), "zw": r(self.zw),
            "a_can": r(self.a_can), "b_can": r(self.b_can), "ti_count": self.ti_count,
            "eps1": o(self.eps1), "eps2": o(self.eps2),
            "B": r(self.big_b), "D": r(self.big_d),
            "two_periodic": self.two_periodic, "phase_transition": self.phase_transition,
        })
        .to_string()
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    Ok(())
}

pub fn write_json_lines<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    for row in rows {
        writeln!(out, "{}", row.json_line())?;
    }
    Ok(())
}

/// Indices `i` with a strict sign change between `values[i]` and `values[i + 1]`.
/// Entries with `|v| ≤ zero_tol[i]` count as zero and are skipped over, so a
/// touching zero is not reported.
pub fn sign_changes(values: &[f64], zero_tol: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut last: Option<(usize, f64)> = None;
    for (i, (&v, &t)) in values.iter().zip(zero_tol).enumerate() {
        if v.abs() <= t {
            continue;
        }
        if let Some((j, s)) = last {
            if s != v.signum() {
                out.push(j);
            }
        }
        last = Some((i, v.signum()));
    }
    out
}

/// Bisects `f` on `[lo, hi]`, which must bracket a sign change, down to
/// `1e-15` relative width.
pub fn bisect_sign_change(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Domain(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * mid.abs() {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
