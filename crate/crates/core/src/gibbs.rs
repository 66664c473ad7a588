//! Finite-volume Gibbs distributions with boundary fields on the leaves, the
//! consistency condition between consecutive volumes, and the boundary-field
//! recursion that characterizes consistent families.
//!
//! This module works for any branching order `k` and spin count `q`. Spins
//! are zero-based indices `0..q`; the last spin `q - 1` is the reference
//! spin for field ratios.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{lambda_value, LambdaParams, Spin};
use crate::tree::{TreeCoord, TreeShape};

/// Largest state space `finite_volume_measure` will enumerate; `3^13`.
pub const MAX_STATES: usize = 1_594_323;

/// Maximum absolute deviation accepted by [`is_consistent`].
pub const CONSISTENCY_TOL: f64 = 1e-10;

/// A symmetric nearest-neighbour coupling on `q` spins at inverse
/// temperature `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct Interaction {
    q: usize,
    beta: f64,
    lambda: Vec<f64>,
}

impl Interaction {
    pub fn new(q: usize, beta: f64, lambda: Vec<f64>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParams(format!("need at least two spins, got q={q}")));
        }
        if lambda.len() != q * q {
            return Err(Error::ShapeMismatch(format!(
                "coupling matrix has {} entries, expected {}",
                lambda.len(),
                q * q
            )));
        }
        for i in 0..q {
            for j in 0..i {
                if lambda[i * q + j] != lambda[j * q + i] {
                    return Err(Error::InvalidParams(format!("coupling matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParams(format!("beta must be positive, got {beta}")));
        }
        Ok(Self { q, beta, lambda })
    }

    /// The three-state λ-model.
    pub fn from_lambda(p: &LambdaParams) -> Self {
        let lambda = Spin::ALL.iter().flat_map(|&i| Spin::ALL.iter().map(move |&j| lambda_value(i, j, p))).collect();
        Self { q: 3, beta: p.beta, lambda }
    }

    /// `λ(i, j) = -J δ_ij` on `q` spins.
    pub fn potts(q: usize, j: f64, beta: f64) -> Result<Self> {
        let lambda = (0..q * q).map(|n| if n / q == n % q { -j } else { 0.0 }).collect();
        Self::new(q, beta, lambda)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn lambda(&self, i: usize, j: usize) -> f64 {
        self.lambda[i * self.q + j]
    }

    /// `exp(β λ(i, j))`.
    pub fn boltzmann(&self, i: usize, j: usize) -> f64 {
        (self.beta * self.lambda(i, j)).exp()
    }
}

/// Vertex-indexed vectors over a truncation; absent entries are `None`.
#[derive(Debug, Clone, PartialEq)]
struct VertexVectors {
    shape: TreeShape,
    width: usize,
    values: Vec<Option<Vec<f64>>>,
}

impl VertexVectors {
    fn new(shape: TreeShape, width: usize) -> Self {
        Self { shape, width, values: vec![None; shape.vertex_count()] }
    }

    fn set(&mut self, x: &TreeCoord, v: Vec<f64>) -> Result<()> {
        if v.len() != self.width {
            return Err(Error::ShapeMismatch(format!("vector of length {} where {} expected", v.len(), self.width)));
        }
        let i = self.shape.index_of(x)?;
        self.values[i] = Some(v);
        Ok(())
    }

    fn at(&self, index: usize) -> Result<&[f64]> {
        self.values
            .get(index)
            .and_then(|v| v.as_deref())
            .ok_or_else(|| Error::MissingField(self.shape.coord_of(index).to_string()))
    }
}

/// External fields `h_x = (h_{1,x}, ..., h_{q,x})`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFields(VertexVectors);

impl BoundaryFields {
    pub fn new(shape: TreeShape, q: usize) -> Self {
        Self(VertexVectors::new(shape, q))
    }

    /// The same field vector on every vertex of the truncation.
    pub fn uniform(shape: TreeShape, h: Vec<f64>) -> Self {
        let width = h.len();
        Self(VertexVectors { shape, width, values: vec![Some(h); shape.vertex_count()] })
    }

    pub fn shape(&self) -> TreeShape {
        self.0.shape
    }

    pub fn q(&self) -> usize {
        self.0.width
    }

    pub fn set(&mut self, x: &TreeCoord, h: Vec<f64>) -> Result<()> {
        self.0.set(x, h)
    }

    pub fn get(&self, x: &TreeCoord) -> Result<&[f64]> {
        self.0.at(self.0.shape.index_of(x)?)
    }

    pub fn at(&self, index: usize) -> Result<&[f64]> {
        self.0.at(index)
    }

    /// Field ratios `u_{k,x} = exp(h_{k,x} - h_{q,x})` wherever a field is set.
    pub fn to_ratios(&self) -> FieldRatios {
        let values = self
            .0
            .values
            .iter()
            .map(|h| {
                h.as_ref().map(|h| {
                    let last = h[h.len() - 1];
                    h[..h.len() - 1].iter().map(|&hk| (hk - last).exp()).collect()
                })
            })
            .collect();
        FieldRatios(VertexVectors { shape: self.0.shape, width: self.0.width - 1, values })
    }
}

/// Positive ratios `u_{k,x}`, `k = 1..q-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldRatios(VertexVectors);

fn check_positive(u: &[f64]) -> Result<()> {
    match u.iter().find(|&&v| !(v > 0.0 && v.is_finite())) {
        Some(bad) => Err(Error::Domain(format!("field ratio must be positive, got {bad}"))),
        None => Ok(()),
    }
}

impl FieldRatios {
    pub fn new(shape: TreeShape, q: usize) -> Self {
        Self(VertexVectors::new(shape, q - 1))
    }

    pub fn shape(&self) -> TreeShape {
        self.0.shape
    }

    pub fn set(&mut self, x: &TreeCoord, u: Vec<f64>) -> Result<()> {
        check_positive(&u)?;
        self.0.set(x, u)
    }

    pub fn get(&self, x: &TreeCoord) -> Result<&[f64]> {
        self.0.at(self.0.shape.index_of(x)?)
    }

    pub fn at(&self, index: usize) -> Result<&[f64]> {
        self.0.at(index)
    }
}

/// Exact distribution on `q^{|V_n|}` configurations, indexed by code: the
/// spin of breadth-first vertex `i` is base-`q` digit `i` of the code.
#[derive(Debug, Clone, Serialize)]
pub struct FiniteVolumeMeasure {
    #[serde(skip)]
    pub shape: TreeShape,
    pub q: usize,
    pub probabilities: Vec<f64>,
    pub log_partition: f64,
}

impl FiniteVolumeMeasure {
    pub fn depth(&self) -> usize {
        self.shape.depth()
    }

    /// `Z_n`.
    pub fn partition(&self) -> f64 {
        self.log_partition.exp()
    }

    pub fn configuration(&self, code: usize) -> Vec<usize> {
        decode(code, self.q, self.shape.vertex_count())
    }

    /// Configuration string: one digit per vertex (spins printed 1-based).
    pub fn label(&self, code: usize) -> String {
        self.configuration(code).iter().map(|s| (s + 1).to_string()).collect::<Vec<_>>().join(if self.q > 9 {
            ","
        } else {
            ""
        })
    }

    /// Summing out the last level: the left side of the consistency condition.
    pub fn marginal_without_leaves(&self) -> Vec<f64> {
        let inner = self.shape.with_depth(self.depth().saturating_sub(1)).vertex_count();
        let stride = self.q.pow(inner as u32);
        let mut out = vec![0.0; stride];
        for (code, p) in self.probabilities.iter().enumerate() {
            out[code % stride] += p;
        }
        out
    }

    /// CSV rows `configuration,probability`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("configuration,probability\n");
        for (code, p) in self.probabilities.iter().enumerate() {
            out.push_str(&self.label(code));
            out.push(',');
            out.push_str(&crate::format::fmt_g(*p));
            out.push('\n');
        }
        out
    }
}

fn decode(mut code: usize, q: usize, n: usize) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let s = code % q;
            code /= q;
            s
        })
        .collect()
}

fn state_count(q: usize, vertices: usize) -> Result<usize> {
    let mut total: usize = 1;
    for _ in 0..vertices {
        total = total
            .checked_mul(q)
            .filter(|&t| t <= MAX_STATES)
            .ok_or_else(|| Error::Capacity(format!("q^|V_n| = {q}^{vertices} exceeds {MAX_STATES} states")))?;
    }
    Ok(total)
}

/// `μ^{(n)}(σ) ∝ exp(β H_n(σ) + Σ_{x ∈ W_n} h_{σ(x), x})`.
pub fn finite_volume_measure(inter: &Interaction, shape: TreeShape, h: &BoundaryFields) -> Result<FiniteVolumeMeasure> {
    let q = inter.q();
    if h.q() != q {
        return Err(Error::ShapeMismatch(format!("fields have {} components, model has q={q}", h.q())));
    }
    let n = shape.vertex_count();
    let states = state_count(q, n)?;
    let leaves = shape.level_range(shape.depth());
    let leaf_fields =
        leaves.clone().map(|i| h.get(&shape.coord_of(i)).map(|v| v.to_vec())).collect::<Result<Vec<_>>>()?;

    let log_weight = |code: usize| {
        let s = decode(code, q, n);
        let energy: f64 = shape.edges().map(|(x, y)| inter.lambda(s[x], s[y])).sum();
        let field: f64 = leaves.clone().zip(&leaf_fields).map(|(i, hx)| hx[s[i]]).sum();
        inter.beta() * energy + field
    };
    let logs: Vec<f64> = (0..states).into_par_iter().map(log_weight).collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    Ok(FiniteVolumeMeasure {
        shape,
        q,
        probabilities: weights.into_iter().map(|w| w / total).collect(),
        log_partition: max + total.ln(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub max_deviation: f64,
    pub pass: bool,
}

/// Compares `Σ_{ω_n} μ^{(n)}(σ_{n-1} ∨ ω_n)` against `μ^{(n-1)}(σ_{n-1})`,
/// the former built from the fields on `W_n`, the latter from those on
/// `W_{n-1}`.
pub fn is_consistent(inter: &Interaction, shape: TreeShape, h: &BoundaryFields) -> Result<ConsistencyReport> {
    if shape.depth() == 0 {
        return Err(Error::InvalidParams("consistency needs depth n >= 1".into()));
    }
    let outer = finite_volume_measure(inter, shape, h)?;
    let inner = finite_volume_measure(inter, shape.with_depth(shape.depth() - 1), h)?;
    let max_deviation = outer
        .marginal_without_leaves()
        .iter()
        .zip(&inner.probabilities)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(ConsistencyReport { max_deviation, pass: max_deviation < CONSISTENCY_TOL })
}

/// One step of the boundary-field recursion: the ratio vector at a vertex
/// from the ratio vectors at its successors.
pub fn push_forward(children: &[&[f64]], inter: &Interaction) -> Result<Vec<f64>> {
    let q = inter.q();
    for u in children {
        if u.len() != q - 1 {
            return Err(Error::ShapeMismatch(format!("ratio vector of length {} for q={q}", u.len())));
        }
        check_positive(u)?;
    }
    let last = q - 1;
    let row = |m: usize, u: &[f64]| -> f64 {
        (0..last).map(|j| inter.boltzmann(m, j) * u[j]).sum::<f64>() + inter.boltzmann(m, last)
    };
    Ok((0..last).map(|m| children.iter().map(|u| row(m, u) / row(last, u)).product()).collect())
}

/// Applies [`push_forward`] from the leaves `W_n` up to the root.
pub fn propagate(inter: &Interaction, leaves: &FieldRatios) -> Result<FieldRatios> {
    let shape = leaves.shape();
    let mut out = leaves.clone();
    for level in (0..shape.depth()).rev() {
        for x in shape.level_range(level) {
            let kids = shape.child_indices(x).map(|c| out.at(c).map(|u| u.to_vec())).collect::<Result<Vec<_>>>()?;
            let refs: Vec<&[f64]> = kids.iter().map(|v| v.as_slice()).collect();
            out.0.values[x] = Some(push_forward(&refs, inter)?);
        }
    }
    Ok(out)
}

/// `h_{k,x} = ln u_{k,x} + gauge`, `h_{q,x} = gauge`.
pub fn fields_from_ratios(u: &FieldRatios, gauge: f64) -> Result<BoundaryFields> {
    let values =
        u.0.values
            .iter()
            .map(|v| {
                v.as_ref()
                    .map(|v| {
                        check_positive(v)?;
                        let mut h: Vec<f64> = v.iter().map(|r| r.ln() + gauge).collect();
                        h.push(gauge);
                        Ok(h)
                    })
                    .transpose()
            })
            .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryFields(VertexVectors { shape: u.0.shape, width: u.0.width + 1, values }))
}

/// The normalizer `a(x)` with `Π_{y ∈ S(x)} Σ_j exp(βλ(k,j) + h_{j,y}) = a(x) exp(h_{k,x})`.
/// Returns the value obtained for every `k`; they coincide exactly when the
/// fields at `x` and its successors satisfy the recursion.
pub fn vertex_normalizers(inter: &Interaction, own: &[f64], children: &[&[f64]]) -> Vec<f64> {
    let q = inter.q();
    (0..q)
        .map(|k| {
            let prod: f64 = children
                .iter()
                .map(|hy| (0..q).map(|j| (inter.beta() * inter.lambda(k, j) + hy[j]).exp()).sum::<f64>())
                .product();
            prod / own[k].exp()
        })
        .collect()
}

/// `A_m = Π_{x ∈ W_m} a(x)`, taking `a(x)` at the reference spin.
pub fn level_normalizer(inter: &Interaction, h: &BoundaryFields, m: usize) -> Result<f64> {
    let shape = h.shape();
    if m >= shape.depth() {
        return Err(Error::DepthExceeded { level: m, depth: shape.depth() });
    }
    let mut total = 1.0;
    for x in shape.level_range(m) {
        let kids = shape.child_indices(x).map(|c| h.at(c)).collect::<Result<Vec<_>>>()?;
        total *= vertex_normalizers(inter, h.at(x)?, &kids)[inter.q() - 1];
    }
    Ok(total)
}
