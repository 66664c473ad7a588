//! The three-state λ coupling, Hamiltonians on finite truncations, ball
//! energies and the classification of coupling space into regions `A1..A6`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{TreeCoord, TreeShape};

/// Number of successors per ball in the analytic part of the crate.
pub const BALL_ARITY: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spin(u8);

impl Spin {
    pub const ALL: [Spin; 3] = [Spin(1), Spin(2), Spin(3)];

    pub fn new(value: u8) -> Result<Self> {
        if (1..=3).contains(&value) {
            Ok(Spin(value))
        } else {
            Err(Error::InvalidSpin(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Zero-based index, used when handing spins to the general-`q` code.
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Spin {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.0)
    }
}

impl<'de> Deserialize<'de> for Spin {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Spin::new(u8::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

fn default_beta() -> f64 {
    1.0
}

/// Couplings of the λ function plus the inverse temperature.
///
/// `a` is the energy of spins two apart, `b` of neighbouring spins, `c` of
/// equal spins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct LambdaParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub beta: f64,
}

#[derive(Deserialize)]
struct RawParams {
    a: f64,
    b: f64,
    c: f64,
    #[serde(default = "default_beta")]
    beta: f64,
}

impl TryFrom<RawParams> for LambdaParams {
    type Error = Error;

    fn try_from(r: RawParams) -> Result<Self> {
        LambdaParams::new(r.a, r.b, r.c, r.beta)
    }
}

impl LambdaParams {
    pub fn new(a: f64, b: f64, c: f64, beta: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::InvalidParams(format!("couplings must be finite: ({a}, {b}, {c})")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParams(format!("beta must be positive, got {beta}")));
        }
        Ok(Self { a, b, c, beta })
    }

    /// Couplings at unit inverse temperature.
    pub fn couplings(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(a, b, c, 1.0)
    }

    /// The Potts special case `λ(i, j) = -J δ_ij`.
    pub fn potts(j: f64, beta: f64) -> Result<Self> {
        Self::new(0.0, 0.0, -j, beta)
    }
}

pub fn lambda_value(i: Spin, j: Spin, p: &LambdaParams) -> f64 {
    match i.0.abs_diff(j.0) {
        0 => p.c,
        1 => p.b,
        _ => p.a,
    }
}

/// A spin assignment on every vertex of a truncation, stored breadth-first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    shape: TreeShape,
    spins: Vec<Spin>,
}

impl Configuration {
    pub fn new(shape: TreeShape, spins: Vec<Spin>) -> Result<Self> {
        if spins.len() != shape.vertex_count() {
            return Err(Error::ShapeMismatch(format!("{} spins for {} vertices", spins.len(), shape.vertex_count())));
        }
        Ok(Self { shape, spins })
    }

    pub fn constant(shape: TreeShape, spin: Spin) -> Self {
        Self { shape, spins: vec![spin; shape.vertex_count()] }
    }

    /// Builds a configuration from an explicit vertex map; every vertex of the
    /// truncation must be present.
    pub fn from_map(shape: TreeShape, map: &BTreeMap<TreeCoord, Spin>) -> Result<Self> {
        let spins = shape
            .vertices()
            .map(|x| map.get(&x).copied().ok_or_else(|| Error::MissingSpin(x.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { shape, spins })
    }

    pub fn shape(&self) -> TreeShape {
        self.shape
    }

    pub fn spins(&self) -> &[Spin] {
        &self.spins
    }

    pub fn spin_at(&self, index: usize) -> Spin {
        self.spins[index]
    }

    pub fn get(&self, x: &TreeCoord) -> Result<Spin> {
        Ok(self.spins[self.shape.index_of(x)?])
    }

    /// Restriction to a shallower truncation.
    pub fn truncate(&self, depth: usize) -> Result<Self> {
        if depth > self.shape.depth() {
            return Err(Error::DepthExceeded { level: depth, depth: self.shape.depth() });
        }
        let shape = self.shape.with_depth(depth);
        Ok(Self { shape, spins: self.spins[..shape.vertex_count()].to_vec() })
    }

    /// Spins of level `m`, or `None` when the level is not constant.
    pub fn level_value(&self, m: usize) -> Option<Spin> {
        let mut it = self.spins[self.shape.level_range(m)].iter();
        let first = *it.next()?;
        it.all(|&s| s == first).then_some(first)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.spins {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// `Σ_{<x,y> ∈ L_n} λ(σ(x), σ(y))`.
pub fn hamiltonian(sigma: &Configuration, p: &LambdaParams) -> f64 {
    let shape = sigma.shape;
    shape.edges().map(|(x, y)| lambda_value(sigma.spins[x], sigma.spins[y], p)).sum()
}

/// Energy difference `H(σ, φ)`, accumulated edge by edge.
pub fn relative_hamiltonian(sigma: &Configuration, phi: &Configuration, p: &LambdaParams) -> Result<f64> {
    if sigma.shape != phi.shape {
        return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", sigma.shape, phi.shape)));
    }
    Ok(sigma
        .shape
        .edges()
        .map(|(x, y)| lambda_value(sigma.spins[x], sigma.spins[y], p) - lambda_value(phi.spins[x], phi.spins[y], p))
        .sum())
}

/// `U(σ_b)`: half the sum of λ over the edges from the ball centre to its
/// children.
pub fn ball_energy(center: Spin, children: &[Spin], p: &LambdaParams) -> Result<f64> {
    if children.len() != BALL_ARITY {
        return Err(Error::Arity { expected: BALL_ARITY, got: children.len() });
    }
    Ok(0.5 * children.iter().map(|&ch| lambda_value(center, ch, p)).sum::<f64>())
}

/// Sum of ball energies over all balls of the truncation. Each edge lies in
/// exactly one ball, so this is half the Hamiltonian.
pub fn total_ball_energy(sigma: &Configuration, p: &LambdaParams) -> Result<f64> {
    let shape = sigma.shape;
    if shape.k() != BALL_ARITY {
        return Err(Error::Arity { expected: BALL_ARITY, got: shape.k() });
    }
    let mut total = 0.0;
    for center in shape.ball_centers() {
        let children: Vec<Spin> = shape.child_indices(center).map(|i| sigma.spins[i]).collect();
        total += ball_energy(sigma.spins[center], &children, p)?;
    }
    Ok(total)
}

/// The six possible ball energies `U1..U6`.
pub fn ball_energy_levels(p: &LambdaParams) -> [f64; 6] {
    [p.a, (p.a + p.b) / 2.0, (p.a + p.c) / 2.0, p.b, (p.b + p.c) / 2.0, p.c]
}

pub fn minimal_ball_energy(p: &LambdaParams) -> f64 {
    ball_energy_levels(p).into_iter().fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
}

impl Region {
    pub const ALL: [Region; 6] = [Region::A1, Region::A2, Region::A3, Region::A4, Region::A5, Region::A6];

    pub fn ordinal(self) -> usize {
        self as usize + 1
    }

    /// A coupling triple inside the region (on its defining ties for the
    /// equality regions `A2`, `A3`, `A5`).
    pub fn representative(self) -> LambdaParams {
        let (a, b, c) = match self {
            Region::A1 => (-1.0, 0.0, 0.0),
            Region::A2 => (-1.0, -1.0, 0.0),
            Region::A3 => (-1.0, 0.0, -1.0),
            Region::A4 => (0.0, -1.0, 0.0),
            Region::A5 => (0.0, -1.0, -1.0),
            Region::A6 => (0.0, 0.0, -1.0),
        };
        LambdaParams { a, b, c, beta: 1.0 }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}", self.ordinal())
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digit = s
            .trim()
            .strip_prefix(['A', 'a'])
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|d| (1..=6).contains(d))
            .ok_or_else(|| Error::InvalidParams(format!("unknown region {s:?}")))?;
        Ok(Region::ALL[digit - 1])
    }
}

impl Serialize for Region {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionReport {
    #[serde(rename = "regions")]
    pub active_regions: Vec<Region>,
    pub minimal_energy: f64,
    pub boundary: bool,
    pub energies: [f64; 6],
}

/// All regions whose ball energy is within `tol` of the minimum.
pub fn classify_region(p: &LambdaParams, tol: f64) -> RegionReport {
    let energies = ball_energy_levels(p);
    let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = tol.max(0.0);
    let active_regions: Vec<Region> =
        Region::ALL.into_iter().zip(energies).filter(|&(_, u)| u <= min + tol).map(|(r, _)| r).collect();
    RegionReport { boundary: active_regions.len() > 1, active_regions, minimal_energy: min, energies }
}
