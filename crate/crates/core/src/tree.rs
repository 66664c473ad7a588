//! Rooted semi-infinite Cayley tree of order `k`, truncated at a fixed depth.
//!
//! Vertices are addressed by their root-to-vertex path `(i_1, ..., i_n)` with
//! every `i_m` in `1..=k`; the root is the empty path, printed as `0`.
//! Inside a [`TreeShape`] vertices are also numbered breadth-first, so the
//! root is index 0 and the children of index `j` are `k*j + 1 ..= k*j + k`.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TreeCoord {
    path: Vec<usize>,
}

impl TreeCoord {
    pub fn root() -> Self {
        Self { path: Vec::new() }
    }

    /// Builds a coordinate from branch indices. Indices are 1-based, so a zero
    /// entry is rejected here; the upper bound `k` is checked by [`TreeShape`].
    pub fn new(path: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = path.iter().find(|&&i| i == 0) {
            return Err(Error::BranchOutOfRange { index: bad, k: 0 });
        }
        Ok(Self { path })
    }

    pub fn path(&self) -> &[usize] {
        &self.path
    }

    pub fn level(&self) -> usize {
        self.path.len()
    }

    pub fn is_root(&self) -> bool {
        self.path.is_empty()
    }

    /// The semigroup product `self ∘ other`: concatenation of paths.
    pub fn concat(&self, other: &TreeCoord) -> TreeCoord {
        let mut path = Vec::with_capacity(self.path.len() + other.path.len());
        path.extend_from_slice(&self.path);
        path.extend_from_slice(&other.path);
        TreeCoord { path }
    }

    /// Translation `τ_g(x) = g ∘ x`.
    pub fn translate(&self, g: &TreeCoord) -> TreeCoord {
        g.concat(self)
    }

    /// Distance to the root modulo `m`. The vertex lies in the periodicity
    /// subgroup `G_m` exactly when this is zero.
    pub fn distance_mod(&self, m: usize) -> Result<usize> {
        if m < 2 {
            return Err(Error::InvalidPeriod(m));
        }
        Ok(self.level() % m)
    }

    pub fn child(&self, i: usize) -> TreeCoord {
        let mut path = self.path.clone();
        path.push(i);
        TreeCoord { path }
    }

    pub fn parent(&self) -> Option<TreeCoord> {
        if self.is_root() {
            None
        } else {
            Some(TreeCoord { path: self.path[..self.path.len() - 1].to_vec() })
        }
    }
}

impl fmt::Display for TreeCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            return f.write_str("0");
        }
        for (pos, i) in self.path.iter().enumerate() {
            if pos > 0 {
                f.write_str(".")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl FromStr for TreeCoord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let body = trimmed.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(trimmed);
        if body == "0" {
            return Ok(TreeCoord::root());
        }
        let sep = if body.contains(',') { ',' } else { '.' };
        let path = body
            .split(sep)
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidCoord(s.to_string()))?;
        TreeCoord::new(path).map_err(|_| Error::InvalidCoord(s.to_string()))
    }
}

impl Serialize for TreeCoord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TreeCoord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A ball: a vertex together with its direct successors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub center: TreeCoord,
    pub members: Vec<TreeCoord>,
}

/// Truncation `V_n` of the order-`k` tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreeShape {
    k: usize,
    depth: usize,
}

impl TreeShape {
    pub fn new(k: usize, depth: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("branching order k must be positive".into()));
        }
        Ok(Self { k, depth })
    }

    /// The binary tree used throughout the analytic part.
    pub fn binary(depth: usize) -> Self {
        Self { k: 2, depth }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn with_depth(&self, depth: usize) -> Self {
        Self { k: self.k, depth }
    }

    /// `|W_m|`.
    pub fn level_size(&self, m: usize) -> usize {
        self.k.pow(m as u32)
    }

    fn level_offset(&self, m: usize) -> usize {
        if self.k == 1 {
            m
        } else {
            (self.k.pow(m as u32) - 1) / (self.k - 1)
        }
    }

    /// `|V_n|`.
    pub fn vertex_count(&self) -> usize {
        self.level_offset(self.depth + 1)
    }

    /// Index range of level `m` in breadth-first numbering.
    pub fn level_range(&self, m: usize) -> Range<usize> {
        let start = self.level_offset(m);
        start..start + self.level_size(m)
    }

    pub fn level_of_index(&self, index: usize) -> usize {
        let mut m = 0;
        while self.level_offset(m + 1) <= index {
            m += 1;
        }
        m
    }

    pub fn contains(&self, x: &TreeCoord) -> bool {
        x.level() <= self.depth && x.path().iter().all(|&i| (1..=self.k).contains(&i))
    }

    fn check(&self, x: &TreeCoord) -> Result<()> {
        if let Some(&bad) = x.path().iter().find(|&&i| i > self.k) {
            return Err(Error::BranchOutOfRange { index: bad, k: self.k });
        }
        if x.level() > self.depth {
            return Err(Error::DepthExceeded { level: x.level(), depth: self.depth });
        }
        Ok(())
    }

    pub fn index_of(&self, x: &TreeCoord) -> Result<usize> {
        self.check(x)?;
        Ok(x.path().iter().fold(0, |idx, &i| idx * self.k + i))
    }

    pub fn coord_of(&self, mut index: usize) -> TreeCoord {
        let mut path = Vec::new();
        while index > 0 {
            let i = (index - 1) % self.k + 1;
            path.push(i);
            index = (index - i) / self.k;
        }
        path.reverse();
        TreeCoord { path }
    }

    /// Breadth-first indices of the children of `index`.
    pub fn child_indices(&self, index: usize) -> Range<usize> {
        self.k * index + 1..self.k * index + self.k + 1
    }

    pub fn parent_index(&self, index: usize) -> Option<usize> {
        (index > 0).then(|| (index - 1) / self.k)
    }

    /// The direct successors `S(x)`.
    pub fn successors(&self, x: &TreeCoord) -> Result<Vec<TreeCoord>> {
        self.check(x)?;
        if x.level() >= self.depth {
            return Err(Error::DepthExceeded { level: x.level(), depth: self.depth });
        }
        Ok((1..=self.k).map(|i| x.child(i)).collect())
    }

    pub fn vertices(&self) -> impl Iterator<Item = TreeCoord> + '_ {
        (0..self.vertex_count()).map(|i| self.coord_of(i))
    }

    pub fn level(&self, m: usize) -> impl Iterator<Item = TreeCoord> + '_ {
        self.level_range(m).map(|i| self.coord_of(i))
    }

    /// Nearest-neighbour pairs `(parent, child)` of `L_n` as breadth-first indices.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.vertex_count()).map(|c| ((c - 1) / self.k, c))
    }

    /// Indices of every vertex whose ball lies inside the truncation, i.e.
    /// every vertex of level below `depth`.
    pub fn ball_centers(&self) -> Range<usize> {
        0..self.level_offset(self.depth)
    }

    /// One ball per vertex of level `< depth`.
    pub fn balls(&self) -> Vec<Ball> {
        self.ball_centers()
            .map(|c| {
                let center = self.coord_of(c);
                let mut members = vec![center.clone()];
                members.extend(self.child_indices(c).map(|i| self.coord_of(i)));
                Ball { center, members }
            })
            .collect()
    }
}
