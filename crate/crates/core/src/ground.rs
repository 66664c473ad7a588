//! Ground states on finite truncations of the binary tree.
//!
//! A configuration is a ground state when every ball attains the minimal
//! ball energy. The constructions here are level-constant: every vertex of
//! level `m` carries the same spin `k_m`.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ball_energy, minimal_ball_energy, Configuration, LambdaParams, Region, Spin};
use crate::tree::{TreeCoord, TreeShape};

/// Deepest truncation `brute_force_minima` will enumerate (`3^7` states).
pub const MAX_BRUTE_FORCE_DEPTH: usize = 2;

/// Spins per level, either finite or repeated with a period.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LevelSequence {
    pub entries: Vec<Spin>,
    pub period: Option<usize>,
}

impl LevelSequence {
    pub fn periodic(entries: Vec<Spin>) -> Self {
        let period = Some(entries.len());
        Self { entries, period }
    }

    pub fn finite(entries: Vec<Spin>) -> Self {
        Self { entries, period: None }
    }

    pub fn value_at(&self, level: usize) -> Option<Spin> {
        match self.period {
            Some(p) if p > 0 => Some(self.entries[level % p]),
            _ => self.entries.get(level).copied(),
        }
    }

    fn from_values(values: &[u8]) -> Self {
        Self::periodic(values.iter().map(|&v| Spin::new(v).expect("literal spin")).collect())
    }
}

/// `σ(x) = k_m` for `x ∈ W_m`, on `V_n`.
pub fn realize(seq: &LevelSequence, depth: usize) -> Result<Configuration> {
    let levels = (0..=depth)
        .map(|m| seq.value_at(m))
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::Underspecified { len: seq.entries.len(), levels: depth + 1 })?;
    let shape = TreeShape::binary(depth);
    let spins = (0..shape.vertex_count()).map(|i| levels[shape.level_of_index(i)]).collect();
    Configuration::new(shape, spins)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundStateCheck {
    pub holds: bool,
    /// First ball centre whose energy exceeds the minimum.
    pub witness: Option<TreeCoord>,
}

pub fn is_ground_state(sigma: &Configuration, p: &LambdaParams, tol: f64) -> GroundStateCheck {
    let shape = sigma.shape();
    let bound = minimal_ball_energy(p) + tol;
    for center in shape.ball_centers() {
        let children: Vec<Spin> = shape.child_indices(center).map(|i| sigma.spin_at(i)).collect();
        let u = ball_energy(sigma.spin_at(center), &children, p).unwrap_or(f64::INFINITY);
        if u > bound {
            return GroundStateCheck { holds: false, witness: Some(shape.coord_of(center)) };
        }
    }
    GroundStateCheck { holds: true, witness: None }
}

/// Uncountable ground-state families, parameterized by infinite sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// Root spin 1, consecutive levels always differ.
    AdjacentDistinct,
    /// Root spin 2, every other level in `{2, 3}`.
    TwoThree,
}

impl Family {
    pub fn for_region(region: Region) -> Result<Self> {
        match region {
            Region::A2 => Ok(Family::AdjacentDistinct),
            Region::A5 => Ok(Family::TwoThree),
            other => Err(Error::UnsupportedRegion(other.to_string())),
        }
    }

    fn root(self) -> Spin {
        match self {
            Family::AdjacentDistinct => Spin::ALL[0],
            Family::TwoThree => Spin::ALL[1],
        }
    }

    /// The two admissible spins at a level given the spin above it.
    fn choices(self, prev: Spin) -> [Spin; 2] {
        match self {
            Family::AdjacentDistinct => {
                let mut it = Spin::ALL.into_iter().filter(|&s| s != prev);
                [it.next().unwrap(), it.next().unwrap()]
            }
            Family::TwoThree => [Spin::ALL[1], Spin::ALL[2]],
        }
    }

    /// Level values `0..=depth` selected by the bits of `code`.
    fn prefix(self, code: u64, depth: usize) -> Vec<Spin> {
        let mut levels = vec![self.root()];
        for m in 1..=depth {
            let bit = ((code >> (m - 1)) & 1) as usize;
            levels.push(self.choices(levels[m - 1])[bit]);
        }
        levels
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundStateCatalog {
    pub region: Region,
    pub generators: Vec<LevelSequence>,
    pub families: Vec<Family>,
}

fn constants() -> Vec<LevelSequence> {
    Spin::ALL.iter().map(|&s| LevelSequence::periodic(vec![s])).collect()
}

/// `[1, 2, 3, 2, 3, ...]` of the given length.
fn alternating(len: usize) -> LevelSequence {
    let v: Vec<u8> = (0..len)
        .map(|i| {
            if i == 0 {
                1
            } else if i % 2 == 1 {
                2
            } else {
                3
            }
        })
        .collect();
    LevelSequence::from_values(&v)
}

/// `[head, tail, tail, ..., tail]` of the given length.
fn head_then(head: u8, tail: u8, len: usize) -> LevelSequence {
    let v: Vec<u8> = (0..len).map(|i| if i == 0 { head } else { tail }).collect();
    LevelSequence::from_values(&v)
}

/// The level-periodic ground states constructed for each region.
///
/// `n` is the largest family index: `A2` yields periods `2m` and `2m+1`,
/// `A4` period `3m+1`, for `m = 1..=n`; `A3` and `A5` yield periods `2..=n`.
///
/// The `A4` sequences with `m ≥ 2` repeat spin 2 across the junction of two
/// blocks, so they certify only through depth 3.
pub fn generators_for(region: Region, n: usize) -> GroundStateCatalog {
    let (generators, families) = match region {
        Region::A1 => (vec![LevelSequence::from_values(&[1, 3]), LevelSequence::from_values(&[3, 1])], vec![]),
        Region::A2 => {
            let gens = (1..=n).flat_map(|m| [alternating(2 * m), alternating(2 * m + 1)]).collect();
            (gens, vec![Family::AdjacentDistinct])
        }
        Region::A3 => {
            let mut gens = constants();
            gens.extend((2..=n).map(|len| head_then(1, 3, len)));
            (gens, vec![])
        }
        Region::A4 => {
            let gens = (1..=n)
                .map(|m| {
                    let mut v = vec![1u8];
                    for _ in 0..m {
                        v.extend_from_slice(&[2, 3, 2]);
                    }
                    LevelSequence::from_values(&v)
                })
                .collect();
            (gens, vec![])
        }
        Region::A5 => {
            let mut gens = constants();
            gens.extend((2..=n).map(|len| head_then(1, 2, len)));
            (gens, vec![Family::TwoThree])
        }
        Region::A6 => (constants(), vec![]),
    };
    GroundStateCatalog { region, generators, families }
}

/// Draws up to `count` distinct members of the region's uncountable family,
/// distinct by their level prefix through `depth`, realized on `V_depth`.
pub fn sample_family(region: Region, count: usize, seed: u64, depth: usize) -> Result<Vec<Configuration>> {
    let family = Family::for_region(region)?;
    let total: Option<u64> = (depth < 63).then(|| 1u64 << depth);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let codes: Vec<u64> = match total {
        Some(t) if (count as u64) >= t => (0..t).collect(),
        Some(t) if t <= 1 << 16 && (count as u64) * 2 > t => {
            let mut all: Vec<u64> = (0..t).collect();
            all.shuffle(&mut rng);
            all.truncate(count);
            all
        }
        _ => {
            let mask = total.map_or(u64::MAX, |t| t - 1);
            let mut seen = HashSet::new();
            let mut out = Vec::with_capacity(count);
            while out.len() < count {
                let code = rng.gen::<u64>() & mask;
                if seen.insert(code) {
                    out.push(code);
                }
            }
            out
        }
    };
    codes.into_iter().map(|code| realize(&LevelSequence::finite(family.prefix(code, depth)), depth)).collect()
}

/// Every configuration on `V_depth` whose balls all attain the minimal
/// energy, found by exhaustive enumeration.
pub fn brute_force_minima(p: &LambdaParams, depth: usize, tol: f64) -> Result<Vec<Configuration>> {
    if depth > MAX_BRUTE_FORCE_DEPTH {
        return Err(Error::Capacity(format!(
            "exhaustive ground-state search limited to depth {MAX_BRUTE_FORCE_DEPTH}, got {depth}"
        )));
    }
    let shape = TreeShape::binary(depth);
    let n = shape.vertex_count();
    let states = 3usize.pow(n as u32);
    let mut found = Vec::new();
    for code in 0..states {
        let mut rest = code;
        let spins: Vec<Spin> = (0..n)
            .map(|_| {
                let s = Spin::ALL[rest % 3];
                rest /= 3;
                s
            })
            .collect();
        let sigma = Configuration::new(shape, spins)?;
        if is_ground_state(&sigma, p, tol).holds {
            found.push(sigma);
        }
    }
    found.sort();
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[u8]) -> LevelSequence {
        LevelSequence::from_values(v)
    }

    fn levels(cfg: &Configuration) -> Vec<u8> {
        (0..=cfg.shape().depth()).map(|m| cfg.level_value(m).unwrap().value()).collect()
    }

    fn params(a: f64, b: f64, c: f64) -> LambdaParams {
        LambdaParams::couplings(a, b, c).unwrap()
    }

    #[test]
    fn realize_examples() {
        assert_eq!(levels(&realize(&seq(&[1, 3]), 2).unwrap()), vec![1, 3, 1]);
        assert_eq!(levels(&realize(&seq(&[2]), 3).unwrap()), vec![2, 2, 2, 2]);
        assert_eq!(levels(&realize(&seq(&[1, 2, 3, 2]), 4).unwrap()), vec![1, 2, 3, 2, 1]);
        let short = LevelSequence::finite(vec![Spin::ALL[0]; 2]);
        assert_eq!(realize(&short, 2), Err(Error::Underspecified { len: 2, levels: 3 }));
    }

    #[test]
    fn periodic_realization_is_level_periodic() {
        let s = seq(&[1, 2, 3, 2]);
        let cfg = realize(&s, 9).unwrap();
        for m in 0..=9 {
            assert_eq!(cfg.level_value(m), Some(s.entries[m % 4]));
            if m + 4 <= 9 {
                assert_eq!(cfg.level_value(m), cfg.level_value(m + 4));
            }
        }
    }

    #[test]
    fn ground_state_checks() {
        let a1 = params(-1.0, 0.0, 0.0);
        assert!(is_ground_state(&realize(&seq(&[1, 3]), 4).unwrap(), &a1, 0.0).holds);
        let constant = is_ground_state(&realize(&seq(&[1]), 4).unwrap(), &a1, 0.0);
        assert!(!constant.holds);
        assert_eq!(constant.witness, Some(TreeCoord::root()));
        let a6 = params(0.0, 0.0, -1.0);
        for k in [1, 2, 3] {
            assert!(is_ground_state(&realize(&seq(&[k]), 4).unwrap(), &a6, 0.0).holds);
        }
    }

    #[test]
    fn witness_points_at_first_bad_ball() {
        let a1 = params(-1.0, 0.0, 0.0);
        let s = LevelSequence::finite([1, 3, 1, 1].iter().map(|&v| Spin::new(v).unwrap()).collect());
        let check = is_ground_state(&realize(&s, 3).unwrap(), &a1, 0.0);
        assert_eq!(check.witness, Some("1.1".parse().unwrap()));
    }

    #[test]
    fn catalog_sizes() {
        let a1 = generators_for(Region::A1, 3);
        assert_eq!(a1.generators.len(), 2);
        assert!(a1.generators.iter().all(|g| g.period == Some(2)));
        let a6 = generators_for(Region::A6, 3);
        assert_eq!(a6.generators.len(), 3);
        assert!(a6.generators.iter().all(|g| g.period == Some(1)));
        let a3 = generators_for(Region::A3, 4);
        assert_eq!(a3.generators.iter().filter(|g| g.period == Some(1)).count(), 3);
        assert_eq!(a3.generators[3], seq(&[1, 3]));
        assert_eq!(a3.generators[5], seq(&[1, 3, 3, 3]));
        let a2 = generators_for(Region::A2, 2);
        assert_eq!(a2.generators, vec![seq(&[1, 2]), seq(&[1, 2, 3]), seq(&[1, 2, 3, 2]), seq(&[1, 2, 3, 2, 3])]);
        assert_eq!(a2.families, vec![Family::AdjacentDistinct]);
        let a4 = generators_for(Region::A4, 2);
        assert_eq!(a4.generators[1].period, Some(7));
    }

    #[test]
    fn generators_are_ground_states() {
        for region in Region::ALL {
            let p = region.representative();
            for (i, g) in generators_for(region, 4).generators.into_iter().enumerate() {
                let cfg = realize(&g, 9).unwrap();
                if region == Region::A4 && i > 0 {
                    continue;
                }
                assert!(is_ground_state(&cfg, &p, 0.0).holds, "{region} {g:?}");
            }
        }
    }

    #[test]
    fn repeated_a4_blocks_break_at_level_four() {
        // [1, (2,3,2), (2,3,2), ...] puts spin 2 on levels 3 and 4
        let p = Region::A4.representative();
        for g in generators_for(Region::A4, 4).generators.into_iter().skip(1) {
            assert!(is_ground_state(&realize(&g, 3).unwrap(), &p, 0.0).holds);
            let check = is_ground_state(&realize(&g, 4).unwrap(), &p, 0.0);
            assert!(!check.holds);
            assert_eq!(check.witness.unwrap().level(), 3);
        }
    }

    #[test]
    fn ground_state_is_inherited_by_truncation() {
        let p = Region::A4.representative();
        let cfg = realize(&seq(&[1, 2, 3, 2]), 6).unwrap();
        for d in 0..=6 {
            assert!(is_ground_state(&cfg.truncate(d).unwrap(), &p, 0.0).holds);
        }
    }

    #[test]
    fn family_samples() {
        let p = params(1.0, 0.0, 0.0);
        let samples = sample_family(Region::A5, 4, 11, 3).unwrap();
        assert_eq!(samples.len(), 4);
        assert_eq!(samples.iter().collect::<HashSet<_>>().len(), 4);
        for cfg in &samples {
            assert!(is_ground_state(cfg, &p, 0.0).holds);
            assert_eq!(cfg.level_value(0), Some(Spin::ALL[1]));
        }
        let all = sample_family(Region::A5, 100, 0, 3).unwrap();
        assert_eq!(all.len(), 8);
    }

    #[test]
    fn adjacent_distinct_family() {
        let p = Region::A2.representative();
        for cfg in sample_family(Region::A2, 20, 3, 6).unwrap() {
            let lv = levels(&cfg);
            assert_eq!(lv[0], 1);
            assert!(lv.windows(2).all(|w| w[0] != w[1]));
            assert!(is_ground_state(&cfg, &p, 0.0).holds);
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let a = sample_family(Region::A2, 5, 42, 10).unwrap();
        let b = sample_family(Region::A2, 5, 42, 10).unwrap();
        assert_eq!(a, b);
        assert_eq!(sample_family(Region::A1, 1, 0, 2), Err(Error::UnsupportedRegion("A1".into())));
    }

    #[test]
    fn brute_force_examples() {
        let a1 = brute_force_minima(&params(-1.0, 0.0, 0.0), 2, 0.0).unwrap();
        let mut expect = vec![realize(&seq(&[1, 3]), 2).unwrap(), realize(&seq(&[3, 1]), 2).unwrap()];
        expect.sort();
        assert_eq!(a1, expect);
        let a6 = brute_force_minima(&params(0.0, 0.0, -1.0), 2, 0.0).unwrap();
        assert_eq!(a6.len(), 3);
        assert!(a6.iter().all(|c| (0..=2).all(|m| c.level_value(m) == c.level_value(0))));
        assert!(matches!(brute_force_minima(&params(0.0, 0.0, -1.0), 3, 0.0), Err(Error::Capacity(_))));
    }
}
