//! Seeded random capacities of a requested kind.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::capacity::{Capacity, GroundSpace, PropertyFlags, Subset};
use crate::rational::Q;
use crate::{Error, Result};

/// Largest ground space [`random_capacity`] accepts.
pub const GENERATION_LIMIT: usize = 8;

const RETRIES: u64 = 16;
const DENOMINATORS: [i64; 6] = [1, 2, 3, 4, 5, 6];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CapacityKind {
    Monotone,
    Additive,
    Submodular,
    Superadditive,
    Subadditive,
    Arbitrary,
}

impl CapacityKind {
    pub const ALL: [CapacityKind; 6] = [
        CapacityKind::Monotone,
        CapacityKind::Additive,
        CapacityKind::Submodular,
        CapacityKind::Superadditive,
        CapacityKind::Subadditive,
        CapacityKind::Arbitrary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CapacityKind::Monotone => "monotone",
            CapacityKind::Additive => "additive",
            CapacityKind::Submodular => "submodular",
            CapacityKind::Superadditive => "superadditive",
            CapacityKind::Subadditive => "subadditive",
            CapacityKind::Arbitrary => "arbitrary",
        }
    }

    /// Whether `flags` carries this kind. Submodular and superadditive
    /// capacities are produced monotone as well.
    pub fn satisfied_by(self, flags: &PropertyFlags) -> bool {
        match self {
            CapacityKind::Monotone => flags.monotone,
            CapacityKind::Additive => flags.additive,
            CapacityKind::Submodular => flags.submodular && flags.monotone,
            CapacityKind::Superadditive => flags.superadditive && flags.monotone,
            CapacityKind::Subadditive => flags.subadditive,
            CapacityKind::Arbitrary => true,
        }
    }
}

impl fmt::Display for CapacityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CapacityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CapacityKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unsupported(alloc::format!("capacity kind `{s}`")))
    }
}

/// A small non-negative rational `k / d` with `k <= max_numerator`.
pub fn small_rational(rng: &mut impl Rng, max_numerator: i64) -> Q {
    let d = DENOMINATORS[rng.gen_range(0..DENOMINATORS.len())];
    Q::new(BigInt::from(rng.gen_range(0..=max_numerator)), BigInt::from(d))
}

/// Deterministic in `(space, kind, seed)`; the result's `classify()` flags
/// always include `kind`.
pub fn random_capacity(space: &GroundSpace, kind: CapacityKind, seed: u64) -> Result<Capacity> {
    if space.size() > GENERATION_LIMIT {
        return Err(Error::SpaceTooLarge { size: space.size(), limit: GENERATION_LIMIT });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRIES {
        let c = draw(space, kind, &mut rng)?;
        if kind.satisfied_by(&c.classify()) {
            return Ok(c);
        }
    }
    Err(Error::Generation { kind: kind.name(), size: space.size(), seed })
}

fn draw(space: &GroundSpace, kind: CapacityKind, rng: &mut ChaCha8Rng) -> Result<Capacity> {
    let n = space.size();
    match kind {
        CapacityKind::Additive => {
            let masses: Vec<Q> = (0..n).map(|_| small_rational(rng, 6)).collect();
            Capacity::additive(space.clone(), &masses)
        }
        CapacityKind::Arbitrary => Capacity::from_fn(space.clone(), |_| small_rational(rng, 8)),
        CapacityKind::Monotone => Capacity::new(space.clone(), upward_max(&raw_table(space, rng))),
        CapacityKind::Subadditive => {
            let raw = upward_max(&raw_table(space, rng));
            Capacity::new(space.clone(), partition_min(&raw))
        }
        CapacityKind::Submodular => {
            // concave: the minimum of lines with non-negative slopes and
            // intercepts, one of them through the origin
            let mut lines = alloc::vec![(small_rational(rng, 4) + Q::new(1.into(), 6.into()), Q::zero())];
            for _ in 0..rng.gen_range(1..=3) {
                lines.push((small_rational(rng, 3), small_rational(rng, 4)));
            }
            let h = |t: &Q| lines.iter().map(|(a, b)| a * t + b).min().expect("at least one line");
            distorted(space, rng, h)
        }
        CapacityKind::Superadditive => {
            let (c, d) = (small_rational(rng, 3), small_rational(rng, 2));
            distorted(space, rng, |t: &Q| &c * t * t + &d * t)
        }
    }
}

/// `h(m(B))` for a random additive `m`.
fn distorted(space: &GroundSpace, rng: &mut ChaCha8Rng, h: impl Fn(&Q) -> Q) -> Result<Capacity> {
    let masses: Vec<Q> = (0..space.size()).map(|_| small_rational(rng, 6)).collect();
    Capacity::from_fn(space.clone(), |b| h(&b.indices().map(|i| masses[i].clone()).sum()))
}

fn raw_table(space: &GroundSpace, rng: &mut ChaCha8Rng) -> Vec<Q> {
    space.subsets().map(|b| if b.is_empty() { Q::zero() } else { small_rational(rng, 6) }).collect()
}

/// `B -> max over C <= B of raw(C)`.
fn upward_max(raw: &[Q]) -> Vec<Q> {
    let mut out = raw.to_vec();
    for mask in 1..out.len() {
        let b = Subset(mask as u32);
        for i in b.indices() {
            let below = out[b.difference(Subset::singleton(i)).0 as usize].clone();
            if below > out[mask] {
                out[mask] = below;
            }
        }
    }
    out
}

/// `B -> min over partitions of B of the summed block values`.
fn partition_min(raw: &[Q]) -> Vec<Q> {
    let mut out = raw.to_vec();
    for mask in 1..out.len() {
        let b = Subset(mask as u32);
        let low = Subset(b.0 & b.0.wrapping_neg());
        let rest = b.difference(low);
        for c in rest.subsets() {
            let block = c.union(low);
            if block == b {
                continue;
            }
            let split = &out[block.0 as usize] + &out[b.difference(block).0 as usize];
            if split < out[mask] {
                out[mask] = split;
            }
        }
    }
    out
}
