//! Set functions on finite ground sets.
//!
//! The measurable sets are the whole power set; a subset is a bit mask over
//! point indices and a [`Capacity`] stores one exact rational per mask.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::format;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::rational::Q;
use crate::{Error, Result};

/// Largest ground space a [`Capacity`] may live on (the value table has
/// `2^n` entries).
pub const MAX_POINTS: usize = 16;

/// Largest ground space for which [`Capacity::variation`] enumerates
/// disjoint families.
pub const VARIATION_LIMIT: usize = 12;

/// A subset of a finite ground space, as a characteristic bit set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        Subset(if n >= 32 { u32::MAX } else { (1u32 << n) - 1 })
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Subset {
        Subset(indices.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// All subsets of `self`, including `self` and the empty set.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        let full = self.0;
        let mut next = Some(0u32);
        core::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some((cur.wrapping_sub(full)) & full) };
            Some(Subset(cur))
        })
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.indices().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// A finite ground set `{0, .., n-1}` with optional point labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSpace {
    size: usize,
    labels: Option<Vec<String>>,
}

impl GroundSpace {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidCapacity("ground space must be nonempty".into()));
        }
        if size > MAX_POINTS {
            return Err(Error::SpaceTooLarge { size, limit: MAX_POINTS });
        }
        Ok(GroundSpace { size, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut space = GroundSpace::new(labels.len())?;
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidCapacity(format!("duplicate label {l:?}")));
            }
        }
        space.labels = Some(labels);
        Ok(space)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.size)
    }

    /// Number of subsets, `2^n`.
    pub fn subset_count(&self) -> usize {
        1 << self.size
    }

    pub fn subsets(&self) -> impl Iterator<Item = Subset> {
        (0..self.subset_count() as u32).map(Subset)
    }

    pub fn check(&self, b: Subset) -> Result<()> {
        if b.is_subset_of(self.full()) {
            Ok(())
        } else {
            Err(Error::SubsetOutOfRange { mask: b.0, size: self.size })
        }
    }
}

/// Outcome of [`Capacity::classify`]; each flag is decided by an exhaustive
/// check over pairs of subsets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PropertyFlags {
    pub monotone: bool,
    pub fuzzy: bool,
    pub submodular: bool,
    pub additive: bool,
    pub subadditive: bool,
    pub superadditive: bool,
}

/// A set function `2^S -> Q>=0` vanishing on the empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Capacity {
    space: GroundSpace,
    values: Vec<Q>,
}

impl Capacity {
    /// Builds a capacity from its full value table, indexed by subset mask.
    pub fn new(space: GroundSpace, values: Vec<Q>) -> Result<Self> {
        if values.len() != space.subset_count() {
            return Err(Error::InvalidCapacity(format!(
                "expected {} values, got {}",
                space.subset_count(),
                values.len()
            )));
        }
        if !values[0].is_zero() {
            return Err(Error::InvalidCapacity("value of the empty set must be 0".into()));
        }
        if let Some(i) = values.iter().position(|v| v.is_negative()) {
            return Err(Error::InvalidCapacity(format!("negative value on {}", Subset(i as u32))));
        }
        Ok(Capacity { space, values })
    }

    /// Builds a capacity by evaluating `value` on every subset; the empty set
    /// is forced to zero.
    pub fn from_fn(space: GroundSpace, mut value: impl FnMut(Subset) -> Q) -> Result<Self> {
        let values = space
            .subsets()
            .map(|b| if b.is_empty() { Q::zero() } else { value(b) })
            .collect();
        Capacity::new(space, values)
    }

    /// Additive capacity with the given point masses.
    pub fn additive(space: GroundSpace, masses: &[Q]) -> Result<Self> {
        if masses.len() != space.size() {
            return Err(Error::InvalidCapacity("one mass per point required".into()));
        }
        Capacity::from_fn(space, |b| b.indices().map(|i| masses[i].clone()).sum())
    }

    /// The zero set function.
    pub fn zero(space: GroundSpace) -> Self {
        let values = alloc::vec![Q::zero(); space.subset_count()];
        Capacity { space, values }
    }

    pub fn space(&self) -> &GroundSpace {
        &self.space
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn evaluate(&self, b: Subset) -> Result<&Q> {
        self.space.check(b)?;
        Ok(&self.values[b.0 as usize])
    }

    /// Unchecked lookup for subsets known to lie in the space.
    pub(crate) fn at(&self, b: Subset) -> &Q {
        &self.values[b.0 as usize]
    }

    pub fn classify(&self) -> PropertyFlags {
        let all: Vec<Subset> = self.space.subsets().collect();
        let full = self.space.full();
        let m = |b: Subset| self.at(b);

        let monotone = all.iter().all(|&b| {
            full.difference(b).indices().all(|i| m(b) <= m(b.union(Subset::singleton(i))))
        });
        let mut submodular = true;
        let mut subadditive = true;
        for &b in &all {
            for &c in &all {
                let union = m(b.union(c));
                if subadditive && *union > m(b) + m(c) {
                    subadditive = false;
                }
                if submodular && union + m(b.intersection(c)) > m(b) + m(c) {
                    submodular = false;
                }
            }
            if !submodular && !subadditive {
                break;
            }
        }
        let mut additive = true;
        let mut superadditive = true;
        'outer: for &b in &all {
            for c in full.difference(b).subsets() {
                let union = m(b.union(c));
                let sum = m(b) + m(c);
                if *union < sum {
                    superadditive = false;
                    additive = false;
                } else if *union != sum {
                    additive = false;
                }
                if !additive && !superadditive {
                    break 'outer;
                }
            }
        }
        PropertyFlags {
            monotone,
            fuzzy: monotone && self.values[0].is_zero(),
            submodular,
            additive,
            subadditive,
            superadditive,
        }
    }

    /// Supremum of `sum m(B_i)` over finite families of pairwise disjoint
    /// subsets of `b`.
    ///
    /// Exhaustive: every disjoint family is a partition of some `C <= b`, and
    /// the recursion below branches on the block containing the lowest point
    /// of what is left (or on leaving that point out).
    pub fn variation(&self, b: Subset) -> Result<Q> {
        self.space.check(b)?;
        if self.space.size() > VARIATION_LIMIT {
            return Err(Error::CapacityTooLarge { size: self.space.size(), limit: VARIATION_LIMIT });
        }
        let mut best: Vec<Option<Q>> = alloc::vec![None; self.space.subset_count()];
        best[0] = Some(Q::zero());
        Ok(self.variation_rec(b, &mut best))
    }

    fn variation_rec(&self, b: Subset, best: &mut Vec<Option<Q>>) -> Q {
        if let Some(v) = &best[b.0 as usize] {
            return v.clone();
        }
        let low = b.0.trailing_zeros() as usize;
        let rest = b.difference(Subset::singleton(low));
        let mut top = self.variation_rec(rest, best);
        for c in rest.subsets() {
            let block = c.union(Subset::singleton(low));
            let v = self.at(block) + self.variation_rec(b.difference(block), best);
            if v > top {
                top = v;
            }
        }
        best[b.0 as usize] = Some(top.clone());
        top
    }

    /// `E -> m(phi^{-1}(E))` on the target space.
    pub fn pushforward(&self, phi: &[usize], target: &GroundSpace) -> Result<Capacity> {
        if phi.len() != self.space.size() {
            return Err(Error::InvalidCapacity("map must be total on the ground space".into()));
        }
        if let Some(&t) = phi.iter().find(|&&t| t >= target.size()) {
            return Err(Error::InvalidCapacity(format!("map sends a point to {t}, outside the target")));
        }
        Capacity::from_fn(target.clone(), |e| self.at(preimage(phi, e)).clone())
    }

    /// `k * m`.
    pub fn scale(&self, k: &Q) -> Capacity {
        Capacity { space: self.space.clone(), values: self.values.iter().map(|v| v * k).collect() }
    }

    /// Setwise sum `m1 + m2`.
    pub fn sum(&self, other: &Capacity) -> Result<Capacity> {
        self.same_space(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Capacity { space: self.space.clone(), values })
    }

    /// `m1 <= m2` setwise.
    pub fn setwise_le(&self, other: &Capacity) -> bool {
        self.space.size() == other.space.size()
            && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    fn same_space(&self, other: &Capacity) -> Result<()> {
        if self.space.size() == other.space.size() {
            Ok(())
        } else {
            Err(Error::InvalidCapacity("capacities live on different spaces".into()))
        }
    }
}

/// `phi^{-1}(E)` for a map given as a table of target indices.
pub fn preimage(phi: &[usize], e: Subset) -> Subset {
    Subset::from_indices(phi.iter().enumerate().filter(|(_, &t)| e.contains(t)).map(|(s, _)| s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use alloc::vec;

    fn space(n: usize) -> GroundSpace {
        GroundSpace::new(n).unwrap()
    }

    fn uniform_nonempty(n: usize) -> Capacity {
        Capacity::from_fn(space(n), |_| qi(1)).unwrap()
    }

    /// Largest `sum m(B_i)` over explicitly enumerated set partitions of
    /// every `C <= b`.
    fn variation_by_partitions(m: &Capacity, b: Subset) -> Q {
        fn assign(m: &Capacity, pts: &[usize], blocks: &mut Vec<Subset>, best: &mut Q) {
            let Some((&p, rest)) = pts.split_first() else {
                let total: Q = blocks.iter().map(|&blk| m.at(blk).clone()).sum();
                if total > *best {
                    *best = total;
                }
                return;
            };
            for k in 0..blocks.len() {
                blocks[k] = blocks[k].union(Subset::singleton(p));
                assign(m, rest, blocks, best);
                blocks[k] = blocks[k].difference(Subset::singleton(p));
            }
            blocks.push(Subset::singleton(p));
            assign(m, rest, blocks, best);
            blocks.pop();
        }
        let mut best = Q::zero();
        for c in b.subsets() {
            let pts: Vec<usize> = c.indices().collect();
            assign(m, &pts, &mut Vec::new(), &mut best);
        }
        best
    }

    #[test]
    fn evaluate_empty_and_additive_sum() {
        let m = Capacity::additive(space(3), &[q(1, 5), q(3, 10), q(1, 2)]).unwrap();
        assert_eq!(m.evaluate(Subset::EMPTY).unwrap(), &Q::zero());
        assert_eq!(m.evaluate(Subset::from_indices([0, 2])).unwrap(), &q(7, 10));
        assert!(matches!(m.evaluate(Subset(0b1000)), Err(Error::SubsetOutOfRange { .. })));
    }

    #[test]
    fn rejects_malformed_tables() {
        assert!(Capacity::new(space(1), vec![qi(1), qi(1)]).is_err());
        assert!(Capacity::new(space(1), vec![qi(0)]).is_err());
        assert!(Capacity::new(space(1), vec![qi(0), qi(-1)]).is_err());
        assert!(GroundSpace::new(0).is_err());
        assert!(GroundSpace::new(MAX_POINTS + 1).is_err());
    }

    #[test]
    fn classify_additive() {
        let m = Capacity::additive(space(3), &[q(1, 5), q(3, 10), q(1, 2)]).unwrap();
        let f = m.classify();
        assert!(f.monotone && f.fuzzy && f.submodular && f.additive && f.subadditive && f.superadditive);
    }

    #[test]
    fn classify_uniform_nonempty() {
        let f = uniform_nonempty(2).classify();
        assert!(f.monotone && f.fuzzy && f.submodular && f.subadditive);
        assert!(!f.additive && !f.superadditive);
    }

    #[test]
    fn classify_square_distortion() {
        let m = Capacity::from_fn(space(2), |b| {
            let t = q(b.len() as i64, 2);
            &t * &t
        })
        .unwrap();
        assert_eq!(m.at(Subset(0b11)), &qi(1));
        assert_eq!(m.at(Subset(0b01)), &q(1, 4));
        let f = m.classify();
        assert!(f.superadditive && f.monotone);
        assert!(!f.subadditive && !f.submodular && !f.additive);
    }

    #[test]
    fn classify_non_monotone() {
        let m = Capacity::new(space(2), vec![qi(0), qi(2), qi(1), qi(1)]).unwrap();
        let f = m.classify();
        assert!(!f.monotone && !f.fuzzy);
    }

    #[test]
    fn variation_examples() {
        let m = Capacity::additive(space(3), &[q(1, 5), q(3, 10), q(1, 2)]).unwrap();
        assert_eq!(m.variation(m.space().full()).unwrap(), qi(1));
        assert_eq!(m.variation(Subset::EMPTY).unwrap(), Q::zero());

        let m = Capacity::new(space(2), vec![qi(0), q(3, 5), q(3, 5), qi(1)]).unwrap();
        assert_eq!(m.variation(Subset(0b11)).unwrap(), q(6, 5));
        assert_eq!(variation_by_partitions(&m, Subset(0b11)), q(6, 5));
    }

    #[test]
    fn variation_skips_harmful_points() {
        // m({0,1}) is tiny; best family is {0} alone plus {1} alone.
        let m = Capacity::new(space(2), vec![qi(0), qi(2), qi(0), q(1, 10)]).unwrap();
        assert_eq!(m.variation(Subset(0b11)).unwrap(), qi(2));
    }

    #[test]
    fn variation_guard() {
        let m = Capacity::zero(space(VARIATION_LIMIT + 1));
        assert_eq!(
            m.variation(Subset(1)),
            Err(Error::CapacityTooLarge { size: VARIATION_LIMIT + 1, limit: VARIATION_LIMIT })
        );
    }

    #[test]
    fn variation_matches_partition_enumeration() {
        let vals = [0, 3, 1, 2, 5, 4, 1, 6, 2, 7, 3, 2, 8, 1, 9, 4];
        let m = Capacity::new(space(4), vals.iter().map(|&v| qi(v)).collect()).unwrap();
        for b in m.space().subsets() {
            assert_eq!(m.variation(b).unwrap(), variation_by_partitions(&m, b), "subset {b}");
        }
    }

    #[test]
    fn pushforward_examples() {
        let m = Capacity::additive(space(3), &[q(1, 4), q(1, 4), q(1, 2)]).unwrap();
        let t = space(2);
        let p = m.pushforward(&[0, 0, 1], &t).unwrap();
        assert_eq!(p, Capacity::additive(t, &[q(1, 2), q(1, 2)]).unwrap());

        let id = m.pushforward(&[0, 1, 2], m.space()).unwrap();
        assert_eq!(id, m);

        let c = m.pushforward(&[1, 1, 1], &space(2)).unwrap();
        assert_eq!(c.at(Subset(0b10)), &qi(1));
        assert_eq!(c.at(Subset(0b01)), &Q::zero());
        assert!(m.pushforward(&[0, 5, 1], &space(2)).is_err());
    }

    #[test]
    fn subset_enumeration() {
        let b = Subset(0b1010);
        let subs: Vec<Subset> = b.subsets().collect();
        assert_eq!(subs, vec![Subset(0), Subset(0b10), Subset(0b1000), Subset(0b1010)]);
        assert_eq!(Subset::EMPTY.subsets().count(), 1);
        assert_eq!(alloc::format!("{}", Subset(0b101)), "{0,2}");
    }
}
