//! Partitions of the level axis `[0, inf)` into finitely many interval cells,
//! the refinement order between them, Riemann-Lebesgue tagged sums, and the
//! refinement-envelope probe used as an empirical existence witness.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::alpha::AlphaCapacity;
use crate::rational::{Extended, Magnitude, Q};
use crate::step::StepFunction;
use crate::{Error, Result};

/// A cell of a partition of `[0, inf)`: a single point or an interval with
/// rational endpoints. `hi == None` means the cell is unbounded above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Point(Q),
    Span { lo: Q, hi: Option<Q>, lo_closed: bool, hi_closed: bool },
}

impl Cell {
    /// `(lo, hi)`.
    pub fn open(lo: Q, hi: Q) -> Cell {
        Cell::Span { lo, hi: Some(hi), lo_closed: false, hi_closed: false }
    }

    /// `[lo, hi)`.
    pub fn closed_open(lo: Q, hi: Q) -> Cell {
        Cell::Span { lo, hi: Some(hi), lo_closed: true, hi_closed: false }
    }

    /// `[lo, hi]`, collapsing to a point when `lo == hi`.
    pub fn closed(lo: Q, hi: Q) -> Cell {
        if lo == hi {
            Cell::Point(lo)
        } else {
            Cell::Span { lo, hi: Some(hi), lo_closed: true, hi_closed: true }
        }
    }

    /// `(lo, inf)`.
    pub fn open_tail(lo: Q) -> Cell {
        Cell::Span { lo, hi: None, lo_closed: false, hi_closed: false }
    }

    /// `[lo, inf)`.
    pub fn closed_tail(lo: Q) -> Cell {
        Cell::Span { lo, hi: None, lo_closed: true, hi_closed: false }
    }

    pub fn lo(&self) -> &Q {
        match self {
            Cell::Point(x) => x,
            Cell::Span { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> Option<&Q> {
        match self {
            Cell::Point(x) => Some(x),
            Cell::Span { hi, .. } => hi.as_ref(),
        }
    }

    pub fn lo_closed(&self) -> bool {
        match self {
            Cell::Point(_) => true,
            Cell::Span { lo_closed, .. } => *lo_closed,
        }
    }

    pub fn hi_closed(&self) -> bool {
        match self {
            Cell::Point(_) => true,
            Cell::Span { hi_closed, .. } => *hi_closed,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.hi().is_some()
    }

    /// Lebesgue length.
    pub fn length(&self) -> Extended {
        match self.hi() {
            Some(hi) => Extended::Finite(hi - self.lo()),
            None => Extended::Infinite,
        }
    }

    pub fn contains(&self, x: &Q) -> bool {
        let above = match x.cmp(self.lo()) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed(),
            Ordering::Less => false,
        };
        let below = match self.hi() {
            None => true,
            Some(hi) => match x.cmp(hi) {
                Ordering::Less => true,
                Ordering::Equal => self.hi_closed(),
                Ordering::Greater => false,
            },
        };
        above && below
    }

    /// Some point of the cell.
    pub fn interior_point(&self) -> Q {
        match (self, self.hi()) {
            (Cell::Point(x), _) => x.clone(),
            (_, Some(hi)) => (self.lo() + hi) / Q::from_integer(BigInt::from(2)),
            (_, None) => self.lo() + Q::one(),
        }
    }

    pub fn is_subset_of(&self, other: &Cell) -> bool {
        let lower_ok = match other.lo().cmp(self.lo()) {
            Ordering::Less => true,
            Ordering::Equal => other.lo_closed() || !self.lo_closed(),
            Ordering::Greater => false,
        };
        let upper_ok = match (self.hi(), other.hi()) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => match a.cmp(b) {
                Ordering::Less => true,
                Ordering::Equal => other.hi_closed() || !self.hi_closed(),
                Ordering::Greater => false,
            },
        };
        lower_ok && upper_ok
    }

    pub fn intersect(&self, other: &Cell) -> Option<Cell> {
        let (lo, lo_closed) = match self.lo().cmp(other.lo()) {
            Ordering::Greater => (self.lo(), self.lo_closed()),
            Ordering::Less => (other.lo(), other.lo_closed()),
            Ordering::Equal => (self.lo(), self.lo_closed() && other.lo_closed()),
        };
        let (hi, hi_closed) = match (self.hi(), other.hi()) {
            (None, None) => (None, false),
            (Some(a), None) => (Some(a), self.hi_closed()),
            (None, Some(b)) => (Some(b), other.hi_closed()),
            (Some(a), Some(b)) => match a.cmp(b) {
                Ordering::Less => (Some(a), self.hi_closed()),
                Ordering::Greater => (Some(b), other.hi_closed()),
                Ordering::Equal => (Some(a), self.hi_closed() && other.hi_closed()),
            },
        };
        match hi {
            Some(hi) => match lo.cmp(hi) {
                Ordering::Less => Some(Cell::Span {
                    lo: lo.clone(),
                    hi: Some(hi.clone()),
                    lo_closed,
                    hi_closed,
                }),
                Ordering::Equal if lo_closed && hi_closed => Some(Cell::Point(lo.clone())),
                _ => None,
            },
            None => Some(Cell::Span { lo: lo.clone(), hi: None, lo_closed, hi_closed: false }),
        }
    }

    /// Splits a bounded interval at its midpoint: `(a, m)` keeps the left
    /// flag, `[m, b)` keeps the right flag.
    pub fn bisect(&self) -> Option<(Cell, Cell)> {
        match self {
            Cell::Span { lo, hi: Some(hi), lo_closed, hi_closed } => {
                let mid = (lo + hi) / Q::from_integer(BigInt::from(2));
                Some((
                    Cell::Span { lo: lo.clone(), hi: Some(mid.clone()), lo_closed: *lo_closed, hi_closed: false },
                    Cell::Span { lo: mid, hi: Some(hi.clone()), lo_closed: true, hi_closed: *hi_closed },
                ))
            }
            _ => None,
        }
    }

    /// Canonical ordering: by left endpoint, closed before open.
    fn order_key(&self, other: &Cell) -> Ordering {
        self.lo().cmp(other.lo()).then_with(|| other.lo_closed().cmp(&self.lo_closed()))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Point(x) => write!(f, "{{{x}}}"),
            Cell::Span { lo, hi, lo_closed, hi_closed } => {
                f.write_str(if *lo_closed { "[" } else { "(" })?;
                write!(f, "{lo}, ")?;
                match hi {
                    Some(hi) => write!(f, "{hi}")?,
                    None => f.write_str("inf")?,
                }
                f.write_str(if *hi_closed { "]" } else { ")" })
            }
        }
    }
}

/// A finite partition of `[0, inf)` into ordered, pairwise disjoint cells,
/// the last one unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaPartition {
    cells: Vec<Cell>,
}

impl AlphaPartition {
    pub fn new(cells: Vec<Cell>) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidPartition(msg.into()));
        let Some(first) = cells.first() else {
            return bad("a partition needs at least one cell");
        };
        if !first.lo().is_zero() || !first.lo_closed() {
            return bad("the first cell must contain 0");
        }
        for pair in cells.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            match a.hi() {
                None => return bad("only the last cell may be unbounded"),
                Some(hi) if hi != b.lo() => {
                    return Err(Error::InvalidPartition(format!("gap or overlap between {a} and {b}")))
                }
                Some(_) if a.hi_closed() == b.lo_closed() => {
                    return Err(Error::InvalidPartition(format!(
                        "{a} and {b} must share their endpoint exactly once"
                    )))
                }
                _ => {}
            }
        }
        if cells.last().is_some_and(|c| c.is_bounded()) {
            return bad("the last cell must be unbounded");
        }
        Ok(AlphaPartition { cells })
    }

    /// The one-cell partition `{[0, inf)}`.
    pub fn trivial() -> Self {
        AlphaPartition { cells: alloc::vec![Cell::closed_tail(Q::zero())] }
    }

    /// `[0, c_1), [c_1, c_2), .., [c_k, inf)` for increasing positive cuts.
    pub fn from_cuts(cuts: &[Q]) -> Result<Self> {
        let mut cells = Vec::with_capacity(cuts.len() + 1);
        let mut lo = Q::zero();
        for c in cuts {
            cells.push(Cell::closed_open(lo, c.clone()));
            lo = c.clone();
        }
        cells.push(Cell::closed_tail(lo));
        AlphaPartition::new(cells)
    }

    /// Points `b_i` as singleton cells with open intervals between them:
    /// `{0}, (0, b_1), {b_1}, .., {b_k}, (b_k, inf)`.
    pub fn isolating(points: &[Q]) -> Result<Self> {
        let mut cells = alloc::vec![Cell::Point(Q::zero())];
        let mut lo = Q::zero();
        for b in points {
            cells.push(Cell::open(lo, b.clone()));
            cells.push(Cell::Point(b.clone()));
            lo = b.clone();
        }
        cells.push(Cell::open_tail(lo));
        AlphaPartition::new(cells)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// `self >= coarser`: every cell of `self` lies inside a cell of `coarser`.
    pub fn is_finer(&self, coarser: &AlphaPartition) -> bool {
        self.cells.iter().all(|c| coarser.cells.iter().any(|d| c.is_subset_of(d)))
    }

    /// All nonempty pairwise intersections, in canonical order.
    pub fn common_refinement(&self, other: &AlphaPartition) -> AlphaPartition {
        let mut cells: Vec<Cell> = self
            .cells
            .iter()
            .flat_map(|a| other.cells.iter().filter_map(move |b| a.intersect(b)))
            .collect();
        cells.sort_by(|a, b| a.order_key(b));
        AlphaPartition { cells }
    }

    /// Splits every bounded non-degenerate cell in two.
    pub fn bisect(&self) -> AlphaPartition {
        let mut cells = Vec::with_capacity(2 * self.cells.len());
        for c in &self.cells {
            match c.bisect() {
                Some((l, r)) => {
                    cells.push(l);
                    cells.push(r);
                }
                None => cells.push(c.clone()),
            }
        }
        AlphaPartition { cells }
    }
}

impl fmt::Display for AlphaPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A partition with one tag point chosen in every cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedPartition {
    partition: AlphaPartition,
    tags: Vec<Q>,
}

impl TaggedPartition {
    pub fn new(partition: AlphaPartition, tags: Vec<Q>) -> Result<Self> {
        if tags.len() != partition.cells.len() {
            return Err(Error::InvalidPartition("one tag per cell required".into()));
        }
        if let Some((c, t)) = partition.cells.iter().zip(&tags).find(|(c, t)| !c.contains(t)) {
            return Err(Error::InvalidPartition(format!("tag {t} is not in {c}")));
        }
        Ok(TaggedPartition { partition, tags })
    }

    /// Tags every cell with [`Cell::interior_point`].
    pub fn centered(partition: AlphaPartition) -> Self {
        let tags = partition.cells.iter().map(Cell::interior_point).collect();
        TaggedPartition { partition, tags }
    }

    pub fn partition(&self) -> &AlphaPartition {
        &self.partition
    }

    pub fn tags(&self) -> &[Q] {
        &self.tags
    }
}

/// `sum_n u(s_n) * nu(E_n)`, with `0 * inf = 0`. An infinite result means
/// some tag with `u > 0` sits in a cell of infinite mass.
pub fn tagged_sum(u: &StepFunction, nu: &AlphaCapacity, tp: &TaggedPartition) -> Magnitude {
    tp.partition
        .cells
        .iter()
        .zip(&tp.tags)
        .map(|(cell, tag)| nu.measure(cell).scale(&u.evaluate(tag)))
        .sum()
}

/// Knobs for [`refinement_envelopes`].
#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeConfig {
    pub max_depth: u32,
    /// Convergence threshold on envelope width and level-to-level change.
    pub tolerance: f64,
    /// Lower sums beyond this (and still growing) count as divergence.
    pub divergence_bound: f64,
    /// Start from a partition that isolates every breakpoint of `u` as a
    /// singleton. Without it, breakpoints stay attached to the cell on
    /// their right and tag choice keeps mattering there.
    pub isolate_breakpoints: bool,
    /// Treat the unbounded last cell as countably many unit cells (each
    /// bisected like any bounded cell), so every partition in the chain
    /// consists of bounded cells only.
    pub split_tail: bool,
}

impl Default for EnvelopeConfig {
    fn default() -> Self {
        EnvelopeConfig { max_depth: 20, tolerance: 1e-6, divergence_bound: 1e6, isolate_breakpoints: true, split_tail: true }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeLevel {
    pub depth: u32,
    /// Infimum of the tagged sums over all tag choices.
    pub lower: Magnitude,
    /// Supremum of the tagged sums over all tag choices.
    pub upper: Magnitude,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Converged(Magnitude),
    Diverged,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeTrace {
    pub levels: Vec<EnvelopeLevel>,
    pub verdict: Verdict,
}

/// Probes Riemann-Lebesgue integrability of `u` against `nu` along the
/// chain obtained by repeatedly bisecting the bounded cells of `start`
/// (refined by the breakpoint partition of `u`).
///
/// At depth `d` every bounded interval cell is cut into `2^d` equal cells.
/// The extreme tagged sums are computed in closed form: inside a base cell
/// `u` takes at most two values (one possibly only at the left endpoint), so
/// only the first and last sub-cells are special and the `2^d - 2` interior
/// ones share a value. With [`EnvelopeConfig::split_tail`] the unbounded
/// cell becomes `[b, b+1)` followed by countably many unit cells, so the
/// chain never contains an unbounded cell.
pub fn refinement_envelopes(
    u: &StepFunction,
    nu: &AlphaCapacity,
    start: &AlphaPartition,
    config: &EnvelopeConfig,
) -> EnvelopeTrace {
    let pieces = if config.isolate_breakpoints {
        u.breakpoint_partition()
    } else {
        AlphaPartition::from_cuts(u.breakpoints()).expect("breakpoints are increasing and positive")
    };
    let base = start.common_refinement(&pieces);
    let mut levels: Vec<EnvelopeLevel> = Vec::new();
    let mut verdict = Verdict::Inconclusive;
    for depth in 1..=config.max_depth.max(1) {
        let (lower, upper) = base
            .cells
            .iter()
            .map(|cell| match cell {
                Cell::Span { lo, hi: None, lo_closed, .. } if config.split_tail => {
                    let unit_end = lo + Q::one();
                    let unit = Cell::Span { lo: lo.clone(), hi: Some(unit_end.clone()), lo_closed: *lo_closed, hi_closed: false };
                    let rest = Cell::closed_tail(unit_end);
                    let (a, b) = cell_envelope(u, nu, &unit, depth);
                    let (inf, sup) = u.range_on(&rest);
                    let mass = nu.equal_cells_mass(&rest, None);
                    (a + mass.scale(&inf), b + mass.scale(&sup))
                }
                _ => cell_envelope(u, nu, cell, depth),
            })
            .fold((Magnitude::zero(), Magnitude::zero()), |(l, h), (a, b)| (l + a, h + b));
        let level = EnvelopeLevel { depth, lower, upper };
        if let Some(v) = judge(levels.last(), &level, config) {
            verdict = v;
            levels.push(level);
            break;
        }
        levels.push(level);
    }
    EnvelopeTrace { levels, verdict }
}

fn judge(prev: Option<&EnvelopeLevel>, cur: &EnvelopeLevel, config: &EnvelopeConfig) -> Option<Verdict> {
    if cur.lower.is_infinite() {
        return Some(Verdict::Diverged);
    }
    let (lo, hi) = (cur.lower.to_f64(), cur.upper.to_f64());
    let prev = prev?;
    let (plo, phi) = (prev.lower.to_f64(), prev.upper.to_f64());
    if lo > config.divergence_bound && lo >= plo {
        return Some(Verdict::Diverged);
    }
    if hi.is_finite()
        && hi - lo < config.tolerance
        && (hi - phi).abs() < config.tolerance
        && (lo - plo).abs() < config.tolerance
    {
        let value = match (&cur.lower, &cur.upper) {
            (Magnitude::Exact(a), Magnitude::Exact(b)) if a == b => Magnitude::Exact(a.clone()),
            _ => Magnitude::approx((lo + hi) / 2.0, (hi - lo) / 2.0 + config.tolerance),
        };
        return Some(Verdict::Converged(value));
    }
    None
}

/// Lower and upper tagged-sum contributions of one base cell cut into
/// `2^depth` equal pieces.
fn cell_envelope(u: &StepFunction, nu: &AlphaCapacity, cell: &Cell, depth: u32) -> (Magnitude, Magnitude) {
    let contribution = |piece: &Cell, mass: Magnitude| {
        let (inf, sup) = u.range_on(piece);
        (mass.scale(&inf), mass.scale(&sup))
    };
    let (lo, hi, lo_closed, hi_closed) = match cell {
        Cell::Span { lo, hi: Some(hi), lo_closed, hi_closed } => (lo, hi, *lo_closed, *hi_closed),
        _ => return contribution(cell, nu.measure(cell)),
    };
    let count = BigInt::one() << depth as usize;
    let width = (hi - lo) / Q::from_integer(count.clone());
    let first_end = lo + &width;
    let last_start = hi - &width;
    let first = Cell::Span { lo: lo.clone(), hi: Some(first_end.clone()), lo_closed, hi_closed: false };
    let last = Cell::Span { lo: last_start.clone(), hi: Some(hi.clone()), lo_closed: true, hi_closed };
    let (a_lo, a_hi) = contribution(&first, nu.measure(&first));
    let (b_lo, b_hi) = contribution(&last, nu.measure(&last));
    if depth == 1 {
        return (a_lo + b_lo, a_hi + b_hi);
    }
    let middle = Cell::closed_open(first_end, last_start);
    let middle_count = count - BigInt::from(2);
    let (c_lo, c_hi) = contribution(&middle, nu.equal_cells_mass(&middle, Some(&middle_count)));
    (a_lo + b_lo + c_lo, a_hi + b_hi + c_hi)
}

impl EnvelopeTrace {
    /// The final `(lower, upper)` pair as floats.
    pub fn last_bounds(&self) -> Option<(f64, f64)> {
        self.levels.last().map(|l| (l.lower.to_f64(), l.upper.to_f64()))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Converged(v) => write!(f, "converged({v})"),
            Verdict::Diverged => f.write_str("diverged"),
            Verdict::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use alloc::vec;

    fn p(cells: Vec<Cell>) -> AlphaPartition {
        AlphaPartition::new(cells).unwrap()
    }

    #[test]
    fn validation() {
        assert!(AlphaPartition::new(vec![]).is_err());
        assert!(AlphaPartition::new(vec![Cell::closed_open(qi(0), qi(1))]).is_err());
        assert!(AlphaPartition::new(vec![Cell::open_tail(qi(0))]).is_err());
        assert!(AlphaPartition::new(vec![Cell::closed(qi(0), qi(1)), Cell::closed_tail(qi(1))]).is_err());
        assert!(AlphaPartition::new(vec![Cell::closed_open(qi(0), qi(1)), Cell::closed_tail(qi(2))]).is_err());
        assert!(AlphaPartition::new(vec![Cell::closed(qi(0), qi(1)), Cell::open_tail(qi(1))]).is_ok());
    }

    #[test]
    fn finer_examples() {
        let coarse = p(vec![Cell::closed_open(qi(0), qi(1)), Cell::Point(qi(1)), Cell::open_tail(qi(1))]);
        let fine = p(vec![
            Cell::closed_open(qi(0), q(1, 2)),
            Cell::closed_open(q(1, 2), qi(1)),
            Cell::Point(qi(1)),
            Cell::open_tail(qi(1)),
        ]);
        assert!(coarse.is_finer(&coarse));
        assert!(fine.is_finer(&coarse));
        assert!(!coarse.is_finer(&fine));

        let a = AlphaPartition::from_cuts(&[qi(2)]).unwrap();
        let b = AlphaPartition::from_cuts(&[qi(1)]).unwrap();
        assert!(!a.is_finer(&b));
    }

    #[test]
    fn refinement_examples() {
        let a = AlphaPartition::from_cuts(&[qi(1)]).unwrap();
        let b = AlphaPartition::from_cuts(&[qi(2)]).unwrap();
        assert_eq!(a.common_refinement(&b), AlphaPartition::from_cuts(&[qi(1), qi(2)]).unwrap());
        assert_eq!(a.common_refinement(&AlphaPartition::trivial()), a);
        let iso = AlphaPartition::isolating(&[qi(1)]).unwrap();
        let r = iso.common_refinement(&b);
        assert!(AlphaPartition::new(r.cells().to_vec()).is_ok());
        assert!(r.is_finer(&iso) && r.is_finer(&b));
    }

    #[test]
    fn tagged_sum_examples() {
        let u = StepFunction::indicator_closed(qi(1), qi(1)).unwrap();
        let leb = AlphaCapacity::lebesgue();
        let part = p(vec![Cell::closed(qi(0), qi(1)), Cell::open_tail(qi(1))]);
        let tp = TaggedPartition::new(part, vec![q(1, 2), qi(2)]).unwrap();
        assert_eq!(tagged_sum(&u, &leb, &tp), Magnitude::Exact(qi(1)));

        let one = StepFunction::constant(qi(1));
        let nu = AlphaCapacity::vanishing_on_bounded(qi(1)).unwrap();
        let cuts: Vec<Q> = (1..50).map(qi).collect();
        let bounded = AlphaPartition::from_cuts(&cuts).unwrap();
        // the truncated form keeps one unbounded tail, which carries the level
        let tp = TaggedPartition::centered(bounded);
        assert_eq!(tagged_sum(&one, &nu, &tp), Magnitude::Exact(qi(1)));
        let cells = tp.partition().cells();
        let bounded_part: Magnitude =
            cells[..cells.len() - 1].iter().map(|c| nu.measure(c).scale(&qi(1))).sum();
        assert_eq!(bounded_part, Magnitude::zero());
    }

    #[test]
    fn tags_must_lie_in_cells() {
        let part = AlphaPartition::from_cuts(&[qi(1)]).unwrap();
        assert!(TaggedPartition::new(part.clone(), vec![qi(1), qi(2)]).is_err());
        assert!(TaggedPartition::new(part, vec![qi(0)]).is_err());
    }

    #[test]
    fn infinite_cell_with_positive_tag_value() {
        let u = StepFunction::constant(qi(1));
        let tp = TaggedPartition::centered(AlphaPartition::trivial());
        assert_eq!(tagged_sum(&u, &AlphaCapacity::lebesgue(), &tp), Magnitude::Infinite);
        let zero = StepFunction::constant(qi(0));
        assert_eq!(tagged_sum(&zero, &AlphaCapacity::lebesgue(), &tp), Magnitude::zero());
    }

    #[test]
    fn envelope_lebesgue_indicator() {
        let u = StepFunction::indicator_closed(qi(1), qi(1)).unwrap();
        let trace = refinement_envelopes(&u, &AlphaCapacity::lebesgue(), &AlphaPartition::trivial(), &EnvelopeConfig::default());
        assert_eq!(trace.verdict, Verdict::Converged(Magnitude::Exact(qi(1))));
        assert_eq!(trace.levels[0].lower, Magnitude::Exact(qi(1)));
        assert_eq!(trace.levels[0].upper, Magnitude::Exact(qi(1)));
    }

    #[test]
    fn envelope_square_distortion_vanishes() {
        let u = StepFunction::indicator_closed(qi(1), qi(1)).unwrap();
        let nu = AlphaCapacity::distorted_power(qi(2)).unwrap();
        let trace = refinement_envelopes(&u, &nu, &AlphaPartition::trivial(), &EnvelopeConfig::default());
        assert!(matches!(trace.verdict, Verdict::Converged(_)));
        for level in &trace.levels {
            let bound = Q::new(BigInt::one(), BigInt::one() << level.depth as usize);
            assert_eq!(level.upper, Magnitude::Exact(bound));
        }
        for w in trace.levels.windows(2) {
            assert!(w[1].upper.to_f64() <= w[0].upper.to_f64());
        }
    }

    #[test]
    fn envelope_root_distortion_diverges() {
        let u = StepFunction::indicator_closed(qi(1), qi(1)).unwrap();
        let nu = AlphaCapacity::distorted_power(q(1, 2)).unwrap();
        let config = EnvelopeConfig { max_depth: 40, ..EnvelopeConfig::default() };
        let trace = refinement_envelopes(&u, &nu, &AlphaPartition::trivial(), &config);
        assert_eq!(trace.verdict, Verdict::Diverged);
        for level in &trace.levels {
            let expected = libm::pow(2.0, level.depth as f64 / 2.0);
            assert!((level.lower.to_f64() - expected).abs() <= 1e-9 * expected, "depth {}", level.depth);
        }
        assert!(trace.levels.last().unwrap().lower.to_f64() > 1e6);
        assert!(trace.levels.last().unwrap().depth <= 40);
    }

    #[test]
    fn vanishing_on_bounded_chain_sums_to_zero() {
        let one = StepFunction::constant(qi(1));
        let nu = AlphaCapacity::vanishing_on_bounded(qi(1)).unwrap();
        let trace = refinement_envelopes(&one, &nu, &AlphaPartition::trivial(), &EnvelopeConfig::default());
        assert_eq!(trace.verdict, Verdict::Converged(Magnitude::zero()));
        assert!(trace.levels.iter().all(|l| l.lower.is_zero() && l.upper.is_zero()));

        let config = EnvelopeConfig { split_tail: false, ..EnvelopeConfig::default() };
        let kept = refinement_envelopes(&one, &nu, &AlphaPartition::trivial(), &config);
        assert_eq!(kept.verdict, Verdict::Converged(Magnitude::Exact(qi(1))));
    }

    #[test]
    fn dirac_at_jump_needs_isolation() {
        // u = 1 on [0, 1], 0 after; the jump at 1 carries the Dirac mass.
        let u = StepFunction::indicator_closed(qi(1), qi(1)).unwrap();
        let nu = AlphaCapacity::dirac(qi(1)).unwrap();
        let isolated = refinement_envelopes(&u, &nu, &AlphaPartition::trivial(), &EnvelopeConfig::default());
        assert_eq!(isolated.verdict, Verdict::Converged(Magnitude::Exact(qi(1))));

        let config = EnvelopeConfig { isolate_breakpoints: false, max_depth: 8, ..EnvelopeConfig::default() };
        let loose = refinement_envelopes(&u, &nu, &AlphaPartition::trivial(), &config);
        assert_eq!(loose.verdict, Verdict::Inconclusive);
        let last = loose.levels.last().unwrap();
        assert_eq!((last.lower.clone(), last.upper.clone()), (Magnitude::zero(), Magnitude::Exact(qi(1))));
    }
}
