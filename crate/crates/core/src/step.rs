//! Finitely representable non-negative functions on `[0, inf)`.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::partition::{AlphaPartition, Cell};
use crate::rational::Q;
use crate::{Error, Result};

/// A step function with breakpoints `0 = b_0 < b_1 < .. < b_m`: one value at
/// each breakpoint, one on each open interval `(b_{i-1}, b_i)`, and one on
/// the tail `(b_m, inf)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepFunction {
    breakpoints: Vec<Q>,
    point_values: Vec<Q>,
    interval_values: Vec<Q>,
    tail_value: Q,
}

impl StepFunction {
    /// `point_values[0]` is the value at 0, `point_values[i]` the value at
    /// `breakpoints[i-1]`; `interval_values[i]` is the value on
    /// `(b_i, b_{i+1})` with `b_0 = 0`.
    pub fn new(breakpoints: Vec<Q>, point_values: Vec<Q>, interval_values: Vec<Q>, tail_value: Q) -> Result<Self> {
        let m = breakpoints.len();
        if point_values.len() != m + 1 || interval_values.len() != m {
            return Err(Error::InvalidStep("need m+1 point values and m interval values".into()));
        }
        if breakpoints.first().is_some_and(|b| !b.is_positive()) {
            return Err(Error::InvalidStep("breakpoints must be positive".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidStep("breakpoints must be strictly increasing".into()));
        }
        if point_values.iter().chain(&interval_values).chain([&tail_value]).any(Signed::is_negative) {
            return Err(Error::InvalidStep("values must be non-negative".into()));
        }
        Ok(StepFunction { breakpoints, point_values, interval_values, tail_value })
    }

    pub fn constant(c: Q) -> Self {
        StepFunction { breakpoints: Vec::new(), point_values: alloc::vec![c.clone()], interval_values: Vec::new(), tail_value: c }
    }

    /// `value` on `[0, end]`, 0 afterwards.
    pub fn indicator_closed(end: Q, value: Q) -> Result<Self> {
        StepFunction::new(alloc::vec![end], alloc::vec![value.clone(), value.clone()], alloc::vec![value], Q::zero())
    }

    /// Left-continuous non-increasing profile: `values[0]` at 0, `values[i]`
    /// on `(b_{i-1}, b_i]`, zero after the last breakpoint.
    pub fn left_continuous(at_zero: Q, breakpoints: Vec<Q>, values: Vec<Q>) -> Result<Self> {
        if values.len() != breakpoints.len() {
            return Err(Error::InvalidStep("one value per breakpoint required".into()));
        }
        let mut point_values = alloc::vec![at_zero];
        point_values.extend(values.iter().cloned());
        StepFunction::new(breakpoints, point_values, values, Q::zero())
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breakpoints
    }

    pub fn point_values(&self) -> &[Q] {
        &self.point_values
    }

    pub fn interval_values(&self) -> &[Q] {
        &self.interval_values
    }

    pub fn tail_value(&self) -> &Q {
        &self.tail_value
    }

    /// Last breakpoint (0 when there is none).
    pub fn support_end(&self) -> Q {
        self.breakpoints.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn evaluate(&self, alpha: &Q) -> Q {
        match self.breakpoints.binary_search(alpha) {
            Ok(i) => self.point_values[i + 1].clone(),
            Err(_) if alpha.is_zero() => self.point_values[0].clone(),
            Err(i) if i == self.breakpoints.len() => self.tail_value.clone(),
            Err(i) => self.interval_values[i].clone(),
        }
    }

    pub fn sup(&self) -> Q {
        self.values().max().cloned().unwrap_or_else(Q::zero)
    }

    fn values(&self) -> impl Iterator<Item = &Q> {
        self.point_values.iter().chain(&self.interval_values).chain([&self.tail_value])
    }

    /// The cells on which the function is constant, with their values:
    /// `{0}, (0, b_1), {b_1}, .., {b_m}, (b_m, inf)`.
    pub fn pieces(&self) -> Vec<(Cell, Q)> {
        let mut out = alloc::vec![(Cell::Point(Q::zero()), self.point_values[0].clone())];
        let mut lo = Q::zero();
        for (i, b) in self.breakpoints.iter().enumerate() {
            out.push((Cell::open(lo, b.clone()), self.interval_values[i].clone()));
            out.push((Cell::Point(b.clone()), self.point_values[i + 1].clone()));
            lo = b.clone();
        }
        out.push((Cell::open_tail(lo), self.tail_value.clone()));
        out
    }

    /// The partition isolating every breakpoint (including 0).
    pub fn breakpoint_partition(&self) -> AlphaPartition {
        AlphaPartition::isolating(&self.breakpoints).expect("breakpoints are increasing and positive")
    }

    /// `(inf, sup)` of the function over a cell.
    pub fn range_on(&self, cell: &Cell) -> (Q, Q) {
        let mut hits = self.pieces().into_iter().filter(|(c, _)| c.intersect(cell).is_some()).map(|(_, v)| v);
        let first = hits.next().expect("pieces cover [0, inf)");
        hits.fold((first.clone(), first), |(lo, hi), v| {
            let lo = if v < lo { v.clone() } else { lo };
            let hi = if v > hi { v } else { hi };
            (lo, hi)
        })
    }

    /// Pointwise combination over the merged breakpoints.
    pub fn combine(&self, other: &StepFunction, op: impl Fn(&Q, &Q) -> Q) -> StepFunction {
        let mut cuts: Vec<Q> = self.breakpoints.iter().chain(&other.breakpoints).cloned().collect();
        cuts.sort();
        cuts.dedup();
        let at = |x: &Q| op(&self.evaluate(x), &other.evaluate(x));
        let two = Q::from_integer(BigInt::from(2));
        let mut point_values = alloc::vec![at(&Q::zero())];
        let mut interval_values = Vec::with_capacity(cuts.len());
        let mut lo = Q::zero();
        for b in &cuts {
            interval_values.push(at(&((&lo + b) / &two)));
            point_values.push(at(b));
            lo = b.clone();
        }
        let tail_value = at(&(lo + Q::one()));
        StepFunction { breakpoints: cuts, point_values, interval_values, tail_value }
    }

    pub fn add(&self, other: &StepFunction) -> StepFunction {
        self.combine(other, |a, b| a + b)
    }

    pub fn scale(&self, k: &Q) -> StepFunction {
        let s = |v: &Q| v * k;
        StepFunction {
            breakpoints: self.breakpoints.clone(),
            point_values: self.point_values.iter().map(s).collect(),
            interval_values: self.interval_values.iter().map(s).collect(),
            tail_value: s(&self.tail_value),
        }
    }

    /// Pointwise `self <= other` everywhere on `[0, inf)`.
    pub fn le(&self, other: &StepFunction) -> bool {
        self.combine(other, |a, b| if a <= b { Q::one() } else { Q::zero() }).values().all(|v| v.is_one())
    }

    /// True when the function vanishes off finitely many points.
    pub fn is_null_off_points(&self) -> bool {
        self.interval_values.iter().all(Zero::is_zero) && self.tail_value.is_zero()
    }
}

impl fmt::Display for StepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (cell, v)) in self.pieces().iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{cell}: {v}")?;
        }
        Ok(())
    }
}
