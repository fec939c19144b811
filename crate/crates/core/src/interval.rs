//! Scenarios on an interval `[0, d]` with a power distortion of Lebesgue
//! measure `mu(E) = lambda(E)^p`, a continuous piecewise-linear `f` and a set
//! `A` that is a finite union of closed intervals.
//!
//! The level-set length `L(alpha) = lambda({f >= alpha} & A)` is piecewise
//! linear in `alpha`: on every piece of `f` inside `A` the set `{f >= alpha}`
//! is an interval whose moving end is linear in `alpha`. It can only change
//! slope (or jump, where `f` is flat) at the values `f` takes at knots and at
//! endpoints of `A`. The survival function is `u = L^p`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::alpha::AlphaCapacity;
use crate::grl::check_origin_assumption;
use crate::rational::{to_f64, Magnitude, Q};
use crate::rl::{Method, RlResult};
use crate::step::StepFunction;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioInterval {
    /// Right end `d` of the domain `[0, d]`.
    pub end: Q,
    /// `p` in `mu(E) = lambda(E)^p`.
    pub exponent: Q,
    pub nu: AlphaCapacity,
    /// `(x, f(x))` knots from `x = 0` to `x = d`; `f` is linear in between.
    pub knots: Vec<(Q, Q)>,
    /// Disjoint closed intervals, sorted.
    pub a: Vec<(Q, Q)>,
    pub assume_nu_zero_at_origin: bool,
}

impl ScenarioInterval {
    /// Validates the data; overlapping or touching intervals of `A` are
    /// merged.
    pub fn new(
        end: Q,
        exponent: Q,
        nu: AlphaCapacity,
        knots: Vec<(Q, Q)>,
        a: Vec<(Q, Q)>,
        assume_nu_zero_at_origin: bool,
    ) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidScenario(msg.into()));
        if !end.is_positive() {
            return bad("domain end must be positive");
        }
        if !exponent.is_positive() {
            return bad("mu exponent must be positive");
        }
        if knots.len() < 2 || !knots[0].0.is_zero() || knots[knots.len() - 1].0 != end {
            return bad("knots must run from 0 to the domain end");
        }
        if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return bad("knot abscissas must be strictly increasing");
        }
        if knots.iter().any(|(_, y)| y.is_negative()) {
            return bad("f must be non-negative");
        }
        let mut a = a;
        if let Some((lo, hi)) = a.iter().find(|(lo, hi)| lo > hi || lo.is_negative() || hi > &end) {
            return Err(Error::InvalidScenario(format!("[{lo}, {hi}] is not a subinterval of [0, {end}]")));
        }
        a.sort();
        let mut merged: Vec<(Q, Q)> = Vec::with_capacity(a.len());
        for (lo, hi) in a {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        check_origin_assumption(&nu, assume_nu_zero_at_origin)?;
        Ok(ScenarioInterval { end, exponent, nu, knots, a: merged, assume_nu_zero_at_origin })
    }

    /// `f(x)` by linear interpolation.
    pub fn f_at(&self, x: &Q) -> Q {
        let i = self.knots.partition_point(|(k, _)| k <= x).clamp(1, self.knots.len() - 1);
        let (x0, y0) = &self.knots[i - 1];
        let (x1, y1) = &self.knots[i];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// `lambda({x in A : f(x) >= alpha})`, exact.
    pub fn level_length(&self, alpha: &Q) -> Q {
        let mut total = Q::zero();
        for (a0, a1) in &self.a {
            for w in self.knots.windows(2) {
                let s = if &w[0].0 > a0 { &w[0].0 } else { a0 };
                let t = if &w[1].0 < a1 { &w[1].0 } else { a1 };
                if s >= t {
                    continue;
                }
                let (ys, yt) = (self.f_at(s), self.f_at(t));
                total += if ys == yt {
                    if &ys >= alpha { t - s } else { Q::zero() }
                } else {
                    let root = s + (alpha - &ys) * (t - s) / (&yt - &ys);
                    let r = root.clamp(s.clone(), t.clone());
                    if yt > ys { t - r } else { r - s }
                };
            }
        }
        total
    }

    pub fn survival(&self) -> PowerSurvival {
        let mut levels: Vec<Q> = Vec::new();
        for (a0, a1) in &self.a {
            levels.push(self.f_at(a0));
            levels.push(self.f_at(a1));
            levels.extend(self.knots.iter().filter(|(x, _)| x > a0 && x < a1).map(|(_, y)| y.clone()));
        }
        levels.retain(Signed::is_positive);
        levels.sort();
        levels.dedup();
        let at_zero = self.level_length(&Q::zero());
        let at_levels = levels.iter().map(|c| self.level_length(c)).collect();
        let three = Q::from_integer(BigInt::from(3));
        let mut pieces = Vec::with_capacity(levels.len());
        let mut lo = Q::zero();
        for c in &levels {
            let third = (c - &lo) / &three;
            let m1 = &lo + &third;
            let m2 = &m1 + &third;
            let (l1, l2) = (self.level_length(&m1), self.level_length(&m2));
            let slope = (l2 - &l1) / &third;
            let intercept = l1 - &slope * m1;
            pieces.push(Linear { slope, intercept });
            lo = c.clone();
        }
        PowerSurvival { exponent: self.exponent.clone(), at_zero, levels, at_levels, pieces }
    }
}

/// `survival_interval(sc) = sc.survival()`.
pub fn survival_interval(sc: &ScenarioInterval) -> PowerSurvival {
    sc.survival()
}

/// `alpha -> slope * alpha + intercept`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linear {
    pub slope: Q,
    pub intercept: Q,
}

impl Linear {
    pub fn at(&self, x: &Q) -> Q {
        &self.slope * x + &self.intercept
    }

    fn is_zero(&self) -> bool {
        self.slope.is_zero() && self.intercept.is_zero()
    }

    /// `int_lo^hi (slope * x + intercept)^p dx`, assuming the base stays
    /// non-negative on `[lo, hi]`.
    fn power_integral(&self, p: &Q, lo: &Q, hi: &Q) -> Magnitude {
        let width = hi - lo;
        if self.slope.is_zero() {
            return Magnitude::pow(&self.intercept, p).scale(&width);
        }
        let (b_lo, b_hi) = (self.at(lo), self.at(hi));
        if p.is_integer() {
            let n = p.to_integer().to_i32().expect("exponent fits in i32") + 1;
            let q1 = Q::from_integer(BigInt::from(n));
            return Magnitude::Exact((pow_int(&b_hi, n) - pow_int(&b_lo, n)) / (&self.slope * q1));
        }
        let p1 = to_f64(p) + 1.0;
        let (f_hi, f_lo) = (libm::pow(to_f64(&b_hi), p1), libm::pow(to_f64(&b_lo), p1));
        let denom = to_f64(&self.slope) * p1;
        let value = (f_hi - f_lo) / denom;
        let error = 16.0 * f64::EPSILON * (f_hi.abs() + f_lo.abs()) / denom.abs() + value.abs() * f64::EPSILON;
        Magnitude::approx(value, error)
    }
}

fn pow_int(base: &Q, n: i32) -> Q {
    num_traits::pow::pow(base.clone(), n as usize)
}

/// `u(alpha) = L(alpha)^p` with `L` piecewise linear: `L(0) = at_zero`,
/// `L = pieces[j]` on `(levels[j-1], levels[j])` (with `levels[-1] = 0`),
/// `L(levels[j]) = at_levels[j]`, and `L = 0` past the last level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSurvival {
    pub exponent: Q,
    pub at_zero: Q,
    pub levels: Vec<Q>,
    pub at_levels: Vec<Q>,
    pub pieces: Vec<Linear>,
}

impl PowerSurvival {
    /// `L(alpha)`.
    pub fn base_at(&self, alpha: &Q) -> Q {
        if alpha.is_zero() {
            return self.at_zero.clone();
        }
        match self.levels.binary_search(alpha) {
            Ok(i) => self.at_levels[i].clone(),
            Err(i) if i == self.levels.len() => Q::zero(),
            Err(i) => self.pieces[i].at(alpha),
        }
    }

    pub fn evaluate(&self, alpha: &Q) -> Magnitude {
        Magnitude::pow(&self.base_at(alpha), &self.exponent)
    }

    /// The open level intervals `(lo, hi)` with the linear base on each.
    pub fn spans(&self) -> impl Iterator<Item = (Q, Q, &Linear)> {
        let starts = core::iter::once(Q::zero()).chain(self.levels.iter().cloned());
        starts.zip(self.levels.iter().cloned()).zip(&self.pieces).map(|((lo, hi), l)| (lo, hi, l))
    }

    /// Step functions `lower <= u <= upper` with every level interval cut
    /// into `subdivisions` equal parts. Only for integer exponents, where
    /// the step values stay rational.
    pub fn step_bounds(&self, subdivisions: u32) -> Option<(StepFunction, StepFunction)> {
        if !self.exponent.is_integer() || subdivisions == 0 {
            return None;
        }
        let n = self.exponent.to_integer().to_i32()?;
        let pw = |x: &Q| pow_int(x, n);
        let k = Q::from_integer(BigInt::from(subdivisions));
        let mut breakpoints = Vec::new();
        let mut points = alloc::vec![pw(&self.at_zero)];
        let (mut lower, mut upper) = (Vec::new(), Vec::new());
        for (j, (lo, hi, line)) in self.spans().enumerate() {
            let step = (&hi - &lo) / &k;
            for i in 0..subdivisions {
                let x0 = &lo + &step * Q::from_integer(BigInt::from(i));
                let x1 = &x0 + &step;
                let (v0, v1) = (pw(&line.at(&x0)), pw(&line.at(&x1)));
                let (small, big) = if v0 <= v1 { (v0, v1) } else { (v1, v0) };
                lower.push(small);
                upper.push(big);
                if i + 1 == subdivisions {
                    points.push(pw(&self.at_levels[j]));
                } else {
                    points.push(pw(&line.at(&x1)));
                }
                breakpoints.push(x1);
            }
        }
        let make = |values: Vec<Q>| StepFunction::new(breakpoints.clone(), points.clone(), values, Q::zero());
        Some((make(lower).ok()?, make(upper).ok()?))
    }
}

impl fmt::Display for PowerSurvival {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{0}}: ({})^{}", self.at_zero, self.exponent)?;
        for (j, (lo, hi, line)) in self.spans().enumerate() {
            write!(f, "; ({lo}, {hi}): ({} a + {})^{}", line.slope, line.intercept, self.exponent)?;
            write!(f, "; {{{hi}}}: ({})^{}", self.at_levels[j], self.exponent)?;
        }
        let last = self.levels.last().cloned().unwrap_or_else(Q::zero);
        write!(f, "; ({last}, inf): 0")
    }
}

fn found(value: Magnitude, method: Method) -> RlResult {
    RlResult { exists: true, value: Some(value), method, divergent_value: None, trace: None }
}

/// `(RL) int u d nu` for a power survival function. The function vanishes
/// past its last level, so every family with finite mass on bounded sets
/// integrates it; only the root distortions fail, and only where `u` is
/// positive on an interval.
pub fn integrate_power_survival(u: &PowerSurvival, nu: &AlphaCapacity) -> RlResult {
    if let AlphaCapacity::Dirac { at } = nu {
        return found(u.evaluate(at), Method::ClosedFormDirac);
    }
    if let Some(AlphaCapacity::SigmaAdditive { atoms, segments }) = nu.as_sigma_additive() {
        let mut total: Magnitude = atoms.iter().map(|a| u.evaluate(&a.at).scale(&a.mass)).sum();
        for seg in &segments {
            for (lo, hi, line) in u.spans() {
                let from = if seg.start > lo { seg.start.clone() } else { lo };
                let to = match &seg.end {
                    Some(e) if e < &hi => e.clone(),
                    _ => hi,
                };
                if from < to {
                    total = total + line.power_integral(&u.exponent, &from, &to).scale(&seg.density);
                }
            }
        }
        return found(total, Method::ClosedFormSigmaAdditive);
    }
    match nu {
        AlphaCapacity::VanishingOnBounded { .. } => found(Magnitude::zero(), Method::ClosedFormVanishingBounded),
        AlphaCapacity::DistortedPower { exponent } if exponent > &Q::one() => {
            found(Magnitude::zero(), Method::ClosedFormDistortedPGt1)
        }
        _ => {
            if u.spans().all(|(_, _, line)| line.is_zero()) {
                found(Magnitude::zero(), Method::NonexistentDistortedPLt1)
            } else {
                RlResult {
                    exists: false,
                    value: None,
                    method: Method::NonexistentDistortedPLt1,
                    divergent_value: Some(Magnitude::Infinite),
                    trace: None,
                }
            }
        }
    }
}
