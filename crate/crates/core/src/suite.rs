//! Seeded property checks for the sixteen structural results on the
//! generalized integral, with negative controls.
//!
//! Every checker draws an instance whose hypotheses hold by construction,
//! re-verifies those hypotheses, and then compares both sides of the claimed
//! identity or inequality exactly. Integrability hypotheses are discharged
//! by the closed-form engine: an instance whose integrals do not all exist
//! as exact rationals is reported as skipped.
//!
//! Two results need care:
//!
//! * superadditivity in the integrand (T15) rests on
//!   `mu(E_{f+g}) >= mu(E_f) + mu(E_g)`, which superadditivity only gives
//!   when the level sets are disjoint. Instances therefore either give `f`
//!   and `g` disjoint supports (with `nu({0}) = 0`, since both level sets
//!   are the whole space at 0), or pair a supermodular `mu` with a multiple
//!   of Lebesgue measure, where the integral is a Choquet integral.
//! * the setwise order of T9 is generated by construction (adding a
//!   non-negative set function of the same family) and confirmed with
//!   [`AlphaCapacity::dominated_by`].

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alpha::{AlphaCapacity, Atom, Segment};
use crate::capacity::{Capacity, GroundSpace, Subset};
use crate::generate::{random_capacity, small_rational, CapacityKind};
use crate::grl::{generalized_integral, restrict_indicator, survival_finite};
use crate::rational::{Extended, Q};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TheoremId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
    T10,
    T11,
    T12,
    T13,
    T14,
    T15,
    T16,
}

impl TheoremId {
    pub const ALL: [TheoremId; 16] = [
        TheoremId::T1,
        TheoremId::T2,
        TheoremId::T3,
        TheoremId::T4,
        TheoremId::T5,
        TheoremId::T6,
        TheoremId::T7,
        TheoremId::T8,
        TheoremId::T9,
        TheoremId::T10,
        TheoremId::T11,
        TheoremId::T12,
        TheoremId::T13,
        TheoremId::T14,
        TheoremId::T15,
        TheoremId::T16,
    ];

    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn statement(self) -> &'static str {
        match self {
            TheoremId::T1 => "finite-variation nu: integral <= var(nu) * sup u",
            TheoremId::T2 => "nu({0}) = 0: integral over A equals integral of f * chi_A over S",
            TheoremId::T3 => "integrable on S: integrable on every A, with the indicator identity",
            TheoremId::T4 => "fuzzy mu, nu({0}) = 0, f = 0 mu-a.e.: integral is 0",
            TheoremId::T5 => "fuzzy subadditive mu, f = g mu-a.e.: equal integrals",
            TheoremId::T6 => "fuzzy mu, A <= B: integral over A <= integral over B",
            TheoremId::T7 => "fuzzy mu, f1 <= f2: integral of f1 <= integral of f2",
            TheoremId::T8 => "mu1 <= mu2 setwise: integral for mu1 <= integral for mu2",
            TheoremId::T9 => "nu1 <= nu2 setwise: integral for nu1 <= integral for nu2",
            TheoremId::T10 => "a, b > 0: integral for (a nu, b mu) = a b * integral",
            TheoremId::T11 => "integral for mu1 + mu2 = sum of integrals",
            TheoremId::T12 => "integral for nu1 + nu2 = sum of integrals",
            TheoremId::T13 => "fuzzy submodular mu: int(f max g) + int(f min g) <= int f + int g",
            TheoremId::T14 => "additive mu, A, B disjoint: integral over A u B = sum",
            TheoremId::T15 => "superadditive fuzzy mu: int(f + g) >= int f + int g",
            TheoremId::T16 => "integral of g for mu o phi^-1 = integral of g o phi for mu",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.number())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s.strip_prefix(['T', 't']).unwrap_or(s);
        digits
            .parse::<usize>()
            .ok()
            .and_then(|k| TheoremId::ALL.get(k.wrapping_sub(1)).copied())
            .ok_or_else(|| Error::Unsupported(format!("theorem id `{s}`")))
    }
}

/// Everything a checker may need; unused fields stay `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub mu: Capacity,
    pub mu2: Option<Capacity>,
    pub nu: AlphaCapacity,
    pub nu2: Option<AlphaCapacity>,
    pub f: Vec<Q>,
    pub g: Option<Vec<Q>>,
    pub a: Subset,
    pub b: Option<Subset>,
    /// `(a, b)` for the homogeneity check.
    pub scales: Option<(Q, Q)>,
    /// A map to a second ground space, as a table of target indices.
    pub phi: Option<(Vec<usize>, GroundSpace)>,
    /// A `mu`-null set.
    pub null_set: Option<Subset>,
}

impl Instance {
    fn new(mu: Capacity, nu: AlphaCapacity, f: Vec<Q>, a: Subset) -> Self {
        Instance { mu, mu2: None, nu, nu2: None, f, g: None, a, b: None, scales: None, phi: None, null_set: None }
    }
}

fn join(values: &[Q]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
    parts.join(", ")
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mu = [{}]", join(self.mu.values()))?;
        if let Some(m) = &self.mu2 {
            writeln!(f, "mu2 = [{}]", join(m.values()))?;
        }
        writeln!(f, "nu = {}", self.nu)?;
        if let Some(n) = &self.nu2 {
            writeln!(f, "nu2 = {n}")?;
        }
        writeln!(f, "f = ({})", join(&self.f))?;
        if let Some(g) = &self.g {
            writeln!(f, "g = ({})", join(g))?;
        }
        write!(f, "A = {}", self.a)?;
        if let Some(b) = self.b {
            write!(f, "\nB = {b}")?;
        }
        if let Some((a, b)) = &self.scales {
            write!(f, "\nscales = ({a}, {b})")?;
        }
        if let Some((phi, target)) = &self.phi {
            write!(f, "\nphi = {phi:?} into {} points", target.size())?;
        }
        if let Some(z) = self.null_set {
            write!(f, "\nnull set = {z}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub theorem: TheoremId,
    pub seed: u64,
    pub hypothesis_satisfied: bool,
    pub conclusion_holds: bool,
    /// Why the instance was skipped.
    pub skip_reason: Option<&'static str>,
    /// The instance, kept when the conclusion fails.
    pub witness: Option<Instance>,
}

enum Verdict {
    Skip(&'static str),
    Holds(bool),
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn positive(rng: &mut ChaCha8Rng, max: i64) -> Q {
    let d = rng.gen_range(1..=4i64);
    Q::new(rng.gen_range(1..=max).into(), d.into())
}

fn values(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    (0..n).map(|_| if rng.gen_ratio(1, 5) { Q::zero() } else { small_rational(rng, 6) }).collect()
}

fn subset(rng: &mut ChaCha8Rng, n: usize) -> Subset {
    Subset(rng.gen_range(0..(1u32 << n)))
}

fn space(rng: &mut ChaCha8Rng) -> GroundSpace {
    GroundSpace::new(rng.gen_range(2..=5)).expect("small space")
}

fn capacity(rng: &mut ChaCha8Rng, space: &GroundSpace, kind: CapacityKind) -> Result<Capacity> {
    random_capacity(space, kind, rng.gen())
}

fn any_capacity(rng: &mut ChaCha8Rng, space: &GroundSpace) -> Result<Capacity> {
    let kind = CapacityKind::ALL[rng.gen_range(0..CapacityKind::ALL.len())];
    capacity(rng, space, kind)
}

/// Random sigma-additive set function. `bounded` keeps its total mass
/// finite; `origin_null` keeps atoms off 0.
fn sigma(rng: &mut ChaCha8Rng, bounded: bool, origin_null: bool) -> AlphaCapacity {
    let mut atoms: Vec<Atom> = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let mut at = small_rational(rng, 4);
        if origin_null && at.is_zero() {
            at = Q::from_integer(1.into());
        }
        if atoms.iter().all(|a| a.at != at) {
            atoms.push(Atom { at, mass: positive(rng, 3) });
        }
    }
    let start = small_rational(rng, 2);
    let end = &start + positive(rng, 4);
    let mut segments = alloc::vec![Segment { start, end: Some(end.clone()), density: positive(rng, 3) }];
    if rng.gen_bool(0.5) {
        let start = end + small_rational(rng, 2);
        let tail = if bounded || rng.gen_bool(0.5) { Some(&start + positive(rng, 3)) } else { None };
        segments.push(Segment { start, end: tail, density: positive(rng, 2) });
    }
    AlphaCapacity::sigma_additive(atoms, segments).expect("disjoint segments, distinct atoms")
}

fn dirac(rng: &mut ChaCha8Rng, origin_null: bool) -> AlphaCapacity {
    let mut at = small_rational(rng, 4);
    if origin_null && at.is_zero() {
        at = Q::new(1.into(), 2.into());
    }
    AlphaCapacity::dirac(at).expect("non-negative location")
}

fn vanishing(rng: &mut ChaCha8Rng) -> AlphaCapacity {
    AlphaCapacity::vanishing_on_bounded(positive(rng, 3)).expect("positive level")
}

fn any_nu(rng: &mut ChaCha8Rng, origin_null: bool) -> AlphaCapacity {
    match rng.gen_range(0..6) {
        0..=3 => sigma(rng, false, origin_null),
        4 => dirac(rng, origin_null),
        _ => vanishing(rng),
    }
}

fn finite_nu(rng: &mut ChaCha8Rng) -> AlphaCapacity {
    if rng.gen_ratio(1, 4) {
        dirac(rng, false)
    } else {
        sigma(rng, true, false)
    }
}

/// `m(C \ z)`: monotone, subadditive or submodular whenever `m` is, and
/// vanishing on every subset of `z`.
fn with_null_set(m: &Capacity, z: Subset) -> Capacity {
    let values: Vec<Q> = m.space().subsets().map(|c| m.values()[c.difference(z).0 as usize].clone()).collect();
    Capacity::new(m.space().clone(), values).expect("values of a capacity")
}

/// A deterministic instance satisfying the hypotheses of `theorem`.
pub fn generate(theorem: TheoremId, seed: u64) -> Result<Instance> {
    use TheoremId::*;
    let r = &mut rng(seed);
    let s = space(r);
    let n = s.size();
    let full = s.full();
    let inst = match theorem {
        T1 => {
            let mu = any_capacity(r, &s)?;
            let nu = finite_nu(r);
            Instance::new(mu, nu, values(r, n), full)
        }
        T2 => {
            let mu = any_capacity(r, &s)?;
            let nu = any_nu(r, true);
            let (f, a) = (values(r, n), subset(r, n));
            Instance::new(mu, nu, f, a)
        }
        T3 => {
            let mu = any_capacity(r, &s)?;
            Instance::new(mu, any_nu(r, true), values(r, n), full)
        }
        T4 => {
            let z = Subset(rng_nonempty(r, n));
            let mu = with_null_set(&capacity(r, &s, CapacityKind::Monotone)?, z);
            let f = (0..n).map(|i| if z.contains(i) { positive(r, 6) } else { Q::zero() }).collect();
            let mut inst = Instance::new(mu, any_nu(r, true), f, full);
            inst.null_set = Some(z);
            inst
        }
        T5 => {
            let z = Subset(rng_nonempty(r, n));
            let mu = with_null_set(&capacity(r, &s, CapacityKind::Subadditive)?, z);
            let f = values(r, n);
            let g = (0..n).map(|i| if z.contains(i) { small_rational(r, 6) } else { f[i].clone() }).collect();
            let mut inst = Instance::new(mu, any_nu(r, false), f, full);
            inst.g = Some(g);
            inst.null_set = Some(z);
            inst
        }
        T6 => {
            let mu = capacity(r, &s, CapacityKind::Monotone)?;
            let b = subset(r, n);
            let a = Subset(b.0 & r.gen::<u32>());
            let mut inst = Instance::new(mu, any_nu(r, false), values(r, n), a);
            inst.b = Some(b);
            inst
        }
        T7 => {
            let mu = capacity(r, &s, CapacityKind::Monotone)?;
            let f = values(r, n);
            let g = f.iter().map(|v| v + small_rational(r, 3)).collect();
            let mut inst = Instance::new(mu, any_nu(r, false), f, subset(r, n));
            inst.g = Some(g);
            inst
        }
        T8 | T11 => {
            let mu = any_capacity(r, &s)?;
            let extra = any_capacity(r, &s)?;
            let mu2 = if theorem == T8 { mu.sum(&extra)? } else { extra };
            let mut inst = Instance::new(mu, any_nu(r, false), values(r, n), subset(r, n));
            inst.mu2 = Some(mu2);
            inst
        }
        T9 | T12 => {
            let mu = any_capacity(r, &s)?;
            let (nu, nu2) = match r.gen_range(0..4) {
                0 => {
                    let a = vanishing(r);
                    let b = vanishing(r);
                    (a, b)
                }
                1 => (dirac(r, false), sigma(r, false, false)),
                2 => (dirac(r, false), dirac(r, false)),
                _ => (sigma(r, false, false), sigma(r, false, false)),
            };
            let nu2 = if theorem == T9 { nu.sum(&nu2).expect("family closed under sums") } else { nu2 };
            let mut inst = Instance::new(mu, nu, values(r, n), subset(r, n));
            inst.nu2 = Some(nu2);
            inst
        }
        T10 => {
            let mu = any_capacity(r, &s)?;
            let nu = match r.gen_range(0..3) {
                0 => vanishing(r),
                1 => dirac(r, false),
                _ => sigma(r, false, false),
            };
            let mut inst = Instance::new(mu, nu, values(r, n), subset(r, n));
            inst.scales = Some((positive(r, 5), positive(r, 5)));
            inst
        }
        T13 => {
            let mu = capacity(r, &s, CapacityKind::Submodular)?;
            let mut inst = Instance::new(mu, any_nu(r, false), values(r, n), subset(r, n));
            inst.g = Some(values(r, n));
            inst
        }
        T14 => {
            let mu = capacity(r, &s, CapacityKind::Additive)?;
            let (a, b) = disjoint_pair(r, n);
            let mut inst = Instance::new(mu, any_nu(r, false), values(r, n), a);
            inst.b = Some(b);
            inst
        }
        T15 => {
            if r.gen_bool(0.5) {
                // disjoint supports, any superadditive fuzzy mu
                let mu = capacity(r, &s, CapacityKind::Superadditive)?;
                let split = subset(r, n);
                let f = values(r, n).into_iter().enumerate().map(|(i, v)| if split.contains(i) { v } else { Q::zero() });
                let g = values(r, n).into_iter().enumerate().map(|(i, v)| if split.contains(i) { Q::zero() } else { v });
                let mut inst = Instance::new(mu, any_nu(r, true), f.collect(), full);
                inst.g = Some(g.collect());
                inst
            } else {
                // convex distortions are supermodular; Choquet integrals are
                // superadditive for those
                let mu = capacity(r, &s, CapacityKind::Superadditive)?;
                let nu = AlphaCapacity::scaled_lebesgue(positive(r, 3));
                let mut inst = Instance::new(mu, nu, values(r, n), full);
                inst.g = Some(values(r, n));
                inst
            }
        }
        T16 => {
            let mu = any_capacity(r, &s)?;
            let target = GroundSpace::new(r.gen_range(1..=4)).expect("small space");
            let phi = (0..n).map(|_| r.gen_range(0..target.size())).collect();
            let g = values(r, target.size());
            let mut inst = Instance::new(mu, any_nu(r, false), g, target.full());
            inst.phi = Some((phi, target));
            inst
        }
    };
    Ok(inst)
}

fn rng_nonempty(r: &mut ChaCha8Rng, n: usize) -> u32 {
    r.gen_range(1..(1u32 << n))
}

fn disjoint_pair(r: &mut ChaCha8Rng, n: usize) -> (Subset, Subset) {
    let a = subset(r, n);
    let b = Subset(r.gen_range(0..(1u32 << n)) & !a.0);
    (a, b)
}

/// `int*_A f d(nu, mu)` when it exists as an exact rational.
fn integral(f: &[Q], mu: &Capacity, nu: &AlphaCapacity, a: Subset) -> Option<Q> {
    let r = generalized_integral(f, mu, nu, a);
    if r.exists {
        r.value.and_then(|v| v.exact().cloned())
    } else {
        None
    }
}

macro_rules! int {
    ($f:expr, $mu:expr, $nu:expr, $a:expr) => {
        match integral($f, $mu, $nu, $a) {
            Some(v) => v,
            None => return Verdict::Skip("an integral does not exist as an exact value"),
        }
    };
}

macro_rules! field {
    ($e:expr) => {
        match $e {
            Some(v) => v,
            None => return Verdict::Skip("instance lacks a required field"),
        }
    };
}

fn pointwise(f: &[Q], g: &[Q], op: impl Fn(&Q, &Q) -> Q) -> Vec<Q> {
    f.iter().zip(g).map(|(x, y)| op(x, y)).collect()
}

/// Evaluates the conclusion; `strict` also re-verifies the hypotheses on
/// `mu`, `nu` and the sets involved.
fn evaluate(theorem: TheoremId, inst: &Instance, strict: bool) -> Verdict {
    use TheoremId::*;
    let (mu, nu, f, a) = (&inst.mu, &inst.nu, &inst.f[..], inst.a);
    let full = mu.space().full();
    let flags = mu.classify();
    let origin_null = nu.mass_at_origin().is_zero();
    let require = |ok: bool, why: &'static str| if strict && !ok { Some(why) } else { None };
    match theorem {
        T1 => {
            let Extended::Finite(var) = nu.variation() else {
                return Verdict::Skip("nu has infinite variation");
            };
            let v = int!(f, mu, nu, full);
            Verdict::Holds(v <= var * survival_finite(f, mu, full).sup())
        }
        T2 => {
            if let Some(why) = require(origin_null, "nu({0}) != 0") {
                return Verdict::Skip(why);
            }
            let lhs = int!(f, mu, nu, a);
            let rhs = int!(&restrict_indicator(f, a), mu, nu, full);
            Verdict::Holds(lhs == rhs)
        }
        T3 => {
            if let Some(why) = require(origin_null, "nu({0}) != 0") {
                return Verdict::Skip(why);
            }
            let _ = int!(f, mu, nu, full);
            for b in mu.space().subsets() {
                let Some(lhs) = integral(f, mu, nu, b) else {
                    return Verdict::Holds(false);
                };
                if Some(lhs) != integral(&restrict_indicator(f, b), mu, nu, full) {
                    return Verdict::Holds(false);
                }
            }
            Verdict::Holds(true)
        }
        T4 => {
            let z = field!(inst.null_set);
            let null = mu.values()[z.0 as usize].is_zero() && f.iter().enumerate().all(|(i, v)| z.contains(i) || v.is_zero());
            if let Some(why) = require(flags.fuzzy && origin_null && null, "mu not fuzzy, nu({0}) != 0 or f not null") {
                return Verdict::Skip(why);
            }
            Verdict::Holds(int!(f, mu, nu, full).is_zero())
        }
        T5 => {
            let (g, z) = (field!(inst.g.as_ref()), field!(inst.null_set));
            let ae = mu.values()[z.0 as usize].is_zero() && (0..f.len()).all(|i| z.contains(i) || f[i] == g[i]);
            if let Some(why) = require(flags.fuzzy && flags.subadditive && ae, "mu not fuzzy subadditive or f != g a.e.") {
                return Verdict::Skip(why);
            }
            Verdict::Holds(int!(f, mu, nu, full) == int!(g, mu, nu, full))
        }
        T6 => {
            let b = field!(inst.b);
            if let Some(why) = require(flags.fuzzy && a.is_subset_of(b), "mu not fuzzy or A not inside B") {
                return Verdict::Skip(why);
            }
            Verdict::Holds(int!(f, mu, nu, a) <= int!(f, mu, nu, b))
        }
        T7 => {
            let g = field!(inst.g.as_ref());
            let below = f.iter().zip(g).all(|(x, y)| x <= y);
            if let Some(why) = require(flags.fuzzy && below, "mu not fuzzy or f1 not below f2") {
                return Verdict::Skip(why);
            }
            Verdict::Holds(int!(f, mu, nu, a) <= int!(g, mu, nu, a))
        }
        T8 => {
            let mu2 = field!(inst.mu2.as_ref());
            if let Some(why) = require(mu.setwise_le(mu2), "mu1 not below mu2") {
                return Verdict::Skip(why);
            }
            Verdict::Holds(int!(f, mu, nu, a) <= int!(f, mu2, nu, a))
        }
        T9 => {
            let nu2 = field!(inst.nu2.as_ref());
            if let Some(why) = require(nu.dominated_by(nu2) == Some(true), "nu1 not below nu2") {
                return Verdict::Skip(why);
            }
            Verdict::Holds(int!(f, mu, nu, a) <= int!(f, mu, nu2, a))
        }
        T10 => {
            let (s, t) = field!(inst.scales.as_ref());
            let Some(scaled_nu) = nu.scale(s) else {
                return Verdict::Skip("family not closed under scaling");
            };
            let lhs = int!(f, &mu.scale(t), &scaled_nu, a);
            Verdict::Holds(lhs == s * t * int!(f, mu, nu, a))
        }
        T11 => {
            let mu2 = field!(inst.mu2.as_ref());
            let Ok(total) = mu.sum(mu2) else {
                return Verdict::Skip("capacities on different spaces");
            };
            Verdict::Holds(int!(f, &total, nu, a) == int!(f, mu, nu, a) + int!(f, mu2, nu, a))
        }
        T12 => {
            let nu2 = field!(inst.nu2.as_ref());
            let Some(total) = nu.sum(nu2) else {
                return Verdict::Skip("sum leaves the supported families");
            };
            Verdict::Holds(int!(f, mu, &total, a) == int!(f, mu, nu, a) + int!(f, mu, nu2, a))
        }
        T13 => {
            let g = field!(inst.g.as_ref());
            if let Some(why) = require(flags.fuzzy && flags.submodular, "mu not fuzzy submodular") {
                return Verdict::Skip(why);
            }
            let sup = pointwise(f, g, |x, y| x.max(y).clone());
            let inf = pointwise(f, g, |x, y| x.min(y).clone());
            let lhs = int!(&sup, mu, nu, a) + int!(&inf, mu, nu, a);
            Verdict::Holds(lhs <= int!(f, mu, nu, a) + int!(g, mu, nu, a))
        }
        T14 => {
            let b = field!(inst.b);
            if let Some(why) = require(flags.additive && a.is_disjoint(b), "mu not additive or sets overlap") {
                return Verdict::Skip(why);
            }
            let lhs = int!(f, mu, nu, a.union(b));
            Verdict::Holds(lhs == int!(f, mu, nu, a) + int!(f, mu, nu, b))
        }
        T15 => {
            let g = field!(inst.g.as_ref());
            let disjoint = f.iter().zip(g).all(|(x, y)| x.is_zero() || y.is_zero());
            let supermodular = {
                let values = mu.values();
                mu.space().subsets().all(|b| {
                    mu.space().subsets().all(|c| {
                        &values[b.union(c).0 as usize] + &values[b.intersection(c).0 as usize]
                            >= &values[b.0 as usize] + &values[c.0 as usize]
                    })
                })
            };
            let lebesgue_multiple = matches!(
                nu.as_sigma_additive(),
                Some(AlphaCapacity::SigmaAdditive { ref atoms, ref segments })
                    if atoms.is_empty() && segments.len() == 1 && segments[0].start.is_zero() && segments[0].end.is_none()
            );
            let shape = (disjoint && origin_null) || (supermodular && lebesgue_multiple);
            if let Some(why) = require(flags.fuzzy && flags.superadditive && shape, "mu not superadditive fuzzy, or f, g overlap") {
                return Verdict::Skip(why);
            }
            let sum = pointwise(f, g, |x, y| x + y);
            Verdict::Holds(int!(&sum, mu, nu, full) >= int!(f, mu, nu, full) + int!(g, mu, nu, full))
        }
        T16 => {
            let (phi, target) = field!(inst.phi.as_ref());
            let Ok(image) = mu.pushforward(phi, target) else {
                return Verdict::Skip("map is not total");
            };
            let composed: Vec<Q> = phi.iter().map(|&t| f[t].clone()).collect();
            let lhs = int!(f, &image, nu, target.full());
            Verdict::Holds(lhs == int!(&composed, mu, nu, full))
        }
    }
}

/// Checks `theorem` on `instance`; `seed` is recorded in the outcome.
pub fn check(theorem: TheoremId, instance: &Instance, seed: u64) -> CheckOutcome {
    let verdict = evaluate(theorem, instance, true);
    let (hypothesis_satisfied, conclusion_holds, skip_reason) = match verdict {
        Verdict::Skip(why) => (false, false, Some(why)),
        Verdict::Holds(ok) => (true, ok, None),
    };
    let witness = (hypothesis_satisfied && !conclusion_holds).then(|| instance.clone());
    CheckOutcome { theorem, seed, hypothesis_satisfied, conclusion_holds, skip_reason, witness }
}

/// Instances that drop one hypothesis of `theorem`; only T13, T14 and T15
/// have controls.
pub fn generate_control(theorem: TheoremId, seed: u64) -> Result<Option<Instance>> {
    let r = &mut rng(seed);
    let s = space(r);
    let n = s.size();
    let lebesgue = AlphaCapacity::lebesgue();
    let inst = match theorem {
        TheoremId::T13 => {
            // convex distortion: supermodular, not submodular
            let mu = capacity(r, &s, CapacityKind::Superadditive)?;
            let mut inst = Instance::new(mu, lebesgue, values(r, n), s.full());
            inst.g = Some(values(r, n));
            inst
        }
        TheoremId::T14 => {
            let mu = capacity(r, &s, CapacityKind::Monotone)?;
            let (a, b) = disjoint_pair(r, n);
            let mut inst = Instance::new(mu, lebesgue, values(r, n), a);
            inst.b = Some(b);
            inst
        }
        TheoremId::T15 => {
            let mu = capacity(r, &s, CapacityKind::Subadditive)?;
            let split = subset(r, n);
            let f = values(r, n).into_iter().enumerate().map(|(i, v)| if split.contains(i) { v } else { Q::zero() });
            let g = values(r, n).into_iter().enumerate().map(|(i, v)| if split.contains(i) { Q::zero() } else { v });
            let mut inst = Instance::new(mu, lebesgue, f.collect(), s.full());
            inst.g = Some(g.collect());
            inst
        }
        _ => return Ok(None),
    };
    Ok(Some(inst))
}

pub const CONTROLLED: [TheoremId; 3] = [TheoremId::T13, TheoremId::T14, TheoremId::T15];

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub theorems: Vec<TheoremId>,
    pub instances_per_theorem: usize,
    pub seed: u64,
    pub negative_controls: bool,
    pub control_instances: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            theorems: TheoremId::ALL.to_vec(),
            instances_per_theorem: 200,
            seed: 42,
            negative_controls: true,
            control_instances: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremCounts {
    pub theorem: TheoremId,
    pub instances: usize,
    pub skipped: usize,
    pub passed: usize,
    pub failed: usize,
    /// Failing outcomes, with their witnesses.
    pub failures: Vec<CheckOutcome>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ControlResult {
    pub theorem: TheoremId,
    pub instances: usize,
    pub violations: usize,
    pub first_violation: Option<(u64, Instance)>,
}

impl ControlResult {
    pub fn fired(&self) -> bool {
        self.violations > 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub counts: Vec<TheoremCounts>,
    pub controls: Vec<ControlResult>,
    /// Filled in by callers that can read a clock.
    pub wall_clock_ms: Option<u128>,
}

impl SuiteReport {
    pub fn failed(&self) -> usize {
        self.counts.iter().map(|c| c.failed).sum()
    }

    /// No failures and every negative control found a counterexample.
    pub fn passed(&self) -> bool {
        self.failed() == 0 && self.controls.iter().all(ControlResult::fired)
    }
}

/// splitmix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the `index`-th instance of `theorem` under a suite seed.
pub fn instance_seed(seed: u64, theorem: TheoremId, index: usize) -> u64 {
    mix(mix(seed ^ (theorem.number() as u64).wrapping_mul(0x1000_0000_01b3)) ^ index as u64)
}

pub fn run_theorem(theorem: TheoremId, instances: usize, seed: u64) -> Result<TheoremCounts> {
    let mut counts = TheoremCounts { theorem, instances, skipped: 0, passed: 0, failed: 0, failures: Vec::new() };
    for i in 0..instances {
        let s = instance_seed(seed, theorem, i);
        let outcome = check(theorem, &generate(theorem, s)?, s);
        if !outcome.hypothesis_satisfied {
            counts.skipped += 1;
        } else if outcome.conclusion_holds {
            counts.passed += 1;
        } else {
            counts.failed += 1;
            counts.failures.push(outcome);
        }
    }
    Ok(counts)
}

pub fn run_control(theorem: TheoremId, instances: usize, seed: u64) -> Result<ControlResult> {
    let mut result = ControlResult { theorem, instances: 0, violations: 0, first_violation: None };
    for i in 0..instances {
        let s = instance_seed(!seed, theorem, i);
        let Some(inst) = generate_control(theorem, s)? else {
            break;
        };
        result.instances += 1;
        if let Verdict::Holds(false) = evaluate(theorem, &inst, false) {
            result.violations += 1;
            if result.first_violation.is_none() {
                result.first_violation = Some((s, inst));
            }
        }
    }
    Ok(result)
}

pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let mut theorems = config.theorems.clone();
    theorems.sort();
    theorems.dedup();
    let counts = theorems
        .iter()
        .map(|&t| run_theorem(t, config.instances_per_theorem, config.seed))
        .collect::<Result<Vec<_>>>()?;
    let controls = if config.negative_controls {
        CONTROLLED
            .iter()
            .filter(|t| theorems.contains(t))
            .map(|&t| run_control(t, config.control_instances, config.seed))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(SuiteReport { counts, controls, wall_clock_ms: None })
}
