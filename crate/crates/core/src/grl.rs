//! The generalized decomposition integral
//! `int*_A f d(nu, mu) = (RL) int_[0, inf) mu({s in A : f(s) >= alpha}) d nu(alpha)`.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::alpha::AlphaCapacity;
use crate::capacity::{Capacity, GroundSpace, Subset};
use crate::interval::{integrate_power_survival, PowerSurvival, ScenarioInterval};
use crate::partition::EnvelopeConfig;
use crate::rational::{Magnitude, Q};
use crate::rl::{rl_estimate, rl_integrate, rl_integrate_probed, RlResult};
use crate::step::StepFunction;
use crate::{Error, Result};

/// `(space, mu, nu, f, A)` on a finite ground set.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioFinite {
    pub mu: Capacity,
    pub nu: AlphaCapacity,
    pub f: Vec<Q>,
    pub a: Subset,
    /// Declares `nu({0}) = 0`; construction fails if `nu` disagrees.
    pub assume_nu_zero_at_origin: bool,
}

impl ScenarioFinite {
    pub fn new(mu: Capacity, nu: AlphaCapacity, f: Vec<Q>, a: Subset, assume_nu_zero_at_origin: bool) -> Result<Self> {
        let n = mu.space().size();
        if f.len() != n {
            return Err(Error::InvalidScenario(format!("f has {} values for {} points", f.len(), n)));
        }
        if let Some(i) = f.iter().position(Signed::is_negative) {
            return Err(Error::InvalidScenario(format!("f is negative at point {i}")));
        }
        mu.space().check(a)?;
        check_origin_assumption(&nu, assume_nu_zero_at_origin)?;
        Ok(ScenarioFinite { mu, nu, f, a, assume_nu_zero_at_origin })
    }

    pub fn space(&self) -> &GroundSpace {
        self.mu.space()
    }
}

pub(crate) fn check_origin_assumption(nu: &AlphaCapacity, assumed: bool) -> Result<()> {
    if assumed && !nu.mass_at_origin().is_zero() {
        return Err(Error::InvalidScenario("nu({0}) = 0 is assumed but does not hold".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scenario {
    Finite(ScenarioFinite),
    Interval(ScenarioInterval),
}

impl Scenario {
    pub fn nu(&self) -> &AlphaCapacity {
        match self {
            Scenario::Finite(s) => &s.nu,
            Scenario::Interval(s) => &s.nu,
        }
    }

    pub fn assume_nu_zero_at_origin(&self) -> bool {
        match self {
            Scenario::Finite(s) => s.assume_nu_zero_at_origin,
            Scenario::Interval(s) => s.assume_nu_zero_at_origin,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Survival {
    Step(StepFunction),
    Power(PowerSurvival),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrlReport {
    /// `f` belongs to `G_RL(nu, mu, A)`: the integral exists and is finite.
    pub integrable: bool,
    pub value: Option<Magnitude>,
    pub survival: Survival,
    pub rl: RlResult,
    pub assume_nu_zero_at_origin: bool,
    pub nu_mass_at_origin: Magnitude,
}

/// How [`grl_integrate_with`] evaluates the Riemann-Lebesgue integral of a
/// step survival function.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum Strategy {
    /// Closed form only.
    ClosedForm,
    /// Closed form with the refinement-envelope trace attached.
    #[default]
    Probed,
    /// Refinement envelopes alone.
    Estimate,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GrlOptions {
    pub strategy: Strategy,
    pub envelope: EnvelopeConfig,
}

/// `alpha -> mu({s in A : f(s) >= alpha})` as a left-continuous step function:
/// `mu(A)` at 0, `mu({f >= w_j} & A)` on `(w_{j-1}, w_j]` for the sorted
/// positive values `w_j` of `f` on `A`, and 0 after the largest.
pub fn survival_finite(f: &[Q], mu: &Capacity, a: Subset) -> StepFunction {
    let mut levels: Vec<Q> = a.indices().map(|i| f[i].clone()).filter(Signed::is_positive).collect();
    levels.sort();
    levels.dedup();
    let values = levels
        .iter()
        .map(|w| {
            let upper = Subset::from_indices(a.indices().filter(|&i| &f[i] >= w));
            mu.at(upper).clone()
        })
        .collect();
    StepFunction::left_continuous(mu.at(a).clone(), levels, values).expect("levels are sorted and positive")
}

/// `f * chi_A`.
pub fn restrict_indicator(f: &[Q], a: Subset) -> Vec<Q> {
    f.iter().enumerate().map(|(i, v)| if a.contains(i) { v.clone() } else { Q::zero() }).collect()
}

/// The integral alone, in closed form, without building a report.
pub fn generalized_integral(f: &[Q], mu: &Capacity, nu: &AlphaCapacity, a: Subset) -> RlResult {
    rl_integrate(&survival_finite(f, mu, a), nu)
}

pub fn grl_integrate(scenario: &Scenario) -> GrlReport {
    grl_integrate_with(scenario, &GrlOptions::default())
}

pub fn grl_integrate_with(scenario: &Scenario, options: &GrlOptions) -> GrlReport {
    let (survival, rl) = match scenario {
        Scenario::Finite(s) => {
            let u = survival_finite(&s.f, &s.mu, s.a);
            let rl = match options.strategy {
                Strategy::ClosedForm => rl_integrate(&u, &s.nu),
                Strategy::Probed => rl_integrate_probed(&u, &s.nu, &options.envelope),
                Strategy::Estimate => rl_estimate(&u, &s.nu, &options.envelope),
            };
            (Survival::Step(u), rl)
        }
        Scenario::Interval(s) => {
            let u = s.survival();
            let rl = integrate_power_survival(&u, &s.nu);
            (Survival::Power(u), rl)
        }
    };
    let value = rl.value.clone();
    GrlReport {
        integrable: rl.exists && value.as_ref().is_some_and(|v| !v.is_infinite()),
        value,
        survival,
        rl,
        assume_nu_zero_at_origin: scenario.assume_nu_zero_at_origin(),
        nu_mass_at_origin: scenario.nu().mass_at_origin(),
    }
}
