//! The four worked examples shipped with the command line, each with its
//! expected value.

use grl_core::grl::Scenario;
use grl_core::partition::Cell;
use grl_core::rational::{q, qi};
use grl_core::{grl_integrate, AlphaCapacity, Atom, Capacity, GroundSpace, Magnitude, ScenarioFinite, ScenarioInterval, Segment, Subset};

use crate::report::magnitude_text;

/// Points kept from the natural numbers in the last example.
pub const TRUNCATION: usize = 8;

pub struct Example {
    pub name: &'static str,
    pub scenario: Scenario,
    pub expected: Magnitude,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleOutcome {
    pub name: &'static str,
    pub expected: String,
    pub computed: String,
    pub matches: bool,
}

/// `mu = 0` against a finite-variation `nu`.
pub fn zero_capacity() -> Example {
    let space = GroundSpace::new(3).unwrap();
    let nu = AlphaCapacity::sigma_additive(
        vec![Atom { at: qi(1), mass: q(1, 2) }],
        vec![Segment { start: qi(0), end: Some(qi(5)), density: qi(1) }],
    )
    .unwrap();
    let sc = ScenarioFinite::new(Capacity::zero(space), nu, vec![qi(1), qi(2), qi(3)], Subset(0b111), true).unwrap();
    Example { name: "zero capacity", scenario: Scenario::Finite(sc), expected: Magnitude::zero() }
}

/// `f = 2` with `mu(S) = 1`; the value is `mu(S) * nu([0, 2])`.
pub fn constant_function() -> Example {
    let space = GroundSpace::new(3).unwrap();
    let values = [q(1, 5), q(1, 5), q(2, 5), q(1, 2), q(3, 5), q(7, 10), qi(1)];
    let mu = Capacity::from_fn(space, |b| if b.is_empty() { qi(0) } else { values[b.0 as usize - 1].clone() }).unwrap();
    let nu = AlphaCapacity::lebesgue();
    let expected = nu.measure(&Cell::closed(qi(0), qi(2))).scale(&mu.values()[7]);
    let sc = ScenarioFinite::new(mu, nu, vec![qi(2); 3], Subset(0b111), true).unwrap();
    Example { name: "constant function", scenario: Scenario::Finite(sc), expected }
}

/// `f(x) = x` on `[0, 1]`, `mu = lambda^2`, Lebesgue `nu`:
/// `int_0^1 (1 - alpha)^2 d alpha = 1/3`.
pub fn squared_lebesgue() -> Example {
    let sc = ScenarioInterval::new(
        qi(1),
        qi(2),
        AlphaCapacity::lebesgue(),
        vec![(qi(0), qi(0)), (qi(1), qi(1))],
        vec![(qi(0), qi(1))],
        true,
    )
    .unwrap();
    Example { name: "identity on [0, 1] under lambda^2", scenario: Scenario::Interval(sc), expected: Magnitude::Exact(q(1, 3)) }
}

/// `f(n) = n` on the first [`TRUNCATION`] naturals, `mu = 1` on nonempty
/// sets, `nu` zero on bounded sets and 1 on unbounded ones.
pub fn vanishing_level_measure() -> Example {
    let space = GroundSpace::new(TRUNCATION).unwrap();
    let mu = Capacity::from_fn(space, |b| if b.is_empty() { qi(0) } else { qi(1) }).unwrap();
    let nu = AlphaCapacity::vanishing_on_bounded(qi(1)).unwrap();
    let f = (0..TRUNCATION as i64).map(qi).collect();
    let sc = ScenarioFinite::new(mu, nu, f, Subset::full(TRUNCATION), true).unwrap();
    Example { name: "naturals, nu vanishing on bounded sets", scenario: Scenario::Finite(sc), expected: Magnitude::zero() }
}

pub fn all() -> Vec<Example> {
    vec![zero_capacity(), constant_function(), squared_lebesgue(), vanishing_level_measure()]
}

pub fn run(example: &Example) -> ExampleOutcome {
    let report = grl_integrate(&example.scenario);
    let computed = report.value.as_ref().map_or_else(|| "does not exist".to_string(), magnitude_text);
    ExampleOutcome {
        name: example.name,
        expected: magnitude_text(&example.expected),
        computed,
        matches: report.value.as_ref() == Some(&example.expected),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_examples_match() {
        for ex in all() {
            let out = run(&ex);
            assert!(out.matches, "{}: expected {} got {}", out.name, out.expected, out.computed);
        }
    }

    #[test]
    fn constant_example_expects_two() {
        assert_eq!(constant_function().expected, Magnitude::Exact(qi(2)));
    }
}
