use grl::format::{capacity_to_json, ScenarioFile};
use grl::report::report_json;
use grl::{parse_capacity, parse_scenario, scenario_to_json};
use grl_core::grl::{grl_integrate, Scenario};
use grl_core::rational::{q, qi};
use grl_core::{random_capacity, AlphaCapacity, Atom, CapacityKind, GroundSpace, Q, ScenarioFinite, ScenarioInterval, Segment, Subset};

fn round_trip(s: &Scenario) {
    let text = scenario_to_json(s);
    let back = parse_scenario(&text, "round-trip").unwrap_or_else(|e| panic!("{e}\n{text}"));
    assert_eq!(&back, s);
    assert_eq!(report_json(&grl_integrate(&back)), report_json(&grl_integrate(s)));
    assert_eq!(scenario_to_json(&back), text);
}

fn level_measures() -> Vec<AlphaCapacity> {
    vec![
        AlphaCapacity::lebesgue(),
        AlphaCapacity::sigma_additive(
            vec![Atom { at: qi(0), mass: q(1, 3) }, Atom { at: q(5, 2), mass: qi(2) }],
            vec![Segment { start: qi(1), end: Some(qi(3)), density: q(1, 2) }],
        )
        .unwrap(),
        AlphaCapacity::dirac(q(3, 2)).unwrap(),
        AlphaCapacity::vanishing_on_bounded(q(7, 4)).unwrap(),
        AlphaCapacity::distorted_power(qi(2)).unwrap(),
        AlphaCapacity::distorted_power(q(1, 2)).unwrap(),
    ]
}

#[test]
fn finite_scenarios_round_trip() {
    for (k, nu) in level_measures().into_iter().enumerate() {
        for seed in 0..10u64 {
            let n = 1 + (seed as usize % 5);
            let space = GroundSpace::new(n).unwrap();
            let mu = random_capacity(&space, CapacityKind::ALL[seed as usize % 6], seed + 100 * k as u64).unwrap();
            let f: Vec<Q> = (0..n).map(|i| q((i as i64 * 7 + seed as i64) % 5, 1 + (i as i64 % 3))).collect();
            let a = Subset((seed as u32 * 13) % (1 << n));
            let assume = nu.mass_at_origin().is_zero();
            round_trip(&Scenario::Finite(ScenarioFinite::new(mu, nu.clone(), f, a, assume).unwrap()));
        }
    }
}

#[test]
fn interval_scenarios_round_trip() {
    for nu in level_measures() {
        let sc = ScenarioInterval::new(
            qi(2),
            q(3, 2),
            nu,
            vec![(qi(0), qi(1)), (qi(1), qi(3)), (qi(2), q(1, 2))],
            vec![(qi(0), q(1, 2)), (qi(1), qi(2))],
            false,
        )
        .unwrap();
        round_trip(&Scenario::Interval(sc));
    }
}

#[test]
fn labelled_space_round_trips() {
    let text = r#"{"space": {"kind": "finite", "size": 2, "labels": ["p", "q"]},
        "mu": {"kind": "additive", "masses": ["1/2", "1/4"]},
        "nu": {"kind": "dirac", "at": "1"},
        "f": {"values": ["2", "1/2"]},
        "A": ["q"]}"#;
    let s = parse_scenario(text, "labels").unwrap();
    let Scenario::Finite(fin) = &s else { panic!() };
    assert_eq!(fin.a, Subset(0b10));
    assert_eq!(fin.space().labels().unwrap(), ["p", "q"]);
    round_trip(&s);
}

#[test]
fn capacity_values_read_back_exactly() {
    let space = GroundSpace::new(4).unwrap();
    for kind in CapacityKind::ALL {
        let c = random_capacity(&space, kind, 11).unwrap();
        let back = parse_capacity(&capacity_to_json(&c), "cap").unwrap();
        for b in space.subsets() {
            assert_eq!(back.evaluate(b).unwrap(), c.evaluate(b).unwrap());
        }
    }
}

#[test]
fn file_shape_is_stable() {
    let sc = ScenarioInterval::new(
        qi(1),
        qi(2),
        AlphaCapacity::lebesgue(),
        vec![(qi(0), qi(0)), (qi(1), qi(1))],
        vec![(qi(0), qi(1))],
        true,
    )
    .unwrap();
    let value: serde_json::Value = serde_json::from_str(&scenario_to_json(&Scenario::Interval(sc))).unwrap();
    assert_eq!(value["space"], serde_json::json!({"kind": "interval", "end": "1"}));
    assert_eq!(value["mu"], serde_json::json!({"kind": "power", "exponent": "2"}));
    assert_eq!(value["A"], serde_json::json!([["0", "1"]]));
    assert_eq!(value["nu"]["kind"], "sigma_additive");
    let _: ScenarioFile = serde_json::from_value(value).unwrap();
}

#[test]
fn mismatched_shapes_are_rejected() {
    let base = |space: &str, mu: &str, f: &str, a: &str| {
        format!(r#"{{"space": {space}, "mu": {mu}, "nu": {{"kind": "lebesgue"}}, "f": {f}, "A": {a}}}"#)
    };
    let finite = r#"{"kind": "finite", "size": 2}"#;
    let interval = r#"{"kind": "interval", "end": "1"}"#;
    let zero = r#"{"kind": "zero"}"#;
    let power = r#"{"kind": "power", "exponent": "2"}"#;
    let values = r#"{"values": ["1", "2"]}"#;
    let knots = r#"{"knots": [["0", "0"], ["1", "1"]]}"#;
    assert!(parse_scenario(&base(finite, zero, values, "\"all\""), "ok").is_ok());
    assert!(parse_scenario(&base(finite, power, values, "\"all\""), "x").is_err());
    assert!(parse_scenario(&base(finite, zero, knots, "\"all\""), "x").is_err());
    assert!(parse_scenario(&base(interval, zero, knots, "\"all\""), "x").is_err());
    assert!(parse_scenario(&base(interval, power, values, "\"all\""), "x").is_err());
    assert!(parse_scenario(&base(interval, power, knots, "[[\"0\", \"2\"]]"), "x").is_err());
    assert!(parse_scenario(&base(finite, zero, values, "\"some\""), "x").is_err());
    assert!(parse_scenario(&base(finite, zero, r#"{"values": ["1", "-2"]}"#, "\"all\""), "x").is_err());
    let origin = r#"{"space": {"kind": "finite", "size": 1}, "mu": {"kind": "zero"},
        "nu": {"kind": "dirac", "at": "0"}, "f": {"values": ["1"]}, "assume_nu_zero_at_origin": true}"#;
    let err = parse_scenario(origin, "origin").unwrap_err().to_string();
    assert!(err.contains("nu({0}) = 0 is assumed"), "{err}");
}
