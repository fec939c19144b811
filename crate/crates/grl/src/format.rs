//! JSON file formats for capacities and scenarios.
//!
//! Rationals are written as strings (`"3/4"`, `"2"`); integers are also
//! accepted on input. A capacity lists every subset of its space by decimal
//! bitmask:
//!
//! ```json
//! { "space": { "size": 2, "labels": ["x", "y"] },
//!   "values": { "0": "0", "1": "1/2", "2": "1/3", "3": "1" } }
//! ```
//!
//! A scenario is either finite or an interval scenario, chosen by
//! `space.kind`:
//!
//! ```json
//! { "space": { "kind": "interval", "end": "1" },
//!   "mu": { "kind": "power", "exponent": "2" },
//!   "nu": { "kind": "lebesgue" },
//!   "f": { "knots": [["0", "0"], ["1", "1"]] },
//!   "A": "all",
//!   "assume_nu_zero_at_origin": true }
//! ```

use std::collections::BTreeMap;
use std::fmt;

use grl_core::grl::Scenario;
use grl_core::rational::{format_q, parse_q};
use grl_core::{AlphaCapacity, Atom, Capacity, GroundSpace, Q, ScenarioFinite, ScenarioInterval, Segment, Subset};
use num_traits::Zero;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::InputError;

/// An exact rational as it appears in files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational(pub Q);

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct RationalVisitor;

        impl Visitor<'_> for RationalVisitor {
            type Value = Rational;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational such as \"3/4\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
                parse_q(v).map(Rational).ok_or_else(|| E::custom(format!("malformed rational {v:?}")))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational(Q::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
                Ok(Rational(Q::from_integer(v.into())))
            }
        }

        d.deserialize_any(RationalVisitor)
    }
}

/// Capacity values keyed by decimal subset bitmask.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table(pub BTreeMap<u32, Rational>);

impl Serialize for Table {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(self.0.iter().map(|(k, v)| (k.to_string(), v)))
    }
}

impl<'de> Deserialize<'de> for Table {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, Rational>::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (k, v) in raw {
            let mask = k.trim().parse::<u32>().map_err(|_| de::Error::custom(format!("subset key {k:?} is not a bitmask")))?;
            if out.insert(mask, v).is_some() {
                return Err(de::Error::custom(format!("subset {mask} is listed twice")));
            }
        }
        Ok(Table(out))
    }
}

fn r(v: &Q) -> Rational {
    Rational(v.clone())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl SpaceFile {
    fn build(&self) -> grl_core::Result<GroundSpace> {
        match &self.labels {
            Some(labels) if labels.len() != self.size => Err(grl_core::Error::InvalidCapacity(format!(
                "{} labels for a space of {} points",
                labels.len(),
                self.size
            ))),
            Some(labels) => GroundSpace::with_labels(labels.clone()),
            None => GroundSpace::new(self.size),
        }
    }

    fn of(space: &GroundSpace) -> Self {
        SpaceFile { size: space.size(), labels: space.labels().map(<[String]>::to_vec) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityFile {
    pub space: SpaceFile,
    pub values: Table,
}

impl CapacityFile {
    pub fn of(c: &Capacity) -> Self {
        CapacityFile { space: SpaceFile::of(c.space()), values: table(c) }
    }

    pub fn build(&self) -> grl_core::Result<Capacity> {
        let space = self.space.build()?;
        build_table(space, &self.values)
    }
}

fn table(c: &Capacity) -> Table {
    Table(c.values().iter().enumerate().map(|(mask, v)| (mask as u32, r(v))).collect())
}

fn build_table(space: GroundSpace, values: &Table) -> grl_core::Result<Capacity> {
    let values = &values.0;
    let count = space.subset_count() as u32;
    if let Some(mask) = values.keys().find(|&&m| m >= count) {
        return Err(grl_core::Error::SubsetOutOfRange { mask: *mask, size: space.size() });
    }
    let missing: Vec<String> = (0..count).filter(|m| !values.contains_key(m)).map(|m| m.to_string()).collect();
    if !missing.is_empty() {
        return Err(grl_core::Error::InvalidCapacity(format!("no value for subsets {}", missing.join(", "))));
    }
    Capacity::new(space, values.values().map(|v| v.0.clone()).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioSpaceFile {
    Finite {
        size: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Interval {
        end: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MuFile {
    /// Every subset by bitmask.
    Table { values: Table },
    /// Point masses.
    Additive { masses: Vec<Rational> },
    /// `mu(B) = 0` for every `B`.
    Zero,
    /// `lambda^p` on an interval.
    Power { exponent: Rational },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomFile {
    pub at: Rational,
    pub mass: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentFile {
    pub start: Rational,
    /// Absent or `null` for a segment running to infinity.
    #[serde(default)]
    pub end: Option<Rational>,
    pub density: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NuFile {
    Lebesgue,
    SigmaAdditive {
        #[serde(default)]
        atoms: Vec<AtomFile>,
        #[serde(default)]
        segments: Vec<SegmentFile>,
    },
    Dirac {
        at: Rational,
    },
    VanishingOnBounded {
        level: Rational,
    },
    DistortedPower {
        exponent: Rational,
    },
}

impl NuFile {
    pub fn of(nu: &AlphaCapacity) -> Self {
        match nu {
            AlphaCapacity::SigmaAdditive { atoms, segments } => NuFile::SigmaAdditive {
                atoms: atoms.iter().map(|a| AtomFile { at: r(&a.at), mass: r(&a.mass) }).collect(),
                segments: segments
                    .iter()
                    .map(|s| SegmentFile { start: r(&s.start), end: s.end.as_ref().map(r), density: r(&s.density) })
                    .collect(),
            },
            AlphaCapacity::Dirac { at } => NuFile::Dirac { at: r(at) },
            AlphaCapacity::VanishingOnBounded { level } => NuFile::VanishingOnBounded { level: r(level) },
            AlphaCapacity::DistortedPower { exponent } => NuFile::DistortedPower { exponent: r(exponent) },
        }
    }

    pub fn build(&self) -> grl_core::Result<AlphaCapacity> {
        match self {
            NuFile::Lebesgue => Ok(AlphaCapacity::lebesgue()),
            NuFile::SigmaAdditive { atoms, segments } => AlphaCapacity::sigma_additive(
                atoms.iter().map(|a| Atom { at: a.at.0.clone(), mass: a.mass.0.clone() }).collect(),
                segments
                    .iter()
                    .map(|s| Segment {
                        start: s.start.0.clone(),
                        end: s.end.as_ref().map(|e| e.0.clone()),
                        density: s.density.0.clone(),
                    })
                    .collect(),
            ),
            NuFile::Dirac { at } => AlphaCapacity::dirac(at.0.clone()),
            NuFile::VanishingOnBounded { level } => AlphaCapacity::vanishing_on_bounded(level.0.clone()),
            NuFile::DistortedPower { exponent } => AlphaCapacity::distorted_power(exponent.0.clone()),
        }
    }
}

/// `values` for a finite scenario, `knots` for an interval one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub knots: Option<Vec<(Rational, Rational)>>,
}

/// `"all"`, a list of point indices (or labels), or a list of closed
/// intervals `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetFile {
    Named(String),
    Points(Vec<PointRef>),
    Intervals(Vec<(Rational, Rational)>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRef {
    Index(usize),
    Label(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub space: ScenarioSpaceFile,
    pub mu: MuFile,
    pub nu: NuFile,
    pub f: FunctionFile,
    #[serde(rename = "A", default = "all")]
    pub a: SetFile,
    #[serde(default)]
    pub assume_nu_zero_at_origin: bool,
}

fn all() -> SetFile {
    SetFile::Named("all".into())
}

/// Which top-level key a validation error belongs to, for error locations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Space,
    Mu,
    Nu,
    F,
    A,
    Origin,
}

impl Field {
    pub fn key(self) -> &'static str {
        match self {
            Field::Space => "space",
            Field::Mu => "mu",
            Field::Nu => "nu",
            Field::F => "f",
            Field::A => "A",
            Field::Origin => "assume_nu_zero_at_origin",
        }
    }
}

type Built<T> = Result<T, (Field, grl_core::Error)>;

fn at(field: Field) -> impl FnOnce(grl_core::Error) -> (Field, grl_core::Error) {
    move |e| (field, e)
}

fn invalid(field: Field, msg: impl Into<String>) -> (Field, grl_core::Error) {
    (field, grl_core::Error::InvalidScenario(msg.into()))
}

impl ScenarioFile {
    pub fn of(scenario: &Scenario) -> Self {
        match scenario {
            Scenario::Finite(s) => {
                let space = s.space();
                ScenarioFile {
                    space: ScenarioSpaceFile::Finite { size: space.size(), labels: space.labels().map(<[String]>::to_vec) },
                    mu: MuFile::Table { values: table(&s.mu) },
                    nu: NuFile::of(&s.nu),
                    f: FunctionFile { values: Some(s.f.iter().map(r).collect()), knots: None },
                    a: SetFile::Points(s.a.indices().map(PointRef::Index).collect()),
                    assume_nu_zero_at_origin: s.assume_nu_zero_at_origin,
                }
            }
            Scenario::Interval(s) => ScenarioFile {
                space: ScenarioSpaceFile::Interval { end: r(&s.end) },
                mu: MuFile::Power { exponent: r(&s.exponent) },
                nu: NuFile::of(&s.nu),
                f: FunctionFile { values: None, knots: Some(s.knots.iter().map(|(x, y)| (r(x), r(y))).collect()) },
                a: SetFile::Intervals(s.a.iter().map(|(lo, hi)| (r(lo), r(hi))).collect()),
                assume_nu_zero_at_origin: s.assume_nu_zero_at_origin,
            },
        }
    }

    /// Validates and converts; errors name the offending top-level key.
    pub fn build(&self) -> Built<Scenario> {
        let nu = self.nu.build().map_err(at(Field::Nu))?;
        match &self.space {
            ScenarioSpaceFile::Finite { size, labels } => {
                let space = SpaceFile { size: *size, labels: labels.clone() }.build().map_err(at(Field::Space))?;
                let mu = match &self.mu {
                    MuFile::Table { values } => build_table(space.clone(), values),
                    MuFile::Additive { masses } => {
                        if masses.len() != space.size() {
                            return Err(invalid(Field::Mu, format!("{} masses for {} points", masses.len(), space.size())));
                        }
                        Capacity::additive(space.clone(), &masses.iter().map(|m| m.0.clone()).collect::<Vec<_>>())
                    }
                    MuFile::Zero => Ok(Capacity::zero(space.clone())),
                    MuFile::Power { .. } => return Err(invalid(Field::Mu, "power mu needs an interval space")),
                }
                .map_err(at(Field::Mu))?;
                let f = match (&self.f.values, &self.f.knots) {
                    (Some(values), None) => values.iter().map(|v| v.0.clone()).collect(),
                    _ => return Err(invalid(Field::F, "a finite scenario takes f as \"values\"")),
                };
                let a = finite_set(&self.a, &space)?;
                ScenarioFinite::new(mu, nu, f, a, self.assume_nu_zero_at_origin)
                    .map(Scenario::Finite)
                    .map_err(|e| (blame(&e), e))
            }
            ScenarioSpaceFile::Interval { end } => {
                let exponent = match &self.mu {
                    MuFile::Power { exponent } => exponent.0.clone(),
                    _ => return Err(invalid(Field::Mu, "an interval scenario takes mu of kind \"power\"")),
                };
                let knots = match (&self.f.values, &self.f.knots) {
                    (None, Some(knots)) => knots.iter().map(|(x, y)| (x.0.clone(), y.0.clone())).collect(),
                    _ => return Err(invalid(Field::F, "an interval scenario takes f as \"knots\"")),
                };
                let a = match &self.a {
                    SetFile::Named(n) if n == "all" => vec![(Q::zero(), end.0.clone())],
                    SetFile::Intervals(list) => list.iter().map(|(lo, hi)| (lo.0.clone(), hi.0.clone())).collect(),
                    SetFile::Points(p) if p.is_empty() => Vec::new(),
                    _ => return Err(invalid(Field::A, "A must be \"all\" or a list of [lo, hi] intervals")),
                };
                ScenarioInterval::new(end.0.clone(), exponent, nu, knots, a, self.assume_nu_zero_at_origin)
                    .map(Scenario::Interval)
                    .map_err(|e| (blame(&e), e))
            }
        }
    }
}

/// Attributes a core validation error to the key that most likely caused it.
fn blame(e: &grl_core::Error) -> Field {
    let text = e.to_string();
    if text.contains("nu({0})") {
        Field::Origin
    } else if text.contains("subinterval") || matches!(e, grl_core::Error::SubsetOutOfRange { .. }) {
        Field::A
    } else if text.contains("exponent") {
        Field::Mu
    } else if text.contains("domain end") {
        Field::Space
    } else {
        Field::F
    }
}

fn finite_set(set: &SetFile, space: &GroundSpace) -> Built<Subset> {
    match set {
        SetFile::Named(n) if n == "all" => Ok(space.full()),
        SetFile::Named(n) => Err(invalid(Field::A, format!("unknown set {n:?}; use \"all\" or a list of points"))),
        SetFile::Points(points) => {
            let mut b = Subset::EMPTY;
            for p in points {
                b = b.union(Subset::singleton(point_index(p, space).map_err(at(Field::A))?));
            }
            Ok(b)
        }
        SetFile::Intervals(_) => Err(invalid(Field::A, "a finite scenario takes A as a list of points")),
    }
}

/// Resolves an index or a label against `space`.
pub fn point_index(p: &PointRef, space: &GroundSpace) -> grl_core::Result<usize> {
    let i = match p {
        PointRef::Index(i) => *i,
        PointRef::Label(l) => space
            .labels()
            .and_then(|ls| ls.iter().position(|x| x == l))
            .ok_or_else(|| grl_core::Error::InvalidScenario(format!("no point labelled {l:?}")))?,
    };
    if i >= space.size() {
        return Err(grl_core::Error::SubsetOutOfRange { mask: 1u32.checked_shl(i as u32).unwrap_or(0), size: space.size() });
    }
    Ok(i)
}

/// Parses a subset written as `all`, `{}` or comma-separated indices or
/// labels, e.g. `0,2` or `x,z`.
pub fn parse_subset(text: &str, space: &GroundSpace) -> grl_core::Result<Subset> {
    let text = text.trim().trim_start_matches('{').trim_end_matches('}').trim();
    if text == "all" {
        return Ok(space.full());
    }
    let mut b = Subset::EMPTY;
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let p = match part.parse::<usize>() {
            Ok(i) => PointRef::Index(i),
            Err(_) => PointRef::Label(part.to_string()),
        };
        b = b.union(Subset::singleton(point_index(&p, space)?));
    }
    Ok(b)
}

/// 1-based line and column of the first occurrence of `"key"` in `text`.
pub fn locate(text: &str, key: &str) -> Option<(usize, usize)> {
    let offset = text.find(&format!("\"{key}\""))?;
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    Some((line, column))
}

fn parse_error(source: &str, e: serde_json::Error) -> InputError {
    let text = e.to_string();
    let message = match text.rfind(" at line ") {
        Some(i) => text[..i].to_string(),
        None => text,
    };
    InputError::Parse { file: source.into(), line: e.line(), column: e.column(), message }
}

pub fn parse_capacity(text: &str, source: &str) -> Result<Capacity, InputError> {
    let file: CapacityFile = serde_json::from_str(text).map_err(|e| parse_error(source, e))?;
    file.build().map_err(|e| {
        let key = if matches!(e, grl_core::Error::InvalidCapacity(ref m) if m.contains("label")) { "space" } else { "values" };
        let (line, column) = locate(text, key).unwrap_or((1, 1));
        InputError::Invalid { file: source.into(), line, column, error: e }
    })
}

pub fn parse_scenario(text: &str, source: &str) -> Result<Scenario, InputError> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| parse_error(source, e))?;
    file.build().map_err(|(field, error)| {
        let (line, column) = locate(text, field.key()).unwrap_or((1, 1));
        InputError::Invalid { file: source.into(), line, column, error }
    })
}

pub fn scenario_to_json(scenario: &Scenario) -> String {
    serde_json::to_string_pretty(&ScenarioFile::of(scenario)).expect("scenario files always serialize")
}

pub fn capacity_to_json(c: &Capacity) -> String {
    serde_json::to_string_pretty(&CapacityFile::of(c)).expect("capacity files always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use grl_core::rational::{q, qi};

    const PAIR: &str = r#"{ "space": { "size": 2 }, "values": { "0": "0", "1": "1/2", "2": 1, "3": "6/4" } }"#;

    #[test]
    fn capacity_parses() {
        let c = parse_capacity(PAIR, "pair.json").unwrap();
        assert_eq!(c.values(), &[qi(0), q(1, 2), qi(1), q(3, 2)]);
    }

    #[test]
    fn capacity_round_trip() {
        let c = parse_capacity(PAIR, "pair.json").unwrap();
        assert_eq!(parse_capacity(&capacity_to_json(&c), "again").unwrap(), c);
    }

    #[test]
    fn missing_subset_is_reported() {
        let text = "{\n  \"space\": { \"size\": 2 },\n  \"values\": { \"0\": \"0\", \"1\": \"1\", \"3\": \"1\" }\n}";
        let err = parse_capacity(text, "gap.json").unwrap_err();
        let msg = err.to_string();
        assert!(msg.starts_with("gap.json:3:3:"), "{msg}");
        assert!(msg.contains("no value for subsets 2"), "{msg}");
    }

    #[test]
    fn malformed_rational_has_position() {
        let text = "{\"space\": {\"size\": 1},\n \"values\": {\"0\": \"0\", \"1\": \"1/0\"}}";
        let err = parse_capacity(text, "bad.json").unwrap_err();
        match err {
            InputError::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("malformed rational"), "{message}");
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn extra_subset_rejected() {
        let text = r#"{"space": {"size": 1}, "values": {"0": "0", "1": "1", "2": "1"}}"#;
        assert!(parse_capacity(text, "x").is_err());
    }

    #[test]
    fn subsets_from_text() {
        let space = GroundSpace::with_labels(vec!["x".into(), "y".into(), "z".into()]).unwrap();
        assert_eq!(parse_subset("all", &space).unwrap(), Subset(0b111));
        assert_eq!(parse_subset("0,2", &space).unwrap(), Subset(0b101));
        assert_eq!(parse_subset("{y, z}", &space).unwrap(), Subset(0b110));
        assert_eq!(parse_subset("", &space).unwrap(), Subset::EMPTY);
        assert!(parse_subset("3", &space).is_err());
        assert!(parse_subset("w", &space).is_err());
    }

    #[test]
    fn a_outside_space_points_at_a() {
        let text = "{\"space\": {\"kind\": \"finite\", \"size\": 2},\n\"mu\": {\"kind\": \"zero\"},\n\"nu\": {\"kind\": \"lebesgue\"},\n\"f\": {\"values\": [\"1\", \"2\"]},\n\"A\": [0, 5]}";
        let err = parse_scenario(text, "s.json").unwrap_err().to_string();
        assert!(err.starts_with("s.json:5:1:"), "{err}");
    }

    #[test]
    fn locate_counts_from_one() {
        assert_eq!(locate("{\n  \"A\": 1}", "A"), Some((2, 3)));
        assert_eq!(locate("{}", "A"), None);
    }
}
