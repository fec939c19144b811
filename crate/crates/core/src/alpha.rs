//! Set functions on the level axis `[0, inf)`.
//!
//! Four closed families cover what the integral engine needs to decide
//! Riemann-Lebesgue integrability analytically: sigma-additive measures with
//! finitely many atoms plus a piecewise-constant density, Dirac masses,
//! the "vanishing on bounded sets" function, and power distortions of
//! Lebesgue measure.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::partition::Cell;
use crate::rational::{Extended, Magnitude, Q};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub at: Q,
    pub mass: Q,
}

/// Constant density on `[start, end)`; `end == None` runs to infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub start: Q,
    pub end: Option<Q>,
    pub density: Q,
}

impl Segment {
    /// Lebesgue length of `cell` inside this segment (endpoints are null).
    fn overlap(&self, cell: &Cell) -> Extended {
        let lo = if cell.lo() > &self.start { cell.lo() } else { &self.start };
        let hi = match (cell.hi(), &self.end) {
            (None, None) => return Extended::Infinite,
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => {
                if a < b {
                    a
                } else {
                    b
                }
            }
        };
        if hi > lo {
            Extended::Finite(hi - lo)
        } else {
            Extended::zero()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaCapacity {
    /// `nu(E) = sum of atom masses in E + integral of the density over E`.
    SigmaAdditive { atoms: Vec<Atom>, segments: Vec<Segment> },
    /// Unit mass at one point.
    Dirac { at: Q },
    /// 0 on bounded sets, `level` on unbounded ones.
    VanishingOnBounded { level: Q },
    /// `lambda(E)^exponent`, infinite on sets of infinite length.
    DistortedPower { exponent: Q },
}

impl AlphaCapacity {
    /// Sorts atoms and segments and checks positivity and disjointness.
    pub fn sigma_additive(mut atoms: Vec<Atom>, mut segments: Vec<Segment>) -> Result<Self> {
        atoms.sort_by(|a, b| a.at.cmp(&b.at));
        segments.sort_by(|a, b| a.start.cmp(&b.start));
        if atoms.iter().any(|a| a.at.is_negative() || !a.mass.is_positive()) {
            return Err(Error::InvalidAlpha("atoms need a location >= 0 and a mass > 0".into()));
        }
        if atoms.windows(2).any(|w| w[0].at == w[1].at) {
            return Err(Error::InvalidAlpha("duplicate atom location".into()));
        }
        for s in &segments {
            if s.start.is_negative() || s.density.is_negative() || s.end.as_ref().is_some_and(|e| e <= &s.start) {
                return Err(Error::InvalidAlpha(format!(
                    "segment starting at {} is empty or has a negative density",
                    s.start
                )));
            }
        }
        for w in segments.windows(2) {
            match &w[0].end {
                Some(e) if e <= &w[1].start => {}
                _ => return Err(Error::InvalidAlpha("segments overlap".into())),
            }
        }
        Ok(AlphaCapacity::SigmaAdditive { atoms, segments })
    }

    /// Lebesgue measure on `[0, inf)`.
    pub fn lebesgue() -> Self {
        AlphaCapacity::scaled_lebesgue(Q::one())
    }

    pub fn scaled_lebesgue(density: Q) -> Self {
        AlphaCapacity::SigmaAdditive {
            atoms: Vec::new(),
            segments: alloc::vec![Segment { start: Q::zero(), end: None, density }],
        }
    }

    pub fn dirac(at: Q) -> Result<Self> {
        if at.is_negative() {
            return Err(Error::InvalidAlpha("Dirac location must be >= 0".into()));
        }
        Ok(AlphaCapacity::Dirac { at })
    }

    pub fn vanishing_on_bounded(level: Q) -> Result<Self> {
        if !level.is_positive() {
            return Err(Error::InvalidAlpha("level must be > 0".into()));
        }
        Ok(AlphaCapacity::VanishingOnBounded { level })
    }

    pub fn distorted_power(exponent: Q) -> Result<Self> {
        if !exponent.is_positive() {
            return Err(Error::InvalidAlpha("exponent must be > 0".into()));
        }
        Ok(AlphaCapacity::DistortedPower { exponent })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            AlphaCapacity::SigmaAdditive { .. } => "sigma_additive",
            AlphaCapacity::Dirac { .. } => "dirac",
            AlphaCapacity::VanishingOnBounded { .. } => "vanishing_on_bounded",
            AlphaCapacity::DistortedPower { .. } => "distorted_power",
        }
    }

    /// True for Lebesgue measure on `[0, inf)` in either representation.
    pub fn is_lebesgue(&self) -> bool {
        match self.as_sigma_additive() {
            Some(AlphaCapacity::SigmaAdditive { atoms, segments }) => {
                atoms.is_empty()
                    && segments.len() == 1
                    && segments[0].start.is_zero()
                    && segments[0].end.is_none()
                    && segments[0].density.is_one()
            }
            _ => false,
        }
    }

    /// The same set function in the sigma-additive family, when it belongs
    /// there (Dirac masses, and the exponent-1 distortion).
    pub fn as_sigma_additive(&self) -> Option<AlphaCapacity> {
        match self {
            AlphaCapacity::SigmaAdditive { .. } => Some(self.clone()),
            AlphaCapacity::Dirac { at } => Some(AlphaCapacity::SigmaAdditive {
                atoms: alloc::vec![Atom { at: at.clone(), mass: Q::one() }],
                segments: Vec::new(),
            }),
            AlphaCapacity::DistortedPower { exponent } if exponent.is_one() => Some(AlphaCapacity::lebesgue()),
            _ => None,
        }
    }

    /// `nu(cell)`.
    pub fn measure(&self, cell: &Cell) -> Magnitude {
        match self {
            AlphaCapacity::SigmaAdditive { atoms, segments } => {
                let point: Q = atoms.iter().filter(|a| cell.contains(&a.at)).map(|a| a.mass.clone()).sum();
                let spread = segments
                    .iter()
                    .map(|s| s.overlap(cell).scale(&s.density))
                    .fold(Extended::zero(), |acc, x| acc + x);
                (Extended::Finite(point) + spread).into()
            }
            AlphaCapacity::Dirac { at } => Magnitude::Exact(if cell.contains(at) { Q::one() } else { Q::zero() }),
            AlphaCapacity::VanishingOnBounded { level } => {
                Magnitude::Exact(if cell.is_bounded() { Q::zero() } else { level.clone() })
            }
            AlphaCapacity::DistortedPower { exponent } => match cell.length() {
                Extended::Finite(len) => Magnitude::pow(&len, exponent),
                Extended::Infinite => Magnitude::Infinite,
            },
        }
    }

    /// Total mass of a tiling of `hull` by equal-length consecutive cells:
    /// `count` of them, or countably many unit-width cells when `count` is
    /// `None` (for an unbounded hull).
    pub fn equal_cells_mass(&self, hull: &Cell, count: Option<&BigInt>) -> Magnitude {
        match (self, count) {
            (AlphaCapacity::SigmaAdditive { .. } | AlphaCapacity::Dirac { .. }, _) => self.measure(hull),
            (AlphaCapacity::VanishingOnBounded { .. }, None) => Magnitude::zero(),
            (AlphaCapacity::VanishingOnBounded { .. }, Some(_)) => self.measure(hull),
            (AlphaCapacity::DistortedPower { .. }, None) => Magnitude::Infinite,
            (AlphaCapacity::DistortedPower { exponent }, Some(n)) => match hull.length() {
                Extended::Finite(len) if !n.is_zero() => {
                    let n = Q::from_integer(n.clone());
                    Magnitude::pow(&(len / &n), exponent).scale(&n)
                }
                Extended::Finite(_) => Magnitude::zero(),
                Extended::Infinite => Magnitude::Infinite,
            },
        }
    }

    /// `nu({0})`.
    pub fn mass_at_origin(&self) -> Magnitude {
        self.measure(&Cell::Point(Q::zero()))
    }

    /// Variation on `[0, inf)`: the supremum of `sum nu(E_i)` over finite
    /// disjoint families.
    ///
    /// For the sigma-additive family this is the total mass. The vanishing
    /// family has infinite variation: the sets `U_k = union_j [jm + k, jm + k + 1)`
    /// for `k < m` are disjoint and unbounded, so `m` of them sum to `m * level`.
    /// A distortion of Lebesgue measure is infinite on `[0, inf)` itself.
    pub fn variation(&self) -> Extended {
        match self {
            AlphaCapacity::SigmaAdditive { .. } => match self.measure(&Cell::closed_tail(Q::zero())) {
                Magnitude::Exact(v) => Extended::Finite(v),
                _ => Extended::Infinite,
            },
            AlphaCapacity::Dirac { .. } => Extended::Finite(Q::one()),
            AlphaCapacity::VanishingOnBounded { .. } | AlphaCapacity::DistortedPower { .. } => Extended::Infinite,
        }
    }

    /// `k * nu` for `k > 0`, when the family is closed under it.
    pub fn scale(&self, k: &Q) -> Option<AlphaCapacity> {
        if k.is_one() {
            return Some(self.clone());
        }
        match self {
            AlphaCapacity::VanishingOnBounded { level } => Some(AlphaCapacity::VanishingOnBounded { level: level * k }),
            AlphaCapacity::DistortedPower { exponent } if !exponent.is_one() => None,
            _ => match self.as_sigma_additive()? {
                AlphaCapacity::SigmaAdditive { atoms, segments } => Some(AlphaCapacity::SigmaAdditive {
                    atoms: atoms.into_iter().map(|a| Atom { at: a.at, mass: a.mass * k }).collect(),
                    segments: segments
                        .into_iter()
                        .map(|s| Segment { start: s.start, end: s.end, density: s.density * k })
                        .collect(),
                }),
                _ => None,
            },
        }
    }

    /// `nu_1 + nu_2`, when the sum stays in one of the families.
    pub fn sum(&self, other: &AlphaCapacity) -> Option<AlphaCapacity> {
        if let (AlphaCapacity::VanishingOnBounded { level: a }, AlphaCapacity::VanishingOnBounded { level: b }) =
            (self, other)
        {
            return Some(AlphaCapacity::VanishingOnBounded { level: a + b });
        }
        let (AlphaCapacity::SigmaAdditive { atoms: a1, segments: s1 }, AlphaCapacity::SigmaAdditive { atoms: a2, segments: s2 }) =
            (self.as_sigma_additive()?, other.as_sigma_additive()?)
        else {
            return None;
        };
        let mut atoms: Vec<Atom> = a1;
        for a in a2 {
            match atoms.iter_mut().find(|x| x.at == a.at) {
                Some(x) => x.mass += a.mass,
                None => atoms.push(a),
            }
        }
        let grid = density_grid(&s1, &s2);
        let segments = grid
            .into_iter()
            .filter_map(|(start, end, d1, d2)| {
                let density = d1 + d2;
                (!density.is_zero()).then_some(Segment { start, end, density })
            })
            .collect();
        AlphaCapacity::sigma_additive(atoms, segments).ok()
    }

    /// Decides `self <= other` on every Borel set, when the pair of families
    /// allows it; `None` when it cannot be decided here.
    pub fn dominated_by(&self, other: &AlphaCapacity) -> Option<bool> {
        use AlphaCapacity::*;
        match (self, other) {
            (VanishingOnBounded { level: a }, VanishingOnBounded { level: b }) => return Some(a <= b),
            (DistortedPower { exponent: a }, DistortedPower { exponent: b }) => return Some(a == b),
            // an unbounded set of tiny total length avoiding the atoms
            (VanishingOnBounded { .. }, SigmaAdditive { .. } | Dirac { .. }) => return Some(false),
            (Dirac { .. }, VanishingOnBounded { .. }) => return Some(false),
            (SigmaAdditive { .. }, VanishingOnBounded { .. }) => {
                return Some(self.variation() == Extended::zero())
            }
            (DistortedPower { .. }, _) | (_, DistortedPower { .. }) => return None,
            _ => {}
        }
        let (SigmaAdditive { atoms: a1, segments: s1 }, SigmaAdditive { atoms: a2, segments: s2 }) =
            (self.as_sigma_additive()?, other.as_sigma_additive()?)
        else {
            return None;
        };
        let atoms_ok = a1.iter().all(|a| a2.iter().any(|b| b.at == a.at && b.mass >= a.mass));
        let density_ok = density_grid(&s1, &s2).into_iter().all(|(_, _, d1, d2)| d1 <= d2);
        Some(atoms_ok && density_ok)
    }
}

/// Common refinement of two piecewise-constant densities:
/// `(start, end, density_1, density_2)` over consecutive elementary pieces.
fn density_grid(s1: &[Segment], s2: &[Segment]) -> Vec<(Q, Option<Q>, Q, Q)> {
    let mut cuts: Vec<Q> = s1.iter().chain(s2).flat_map(|s| core::iter::once(s.start.clone()).chain(s.end.clone())).collect();
    cuts.sort();
    cuts.dedup();
    let density_at = |segs: &[Segment], x: &Q| -> Q {
        segs.iter()
            .find(|s| &s.start <= x && s.end.as_ref().is_none_or(|e| x < e))
            .map_or_else(Q::zero, |s| s.density.clone())
    };
    let unbounded = s1.iter().chain(s2).any(|s| s.end.is_none());
    let mut out = Vec::new();
    for (i, start) in cuts.iter().enumerate() {
        let end = cuts.get(i + 1).cloned();
        if end.is_none() && !unbounded {
            break;
        }
        out.push((start.clone(), end, density_at(s1, start), density_at(s2, start)));
    }
    out
}

impl fmt::Display for AlphaCapacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaCapacity::SigmaAdditive { atoms, segments } => {
                f.write_str("sigma_additive(")?;
                for a in atoms {
                    write!(f, "{}@{} ", a.mass, a.at)?;
                }
                for s in segments {
                    match &s.end {
                        Some(e) => write!(f, "{}*[{}, {}) ", s.density, s.start, e)?,
                        None => write!(f, "{}*[{}, inf) ", s.density, s.start)?,
                    }
                }
                f.write_str(")")
            }
            AlphaCapacity::Dirac { at } => write!(f, "dirac({at})"),
            AlphaCapacity::VanishingOnBounded { level } => write!(f, "vanishing_on_bounded({level})"),
            AlphaCapacity::DistortedPower { exponent } => write!(f, "distorted_power({exponent})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use alloc::vec;

    fn lebesgue_on(a: i64, b: i64) -> AlphaCapacity {
        AlphaCapacity::sigma_additive(vec![], vec![Segment { start: qi(a), end: Some(qi(b)), density: qi(1) }]).unwrap()
    }

    #[test]
    fn vanishes_on_empty_cells_and_origin() {
        let families = [
            AlphaCapacity::lebesgue(),
            AlphaCapacity::dirac(q(1, 2)).unwrap(),
            AlphaCapacity::vanishing_on_bounded(qi(1)).unwrap(),
            AlphaCapacity::distorted_power(qi(2)).unwrap(),
        ];
        for nu in &families {
            assert_eq!(nu.mass_at_origin(), Magnitude::zero(), "{nu}");
        }
        assert_eq!(AlphaCapacity::dirac(qi(0)).unwrap().mass_at_origin(), Magnitude::Exact(qi(1)));
    }

    #[test]
    fn measures() {
        let nu = AlphaCapacity::sigma_additive(
            vec![Atom { at: qi(1), mass: q(1, 2) }],
            vec![Segment { start: qi(0), end: Some(qi(2)), density: q(1, 3) }],
        )
        .unwrap();
        assert_eq!(nu.measure(&Cell::closed(qi(0), qi(1))), Magnitude::Exact(q(5, 6)));
        assert_eq!(nu.measure(&Cell::closed_open(qi(0), qi(1))), Magnitude::Exact(q(1, 3)));
        assert_eq!(nu.measure(&Cell::closed_tail(qi(1))), Magnitude::Exact(q(5, 6)));
        assert_eq!(AlphaCapacity::lebesgue().measure(&Cell::open_tail(qi(3))), Magnitude::Infinite);
        let p = AlphaCapacity::distorted_power(q(1, 2)).unwrap();
        assert_eq!(p.measure(&Cell::open(qi(0), q(1, 4))), Magnitude::Exact(q(1, 2)));
        assert!(matches!(p.measure(&Cell::open(qi(0), qi(2))), Magnitude::Approx { .. }));
    }

    #[test]
    fn variations() {
        assert_eq!(lebesgue_on(0, 10).variation(), Extended::Finite(qi(10)));
        assert_eq!(AlphaCapacity::vanishing_on_bounded(qi(1)).unwrap().variation(), Extended::Infinite);
        assert_eq!(AlphaCapacity::dirac(q(1, 2)).unwrap().variation(), Extended::Finite(qi(1)));
        assert_eq!(AlphaCapacity::lebesgue().variation(), Extended::Infinite);
        assert_eq!(AlphaCapacity::distorted_power(qi(2)).unwrap().variation(), Extended::Infinite);
    }

    #[test]
    fn sums_and_scaling() {
        let a = lebesgue_on(0, 2);
        let b = AlphaCapacity::dirac(qi(1)).unwrap();
        let s = a.sum(&b).unwrap();
        assert_eq!(s.measure(&Cell::closed(qi(0), qi(1))), Magnitude::Exact(qi(2)));
        let c = AlphaCapacity::sigma_additive(vec![], vec![Segment { start: qi(1), end: None, density: qi(2) }]).unwrap();
        let s = a.sum(&c).unwrap();
        assert_eq!(s.measure(&Cell::closed_open(qi(0), qi(3))), Magnitude::Exact(qi(2 + 4)));
        assert_eq!(b.scale(&qi(3)).unwrap().measure(&Cell::Point(qi(1))), Magnitude::Exact(qi(3)));
        assert!(AlphaCapacity::distorted_power(qi(2)).unwrap().scale(&qi(2)).is_none());
        assert!(AlphaCapacity::distorted_power(qi(2)).unwrap().sum(&a).is_none());
        let v = AlphaCapacity::vanishing_on_bounded(qi(1)).unwrap();
        assert_eq!(v.sum(&v).unwrap(), AlphaCapacity::vanishing_on_bounded(qi(2)).unwrap());
    }

    #[test]
    fn domination() {
        let small = lebesgue_on(0, 1);
        let big = small.sum(&AlphaCapacity::dirac(qi(3)).unwrap()).unwrap();
        assert_eq!(small.dominated_by(&big), Some(true));
        assert_eq!(big.dominated_by(&small), Some(false));
        assert_eq!(small.dominated_by(&AlphaCapacity::lebesgue()), Some(true));
        let d = AlphaCapacity::dirac(qi(3)).unwrap();
        assert_eq!(d.dominated_by(&big), Some(true));
        let v1 = AlphaCapacity::vanishing_on_bounded(qi(1)).unwrap();
        let v2 = AlphaCapacity::vanishing_on_bounded(qi(2)).unwrap();
        assert_eq!(v1.dominated_by(&v2), Some(true));
        assert_eq!(v2.dominated_by(&v1), Some(false));
        assert_eq!(small.dominated_by(&AlphaCapacity::distorted_power(qi(2)).unwrap()), None);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(AlphaCapacity::sigma_additive(vec![Atom { at: qi(1), mass: qi(0) }], vec![]).is_err());
        assert!(AlphaCapacity::sigma_additive(
            vec![],
            vec![
                Segment { start: qi(0), end: Some(qi(2)), density: qi(1) },
                Segment { start: qi(1), end: None, density: qi(1) }
            ]
        )
        .is_err());
        assert!(AlphaCapacity::vanishing_on_bounded(qi(0)).is_err());
        assert!(AlphaCapacity::distorted_power(qi(0)).is_err());
        assert!(AlphaCapacity::dirac(qi(-1)).is_err());
    }
}
