//! Coefficient rings and the values that live in them.
//!
//! A `RingSpec` names one of three exact coefficient rings: the integers,
//! the rationals, or a graded polynomial ring in generators `b_1..b_M`
//! over one of those two bases. A `Coeff` is a value tagged by shape —
//! numeric rings hold `Num` scalars, graded rings hold `Poly` values —
//! and every coefficient reachable through a ring's constructors conforms
//! to that shape, so mixed-shape arithmetic is an internal logic error and
//! panics rather than returning. Cross-ring operations are rejected at the
//! series layer; within this module `embed_from` performs the only legal
//! ring-to-ring moves (integers into rationals, scalars into graded rings
//! as constants, graded rings into graded rings with a weakly larger bound
//! and an equal-or-wider base).

use crate::error::{AlgebraError, Result};
use crate::poly::GradedPoly;
use crate::scalar::Scalar;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Base of scalars: exact integers or exact rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseKind {
    Integers,
    Rationals,
}

/// One of the supported exact coefficient rings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Integers,
    Rationals,
    Graded { base: BaseKind, bound: u32 },
}

/// A coefficient value; its shape must match its ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coeff {
    Num(Scalar),
    Poly(GradedPoly),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Num(s) => s.is_zero(),
            Coeff::Poly(p) => p.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Num(s) => s.is_one(),
            Coeff::Poly(p) => p.is_one(),
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Num(a), Coeff::Num(b)) => Coeff::Num(a + b),
            (Coeff::Poly(a), Coeff::Poly(b)) => Coeff::Poly(a.add(b)),
            _ => panic!("mixed coefficient shapes"),
        }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Num(a) => Coeff::Num(-a),
            Coeff::Poly(a) => Coeff::Poly(a.neg()),
        }
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Num(a), Coeff::Num(b)) => Coeff::Num(a * b),
            (Coeff::Poly(a), Coeff::Poly(b)) => Coeff::Poly(a.mul(b)),
            _ => panic!("mixed coefficient shapes"),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Coeff {
        match self {
            Coeff::Num(a) => Coeff::Num(a * s),
            Coeff::Poly(a) => Coeff::Poly(a.scale(s)),
        }
    }

    pub fn pow(&self, e: u32) -> Coeff {
        match self {
            Coeff::Num(a) => Coeff::Num(a.pow(e)),
            Coeff::Poly(a) => Coeff::Poly(a.pow(e)),
        }
    }

    /// The underlying scalar when the value is constant, else `None`.
    pub fn constant_scalar(&self) -> Option<Scalar> {
        match self {
            Coeff::Num(s) => Some(s.clone()),
            Coeff::Poly(p) if p.is_constant() => Some(p.constant_term()),
            _ => None,
        }
    }

    /// Graded degree: `None` for zero, the maximal monomial degree otherwise
    /// (constants have degree zero).
    pub fn degree(&self) -> Option<u32> {
        match self {
            Coeff::Num(s) => {
                if s.is_zero() {
                    None
                } else {
                    Some(0)
                }
            }
            Coeff::Poly(p) => p.degree(),
        }
    }

    /// True when every monomial has degree exactly `d` (vacuously for zero).
    pub fn is_homogeneous(&self, d: u32) -> bool {
        match self {
            Coeff::Num(s) => s.is_zero() || d == 0,
            Coeff::Poly(p) => p.is_homogeneous(d),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Num(s) => write!(f, "{}", s),
            Coeff::Poly(p) => write!(f, "{}", p),
        }
    }
}

impl RingSpec {
    /// Generator bound for graded rings, `None` otherwise.
    pub fn bound(&self) -> Option<u32> {
        match self {
            RingSpec::Graded { bound, .. } => Some(*bound),
            _ => None,
        }
    }

    pub fn base_kind(&self) -> BaseKind {
        match self {
            RingSpec::Integers => BaseKind::Integers,
            RingSpec::Rationals => BaseKind::Rationals,
            RingSpec::Graded { base, .. } => *base,
        }
    }

    pub fn is_graded(&self) -> bool {
        matches!(self, RingSpec::Graded { .. })
    }

    pub fn zero(&self) -> Coeff {
        match self {
            RingSpec::Graded { bound, .. } => Coeff::Poly(GradedPoly::zero(*bound)),
            _ => Coeff::Num(Scalar::zero()),
        }
    }

    pub fn one(&self) -> Coeff {
        match self {
            RingSpec::Graded { bound, .. } => Coeff::Poly(GradedPoly::one(*bound)),
            _ => Coeff::Num(Scalar::one()),
        }
    }

    pub fn from_int(&self, n: i64) -> Coeff {
        match self {
            RingSpec::Graded { bound, .. } => {
                Coeff::Poly(GradedPoly::constant(*bound, Scalar::from_int(n)))
            }
            _ => Coeff::Num(Scalar::from_int(n)),
        }
    }

    /// Lifts a scalar into the ring, rejecting non-integers over an
    /// integer base.
    pub fn from_scalar(&self, s: Scalar) -> Result<Coeff> {
        if self.base_kind() == BaseKind::Integers && !s.is_integer() {
            return Err(AlgebraError::RingError(format!(
                "scalar {} is not an integer",
                s
            )));
        }
        Ok(match self {
            RingSpec::Graded { bound, .. } => Coeff::Poly(GradedPoly::constant(*bound, s)),
            _ => Coeff::Num(s),
        })
    }

    /// The generator `b_k` as a ring element; graded rings only.
    pub fn gen(&self, k: u32) -> Result<Coeff> {
        match self {
            RingSpec::Graded { bound, .. } => Ok(Coeff::Poly(GradedPoly::gen(*bound, k)?)),
            _ => Err(AlgebraError::RingError(
                "only graded rings have generators".into(),
            )),
        }
    }

    /// Validates that a coefficient conforms to the ring: matching shape,
    /// matching generator bound, and integrality over integer bases.
    pub fn check(&self, c: &Coeff) -> Result<()> {
        match (self, c) {
            (RingSpec::Integers, Coeff::Num(s)) => {
                if !s.is_integer() {
                    return Err(AlgebraError::RingError(format!("{} is not an integer", s)));
                }
                Ok(())
            }
            (RingSpec::Rationals, Coeff::Num(_)) => Ok(()),
            (RingSpec::Graded { base, bound }, Coeff::Poly(p)) => {
                if p.bound() != *bound {
                    return Err(AlgebraError::RingError(format!(
                        "generator bound {} does not match ring bound {}",
                        p.bound(),
                        bound
                    )));
                }
                if *base == BaseKind::Integers && !p.all_integer() {
                    return Err(AlgebraError::RingError(
                        "polynomial has non-integer coefficients over an integer base".into(),
                    ));
                }
                Ok(())
            }
            _ => Err(AlgebraError::RingError(
                "coefficient shape does not match ring".into(),
            )),
        }
    }

    /// Multiplicative inverse within the ring. Integers admit only `1` and
    /// `-1`; graded rings admit only invertible constants.
    pub fn invert(&self, c: &Coeff) -> Result<Coeff> {
        match (self, c) {
            (RingSpec::Integers, Coeff::Num(s)) => {
                if s.is_integer_unit() {
                    Ok(Coeff::Num(s.clone()))
                } else {
                    Err(AlgebraError::NotAUnit(format!(
                        "{} is not invertible over the integers",
                        s
                    )))
                }
            }
            (RingSpec::Rationals, Coeff::Num(s)) => Ok(Coeff::Num(s.invert()?)),
            (RingSpec::Graded { base, bound }, Coeff::Poly(p)) => {
                if !p.is_constant() {
                    return Err(AlgebraError::NotAUnit(format!("{} is not a constant", p)));
                }
                let s = p.constant_term();
                let inv = match base {
                    BaseKind::Integers => {
                        if s.is_integer_unit() {
                            s
                        } else {
                            return Err(AlgebraError::NotAUnit(format!(
                                "{} is not invertible over the integers",
                                s
                            )));
                        }
                    }
                    BaseKind::Rationals => s.invert()?,
                };
                Ok(Coeff::Poly(GradedPoly::constant(*bound, inv)))
            }
            _ => Err(AlgebraError::RingError(
                "coefficient shape does not match ring".into(),
            )),
        }
    }

    /// True when every element of `self` makes sense in `other` unchanged:
    /// integers into anything, rationals into rational-based rings, graded
    /// rings into graded rings with a weakly larger bound and base.
    pub fn embeds_in(&self, other: &RingSpec) -> bool {
        match (self, other) {
            (a, b) if a == b => true,
            (RingSpec::Integers, _) => true,
            (RingSpec::Rationals, RingSpec::Rationals) => true,
            (
                RingSpec::Rationals,
                RingSpec::Graded {
                    base: BaseKind::Rationals,
                    ..
                },
            ) => true,
            (
                RingSpec::Graded {
                    base: ba,
                    bound: ma,
                },
                RingSpec::Graded {
                    base: bb,
                    bound: mb,
                },
            ) => ma <= mb && (ba == bb || *bb == BaseKind::Rationals),
            _ => false,
        }
    }

    /// Moves a coefficient of ring `from` into `self`, assuming
    /// `from.embeds_in(self)`.
    pub fn embed_from(&self, c: &Coeff, from: &RingSpec) -> Result<Coeff> {
        if !from.embeds_in(self) {
            return Err(AlgebraError::StructuralMismatch(format!(
                "ring {} does not embed in {}",
                from, self
            )));
        }
        from.check(c)?;
        match (c, self) {
            (Coeff::Num(s), RingSpec::Graded { bound, .. }) => {
                Ok(Coeff::Poly(GradedPoly::constant(*bound, s.clone())))
            }
            (Coeff::Num(s), _) => Ok(Coeff::Num(s.clone())),
            (Coeff::Poly(p), RingSpec::Graded { bound, .. }) => Ok(Coeff::Poly(p.widen(*bound)?)),
            (Coeff::Poly(_), _) => Err(AlgebraError::StructuralMismatch(
                "polynomial coefficient cannot leave its graded ring".into(),
            )),
        }
    }

    /// Serialized coefficient: a rational string for numeric rings, a
    /// `{"poly": ...}` object for graded rings.
    pub fn coeff_to_json(&self, c: &Coeff) -> serde_json::Value {
        match c {
            Coeff::Num(s) => serde_json::Value::String(s.to_string()),
            Coeff::Poly(p) => p.to_json(),
        }
    }

    /// Decodes a coefficient and validates it against the ring.
    pub fn coeff_from_json(&self, v: &serde_json::Value) -> Result<Coeff> {
        let c = match (self, v) {
            (RingSpec::Graded { bound, .. }, obj @ serde_json::Value::Object(_)) => {
                Coeff::Poly(GradedPoly::from_json(*bound, obj)?)
            }
            (_, serde_json::Value::String(s)) => Coeff::Num(s.parse()?),
            _ => {
                return Err(AlgebraError::Parse(format!(
                    "coefficient payload {} does not match ring {}",
                    v, self
                )))
            }
        };
        self.check(&c)?;
        Ok(c)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "int"),
            RingSpec::Rationals => write!(f, "rat"),
            RingSpec::Graded {
                base: BaseKind::Rationals,
                bound,
            } => {
                write!(f, "lazard:{}", bound)
            }
            RingSpec::Graded {
                base: BaseKind::Integers,
                bound,
            } => {
                write!(f, "lazard-int:{}", bound)
            }
        }
    }
}

impl FromStr for RingSpec {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "int" => return Ok(RingSpec::Integers),
            "rat" => return Ok(RingSpec::Rationals),
            _ => {}
        }
        let parse_bound = |b: &str| -> Result<u32> {
            b.parse::<u32>()
                .map_err(|_| AlgebraError::Parse(format!("bad generator bound {:?}", b)))
        };
        if let Some(b) = s.strip_prefix("lazard-int:") {
            return Ok(RingSpec::Graded {
                base: BaseKind::Integers,
                bound: parse_bound(b)?,
            });
        }
        if let Some(b) = s.strip_prefix("lazard:") {
            return Ok(RingSpec::Graded {
                base: BaseKind::Rationals,
                bound: parse_bound(b)?,
            });
        }
        Err(AlgebraError::Parse(format!("unknown ring {:?}", s)))
    }
}

impl Serialize for RingSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RingSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        RingSpec::from_str(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_names_round_trip() {
        for name in ["int", "rat", "lazard:6", "lazard-int:3"] {
            let r: RingSpec = name.parse().unwrap();
            assert_eq!(r.to_string(), name, "ring name should round trip");
        }
        assert!("lazard".parse::<RingSpec>().is_err());
        assert!("lazard:x".parse::<RingSpec>().is_err());
    }

    #[test]
    fn integer_ring_rejects_fractions_and_non_unit_inverses() {
        let zr = RingSpec::Integers;
        assert!(zr.from_scalar(Scalar::new(1, 2).unwrap()).is_err());
        assert!(zr.check(&Coeff::Num(Scalar::new(1, 2).unwrap())).is_err());
        assert!(
            zr.invert(&zr.from_int(2)).is_err(),
            "2 is not a unit over the integers"
        );
        assert_eq!(zr.invert(&zr.from_int(-1)).unwrap(), zr.from_int(-1));
    }

    #[test]
    fn graded_rings_normalize_constants_to_polynomials() {
        let ring = RingSpec::Graded {
            base: BaseKind::Rationals,
            bound: 2,
        };
        let two = ring.from_int(2);
        assert!(
            matches!(two, Coeff::Poly(_)),
            "graded constants are stored as polynomials"
        );
        let inv = ring.invert(&two).unwrap();
        assert_eq!(inv.mul(&two), ring.one());
        let b1 = ring.gen(1).unwrap();
        assert!(ring.invert(&b1).is_err(), "generators are not units");
    }

    #[test]
    fn embeddings_follow_base_and_bound_order() {
        let z = RingSpec::Integers;
        let q = RingSpec::Rationals;
        let gz3 = RingSpec::Graded {
            base: BaseKind::Integers,
            bound: 3,
        };
        let gq3 = RingSpec::Graded {
            base: BaseKind::Rationals,
            bound: 3,
        };
        let gq5 = RingSpec::Graded {
            base: BaseKind::Rationals,
            bound: 5,
        };
        assert!(z.embeds_in(&q) && z.embeds_in(&gz3) && z.embeds_in(&gq3));
        assert!(q.embeds_in(&gq3) && !q.embeds_in(&gz3));
        assert!(gz3.embeds_in(&gq5) && gq3.embeds_in(&gq5));
        assert!(!gq5.embeds_in(&gq3), "bounds cannot shrink");
        assert!(
            !gq3.embeds_in(&gz3),
            "rationals cannot embed into an integer base"
        );

        let c = z.from_int(7);
        let lifted = gq3.embed_from(&c, &z).unwrap();
        assert_eq!(lifted, gq3.from_int(7));
    }

    #[test]
    fn coefficient_json_matches_ring_shape() {
        let q = RingSpec::Rationals;
        let v = q.coeff_to_json(&q.from_scalar(Scalar::new(-1, 3).unwrap()).unwrap());
        assert_eq!(v, serde_json::json!("-1/3"));
        assert_eq!(
            q.coeff_from_json(&v).unwrap(),
            Coeff::Num(Scalar::new(-1, 3).unwrap())
        );

        let g = RingSpec::Graded {
            base: BaseKind::Rationals,
            bound: 2,
        };
        let b2 = g.gen(2).unwrap();
        let vj = g.coeff_to_json(&b2);
        assert_eq!(
            vj,
            serde_json::json!({"poly": [{"gens": [[2, 1]], "c": "1"}]})
        );
        assert_eq!(g.coeff_from_json(&vj).unwrap(), b2);
        assert!(
            g.coeff_from_json(&serde_json::json!("3")).is_err(),
            "graded rings require polynomial payloads"
        );
    }
}
