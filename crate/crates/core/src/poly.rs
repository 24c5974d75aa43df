//! Polynomials over a fixed finite list of graded generators.
//!
//! A `GradedPoly` lives in `Q[b_1, ..., b_M]` where `M` is the generator
//! bound. The generator `b_k` carries degree `k`. Terms map a monomial —
//! a sorted list of `(generator, exponent)` pairs with every exponent at
//! least one — to a nonzero rational; the empty monomial is the constant
//! term. Zero coefficients are never stored, so structural equality of the
//! term maps is equality of polynomials.

use crate::error::{AlgebraError, Result};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A monomial: `(generator index, exponent)` pairs, sorted by index,
/// exponents >= 1, empty for the constant monomial.
pub type Monomial = Vec<(u32, u32)>;

/// Degree of a monomial when `b_k` has degree `k`.
pub fn monomial_degree(m: &[(u32, u32)]) -> u32 {
    m.iter().map(|&(k, e)| k * e).sum()
}

/// Sparse polynomial in graded generators `b_1..b_M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPoly {
    bound: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl GradedPoly {
    pub fn zero(bound: u32) -> Self {
        GradedPoly {
            bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(bound: u32, c: Scalar) -> Self {
        let mut p = GradedPoly::zero(bound);
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn one(bound: u32) -> Self {
        GradedPoly::constant(bound, Scalar::one())
    }

    /// The generator `b_k`; errors when `k` is zero or exceeds the bound.
    pub fn gen(bound: u32, k: u32) -> Result<Self> {
        if k == 0 || k > bound {
            return Err(AlgebraError::Capacity(format!(
                "generator b_{} outside 1..={}",
                k, bound
            )));
        }
        let mut p = GradedPoly::zero(bound);
        p.terms.insert(vec![(k, 1)], Scalar::one());
        Ok(p)
    }

    /// Builds a polynomial from raw terms, normalizing each monomial and
    /// rejecting generator indices outside the bound.
    pub fn from_terms(bound: u32, raw: Vec<(Monomial, Scalar)>) -> Result<Self> {
        let mut p = GradedPoly::zero(bound);
        for (mono, c) in raw {
            let mut merged: BTreeMap<u32, u32> = BTreeMap::new();
            for (k, e) in mono {
                if k == 0 || k > bound {
                    return Err(AlgebraError::RingError(format!(
                        "generator b_{} outside 1..={}",
                        k, bound
                    )));
                }
                if e == 0 {
                    continue;
                }
                *merged.entry(k).or_insert(0) += e;
            }
            let key: Monomial = merged.into_iter().collect();
            let entry = p.terms.entry(key).or_insert_with(Scalar::zero);
            *entry = &*entry + &c;
        }
        p.terms.retain(|_, c| !c.is_zero());
        Ok(p)
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Vec::new() as &Monomial)
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// The constant term (zero when absent).
    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&Vec::new() as &Monomial)
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// True when the polynomial is a bare constant.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    pub fn add(&self, other: &GradedPoly) -> GradedPoly {
        assert_eq!(self.bound, other.bound, "generator bounds must match");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let entry = out.terms.entry(m.clone()).or_insert_with(Scalar::zero);
            *entry = &*entry + c;
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn neg(&self) -> GradedPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn sub(&self, other: &GradedPoly) -> GradedPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> GradedPoly {
        if s.is_zero() {
            return GradedPoly::zero(self.bound);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = &*c * s;
        }
        out
    }

    pub fn mul(&self, other: &GradedPoly) -> GradedPoly {
        assert_eq!(self.bound, other.bound, "generator bounds must match");
        let mut out = GradedPoly::zero(self.bound);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let key = merge_monomials(ma, mb);
                let entry = out.terms.entry(key).or_insert_with(Scalar::zero);
                *entry = &*entry + &(ca * cb);
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn pow(&self, e: u32) -> GradedPoly {
        let mut out = GradedPoly::one(self.bound);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Largest monomial degree present, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| monomial_degree(m)).max()
    }

    /// True when every monomial has degree exactly `d` (vacuously for zero).
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| monomial_degree(m) == d)
    }

    /// True when every coefficient is an integer.
    pub fn all_integer(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Generator indices appearing with nonzero exponent anywhere.
    pub fn generators_used(&self) -> Vec<u32> {
        let mut seen = std::collections::BTreeSet::new();
        for m in self.terms.keys() {
            for &(k, _) in m {
                seen.insert(k);
            }
        }
        seen.into_iter().collect()
    }

    /// Reinterprets the polynomial with a larger generator bound.
    pub fn widen(&self, bound: u32) -> Result<GradedPoly> {
        if bound < self.bound {
            return Err(AlgebraError::Capacity(format!(
                "cannot shrink generator bound {} to {}",
                self.bound, bound
            )));
        }
        Ok(GradedPoly {
            bound,
            terms: self.terms.clone(),
        })
    }
}

fn merge_monomials(a: &[(u32, u32)], b: &[(u32, u32)]) -> Monomial {
    let mut merged: BTreeMap<u32, u32> = a.iter().copied().collect();
    for &(k, e) in b {
        *merged.entry(k).or_insert(0) += e;
    }
    merged.into_iter().collect()
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_empty() {
                write!(f, "{}", c)?;
                continue;
            }
            if !c.is_one() {
                write!(f, "{}*", c)?;
            }
            let mut parts = Vec::new();
            for &(k, e) in m {
                if e == 1 {
                    parts.push(format!("b{}", k));
                } else {
                    parts.push(format!("b{}^{}", k, e));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Serialized term: generator/exponent pairs plus a rational coefficient.
#[derive(Serialize, Deserialize)]
struct TermDto {
    gens: Vec<(u32, u32)>,
    c: Scalar,
}

#[derive(Serialize, Deserialize)]
struct PolyDto {
    poly: Vec<TermDto>,
}

impl GradedPoly {
    /// Serialization payload: terms sorted by monomial, coefficients as
    /// rational strings. The generator bound travels with the ring, not
    /// with the polynomial.
    pub fn to_json(&self) -> serde_json::Value {
        let dto = PolyDto {
            poly: self
                .terms
                .iter()
                .map(|(m, c)| TermDto {
                    gens: m.clone(),
                    c: c.clone(),
                })
                .collect(),
        };
        serde_json::to_value(dto).expect("polynomial serialization cannot fail")
    }

    /// Decodes the `to_json` payload, validating against the bound.
    pub fn from_json(bound: u32, value: &serde_json::Value) -> Result<GradedPoly> {
        let dto: PolyDto = serde_json::from_value(value.clone())
            .map_err(|e| AlgebraError::Parse(format!("bad polynomial payload: {}", e)))?;
        GradedPoly::from_terms(bound, dto.poly.into_iter().map(|t| (t.gens, t.c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(bound: u32, k: u32) -> GradedPoly {
        GradedPoly::gen(bound, k).unwrap()
    }

    #[test]
    fn construction_normalizes_monomials_and_drops_zeros() {
        // b2 * b1 entered out of order with a repeated generator.
        let p = GradedPoly::from_terms(
            3,
            vec![
                (vec![(2, 1), (1, 1), (1, 1)], Scalar::one()),
                (vec![(3, 1)], Scalar::from_int(0)),
            ],
        )
        .unwrap();
        let key: Monomial = vec![(1, 2), (2, 1)];
        assert_eq!(p.terms().len(), 1, "zero term should vanish");
        assert!(
            p.terms().contains_key(&key),
            "monomial should be sorted and merged"
        );
        assert_eq!(monomial_degree(&key), 4, "degree counts b_k with weight k");
    }

    #[test]
    fn arithmetic_keeps_canonical_form() {
        let p = b(2, 1).add(&b(2, 2));
        let q = b(2, 1).neg();
        let sum = p.add(&q);
        assert_eq!(sum, b(2, 2), "b1 + b2 - b1 should collapse to b2");
        let prod = b(2, 1).mul(&b(2, 1));
        assert!(prod.is_homogeneous(2), "b1^2 has degree 2");
        assert_eq!(prod.pow(0), GradedPoly::one(2));
    }

    #[test]
    fn out_of_range_generators_are_rejected() {
        assert!(GradedPoly::gen(2, 3).is_err(), "b3 exceeds bound 2");
        assert!(GradedPoly::gen(2, 0).is_err(), "generators are 1-based");
        let r = GradedPoly::from_terms(1, vec![(vec![(2, 1)], Scalar::one())]);
        assert!(r.is_err(), "terms must respect the bound");
    }

    #[test]
    fn display_and_json_round_trip() {
        let p = b(3, 1)
            .mul(&b(3, 2))
            .scale(&Scalar::from_int(2))
            .add(&GradedPoly::constant(3, Scalar::new(-1, 2).unwrap()));
        assert_eq!(p.to_string(), "-1/2 + 2*b1*b2");
        let back = GradedPoly::from_json(3, &p.to_json()).unwrap();
        assert_eq!(back, p, "JSON round trip should be lossless");
    }

    #[test]
    fn homogeneity_and_integrality_checks() {
        let p = b(3, 3).add(&b(3, 1).mul(&b(3, 2)));
        assert!(p.is_homogeneous(3), "b3 and b1*b2 both have degree 3");
        assert!(p.all_integer());
        let q = p.scale(&Scalar::new(1, 2).unwrap());
        assert!(!q.all_integer(), "1/2 coefficients are not integral");
        assert!(
            GradedPoly::zero(3).is_homogeneous(7),
            "zero is vacuously homogeneous"
        );
    }
}
