//! Truncated multivariate power series over an exact coefficient ring.
//!
//! A `MultiSeries` fixes a ring, a variable count `v >= 1`, and a cap `N`,
//! and stores only terms of total degree at most `N` — total degree counts
//! the series variables alone (each has degree one); any grading of the
//! coefficient ring is tracked separately by the ring itself. Keys are
//! exponent vectors of length `v`; zero coefficients are never stored, so
//! equality of (ring, vars, cap, term map) is equality of series. Every
//! operation is eager and pure: inputs are never mutated, results are
//! always in canonical form, and no operation ever extends a cap silently.

use crate::error::{AlgebraError, Result};
use crate::ring::{Coeff, RingSpec};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Sparse truncated power series in `vars` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiSeries {
    ring: RingSpec,
    vars: usize,
    cap: u32,
    terms: BTreeMap<Vec<u32>, Coeff>,
}

/// Total degree of an exponent vector.
pub fn total_degree(exps: &[u32]) -> u32 {
    exps.iter().sum()
}

/// Renders an exponent vector as a monomial like `x1^2*x3` (or `1`).
pub fn monomial_name(exps: &[u32]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl MultiSeries {
    pub fn zero(ring: RingSpec, vars: usize, cap: u32) -> Result<Self> {
        if vars == 0 {
            return Err(AlgebraError::Domain(
                "series need at least one variable".into(),
            ));
        }
        Ok(MultiSeries {
            ring,
            vars,
            cap,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(ring: RingSpec, vars: usize, cap: u32, c: Coeff) -> Result<Self> {
        let mut s = MultiSeries::zero(ring, vars, cap)?;
        s.ring.check(&c)?;
        if !c.is_zero() {
            s.terms.insert(vec![0; vars], c);
        }
        Ok(s)
    }

    /// The variable `x_{idx+1}` (or the zero series when the cap is zero).
    pub fn var(ring: RingSpec, vars: usize, cap: u32, idx: usize) -> Result<Self> {
        if idx >= vars {
            return Err(AlgebraError::Domain(format!(
                "variable index {} outside 0..{}",
                idx, vars
            )));
        }
        let mut s = MultiSeries::zero(ring.clone(), vars, cap)?;
        if cap >= 1 {
            let mut exps = vec![0; vars];
            exps[idx] = 1;
            s.terms.insert(exps, ring.one());
        }
        Ok(s)
    }

    /// Builds a series from raw terms, merging duplicates, dropping zeros,
    /// and rejecting arity or cap violations.
    pub fn from_terms(
        ring: RingSpec,
        vars: usize,
        cap: u32,
        raw: Vec<(Vec<u32>, Coeff)>,
    ) -> Result<Self> {
        let mut s = MultiSeries::zero(ring, vars, cap)?;
        for (exps, c) in raw {
            if exps.len() != vars {
                return Err(AlgebraError::StructuralMismatch(format!(
                    "exponent vector of length {} in a {}-variable series",
                    exps.len(),
                    vars
                )));
            }
            if total_degree(&exps) > cap {
                return Err(AlgebraError::Capacity(format!(
                    "term {} exceeds cap {}",
                    monomial_name(&exps),
                    cap
                )));
            }
            s.ring.check(&c)?;
            let entry = s.terms.entry(exps).or_insert_with(|| s.ring.zero());
            *entry = entry.add(&c);
        }
        s.terms.retain(|_, c| !c.is_zero());
        Ok(s)
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient at an exponent vector (zero when absent).
    pub fn coeff_at(&self, exps: &[u32]) -> Coeff {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff_at(&vec![0; self.vars])
    }

    fn require_same_shape(&self, other: &MultiSeries, op: &str) -> Result<()> {
        if self.ring != other.ring {
            return Err(AlgebraError::StructuralMismatch(format!(
                "{}: rings {} and {} differ",
                op, self.ring, other.ring
            )));
        }
        if self.vars != other.vars {
            return Err(AlgebraError::StructuralMismatch(format!(
                "{}: variable counts {} and {} differ",
                op, self.vars, other.vars
            )));
        }
        if self.cap != other.cap {
            return Err(AlgebraError::StructuralMismatch(format!(
                "{}: caps {} and {} differ",
                op, self.cap, other.cap
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.require_same_shape(other, "add")?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out
                .terms
                .entry(e.clone())
                .or_insert_with(|| out.ring.zero());
            *entry = entry.add(c);
        }
        out.terms.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    pub fn neg(&self) -> MultiSeries {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.require_same_shape(other, "mul")?;
        let mut out = MultiSeries::zero(self.ring.clone(), self.vars, self.cap)?;
        for (ea, ca) in &self.terms {
            let da = total_degree(ea);
            for (eb, cb) in &other.terms {
                if da + total_degree(eb) > self.cap {
                    continue;
                }
                let exps: Vec<u32> = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                let prod = ca.mul(cb);
                let entry = out.terms.entry(exps).or_insert_with(|| out.ring.zero());
                *entry = entry.add(&prod);
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Multiplies every coefficient by a ring element.
    pub fn scale(&self, c: &Coeff) -> Result<MultiSeries> {
        self.ring.check(c)?;
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.mul(c);
        }
        out.terms.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Multiplies every coefficient by a scalar from the base.
    pub fn scale_scalar(&self, s: &Scalar) -> Result<MultiSeries> {
        self.scale(&self.ring.from_scalar(s.clone())?)
    }

    pub fn pow(&self, e: u32) -> Result<MultiSeries> {
        let mut out =
            MultiSeries::constant(self.ring.clone(), self.vars, self.cap, self.ring.one())?;
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Substitutes one series per variable. The targets must agree among
    /// themselves and with `self` on ring and cap, and must have zero
    /// constant terms (otherwise the truncated composite is not defined).
    /// `self` itself may have a constant term.
    pub fn substitute(&self, subs: &[MultiSeries]) -> Result<MultiSeries> {
        if subs.len() != self.vars {
            return Err(AlgebraError::InvalidSubstitution(format!(
                "{} substitution targets for {} variables",
                subs.len(),
                self.vars
            )));
        }
        let out_vars = subs.first().map(|s| s.vars).unwrap_or(1);
        for (i, sub) in subs.iter().enumerate() {
            if sub.ring != self.ring {
                return Err(AlgebraError::InvalidSubstitution(format!(
                    "target {} lives in ring {}, series in {}",
                    i + 1,
                    sub.ring,
                    self.ring
                )));
            }
            if sub.cap != self.cap {
                return Err(AlgebraError::InvalidSubstitution(format!(
                    "target {} has cap {}, series has {}",
                    i + 1,
                    sub.cap,
                    self.cap
                )));
            }
            if sub.vars != out_vars {
                return Err(AlgebraError::InvalidSubstitution(
                    "substitution targets disagree on variable count".into(),
                ));
            }
            if !sub.constant_term().is_zero() {
                return Err(AlgebraError::InvalidSubstitution(format!(
                    "target {} has a nonzero constant term",
                    i + 1
                )));
            }
        }

        // Power tables per variable, up to the largest exponent used.
        let mut max_exp = vec![0u32; self.vars];
        for exps in self.terms.keys() {
            for (i, &e) in exps.iter().enumerate() {
                max_exp[i] = max_exp[i].max(e);
            }
        }
        let one = MultiSeries::constant(self.ring.clone(), out_vars, self.cap, self.ring.one())?;
        let mut pows: Vec<Vec<MultiSeries>> = Vec::with_capacity(self.vars);
        for (i, sub) in subs.iter().enumerate() {
            let mut table = vec![one.clone()];
            for k in 1..=max_exp[i] {
                let next = table[(k - 1) as usize].mul(sub)?;
                table.push(next);
            }
            pows.push(table);
        }

        let mut out = MultiSeries::zero(self.ring.clone(), out_vars, self.cap)?;
        for (exps, c) in &self.terms {
            let mut prod = one.scale(c)?;
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    prod = prod.mul(&pows[i][e as usize])?;
                }
            }
            out = out.add(&prod)?;
        }
        Ok(out)
    }

    /// Compositional reverse of a single-variable series with zero constant
    /// term and invertible linear coefficient: the unique `g` with
    /// `f(g(x)) = x` up to the cap, found by solving one degree at a time.
    pub fn reverse(&self) -> Result<MultiSeries> {
        if self.vars != 1 {
            return Err(AlgebraError::StructuralMismatch(
                "reversion needs a single-variable series".into(),
            ));
        }
        if !self.constant_term().is_zero() {
            return Err(AlgebraError::NotReversible("nonzero constant term".into()));
        }
        if self.cap == 0 {
            return MultiSeries::zero(self.ring.clone(), 1, 0);
        }
        let f1 = self.coeff_at(&[1]);
        let f1_inv = self.ring.invert(&f1).map_err(|_| {
            AlgebraError::NotReversible(format!("linear coefficient {} is not invertible", f1))
        })?;

        let mut g = MultiSeries::from_terms(
            self.ring.clone(),
            1,
            self.cap,
            vec![(vec![1], f1_inv.clone())],
        )?;
        for k in 2..=self.cap {
            // Adding c*x^k to g moves the x^k coefficient of f(g) by f1*c.
            let err = self.substitute(std::slice::from_ref(&g))?.coeff_at(&[k]);
            if err.is_zero() {
                continue;
            }
            let c = f1_inv.mul(&err).neg();
            let correction =
                MultiSeries::from_terms(self.ring.clone(), 1, self.cap, vec![(vec![k], c)])?;
            g = g.add(&correction)?;
        }
        Ok(g)
    }

    /// Divides by a series whose constant term is a unit of the ring.
    pub fn divide_by_unit(&self, g: &MultiSeries) -> Result<MultiSeries> {
        self.require_same_shape(g, "divide_by_unit")?;
        let c0 = g.constant_term();
        let c0_inv = self.ring.invert(&c0).map_err(|_| {
            AlgebraError::NotAUnit(format!("constant term {} is not invertible", c0))
        })?;
        // g^{-1} = c0^{-1} * sum_j (1 - c0^{-1} g)^j; the summand is
        // nilpotent at the cap, so the sum stops at j = cap.
        let u = g.scale(&c0_inv)?;
        let one = MultiSeries::constant(self.ring.clone(), self.vars, self.cap, self.ring.one())?;
        let n = one.sub(&u)?;
        let mut inv = one.clone();
        let mut npow = one;
        for _ in 1..=self.cap {
            npow = npow.mul(&n)?;
            if npow.is_zero() {
                break;
            }
            inv = inv.add(&npow)?;
        }
        inv = inv.scale(&c0_inv)?;
        self.mul(&inv)
    }

    /// Lowers the cap, dropping higher-degree terms. Raising is refused:
    /// dropped information cannot be reinvented.
    pub fn truncate(&self, new_cap: u32) -> Result<MultiSeries> {
        if new_cap > self.cap {
            return Err(AlgebraError::Capacity(format!(
                "cannot raise cap {} to {}",
                self.cap, new_cap
            )));
        }
        let mut out = MultiSeries::zero(self.ring.clone(), self.vars, new_cap)?;
        for (e, c) in &self.terms {
            if total_degree(e) <= new_cap {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Reinterprets the series in a wider variable list, sending variable
    /// `i` to variable `mapping[i]`. The mapping must be injective.
    pub fn map_vars(&self, new_vars: usize, mapping: &[usize]) -> Result<MultiSeries> {
        if mapping.len() != self.vars {
            return Err(AlgebraError::Domain(format!(
                "mapping of length {} for {} variables",
                mapping.len(),
                self.vars
            )));
        }
        let mut seen = vec![false; new_vars];
        for &m in mapping {
            if m >= new_vars {
                return Err(AlgebraError::Domain(format!(
                    "mapping target {} outside 0..{}",
                    m, new_vars
                )));
            }
            if seen[m] {
                return Err(AlgebraError::Domain(
                    "variable mapping must be injective".into(),
                ));
            }
            seen[m] = true;
        }
        let mut out = MultiSeries::zero(self.ring.clone(), new_vars, self.cap)?;
        for (e, c) in &self.terms {
            let mut exps = vec![0u32; new_vars];
            for (i, &ei) in e.iter().enumerate() {
                exps[mapping[i]] = ei;
            }
            out.terms.insert(exps, c.clone());
        }
        Ok(out)
    }

    /// Moves every coefficient into a larger ring (see `RingSpec::embeds_in`).
    pub fn embed_into(&self, ring: &RingSpec) -> Result<MultiSeries> {
        let mut out = MultiSeries::zero(ring.clone(), self.vars, self.cap)?;
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), ring.embed_from(c, &self.ring)?);
        }
        Ok(out)
    }

    /// Rebuilds the series by transforming each coefficient into a target
    /// ring, dropping any that map to zero.
    pub fn map_coeffs<F>(&self, ring: RingSpec, mut f: F) -> Result<MultiSeries>
    where
        F: FnMut(&Coeff) -> Result<Coeff>,
    {
        let mut out = MultiSeries::zero(ring, self.vars, self.cap)?;
        for (e, c) in &self.terms {
            let mapped = f(c)?;
            out.ring.check(&mapped)?;
            if !mapped.is_zero() {
                out.terms.insert(e.clone(), mapped);
            }
        }
        Ok(out)
    }

    /// Serialization payload in the documented layout: variables, cap, and
    /// lexicographically sorted terms.
    pub fn to_json(&self) -> serde_json::Value {
        let dto = SeriesDto {
            vars: self.vars,
            cap: self.cap,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| SeriesTermDto {
                    exp: e.clone(),
                    coeff: self.ring.coeff_to_json(c),
                })
                .collect(),
        };
        serde_json::to_value(dto).expect("series serialization cannot fail")
    }

    /// Decodes the `to_json` payload. The ring is supplied by the caller:
    /// serialized series do not carry it.
    pub fn from_json(ring: RingSpec, value: &serde_json::Value) -> Result<MultiSeries> {
        let dto: SeriesDto = serde_json::from_value(value.clone())
            .map_err(|e| AlgebraError::Parse(format!("bad series payload: {}", e)))?;
        let mut raw = Vec::with_capacity(dto.terms.len());
        for t in dto.terms {
            raw.push((t.exp, ring.coeff_from_json(&t.coeff)?));
        }
        MultiSeries::from_terms(ring, dto.vars, dto.cap, raw)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesTermDto {
    exp: Vec<u32>,
    coeff: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct SeriesDto {
    vars: usize,
    cap: u32,
    terms: Vec<SeriesTermDto>,
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                if total_degree(e) == 0 {
                    format!("({})", c)
                } else if c.is_one() {
                    monomial_name(e)
                } else {
                    format!("({})*{}", c, monomial_name(e))
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// First coefficient where two same-shaped series disagree, rendered as a
/// witness string, or `None` when they are equal.
pub fn first_difference(a: &MultiSeries, b: &MultiSeries) -> Option<String> {
    let mut keys: std::collections::BTreeSet<&Vec<u32>> = a.terms.keys().collect();
    keys.extend(b.terms.keys());
    for e in keys {
        let ca = a.coeff_at(e);
        let cb = b.coeff_at(e);
        if ca != cb {
            return Some(format!(
                "coefficient of {}: {} vs {}",
                monomial_name(e),
                ca,
                cb
            ));
        }
    }
    None
}
