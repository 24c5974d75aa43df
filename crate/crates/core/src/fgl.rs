//! Formal group laws: construction, validation, and the calculus built on
//! them.
//!
//! A `FormalGroupLaw` packages a two-variable series `F` satisfying the
//! unit, commutativity, and associativity axioms at its truncation cap,
//! together with two caches derived from it: the formal inverse `i(x)`
//! (the unique series with `F(x, i(x)) = 0`) and the coefficient table
//! `a_ij` for `i, j >= 1`, so that `F = x + y + sum a_ij x^i y^j` with the
//! pure powers of either variable absent. Construction always validates
//! the axioms — the one deliberate exception is `with_perturbed_coeff`,
//! a diagnostic hook that corrupts the stored series while keeping the
//! caches, exactly so that consistency checks downstream can be shown to
//! fail with a concrete witness. The universal law additionally certifies
//! that its coefficients are integer polynomials, homogeneous of degree
//! `i + j - 1` when the generator `b_k` has degree `k`.

use crate::error::{AlgebraError, Result};
use crate::poly::GradedPoly;
use crate::ring::{BaseKind, Coeff, RingSpec};
use crate::series::{first_difference, MultiSeries};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// How a law was constructed (after specialization or twisting, the kind
/// is re-detected from the resulting series).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FglKind {
    Additive,
    Multiplicative,
    Universal,
    Custom,
}

impl fmt::Display for FglKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FglKind::Additive => "additive",
            FglKind::Multiplicative => "multiplicative",
            FglKind::Universal => "universal",
            FglKind::Custom => "custom",
        };
        write!(f, "{}", s)
    }
}

impl FromStr for FglKind {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "additive" => Ok(FglKind::Additive),
            "multiplicative" => Ok(FglKind::Multiplicative),
            "universal" => Ok(FglKind::Universal),
            "custom" => Ok(FglKind::Custom),
            _ => Err(AlgebraError::Parse(format!("unknown law kind {:?}", s))),
        }
    }
}

/// A validated formal group law with its derived caches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalGroupLaw {
    kind: FglKind,
    ring: RingSpec,
    cap: u32,
    f: MultiSeries,
    inverse: MultiSeries,
    coeffs: BTreeMap<(u32, u32), Coeff>,
}

/// Checks the three law axioms on a raw two-variable series, reporting the
/// first failing axiom together with a witness monomial.
pub fn check_axioms(f: &MultiSeries) -> Result<()> {
    if f.vars() != 2 {
        return Err(AlgebraError::StructuralMismatch(format!(
            "a law needs exactly two variables, got {}",
            f.vars()
        )));
    }
    let ring = f.ring().clone();
    let cap = f.cap();
    let x = MultiSeries::var(ring.clone(), 1, cap, 0)?;
    let zero = MultiSeries::zero(ring.clone(), 1, cap)?;

    let fx0 = f.substitute(&[x.clone(), zero.clone()])?;
    if let Some(w) = first_difference(&fx0, &x) {
        return Err(AlgebraError::InvalidFgl {
            axiom: "unit".into(),
            witness: w,
        });
    }
    let f0y = f.substitute(&[zero, x.clone()])?;
    if let Some(w) = first_difference(&f0y, &x) {
        return Err(AlgebraError::InvalidFgl {
            axiom: "unit".into(),
            witness: w,
        });
    }

    let swapped = f.map_vars(2, &[1, 0])?;
    if let Some(w) = first_difference(f, &swapped) {
        return Err(AlgebraError::InvalidFgl {
            axiom: "commutativity".into(),
            witness: w,
        });
    }

    let fxy = f.map_vars(3, &[0, 1])?;
    let fyz = f.map_vars(3, &[1, 2])?;
    let x3 = MultiSeries::var(ring.clone(), 3, cap, 0)?;
    let z3 = MultiSeries::var(ring, 3, cap, 2)?;
    let left = f.substitute(&[fxy, z3])?;
    let right = f.substitute(&[x3, fyz])?;
    if let Some(w) = first_difference(&left, &right) {
        return Err(AlgebraError::InvalidFgl {
            axiom: "associativity".into(),
            witness: w,
        });
    }
    Ok(())
}

/// Solves `F(x, g(x)) = 0` one degree at a time; the unit axiom makes the
/// adjustment at each degree exactly the outstanding error.
fn compute_inverse(f: &MultiSeries) -> Result<MultiSeries> {
    let ring = f.ring().clone();
    let cap = f.cap();
    let x = MultiSeries::var(ring.clone(), 1, cap, 0)?;
    let mut g = x.neg();
    for k in 2..=cap {
        let err = f.substitute(&[x.clone(), g.clone()])?.coeff_at(&[k]);
        if err.is_zero() {
            continue;
        }
        let corr = MultiSeries::from_terms(ring.clone(), 1, cap, vec![(vec![k], err.neg())])?;
        g = g.add(&corr)?;
    }
    let residue = f.substitute(&[x, g.clone()])?;
    if !residue.is_zero() {
        return Err(AlgebraError::RingError(
            "inverse solve left a nonzero residue; the series is not a valid law".into(),
        ));
    }
    Ok(g)
}

/// Pulls the mixed coefficients `a_ij` (`i, j >= 1`) out of the series.
fn extract_table(f: &MultiSeries) -> BTreeMap<(u32, u32), Coeff> {
    let mut out = BTreeMap::new();
    for (e, c) in f.terms() {
        let (i, j) = (e[0], e[1]);
        if i >= 1 && j >= 1 {
            out.insert((i, j), c.clone());
        }
    }
    out
}

impl FormalGroupLaw {
    fn from_series(kind: FglKind, f: MultiSeries) -> Result<Self> {
        check_axioms(&f)?;
        let inverse = compute_inverse(&f)?;
        let coeffs = extract_table(&f);
        Ok(FormalGroupLaw {
            kind,
            ring: f.ring().clone(),
            cap: f.cap(),
            f,
            inverse,
            coeffs,
        })
    }

    /// The additive law `x + y`.
    pub fn additive(ring: RingSpec, cap: u32) -> Result<Self> {
        let mut terms = Vec::new();
        if cap >= 1 {
            terms.push((vec![1, 0], ring.one()));
            terms.push((vec![0, 1], ring.one()));
        }
        let f = MultiSeries::from_terms(ring, 2, cap, terms)?;
        Self::from_series(FglKind::Additive, f)
    }

    /// The multiplicative law `x + y - xy`.
    pub fn multiplicative(ring: RingSpec, cap: u32) -> Result<Self> {
        let mut terms = Vec::new();
        if cap >= 1 {
            terms.push((vec![1, 0], ring.one()));
            terms.push((vec![0, 1], ring.one()));
        }
        if cap >= 2 {
            terms.push((vec![1, 1], ring.from_int(-1)));
        }
        let f = MultiSeries::from_terms(ring, 2, cap, terms)?;
        Self::from_series(FglKind::Multiplicative, f)
    }

    /// The universal law at cap `N` over a graded ring with generator bound
    /// `M >= N - 1`: with `lambda(x) = x + b_1 x^2 + ... + b_{N-1} x^N`,
    /// the series `lambda(lambda^{-1}(x) + lambda^{-1}(y))`. The mixed
    /// coefficients are certified to be integer polynomials, homogeneous of
    /// degree `i + j - 1`, before the law is (for an integer base)
    /// re-expressed over that base.
    pub fn universal(base: BaseKind, bound: u32, cap: u32) -> Result<Self> {
        if bound + 1 < cap {
            return Err(AlgebraError::Capacity(format!(
                "generator bound {} cannot express the universal law at cap {} (need {})",
                bound,
                cap,
                cap.saturating_sub(1)
            )));
        }
        let build_ring = RingSpec::Graded {
            base: BaseKind::Rationals,
            bound,
        };
        let mut lam_terms = Vec::new();
        if cap >= 1 {
            lam_terms.push((vec![1], build_ring.one()));
        }
        for k in 1..cap.max(1) {
            lam_terms.push((vec![k + 1], build_ring.gen(k)?));
        }
        let lam = MultiSeries::from_terms(build_ring.clone(), 1, cap, lam_terms)?;
        let laminv = lam.reverse()?;
        let inner = laminv.map_vars(2, &[0])?.add(&laminv.map_vars(2, &[1])?)?;
        let mut f = lam.substitute(&[inner])?;

        for ((i, j), c) in extract_table(&f) {
            if let Coeff::Poly(p) = &c {
                if !p.all_integer() {
                    return Err(AlgebraError::RingError(format!(
                        "universal coefficient a_{}{} = {} is not an integer polynomial",
                        i, j, p
                    )));
                }
                if !p.is_homogeneous(i + j - 1) {
                    return Err(AlgebraError::RingError(format!(
                        "universal coefficient a_{}{} = {} is not homogeneous of degree {}",
                        i,
                        j,
                        p,
                        i + j - 1
                    )));
                }
            }
        }
        if base == BaseKind::Integers {
            let target = RingSpec::Graded {
                base: BaseKind::Integers,
                bound,
            };
            f = f.map_coeffs(target, |c| Ok(c.clone()))?;
        }
        Self::from_series(FglKind::Universal, f)
    }

    /// Validates an arbitrary two-variable series as a law.
    pub fn custom(f: MultiSeries) -> Result<Self> {
        Self::from_series(FglKind::Custom, f)
    }

    /// Wraps an already-validated series, re-detecting whether it is the
    /// additive or multiplicative law in disguise.
    pub fn from_series_detect(f: MultiSeries) -> Result<Self> {
        let kind = detect_kind(&f)?;
        Self::from_series(kind, f)
    }

    pub fn kind(&self) -> FglKind {
        self.kind
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// The law series `F(x, y)` itself.
    pub fn series(&self) -> &MultiSeries {
        &self.f
    }

    /// The formal inverse `i(x)`.
    pub fn inverse_series(&self) -> &MultiSeries {
        &self.inverse
    }

    /// The mixed coefficient `a_ij` (zero when absent).
    pub fn coeff(&self, i: u32, j: u32) -> Coeff {
        self.coeffs
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    /// All stored mixed coefficients.
    pub fn coeff_table(&self) -> &BTreeMap<(u32, u32), Coeff> {
        &self.coeffs
    }

    /// The multiple `[n](x)`: iterated `F`-addition of `x` with itself,
    /// with negative multiples routed through the formal inverse.
    pub fn n_series(&self, n: i64) -> Result<MultiSeries> {
        if n == 0 {
            return MultiSeries::zero(self.ring.clone(), 1, self.cap);
        }
        if n < 0 {
            let pos = self.n_series(-n)?;
            return self.inverse.substitute(std::slice::from_ref(&pos));
        }
        let x = MultiSeries::var(self.ring.clone(), 1, self.cap, 0)?;
        let mut acc = x.clone();
        for _ in 1..n {
            acc = self.f.substitute(&[acc, x.clone()])?;
        }
        Ok(acc)
    }

    /// The formal linear combination `[n_1](x_1) + ... + [n_r](x_r)` under
    /// the law, as a series in `r` variables.
    pub fn lincomb(&self, mults: &[i64]) -> Result<MultiSeries> {
        let r = mults.len();
        if r == 0 {
            return Err(AlgebraError::Domain(
                "a linear combination needs at least one variable".into(),
            ));
        }
        let mut acc = self.n_series(mults[0])?.map_vars(r, &[0])?;
        for (i, &m) in mults.iter().enumerate().skip(1) {
            let term = self.n_series(m)?.map_vars(r, &[i])?;
            acc = self.f.substitute(&[acc, term])?;
        }
        Ok(acc)
    }

    /// Splits a linear combination by variable support: the unique family
    /// `F_I` such that the combination equals `sum_I x^I F_I` with `F_I`
    /// involving only the variables in `I`. Every subset of `{1..r}` gets
    /// an entry; the empty subset's part is always zero.
    pub fn zeta_decompose(&self, mults: &[i64]) -> Result<ZetaDecomposition> {
        let total = self.lincomb(mults)?;
        let r = mults.len();
        let mut parts: BTreeMap<Vec<u32>, MultiSeries> = BTreeMap::new();
        for mask in 0u32..(1 << r) {
            let subset: Vec<u32> = (0..r as u32)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| i + 1)
                .collect();
            parts.insert(subset, MultiSeries::zero(self.ring.clone(), r, self.cap)?);
        }
        for (exps, c) in total.terms() {
            let subset: Vec<u32> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, _)| i as u32 + 1)
                .collect();
            let stripped: Vec<u32> = exps
                .iter()
                .map(|&e| if e > 0 { e - 1 } else { 0 })
                .collect();
            let term = MultiSeries::from_terms(
                self.ring.clone(),
                r,
                self.cap,
                vec![(stripped, c.clone())],
            )?;
            let entry = parts.get_mut(&subset).expect("all subsets were seeded");
            *entry = entry.add(&term)?;
        }
        Ok(ZetaDecomposition {
            mults: mults.to_vec(),
            parts,
        })
    }

    /// Specializes a law over a graded ring by assigning a value to every
    /// generator, then revalidates the result over the target ring.
    pub fn specialize(
        &self,
        assignment: &BTreeMap<u32, Coeff>,
        target: &RingSpec,
    ) -> Result<FormalGroupLaw> {
        if !self.ring.is_graded() {
            return Err(AlgebraError::Domain(
                "only laws over graded rings can be specialized".into(),
            ));
        }
        for v in assignment.values() {
            target.check(v)?;
        }
        let target_ring = target.clone();
        let new_f = self.f.map_coeffs(target_ring, |c| match c {
            Coeff::Num(s) => target.from_scalar(s.clone()),
            Coeff::Poly(p) => eval_poly(p, assignment, target),
        })?;
        FormalGroupLaw::from_series_detect(new_f)
    }

    /// Diagnostic hook: adds `delta * x^i y^j` to the stored series while
    /// keeping the cached inverse and coefficient table untouched. The
    /// result intentionally violates the construction invariants; it exists
    /// so that downstream consistency checks can be demonstrated to fail.
    pub fn with_perturbed_coeff(&self, i: u32, j: u32, delta: &Coeff) -> Result<FormalGroupLaw> {
        if i + j > self.cap {
            return Err(AlgebraError::Capacity(format!(
                "perturbation at x^{} y^{} exceeds cap {}",
                i, j, self.cap
            )));
        }
        self.ring.check(delta)?;
        let bump = MultiSeries::from_terms(
            self.ring.clone(),
            2,
            self.cap,
            vec![(vec![i, j], delta.clone())],
        )?;
        let mut out = self.clone();
        out.f = out.f.add(&bump)?;
        Ok(out)
    }

    /// Serialized law: kind, ring, cap, the series, and its inverse.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind.to_string(),
            "ring": self.ring.to_string(),
            "cap": self.cap,
            "F": self.f.to_json(),
            "inverse": self.inverse.to_json(),
        })
    }

    /// Decodes and fully revalidates a serialized law; the embedded inverse
    /// must agree with the recomputed one.
    pub fn from_json(value: &serde_json::Value) -> Result<FormalGroupLaw> {
        let obj = value
            .as_object()
            .ok_or_else(|| AlgebraError::Parse("law payload must be an object".into()))?;
        let get = |k: &str| {
            obj.get(k)
                .ok_or_else(|| AlgebraError::Parse(format!("law payload missing {:?}", k)))
        };
        let kind: FglKind = get("kind")?
            .as_str()
            .ok_or_else(|| AlgebraError::Parse("kind must be a string".into()))?
            .parse()?;
        let ring: RingSpec = get("ring")?
            .as_str()
            .ok_or_else(|| AlgebraError::Parse("ring must be a string".into()))?
            .parse()?;
        let f = MultiSeries::from_json(ring, get("F")?)?;
        let law = Self::from_series(kind, f)?;
        let inverse = MultiSeries::from_json(law.ring.clone(), get("inverse")?)?;
        if inverse != law.inverse {
            return Err(AlgebraError::Parse(
                "embedded inverse disagrees with the recomputed inverse".into(),
            ));
        }
        Ok(law)
    }
}

/// Recognizes the additive and multiplicative laws by their series.
fn detect_kind(f: &MultiSeries) -> Result<FglKind> {
    let ring = f.ring().clone();
    let cap = f.cap();
    let mut add_terms = Vec::new();
    if cap >= 1 {
        add_terms.push((vec![1, 0], ring.one()));
        add_terms.push((vec![0, 1], ring.one()));
    }
    let additive = MultiSeries::from_terms(ring.clone(), 2, cap, add_terms.clone())?;
    if *f == additive {
        return Ok(FglKind::Additive);
    }
    if cap >= 2 {
        add_terms.push((vec![1, 1], ring.from_int(-1)));
    }
    let multiplicative = MultiSeries::from_terms(ring, 2, cap, add_terms)?;
    if *f == multiplicative {
        return Ok(FglKind::Multiplicative);
    }
    Ok(FglKind::Custom)
}

/// Evaluates a graded polynomial at an assignment of ring values to its
/// generators; every generator that occurs must be assigned.
pub fn eval_poly(
    p: &GradedPoly,
    assignment: &BTreeMap<u32, Coeff>,
    target: &RingSpec,
) -> Result<Coeff> {
    let mut acc = target.zero();
    for (mono, s) in p.terms() {
        let mut term = target.from_scalar(s.clone())?;
        for &(k, e) in mono {
            let value = assignment.get(&k).ok_or_else(|| {
                AlgebraError::IncompleteAssignment(format!("generator b{} has no value", k))
            })?;
            term = term.mul(&value.pow(e));
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Measures the law's series against its own coefficient table read back
/// as `x + y - x*y*Q(x, y)` with `Q = -sum a_ij x^{i-1} y^{j-1}`.
///
/// For a law built through the normal constructors the two sides agree
/// identically (every monomial `x^i y^j` with `i + j <= cap` is covered by
/// the table, so the comparison is exact at full precision). A series that
/// was altered behind the table's back — see `with_perturbed_coeff` —
/// leaves a concrete witness monomial, which is returned.
pub fn double_point_defect(law: &FormalGroupLaw) -> Result<Option<String>> {
    let ring = law.ring().clone();
    let cap = law.cap();
    let x = MultiSeries::var(ring.clone(), 2, cap, 0)?;
    let y = MultiSeries::var(ring.clone(), 2, cap, 1)?;
    let mut q = MultiSeries::zero(ring.clone(), 2, cap)?;
    for (&(i, j), c) in law.coeff_table() {
        let term =
            MultiSeries::from_terms(ring.clone(), 2, cap, vec![(vec![i - 1, j - 1], c.clone())])?;
        q = q.add(&term)?;
    }
    q = q.neg();
    let rhs = x.add(&y)?.sub(&x.mul(&y)?.mul(&q)?)?;
    Ok(first_difference(law.series(), &rhs))
}

/// A linear combination split by variable support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaDecomposition {
    mults: Vec<i64>,
    parts: BTreeMap<Vec<u32>, MultiSeries>,
}

impl ZetaDecomposition {
    pub fn mults(&self) -> &[i64] {
        &self.mults
    }

    /// All parts, keyed by sorted 1-based variable subsets.
    pub fn parts(&self) -> &BTreeMap<Vec<u32>, MultiSeries> {
        &self.parts
    }

    /// The part for one subset (zero when the subset is absent).
    pub fn part(&self, subset: &[u32]) -> Option<&MultiSeries> {
        self.parts.get(subset)
    }

    /// Reassembles `sum_I x^I F_I`; equality with the original linear
    /// combination is the defining property of the decomposition.
    pub fn reconstruct(&self) -> Result<MultiSeries> {
        let any = self
            .parts
            .values()
            .next()
            .ok_or_else(|| AlgebraError::Domain("decomposition has no parts".into()))?;
        let (ring, r, cap) = (any.ring().clone(), any.vars(), any.cap());
        let mut acc = MultiSeries::zero(ring.clone(), r, cap)?;
        for (subset, part) in &self.parts {
            let mut exps = vec![0u32; r];
            for &i in subset {
                exps[(i - 1) as usize] = 1;
            }
            let mono = MultiSeries::from_terms(ring.clone(), r, cap, vec![(exps, ring.one())])?;
            acc = acc.add(&mono.mul(part)?)?;
        }
        Ok(acc)
    }

    /// Confirms that each part only involves the variables of its subset.
    pub fn check_supports(&self) -> Option<String> {
        for (subset, part) in &self.parts {
            for exps in part.terms().keys() {
                for (i, &e) in exps.iter().enumerate() {
                    if e > 0 && !subset.contains(&(i as u32 + 1)) {
                        return Some(format!("part for {:?} involves x{}", subset, i + 1));
                    }
                }
            }
        }
        None
    }

    /// Serialized decomposition: multiplicities plus one entry per subset.
    pub fn to_json(&self) -> serde_json::Value {
        let parts: Vec<serde_json::Value> = self
            .parts
            .iter()
            .map(|(subset, series)| {
                serde_json::json!({
                    "subset": subset,
                    "series": series.to_json(),
                })
            })
            .collect();
        serde_json::json!({ "mults": self.mults, "parts": parts })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn q() -> RingSpec {
        RingSpec::Rationals
    }

    fn graded(bound: u32) -> RingSpec {
        RingSpec::Graded {
            base: BaseKind::Rationals,
            bound,
        }
    }

    #[test]
    fn universal_law_at_cap_two_is_x_plus_y_plus_2b1xy() {
        let law = FormalGroupLaw::universal(BaseKind::Rationals, 2, 2).unwrap();
        let ring = graded(2);
        let want = MultiSeries::from_terms(
            ring.clone(),
            2,
            2,
            vec![
                (vec![1, 0], ring.one()),
                (vec![0, 1], ring.one()),
                (vec![1, 1], ring.gen(1).unwrap().scale(&Scalar::from_int(2))),
            ],
        )
        .unwrap();
        assert_eq!(
            *law.series(),
            want,
            "the degree-2 universal law is x + y + 2 b1 xy"
        );
        let want_inv = MultiSeries::from_terms(
            ring.clone(),
            1,
            2,
            vec![
                (vec![1], ring.from_int(-1)),
                (vec![2], ring.gen(1).unwrap().scale(&Scalar::from_int(2))),
            ],
        )
        .unwrap();
        assert_eq!(
            *law.inverse_series(),
            want_inv,
            "its inverse is -x + 2 b1 x^2"
        );
        assert_eq!(
            law.coeff(1, 1),
            ring.gen(1).unwrap().scale(&Scalar::from_int(2))
        );
    }

    #[test]
    fn universal_law_needs_enough_generators() {
        let r = FormalGroupLaw::universal(BaseKind::Rationals, 3, 6);
        assert!(
            matches!(r, Err(AlgebraError::Capacity(_))),
            "bound 3 cannot support cap 6"
        );
        assert!(FormalGroupLaw::universal(BaseKind::Rationals, 5, 6).is_ok());
    }

    #[test]
    fn universal_law_over_integer_base_keeps_integer_coefficients() {
        let law = FormalGroupLaw::universal(BaseKind::Integers, 4, 5).unwrap();
        assert_eq!(
            *law.ring(),
            RingSpec::Graded {
                base: BaseKind::Integers,
                bound: 4
            }
        );
        for ((i, j), c) in law.coeff_table() {
            assert!(
                c.is_homogeneous(i + j - 1),
                "a_{}{} should be homogeneous",
                i,
                j
            );
        }
    }

    #[test]
    fn multiplicative_inverse_is_the_geometric_negation() {
        let law = FormalGroupLaw::multiplicative(q(), 3).unwrap();
        let want = MultiSeries::from_terms(
            q(),
            1,
            3,
            vec![
                (vec![1], Coeff::Num(Scalar::from_int(-1))),
                (vec![2], Coeff::Num(Scalar::from_int(-1))),
                (vec![3], Coeff::Num(Scalar::from_int(-1))),
            ],
        )
        .unwrap();
        assert_eq!(
            *law.inverse_series(),
            want,
            "inverse should be -x - x^2 - x^3"
        );
    }

    #[test]
    fn n_series_of_two_under_multiplication() {
        let law = FormalGroupLaw::multiplicative(q(), 4).unwrap();
        let two = law.n_series(2).unwrap();
        let want = MultiSeries::from_terms(
            q(),
            1,
            4,
            vec![
                (vec![1], Coeff::Num(Scalar::from_int(2))),
                (vec![2], Coeff::Num(Scalar::from_int(-1))),
            ],
        )
        .unwrap();
        assert_eq!(two, want, "[2](x) should be 2x - x^2");
        assert!(law.n_series(0).unwrap().is_zero());
        assert_eq!(law.n_series(-1).unwrap(), *law.inverse_series());
    }

    #[test]
    fn n_series_is_additive_in_the_multiplier() {
        let law = FormalGroupLaw::universal(BaseKind::Rationals, 4, 4).unwrap();
        for (m, n) in [(1i64, 2i64), (2, 2), (-1, 3), (-2, -1)] {
            let lhs = law.n_series(m + n).unwrap();
            let fm = law.n_series(m).unwrap();
            let fn_ = law.n_series(n).unwrap();
            let rhs = law.series().substitute(&[fm, fn_]).unwrap();
            assert_eq!(
                lhs, rhs,
                "[{}+{}](x) should equal F([{}]x, [{}]x)",
                m, n, m, n
            );
        }
    }

    #[test]
    fn lincomb_matches_the_simple_laws() {
        let add = FormalGroupLaw::additive(q(), 4).unwrap();
        let l = add.lincomb(&[2, 3]).unwrap();
        let want = MultiSeries::from_terms(
            q(),
            2,
            4,
            vec![
                (vec![1, 0], Coeff::Num(Scalar::from_int(2))),
                (vec![0, 1], Coeff::Num(Scalar::from_int(3))),
            ],
        )
        .unwrap();
        assert_eq!(l, want, "additive combination is 2x + 3y");

        let mult = FormalGroupLaw::multiplicative(q(), 4).unwrap();
        let l2 = mult.lincomb(&[1, 1]).unwrap();
        assert_eq!(
            l2,
            *mult.series(),
            "the (1,1) combination is the law itself"
        );
    }

    #[test]
    fn zeta_parts_of_the_multiplicative_sum() {
        let mult = FormalGroupLaw::multiplicative(q(), 4).unwrap();
        let dec = mult.zeta_decompose(&[1, 1]).unwrap();
        let one = MultiSeries::constant(q(), 2, 4, Coeff::Num(Scalar::one())).unwrap();
        assert_eq!(dec.part(&[1]), Some(&one), "the {{1}} part should be 1");
        assert_eq!(dec.part(&[2]), Some(&one), "the {{2}} part should be 1");
        assert_eq!(
            dec.part(&[1, 2]),
            Some(&one.neg()),
            "the {{1,2}} part should be -1"
        );
        assert!(dec.part(&[]).unwrap().is_zero(), "the empty part is zero");
        assert_eq!(dec.reconstruct().unwrap(), mult.lincomb(&[1, 1]).unwrap());
        assert!(dec.check_supports().is_none());
    }

    #[test]
    fn additive_decomposition_has_no_cross_terms() {
        let add = FormalGroupLaw::additive(q(), 5).unwrap();
        let dec = add.zeta_decompose(&[2, -1, 3]).unwrap();
        for (subset, part) in dec.parts() {
            if subset.len() >= 2 {
                assert!(
                    part.is_zero(),
                    "additive law should have no part for {:?}",
                    subset
                );
            }
        }
    }

    #[test]
    fn custom_laws_are_validated_with_axiom_witnesses() {
        // x + y + x^2 breaks the unit axiom.
        let bad_unit = MultiSeries::from_terms(
            q(),
            2,
            3,
            vec![
                (vec![1, 0], Coeff::Num(Scalar::one())),
                (vec![0, 1], Coeff::Num(Scalar::one())),
                (vec![2, 0], Coeff::Num(Scalar::one())),
            ],
        )
        .unwrap();
        match FormalGroupLaw::custom(bad_unit) {
            Err(AlgebraError::InvalidFgl { axiom, .. }) => assert_eq!(axiom, "unit"),
            other => panic!("expected a unit failure, got {:?}", other),
        }

        // x + y + x^2 y breaks commutativity.
        let bad_comm = MultiSeries::from_terms(
            q(),
            2,
            4,
            vec![
                (vec![1, 0], Coeff::Num(Scalar::one())),
                (vec![0, 1], Coeff::Num(Scalar::one())),
                (vec![2, 1], Coeff::Num(Scalar::one())),
            ],
        )
        .unwrap();
        match FormalGroupLaw::custom(bad_comm) {
            Err(AlgebraError::InvalidFgl { axiom, .. }) => assert_eq!(axiom, "commutativity"),
            other => panic!("expected a commutativity failure, got {:?}", other),
        }
    }

    #[test]
    fn specialization_recovers_the_simple_laws() {
        let law = FormalGroupLaw::universal(BaseKind::Rationals, 2, 2).unwrap();

        // b_1 -> -1/2 reproduces the multiplicative law at this cap.
        let mut to_mult = BTreeMap::new();
        to_mult.insert(1u32, Coeff::Num(Scalar::new(-1, 2).unwrap()));
        to_mult.insert(2u32, Coeff::Num(Scalar::zero()));
        let m = law.specialize(&to_mult, &RingSpec::Rationals).unwrap();
        assert_eq!(m.kind(), FglKind::Multiplicative);
        assert_eq!(
            *m.series(),
            *FormalGroupLaw::multiplicative(q(), 2).unwrap().series()
        );

        // All generators to zero reproduces the additive law.
        let mut to_add = BTreeMap::new();
        to_add.insert(1u32, Coeff::Num(Scalar::zero()));
        to_add.insert(2u32, Coeff::Num(Scalar::zero()));
        let a = law.specialize(&to_add, &RingSpec::Rationals).unwrap();
        assert_eq!(a.kind(), FglKind::Additive);

        // A missing generator is an incomplete assignment.
        let empty = BTreeMap::new();
        assert!(matches!(
            law.specialize(&empty, &RingSpec::Rationals),
            Err(AlgebraError::IncompleteAssignment(_))
        ));
    }

    #[test]
    fn perturbed_laws_fail_the_axioms() {
        let law = FormalGroupLaw::universal(BaseKind::Rationals, 3, 4).unwrap();
        let delta = law.ring().one();
        let broken = law.with_perturbed_coeff(1, 2, &delta).unwrap();
        match check_axioms(broken.series()) {
            Err(AlgebraError::InvalidFgl { .. }) => {}
            other => panic!("perturbed series should fail an axiom, got {:?}", other),
        }
        // The untouched caches are exactly what downstream checks compare
        // against, so the perturbation is visible there too.
        assert_ne!(broken.series().coeff_at(&[1, 2]), broken.coeff(1, 2));
    }

    #[test]
    fn double_point_comparison_is_exact_and_catches_perturbations() {
        for law in [
            FormalGroupLaw::multiplicative(RingSpec::Integers, 6).unwrap(),
            FormalGroupLaw::universal(BaseKind::Rationals, 4, 5).unwrap(),
        ] {
            assert_eq!(
                double_point_defect(&law).unwrap(),
                None,
                "intact {:?} law must satisfy the identity",
                law.kind()
            );
        }
        let law = FormalGroupLaw::universal(BaseKind::Rationals, 3, 4).unwrap();
        let broken = law.with_perturbed_coeff(1, 2, &law.ring().one()).unwrap();
        let witness = double_point_defect(&broken).unwrap();
        match witness {
            Some(w) => assert!(
                w.contains("x1*x2^2"),
                "witness should name the bumped monomial, got {}",
                w
            ),
            None => panic!("perturbed law must leave a witness"),
        }
    }

    #[test]
    fn law_json_round_trips() {
        let law = FormalGroupLaw::multiplicative(RingSpec::Integers, 3).unwrap();
        let v = law.to_json();
        assert_eq!(v["kind"], "multiplicative");
        assert_eq!(v["ring"], "int");
        let back = FormalGroupLaw::from_json(&v).unwrap();
        assert_eq!(back, law);
    }
}
