//! Twist sequences and the operations they induce on laws.
//!
//! A `TwistSequence` is a list `tau_0, ..., tau_{N-1}` of ring elements
//! with `tau_0 = 1`; over a graded ring each `tau_i` must additionally be
//! homogeneous of degree `i`, so the induced substitution preserves the
//! grading. The sequence encodes the series `lambda(x) = sum tau_i x^{i+1}`,
//! a unit multiple of `x`, and therefore two companions: `u = lambda / x`
//! (constant term one) and the reversed sequence `bar(tau)` defined by
//! `lambda_{bar(tau)} = reverse(lambda_tau)`. Twisting a law conjugates it
//! by `lambda`: `F^tau(x, y) = lambda(F(lambda^{-1}(x), lambda^{-1}(y)))`,
//! which is again a law over the same ring.

use crate::error::{AlgebraError, Result};
use crate::fgl::FormalGroupLaw;
use crate::ring::{Coeff, RingSpec};
use crate::scalar::Scalar;
use crate::series::{first_difference, MultiSeries};

/// Coefficients `tau_0..tau_{N-1}` of a twist, with `tau_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSequence {
    ring: RingSpec,
    cap: u32,
    coeffs: Vec<Coeff>,
}

impl TwistSequence {
    /// Validates and stores a sequence; short inputs are padded with zeros
    /// up to the cap, longer ones are refused.
    pub fn new(ring: RingSpec, cap: u32, mut coeffs: Vec<Coeff>) -> Result<Self> {
        if cap == 0 {
            return Err(AlgebraError::Domain(
                "a twist sequence needs a cap of at least one".into(),
            ));
        }
        if coeffs.len() as u32 > cap {
            return Err(AlgebraError::Capacity(format!(
                "{} coefficients exceed cap {}",
                coeffs.len(),
                cap
            )));
        }
        while (coeffs.len() as u32) < cap {
            coeffs.push(ring.zero());
        }
        for (i, c) in coeffs.iter().enumerate() {
            ring.check(c)?;
            if i == 0 && !c.is_one() {
                return Err(AlgebraError::InvalidSequence(format!(
                    "leading coefficient must be 1, got {}",
                    c
                )));
            }
            if ring.is_graded() && !c.is_homogeneous(i as u32) {
                return Err(AlgebraError::InvalidSequence(format!(
                    "coefficient {} at index {} is not homogeneous of degree {}",
                    c, i, i
                )));
            }
        }
        Ok(TwistSequence { ring, cap, coeffs })
    }

    /// The identity twist `(1, 0, 0, ...)`.
    pub fn identity(ring: RingSpec, cap: u32) -> Result<Self> {
        TwistSequence::new(ring.clone(), cap, vec![ring.one()])
    }

    /// The exponential-to-logarithm twist over the rationals:
    /// `tau_i = (-1)^i / (i+1)!`, so `lambda = 1 - exp(-x)` truncated.
    pub fn exp_log(cap: u32) -> Result<Self> {
        let mut coeffs = Vec::new();
        let mut factorial = Scalar::one();
        for i in 0..cap {
            factorial = &factorial * &Scalar::from_int((i + 1) as i64);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let c = &Scalar::from_int(sign) * &factorial.invert()?;
            coeffs.push(Coeff::Num(c));
        }
        TwistSequence::new(RingSpec::Rationals, cap, coeffs)
    }

    /// Builds a sequence from bare scalars lifted into the ring.
    pub fn from_scalars(ring: RingSpec, cap: u32, scalars: Vec<Scalar>) -> Result<Self> {
        let coeffs = scalars
            .into_iter()
            .map(|s| ring.from_scalar(s))
            .collect::<Result<Vec<_>>>()?;
        TwistSequence::new(ring, cap, coeffs)
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    /// The twist series `lambda(x) = sum tau_i x^{i+1}`.
    pub fn lambda(&self) -> Result<MultiSeries> {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.push((vec![i as u32 + 1], c.clone()));
            }
        }
        MultiSeries::from_terms(self.ring.clone(), 1, self.cap, terms)
    }

    /// The unit series `u(x) = lambda(x) / x = sum tau_i x^i`.
    pub fn u_series(&self) -> Result<MultiSeries> {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.push((vec![i as u32], c.clone()));
            }
        }
        MultiSeries::from_terms(self.ring.clone(), 1, self.cap, terms)
    }

    /// The reversed twist: the unique sequence whose series is the
    /// compositional reverse of this one's.
    pub fn bar(&self) -> Result<TwistSequence> {
        let rev = self.lambda()?.reverse()?;
        let mut coeffs = Vec::new();
        for i in 0..self.cap {
            coeffs.push(rev.coeff_at(&[i + 1]));
        }
        // Derived from validated data: reversion keeps the head at one and
        // preserves homogeneity, and sequences that were embedded from a
        // smaller ring (where the grading guard does not apply) must stay
        // reversible, so the constructor's re-validation is skipped.
        Ok(TwistSequence {
            ring: self.ring.clone(),
            cap: self.cap,
            coeffs,
        })
    }

    /// Moves the sequence into a larger ring.
    pub fn embed_to(&self, ring: &RingSpec) -> Result<TwistSequence> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| ring.embed_from(c, &self.ring))
            .collect::<Result<Vec<_>>>()?;
        // The sequence already passed its home ring's validation, and a
        // coefficient-ring extension cannot break the head normalization.
        // The grading guard is deliberately not re-applied: scalars embed
        // as degree-zero constants, and twisting a law over a graded ring
        // by a rational sequence is the main use of this embedding.
        Ok(TwistSequence {
            ring: ring.clone(),
            cap: self.cap,
            coeffs,
        })
    }

    /// Product of `u(rho)` over the given roots — the split form of an
    /// inverse characteristic-class series. Roots must be nilpotent, which
    /// for truncated series means a zero constant term; an empty list gives
    /// the constant one in the requested variable count.
    pub fn todd_inverse_series(&self, vars: usize, roots: &[MultiSeries]) -> Result<MultiSeries> {
        let u = self.u_series()?;
        let mut acc = MultiSeries::constant(self.ring.clone(), vars, self.cap, self.ring.one())?;
        for (idx, root) in roots.iter().enumerate() {
            if root.ring() != &self.ring || root.cap() != self.cap || root.vars() != vars {
                return Err(AlgebraError::StructuralMismatch(format!(
                    "root {} does not share the sequence's ring, cap, and arity",
                    idx + 1
                )));
            }
            if !root.constant_term().is_zero() {
                return Err(AlgebraError::InvalidRoot(format!(
                    "root {} has a nonzero constant term",
                    idx + 1
                )));
            }
            let factor = u.substitute(std::slice::from_ref(root))?;
            acc = acc.mul(&factor)?;
        }
        Ok(acc)
    }

    /// Serialized sequence: ring, cap, and the coefficient list.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ring": self.ring.to_string(),
            "cap": self.cap,
            "coeffs": self.coeffs.iter().map(|c| self.ring.coeff_to_json(c)).collect::<Vec<_>>(),
        })
    }
}

/// Conjugates a law by a twist: `lambda(F(lambda^{-1}(x), lambda^{-1}(y)))`.
/// The twist may live in a smaller ring that embeds into the law's.
pub fn twist_fgl(law: &FormalGroupLaw, tau: &TwistSequence) -> Result<FormalGroupLaw> {
    if tau.cap() != law.cap() {
        return Err(AlgebraError::StructuralMismatch(format!(
            "twist cap {} does not match law cap {}",
            tau.cap(),
            law.cap()
        )));
    }
    let tau_here = if tau.ring() == law.ring() {
        tau.clone()
    } else {
        tau.embed_to(law.ring())?
    };
    let lam = tau_here.lambda()?;
    let laminv = lam.reverse()?;
    let inner = law
        .series()
        .substitute(&[laminv.map_vars(2, &[0])?, laminv.map_vars(2, &[1])?])?;
    let twisted = lam.substitute(std::slice::from_ref(&inner))?;
    FormalGroupLaw::from_series_detect(twisted)
}

/// Defect of the unit identity linking a twist and its reverse:
/// `v(lambda(x)) * u(x) - 1`, where `u = lambda_tau / x` and
/// `v = lambda_bar / x`. Returns the first nonzero coefficient as a
/// witness, or `None` when the identity holds. The reverse sequence is
/// taken as an explicit argument so that corrupted data can be probed.
///
/// The comparison runs through degree `N - 1` for cap-`N` sequences: the
/// degree-`N` coefficient of the product involves `tau_N` and `bar_N`,
/// which cap-`N` sequences do not carry, so only the lower coefficients
/// are determined by the data — and those must vanish exactly.
pub fn inverse_twist_defect(tau: &TwistSequence, bar: &TwistSequence) -> Result<Option<String>> {
    if tau.ring() != bar.ring() || tau.cap() != bar.cap() {
        return Err(AlgebraError::StructuralMismatch(
            "twist and reverse twist must share ring and cap".into(),
        ));
    }
    let lam = tau.lambda()?;
    let u = tau.u_series()?;
    let v = bar.u_series()?;
    let product = v.substitute(std::slice::from_ref(&lam))?.mul(&u)?;
    let one = MultiSeries::constant(tau.ring().clone(), 1, tau.cap(), tau.ring().one())?;
    let determined = tau.cap() - 1;
    Ok(first_difference(
        &product.truncate(determined)?,
        &one.truncate(determined)?,
    ))
}

/// Defect of the support-split expansion of a twisted linear combination:
/// the combination under the twisted law must equal
/// `u(F(lambda^{-1}(x_vec))) * sum_I prod_{i in I} (x_i v(x_i)) * F_I(lambda^{-1}(x_vec))`,
/// where `F_I` are the support parts of the untwisted combination and
/// `v` comes from the reversed twist. The twisted law is an explicit
/// argument so corrupted candidates can be probed; `None` means the
/// identity holds.
pub fn zeta_twist_defect(
    law: &FormalGroupLaw,
    twisted: &FormalGroupLaw,
    tau: &TwistSequence,
    mults: &[i64],
) -> Result<Option<String>> {
    let r = mults.len();
    if r == 0 {
        return Err(AlgebraError::Domain("no multiplicities given".into()));
    }
    if twisted.ring() != law.ring() || twisted.cap() != law.cap() {
        return Err(AlgebraError::StructuralMismatch(
            "twisted law must share the base law's ring and cap".into(),
        ));
    }
    let tau_here = if tau.ring() == law.ring() {
        tau.clone()
    } else {
        tau.embed_to(law.ring())?
    };
    let ring = law.ring().clone();
    let cap = law.cap();

    let lhs = twisted.lincomb(mults)?;

    let laminv = tau_here.lambda()?.reverse()?;
    let subs: Vec<MultiSeries> = (0..r)
        .map(|i| laminv.map_vars(r, &[i]))
        .collect::<Result<Vec<_>>>()?;
    let comb = law.lincomb(mults)?;
    let comb_sub = comb.substitute(&subs)?;

    let u = tau_here.u_series()?;
    let u_of = u.substitute(std::slice::from_ref(&comb_sub))?;

    let v = tau_here.bar()?.u_series()?;
    let dec = law.zeta_decompose(mults)?;
    let mut total = MultiSeries::zero(ring.clone(), r, cap)?;
    for (subset, part) in dec.parts() {
        if part.is_zero() {
            continue;
        }
        let mut weight = MultiSeries::constant(ring.clone(), r, cap, ring.one())?;
        for &i in subset {
            let xi = MultiSeries::var(ring.clone(), r, cap, (i - 1) as usize)?;
            let v_at = v.map_vars(r, &[(i - 1) as usize])?;
            weight = weight.mul(&xi.mul(&v_at)?)?;
        }
        let part_sub = part.substitute(&subs)?;
        total = total.add(&weight.mul(&part_sub)?)?;
    }
    let rhs = u_of.mul(&total)?;
    Ok(first_difference(&lhs, &rhs))
}
