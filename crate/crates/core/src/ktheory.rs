//! Cellular K-rings and character maps.
//!
//! The K-ring of a cellular space is modeled as the cellular ring of the
//! multiplicative law over the integers: the class of the `i`-th
//! hyperplane bundle's Euler class is the generator `u_i = t_i`, and the
//! unit class of a line bundle `O(d)` is the product of `(1 - u_i)^{-d_i}`
//! (so `e_K(L) = 1 - [L^dual]`, which agrees with the multiplicative
//! Euler class computed from the law — the tests pin that down). Virtual
//! sums of line bundles carry signs; their rank is the signed count.
//!
//! Two characters are provided. `mult_character` lands back in the same
//! multiplicative ring: a line class maps to `1 - i(e(L))` with `i` the
//! multiplicative formal inverse, and `eta_k` reads such a cohomology
//! class as a K-class again — the round trip is the identity on line
//! classes, which is checked coefficient by coefficient rather than
//! assumed. `character_of_k_class` is the rational Chern character into
//! the additive companion ring (same cells, additive law over the
//! rationals), sending `u_i` to `1 - exp(-t_i)`; together with the Todd
//! factor `x / (1 - exp(-x))` it expresses the pushforward comparison for
//! rank-two projective bundles (`grr_rank2_defect`): the character of the
//! K-pushforward of the unit must equal the additive pushforward of the
//! product of Todd factors at the two stage roots. All of this is exact
//! arithmetic; a defect is a concrete coefficient witness, never a
//! tolerance.

use crate::cellular::{class_difference, CellularRing, CohClass, LineClass};
use crate::error::{AlgebraError, Result};
use crate::fgl::{FglKind, FormalGroupLaw};
use crate::ring::{Coeff, RingSpec};
use crate::scalar::Scalar;
use crate::series::MultiSeries;

/// A formal difference of sums of line bundles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualSplitBundle {
    pub plus: Vec<LineClass>,
    pub minus: Vec<LineClass>,
}

impl VirtualSplitBundle {
    pub fn of_lines(lines: Vec<LineClass>) -> Self {
        VirtualSplitBundle {
            plus: lines,
            minus: Vec::new(),
        }
    }

    pub fn rank(&self) -> i64 {
        self.plus.len() as i64 - self.minus.len() as i64
    }
}

/// The K-ring of a cellular space: its cells under the multiplicative law
/// over the integers.
#[derive(Clone, Debug)]
pub struct KRing {
    cells: CellularRing,
}

impl KRing {
    /// K-ring of a product of projective spaces. The cap must cover the
    /// dimension of every space the ring will ever hold, including stages
    /// adjoined later.
    pub fn new(dims: &[i64], cap: u32) -> Result<KRing> {
        let theory = FormalGroupLaw::multiplicative(RingSpec::Integers, cap)?;
        Ok(KRing {
            cells: CellularRing::make_base(theory, dims)?,
        })
    }

    pub fn cells(&self) -> &CellularRing {
        &self.cells
    }

    pub fn adjoin_rank2(&self, l1: LineClass, l2: LineClass) -> Result<KRing> {
        Ok(KRing {
            cells: self.cells.adjoin_rank2(l1, l2)?,
        })
    }

    pub fn parent(&self) -> Result<KRing> {
        Ok(KRing {
            cells: self.cells.parent()?,
        })
    }

    /// The unit class `[O(d)] = prod (1 - u_i)^{-d_i}`.
    pub fn line_unit_class(&self, line: &LineClass) -> Result<CohClass> {
        if line.0.len() != self.cells.gen_count() {
            return Err(AlgebraError::StructuralMismatch(format!(
                "line class over {} generators in a ring with {}",
                line.0.len(),
                self.cells.gen_count()
            )));
        }
        let mut acc = self.cells.one_class();
        for (i, &d) in line.0.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let u = self.cells.gen_class(i)?;
            let one_minus_u = self.cells.one_class().sub(&u);
            let factor = if d > 0 {
                self.cells
                    .invert_unit(&self.cells.pow_class(&one_minus_u, d as u32)?)?
            } else {
                self.cells.pow_class(&one_minus_u, (-d) as u32)?
            };
            acc = self.cells.mul_class(&acc, &factor)?;
        }
        Ok(acc)
    }

    /// Class of a virtual sum: signed sum of line unit classes.
    pub fn virtual_class(&self, e: &VirtualSplitBundle) -> Result<CohClass> {
        let mut acc = self.cells.zero_class();
        for line in &e.plus {
            acc = acc.add(&self.line_unit_class(line)?);
        }
        for line in &e.minus {
            acc = acc.sub(&self.line_unit_class(line)?);
        }
        Ok(acc)
    }

    /// K-theoretic Euler class `1 - [O(-d)]`.
    pub fn euler(&self, line: &LineClass) -> Result<CohClass> {
        let dual = self.line_unit_class(&line.dual())?;
        Ok(self.cells.one_class().sub(&dual))
    }
}

/// `exp(x)` truncated at the cap; needs a ring containing the rationals.
pub fn exp_series(ring: RingSpec, cap: u32) -> Result<MultiSeries> {
    if ring.base_kind() == crate::ring::BaseKind::Integers && !ring.is_graded() {
        return Err(AlgebraError::RingError(
            "the exponential needs rational coefficients".into(),
        ));
    }
    let mut terms = Vec::new();
    let mut factorial = Scalar::one();
    for k in 0..=cap {
        if k > 0 {
            factorial = &factorial * &Scalar::from_int(k as i64);
        }
        terms.push((vec![k], ring.from_scalar(factorial.invert()?)?));
    }
    MultiSeries::from_terms(ring, 1, cap, terms)
}

/// The Todd factor `x / (1 - exp(-x))`, as the inverse of the unit series
/// `sum_k (-1)^k x^k / (k+1)!`.
pub fn todd_factor(ring: RingSpec, cap: u32) -> Result<MultiSeries> {
    let mut terms = Vec::new();
    let mut factorial = Scalar::one(); // holds (k+1)!
    for k in 0..=cap {
        factorial = &factorial * &Scalar::from_int(k as i64 + 1);
        let mut c = factorial.invert()?;
        if k % 2 == 1 {
            c = -&c;
        }
        terms.push((vec![k], ring.from_scalar(c)?));
    }
    let denominator = MultiSeries::from_terms(ring.clone(), 1, cap, terms)?;
    let one = MultiSeries::constant(ring.clone(), 1, cap, ring.one())?;
    one.divide_by_unit(&denominator)
}

/// `1 - exp(-x)`: the additive image of a K-ring generator.
fn one_minus_exp_neg(ring: RingSpec, cap: u32) -> Result<MultiSeries> {
    let mut terms = Vec::new();
    let mut factorial = Scalar::one();
    for k in 1..=cap {
        factorial = &factorial * &Scalar::from_int(k as i64);
        let mut c = factorial.invert()?;
        if k % 2 == 0 {
            c = -&c;
        }
        terms.push((vec![k], ring.from_scalar(c)?));
    }
    MultiSeries::from_terms(ring, 1, cap, terms)
}

/// The additive companion of a K-ring: the same base and stages under the
/// additive law over the rationals, where characters take their values.
pub fn additive_companion(k: &KRing) -> Result<CellularRing> {
    let theory = FormalGroupLaw::additive(RingSpec::Rationals, k.cells().theory().cap())?;
    k.cells().with_theory(theory)
}

/// Character of a virtual split bundle into the same multiplicative ring:
/// `rank - sum_j (sign_j) i(e(L_j))` with `i` the formal inverse. The ring
/// must carry the multiplicative law.
pub fn mult_character(cells: &CellularRing, e: &VirtualSplitBundle) -> Result<CohClass> {
    if cells.theory().kind() != FglKind::Multiplicative {
        return Err(AlgebraError::Domain(
            "this character lives over the multiplicative law".into(),
        ));
    }
    let inv = cells.theory().inverse_series().clone();
    let mut acc = cells.constant_class(cells.theory().ring().from_int(e.rank()))?;
    for (sign_plus, lines) in [(true, &e.plus), (false, &e.minus)] {
        for line in lines {
            let ec = cells.euler_class(line)?;
            let im = cells.eval_series(&inv, std::slice::from_ref(&ec))?;
            acc = if sign_plus {
                acc.sub(&im)
            } else {
                acc.add(&im)
            };
        }
    }
    Ok(acc)
}

/// Reads a multiplicative cohomology class as a K-class: the two rings
/// are presented on the same generators, so this is a change of viewpoint
/// guarded by a shape check.
pub fn eta_k(k: &KRing, class: &CohClass) -> Result<CohClass> {
    if class.width() != k.cells().gen_count() {
        return Err(AlgebraError::StructuralMismatch(
            "class width does not match the K-ring".into(),
        ));
    }
    for c in class.terms().values() {
        k.cells().theory().ring().check(c)?;
    }
    Ok(class.clone())
}

/// Rational Chern character of a K-class: each generator `u_i` maps to
/// `1 - exp(-t_i)` in the additive companion ring, coefficients embed
/// into the rationals.
pub fn character_of_k_class(additive: &CellularRing, kclass: &CohClass) -> Result<CohClass> {
    if additive.theory().kind() != FglKind::Additive
        || *additive.theory().ring() != RingSpec::Rationals
    {
        return Err(AlgebraError::Domain(
            "the character lands in an additive ring over the rationals".into(),
        ));
    }
    if kclass.width() != additive.gen_count() {
        return Err(AlgebraError::StructuralMismatch(
            "class width does not match the target ring".into(),
        ));
    }
    let cap = additive.theory().cap();
    let image_series = one_minus_exp_neg(RingSpec::Rationals, cap)?;
    let width = additive.gen_count();
    let mut max_exp = vec![0u32; width];
    for exps in kclass.terms().keys() {
        for (i, &e) in exps.iter().enumerate() {
            max_exp[i] = max_exp[i].max(e);
        }
    }
    let mut pows: Vec<Vec<CohClass>> = Vec::with_capacity(width);
    for i in 0..width {
        let mut table = vec![additive.one_class()];
        if max_exp[i] > 0 {
            let t = additive.gen_class(i)?;
            let image = additive.eval_series(&image_series, std::slice::from_ref(&t))?;
            for k in 1..=max_exp[i] {
                let next = additive.mul_class(&table[(k - 1) as usize], &image)?;
                table.push(next);
            }
        }
        pows.push(table);
    }
    let mut acc = additive.zero_class();
    for (exps, c) in kclass.terms() {
        let scalar = c.constant_scalar().ok_or_else(|| {
            AlgebraError::RingError("K-class coefficients must be numbers".into())
        })?;
        let mut term = additive.constant_class(Coeff::Num(scalar))?;
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                term = additive.mul_class(&term, &pows[i][e as usize])?;
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Chern character of a virtual split bundle straight into an additive
/// ring over the rationals: the signed sum of `exp(e(L_j))`.
pub fn grr_character(additive: &CellularRing, e: &VirtualSplitBundle) -> Result<CohClass> {
    if additive.theory().kind() != FglKind::Additive
        || *additive.theory().ring() != RingSpec::Rationals
    {
        return Err(AlgebraError::Domain(
            "the character lands in an additive ring over the rationals".into(),
        ));
    }
    let exp = exp_series(RingSpec::Rationals, additive.theory().cap())?;
    let mut acc = additive.zero_class();
    for (sign_plus, lines) in [(true, &e.plus), (false, &e.minus)] {
        for line in lines {
            let ec = additive.euler_class(line)?;
            let image = additive.eval_series(&exp, std::slice::from_ref(&ec))?;
            acc = if sign_plus {
                acc.add(&image)
            } else {
                acc.sub(&image)
            };
        }
    }
    Ok(acc)
}

/// Round trip of a line class through the multiplicative character and
/// back: `eta_k(mult_character([O(d)]))` against `[O(d)]` itself,
/// computed along independent routes (formal inverse evaluation versus
/// geometric-series unit inversion).
pub fn cf_roundtrip_defect(k: &KRing, line: &LineClass) -> Result<Option<String>> {
    let bundle = VirtualSplitBundle::of_lines(vec![line.clone()]);
    let through_character = eta_k(k, &mult_character(k.cells(), &bundle)?)?;
    let direct = k.line_unit_class(line)?;
    Ok(class_difference(&through_character, &direct))
}

/// Pushforward comparison for the rank-two bundle `P(L_1 + L_2)` over the
/// K-ring's space: the rational character of the K-pushforward of the
/// unit, against the additive pushforward of the product of Todd factors
/// at the two stage roots. Returns the first differing coefficient.
pub fn grr_rank2_defect(k: &KRing, l1: &LineClass, l2: &LineClass) -> Result<Option<String>> {
    let staged_k = k.adjoin_rank2(l1.clone(), l2.clone())?;
    let pushed_k = staged_k.cells().push_rank2(&staged_k.cells().one_class())?;
    let additive_base = additive_companion(k)?;
    let lhs = character_of_k_class(&additive_base, &pushed_k)?;

    let staged_add = additive_base.adjoin_rank2(l1.clone(), l2.clone())?;
    let width = staged_add.gen_count();
    let cap = staged_add.theory().cap();
    let todd = todd_factor(RingSpec::Rationals, cap)?;
    let mut td = staged_add.one_class();
    for l in [l1, l2] {
        let mut root = l.dual().pad_to(width)?;
        root.0[width - 1] += 1;
        let x = staged_add.euler_class(&root)?;
        let factor = staged_add.eval_series(&todd, std::slice::from_ref(&x))?;
        td = staged_add.mul_class(&td, &factor)?;
    }
    let rhs = staged_add.push_rank2(&td)?;
    Ok(class_difference(&lhs, &rhs))
}
