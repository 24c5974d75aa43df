//! Cellular rings: products of projective spaces extended by rank-two
//! projective bundles, with intersection theory driven by a law.
//!
//! A `CellularRing` fixes a `theory` (a formal group law), a list of base
//! dimensions, and a list of rank-two stages. Each base factor of
//! dimension `n` contributes a generator `t` with `t^{n+1} = 0`; each
//! stage `P(L_1 + L_2)` contributes a generator `t` with the monic
//! quadratic relation `t^2 = c_1 t - c_2`, where `c_1 = e(L_1) + e(L_2)`
//! and `c_2 = e(L_1) e(L_2)` are computed in the ring existing when the
//! stage is adjoined. The relations are triangular, so every class has a
//! unique normal form with base exponents at most `n_i` and stage
//! exponents at most one; `CohClass` values are always kept in that form.
//! The ring's total dimension (sum of base dimensions plus the stage
//! count) must not exceed the theory's cap: every class with zero
//! constant part is nilpotent of order at most the dimension plus one, so
//! series evaluation at such classes is exact, never an approximation.
//!
//! Line bundles are coordinatized by `LineClass`, an integer vector over
//! the current generators: tensoring adds vectors, dualizing negates, and
//! the Euler class is the law's linear combination of the generators with
//! those multiplicities.

use crate::error::{AlgebraError, Result};
use crate::fgl::FormalGroupLaw;
use crate::ring::Coeff;
use crate::series::MultiSeries;
use std::collections::BTreeMap;
use std::fmt;

/// A line bundle in generator coordinates: entry `i` is the multiplicity
/// of the `i`-th generator's bundle (negative for duals).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineClass(pub Vec<i64>);

impl LineClass {
    pub fn trivial(width: usize) -> Self {
        LineClass(vec![0; width])
    }

    /// Tensor product adds coordinates.
    pub fn tensor(&self, other: &LineClass) -> Result<LineClass> {
        if self.0.len() != other.0.len() {
            return Err(AlgebraError::StructuralMismatch(
                "line classes over different generator lists".into(),
            ));
        }
        Ok(LineClass(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    /// Dual negates coordinates.
    pub fn dual(&self) -> LineClass {
        LineClass(self.0.iter().map(|d| -d).collect())
    }

    /// Reinterprets the class over a wider generator list (a pullback
    /// along newly adjoined stages).
    pub fn pad_to(&self, width: usize) -> Result<LineClass> {
        if width < self.0.len() {
            return Err(AlgebraError::StructuralMismatch(
                "cannot shrink a line class".into(),
            ));
        }
        let mut v = self.0.clone();
        v.resize(width, 0);
        Ok(LineClass(v))
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }
}

/// One rank-two stage: the projectivization of `L_1 + L_2`. The line
/// classes are over the generators existing when the stage was adjoined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub l1: LineClass,
    pub l2: LineClass,
}

/// A cohomology class in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohClass {
    width: usize,
    terms: BTreeMap<Vec<u32>, Coeff>,
}

impl CohClass {
    fn empty(width: usize) -> Self {
        CohClass {
            width,
            terms: BTreeMap::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of the empty monomial.
    pub fn constant_coeff(&self) -> Option<Coeff> {
        self.terms.get(&vec![0u32; self.width]).cloned()
    }

    /// True when the constant part vanishes, making the class nilpotent.
    pub fn is_nilpotent(&self) -> bool {
        self.constant_coeff().map(|c| c.is_zero()).unwrap_or(true)
    }

    pub fn add(&self, other: &CohClass) -> CohClass {
        assert_eq!(self.width, other.width, "class widths must match");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(|| c.sub(c));
            *entry = entry.add(c);
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn neg(&self) -> CohClass {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &CohClass) -> CohClass {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Coeff) -> CohClass {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.mul(c);
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Serialized class: sorted monomial/coefficient pairs.
    pub fn to_json(&self, ring: &CellularRing) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                serde_json::json!({
                    "exp": e,
                    "coeff": ring.theory().ring().coeff_to_json(c),
                })
            })
            .collect();
        serde_json::json!({ "terms": terms })
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono = class_monomial_name(e);
                if mono == "1" {
                    format!("({})", c)
                } else {
                    format!("({})*{}", c, mono)
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// Renders a class monomial like `t1*t3^2` (or `1`).
pub fn class_monomial_name(exps: &[u32]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("t{}", i + 1)
            } else {
                format!("t{}^{}", i + 1, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// First coefficient where two classes disagree, as a witness string.
pub fn class_difference(a: &CohClass, b: &CohClass) -> Option<String> {
    let mut keys: std::collections::BTreeSet<&Vec<u32>> = a.terms.keys().collect();
    keys.extend(b.terms.keys());
    for e in keys {
        let zero_a = a.terms.get(e);
        let zero_b = b.terms.get(e);
        if zero_a != zero_b {
            let show = |x: Option<&Coeff>| x.map(|c| c.to_string()).unwrap_or_else(|| "0".into());
            return Some(format!(
                "coefficient of {}: {} vs {}",
                class_monomial_name(e),
                show(zero_a),
                show(zero_b)
            ));
        }
    }
    None
}

/// A cellular ring: projective-space base factors plus rank-two stages,
/// with intersection theory given by a law.
#[derive(Clone, Debug)]
pub struct CellularRing {
    theory: FormalGroupLaw,
    base_dims: Vec<u32>,
    stages: Vec<Stage>,
    // Stage relations (c_1, c_2), kept padded to the current width.
    relations: Vec<(CohClass, CohClass)>,
}

impl CellularRing {
    /// A product of projective spaces `P^{n_1} x ... x P^{n_k}`. The list
    /// must be nonempty with nonnegative entries, and the total dimension
    /// must fit under the theory's cap so that all evaluations are exact.
    pub fn make_base(theory: FormalGroupLaw, dims: &[i64]) -> Result<CellularRing> {
        if dims.is_empty() {
            return Err(AlgebraError::Domain(
                "a base needs at least one factor".into(),
            ));
        }
        let mut base_dims = Vec::with_capacity(dims.len());
        for &d in dims {
            if d < 0 {
                return Err(AlgebraError::Domain(format!(
                    "projective-space dimension {} is negative",
                    d
                )));
            }
            base_dims.push(d as u32);
        }
        let dimension: u32 = base_dims.iter().sum();
        if dimension > theory.cap() {
            return Err(AlgebraError::Capacity(format!(
                "dimension {} exceeds the theory cap {}",
                dimension,
                theory.cap()
            )));
        }
        Ok(CellularRing {
            theory,
            base_dims,
            stages: Vec::new(),
            relations: Vec::new(),
        })
    }

    pub fn theory(&self) -> &FormalGroupLaw {
        &self.theory
    }

    pub fn base_dims(&self) -> &[u32] {
        &self.base_dims
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn gen_count(&self) -> usize {
        self.base_dims.len() + self.stages.len()
    }

    /// Total dimension: sum of base dimensions plus one per stage.
    pub fn dimension(&self) -> u32 {
        self.base_dims.iter().sum::<u32>() + self.stages.len() as u32
    }

    pub fn zero_class(&self) -> CohClass {
        CohClass::empty(self.gen_count())
    }

    pub fn constant_class(&self, c: Coeff) -> Result<CohClass> {
        self.theory.ring().check(&c)?;
        let mut out = self.zero_class();
        if !c.is_zero() {
            out.terms.insert(vec![0; self.gen_count()], c);
        }
        Ok(out)
    }

    pub fn one_class(&self) -> CohClass {
        self.constant_class(self.theory.ring().one())
            .expect("the ring contains one")
    }

    /// The generator `t_{idx+1}` as a class (zero when its relation kills
    /// it, e.g. on a zero-dimensional factor).
    pub fn gen_class(&self, idx: usize) -> Result<CohClass> {
        if idx >= self.gen_count() {
            return Err(AlgebraError::Domain(format!(
                "generator index {} outside 0..{}",
                idx,
                self.gen_count()
            )));
        }
        let mut exps = vec![0u32; self.gen_count()];
        exps[idx] = 1;
        self.reduce(vec![(exps, self.theory.ring().one())])
    }

    /// Normalizes raw terms against the relations. Base exponents above
    /// their bound kill a term. A stage exponent of two or more is peeled
    /// into a normal-form power of that stage generator times the rest of
    /// the monomial, so everything funnels through `mul_rec`, which keeps
    /// intermediate results in normal form (no rewrite cascades).
    fn reduce(&self, raw: Vec<(Vec<u32>, Coeff)>) -> Result<CohClass> {
        let width = self.gen_count();
        let nbase = self.base_dims.len();
        let mut out = CohClass::empty(width);
        for (exps, c) in raw {
            if c.is_zero() {
                continue;
            }
            if exps.len() != width {
                return Err(AlgebraError::StructuralMismatch(format!(
                    "monomial of width {} in a ring with {} generators",
                    exps.len(),
                    width
                )));
            }
            if exps
                .iter()
                .take(nbase)
                .zip(self.base_dims.iter())
                .any(|(&e, &n)| e > n)
            {
                continue;
            }
            let mut piece = CohClass::empty(width);
            let mut stem = exps.clone();
            for g in nbase..width {
                stem[g] = exps[g].min(1);
            }
            piece.terms.insert(stem, c);
            for g in nbase..width {
                for _ in 1..exps[g] {
                    let mut tg = CohClass::empty(width);
                    let mut e = vec![0u32; width];
                    e[g] = 1;
                    tg.terms.insert(e, self.theory.ring().one());
                    piece = self.mul_rec(self.stages.len(), &piece, &tg);
                }
            }
            out = out.add(&piece);
        }
        Ok(out)
    }

    /// Multiplication by recursion on the stages: split both factors as
    /// `A + B t` at the top remaining stage, multiply the four parts one
    /// level down, and fold `t^2` through `c_1 t - c_2` (whose classes only
    /// involve earlier generators, so they are already normal one level
    /// down). The base case multiplies monomials directly, dropping any
    /// that overflow a base bound. Inputs must be in normal form.
    fn mul_rec(&self, nstages: usize, a: &CohClass, b: &CohClass) -> CohClass {
        let width = self.gen_count();
        if a.terms.is_empty() || b.terms.is_empty() {
            return CohClass::empty(width);
        }
        if nstages == 0 {
            let nbase = self.base_dims.len();
            let mut out = CohClass::empty(width);
            for (ea, ca) in &a.terms {
                'pairs: for (eb, cb) in &b.terms {
                    let mut exps = Vec::with_capacity(width);
                    for i in 0..width {
                        let e = ea[i] + eb[i];
                        if i < nbase && e > self.base_dims[i] {
                            continue 'pairs;
                        }
                        exps.push(e);
                    }
                    let c = ca.mul(cb);
                    if c.is_zero() {
                        continue;
                    }
                    let entry = out
                        .terms
                        .entry(exps)
                        .or_insert_with(|| self.theory.ring().zero());
                    *entry = entry.add(&c);
                }
            }
            out.terms.retain(|_, c| !c.is_zero());
            return out;
        }
        let g = self.base_dims.len() + nstages - 1;
        let (a0, a1) = split_at_gen(a, g);
        let (b0, b1) = split_at_gen(b, g);
        let p00 = self.mul_rec(nstages - 1, &a0, &b0);
        let p01 = self.mul_rec(nstages - 1, &a0, &b1);
        let p10 = self.mul_rec(nstages - 1, &a1, &b0);
        let p11 = self.mul_rec(nstages - 1, &a1, &b1);
        let (c1, c2) = &self.relations[nstages - 1];
        let lin = p01.add(&p10).add(&self.mul_rec(nstages - 1, &p11, c1));
        let cst = p00.sub(&self.mul_rec(nstages - 1, &p11, c2));
        cst.add(&raise_gen(&lin, g))
    }

    pub fn mul_class(&self, a: &CohClass, b: &CohClass) -> Result<CohClass> {
        if a.width != self.gen_count() || b.width != self.gen_count() {
            return Err(AlgebraError::StructuralMismatch(
                "class width does not match the ring".into(),
            ));
        }
        Ok(self.mul_rec(self.stages.len(), a, b))
    }

    pub fn pow_class(&self, a: &CohClass, e: u32) -> Result<CohClass> {
        let mut out = self.one_class();
        for _ in 0..e {
            out = self.mul_class(&out, a)?;
        }
        Ok(out)
    }

    /// Inverts a class whose constant part is a unit, by the geometric
    /// series on the nilpotent remainder (which stops at the dimension).
    pub fn invert_unit(&self, a: &CohClass) -> Result<CohClass> {
        let c0 = a
            .constant_coeff()
            .ok_or_else(|| AlgebraError::NotAUnit("class has no constant part".into()))?;
        let c0_inv = self.theory.ring().invert(&c0)?;
        let scaled = a.scale(&c0_inv);
        let n = self.one_class().sub(&scaled);
        let mut acc = self.one_class();
        let mut npow = self.one_class();
        for _ in 0..=self.dimension() {
            npow = self.mul_class(&npow, &n)?;
            if npow.is_zero() {
                break;
            }
            acc = acc.add(&npow);
        }
        Ok(acc.scale(&c0_inv))
    }

    /// Evaluates a series of the theory's ring and cap at nilpotent
    /// classes, one per variable. Because the ring's dimension is at most
    /// the cap, truncation never loses a term: the result is exact.
    pub fn eval_series(&self, series: &MultiSeries, args: &[CohClass]) -> Result<CohClass> {
        if series.ring() != self.theory.ring() {
            return Err(AlgebraError::StructuralMismatch(
                "series ring does not match the theory".into(),
            ));
        }
        if series.cap() != self.theory.cap() {
            return Err(AlgebraError::StructuralMismatch(
                "series cap does not match the theory".into(),
            ));
        }
        if args.len() != series.vars() {
            return Err(AlgebraError::StructuralMismatch(format!(
                "{} arguments for a {}-variable series",
                args.len(),
                series.vars()
            )));
        }
        for (i, a) in args.iter().enumerate() {
            if a.width != self.gen_count() {
                return Err(AlgebraError::StructuralMismatch(format!(
                    "argument {} has width {}, ring has {} generators",
                    i + 1,
                    a.width,
                    self.gen_count()
                )));
            }
            if !a.is_nilpotent() {
                return Err(AlgebraError::InvalidRoot(format!(
                    "argument {} has a nonzero constant part",
                    i + 1
                )));
            }
        }
        let mut max_exp = vec![0u32; series.vars()];
        for exps in series.terms().keys() {
            for (i, &e) in exps.iter().enumerate() {
                max_exp[i] = max_exp[i].max(e);
            }
        }
        let mut pows: Vec<Vec<CohClass>> = Vec::with_capacity(args.len());
        for (i, a) in args.iter().enumerate() {
            let mut table = vec![self.one_class()];
            for k in 1..=max_exp[i] {
                let next = self.mul_class(&table[(k - 1) as usize], a)?;
                table.push(next);
            }
            pows.push(table);
        }
        let mut acc = self.zero_class();
        for (exps, c) in series.terms() {
            let mut term = self.constant_class(c.clone())?;
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = self.mul_class(&term, &pows[i][e as usize])?;
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Euler class of a line bundle: the law's linear combination of the
    /// generators with the class's multiplicities. The combination is
    /// folded inside the ring two summands at a time — associativity of
    /// the law and exactness of nilpotent evaluation make this equal to
    /// evaluating the full multivariate combination, at a fraction of the
    /// cost.
    pub fn euler_class(&self, line: &LineClass) -> Result<CohClass> {
        if line.0.len() != self.gen_count() {
            return Err(AlgebraError::StructuralMismatch(format!(
                "line class over {} generators in a ring with {}",
                line.0.len(),
                self.gen_count()
            )));
        }
        let mut acc: Option<CohClass> = None;
        for (i, &d) in line.0.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let t = self.gen_class(i)?;
            let scaled = self.eval_series(&self.theory.n_series(d)?, std::slice::from_ref(&t))?;
            acc = Some(match acc {
                None => scaled,
                Some(prev) => self.eval_series(self.theory.series(), &[prev, scaled])?,
            });
        }
        Ok(acc.unwrap_or_else(|| self.zero_class()))
    }

    /// Chern classes of a split bundle `L_1 + ... + L_r`: the elementary
    /// symmetric functions of the Euler classes, indices `0..=r`.
    pub fn chern_classes(&self, lines: &[LineClass]) -> Result<Vec<CohClass>> {
        let mut elem = vec![self.one_class()];
        for line in lines {
            let e = self.euler_class(line)?;
            let mut next = Vec::with_capacity(elem.len() + 1);
            for k in 0..=elem.len() {
                let from_left = if k < elem.len() {
                    elem[k].clone()
                } else {
                    self.zero_class()
                };
                let from_prod = if k > 0 {
                    self.mul_class(&elem[k - 1], &e)?
                } else {
                    self.zero_class()
                };
                next.push(from_left.add(&from_prod));
            }
            elem = next;
        }
        Ok(elem)
    }

    /// Adjoins the projectivization of `L_1 + L_2` as a new stage.
    pub fn adjoin_rank2(&self, l1: LineClass, l2: LineClass) -> Result<CellularRing> {
        self.adjoin_rank2_tweaked(l1, l2, None)
    }

    /// Diagnostic variant of `adjoin_rank2`: when a tweak is supplied it is
    /// added to the stored `c_2` of the new relation, deliberately breaking
    /// the ring's consistency so downstream checks can be shown to fail.
    pub fn adjoin_rank2_tweaked(
        &self,
        l1: LineClass,
        l2: LineClass,
        tweak: Option<Coeff>,
    ) -> Result<CellularRing> {
        if l1.0.len() != self.gen_count() || l2.0.len() != self.gen_count() {
            return Err(AlgebraError::StructuralMismatch(
                "stage line classes must cover the current generators".into(),
            ));
        }
        if self.dimension() + 1 > self.theory.cap() {
            return Err(AlgebraError::Capacity(format!(
                "dimension {} would exceed the theory cap {}",
                self.dimension() + 1,
                self.theory.cap()
            )));
        }
        let e1 = self.euler_class(&l1)?;
        let e2 = self.euler_class(&l2)?;
        let c1 = e1.add(&e2);
        let mut c2 = self.mul_class(&e1, &e2)?;
        if let Some(delta) = tweak {
            c2 = c2.add(&self.constant_class(delta)?);
        }
        let mut relations: Vec<(CohClass, CohClass)> = self
            .relations
            .iter()
            .map(|(a, b)| (pad_class(a, 1), pad_class(b, 1)))
            .collect();
        relations.push((pad_class(&c1, 1), pad_class(&c2, 1)));
        let mut stages = self.stages.clone();
        stages.push(Stage { l1, l2 });
        Ok(CellularRing {
            theory: self.theory.clone(),
            base_dims: self.base_dims.clone(),
            stages,
            relations,
        })
    }

    /// The ring below the last stage.
    pub fn parent(&self) -> Result<CellularRing> {
        if self.stages.is_empty() {
            return Err(AlgebraError::Domain("the base has no parent".into()));
        }
        let stages = self.stages[..self.stages.len() - 1].to_vec();
        let relations = self.relations[..self.relations.len() - 1]
            .iter()
            .map(|(a, b)| Ok((shrink_class(a)?, shrink_class(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CellularRing {
            theory: self.theory.clone(),
            base_dims: self.base_dims.clone(),
            stages,
            relations,
        })
    }

    /// The same base and stages under a different law. Stage relations are
    /// recomputed, so classes of the two rings are comparable only through
    /// operations that account for the change of theory.
    pub fn with_theory(&self, theory: FormalGroupLaw) -> Result<CellularRing> {
        let mut out = CellularRing::make_base(
            theory,
            &self.base_dims.iter().map(|&d| d as i64).collect::<Vec<_>>(),
        )?;
        for stage in &self.stages {
            out = out.adjoin_rank2(stage.l1.clone(), stage.l2.clone())?;
        }
        Ok(out)
    }

    /// Pullback of a class from the parent along the last stage's bundle
    /// projection.
    pub fn pullback(&self, from_parent: &CohClass) -> Result<CohClass> {
        if self.stages.is_empty() || from_parent.width != self.gen_count() - 1 {
            return Err(AlgebraError::StructuralMismatch(
                "pullback expects a class of the parent ring".into(),
            ));
        }
        Ok(pad_class(from_parent, 1))
    }

    /// The class of the `k`-th coordinate section (`k` is 1 or 2) of the
    /// last stage: `F(t, i(e(L_k)))` with `t` the stage generator.
    pub fn section_pushforward(&self, k: usize) -> Result<CohClass> {
        if self.stages.is_empty() {
            return Err(AlgebraError::Domain("no stage to section".into()));
        }
        if k != 1 && k != 2 {
            return Err(AlgebraError::Domain(format!(
                "section index {} is not 1 or 2",
                k
            )));
        }
        let stage = self.stages.last().expect("nonempty");
        let line = if k == 1 { &stage.l1 } else { &stage.l2 };
        let rho = self.euler_class(&line.pad_to(self.gen_count())?)?;
        let inv_rho = self.eval_series(self.theory.inverse_series(), std::slice::from_ref(&rho))?;
        let t = self.gen_class(self.gen_count() - 1)?;
        self.eval_series(self.theory.series(), &[t, inv_rho])
    }

    /// Pushforward along the last stage's projection. The unit's image is
    /// the law's double-index sum at the Euler classes of `M = L_2 - L_1`
    /// and its dual; the stage generator's image is solved from the first
    /// section's adjunction and cross-checked against the second's, so an
    /// inconsistent ring is reported rather than silently used.
    ///
    /// The double-index sum contributes `e(M)^{i-1} e(M^dual)^{j-1}` per
    /// table entry `(i, j)`, so it is exact when the table is complete
    /// through `i + j <= dimension + 1`; entries beyond the theory's cap
    /// are treated as zero.
    pub fn push_rank2(&self, alpha: &CohClass) -> Result<CohClass> {
        if self.stages.is_empty() {
            return Err(AlgebraError::Domain("no stage to push along".into()));
        }
        if alpha.width != self.gen_count() {
            return Err(AlgebraError::StructuralMismatch(
                "class width does not match the ring".into(),
            ));
        }
        let parent = self.parent()?;
        let stage = self.stages.last().expect("nonempty");

        let rho1 = parent.euler_class(&stage.l1)?;
        let rho2 = parent.euler_class(&stage.l2)?;
        let inv = self.theory.inverse_series();
        let inv_rho1 = parent.eval_series(inv, std::slice::from_ref(&rho1))?;
        let e_m = parent.eval_series(self.theory.series(), &[rho2, inv_rho1])?;
        let e_md = parent.eval_series(inv, std::slice::from_ref(&e_m))?;

        let mut max_i = 0;
        let mut max_j = 0;
        for &(i, j) in self.theory.coeff_table().keys() {
            max_i = max_i.max(i);
            max_j = max_j.max(j);
        }
        let pows_m = power_table(&parent, &e_m, max_i.saturating_sub(1))?;
        let pows_md = power_table(&parent, &e_md, max_j.saturating_sub(1))?;
        let mut pi_one = parent.zero_class();
        for (&(i, j), a_ij) in self.theory.coeff_table() {
            let term = parent
                .mul_class(&pows_m[(i - 1) as usize], &pows_md[(j - 1) as usize])?
                .scale(a_ij);
            pi_one = pi_one.add(&term);
        }
        pi_one = pi_one.neg();

        let (a1, b1) = split_by_last(&self.section_pushforward(1)?);
        let b1_inv = parent.invert_unit(&b1)?;
        let pi_t = parent.mul_class(
            &b1_inv,
            &parent.one_class().sub(&parent.mul_class(&a1, &pi_one)?),
        )?;

        let (a2, b2) = split_by_last(&self.section_pushforward(2)?);
        let check = parent
            .mul_class(&a2, &pi_one)?
            .add(&parent.mul_class(&b2, &pi_t)?);
        if let Some(w) = class_difference(&check, &parent.one_class()) {
            return Err(AlgebraError::ConventionFault(format!(
                "second section's adjunction fails: {}",
                w
            )));
        }

        let (a, b) = split_by_last(alpha);
        Ok(parent
            .mul_class(&a, &pi_one)?
            .add(&parent.mul_class(&b, &pi_t)?))
    }
}

/// Appends zero exponents for newly adjoined generators.
fn pad_class(a: &CohClass, extra: usize) -> CohClass {
    let mut out = CohClass::empty(a.width + extra);
    for (e, c) in &a.terms {
        let mut exps = e.clone();
        exps.extend(std::iter::repeat(0).take(extra));
        out.terms.insert(exps, c.clone());
    }
    out
}

/// Drops the last generator's exponent column; it must be zero throughout.
fn shrink_class(a: &CohClass) -> Result<CohClass> {
    let mut out = CohClass::empty(a.width - 1);
    for (e, c) in &a.terms {
        if e[a.width - 1] != 0 {
            return Err(AlgebraError::StructuralMismatch(
                "class involves the generator being removed".into(),
            ));
        }
        out.terms.insert(e[..a.width - 1].to_vec(), c.clone());
    }
    Ok(out)
}

/// Splits a normal-form class by its exponent (zero or one) at generator
/// `g`, returning full-width classes, the second with the exponent
/// cleared.
fn split_at_gen(a: &CohClass, g: usize) -> (CohClass, CohClass) {
    let mut at_zero = CohClass::empty(a.width);
    let mut at_one = CohClass::empty(a.width);
    for (e, c) in &a.terms {
        match e[g] {
            0 => {
                at_zero.terms.insert(e.clone(), c.clone());
            }
            1 => {
                let mut head = e.clone();
                head[g] = 0;
                at_one.terms.insert(head, c.clone());
            }
            _ => unreachable!("normal form keeps stage exponents at most one"),
        }
    }
    (at_zero, at_one)
}

/// Multiplies by generator `g` a class that does not involve it.
fn raise_gen(a: &CohClass, g: usize) -> CohClass {
    let mut out = CohClass::empty(a.width);
    for (e, c) in &a.terms {
        debug_assert_eq!(e[g], 0, "raise_gen expects the generator absent");
        let mut exps = e.clone();
        exps[g] = 1;
        out.terms.insert(exps, c.clone());
    }
    out
}

/// Splits `alpha = A + B t` by the last stage generator, returning `(A, B)`
/// as classes of the parent width. Normal form guarantees the exponent is
/// at most one.
fn split_by_last(alpha: &CohClass) -> (CohClass, CohClass) {
    let w = alpha.width;
    let mut a = CohClass::empty(w - 1);
    let mut b = CohClass::empty(w - 1);
    for (e, c) in &alpha.terms {
        let head = e[..w - 1].to_vec();
        match e[w - 1] {
            0 => {
                a.terms.insert(head, c.clone());
            }
            1 => {
                b.terms.insert(head, c.clone());
            }
            _ => unreachable!("normal form keeps stage exponents at most one"),
        }
    }
    (a, b)
}

fn power_table(ring: &CellularRing, a: &CohClass, up_to: u32) -> Result<Vec<CohClass>> {
    let mut table = vec![ring.one_class()];
    for k in 1..=up_to {
        let next = ring.mul_class(&table[(k - 1) as usize], a)?;
        table.push(next);
    }
    Ok(table)
}

/// The base-point tower class of the given height: starting from a point
/// with the trivial bundle, repeatedly projectivize `M + O` and replace
/// `M` by its twist by the dual of the new stage's tautological class
/// (Picard coordinate -1 on the new generator — the reading under which
/// the bundle-formula cross-check closes; the +1 reading provably fails
/// it at degree 2). The class is the full pushforward of the unit down to
/// the point.
///
/// Exactness boundary: each pushforward from a ring of dimension d draws
/// on table entries with i + j <= d + 1, so heights up to cap - 1 are
/// exact for any theory; at height = cap the top push reads the capped
/// table (exact whenever the theory's true table vanishes beyond the cap,
/// as the additive and multiplicative ones do).
/// Measures how far the Euler class taken under the twisted law sits from
/// `lambda_tau` of the Euler class taken under the plain law.
///
/// The twisted ring presents the same underlying space, but its generators
/// denote the twisted Euler classes of the coordinate bundles — which are
/// `lambda_tau` of the plain generators. Comparing coefficient tables
/// directly would therefore conflate two coordinate systems; instead the
/// twisted class is re-expanded in plain coordinates by substituting
/// `lambda_tau(t_i)` for the `i`-th generator before comparing. Returns
/// the first differing monomial, or `None` when the classes agree.
pub fn twisted_euler_defect(
    plain: &CellularRing,
    tau: &crate::twist::TwistSequence,
    line: &LineClass,
) -> Result<Option<String>> {
    let twisted_law = crate::twist::twist_fgl(plain.theory(), tau)?;
    let twisted = plain.with_theory(twisted_law)?;
    let mut lam = tau.lambda()?;
    if lam.ring() != plain.theory().ring() {
        lam = lam.embed_into(plain.theory().ring())?;
    }

    let mut lifted_gens = Vec::with_capacity(plain.gen_count());
    for idx in 0..plain.gen_count() {
        let t = plain.gen_class(idx)?;
        lifted_gens.push(plain.eval_series(&lam, std::slice::from_ref(&t))?);
    }
    let raw = twisted.euler_class(line)?;
    let mut lhs = plain.zero_class();
    for (exps, c) in raw.terms() {
        let mut term = plain.constant_class(c.clone())?;
        for (idx, &e) in exps.iter().enumerate() {
            if e > 0 {
                term = plain.mul_class(&term, &plain.pow_class(&lifted_gens[idx], e)?)?;
            }
        }
        lhs = lhs.add(&term);
    }

    let plain_euler = plain.euler_class(line)?;
    let rhs = plain.eval_series(&lam, std::slice::from_ref(&plain_euler))?;
    Ok(class_difference(&lhs, &rhs))
}

pub fn tower_class(theory: &FormalGroupLaw, height: u32) -> Result<Coeff> {
    if height > theory.cap() {
        return Err(AlgebraError::Capacity(format!(
            "tower height {} exceeds the theory cap {}",
            height,
            theory.cap()
        )));
    }
    let mut ring = CellularRing::make_base(theory.clone(), &[0])?;
    let mut m = LineClass::trivial(1);
    for _ in 0..height {
        ring = ring.adjoin_rank2(m.clone(), LineClass::trivial(m.0.len()))?;
        let mut v = m.0.clone();
        v.push(-1);
        m = LineClass(v);
    }
    let mut cls = ring.one_class();
    for _ in 0..height {
        cls = ring.push_rank2(&cls)?;
        ring = ring.parent()?;
    }
    Ok(cls.constant_coeff().unwrap_or_else(|| theory.ring().zero()))
}

/// Defect of the bundle-formula identity: the one-variable series
/// `-sum a_ij i(x)^{i-1} x^{j-1}` (the pushforward of the unit along
/// `P(L + O)` with `e(L) = x`) against the ratio
/// `(sum_i towers[i+1] x^i) / (sum_i towers[i] x^i)`, compared through
/// degree `towers.len() - 2` (higher coefficients would need deeper
/// towers). `towers` must start with the height-zero class `1`.
pub fn pbform1_defect(theory: &FormalGroupLaw, towers: &[Coeff]) -> Result<Option<String>> {
    if towers.len() < 2 {
        return Err(AlgebraError::Domain(
            "need towers of heights 0 and 1 at least".into(),
        ));
    }
    let ring = theory.ring().clone();
    let cap = theory.cap();
    let x = MultiSeries::var(ring.clone(), 1, cap, 0)?;
    let ix = theory.inverse_series().clone();

    let mut max_i = 0;
    let mut max_j = 0;
    for &(i, j) in theory.coeff_table().keys() {
        max_i = max_i.max(i);
        max_j = max_j.max(j);
    }
    let mut pows_ix = vec![MultiSeries::constant(ring.clone(), 1, cap, ring.one())?];
    for k in 1..max_i.max(1) {
        let next = pows_ix[(k - 1) as usize].mul(&ix)?;
        pows_ix.push(next);
    }
    let mut pows_x = vec![MultiSeries::constant(ring.clone(), 1, cap, ring.one())?];
    for k in 1..max_j.max(1) {
        let next = pows_x[(k - 1) as usize].mul(&x)?;
        pows_x.push(next);
    }
    let mut lhs = MultiSeries::zero(ring.clone(), 1, cap)?;
    for (&(i, j), a_ij) in theory.coeff_table() {
        let term = pows_ix[(i - 1) as usize]
            .mul(&pows_x[(j - 1) as usize])?
            .scale(a_ij)?;
        lhs = lhs.add(&term)?;
    }
    lhs = lhs.neg();

    let mut numerator = MultiSeries::zero(ring.clone(), 1, cap)?;
    for (i, beta) in towers.iter().skip(1).enumerate() {
        if i as u32 > cap {
            break;
        }
        let term =
            MultiSeries::from_terms(ring.clone(), 1, cap, vec![(vec![i as u32], beta.clone())])?;
        numerator = numerator.add(&term)?;
    }
    let mut denominator = MultiSeries::zero(ring.clone(), 1, cap)?;
    for (i, beta) in towers.iter().enumerate() {
        if i as u32 > cap {
            break;
        }
        let term =
            MultiSeries::from_terms(ring.clone(), 1, cap, vec![(vec![i as u32], beta.clone())])?;
        denominator = denominator.add(&term)?;
    }
    let rhs = numerator.divide_by_unit(&denominator)?;

    let determined = ((towers.len() - 2) as u32).min(cap);
    Ok(crate::series::first_difference(
        &lhs.truncate(determined)?,
        &rhs.truncate(determined)?,
    ))
}
