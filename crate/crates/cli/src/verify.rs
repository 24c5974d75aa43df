//! The identity-verification catalog. Each entry is a strategy object
//! behind `IdentityCheck`; the runner looks the requested id up in the
//! registry, times the check, prints a report as canonical JSON on
//! stdout, and reports the elapsed milliseconds on stderr (stdout stays
//! byte-identical across runs).
//!
//! Outcome contract: a check that completes returns pass or fail — fail
//! always carries a concrete witness (the first bad monomial, coefficient
//! pair, or fault message). Errors constructing the inputs (bad flags, a
//! twist with a wrong head, an over-cap request) are validation errors:
//! they go to stderr and exit with code 2.

use crate::common::{
    build_law, delta_in, parse_i64_list, parse_index_perturbation, parse_perturbation, parse_tau,
    print_json, reject,
};
use clap::Args;
use fgl_core::cellular::{
    class_difference, pbform1_defect, tower_class, twisted_euler_defect, CellularRing, CohClass,
    LineClass,
};
use fgl_core::error::{AlgebraError, Result};
use fgl_core::fgl::{check_axioms, double_point_defect, FormalGroupLaw};
use fgl_core::ktheory::{
    cf_roundtrip_defect, eta_k, grr_rank2_defect, mult_character, KRing, VirtualSplitBundle,
};
use fgl_core::poly::GradedPoly;
use fgl_core::ring::{BaseKind, RingSpec};
use fgl_core::scalar::Scalar;
use fgl_core::series::first_difference;
use fgl_core::twist::{inverse_twist_defect, twist_fgl, zeta_twist_defect, TwistSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Args)]
pub struct VerifyArgs {
    /// Catalog entry to run (see `fglc verify --help` or the README).
    pub id: String,
    /// Truncation degree for all series arithmetic.
    #[arg(long, default_value_t = 6)]
    pub degree: u32,
    /// int | rat | lazard:M
    #[arg(long)]
    pub ring: Option<String>,
    /// additive | multiplicative | universal (per-entry default).
    #[arg(long)]
    pub law: Option<String>,
    /// exp-log | identity | comma list of rationals starting with 1.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Comma-separated multiplicities, e.g. `2,-1`.
    #[arg(long, allow_hyphen_values = true)]
    pub mults: Option<String>,
    /// Base dimensions for cellular entries, e.g. `2,1`.
    #[arg(long)]
    pub dims: Option<String>,
    /// Number of randomized instances for sweep entries.
    #[arg(long)]
    pub trials: Option<u32>,
    /// Seed for the randomized sweeps.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Bump a law coefficient: `i,j` or `i,j,delta`.
    #[arg(long)]
    pub perturb_f: Option<String>,
    /// Bump a twist coefficient: `k` or `k,delta`.
    #[arg(long)]
    pub perturb_tau: Option<String>,
    /// Bump a coefficient of the inverse twist: `k` or `k,delta`.
    #[arg(long)]
    pub perturb_bar: Option<String>,
    /// Corrupt the adjoined stage relation by a constant.
    #[arg(long)]
    pub perturb_stage: bool,
    /// Emit compact JSON (the default; accepted for symmetry).
    #[arg(long)]
    pub json: bool,
    /// Indent the report (formatting carries no stability guarantee).
    #[arg(long)]
    pub pretty: bool,
}

pub enum Outcome {
    Pass,
    Fail(String),
}

type Params = serde_json::Map<String, serde_json::Value>;

trait IdentityCheck {
    fn id(&self) -> &'static str;
    fn run(&self, o: &VerifyArgs, params: &mut Params) -> Result<Outcome>;
}

fn note(params: &mut Params, key: &str, value: impl Into<serde_json::Value>) {
    params.insert(key.to_string(), value.into());
}

fn law_for(o: &VerifyArgs, default: &str, params: &mut Params) -> Result<FormalGroupLaw> {
    let name = o.law.clone().unwrap_or_else(|| default.to_string());
    note(params, "law", name.clone());
    let law = build_law(&name, o.ring.as_deref(), o.degree)?;
    if let Some(spec) = &o.ring {
        note(params, "ring", spec.clone());
    }
    Ok(law)
}

fn perturbed(o: &VerifyArgs, law: FormalGroupLaw, params: &mut Params) -> Result<FormalGroupLaw> {
    match &o.perturb_f {
        Some(spec) => {
            let (i, j, delta) = parse_perturbation(spec)?;
            note(params, "perturbF", spec.clone());
            law.with_perturbed_coeff(i, j, &delta_in(law.ring(), &delta)?)
        }
        None => Ok(law),
    }
}

fn bump_twist(tau: &TwistSequence, k: u32, delta: &Scalar) -> Result<TwistSequence> {
    let mut coeffs = tau.coeffs().to_vec();
    if k as usize >= coeffs.len() {
        return Err(AlgebraError::Capacity(format!(
            "index {} exceeds the sequence cap {}",
            k,
            coeffs.len()
        )));
    }
    let bump = tau.ring().from_scalar(delta.clone())?;
    coeffs[k as usize] = coeffs[k as usize].add(&bump);
    TwistSequence::new(tau.ring().clone(), tau.cap(), coeffs)
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let num = loop {
        let n = rng.gen_range(-5i64..=5);
        if n != 0 {
            break n;
        }
    };
    let den = rng.gen_range(1i64..=4);
    Scalar::new(num, den).expect("nonzero denominator")
}

/// A random twist over the graded ring with homogeneous coefficients:
/// degree `i` gets a random rational multiple of a random degree-`i`
/// monomial in the generators.
fn random_graded_tau(rng: &mut ChaCha8Rng, cap: u32) -> Result<TwistSequence> {
    let ring = RingSpec::Graded {
        base: BaseKind::Rationals,
        bound: cap,
    };
    let mut coeffs = vec![ring.one()];
    for degree in 1..cap {
        let mut exps: std::collections::BTreeMap<u32, u32> = std::collections::BTreeMap::new();
        let mut left = degree;
        while left > 0 {
            let part = rng.gen_range(1..=left);
            *exps.entry(part).or_insert(0) += 1;
            left -= part;
        }
        let mono: Vec<(u32, u32)> = exps.into_iter().collect();
        let poly = GradedPoly::from_terms(cap, vec![(mono, random_scalar(rng))])?;
        coeffs.push(fgl_core::ring::Coeff::Poly(poly));
    }
    TwistSequence::new(ring, cap, coeffs)
}

fn random_line(rng: &mut ChaCha8Rng, width: usize, max: i64) -> LineClass {
    LineClass((0..width).map(|_| rng.gen_range(-max..=max)).collect())
}

/// A random class in the ring: a small integer combination of generator
/// monomials with per-generator exponents at most two.
fn random_class(rng: &mut ChaCha8Rng, ring: &CellularRing) -> Result<CohClass> {
    let mut acc = ring.zero_class();
    for _ in 0..3 {
        let mut term =
            ring.constant_class(ring.theory().ring().from_int(rng.gen_range(-3i64..=3)))?;
        for g in 0..ring.gen_count() {
            let e = rng.gen_range(0u32..=2);
            if e > 0 {
                term = ring.mul_class(&term, &ring.pow_class(&ring.gen_class(g)?, e)?)?;
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

fn dims_for(o: &VerifyArgs, default: &str, params: &mut Params) -> Result<Vec<i64>> {
    let spec = o.dims.clone().unwrap_or_else(|| default.to_string());
    note(params, "dims", spec.clone());
    parse_i64_list(&spec)
}

struct FglAxioms;

impl IdentityCheck for FglAxioms {
    fn id(&self) -> &'static str {
        "fgl-axioms"
    }

    fn run(&self, o: &VerifyArgs, params: &mut Params) -> Result<Outcome> {
        let law = perturbed(o, law_for(o, "universal", params)?, params)?;
        match check_axioms(law.series()) {
            Ok(()) => Ok(Outcome::Pass),
            Err(AlgebraError::InvalidFgl { axiom, witness }) => {
                Ok(Outcome::Fail(format!("{} fails at {}", axiom, witness)))
            }
            Err(e) => Err(e),
        }
    }
}

struct InverseTwist;

impl IdentityCheck for InverseTwist {
    fn id(&self) -> &'static str {
        "inverse-twist"
    }

    fn run(&self, o: &VerifyArgs, params: &mut Params) -> Result<Outcome> {
        // The data of a cap-N sequence determines the identity through
        // degree N-1, so sweeps construct with one degree of headroom and
        // assert exactness through the requested degree.
        let mut taus = Vec::new();
        match &o.tau {
            Some(spec) => {
                note(params, "tau", spec.clone());
                taus.push(parse_tau(spec, o.degree + 1)?);
            }
            None => {
                let trials = o.trials.unwrap_or(20);
                note(params, "trials", trials);
                note(params, "seed", o.seed);
                let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
                for _ in 0..trials {
                    taus.push(random_graded_tau(&mut rng, o.degree + 1)?);
                }
            }
        }
        for (idx, tau) in taus.iter().enumerate() {
            let mut bar = tau.bar()?;
            if let Some(spec) = &o.perturb_bar {
                let (k, delta) = parse_index_perturbation(spec)?;
                note(params, "perturbBar", spec.clone());
                bar = bump_twist(&bar, k, &delta)?;
            }
            if let Some(w) = inverse_twist_defect(tau, &bar)? {
                return Ok(Outcome::Fail(format!("sequence {}: {}", idx, w)));
            }
        }
        Ok(Outcome::Pass)
    }
}

struct AddToMult;

impl IdentityCheck for AddToMult {
    fn id(&self) -> &'static str {
        "add-to-mult"
    }

    fn run(&self, o: &VerifyArgs, params: &mut Params) -> Result<Outcome> {
        let spec = o.tau.clone().unwrap_or_else(|| "exp-log".to_string());
        note(params, "tau", spec.clone());
        let mut tau = parse_tau(&spec, o.degree)?;
        if let Some(p) = &o.perturb_tau {
            let (k, delta) = parse_index_perturbation(p)?;
            note(params, "perturbTau", p.clone());
            tau = bump_twist(&tau, k, &delta)?;
        }
        let additive = FormalGroupLaw::additive(RingSpec::Rationals, o.degree)?;
        let multiplicative = FormalGroupLaw::multiplicative(RingSpec::Rationals, o.degree)?;
        let twisted = twist_fgl(&additive, &tau)?;
        if let Some(w) = first_difference(twisted.series(), multiplicative.series()) {
            return Ok(Outcome::Fail(format!(
                "twisted additive law misses x + y - xy: {}",
                w
            )));
        }
        let back = twist_fgl(&multiplicative, &tau.bar()?)?;
        if let Some(w) = first_difference(back.series(), additive.series()) {
            return Ok(Outcome::Fail(format!(
                "inverse twist does not recover x + y: {}",
                w
            )));
        }
        Ok(Outcome::Pass)
    }
}

struct ZetaReconstruct;

impl IdentityCheck for ZetaReconstruct {
    fn id(&self) -> &'static str {
        "zeta-reconstruct"
    }

    fn run(&self, o: &VerifyArgs, params: &mut Params) -> Result<Outcome> {
        let law = law_for(o, "universal", params)?;
        let vectors: Vec<Vec<i64>> = match &o.mults {
            Some(spec) => {
                note(params, "mults", spec.clone());
                vec![parse_i64_list(spec)?]
            }
            None => {
                note(params, "sweep", "all vectors with r <= 3, |n_i| <= 3");
                let mut all = Vec::new();
                for r in 1..=3usize {
                    let mut v = vec![-3i64; r];
                    loop {
                        all.push(v.clone());
                        let mut pos = 0;
                        loop {
                            if pos == r {
                                break;
                            }
                            v[pos] += 1;
                            if v[pos] <= 3 {
                                break;
                            }
                            v[pos] = -3;
                            pos += 1;
                        }
                        if pos == r {
                            break;
                        }
                    }
                }
                all
            }
        };
        note(params, "vectorsChecked", vectors.len());
        for mults in &vectors {
            let dec = law.zeta_decompose(mults)?;
            if let Some(empty) = dec.part(&[]) {
                if !empty.is_zero() {
                    return Ok(Outcome::Fail(format!(
                        "mults {:?}: the empty-support part is nonzero",
                        mults
                    )));
                }
            }
            if let Some(w) = dec.check_supports() {
                return Ok(Outcome::Fail(format!("mults {:?}: {}", mults, w)));
            }
            let rebuilt = dec.reconstruct()?;
            let combination = law.lincomb(mults)?;
            if let Some(w) = first_difference(&rebuilt, &combination) {
                return Ok(Outcome::Fail(format!("mults {:?}: {}", mults, w)));
            }
        }
        Ok(Outcome::Pass)
    }
}

struct ZetaTwist;

impl IdentityCheck for ZetaTwist {
    fn id(&self) -> &'static str {
        "zeta-twist"
    }

    fn run(&self, o: &VerifyArgs, params: &mut Params) -> Result<Outcome> {
        let law = law_for(o, "universal", params)?;
        let spec = o.tau.clone().unwrap_or_else(|| "exp-log".to_string());
        note(params, "tau", spec.clone());
        let tau = parse_tau(&spec, o.degree)?;
        let twisted = twist_fgl(&law, &tau)?;
        let vectors: Vec<Vec<i64>> = match &o.mults {
            Some(spec) => {
                note(params, "mults", spec.clone());
                vec![parse_i64_list(spec)?]
            }
            None => vec![vec![1, 1], vec![1, -1], vec![2, -1], vec![-2, 3]],
        };
        for mults in &vectors {
            if let Some(w) = zeta_twist_defect(&law, &twisted, &tau, mults)? {
                return Ok(Outcome::Fail(format!("mults {:?}: {}", mults, w)));
            }
        }
        Ok(Outcome::Pass)
    }
}

struct Pbform1;

impl IdentityCheck for Pbform1 {
    fn id(&self) -> &'static str {
        "pbform1"
    }

    fn run(&self, o: &VerifyArgs, params: &mut Params) -> Result<Outcome> {
        // Comparing through degree D-1 needs tower classes up to height D,
        // whose top tower lives on a dimension-D space; the theory is
        // built with one degree of headroom so that the deepest
        // pushforward table entry (indices summing to D+1) exists.
        let name = o.law.clone().unwrap_or_else(|| "universal".to_string());
        note(params, "law", name.clone());
        note(params, "comparedThroughDegree", o.degree.saturating_sub(1));
        let cap = o.degree + 1;
        let law = match name.as_str() {
            "universal" => FormalGroupLaw::universal(BaseKind::Rationals, o.degree, cap)?,
            other => build_law(other, o.ring.as_deref(), cap)?,
        };
        let mut towers = Vec::new();
        for height in 0..=o.degree {
            towers.push(tower_class(&law, height)?);
        }
        match pbform1_defect(&law, &towers)? {
            None => Ok(Outcome::Pass),
            Some(w) => Ok(Outcome::Fail(w)),
        }
    }
}

struct Whitney;

impl IdentityCheck for Whitney {
    fn id(&self) -> &'static str {
        "whitney"
    }

    fn run(&self, o: &VerifyArgs, params: &mut Params) -> Result<Outcome> {
        let law = law_for(o, "universal", params)?;
        let dims = dims_for(o, "3,2", params)?;
        let trials = o.trials.unwrap_or(10);
        note(params, "trials", trials);
        note(params, "seed", o.seed);
        let ring = CellularRing::make_base(law, &dims)?;
        let width = ring.gen_count();
        let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
        for trial in 0..trials {
            let rank = rng.gen_range(1usize..=3);
            let lines: Vec<LineClass> =
                (0..rank).map(|_| random_line(&mut rng, width, 2)).collect();
            let total = ring.chern_classes(&lines)?;
            if class_difference(&total[0], &ring.one_class()).is_some() {
                return Ok(Outcome::Fail(format!("trial {}: c_0 is not 1", trial)));
            }
            let mut product = ring.one_class();
            for line in &lines {
                product = ring.mul_class(&product, &ring.euler_class(line)?)?;
            }
            if let Some(w) = class_difference(&total[rank], &product) {
                return Ok(Outcome::Fail(format!(
                    "trial {}: top class is not the product of the roots: {}",
                    trial, w
                )));
            }
            for split in 1..rank {
                let first = ring.chern_classes(&lines[..split])?;
                let second = ring.chern_classes(&lines[split..])?;
                for k in 0..=rank {
                    let mut convolved = ring.zero_class();
                    for i in 0..=k {
                        let j = k - i;
                        if i < first.len() && j < second.len() {
                            convolved = convolved.add(&ring.mul_class(&first[i], &second[j])?);
                        }
                    }
                    if let Some(w) = class_difference(&total[k], &convolved) {
                        return Ok(Outcome::Fail(format!(
                            "trial {}: sum formula fails at c_{} (split {}): {}",
                            trial, k, split, w
                        )));
                    }
                }
            }
        }
        Ok(Outcome::Pass)
    }
}

struct DoublePoint;

impl IdentityCheck for DoublePoint {
    fn id(&self) -> &'static str {
        "double-point"
    }

    fn run(&self, o: &VerifyArgs, params: &mut Params) -> Result<Outcome> {
        let law = perturbed(o, law_for(o, "universal", params)?, params)?;
        match double_point_defect(&law)? {
            None => Ok(Outcome::Pass),
            Some(w) => Ok(Outcome::Fail(w)),
        }
    }
}

struct SectionAdjunction;

impl IdentityCheck for SectionAdjunction {
    fn id(&self) -> &'static str {
        "section-adjunction"
    }

    fn run(&self, o: &VerifyArgs, params: &mut Params) -> Result<Outcome> {
        let law = law_for(o, "universal", params)?;
        let dims = dims_for(o, "2,1", params)?;
        let trials = o.trials.unwrap_or(5);
        note(params, "trials", trials);
        note(params, "seed", o.seed);
        if o.perturb_stage {
            note(params, "perturbStage", true);
        }
        let base = CellularRing::make_base(law, &dims)?;
        let width = base.gen_count();
        let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
        for trial in 0..trials {
            let l1 = random_line(&mut rng, width, 2);
            let l2 = random_line(&mut rng, width, 2);
            let staged = if o.perturb_stage {
                base.adjoin_rank2_tweaked(l1, l2, Some(base.theory().ring().one()))?
            } else {
                base.adjoin_rank2(l1, l2)?
            };
            let h = random_class(&mut rng, &base)?;
            let pulled = staged.pullback(&h)?;
            for k in [1usize, 2] {
                let section = staged.section_pushforward(k)?;
                let product = staged.mul_class(&section, &pulled)?;
                match staged.push_rank2(&product) {
                    Ok(pushed) => {
                        if let Some(w) = class_difference(&pushed, &h) {
                            return Ok(Outcome::Fail(format!(
                                "trial {}, section {}: {}",
                                trial, k, w
                            )));
                        }
                    }
                    Err(AlgebraError::ConventionFault(msg)) => {
                        return Ok(Outcome::Fail(format!(
                            "trial {}, section {}: stage relation incoherent: {}",
                            trial, k, msg
                        )));
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(Outcome::Pass)
    }
}

struct CfRoundtrip;

impl IdentityCheck for CfRoundtrip {
    fn id(&self) -> &'static str {
        "cf-roundtrip"
    }

    fn run(&self, o: &VerifyArgs, params: &mut Params) -> Result<Outcome> {
        let dims = dims_for(o, "2,1", params)?;
        let trials = o.trials.unwrap_or(10);
        note(params, "trials", trials);
        note(params, "seed", o.seed);
        let k = KRing::new(&dims, o.degree)?;
        let width = k.cells().gen_count();
        let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
        let lines: Vec<LineClass> = (0..trials.max(2))
            .map(|_| random_line(&mut rng, width, 3))
            .collect();
        for (idx, line) in lines.iter().enumerate() {
            if let Some(w) = cf_roundtrip_defect(&k, line)? {
                return Ok(Outcome::Fail(format!("line {}: {}", idx, w)));
            }
        }
        for pair in lines.chunks(2) {
            if pair.len() < 2 {
                break;
            }
            let (a, b) = (&pair[0], &pair[1]);
            let tensor = a.tensor(b)?;
            let ch_a = mult_character(k.cells(), &VirtualSplitBundle::of_lines(vec![a.clone()]))?;
            let ch_b = mult_character(k.cells(), &VirtualSplitBundle::of_lines(vec![b.clone()]))?;
            let product = k.cells().mul_class(&ch_a, &ch_b)?;
            let ch_tensor = mult_character(
                k.cells(),
                &VirtualSplitBundle::of_lines(vec![tensor.clone()]),
            )?;
            if let Some(w) = class_difference(&ch_tensor, &product) {
                return Ok(Outcome::Fail(format!(
                    "character is not multiplicative on {:?} x {:?}: {}",
                    a.0, b.0, w
                )));
            }
            let back = eta_k(&k, &product)?;
            if let Some(w) = class_difference(&back, &k.line_unit_class(&tensor)?) {
                return Ok(Outcome::Fail(format!(
                    "round trip misses the tensor line {:?}: {}",
                    tensor.0, w
                )));
            }
        }
        Ok(Outcome::Pass)
    }
}

struct GrrP1Bundle;

impl IdentityCheck for GrrP1Bundle {
    fn id(&self) -> &'static str {
        "grr-p1-bundle"
    }

    fn run(&self, o: &VerifyArgs, params: &mut Params) -> Result<Outcome> {
        let dims = dims_for(o, "2", params)?;
        let trials = o.trials.unwrap_or(10);
        note(params, "trials", trials);
        note(params, "seed", o.seed);
        let k = KRing::new(&dims, o.degree)?;
        let width = k.cells().gen_count();
        let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
        for trial in 0..trials {
            let line = random_line(&mut rng, width, 2);
            if let Some(w) = grr_rank2_defect(&k, &line, &LineClass::trivial(width))? {
                return Ok(Outcome::Fail(format!(
                    "trial {} (L = {:?}): {}",
                    trial, line.0, w
                )));
            }
        }
        Ok(Outcome::Pass)
    }
}

struct EulerTwist;

impl IdentityCheck for EulerTwist {
    fn id(&self) -> &'static str {
        "euler-twist"
    }

    fn run(&self, o: &VerifyArgs, params: &mut Params) -> Result<Outcome> {
        let law = law_for(o, "multiplicative", params)?;
        let dims = dims_for(o, "2,1", params)?;
        let spec = o.tau.clone().unwrap_or_else(|| "exp-log".to_string());
        note(params, "tau", spec.clone());
        let tau = parse_tau(&spec, o.degree)?;
        let trials = o.trials.unwrap_or(5);
        note(params, "trials", trials);
        note(params, "seed", o.seed);
        let base = CellularRing::make_base(law, &dims)?;
        let mut stage_line = vec![0i64; base.gen_count()];
        stage_line[0] = 1;
        let staged =
            base.adjoin_rank2(LineClass(stage_line), LineClass::trivial(base.gen_count()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
        for trial in 0..trials {
            let line = random_line(&mut rng, staged.gen_count(), 2);
            if let Some(w) = twisted_euler_defect(&staged, &tau, &line)? {
                return Ok(Outcome::Fail(format!(
                    "trial {} (L = {:?}): {}",
                    trial, line.0, w
                )));
            }
        }
        Ok(Outcome::Pass)
    }
}

fn catalog() -> Vec<Box<dyn IdentityCheck>> {
    vec![
        Box::new(FglAxioms),
        Box::new(InverseTwist),
        Box::new(AddToMult),
        Box::new(ZetaReconstruct),
        Box::new(ZetaTwist),
        Box::new(Pbform1),
        Box::new(Whitney),
        Box::new(DoublePoint),
        Box::new(SectionAdjunction),
        Box::new(CfRoundtrip),
        Box::new(GrrP1Bundle),
        Box::new(EulerTwist),
    ]
}

pub fn run(args: &VerifyArgs) -> i32 {
    let registry = catalog();
    let Some(check) = registry.iter().find(|c| c.id() == args.id) else {
        let known: Vec<&str> = registry.iter().map(|c| c.id()).collect();
        eprintln!(
            "error[unknown-identity]: {:?} is not in the catalog (known: {})",
            args.id,
            known.join(", ")
        );
        return 2;
    };
    let started = std::time::Instant::now();
    let mut params = Params::new();
    note(&mut params, "degree", args.degree);
    let result = check.run(args, &mut params);
    eprintln!("elapsed-ms: {}", started.elapsed().as_millis());
    match result {
        Ok(outcome) => {
            let mut report = serde_json::Map::new();
            report.insert("identityId".into(), args.id.clone().into());
            report.insert("params".into(), serde_json::Value::Object(params));
            let code = match outcome {
                Outcome::Pass => {
                    report.insert("status".into(), "pass".into());
                    0
                }
                Outcome::Fail(witness) => {
                    report.insert("status".into(), "fail".into());
                    report.insert("witness".into(), witness.into());
                    1
                }
            };
            print_json(&serde_json::Value::Object(report), args.pretty);
            code
        }
        Err(e) => reject(&e),
    }
}
