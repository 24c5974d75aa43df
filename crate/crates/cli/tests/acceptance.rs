//! End-to-end acceptance sweep. Each test exercises one headline
//! verification scenario at its stated truncation degree and prints a
//! single `criterion NN: PASS` line on success (a failed assertion is the
//! FAIL line). The engine-level scenarios run in process against the
//! independent dense-model oracle; the pipeline-level ones drive the
//! `fglc` binary exactly as a user would.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use fgl_core::cellular::{class_difference, tower_class, CellularRing, LineClass};
use fgl_core::fgl::{check_axioms, FormalGroupLaw};
use fgl_core::ktheory::{cf_roundtrip_defect, eta_k, mult_character, KRing, VirtualSplitBundle};
use fgl_core::ring::{BaseKind, Coeff, RingSpec};
use logmodel_oracle as oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sparse interchange form: monomial (1-indexed generator, exponent)
/// pairs mapped to the coefficient as coprime numerator/denominator
/// strings. Both the engine and the oracle can be read into this shape,
/// so equality here is equality of polynomials.
type SparsePoly = BTreeMap<Vec<(u32, u32)>, (String, String)>;

fn engine_poly(c: &Coeff) -> SparsePoly {
    match c {
        Coeff::Poly(p) => p
            .terms()
            .iter()
            .map(|(m, s)| {
                let r = s.as_big();
                (m.clone(), (r.numer().to_string(), r.denom().to_string()))
            })
            .collect(),
        Coeff::Num(_) => panic!("expected a graded coefficient"),
    }
}

fn oracle_poly(p: &oracle::BPoly) -> SparsePoly {
    p.terms_sparse().into_iter().collect()
}

fn fglc(args: &[&str]) -> (serde_json::Value, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_fglc"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).expect("utf-8 stdout");
    let value = serde_json::from_str(stdout.trim())
        .unwrap_or_else(|e| panic!("stdout of {:?} is not JSON ({}): {}", args, e, stdout));
    (
        value,
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
        out.status.code().expect("exit code"),
    )
}

fn expect_pass(args: &[&str]) -> serde_json::Value {
    let (report, stderr, code) = fglc(args);
    assert_eq!(
        report["status"], "pass",
        "{:?} should pass, got {} (stderr: {})",
        args, report, stderr
    );
    assert_eq!(code, 0, "{:?} should exit 0", args);
    report
}

#[test]
fn criterion_01_universal_law_axioms_at_degree_six() {
    let started = Instant::now();
    let law = FormalGroupLaw::universal(BaseKind::Rationals, 6, 6).expect("law builds");
    check_axioms(law.series()).expect("unit, commutativity, and associativity hold");
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 10,
        "axiom check took {:?}, budget is 10 s",
        elapsed
    );
    println!(
        "criterion 01: PASS — universal law at degree 6 satisfies the axioms in {} ms",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_02_universal_coefficients_match_the_independent_model() {
    let law = FormalGroupLaw::universal(BaseKind::Rationals, 6, 6).expect("law builds");
    let mut compared = 0usize;
    for i in 1u32..=5 {
        for j in 1u32..=5 {
            if i + j > 6 {
                continue;
            }
            let engine = law.coeff(i, j);
            let model = oracle::universal_coeff(6, i as usize, j as usize);
            assert_eq!(
                engine_poly(&engine),
                oracle_poly(&model),
                "coefficient at ({}, {}) disagrees with the dense model",
                i,
                j
            );
            assert!(
                engine.is_homogeneous(i + j - 1),
                "coefficient at ({}, {}) is not homogeneous of degree {}",
                i,
                j,
                i + j - 1
            );
            assert!(
                model.is_homogeneous(i + j - 1),
                "dense model at ({}, {}) is not homogeneous — oracle defect",
                i,
                j
            );
            compared += 1;
        }
    }
    assert_eq!(compared, 15, "all index pairs with i+j <= 6 were covered");
    let mut doubled_first_gen = SparsePoly::new();
    doubled_first_gen.insert(vec![(1, 1)], ("2".into(), "1".into()));
    assert_eq!(
        engine_poly(&law.coeff(1, 1)),
        doubled_first_gen,
        "the x*y coefficient must be twice the first generator"
    );
    println!(
        "criterion 02: PASS — all {} universal coefficients through total degree 6 match the dense model and are homogeneous",
        compared
    );
}

#[test]
fn criterion_03_inverse_twist_exact_at_degree_eight_for_twenty_random_twists() {
    let report = expect_pass(&[
        "verify",
        "inverse-twist",
        "--degree",
        "8",
        "--trials",
        "20",
        "--seed",
        "7",
    ]);
    assert_eq!(report["params"]["trials"], 20);
    println!("criterion 03: PASS — twisting by the reversed sequence inverts twisting, exactly through degree 8, for 20 random graded twists");
}

#[test]
fn criterion_04_additive_to_multiplicative_twist_exact_at_degree_eight() {
    expect_pass(&["verify", "add-to-mult", "--degree", "8"]);
    println!("criterion 04: PASS — the exp-log twist carries the additive law to the multiplicative one (and back) exactly through degree 8");
}

#[test]
fn criterion_05_zeta_reconstruction_sweeps_all_small_multiplicity_vectors() {
    let report = expect_pass(&["verify", "zeta-reconstruct", "--degree", "6"]);
    assert_eq!(
        report["params"]["vectorsChecked"], 399,
        "the sweep covers every multiplicity vector of rank <= 3 with entries in -3..=3"
    );
    println!("criterion 05: PASS — zeta parts reassemble every linear combination of rank <= 3 with multiplicities in -3..=3 at degree 6, with vanishing empty part");
}

#[test]
fn criterion_06_twisted_zeta_parts_for_rank_two_vectors() {
    expect_pass(&["verify", "zeta-twist", "--degree", "6"]);
    println!("criterion 06: PASS — zeta decomposition commutes with the exp-log twist of the universal law for rank-2 vectors at degree 6");
}

#[test]
fn criterion_07_projective_bundle_formula_through_degree_five() {
    let started = Instant::now();
    let report = expect_pass(&["verify", "pbform1", "--degree", "6"]);
    let elapsed = started.elapsed();
    assert_eq!(report["params"]["comparedThroughDegree"], 5);
    assert!(
        elapsed.as_secs() < 60,
        "projective-tower check took {:?}, budget is 60 s",
        elapsed
    );
    println!(
        "criterion 07: PASS — tower classes satisfy the bundle formula through degree 5 for the universal law in {} ms",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_08_tower_classes_specialize_to_the_classical_values() {
    let ring = RingSpec::Rationals;
    let mult = FormalGroupLaw::multiplicative(ring.clone(), 5).expect("law builds");
    for h in 0..=4 {
        assert!(
            tower_class(&mult, h).expect("class computes").is_one(),
            "multiplicative tower class at height {} should be 1",
            h
        );
    }
    let add = FormalGroupLaw::additive(ring, 5).expect("law builds");
    assert!(
        tower_class(&add, 0).expect("class computes").is_one(),
        "additive tower class at height 0 should be 1"
    );
    for h in 1..=4 {
        assert!(
            tower_class(&add, h).expect("class computes").is_zero(),
            "additive tower class at height {} should vanish",
            h
        );
    }

    // Height one for the universal law is minus twice the first generator,
    // i.e. twice the x^2 coefficient of the reversed logarithm — checked
    // against the dense model's reversion.
    let universal = FormalGroupLaw::universal(BaseKind::Rationals, 4, 5).expect("law builds");
    let beta_1 = tower_class(&universal, 1).expect("class computes");
    let from_model = oracle::lambda_inv(5)[2].scale(&oracle::rat(2, 1));
    assert_eq!(
        engine_poly(&beta_1),
        oracle_poly(&from_model),
        "height-1 universal tower class disagrees with the reversed dense logarithm"
    );
    let mut expected = SparsePoly::new();
    expected.insert(vec![(1, 1)], ("-2".into(), "1".into()));
    assert_eq!(
        engine_poly(&beta_1),
        expected,
        "height-1 universal tower class should be -2 times the first generator"
    );
    println!("criterion 08: PASS — tower classes are all 1 multiplicatively, vanish additively above height 0, and height 1 matches the reversed logarithm universally");
}

#[test]
fn criterion_09_whitney_sum_for_fifty_random_split_bundles_in_three_theories() {
    let cap = 5u32;
    let laws: Vec<(&str, FormalGroupLaw)> = vec![
        (
            "additive",
            FormalGroupLaw::additive(RingSpec::Rationals, cap).expect("law"),
        ),
        (
            "multiplicative",
            FormalGroupLaw::multiplicative(RingSpec::Rationals, cap).expect("law"),
        ),
        (
            "universal",
            FormalGroupLaw::universal(BaseKind::Rationals, cap, cap).expect("law"),
        ),
    ];
    // Bases range over products of projective spaces up to the 3x2 one.
    let bases: [&[i64]; 5] = [&[1], &[2], &[3], &[2, 1], &[3, 2]];
    for (name, law) in &laws {
        let rings: Vec<CellularRing> = bases
            .iter()
            .map(|dims| CellularRing::make_base(law.clone(), dims).expect("base ring builds"))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..50 {
            let ring = &rings[trial % rings.len()];
            let width = ring.gen_count();
            let rank = rng.gen_range(1usize..=3);
            let lines: Vec<LineClass> = (0..rank)
                .map(|_| LineClass((0..width).map(|_| rng.gen_range(-2i64..=2)).collect()))
                .collect();
            let total = ring.chern_classes(&lines).expect("classes compute");
            assert!(
                class_difference(&total[0], &ring.one_class()).is_none(),
                "{} trial {}: c_0 is not 1",
                name,
                trial
            );
            let mut product = ring.one_class();
            for line in &lines {
                let e = ring.euler_class(line).expect("euler class computes");
                product = ring.mul_class(&product, &e).expect("product computes");
            }
            assert!(
                class_difference(&total[rank], &product).is_none(),
                "{} trial {}: the top class is not the product of the roots",
                name,
                trial
            );
            for split in 1..rank {
                let first = ring
                    .chern_classes(&lines[..split])
                    .expect("classes compute");
                let second = ring
                    .chern_classes(&lines[split..])
                    .expect("classes compute");
                for k in 0..=rank {
                    let mut convolved = ring.zero_class();
                    for i in 0..=k {
                        let j = k - i;
                        if i < first.len() && j < second.len() {
                            let term = ring
                                .mul_class(&first[i], &second[j])
                                .expect("term computes");
                            convolved = convolved.add(&term);
                        }
                    }
                    assert!(
                        class_difference(&total[k], &convolved).is_none(),
                        "{} trial {}: the sum formula fails at c_{} for split {}",
                        name,
                        trial,
                        k,
                        split
                    );
                }
            }
        }
    }
    println!("criterion 09: PASS — total classes of 50 random split bundles of rank <= 3 obey the sum formula in all three theories at degree 5");
}

#[test]
fn criterion_10_conner_floyd_round_trip_on_ten_random_lines() {
    let k = KRing::new(&[2, 1], 6).expect("ring builds");
    let width = k.cells().gen_count();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let lines: Vec<LineClass> = (0..10)
        .map(|_| LineClass((0..width).map(|_| rng.gen_range(-3i64..=3)).collect()))
        .collect();
    for (idx, line) in lines.iter().enumerate() {
        assert_eq!(
            cf_roundtrip_defect(&k, line).expect("round trip computes"),
            None,
            "round trip misses line {} ({:?})",
            idx,
            line.0
        );
    }
    for pair in lines.chunks(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let tensor = a.tensor(b).expect("tensor computes");
        let ch = |l: &LineClass| {
            mult_character(k.cells(), &VirtualSplitBundle::of_lines(vec![l.clone()]))
                .expect("character computes")
        };
        let product = k
            .cells()
            .mul_class(&ch(a), &ch(b))
            .expect("product computes");
        assert!(
            class_difference(&ch(&tensor), &product).is_none(),
            "character is not multiplicative on {:?} x {:?}",
            a.0,
            b.0
        );
        let back = eta_k(&k, &product).expect("return map computes");
        let direct = k.line_unit_class(&tensor).expect("class computes");
        assert!(
            class_difference(&back, &direct).is_none(),
            "round trip misses the tensor line {:?}",
            tensor.0
        );
    }
    println!("criterion 10: PASS — the character and its inverse round-trip 10 random lines and their pairwise products on the 2x1 base at degree 6");
}

#[test]
fn criterion_11_riemann_roch_for_ten_random_projective_line_bundles() {
    let report = expect_pass(&["verify", "grr-p1-bundle", "--degree", "6"]);
    assert_eq!(report["params"]["trials"], 10);
    println!("criterion 11: PASS — pushing a line class forward commutes with the character, up to the unit factor, for 10 random rank-2 stages at degree 6");
}

#[test]
fn criterion_12_double_point_relation_for_the_universal_law() {
    expect_pass(&[
        "verify",
        "double-point",
        "--law",
        "universal",
        "--degree",
        "6",
    ]);
    println!(
        "criterion 12: PASS — the universal law equals its double-point normal form at degree 6"
    );
}

#[test]
fn criterion_13_negative_controls_fail_with_witnesses() {
    let controls: Vec<(&str, Vec<&str>)> = vec![
        (
            "perturbed law breaks the axioms",
            vec!["verify", "fgl-axioms", "--perturb-f", "1,2"],
        ),
        (
            "perturbed law breaks the double-point form",
            vec!["verify", "double-point", "--perturb-f", "2,1"],
        ),
        (
            "perturbed twist breaks the additive-to-multiplicative bridge",
            vec!["verify", "add-to-mult", "--perturb-tau", "1"],
        ),
        (
            "perturbed reversal breaks the inverse twist",
            vec![
                "verify",
                "inverse-twist",
                "--tau",
                "exp-log",
                "--perturb-bar",
                "2",
            ],
        ),
        (
            "tweaked stage relation breaks the section identity",
            vec!["verify", "section-adjunction", "--perturb-stage"],
        ),
    ];
    for (what, args) in &controls {
        let (report, stderr, code) = fglc(args);
        assert_eq!(
            code, 1,
            "{}: {:?} should exit 1 (stderr: {})",
            what, args, stderr
        );
        assert_eq!(report["status"], "fail", "{}: report should say fail", what);
        let witness = report["witness"]
            .as_str()
            .unwrap_or_else(|| panic!("{}: a failure must carry a witness", what));
        assert!(
            !witness.is_empty(),
            "{}: the witness must be concrete",
            what
        );
    }
    println!(
        "criterion 13: PASS — all {} planted defects are detected and reported with witnesses",
        controls.len()
    );
}
