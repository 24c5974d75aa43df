//! Randomized properties of the series engine, the laws, and the cellular
//! rings. Every check is an exact equality of canonical forms — there are
//! no tolerances anywhere.

use fgl_core::cellular::{class_difference, twisted_euler_defect, CellularRing, LineClass};
use fgl_core::fgl::{check_axioms, FormalGroupLaw};
use fgl_core::ring::{BaseKind, Coeff, RingSpec};
use fgl_core::scalar::Scalar;
use fgl_core::series::MultiSeries;
use fgl_core::twist::{twist_fgl, TwistSequence};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| Scalar::new(n, d).expect("nonzero denominator"))
}

fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
    scalar().prop_map(|s| if s.is_zero() { Scalar::one() } else { s })
}

/// A random series over the rationals with the given arity and cap.
fn series(vars: usize, cap: u32) -> impl Strategy<Value = MultiSeries> {
    let term = (
        proptest::collection::vec(0u32..=cap, vars)
            .prop_filter("within cap", move |e| e.iter().sum::<u32>() <= cap),
        scalar(),
    );
    proptest::collection::vec(term, 0..6).prop_map(move |terms| {
        MultiSeries::from_terms(
            RingSpec::Rationals,
            vars,
            cap,
            terms.into_iter().map(|(e, s)| (e, Coeff::Num(s))).collect(),
        )
        .expect("valid random series")
    })
}

/// A reversible one-variable series: zero constant term, unit linear term.
fn reversible(cap: u32) -> impl Strategy<Value = MultiSeries> {
    (nonzero_scalar(), series(1, cap)).prop_map(move |(c1, tail)| {
        let mut terms: Vec<(Vec<u32>, Coeff)> = tail
            .terms()
            .iter()
            .filter(|(e, _)| e[0] >= 2)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        terms.push((vec![1], Coeff::Num(c1)));
        MultiSeries::from_terms(RingSpec::Rationals, 1, cap, terms).expect("reversible series")
    })
}

/// A series with a unit constant term.
fn unit_series(vars: usize, cap: u32) -> impl Strategy<Value = MultiSeries> {
    (nonzero_scalar(), series(vars, cap)).prop_map(move |(c0, tail)| {
        let mut terms: Vec<(Vec<u32>, Coeff)> = tail
            .terms()
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() >= 1)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        terms.push((vec![0; vars], Coeff::Num(c0)));
        MultiSeries::from_terms(RingSpec::Rationals, vars, cap, terms).expect("unit series")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn addition_is_associative(f in series(2, 8), g in series(2, 8), h in series(2, 8)) {
        let lhs = f.add(&g).unwrap().add(&h).unwrap();
        let rhs = f.add(&g.add(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplication_commutes(f in series(2, 8), g in series(2, 8)) {
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
    }

    #[test]
    fn multiplication_distributes(f in series(2, 7), g in series(2, 7), h in series(2, 7)) {
        let lhs = f.mul(&g.add(&h).unwrap()).unwrap();
        let rhs = f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn stored_coefficients_stay_nonzero(f in series(3, 6), g in series(3, 6)) {
        for result in [f.add(&g).unwrap(), f.mul(&g).unwrap(), f.sub(&g).unwrap()] {
            for (exps, c) in result.terms() {
                prop_assert!(!c.is_zero(), "zero coefficient stored at {:?}", exps);
            }
        }
    }

    #[test]
    fn reversion_is_an_involution(f in reversible(8)) {
        prop_assert_eq!(f.reverse().unwrap().reverse().unwrap(), f);
    }

    #[test]
    fn reversion_composes_to_the_identity(f in reversible(8)) {
        let x = MultiSeries::var(RingSpec::Rationals, 1, 8, 0).unwrap();
        let composed = f.substitute(std::slice::from_ref(&f.reverse().unwrap())).unwrap();
        prop_assert_eq!(composed, x);
    }

    #[test]
    fn division_undoes_multiplication(f in series(2, 7), g in unit_series(2, 7)) {
        let recovered = f.mul(&g).unwrap().divide_by_unit(&g).unwrap();
        prop_assert_eq!(recovered, f);
    }
}

fn universal_cap4() -> &'static FormalGroupLaw {
    use std::sync::OnceLock;
    static LAW: OnceLock<FormalGroupLaw> = OnceLock::new();
    LAW.get_or_init(|| FormalGroupLaw::universal(BaseKind::Rationals, 3, 4).expect("universal"))
}

fn universal_cap5() -> &'static FormalGroupLaw {
    use std::sync::OnceLock;
    static LAW: OnceLock<FormalGroupLaw> = OnceLock::new();
    LAW.get_or_init(|| FormalGroupLaw::universal(BaseKind::Rationals, 4, 5).expect("universal"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn specialized_laws_satisfy_the_axioms(
        b1 in scalar(), b2 in scalar(), b3 in scalar()
    ) {
        let assignment: std::collections::BTreeMap<u32, Coeff> =
            [(1u32, b1), (2, b2), (3, b3)]
                .into_iter()
                .map(|(k, s)| (k, Coeff::Num(s)))
                .collect();
        let law = universal_cap4()
            .specialize(&assignment, &RingSpec::Rationals)
            .expect("specialization");
        prop_assert!(check_axioms(law.series()).is_ok());
    }

    #[test]
    fn twisted_laws_satisfy_the_axioms(
        t1 in scalar(), t2 in scalar(), t3 in scalar(), t4 in scalar()
    ) {
        let tau = TwistSequence::from_scalars(
            RingSpec::Rationals,
            5,
            vec![Scalar::one(), t1, t2, t3, t4],
        )
        .expect("twist sequence");
        let base = FormalGroupLaw::multiplicative(RingSpec::Rationals, 5).unwrap();
        let twisted = twist_fgl(&base, &tau).expect("twist");
        prop_assert!(check_axioms(twisted.series()).is_ok());
    }

    #[test]
    fn zeta_reconstruction_matches_the_combination(
        mults in proptest::collection::vec(-3i64..=3, 1..=3)
    ) {
        let law = FormalGroupLaw::multiplicative(RingSpec::Rationals, 6).unwrap();
        let dec = law.zeta_decompose(&mults).unwrap();
        prop_assert!(dec.check_supports().is_none());
        let reconstructed = dec.reconstruct().unwrap();
        let expected = law.lincomb(&mults).unwrap();
        prop_assert_eq!(reconstructed, expected);
        let empty = dec.part(&[]).expect("empty subset present");
        prop_assert!(empty.is_zero(), "the empty-support part must vanish");
    }
}

#[test]
fn n_series_addition_is_exhaustive_for_small_multiplicities() {
    let laws = [
        FormalGroupLaw::additive(RingSpec::Rationals, 6).unwrap(),
        FormalGroupLaw::multiplicative(RingSpec::Rationals, 6).unwrap(),
        universal_cap4().clone(),
    ];
    for law in &laws {
        for m in -4i64..=4 {
            for n in -4i64..=4 {
                let lhs = law.n_series(m + n).unwrap();
                let fm = law.n_series(m).unwrap();
                let fn_ = law.n_series(n).unwrap();
                let rhs = law.series().substitute(&[fm, fn_]).unwrap();
                assert_eq!(
                    lhs,
                    rhs,
                    "n-series additivity fails for m={}, n={} under {:?}",
                    m,
                    n,
                    law.kind()
                );
            }
        }
    }
}

#[test]
fn partial_inverse_substitution_recovers_the_first_variable() {
    // G(x, y) := F(x, i(y)) satisfies G(F(x, y), y) = x.
    let laws = [
        FormalGroupLaw::additive(RingSpec::Rationals, 8).unwrap(),
        FormalGroupLaw::multiplicative(RingSpec::Rationals, 8).unwrap(),
        universal_cap5().clone(),
    ];
    for law in &laws {
        let cap = law.cap();
        let ring = law.ring().clone();
        let x2 = MultiSeries::var(ring.clone(), 2, cap, 0).unwrap();
        let y2 = MultiSeries::var(ring.clone(), 2, cap, 1).unwrap();
        let inv_in_y = law.inverse_series().map_vars(2, &[1]).unwrap();
        let g = law.series().substitute(&[x2.clone(), inv_in_y]).unwrap();
        let composed = g.substitute(&[law.series().clone(), y2]).unwrap();
        assert_eq!(
            composed,
            x2,
            "one-sided untwist fails under {:?}",
            law.kind()
        );
    }
}

fn base_ring(law: FormalGroupLaw, dims: &[i64]) -> CellularRing {
    CellularRing::make_base(law, dims).expect("base ring")
}

fn random_base_class(
    ring: &CellularRing,
    seeds: &[(usize, u32, i64)],
) -> fgl_core::cellular::CohClass {
    let mut acc = ring.zero_class();
    for &(gen, exp, num) in seeds {
        let g = gen % ring.gen_count();
        let mut cls = ring.gen_class(g).expect("generator");
        cls = ring.pow_class(&cls, exp % 3).expect("power");
        acc = acc.add(&cls.scale(&ring.theory().ring().from_int(num)));
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stage_relations_vanish_on_their_own_roots(
        d1 in -2i64..=2, d2 in -2i64..=2, e1 in -2i64..=2, e2 in -2i64..=2
    ) {
        let law = FormalGroupLaw::multiplicative(RingSpec::Rationals, 5).unwrap();
        let ring = base_ring(law, &[2, 1]);
        let l1 = LineClass(vec![d1, d2]);
        let l2 = LineClass(vec![e1, e2]);
        let r1 = ring.euler_class(&l1).unwrap();
        let r2 = ring.euler_class(&l2).unwrap();
        let c1 = r1.add(&r2);
        let c2 = ring.mul_class(&r1, &r2).unwrap();
        for rho in [&r1, &r2] {
            let value = ring
                .mul_class(rho, rho)
                .unwrap()
                .sub(&ring.mul_class(&c1, rho).unwrap())
                .add(&c2);
            prop_assert!(value.is_zero(), "relation does not vanish at its root");
        }
    }

    #[test]
    fn section_adjunction_holds_for_random_base_classes(
        d1 in -2i64..=2, d2 in -2i64..=2,
        seeds in proptest::collection::vec((0usize..2, 0u32..3, -3i64..=3), 1..3)
    ) {
        let law = universal_cap4().clone();
        let base = base_ring(law, &[2, 1]);
        let staged = base
            .adjoin_rank2(LineClass(vec![d1, d2]), LineClass(vec![0, 0]))
            .unwrap();
        let h = random_base_class(&base, &seeds);
        let pulled = staged.pullback(&h).unwrap();
        for k in [1usize, 2] {
            let s = staged.section_pushforward(k).unwrap();
            let product = staged.mul_class(&s, &pulled).unwrap();
            let pushed = staged.push_rank2(&product).unwrap();
            prop_assert!(
                class_difference(&pushed, &h).is_none(),
                "adjunction fails for section {}",
                k
            );
        }
    }

    #[test]
    fn projection_formula_holds_for_random_classes(
        d1 in -2i64..=2, d2 in -2i64..=2,
        seeds in proptest::collection::vec((0usize..2, 0u32..3, -3i64..=3), 1..3),
        alpha_seeds in proptest::collection::vec((0usize..3, 0u32..2, -3i64..=3), 1..3)
    ) {
        let law = FormalGroupLaw::multiplicative(RingSpec::Rationals, 4).unwrap();
        let base = base_ring(law, &[2, 1]);
        let staged = base
            .adjoin_rank2(LineClass(vec![d1, d2]), LineClass(vec![0, 0]))
            .unwrap();
        let h = random_base_class(&base, &seeds);
        let alpha = random_base_class(&staged, &alpha_seeds);
        let pulled = staged.pullback(&h).unwrap();
        let lhs = staged
            .push_rank2(&staged.mul_class(&pulled, &alpha).unwrap())
            .unwrap();
        let rhs = base
            .mul_class(&h, &staged.push_rank2(&alpha).unwrap())
            .unwrap();
        prop_assert!(class_difference(&lhs, &rhs).is_none(), "projection formula fails");
    }

    #[test]
    fn twisted_euler_classes_factor_through_lambda(
        d1 in -2i64..=2, d2 in -2i64..=2, s in -2i64..=2,
        t1 in scalar(), t2 in scalar(), t3 in scalar()
    ) {
        let law = FormalGroupLaw::multiplicative(RingSpec::Rationals, 4).unwrap();
        let tau = TwistSequence::from_scalars(
            RingSpec::Rationals,
            4,
            vec![Scalar::one(), t1, t2, t3],
        )
        .unwrap();
        let plain = base_ring(law, &[2, 1]);
        let staged = plain
            .adjoin_rank2(LineClass(vec![1, 0]), LineClass(vec![0, 0]))
            .unwrap();
        let defect =
            twisted_euler_defect(&staged, &tau, &LineClass(vec![d1, d2, s])).unwrap();
        prop_assert!(
            defect.is_none(),
            "twisted Euler class is not lambda of the plain one: {:?}",
            defect
        );
    }

    #[test]
    fn euler_of_tensor_products_respects_the_double_point_shape(
        d1 in -2i64..=2, d2 in -2i64..=2, e1 in -2i64..=2, e2 in -2i64..=2
    ) {
        // e(L1 (x) L2) = e(L1) + e(L2) - e(L1) e(L2) Q(e(L1), e(L2)) with
        // Q the law's double-index remainder.
        let law = universal_cap5().clone();
        let ring = base_ring(law.clone(), &[2, 2]);
        let l1 = LineClass(vec![d1, d2]);
        let l2 = LineClass(vec![e1, e2]);
        let a = ring.euler_class(&l1).unwrap();
        let b = ring.euler_class(&l2).unwrap();
        let tensor = ring.euler_class(&l1.tensor(&l2).unwrap()).unwrap();

        let mut q = MultiSeries::zero(law.ring().clone(), 2, law.cap()).unwrap();
        for (&(i, j), c) in law.coeff_table() {
            let term = MultiSeries::from_terms(
                law.ring().clone(),
                2,
                law.cap(),
                vec![(vec![i - 1, j - 1], c.clone())],
            )
            .unwrap();
            q = q.add(&term).unwrap();
        }
        q = q.neg();
        let q_at = ring.eval_series(&q, &[a.clone(), b.clone()]).unwrap();
        let correction = ring
            .mul_class(&ring.mul_class(&a, &b).unwrap(), &q_at)
            .unwrap();
        let rhs = a.add(&b).sub(&correction);
        prop_assert!(
            class_difference(&tensor, &rhs).is_none(),
            "double-point shape fails"
        );
    }
}
