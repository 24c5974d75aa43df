//! Round-trips and byte-level determinism of the JSON encodings. Sparse
//! terms live in ordered maps, so independently recomputed values must
//! serialize to identical bytes — downstream tooling diffs the output.

use fgl_core::fgl::FormalGroupLaw;
use fgl_core::ring::{BaseKind, Coeff, RingSpec};
use fgl_core::scalar::Scalar;
use fgl_core::series::MultiSeries;
use fgl_core::twist::TwistSequence;

fn graded(bound: u32) -> RingSpec {
    RingSpec::Graded {
        base: BaseKind::Rationals,
        bound,
    }
}

#[test]
fn series_round_trip_over_every_ring_kind() {
    let cases = vec![
        MultiSeries::from_terms(
            RingSpec::Integers,
            2,
            5,
            vec![
                (vec![1, 0], Coeff::Num(Scalar::from_int(3))),
                (vec![2, 2], Coeff::Num(Scalar::from_int(-7))),
            ],
        )
        .unwrap(),
        MultiSeries::from_terms(
            RingSpec::Rationals,
            1,
            6,
            vec![
                (vec![1], Coeff::Num(Scalar::new(1, 2).unwrap())),
                (vec![4], Coeff::Num(Scalar::new(-5, 3).unwrap())),
            ],
        )
        .unwrap(),
        FormalGroupLaw::universal(BaseKind::Rationals, 3, 4)
            .unwrap()
            .series()
            .clone(),
    ];
    for f in cases {
        let v = f.to_json();
        let back = MultiSeries::from_json(f.ring().clone(), &v).unwrap();
        assert_eq!(back, f, "series must survive the JSON round trip");
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            serde_json::to_string(&back.to_json()).unwrap(),
            "re-serialization must be byte-identical"
        );
    }
}

#[test]
fn law_serialization_is_reproducible() {
    let a = FormalGroupLaw::universal(BaseKind::Rationals, 4, 5).unwrap();
    let b = FormalGroupLaw::universal(BaseKind::Rationals, 4, 5).unwrap();
    let sa = serde_json::to_string(&a.to_json()).unwrap();
    let sb = serde_json::to_string(&b.to_json()).unwrap();
    assert_eq!(sa, sb, "independent constructions serialize identically");

    let back = FormalGroupLaw::from_json(&a.to_json()).unwrap();
    assert_eq!(back, a, "law must survive the JSON round trip");
    assert_eq!(back.kind(), a.kind(), "kind tag must be preserved");
}

#[test]
fn twist_and_decomposition_shapes_are_stable() {
    let tau = TwistSequence::exp_log(5).unwrap();
    let v = tau.to_json();
    assert_eq!(v["cap"], 5);
    assert_eq!(
        v["coeffs"].as_array().map(|a| a.len()),
        Some(5),
        "one coefficient per degree below the cap"
    );

    let law = FormalGroupLaw::multiplicative(RingSpec::Rationals, 5).unwrap();
    let dec = law.zeta_decompose(&[2, -1]).unwrap();
    let dv = dec.to_json();
    assert_eq!(dv["mults"], serde_json::json!([2, -1]));
    assert_eq!(
        dv["parts"].as_array().map(|a| a.len()),
        Some(4),
        "two multiplicities give four subsets"
    );
    let again = serde_json::to_string(&law.zeta_decompose(&[2, -1]).unwrap().to_json()).unwrap();
    assert_eq!(
        serde_json::to_string(&dv).unwrap(),
        again,
        "decomposition bytes are reproducible"
    );
}

#[test]
fn graded_coefficients_round_trip_inside_series() {
    let ring = graded(3);
    let law = FormalGroupLaw::universal(BaseKind::Rationals, 3, 4).unwrap();
    assert_eq!(
        law.ring(),
        &ring,
        "universal law lives over the graded ring"
    );
    let inv = law.inverse_series().clone();
    let v = inv.to_json();
    let back = MultiSeries::from_json(ring, &v).unwrap();
    assert_eq!(back, inv, "polynomial coefficients survive the round trip");
}
