//! Transporter systems, from shipped fixtures to quotients and extensions.

use fusionkit::acceptance::corrupted_sigma4;
use fusionkit::catalog;
use fusionkit::transporter::build::{self, OCTAHEDRAL_FIXTURE, SIGMA4_FIXTURE};
use fusionkit::transporter::extension::{quotient_extension, validate_extension};
use fusionkit::transporter::quotient::{self, fusion_isomorphism, quotient_transporter, system_for_name};
use fusionkit::transporter::{restrict_objects, validate_transporter, Transporter, TransporterData, A2};
use fusionkit::{Budget, Error};

fn budget() -> Budget {
    Budget::default()
}

fn load(name: &str) -> Transporter {
    build::load_fixture(name, &budget()).unwrap()
}

#[test]
fn fixtures_match_their_builders() {
    let b = budget();
    assert_eq!(build::sigma4_linking(&b).unwrap().to_json(), build::fixture_text(SIGMA4_FIXTURE).unwrap());
    assert_eq!(build::octahedral_linking(&b).unwrap().to_json(), build::fixture_text(OCTAHEDRAL_FIXTURE).unwrap());
}

#[test]
fn fixtures_validate() {
    for name in [SIGMA4_FIXTURE, OCTAHEDRAL_FIXTURE] {
        let report = validate_transporter(&load(name));
        assert!(report.passed(), "{name}: {:?}", report.first_failure());
    }
}

/// `|Mor(P, Q)| = |N_G(P, Q)|`, counted directly in the finite group.
#[test]
fn sigma4_morphism_sets_are_transporter_sets() {
    let t = load(SIGMA4_FIXTURE);
    let f = t.fusion();
    let amb = f.ambient();
    let sizes = t.mor_sizes();
    for (i, &p) in t.objects().iter().enumerate() {
        for (j, &q) in t.objects().iter().enumerate() {
            // Each Hom_F(P, Q) element has |C_G(P)| = |Z(P)| preimages for centric P.
            let expected = f.hom_count(p, q) * amb.sub_order(amb.center(p));
            assert_eq!(sizes[i][j], expected);
        }
    }
    let v = t.objects().iter().position(|&p| amb.sub_order(p) == 4 && f.aut_order(p) == 6).unwrap();
    assert_eq!(sizes[v][v], 24);
}

#[test]
fn octahedral_automorphism_group_of_w_has_order_48() {
    let t = load(OCTAHEDRAL_FIXTURE);
    let amb = t.fusion().ambient();
    let w = t.objects().iter().position(|&p| amb.sub_order(p) == 8 && t.fusion().aut_order(p) == 24).unwrap();
    assert_eq!(t.mor(w, w).len(), 48);
}

#[test]
fn restriction_to_v_and_s_validates() {
    let t = load(SIGMA4_FIXTURE);
    let amb = t.fusion().ambient().clone();
    let keep: Vec<_> =
        t.objects().iter().copied().filter(|&p| t.fusion().aut_order(p) == 6 || p == amb.whole()).collect();
    assert_eq!(keep.len(), 2);
    let r = restrict_objects(&t, &keep).unwrap();
    assert_eq!(r.objects().len(), 2);
    let report = validate_transporter(&r);
    assert!(report.axiom("A2").unwrap().pass);
    assert!(report.axiom("B").unwrap().pass);
}

#[test]
fn quotient_by_the_center_halves_morphism_sets() {
    let t = load(OCTAHEDRAL_FIXTURE);
    let amb = t.fusion().ambient().clone();
    let a = amb.generated(&[amb.named("t1").unwrap()]);
    let q = quotient_transporter(&t, a, &budget()).unwrap();
    assert!(validate_transporter(&q).passed());
    let (big, small) = (t.mor_sizes(), q.mor_sizes());
    for i in 0..big.len() {
        for j in 0..big.len() {
            assert_eq!(big[i][j], 2 * small[i][j]);
        }
    }
    let so3 = catalog::build("so3:l=2", &budget()).unwrap();
    let iso = fusion_isomorphism(q.fusion(), &so3.system, &budget()).unwrap().expect("isomorphic");
    assert!(quotient::verify_fusion_isomorphism(q.fusion(), &so3.system, &iso.map));
}

#[test]
fn quotient_by_the_trivial_subgroup_keeps_sizes() {
    let t = load(SIGMA4_FIXTURE);
    let amb = t.fusion().ambient().clone();
    let q = quotient_transporter(&t, amb.trivial(), &budget()).unwrap();
    assert_eq!(q.mor_sizes(), t.mor_sizes());
    assert!(validate_transporter(&q).passed());
}

#[test]
fn quotient_by_a_non_normal_subgroup_is_rejected() {
    let t = load(SIGMA4_FIXTURE);
    let amb = t.fusion().ambient().clone();
    let a = amb.generated(&[amb.named("x").unwrap()]);
    assert!(matches!(quotient_transporter(&t, a, &budget()), Err(Error::Precondition(_))));
}

#[test]
fn extension_by_the_center_validates() {
    let t = load(OCTAHEDRAL_FIXTURE);
    let amb = t.fusion().ambient().clone();
    let a = amb.generated(&[amb.named("t1").unwrap()]);
    let ext = quotient_extension(&t, a, &budget()).unwrap();
    let report = validate_extension(&ext, &budget()).unwrap();
    assert!(report.passed(), "{:?}", report.first_failure());
    let tags: Vec<&str> = report.axioms.iter().map(|x| x.tag.as_str()).collect();
    assert_eq!(tags, ["functor", "i", "ii", "iii", "pullback", "round_trip", "admissible"]);
}

#[test]
fn extension_with_a_broken_functor_fails() {
    let t = load(OCTAHEDRAL_FIXTURE);
    let amb = t.fusion().ambient().clone();
    let a = amb.generated(&[amb.named("t1").unwrap()]);
    let mut ext = quotient_extension(&t, a, &budget()).unwrap();
    let other = (0..ext.tau.len()).find(|&l| ext.tau[l] != ext.tau[0]).unwrap();
    ext.tau[0] = ext.tau[other];
    assert!(!validate_extension(&ext, &budget()).unwrap().passed());
}

#[test]
fn corrupted_fixture_fails_a2() {
    let data = corrupted_sigma4(&budget()).unwrap();
    let fusion = system_for_name(&data.ambient, &budget()).unwrap();
    let t = Transporter::new(fusion, data).unwrap();
    let report = validate_transporter(&t);
    assert!(!report.axiom(A2).unwrap().pass);
}

#[test]
fn self_and_oracle_transporters_validate() {
    let data = build::self_transporter("so2:p=3,l=2", &budget()).unwrap();
    let t = Transporter::from_json(&data.to_json(), &budget()).unwrap();
    assert!(validate_transporter(&t).passed());
    for name in ["oracle:sym4,p=2", "oracle:sl23,p=3"] {
        let data = build::oracle_transporter(name, &budget()).unwrap();
        let t = Transporter::from_json(&data.to_json(), &budget()).unwrap();
        assert!(validate_transporter(&t).passed(), "{name}");
    }
}

/// The transporter category of S itself only realizes `F_S(S)`, which is smaller than so3.
#[test]
fn self_transporter_of_a_non_inner_system_fails_a1() {
    let data = build::self_transporter("so3:l=2", &budget()).unwrap();
    let t = Transporter::from_json(&data.to_json(), &budget()).unwrap();
    let report = validate_transporter(&t);
    assert_eq!(report.first_failure().unwrap().tag, "A1");
}

#[test]
fn json_round_trip_is_exact() {
    let text = build::fixture_text(SIGMA4_FIXTURE).unwrap();
    assert_eq!(TransporterData::from_json(text).unwrap().to_json(), text);
}

#[test]
fn structural_defects_are_malformed() {
    let base = TransporterData::from_json(build::fixture_text(SIGMA4_FIXTURE).unwrap()).unwrap();
    let fusion = || system_for_name(&base.ambient, &budget()).unwrap();

    let mut missing = base.clone();
    missing.composition.pop();
    assert!(matches!(Transporter::new(fusion(), missing), Err(Error::Malformed(_))));

    let mut bad_index = base.clone();
    bad_index.morphisms[0].target = 99;
    assert!(matches!(Transporter::new(fusion(), bad_index), Err(Error::Malformed(_))));

    let mut no_identity = base.clone();
    for m in no_identity.morphisms.iter_mut() {
        if m.eps == Some(0) {
            m.eps = None;
        }
    }
    assert!(matches!(Transporter::new(fusion(), no_identity), Err(Error::Malformed(_))));
}

#[test]
fn unknown_fixture_is_reported() {
    assert!(matches!(build::load_fixture("nosuch.json", &budget()), Err(Error::UnknownEntry(_))));
}
