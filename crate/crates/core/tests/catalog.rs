//! Catalog construction and serialization, with oracle and stability checks.

use fusionkit::catalog::{self, doc, CatalogName};
use fusionkit::fusion::stability::{level_inclusion, stability_check, STABLE_VERDICT};
use fusionkit::group::{injective_homs, Subgroup};
use fusionkit::{Budget, Error, FusionSystem};

fn budget() -> Budget {
    Budget::default()
}

#[test]
fn every_standard_entry_builds_with_its_recorded_invariants() {
    for name in catalog::standard_names() {
        let entry = catalog::build(name, &budget()).unwrap();
        assert!(entry.mismatches().is_empty(), "{name}: {:?}", entry.mismatches());
        assert!(entry.system.closure_is_idempotent(), "{name}");
    }
}

#[test]
fn names_round_trip_through_display() {
    for name in catalog::standard_names() {
        let parsed: CatalogName = name.parse().unwrap();
        assert_eq!(parsed.to_string(), name);
    }
}

#[test]
fn malformed_names_are_unknown_entries() {
    for name in ["nosuch", "so3", "so2:p=4,l=2", "so3:l=2,p=3", "oracle:a5,p=2", "product:(so3:l=2)"] {
        assert!(catalog::build(name, &budget()).is_err(), "{name}");
    }
    assert!(matches!(catalog::build("nosuch", &budget()), Err(Error::UnknownEntry(_))));
}

#[test]
fn budget_caps_are_enforced() {
    let small = Budget::with_group_order(8);
    assert!(matches!(catalog::build("so3:l=3", &small), Err(Error::Budget { .. })));
}

#[test]
fn serialized_systems_rebuild_to_the_same_fusion() {
    for name in ["so3:l=3", "su2:l=3", "sullivan:p=5,n=4,l=2", "exotic3:l=1", "oracle:sym4,p=2", "control:d16-outer"] {
        let f = catalog::build(name, &budget()).unwrap().system;
        let d = doc::to_doc(&f);
        let text = serde_json::to_string(&d).unwrap();
        let back: doc::SystemDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
        let g = doc::from_doc(&back, &budget()).unwrap();
        assert_eq!(g.class_count(), f.class_count(), "{name}");
        for p in f.class_representatives() {
            assert_eq!(g.aut_order(p), f.aut_order(p), "{name}");
            assert_eq!(g.conjugacy_class(p), f.conjugacy_class(p), "{name}");
        }
    }
}

#[test]
fn malformed_documents_are_rejected() {
    let f = catalog::build("so3:l=2", &budget()).unwrap().system;
    let mut d = doc::to_doc(&f);
    d.generators[0].automorphisms[0][0] = 9999;
    assert!(doc::from_doc(&d, &budget()).is_err());
}

/// Hom-sets of the oracle systems against conjugation in the whole finite group.
#[test]
fn oracle_systems_reproduce_the_group_fusion() {
    for name in ["oracle:sym4,p=2", "oracle:d12,p=3", "oracle:sl23,p=3"] {
        let entry = catalog::build(name, &budget()).unwrap();
        let f = &entry.system;
        let oracle = entry.oracle.as_ref().unwrap();
        for p in f.objects() {
            for q in f.objects() {
                let mut homs = f.hom_images(p, q);
                homs.sort();
                assert_eq!(homs, oracle.brute_hom_images(p, q), "{name}");
            }
        }
    }
}

/// `|Aut(P)|` by counting injective endomorphisms bounds `|Aut_F(P)|` from above.
#[test]
fn automorphism_groups_embed_in_the_full_automorphism_group() {
    for name in ["so3:l=3", "su2:l=3", "exotic3:l=1"] {
        let f = catalog::build(name, &budget()).unwrap().system;
        let amb = f.ambient();
        for p in f.class_representatives() {
            let (g, _) = amb.sub(p).to_group().unwrap();
            let whole = Subgroup::whole(&g);
            let all = injective_homs(&whole, &whole, &budget()).unwrap().len();
            assert_eq!(all % f.aut_order(p), 0, "{name}");
        }
    }
}

#[test]
fn su2_at_level_two_is_not_saturated() {
    let f = catalog::build("su2:l=2", &budget()).unwrap().system;
    assert!(!fusionkit::fusion::saturation::check_saturation(&f).passed());
}

fn builder(family: &'static str) -> impl Fn(u32) -> fusionkit::Result<FusionSystem> {
    move |l| Ok(catalog::build(&format!("{family}:l={l}"), &budget())?.system)
}

#[test]
fn stability_across_levels() {
    assert!(stability_check(&builder("so3"), 2).unwrap().passed());
    assert!(stability_check(&builder("so3"), 3).unwrap().passed());
    assert!(stability_check(&builder("su2"), 3).unwrap().passed());
    assert!(stability_check(&builder("exotic3"), 1).unwrap().passed());
    let su2 = stability_check(&builder("su2"), 2).unwrap();
    assert_eq!(su2.first_failure().unwrap().tag, STABLE_VERDICT);
}

#[test]
fn level_inclusion_is_an_injective_homomorphism() {
    let low = catalog::build("so3:l=2", &budget()).unwrap();
    let high = catalog::build("so3:l=3", &budget()).unwrap();
    let (a, b) = (low.ambient(), high.ambient());
    let map = level_inclusion(a, b).unwrap();
    let (ga, gb) = (a.group(), b.group());
    let mut seen = std::collections::HashSet::new();
    for x in 0..ga.order() as u32 {
        assert!(seen.insert(map[x as usize]));
        for y in 0..ga.order() as u32 {
            assert_eq!(map[ga.mul(x, y) as usize], gb.mul(map[x as usize], map[y as usize]));
        }
    }
    assert!(level_inclusion(b, a).is_err());
}
