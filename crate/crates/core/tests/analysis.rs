//! Structure analyses against brute-force readings of their definitions.

use std::collections::{BTreeSet, HashSet};

use fusionkit::analysis::{classify, closed, exotic, hyperfocal, irreducible, normality, normalizer};
use fusionkit::catalog;
use fusionkit::group::{Elem, Subgroup};
use fusionkit::{Budget, Error, FusionSystem, SubId};

fn build(name: &str) -> catalog::CatalogEntry {
    catalog::build(name, &Budget::default()).unwrap()
}

fn set(f: &FusionSystem, a: SubId) -> HashSet<Elem> {
    f.ambient().sub(a).elements().iter().copied().collect()
}

/// `f(P ∩ A) ≤ A` for every P and every `f ∈ Hom_F(P, S)`.
fn brute_strongly_closed(f: &FusionSystem, a: SubId) -> bool {
    let amb = f.ambient();
    let a_set = set(f, a);
    f.objects().into_iter().all(|p| {
        let elems = amb.sub(p).elements();
        f.hom_images(p, f.base())
            .iter()
            .all(|imgs| elems.iter().zip(imgs).all(|(x, y)| !a_set.contains(x) || a_set.contains(y)))
    })
}

/// Every `φ ∈ Hom_F(P, S)` extends to some `ψ ∈ Hom_F(PA, S)` with `ψ(A) = A`.
fn brute_f_normal(f: &FusionSystem, a: SubId) -> bool {
    let amb = f.ambient();
    let a_set = set(f, a);
    if !amb.sub(a).is_normal_in(amb.sub(f.base())) {
        return false;
    }
    f.objects().into_iter().all(|p| {
        let pa = amb.join(p, a);
        let pa_elems = amb.sub(pa).elements();
        let exts = f.hom_images(pa, f.base());
        f.hom_images(p, f.base()).iter().all(|imgs| {
            exts.iter().any(|ext| {
                let at = |x: Elem| ext[pa_elems.iter().position(|&y| y == x).unwrap()];
                amb.sub(p).elements().iter().zip(imgs).all(|(&x, &y)| at(x) == y)
                    && a_set.iter().all(|&x| a_set.contains(&at(x)))
            })
        })
    })
}

/// Every `φ ∈ Hom_F(P, S)` extends to `PA` fixing `A` pointwise.
fn brute_central(f: &FusionSystem, a: SubId) -> bool {
    let amb = f.ambient();
    f.objects().into_iter().all(|p| {
        let pa = amb.join(p, a);
        let pa_elems = amb.sub(pa).elements();
        let exts = f.hom_images(pa, f.base());
        f.hom_images(p, f.base()).iter().all(|imgs| {
            exts.iter().any(|ext| {
                let at = |x: Elem| ext[pa_elems.iter().position(|&y| y == x).unwrap()];
                amb.sub(p).elements().iter().zip(imgs).all(|(&x, &y)| at(x) == y)
                    && amb.sub(a).elements().iter().all(|&x| at(x) == x)
            })
        })
    })
}

const NAMES: &[&str] = &[
    "so2:p=3,l=2",
    "sullivan:p=5,n=4,l=2",
    "so3:l=2",
    "so3:l=3",
    "su2:l=3",
    "exotic3:l=1",
    "oracle:sym4,p=2",
    "oracle:d12,p=3",
    "oracle:sl23,p=3",
];

#[test]
fn strongly_closed_matches_the_definition() {
    for name in NAMES {
        let f = build(name).system;
        let fast: BTreeSet<SubId> = closed::strongly_closed_subgroups(&f).into_iter().collect();
        let slow: BTreeSet<SubId> = f.objects().into_iter().filter(|&a| brute_strongly_closed(&f, a)).collect();
        assert_eq!(fast, slow, "{name}");
        for &a in &fast {
            assert!(
                f.ambient().sub(a).is_normal_in(f.ambient().sub(f.base())),
                "{name}: strongly closed but not normal"
            );
        }
    }
}

#[test]
fn f_normal_matches_the_definition_and_lies_in_strongly_closed() {
    for name in NAMES {
        let f = build(name).system;
        let closed_set: BTreeSet<SubId> = closed::strongly_closed_subgroups(&f).into_iter().collect();
        for a in f.objects() {
            assert_eq!(closed::is_f_normal(&f, a), brute_f_normal(&f, a), "{name}");
        }
        for a in closed::f_normal_subgroups(&f) {
            assert!(closed_set.contains(&a), "{name}");
        }
    }
}

#[test]
fn center_is_the_largest_central_subgroup() {
    for name in NAMES {
        let f = build(name).system;
        let amb = f.ambient();
        let z = closed::f_center(&f);
        let central: Vec<SubId> =
            amb.subgroups_of(amb.center(f.base())).into_iter().filter(|&a| brute_central(&f, a)).collect();
        let largest = *central.iter().max_by_key(|&&a| amb.sub_order(a)).unwrap();
        assert_eq!(z, largest, "{name}");
    }
}

#[test]
fn element_classes_match_a_union_find_over_cyclic_hom_sets() {
    for name in ["so3:l=3", "su2:l=3", "exotic3:l=1", "oracle:sl23,p=3"] {
        let f = build(name).system;
        let amb = f.ambient();
        let p = amb.p() as u32;
        let order_p: Vec<Elem> =
            amb.sub(f.base()).elements().iter().copied().filter(|&x| amb.group().elem_order(x) == p).collect();
        let mut classes: Vec<BTreeSet<Elem>> = Vec::new();
        for &x in &order_p {
            let c = amb.generated(&[x]);
            let i = amb.pos(c, x).unwrap();
            let images: BTreeSet<Elem> = f.hom_images(c, f.base()).iter().map(|imgs| imgs[i]).collect();
            let (mut hit, rest): (Vec<_>, Vec<_>) = classes.into_iter().partition(|k| !k.is_disjoint(&images));
            let mut merged = images;
            for k in hit.drain(..) {
                merged.extend(k);
            }
            classes = rest;
            classes.push(merged);
        }
        let mut slow: Vec<Vec<Elem>> = classes.into_iter().map(|k| k.into_iter().collect()).collect();
        slow.sort();
        let mut fast = f.element_classes_of_order_p();
        fast.iter_mut().for_each(|k| k.sort_unstable());
        fast.sort();
        assert_eq!(fast, slow, "{name}");
    }
}

/// At finite level the reflections `x·t` with odd `t`-exponent lie in a Klein
/// four-subgroup with no automorphisms beyond `Aut_S`, so they stay apart from `x`.
#[test]
fn so3_order_two_elements_split_at_finite_level() {
    let f = build("so3:l=3").system;
    let amb = f.ambient();
    let (t1, x) = (amb.named("t1").unwrap(), amb.named("x").unwrap());
    let classes = f.element_classes_of_order_p();
    assert_eq!(classes.len(), 2);
    assert!(classes.iter().any(|k| k.contains(&t1) && k.contains(&x)));
}

#[test]
fn inner_system_over_an_abelian_group_has_singleton_classes() {
    let entry = build("so2:p=3,l=2");
    let inner = FusionSystem::inner(entry.ambient(), entry.system.base(), "F_S(S)");
    assert!(inner.element_classes_of_order_p().iter().all(|k| k.len() == 1));
}

#[test]
fn centric_matches_brute_centralizers() {
    for name in ["so3:l=3", "su2:l=3", "exotic3:l=1"] {
        let f = build(name).system;
        let amb = f.ambient();
        let g = amb.group();
        for p in f.objects() {
            let slow = f.conjugacy_class(p).into_iter().all(|q| {
                let q_set = set(&f, q);
                amb.sub(f.base())
                    .elements()
                    .iter()
                    .filter(|&&s| q_set.iter().all(|&x| g.conj(s, x) == x))
                    .all(|s| q_set.contains(s))
            });
            assert_eq!(classify::is_centric(&f, p), slow, "{name}");
        }
    }
}

/// `S ∩ O^p(G)`, where `O^p(G)` is generated by the elements of order prime to p.
#[test]
fn hyperfocal_of_oracle_systems_is_the_meet_with_the_p_residual() {
    for name in ["oracle:sym4,p=2", "oracle:d12,p=3", "oracle:sl23,p=3"] {
        let entry = build(name);
        let f = &entry.system;
        let oracle = entry.oracle.as_ref().unwrap();
        let g = oracle.group();
        let p = f.ambient().p() as u32;
        let prime_to_p: Vec<Elem> = (0..g.order() as Elem).filter(|&x| !g.elem_order(x).is_multiple_of(p)).collect();
        let residual = Subgroup::generated(g, &prime_to_p);
        let mut meet: Vec<Elem> =
            residual.intersect(&oracle.sylow_in_g()).elements().iter().filter_map(|&x| oracle.from_g(x)).collect();
        meet.sort_unstable();
        assert_eq!(Some(hyperfocal::hyperfocal(f).unwrap()), f.ambient().id_of_elements(&meet), "{name}");
    }
}

#[test]
fn hyperfocal_of_an_inner_system_is_generated_by_commutators_and_the_torus() {
    for name in ["so3:l=3", "su2:l=3", "sullivan:p=5,n=4,l=2"] {
        let entry = build(name);
        let amb = entry.ambient().clone();
        let s = entry.system.base();
        let inner = FusionSystem::inner(&amb, s, "F_S(S)");
        let g = amb.group();
        let elems = amb.sub(s).elements();
        let mut gens: Vec<Elem> = amb.sub(inner.torus()).elements().to_vec();
        for &x in elems {
            for &y in elems {
                gens.push(g.mul(g.inv(x), g.conj(y, x)));
            }
        }
        assert_eq!(hyperfocal::hyperfocal(&inner).unwrap(), amb.generated(&gens), "{name}");
    }
}

#[test]
fn p_power_index_subsystems_pass_their_checks() {
    for name in ["sullivan:p=5,n=4,l=2", "so3:l=3", "su2:l=3"] {
        let f = build(name).system;
        let h = hyperfocal::hyperfocal(&f).unwrap();
        let fr = hyperfocal::p_power_index_subsystem(&f, h).unwrap();
        assert!(hyperfocal::check_p_power_index(&f, &fr).unwrap().passed(), "{name}");
        assert!(normality::is_normal_subsystem(&fr, &f).unwrap().passed(), "{name}");
    }
}

#[test]
fn a_system_is_normal_in_itself() {
    for name in ["so3:l=3", "sullivan:p=5,n=4,l=2", "exotic3:l=1"] {
        let f = build(name).system;
        let report = normality::is_normal_subsystem(&f, &f).unwrap();
        assert!(report.passed(), "{name}");
        for tag in [normality::N1, normality::N2, normality::N3, normality::N4] {
            assert!(report.axiom(tag).is_some(), "{name} {tag}");
        }
    }
}

#[test]
fn inner_system_of_so3_fails_n2_and_sullivan_torus_is_normal() {
    let so3 = build("so3:l=3");
    let f = &so3.system;
    let inner = FusionSystem::inner(f.ambient(), f.base(), "F_S(S)");
    let report = normality::is_normal_subsystem(&inner, f).unwrap();
    assert_eq!(report.first_failure().unwrap().tag, normality::N2);

    let sullivan = build("sullivan:p=5,n=4,l=2");
    let f = &sullivan.system;
    let torus = FusionSystem::inner(f.ambient(), f.torus(), "F_T(T)");
    assert!(normality::is_normal_subsystem(&torus, f).unwrap().passed());
}

#[test]
fn irreducibility_of_the_rank_one_catalog() {
    for (name, irreducible) in [
        ("so2:p=2,l=2", true),
        ("so2:p=5,l=2", true),
        ("so3:l=3", true),
        ("su2:l=3", true),
        ("sullivan:p=5,n=4,l=2", false),
    ] {
        let f = build(name).system;
        assert_eq!(irreducible::is_irreducible_rank1(&f).unwrap().passed(), irreducible, "{name}");
    }
}

#[test]
fn components_have_the_expected_shapes() {
    use irreducible::ComponentShape;
    for (name, shape) in [
        ("so2:p=3,l=2", ComponentShape::So2),
        ("sullivan:p=5,n=4,l=2", ComponentShape::So2),
        ("so3:l=3", ComponentShape::So3),
        ("su2:l=3", ComponentShape::Su2),
    ] {
        let f = build(name).system;
        assert_eq!(irreducible::irreducible_component_rank1(&f).unwrap().shape, shape, "{name}");
    }
}

#[test]
fn rank_one_analysis_rejects_higher_rank() {
    let f = build("exotic3:l=1").system;
    assert!(matches!(irreducible::is_irreducible_rank1(&f), Err(Error::Precondition(_))));
}

#[test]
fn exotic_centralizer_of_v1_has_the_expected_automorphism_groups() {
    for level in [1, 2] {
        let entry = build(&format!("exotic3:l={level}"));
        let f = &entry.system;
        let amb = f.ambient();
        let v1 = amb.named("v1").unwrap();
        let c = normalizer::centralizer_subsystem(f, amb.generated(&[v1])).unwrap();
        assert_eq!(c.aut_order(entry.subgroup("V").unwrap()), 6);
        assert_eq!(c.aut_order(entry.subgroup("T").unwrap()), 6);
    }
}

#[test]
fn exotic_simplicity_passes_at_both_levels() {
    for level in [1, 2] {
        let entry = build(&format!("exotic3:l={level}"));
        let report = exotic::verify_exotic_simplicity(&entry).unwrap();
        assert!(report.passed(), "level {level}: {:?}", report.first_failure());
    }
}

#[test]
fn exotic_simplicity_needs_the_exotic_entry() {
    assert!(matches!(exotic::verify_exotic_simplicity(&build("so3:l=3")), Err(Error::Precondition(_))));
}
