//! Saturation checkers against a direct reading of the axioms.
//!
//! The oracle below recomputes normalizers, centralizers, Sylow conditions and
//! extensions from the multiplication table and the Hom-sets alone.

use std::collections::HashSet;

use fusionkit::catalog;
use fusionkit::fusion::saturation::{check_saturation, check_saturation_alt, replay_witness, AXIOM_I};
use fusionkit::group::Elem;
use fusionkit::{Budget, FusionSystem, SubId};

fn elements(f: &FusionSystem, p: SubId) -> HashSet<Elem> {
    f.ambient().sub(p).elements().iter().copied().collect()
}

/// `|N_S(P)|` by running over every element of the base.
fn brute_normalizer_order(f: &FusionSystem, p: SubId) -> usize {
    let amb = f.ambient();
    let g = amb.group();
    let set = elements(f, p);
    amb.sub(f.base()).elements().iter().filter(|&&s| set.iter().all(|&x| set.contains(&g.conj(s, x)))).count()
}

fn brute_centralizer_order(f: &FusionSystem, p: SubId) -> usize {
    let amb = f.ambient();
    let g = amb.group();
    let set = elements(f, p);
    amb.sub(f.base()).elements().iter().filter(|&&s| set.iter().all(|&x| g.conj(s, x) == x)).count()
}

fn p_part(mut n: usize, p: usize) -> usize {
    let mut out = 1;
    while n.is_multiple_of(p) {
        n /= p;
        out *= p;
    }
    out
}

/// Axioms (I) and (II) read off the definitions:
/// at every fully normalized P, P is fully centralized and |Aut_S(P)| is the
/// p-part of |Aut_F(P)|; every φ with fully centralized image extends to N_φ.
fn brute_saturated(f: &FusionSystem) -> bool {
    let amb = f.ambient();
    let g = amb.group();
    let p = amb.p() as usize;
    let subs: Vec<SubId> = f.objects();
    for &q in &subs {
        let class = f.conjugacy_class(q);
        let max_n = class.iter().map(|&r| brute_normalizer_order(f, r)).max().unwrap();
        let max_c = class.iter().map(|&r| brute_centralizer_order(f, r)).max().unwrap();
        let n_q = brute_normalizer_order(f, q);
        let c_q = brute_centralizer_order(f, q);
        if n_q == max_n {
            let aut_s = n_q / c_q;
            if c_q != max_c || aut_s != p_part(f.aut_order(q), p) {
                return false;
            }
        }
        if c_q != max_c {
            continue;
        }
        // (II): every isomorphism onto q extends to N_φ.
        let s_elems = amb.sub(f.base()).elements();
        for &r in &class {
            let r_elems = amb.sub(r).elements();
            let r_set = elements(f, r);
            for images in f.iso_images(r, q) {
                let phi = |x: Elem| images[r_elems.iter().position(|&y| y == x).unwrap()];
                let conj_q: HashSet<Vec<Elem>> = s_elems
                    .iter()
                    .filter(|&&s| amb.sub(q).elements().iter().all(|&x| elements(f, q).contains(&g.conj(s, x))))
                    .map(|&s| amb.sub(q).elements().iter().map(|&x| g.conj(s, x)).collect())
                    .collect();
                let n_phi: Vec<Elem> = s_elems
                    .iter()
                    .copied()
                    .filter(|&s| r_set.iter().all(|&x| r_set.contains(&g.conj(s, x))))
                    .filter(|&s| {
                        let twisted: Vec<Elem> = amb
                            .sub(q)
                            .elements()
                            .iter()
                            .map(|&y| {
                                let x = r_elems[images.iter().position(|&z| z == y).unwrap()];
                                phi(g.conj(s, x))
                            })
                            .collect();
                        conj_q.contains(&twisted)
                    })
                    .collect();
                let n = amb.generated(&n_phi);
                let extends = f
                    .hom_images(n, f.base())
                    .iter()
                    .any(|ext| r_elems.iter().all(|&x| ext[amb.pos(n, x).unwrap()] == phi(x)));
                if !extends {
                    return false;
                }
            }
        }
    }
    true
}

const SMALL: &[&str] = &[
    "so2:p=2,l=2",
    "so2:p=3,l=2",
    "so2:p=5,l=2",
    "sullivan:p=5,n=4,l=2",
    "so3:l=2",
    "so3:l=3",
    "su2:l=2",
    "su2:l=3",
    "exotic3:l=1",
    "oracle:sym4,p=2",
    "oracle:d12,p=3",
    "oracle:sl23,p=3",
    "control:d16-outer",
];

#[test]
fn checkers_agree_with_the_brute_force_reading() {
    let budget = Budget::default();
    for name in SMALL {
        let entry = catalog::build(name, &budget).unwrap();
        let f = &entry.system;
        let expected = brute_saturated(f);
        assert_eq!(check_saturation(f).passed(), expected, "{name} standard");
        assert_eq!(check_saturation_alt(f).passed(), expected, "{name} alternative");
    }
}

#[test]
fn fully_normalized_matches_brute_normalizer_orders() {
    let budget = Budget::default();
    for name in ["so3:l=3", "su2:l=3", "exotic3:l=1", "control:d16-outer"] {
        let f = catalog::build(name, &budget).unwrap().system;
        for p in f.objects() {
            let class = f.conjugacy_class(p);
            let max_n = class.iter().map(|&q| brute_normalizer_order(&f, q)).max().unwrap();
            let max_c = class.iter().map(|&q| brute_centralizer_order(&f, q)).max().unwrap();
            assert_eq!(f.is_fully_normalized(p), brute_normalizer_order(&f, p) == max_n, "{name}");
            assert_eq!(f.is_fully_centralized(p), brute_centralizer_order(&f, p) == max_c, "{name}");
        }
    }
}

#[test]
fn so3_v_is_fully_normalized_and_its_small_conjugates_are_not() {
    let entry = catalog::build("so3:l=3", &Budget::default()).unwrap();
    let f = &entry.system;
    let v = entry.subgroup("V").unwrap();
    assert!(f.is_fully_normalized(v));
    let n_v = brute_normalizer_order(f, v);
    for q in f.conjugacy_class(v) {
        assert_eq!(f.is_fully_normalized(q), brute_normalizer_order(f, q) == n_v);
    }
    assert!(f.is_fully_normalized(f.base()));
}

#[test]
fn d16_control_fails_axiom_one_with_a_replayable_witness() {
    let f = catalog::build("control:d16-outer", &Budget::default()).unwrap().system;
    let report = check_saturation(&f);
    let failure = report.first_failure().expect("fails");
    assert_eq!(failure.tag, AXIOM_I);
    let witness = failure.witness.as_ref().expect("witness");
    assert!(replay_witness(&f, AXIOM_I, witness).unwrap());
}

#[test]
fn replay_rejects_a_witness_on_a_saturated_system() {
    let bad = catalog::build("control:d16-outer", &Budget::default()).unwrap().system;
    let witness = check_saturation(&bad).first_failure().unwrap().witness.clone().unwrap();
    let good = catalog::build("so3:l=3", &Budget::default()).unwrap().system;
    assert!(!replay_witness(&good, AXIOM_I, &witness).unwrap_or(false));
}

#[test]
fn checkers_are_deterministic() {
    let f = catalog::build("so3:l=3", &Budget::default()).unwrap().system;
    let mut a = check_saturation(&f);
    let mut b = check_saturation(&f);
    a.strip_timing();
    b.strip_timing();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
