//! Normality of a subsystem: conditions (N1) to (N4).

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use crate::ambient::SubId;
use crate::error::{Error, Result};
use crate::fusion::saturation::check_saturation;
use crate::fusion::{generating_subset, FusionSystem};
use crate::group::Elem;
use crate::report::{millis_since, AxiomResult, Report, Witness};

use super::closed::is_strongly_closed;

pub const N1: &str = "N1";
pub const N2: &str = "N2";
pub const N3: &str = "N3";
pub const N4: &str = "N4";

/// Checks whether `sub` (over `S₀`) is a normal subsystem of `f` (over `S`).
///
/// Both systems must share the ambient group, `S₀ ≤ S`, and every generator of
/// `sub` must be a morphism of `f`. The saturation report of `sub` is attached
/// under `details.n3`.
pub fn is_normal_subsystem(sub: &FusionSystem, f: &FusionSystem) -> Result<Report> {
    let start = Instant::now();
    if !Arc::ptr_eq(sub.ambient(), f.ambient()) {
        return Err(Error::AmbientMismatch("subsystem and system have different ambients".into()));
    }
    if !f.contains_system(sub) {
        return Err(Error::Precondition(format!("{} is not a subsystem of {}", sub.label(), f.label())));
    }
    let n1 = condition_n1(sub, f);
    let n2 = condition_n2(sub, f);
    let sat = check_saturation(sub);
    let n3 = match sat.first_failure() {
        None => AxiomResult::pass(N3),
        Some(bad) => AxiomResult::fail(
            N3,
            Witness {
                clause: format!("axiom {} fails in the subsystem", bad.tag),
                detail: bad.witness.as_ref().map(|w| w.detail.clone()).unwrap_or_default(),
                ..bad.witness.clone().unwrap_or_default()
            },
        ),
    };
    let n4 = condition_n4(sub, f);
    Ok(Report::from_axioms(vec![n1, n2, n3, n4], millis_since(start))
        .with_detail("n3", serde_json::to_value(&sat).expect("report serializes")))
}

fn condition_n1(sub: &FusionSystem, f: &FusionSystem) -> AxiomResult {
    let amb = f.ambient();
    let s0 = sub.base();
    if is_strongly_closed(f, s0) {
        return AxiomResult::pass(N1);
    }
    let (x, y) = amb
        .sub(s0)
        .elements()
        .iter()
        .find_map(|&x| f.element_class(x).into_iter().find(|&y| !amb.contains(s0, y)).map(|y| (x, y)))
        .expect("a class leaves S₀");
    AxiomResult::fail(
        N1,
        Witness {
            clause: "S₀ is not strongly closed".into(),
            subgroup: amb.sub(s0).elements().to_vec(),
            morphism: vec![x, y],
            detail: format!("{} is F-conjugate to {}, which lies outside S₀", amb.label(x), amb.label(y)),
            ..Witness::default()
        },
    )
}

/// An F-isomorphism `γ: Q -> γ(Q)` given by the images of the elements of `Q`.
struct Gamma {
    q: SubId,
    target: SubId,
    images: Vec<Elem>,
}

/// A generating set of the groupoid of F-isomorphisms between members of the class
/// of `q`: generators of `Aut_F(q)` and one isomorphism each way between `q` and
/// every other member.
fn groupoid_generators(f: &FusionSystem, q: SubId) -> Vec<Gamma> {
    let amb = f.ambient();
    let perms = f.automorphism_perms(q);
    let auts = f.automorphisms(q);
    let mut out: Vec<Gamma> = generating_subset(amb.sub_order(q), &perms)
        .into_iter()
        .map(|i| Gamma { q, target: q, images: auts[i].clone() })
        .collect();
    for r in f.conjugacy_class(q) {
        if r == q {
            continue;
        }
        let there = f.iso_images(q, r).swap_remove(0);
        let back = f.iso_images(r, q).swap_remove(0);
        out.push(Gamma { q, target: r, images: there });
        out.push(Gamma { q: r, target: q, images: back });
    }
    out
}

/// (N2): conjugation by every `γ ∈ Hom_F(Q, S)` carries `Hom_{F₀}(P, Q)` onto
/// `Hom_{F₀}(γP, γQ)` for `P ≤ Q ≤ S₀`.
///
/// Conjugation is injective and composes, so it suffices to show that conjugation
/// by each groupoid generator maps `Hom_{F₀}(P, Q)` into `Hom_{F₀}(γP, γQ)`; the
/// generating set is closed under inverses up to composition.
fn condition_n2(sub: &FusionSystem, f: &FusionSystem) -> AxiomResult {
    let mut done = std::collections::HashSet::new();
    for q in sub.objects() {
        if !done.insert(f.class_index(q)) {
            continue;
        }
        for gamma in groupoid_generators(f, q).into_iter().filter(|g| sub.is_object(g.q)) {
            if let Some(w) = n2_violation(sub, f, &gamma) {
                return AxiomResult::fail(N2, w);
            }
        }
    }
    AxiomResult::pass(N2)
}

fn n2_violation(sub: &FusionSystem, f: &FusionSystem, gamma: &Gamma) -> Option<Witness> {
    let amb = f.ambient();
    let (q, target) = (gamma.q, gamma.target);
    let apply = |x: Elem| gamma.images[amb.pos(q, x).expect("element of Q")];
    let gamma_order = {
        let perm: Vec<usize> = gamma.images.iter().map(|&y| amb.pos(q, y).unwrap_or(usize::MAX)).collect();
        if q == target {
            let mut k = 1u64;
            let mut cur = perm.clone();
            while cur.iter().enumerate().any(|(i, &j)| i != j) {
                cur = cur.iter().map(|&j| perm[j]).collect();
                k += 1;
            }
            k
        } else {
            0
        }
    };
    let witness = |p: SubId, clause: &str, morphism: Vec<Elem>, detail: String| {
        let mut values = BTreeMap::new();
        values.insert("p_order".into(), amb.sub_order(p) as u64);
        values.insert("q_order".into(), amb.sub_order(q) as u64);
        if gamma_order > 0 {
            values.insert("gamma_order".into(), gamma_order);
        }
        Witness {
            clause: clause.into(),
            subgroup: amb.sub(p).elements().to_vec(),
            target: amb.sub(q).elements().to_vec(),
            morphism,
            values,
            detail: format!(
                "{detail}; γ on {} sends it to {}: {:?}",
                amb.describe(q),
                amb.describe(target),
                gamma.images
            ),
        }
    };
    if !sub.is_object(target) {
        return Some(witness(q, "γ(Q) leaves S₀", gamma.images.clone(), "Q is F-conjugate out of S₀".into()));
    }
    let mut below = amb.subgroups_of(q);
    below.reverse();
    for p in below {
        let gp_elems: Vec<Elem> = amb.sub(p).elements().iter().map(|&x| apply(x)).collect();
        let gp = amb.id_of_elements(&gp_elems).expect("γ(P) is a subgroup");
        for fmap in sub.hom_images(p, q) {
            // (γ f γ⁻¹)(γ(x)) = γ(f(x)), aligned with the sorted elements of γ(P).
            let mut conj = vec![0; gp_elems.len()];
            for (i, &x) in amb.sub(p).elements().iter().enumerate() {
                conj[amb.pos(gp, apply(x)).expect("γ(P)")] = apply(fmap[i]);
            }
            if !sub.is_morphism(gp, &conj) {
                return Some(witness(
                    p,
                    "conjugate of a subsystem morphism is not in the subsystem",
                    fmap,
                    format!("the morphism on {} conjugates out of the subsystem", amb.describe(p)),
                ));
            }
        }
    }
    None
}

/// (N4): every `α ∈ Aut_{F₀}(S₀)` extends to `α̃ ∈ Aut_F(S₀·C_S(S₀))` with
/// `[α̃, C_S(S₀)] ≤ Z(S₀)`.
fn condition_n4(sub: &FusionSystem, f: &FusionSystem) -> AxiomResult {
    let amb = f.ambient();
    let s0 = sub.base();
    let c = amb.meet(amb.centralizer(s0), f.base());
    let big = amb.join(s0, c);
    let z = amb.center(s0);
    let s0_elems = amb.sub(s0).elements();
    for alpha in sub.automorphisms(s0) {
        let pairs: Vec<(Elem, Elem)> = s0_elems.iter().copied().zip(alpha.iter().copied()).collect();
        let ok = f.morphisms_with(big, big, &pairs).into_iter().any(|ext| {
            amb.sub(c).elements().iter().all(|&g| {
                let fg = ext[amb.pos(big, g).expect("C ≤ S₀·C")];
                let comm = amb.group().mul(fg, amb.group().inv(g));
                amb.contains(z, comm)
            })
        });
        if !ok {
            return AxiomResult::fail(
                N4,
                Witness {
                    clause: "automorphism of S₀ has no admissible extension".into(),
                    subgroup: s0_elems.to_vec(),
                    target: amb.sub(big).elements().to_vec(),
                    morphism: alpha,
                    detail: format!("no extension to {} acts on C_S(S₀) modulo Z(S₀)", amb.describe(big)),
                    ..Witness::default()
                },
            );
        }
    }
    AxiomResult::pass(N4)
}
