//! Saturation checkers.
//!
//! [`check_saturation`] tests axioms (I) and (II) at every subgroup of the base.
//! [`check_saturation_alt`] tests the alternative pair (I′) at the base and (II′)
//! with fully normalized targets. The ascending-chain axiom is vacuous for a
//! finite group; the level-stability check in [`super::stability`] stands in for it.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use crate::ambient::SubId;
use crate::error::{Error, Result};
use crate::group::{p_part, Elem};
use crate::report::{millis_since, AxiomResult, Report, Witness};

use super::FusionSystem;

/// Tag of axiom (I).
pub const AXIOM_I: &str = "I";
/// Tag of axiom (II).
pub const AXIOM_II: &str = "II";
/// Tag of the ascending-chain axiom.
pub const AXIOM_III: &str = "III";
/// Tag of axiom (I′).
pub const AXIOM_I_ALT: &str = "I'";
/// Tag of axiom (II′).
pub const AXIOM_II_ALT: &str = "II'";

const NOTE_III: &str = "every ascending chain of subgroups of a finite group is eventually constant; \
                        run the level-stability check for the finite surrogate";

/// Checks axioms (I) and (II).
pub fn check_saturation(f: &FusionSystem) -> Report {
    let start = Instant::now();
    let axioms = vec![
        axiom_one(f, false),
        axiom_two(f, Target::FullyCentralized),
        AxiomResult::pass(AXIOM_III).with_note(NOTE_III),
    ];
    Report::from_axioms(axioms, millis_since(start))
}

/// Checks axioms (I′) and (II′).
pub fn check_saturation_alt(f: &FusionSystem) -> Report {
    let start = Instant::now();
    let axioms = vec![axiom_one(f, true), axiom_two(f, Target::FullyNormalized)];
    Report::from_axioms(axioms, millis_since(start))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Target {
    FullyCentralized,
    FullyNormalized,
}

fn counts(f: &FusionSystem, p: SubId) -> BTreeMap<String, u64> {
    let amb = f.ambient();
    let mut values = BTreeMap::new();
    values.insert("order".into(), amb.sub_order(p) as u64);
    values.insert("normalizer".into(), amb.sub_order(f.normalizer(p)) as u64);
    values.insert("centralizer".into(), amb.sub_order(f.centralizer(p)) as u64);
    values.insert("aut_f".into(), f.aut_order(p) as u64);
    values.insert("aut_s".into(), f.aut_s_order(p) as u64);
    values
}

/// Axiom (I) at one subgroup, or `None` when it holds there.
fn axiom_one_at(f: &FusionSystem, p: SubId) -> Option<Witness> {
    let amb = f.ambient();
    let subgroup = amb.sub(p).elements().to_vec();
    if !f.is_fully_centralized(p) {
        let best = f.conjugacy_class(p).into_iter().max_by_key(|&q| amb.sub_order(f.centralizer(q))).expect("class");
        let mut values = counts(f, p);
        values.insert("best_centralizer".into(), amb.sub_order(f.centralizer(best)) as u64);
        return Some(Witness {
            clause: "fully normalized but not fully centralized".into(),
            subgroup,
            target: amb.sub(best).elements().to_vec(),
            values,
            detail: format!(
                "{} is fully normalized, yet its conjugate {} has a larger centralizer",
                amb.describe(p),
                amb.describe(best)
            ),
            ..Witness::default()
        });
    }
    let aut_f = f.aut_order(p);
    let aut_s = f.aut_s_order(p);
    if aut_s != p_part(aut_f, amb.p()) {
        return Some(Witness {
            clause: "Out_S(P) is not a Sylow p-subgroup of Out_F(P)".into(),
            subgroup,
            values: counts(f, p),
            detail: format!(
                "at {}: |Aut_F(P)| = {aut_f} has p-part {}, but |Aut_S(P)| = {aut_s}",
                amb.describe(p),
                p_part(aut_f, amb.p())
            ),
            ..Witness::default()
        });
    }
    None
}

fn axiom_one(f: &FusionSystem, only_base: bool) -> AxiomResult {
    let tag = if only_base { AXIOM_I_ALT } else { AXIOM_I };
    let candidates: Vec<SubId> = if only_base { vec![f.base()] } else { f.objects() };
    for p in candidates {
        if !f.is_fully_normalized(p) {
            continue;
        }
        if let Some(w) = axiom_one_at(f, p) {
            return AxiomResult::fail(tag, w);
        }
    }
    AxiomResult::pass(tag)
}

/// Computes `N_f = {g ∈ N_{S₀}(P) : f c_g f⁻¹ ∈ Aut_{S₀}(Q)}` for `f: P -> Q`.
///
/// `images` is aligned with the elements of `P`.
pub fn extender_subgroup(f: &FusionSystem, p: SubId, images: &[Elem]) -> SubId {
    let amb = f.ambient();
    let g = amb.group();
    let q = super::image_id(amb, images);
    let pe = amb.sub(p).elements();
    let qgens = amb.sub(q).gens();
    // For each generator y of Q, its preimage f⁻¹(y).
    let pre: Vec<Elem> = qgens.iter().map(|&y| pe[images.iter().position(|&z| z == y).expect("onto Q")]).collect();
    let keys: HashSet<Vec<Elem>> =
        amb.sub(f.normalizer(q)).elements().iter().map(|&h| qgens.iter().map(|&y| g.conj(h, y)).collect()).collect();
    let members: Vec<Elem> = amb
        .sub(f.normalizer(p))
        .elements()
        .iter()
        .copied()
        .filter(|&x| {
            let key: Vec<Elem> =
                pre.iter().map(|&a| images[amb.pos(p, g.conj(x, a)).expect("x normalizes P")]).collect();
            keys.contains(&key)
        })
        .collect();
    amb.id_of_elements(&members).expect("N_f is a subgroup")
}

/// Axiom (II) for one morphism `f: P -> Q`, or `None` when an extension exists.
fn axiom_two_at(f: &FusionSystem, p: SubId, images: &[Elem], tag: &str) -> Option<Witness> {
    let amb = f.ambient();
    let nf = extender_subgroup(f, p, images);
    if nf == p {
        return None;
    }
    let gen_images: Vec<Elem> = amb.sub(p).gens().iter().map(|&x| images[amb.pos(p, x).expect("generator")]).collect();
    if f.find_extension(nf, p, &gen_images, f.base()).is_some() {
        return None;
    }
    let q = super::image_id(amb, images);
    let mut values = BTreeMap::new();
    values.insert("order".into(), amb.sub_order(p) as u64);
    values.insert("n_f".into(), amb.sub_order(nf) as u64);
    values.insert("candidates".into(), f.hom_count(nf, f.base()) as u64);
    Some(Witness {
        clause: format!("({tag}) no extension of f to N_f"),
        subgroup: amb.sub(p).elements().to_vec(),
        target: amb.sub(q).elements().to_vec(),
        morphism: images.to_vec(),
        values,
        detail: format!(
            "f: {} -> {} has N_f = {} but no morphism in Hom_F(N_f, S) restricts to f",
            amb.describe(p),
            amb.describe(q),
            amb.describe(nf)
        ),
    })
}

fn axiom_two(f: &FusionSystem, target: Target) -> AxiomResult {
    let tag = match target {
        Target::FullyCentralized => AXIOM_II,
        Target::FullyNormalized => AXIOM_II_ALT,
    };
    for class in 0..f.class_count() {
        let members = f.class_members(class);
        for &q in &members {
            let eligible = match target {
                Target::FullyCentralized => f.is_fully_centralized(q),
                Target::FullyNormalized => f.is_fully_normalized(q),
            };
            if !eligible {
                continue;
            }
            for &p in &members {
                for images in f.iso_images(p, q) {
                    if let Some(w) = axiom_two_at(f, p, &images, tag) {
                        return AxiomResult::fail(tag, w);
                    }
                }
            }
        }
    }
    AxiomResult::pass(tag)
}

/// Re-derives a failure witness against `f` and reports whether it is a genuine violation.
///
/// The witness must come from one of the saturation checkers run on `f`.
pub fn replay_witness(f: &FusionSystem, tag: &str, w: &Witness) -> Result<bool> {
    let amb = f.ambient();
    let p =
        amb.id_of_elements(&w.subgroup).ok_or_else(|| Error::Malformed("witness subgroup is not a subgroup".into()))?;
    if !f.is_object(p) {
        return Err(Error::Malformed("witness subgroup is outside the base".into()));
    }
    match tag {
        AXIOM_I | AXIOM_I_ALT => {
            if tag == AXIOM_I_ALT && p != f.base() {
                return Ok(false);
            }
            // Recount everything from the definitions rather than trusting stored values.
            let n_p = amb.sub_order(f.normalizer(p));
            let fully_normalized = f.conjugacy_class(p).iter().all(|&q| amb.sub_order(f.normalizer(q)) <= n_p);
            if !fully_normalized {
                return Ok(false);
            }
            let c_p = amb.sub_order(f.centralizer(p));
            let fully_centralized = f.conjugacy_class(p).iter().all(|&q| amb.sub_order(f.centralizer(q)) <= c_p);
            let aut_f = f.automorphisms(p).len();
            let aut_s = n_p / c_p;
            Ok(!fully_centralized || aut_s != p_part(aut_f, amb.p()))
        }
        AXIOM_II | AXIOM_II_ALT => {
            if !f.is_morphism(p, &w.morphism) {
                return Ok(false);
            }
            let q = super::image_id(amb, &w.morphism);
            let eligible = if tag == AXIOM_II { f.is_fully_centralized(q) } else { f.is_fully_normalized(q) };
            if !eligible {
                return Ok(false);
            }
            let nf = extender_subgroup(f, p, &w.morphism);
            if nf == p {
                return Ok(false);
            }
            // Exhaustive: no element of Hom_F(N_f, S₀) restricts to f.
            let pe = amb.sub(p).elements();
            let extends = f
                .hom_images(nf, f.base())
                .iter()
                .any(|h| pe.iter().zip(&w.morphism).all(|(&x, &y)| h[amb.pos(nf, x).expect("P ≤ N_f")] == y));
            Ok(!extends)
        }
        other => Err(Error::Malformed(format!("no replay for axiom tag {other}"))),
    }
}
