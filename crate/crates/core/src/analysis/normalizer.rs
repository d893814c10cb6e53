//! K-normalizer subsystems `N_F^K(A)`.

use std::collections::HashSet;

use crate::ambient::SubId;
use crate::error::{Error, Result};
use crate::fusion::{perm_closure, FusionSystem, Iso, Perm};
use crate::group::Elem;

/// A subgroup `K ≤ Aut(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KGroup {
    /// `K = Aut(A)`: the normalizer system.
    All,
    /// `K = {Id}`: the centralizer system.
    Identity,
    /// `K = Aut_S(A)`.
    AutS,
    /// An explicit group given by generators, as images aligned with the elements of `A`.
    Generated(Vec<Vec<Elem>>),
}

/// `K` resolved to a concrete set of automorphisms of a particular subgroup.
enum Resolved {
    All,
    Set(HashSet<Vec<Elem>>),
}

impl Resolved {
    fn contains(&self, images: &[Elem]) -> bool {
        match self {
            Resolved::All => true,
            Resolved::Set(s) => s.contains(images),
        }
    }
}

fn resolve(f: &FusionSystem, a: SubId, k: &KGroup) -> Result<Resolved> {
    let amb = f.ambient();
    let elems = amb.sub(a).elements();
    Ok(match k {
        KGroup::All => Resolved::All,
        KGroup::Identity => Resolved::Set([elems.to_vec()].into_iter().collect()),
        KGroup::AutS => {
            Resolved::Set(amb.sub(f.normalizer(a)).elements().iter().map(|&g| amb.conj_images(g, a)).collect())
        }
        KGroup::Generated(gens) => {
            let mut perms: Vec<Perm> = Vec::with_capacity(gens.len());
            for imgs in gens {
                if imgs.len() != elems.len() {
                    return Err(Error::InvalidGenerator("K generator has the wrong length".into()));
                }
                let perm: Option<Perm> = imgs.iter().map(|&y| amb.pos(a, y).map(|j| j as u16)).collect();
                let perm = perm.ok_or_else(|| Error::InvalidGenerator("K generator leaves A".into()))?;
                let hom = crate::group::GroupHom::from_images(amb.sub(a), amb.sub(a), imgs.clone())?;
                if !hom.is_injective() {
                    return Err(Error::InvalidGenerator("K generator is not an automorphism".into()));
                }
                perms.push(perm);
            }
            Resolved::Set(
                perm_closure(elems.len(), &perms)
                    .into_iter()
                    .map(|p| p.iter().map(|&j| elems[j as usize]).collect())
                    .collect(),
            )
        }
    })
}

/// `N_S^K(A) = {g ∈ N_S(A) : c_g|_A ∈ K}`, inside the base of `f`.
pub fn k_normalizer_subgroup(f: &FusionSystem, a: SubId, k: &KGroup) -> Result<SubId> {
    let resolved = resolve(f, a, k)?;
    Ok(k_normalizer_with(f, a, &resolved))
}

fn k_normalizer_with(f: &FusionSystem, a: SubId, k: &Resolved) -> SubId {
    let amb = f.ambient();
    let members: Vec<Elem> =
        amb.sub(f.normalizer(a)).elements().iter().copied().filter(|&g| k.contains(&amb.conj_images(g, a))).collect();
    amb.id_of_elements(&members).expect("N_S^K(A) is a subgroup")
}

/// Conjugates `k` along `phi: A -> B` (images aligned with `A`).
fn conjugate_k(f: &FusionSystem, a: SubId, k: &Resolved, phi: &[Elem]) -> Resolved {
    let amb = f.ambient();
    match k {
        Resolved::All => Resolved::All,
        Resolved::Set(set) => {
            let b = crate::fusion::image_id(amb, phi);
            let be = amb.sub(b).elements();
            // `phi ∘ κ ∘ phi⁻¹` sends `phi(x)` to `phi(κ(x))`.
            Resolved::Set(
                set.iter()
                    .map(|kappa| {
                        let mut out = vec![0; be.len()];
                        for (i, &y) in phi.iter().enumerate() {
                            let kx = kappa[i];
                            out[amb.pos(b, y).expect("image")] = phi[amb.pos(a, kx).expect("K acts on A")];
                        }
                        out
                    })
                    .collect(),
            )
        }
    }
}

/// Whether `A` is fully K-normalized: `|N_S^K(A)| ≥ |N_S^{fK}(f(A))|` for all `f ∈ Hom_F(A, S)`.
///
/// Returns the first better-placed image `f(A)` when it is not.
pub fn fully_k_normalized(f: &FusionSystem, a: SubId, k: &KGroup) -> Result<Option<SubId>> {
    let resolved = resolve(f, a, k)?;
    let amb = f.ambient();
    let here = amb.sub_order(k_normalizer_with(f, a, &resolved));
    // Conjugating K along f depends only on the target for these two choices.
    let one_per_target = matches!(k, KGroup::All | KGroup::Identity);
    for b in f.conjugacy_class(a) {
        let isos = f.iso_images(a, b);
        let take = if one_per_target { 1 } else { isos.len() };
        for phi in isos.iter().take(take) {
            let kb = conjugate_k(f, a, &resolved, phi);
            if amb.sub_order(k_normalizer_with(f, b, &kb)) > here {
                return Ok(Some(b));
            }
        }
    }
    Ok(None)
}

/// The K-normalizer system `N_F^K(A)` over `N_S^K(A)`.
///
/// Its morphisms are restrictions of F-isomorphisms `P' -> Q'` between subgroups
/// of `N_S^K(A)` containing `A` that map `A` onto itself by an element of `K`.
/// Fails with [`Error::Precondition`] when `A` is not fully K-normalized.
pub fn normalizer_subsystem(f: &FusionSystem, a: SubId, k: &KGroup) -> Result<FusionSystem> {
    let amb = f.ambient();
    if !f.is_object(a) {
        return Err(Error::Precondition(format!("{} is not a subgroup of the base", amb.describe(a))));
    }
    if let Some(better) = fully_k_normalized(f, a, k)? {
        return Err(Error::Precondition(format!(
            "{} is not fully K-normalized; {} has a larger K-normalizer",
            amb.describe(a),
            amb.describe(better)
        )));
    }
    let resolved = resolve(f, a, k)?;
    let nk = k_normalizer_with(f, a, &resolved);
    let a_elems = amb.sub(a).elements();
    let admissible = |p: SubId, images: &[Elem]| -> bool {
        let restricted: Vec<Elem> = a_elems.iter().map(|&x| images[amb.pos(p, x).expect("A ≤ P")]).collect();
        restricted.iter().all(|&y| amb.contains(a, y)) && resolved.contains(&restricted)
    };
    let mut gens: Vec<Iso> = Vec::new();
    let over: Vec<SubId> = amb.subgroups_of(nk).into_iter().filter(|&p| amb.is_sub(a, p)).collect();
    for &p in &over {
        let degree = amb.sub_order(p);
        for q in f.conjugacy_class(p) {
            if !amb.is_sub(a, q) || !amb.is_sub(q, nk) {
                continue;
            }
            let isos = f.iso_images(p, q);
            if q != p {
                // One admissible isomorphism per target; the rest differ by admissible automorphisms.
                if let Some(images) = isos.into_iter().find(|imgs| admissible(p, imgs)) {
                    gens.push(Iso { dom: p, cod: q, images });
                }
                continue;
            }
            let mut chosen: Vec<Perm> = Vec::new();
            let mut closure: HashSet<Perm> = HashSet::new();
            for images in isos {
                if !admissible(p, &images) {
                    continue;
                }
                let perm: Perm = images.iter().map(|&y| amb.pos(p, y).expect("automorphism") as u16).collect();
                if closure.contains(&perm) || perm.iter().enumerate().all(|(i, &j)| i == j as usize) {
                    continue;
                }
                chosen.push(perm);
                closure = perm_closure(degree, &chosen).into_iter().collect();
                gens.push(Iso { dom: p, cod: p, images });
            }
        }
    }
    let label = format!("N^K_{}({})", f.label(), amb.describe(a));
    FusionSystem::from_isos(amb, nk, &label, gens)
}

/// `C_F(A) = N_F^{Id}(A)`.
pub fn centralizer_subsystem(f: &FusionSystem, a: SubId) -> Result<FusionSystem> {
    normalizer_subsystem(f, a, &KGroup::Identity)
}

/// `N_F(A) = N_F^{Aut(A)}(A)`.
pub fn full_normalizer_subsystem(f: &FusionSystem, a: SubId) -> Result<FusionSystem> {
    normalizer_subsystem(f, a, &KGroup::All)
}
