//! Classification of subgroups up to F-conjugacy.

use serde::Serialize;

use crate::ambient::SubId;
use crate::budget::Budget;
use crate::error::Result;
use crate::fusion::FusionSystem;
use crate::group::{o_p, FiniteGroup, Subgroup};

use super::normalizer::centralizer_subsystem;

/// Classification flags of one subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub centric: bool,
    pub radical: bool,
    pub quasicentric: bool,
}

/// Whether `C_S(Q) ≤ Q` for every `Q ∈ P^F`.
pub fn is_centric(f: &FusionSystem, p: SubId) -> bool {
    let amb = f.ambient();
    f.conjugacy_class(p).into_iter().all(|q| amb.is_sub(f.centralizer(q), q))
}

/// `|O_p(Aut_F(P))|`.
pub fn o_p_aut_order(f: &FusionSystem, p: SubId) -> Result<usize> {
    let gens: Vec<Vec<u32>> =
        f.automorphism_perms(p).into_iter().map(|perm| perm.into_iter().map(u32::from).collect()).collect();
    let budget = Budget::default();
    let (group, _) = FiniteGroup::from_permutations(f.ambient().sub_order(p), &gens, &budget)?;
    Ok(o_p(&Subgroup::whole(&group), f.ambient().p()).order())
}

/// Whether `O_p(Out_F(P)) = 1`, that is `O_p(Aut_F(P)) = Inn(P)`.
pub fn is_radical(f: &FusionSystem, p: SubId) -> Result<bool> {
    Ok(o_p_aut_order(f, p)? == f.inn_order(p))
}

/// Whether `C_F(Q)` is the inner system of `C_S(Q)` for a fully centralized `Q ∈ P^F`.
///
/// This holds exactly when every automorphism in the centralizer system of `Q` is
/// conjugation by an element of `C_S(Q)`, which is tested subgroup by subgroup.
pub fn is_quasicentric(f: &FusionSystem, p: SubId) -> Result<bool> {
    let amb = f.ambient();
    let q = f
        .conjugacy_class(p)
        .into_iter()
        .find(|&q| f.is_fully_centralized(q))
        .expect("every class has a fully centralized member");
    let c = centralizer_subsystem(f, q)?;
    let base = c.base();
    Ok(c.objects().into_iter().all(|r| {
        let n = amb.meet(amb.normalizer(r), base);
        let z = amb.meet(amb.centralizer(r), base);
        c.aut_order(r) == amb.sub_order(n) / amb.sub_order(z)
            && c.conjugacy_class(r).len() == amb.sub_order(base) / amb.sub_order(n)
    }))
}

/// Flags of every subgroup of the base, in lattice order.
pub fn classify(f: &FusionSystem) -> Result<Vec<(SubId, Flags)>> {
    f.objects()
        .into_iter()
        .map(|p| {
            let centric = is_centric(f, p);
            let radical = is_radical(f, p)?;
            let quasicentric = centric || is_quasicentric(f, p)?;
            Ok((p, Flags { centric, radical, quasicentric }))
        })
        .collect()
}

/// Subgroups that are both centric and radical, in lattice order.
pub fn centric_radical(f: &FusionSystem) -> Result<Vec<SubId>> {
    let mut out = Vec::new();
    for p in f.objects() {
        if is_centric(f, p) && is_radical(f, p)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// One representative (the smallest member) per F-class of centric-radical subgroups.
pub fn centric_radical_classes(f: &FusionSystem) -> Result<Vec<SubId>> {
    let mut out = Vec::new();
    for p in f.class_representatives() {
        if is_centric(f, p) && is_radical(f, p)? {
            out.push(p);
        }
    }
    Ok(out)
}
