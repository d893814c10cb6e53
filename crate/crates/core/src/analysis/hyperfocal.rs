//! The hyperfocal subgroup and subsystems of p-power index.

use std::time::Instant;

use crate::ambient::SubId;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fusion::{perm_closure, FusionSystem, Iso, Perm};
use crate::group::{p_prime_generated, quotient_group, Elem, FiniteGroup, Group, Subgroup};
use crate::report::{millis_since, AxiomResult, Report, Witness};

use super::classify::is_quasicentric;

/// `O^p(Aut_F(P))`, the subgroup generated by the elements of order prime to `p`,
/// as permutations of the positions of `P`. Returns all elements and a generating set.
fn op_aut_perms(f: &FusionSystem, p: SubId) -> Result<(Vec<Perm>, Vec<Perm>)> {
    let amb = f.ambient();
    let gens: Vec<Vec<u32>> =
        f.automorphism_perms(p).into_iter().map(|perm| perm.into_iter().map(u32::from).collect()).collect();
    let (group, perms) = FiniteGroup::from_permutations(amb.sub_order(p), &gens, &Budget::default())?;
    let core = p_prime_generated(&Subgroup::whole(&group), amb.p());
    let to_perm = |e: &Elem| -> Perm { perms[*e as usize].iter().map(|&i| i as u16).collect() };
    Ok((core.elements().iter().map(to_perm).collect(), core.gens().iter().map(to_perm).collect()))
}

fn perm_to_images(f: &FusionSystem, p: SubId, perm: &Perm) -> Vec<Elem> {
    let elems = f.ambient().sub(p).elements();
    perm.iter().map(|&i| elems[i as usize]).collect()
}

/// `O^p(Aut_F(P))` as image lists aligned with the elements of `P`.
pub fn op_automorphisms(f: &FusionSystem, p: SubId) -> Result<Vec<Vec<Elem>>> {
    let (all, _) = op_aut_perms(f, p)?;
    Ok(all.iter().map(|perm| perm_to_images(f, p, perm)).collect())
}

/// The hyperfocal subgroup `O^p_F(S) = ⟨T, g⁻¹α(g) : g ∈ P ≤ S, α ∈ O^p(Aut_F(P))⟩`.
///
/// Every subgroup of the base is visited, so no invariance argument is needed.
pub fn hyperfocal(f: &FusionSystem) -> Result<SubId> {
    let amb = f.ambient();
    let group = amb.group();
    let mut gens: Vec<Elem> = amb.sub(f.torus()).gens().to_vec();
    for p in f.objects() {
        let elems = amb.sub(p).elements();
        let (all, _) = op_aut_perms(f, p)?;
        for perm in &all {
            for (i, &j) in perm.iter().enumerate() {
                if i != j as usize {
                    gens.push(group.mul(group.inv(elems[i]), elems[j as usize]));
                }
            }
        }
        gens.sort_unstable();
        gens.dedup();
    }
    Ok(amb.generated(&gens))
}

/// The hyperfocal subgroup together with the quotient `S/O^p_F(S)`.
pub fn hyperfocal_quotient(f: &FusionSystem) -> Result<(SubId, Group)> {
    let amb = f.ambient();
    let h = hyperfocal(f)?;
    let (base, _) = amb.sub(f.base()).to_group()?;
    let embed: Vec<Elem> = amb.sub(f.base()).elements().to_vec();
    let inside: Vec<Elem> = amb
        .sub(h)
        .elements()
        .iter()
        .map(|&x| embed.binary_search(&x).expect("hyperfocal lies in the base") as Elem)
        .collect();
    let (quotient, _) = quotient_group(&base, &Subgroup::from_elements(&base, &inside))?;
    Ok((h, quotient))
}

/// The subsystem over `R` generated by `⟨O^p(Aut_F(P)), Aut_R(P)⟩` for all `P ≤ R`.
///
/// `Aut_R(P)` comes with the inner morphisms of `R`; the generators are the
/// `O^p(Aut_F(P))` pieces.
pub fn aut_formula_subsystem(f: &FusionSystem, r: SubId, label: &str) -> Result<FusionSystem> {
    let amb = f.ambient();
    let mut gens = Vec::new();
    for p in amb.subgroups_of(r) {
        let (_, core_gens) = op_aut_perms(f, p)?;
        for perm in &core_gens {
            gens.push(Iso { dom: p, cod: p, images: perm_to_images(f, p, perm) });
        }
    }
    FusionSystem::from_isos(amb, r, label, gens)
}

/// The subsystem `F_R` of p-power index over `R`, for `O^p_F(S) ≤ R ≤ S`.
pub fn p_power_index_subsystem(f: &FusionSystem, r: SubId) -> Result<FusionSystem> {
    let amb = f.ambient();
    let h = hyperfocal(f)?;
    if !amb.is_sub(h, r) || !amb.is_sub(r, f.base()) {
        return Err(Error::Precondition(format!(
            "{} does not lie between the hyperfocal subgroup {} and S",
            amb.describe(r),
            amb.describe(h)
        )));
    }
    aut_formula_subsystem(f, r, &format!("{}_R({})", f.label(), amb.describe(r)))
}

/// Checks the defining properties of `F_R` against its parent `F`:
/// saturation, `Aut_{F_R}(P) = ⟨O^p(Aut_F(P)), Aut_R(P)⟩`, and agreement of
/// quasicentric subgroups of `R`.
pub fn check_p_power_index(f: &FusionSystem, fr: &FusionSystem) -> Result<Report> {
    let start = Instant::now();
    let amb = f.ambient();
    let sat = crate::fusion::saturation::check_saturation(fr);
    let saturated = match sat.first_failure() {
        None => AxiomResult::pass("saturated"),
        Some(bad) => AxiomResult::fail("saturated", bad.witness.clone().unwrap_or_default()),
    };
    let mut formula = AxiomResult::pass("aut_formula");
    let mut quasi = AxiomResult::pass("quasicentric");
    for p in fr.objects() {
        let (_, mut gens) = op_aut_perms(f, p)?;
        for &g in amb.sub(fr.normalizer(p)).elements() {
            gens.push(amb.conj_images(g, p).iter().map(|&y| amb.pos(p, y).expect("normalizes") as u16).collect());
        }
        let expected = perm_closure(amb.sub_order(p), &gens).len();
        if formula.pass && expected != fr.aut_order(p) {
            formula = AxiomResult::fail(
                "aut_formula",
                Witness {
                    clause: "Aut_{F_R}(P) differs from <O^p(Aut_F(P)), Aut_R(P)>".into(),
                    subgroup: amb.sub(p).elements().to_vec(),
                    values: [("expected".to_string(), expected as u64), ("actual".to_string(), fr.aut_order(p) as u64)]
                        .into_iter()
                        .collect(),
                    detail: format!("at {}", amb.describe(p)),
                    ..Witness::default()
                },
            );
        }
        if quasi.pass && is_quasicentric(f, p)? != is_quasicentric(fr, p)? {
            quasi = AxiomResult::fail(
                "quasicentric",
                Witness {
                    clause: "quasicentric in one system but not the other".into(),
                    subgroup: amb.sub(p).elements().to_vec(),
                    detail: format!("at {}", amb.describe(p)),
                    ..Witness::default()
                },
            );
        }
    }
    Ok(Report::from_axioms(vec![saturated, formula, quasi], millis_since(start)))
}
