//! Irreducibility in rank 1 and the irreducible component.
//!
//! A system is irreducible when it has no proper normal subsystem of maximal rank.
//! Abstract subsystems are not enumerated. The candidates are the subsystems that
//! the rank-1 classification argument produces: over every strongly closed `S₀`
//! containing the torus, the inner system of `S₀`, the system generated by
//! `⟨O^p(Aut_F(P)), Aut_{S₀}(P)⟩`, and the system generated by all of `Aut_F(P)`
//! for `P ≤ S₀`; and over every `R` containing the hyperfocal subgroup, the
//! subsystem of p-power index. Only saturated candidates can be normal, since
//! condition (N3) requires saturation.

use std::time::Instant;

use serde::Serialize;

use crate::ambient::SubId;
use crate::error::{Error, Result};
use crate::fusion::{FusionSystem, Iso};
use crate::report::{millis_since, AxiomResult, Report, Witness};

use super::closed::strongly_closed_subgroups;
use super::hyperfocal::{aut_formula_subsystem, hyperfocal, p_power_index_subsystem};
use super::normality::is_normal_subsystem;

/// Isomorphism type of a rank-1 irreducible component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ComponentShape {
    /// `S₀ = T`, the system of `SO(2)`.
    So2,
    /// `S₀` dihedral, the system of `SO(3)`.
    So3,
    /// `S₀` generalized quaternion, the system of `SU(2)`.
    Su2,
}

/// The irreducible component of a rank-1 system.
#[derive(Debug)]
pub struct Component {
    pub base: SubId,
    pub shape: ComponentShape,
    pub system: FusionSystem,
}

fn require_rank_one(f: &FusionSystem) -> Result<()> {
    let rank = f.ambient().rank();
    if rank != 1 {
        return Err(Error::Precondition(format!("rank-1 analysis called on a system of rank {rank}")));
    }
    Ok(())
}

/// Strongly closed subgroups containing the torus, in lattice order.
fn closed_over_torus(f: &FusionSystem) -> Vec<SubId> {
    let amb = f.ambient();
    strongly_closed_subgroups(f).into_iter().filter(|&a| amb.is_sub(f.torus(), a)).collect()
}

/// `S₀`, the smallest strongly closed subgroup containing `T`, with its component system.
pub fn irreducible_component_rank1(f: &FusionSystem) -> Result<Component> {
    require_rank_one(f)?;
    let amb = f.ambient();
    let closed = closed_over_torus(f);
    let s0 = closed.iter().fold(f.base(), |acc, &a| amb.meet(acc, a));
    let t = f.torus();
    if s0 == t {
        let system = FusionSystem::inner(amb, t, &format!("F_T(T) in {}", f.label()));
        return Ok(Component { base: s0, shape: ComponentShape::So2, system });
    }
    let sub = amb.sub(s0);
    let two = amb.p() == 2 && amb.sub_order(s0) == 2 * amb.sub_order(t) && !sub.is_abelian();
    if !two {
        return Err(Error::Precondition(format!("anomaly: {} matches no rank-1 component shape", amb.describe(s0))));
    }
    let involutions = sub.elements().iter().filter(|&&x| amb.group().elem_order(x) == 2).count();
    let shape = if involutions == 1 { ComponentShape::Su2 } else { ComponentShape::So3 };
    let system = aut_formula_subsystem(f, s0, &format!("component of {}", f.label()))?;
    Ok(Component { base: s0, shape, system })
}

/// One candidate subsystem and its normality report.
#[derive(Debug, Serialize)]
pub struct Candidate {
    pub name: String,
    pub base_order: usize,
    pub normal: bool,
    pub report: Report,
}

/// Outcome of the rank-1 irreducibility analysis.
#[derive(Debug, Serialize)]
pub struct Irreducibility {
    pub irreducible: bool,
    pub candidates: Vec<Candidate>,
}

fn same_system(a: &FusionSystem, b: &FusionSystem) -> bool {
    a.base() == b.base() && a.contains_system(b) && b.contains_system(a)
}

/// The subsystem over `s0` generated by `Aut_F(P)` for every `P ≤ s0`.
fn restriction(f: &FusionSystem, s0: SubId, label: &str) -> Result<FusionSystem> {
    let amb = f.ambient();
    let mut gens = Vec::new();
    for p in amb.subgroups_of(s0) {
        for images in f.automorphisms(p) {
            gens.push(Iso { dom: p, cod: p, images });
        }
    }
    FusionSystem::from_isos(amb, s0, label, gens)
}

/// `T`, `S`, or the generator labels of a subgroup.
fn short_name(f: &FusionSystem, a: SubId) -> String {
    let amb = f.ambient();
    if a == f.torus() {
        "T".into()
    } else if a == f.base() {
        "S".into()
    } else {
        let gens: Vec<String> = amb.sub(a).gens().iter().map(|&g| amb.label(g)).collect();
        format!("<{}>", gens.join(","))
    }
}

/// The candidate family described in the module documentation, deduplicated,
/// excluding `F` itself, in a fixed order.
pub fn rank1_candidates(f: &FusionSystem) -> Result<Vec<(String, FusionSystem)>> {
    require_rank_one(f)?;
    let amb = f.ambient();
    let mut raw: Vec<(String, FusionSystem)> = Vec::new();
    for s0 in closed_over_torus(f) {
        let d = short_name(f, s0);
        raw.push((format!("F_{d}({d})"), FusionSystem::inner(amb, s0, &format!("F_{d}({d})"))));
        raw.push((format!("aut_formula({d})"), aut_formula_subsystem(f, s0, &format!("aut_formula({d})"))?));
        raw.push((format!("restriction({d})"), restriction(f, s0, &format!("restriction({d})"))?));
    }
    let h = hyperfocal(f)?;
    for r in amb.overgroups_of(h).into_iter().filter(|&r| amb.is_sub(r, f.base())) {
        let d = short_name(f, r);
        raw.push((format!("p_power_index({d})"), p_power_index_subsystem(f, r)?));
    }
    let mut out: Vec<(String, FusionSystem)> = Vec::new();
    for (name, sys) in raw {
        if same_system(&sys, f) || out.iter().any(|(_, o)| same_system(o, &sys)) {
            continue;
        }
        out.push((name, sys));
    }
    Ok(out)
}

/// Decides irreducibility of a rank-1 system over the candidate family.
pub fn irreducibility_rank1(f: &FusionSystem) -> Result<Irreducibility> {
    let amb = f.ambient();
    let mut candidates = Vec::new();
    for (name, sys) in rank1_candidates(f)? {
        let report = is_normal_subsystem(&sys, f)?;
        candidates.push(Candidate { name, base_order: amb.sub_order(sys.base()), normal: report.passed(), report });
    }
    Ok(Irreducibility { irreducible: candidates.iter().all(|c| !c.normal), candidates })
}

/// [`irreducibility_rank1`] as a report with tag `irreducible` and the candidate
/// certificate under `details.candidates`.
pub fn is_irreducible_rank1(f: &FusionSystem) -> Result<Report> {
    let start = Instant::now();
    let result = irreducibility_rank1(f)?;
    let axiom = match result.candidates.iter().find(|c| c.normal) {
        None => AxiomResult::pass("irreducible").with_note(format!(
            "none of the {} candidate subsystems of maximal rank is normal",
            result.candidates.len()
        )),
        Some(c) => AxiomResult::fail(
            "irreducible",
            Witness {
                clause: "proper normal subsystem of maximal rank".into(),
                values: [("base_order".to_string(), c.base_order as u64)].into_iter().collect(),
                detail: format!("{} passes N1 to N4 in {}", c.name, f.label()),
                ..Witness::default()
            },
        ),
    };
    Ok(Report::from_axioms(vec![axiom], millis_since(start))
        .with_detail("candidates", serde_json::to_value(&result.candidates).expect("serializes")))
}
