//! Extensions `A → T̃ → T` of transporter systems by a finite p-group.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::ambient::SubId;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{injective_homs, is_power_of, Elem, Subgroup};
use crate::report::{millis_since, AxiomResult, Report, Witness};

use super::quotient::{fusion_isomorphism, quotient_transporter, quotient_with_orbits, system_for_name};
use super::{Transporter, TransporterData};

/// Serialized extension data, with the functor `τ` onto the base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionData {
    pub total: TransporterData,
    pub base: TransporterData,
    /// `τ` on objects: base object index of each total object.
    pub tau_objects: Vec<usize>,
    /// `τ` on morphisms: base label of each total label.
    pub tau: Vec<usize>,
    /// The kernel `A` as elements of the total ambient.
    pub kernel: Vec<Elem>,
}

/// The extension of `T/A` by `A` given by a transporter system `T` whose objects all contain `A`.
pub fn quotient_extension(total: &Transporter, a: SubId, budget: &Budget) -> Result<ExtensionData> {
    let amb = total.fusion().ambient();
    if total.objects().iter().any(|&p| !amb.is_sub(a, p)) {
        return Err(Error::Precondition("every object of the total category must contain A".into()));
    }
    let (base, orbits) = quotient_with_orbits(total, a, budget)?;
    Ok(ExtensionData {
        total: total.data().clone(),
        base: base.data().clone(),
        tau_objects: (0..total.objects().len()).collect(),
        tau: (0..total.data().morphisms.len()).map(|l| orbits[&l]).collect(),
        kernel: amb.sub(a).elements().to_vec(),
    })
}

fn fail(tag: &str, clause: &str, pair: (usize, usize), detail: String) -> AxiomResult {
    AxiomResult::fail(
        tag,
        Witness {
            clause: clause.into(),
            values: [("first".to_string(), pair.0 as u64), ("second".to_string(), pair.1 as u64)].into_iter().collect(),
            detail,
            ..Witness::default()
        },
    )
}

/// Checks conditions (i) to (iii), reconstructs `S̃` as a pull-back, verifies
/// that the quotient by `A` recovers the base, and evaluates admissibility.
///
/// Tags: `functor`, `i`, `ii`, `iii`, `pullback`, `round_trip`, `admissible`.
pub fn validate_extension(ext: &ExtensionData, budget: &Budget) -> Result<Report> {
    let start = Instant::now();
    let total = Transporter::new(system_for_name(&ext.total.ambient, budget)?, ext.total.clone())?;
    let base = Transporter::new(system_for_name(&ext.base.ambient, budget)?, ext.base.clone())?;
    let n = total.objects().len();
    if ext.tau_objects.len() != n || ext.tau.len() != ext.total.morphisms.len() {
        return Err(Error::Malformed("τ is not defined on every object and morphism".into()));
    }
    if ext.tau.iter().any(|&l| l >= ext.base.morphisms.len())
        || ext.tau_objects.iter().any(|&o| o >= base.objects().len())
    {
        return Err(Error::Malformed("τ has a value out of range".into()));
    }
    let tau = |l: usize| ext.tau[l];
    let obj = |p: usize| ext.tau_objects[p];

    let functor = check_functor(ext, &total, &base);

    // (i): kernels K_P̂ and their isomorphism type.
    let amb = total.fusion().ambient();
    let a = amb
        .id_of_elements(&ext.kernel)
        .ok_or_else(|| Error::Malformed("kernel is not a subgroup of the total ambient".into()))?;
    let kernels: Vec<Vec<usize>> = (0..n)
        .map(|p| total.mor(p, p).iter().copied().filter(|&l| tau(l) == base.identity(obj(p))).collect())
        .collect();
    let mut cond_i = AxiomResult::pass("i");
    let (a_group, _) = amb.sub(a).to_group()?;
    for (p, k) in kernels.iter().enumerate() {
        let ok = is_power_of(k.len(), amb.p()) && k.len() == amb.sub_order(a) && {
            let (aut, labels) = total.aut_group(p)?;
            let in_k: Vec<Elem> = (0..labels.len()).filter(|&i| k.contains(&labels[i])).map(|i| i as Elem).collect();
            let ks = Subgroup::from_elements(&aut, &in_k);
            !injective_homs(&Subgroup::whole(&a_group), &ks, budget)?.is_empty()
        };
        if !ok && cond_i.pass {
            cond_i = fail("i", "K_P is not isomorphic to A", (p, k.len()), format!("object {p}"));
        }
    }

    // (ii) and (iii): free actions with τ as orbit map, and surjectivity of τ.
    let mut cond_ii = AxiomResult::pass("ii");
    let mut cond_iii = AxiomResult::pass("iii");
    for p in 0..n {
        for q in 0..n {
            let mut fibers: HashMap<usize, Vec<usize>> = HashMap::new();
            for &l in total.mor(p, q) {
                fibers.entry(tau(l)).or_default().push(l);
            }
            if cond_ii.pass {
                if let Some(&missing) = base.mor(obj(p), obj(q)).iter().find(|l| !fibers.contains_key(l)) {
                    cond_ii =
                        fail("ii", "τ misses a morphism of the base", (p, missing), format!("objects {p} -> {q}"));
                }
            }
            for &phi in total.mor(p, q) {
                let mut fiber = fibers[&tau(phi)].clone();
                fiber.sort_unstable();
                let mut right: Vec<usize> = kernels[p].iter().map(|&k| total.compose(phi, k)).collect();
                right.sort_unstable();
                right.dedup();
                if cond_ii.pass && (right.len() != kernels[p].len() || right != fiber) {
                    let other = *fiber.iter().chain(&right).find(|&&l| l != phi).unwrap_or(&phi);
                    cond_ii = fail(
                        "ii",
                        "K_P does not act freely with τ as orbit map",
                        (phi, other),
                        format!("objects {p} -> {q}"),
                    );
                }
                let mut left: Vec<usize> = kernels[q].iter().map(|&k| total.compose(k, phi)).collect();
                left.sort_unstable();
                left.dedup();
                if cond_iii.pass && (left.len() != kernels[q].len() || left != fiber) {
                    let other = *fiber.iter().chain(&left).find(|&&l| l != phi).unwrap_or(&phi);
                    cond_iii = fail(
                        "iii",
                        "K_Q does not act freely with τ as orbit map",
                        (phi, other),
                        format!("objects {p} -> {q}"),
                    );
                }
            }
        }
    }

    // Pull-back S̃ = {φ ∈ Aut(Ŝ) : τ(φ) ∈ ε_S(S)} and the projection q.
    let (pullback, q_map) = pullback(&total, &base, ext)?;
    let round_trip = round_trip(&total, &base, a, budget)?;
    let admissible = admissibility(&total, &base, a, &q_map);

    Ok(Report::from_axioms(
        vec![functor, cond_i, cond_ii, cond_iii, pullback, round_trip, admissible],
        millis_since(start),
    ))
}

fn check_functor(ext: &ExtensionData, total: &Transporter, base: &Transporter) -> AxiomResult {
    let mut objs: Vec<usize> = ext.tau_objects.clone();
    objs.sort_unstable();
    objs.dedup();
    if objs.len() != ext.tau_objects.len() || objs.len() != base.objects().len() {
        return fail("functor", "τ is not a bijection on objects", (objs.len(), base.objects().len()), String::new());
    }
    for (l, m) in ext.total.morphisms.iter().enumerate() {
        let b = base.morphism(ext.tau[l]);
        if b.source != ext.tau_objects[m.source] || b.target != ext.tau_objects[m.target] {
            return fail("functor", "τ does not respect sources and targets", (l, ext.tau[l]), String::new());
        }
    }
    for &[f, g, h] in &ext.total.composition {
        if base.compose(ext.tau[f], ext.tau[g]) != ext.tau[h] {
            return fail("functor", "τ does not respect composition", (f, g), format!("composite {h}"));
        }
    }
    for p in 0..total.objects().len() {
        if ext.tau[total.identity(p)] != base.identity(ext.tau_objects[p]) {
            return fail("functor", "τ does not preserve identities", (p, total.identity(p)), String::new());
        }
    }
    AxiomResult::pass("functor")
}

/// Index of the object equal to the whole base.
fn top_object(t: &Transporter) -> Option<usize> {
    t.object_index(t.fusion().base())
}

fn pullback(
    total: &Transporter,
    base: &Transporter,
    ext: &ExtensionData,
) -> Result<(AxiomResult, HashMap<Elem, Elem>)> {
    let (Some(st), Some(sb)) = (top_object(total), top_object(base)) else {
        return Ok((fail("pullback", "S is not an object", (0, 0), String::new()), HashMap::new()));
    };
    let eps_base: HashMap<usize, Elem> =
        base.mor(sb, sb).iter().filter_map(|&l| base.morphism(l).eps.map(|g| (l, g))).collect();
    let tilde: Vec<usize> = total.mor(st, st).iter().copied().filter(|&l| eps_base.contains_key(&ext.tau[l])).collect();
    let amb = total.fusion().ambient();
    let expected = ext.kernel.len() * base.fusion().ambient().sub_order(base.fusion().base());
    let eps_total: HashSet<usize> =
        total.mor(st, st).iter().copied().filter(|&l| total.morphism(l).eps.is_some()).collect();
    let tilde_set: HashSet<usize> = tilde.iter().copied().collect();
    let mut q_map = HashMap::new();
    for &l in &tilde {
        if let Some(g) = total.morphism(l).eps {
            q_map.insert(g, eps_base[&ext.tau[l]]);
        }
    }
    let group_b = base.fusion().ambient().group();
    let hom = q_map
        .iter()
        .all(|(&x, &qx)| q_map.iter().all(|(&y, &qy)| q_map.get(&amb.group().mul(x, y)) == Some(&group_b.mul(qx, qy))));
    let kernel_ok = {
        let mut k: Vec<Elem> = q_map.iter().filter(|(_, &v)| v == group_b.identity()).map(|(&x, _)| x).collect();
        k.sort_unstable();
        k == ext.kernel
    };
    let result = if tilde.len() != expected || tilde_set != eps_total || !hom || !kernel_ok {
        AxiomResult::fail(
            "pullback",
            Witness {
                clause: "the pull-back of Aut(S) over ε(S) is not ε̃(S̃)".into(),
                values: [("pullback".to_string(), tilde.len() as u64), ("expected".to_string(), expected as u64)]
                    .into_iter()
                    .collect(),
                detail: format!("homomorphism {hom}, kernel {kernel_ok}"),
                ..Witness::default()
            },
        )
    } else {
        AxiomResult::pass("pullback").with_note(format!("|S̃| = {} = |A|·|S|", tilde.len()))
    };
    Ok((result, q_map))
}

fn round_trip(total: &Transporter, base: &Transporter, a: SubId, budget: &Budget) -> Result<AxiomResult> {
    let quotient = match quotient_transporter(total, a, budget) {
        Ok(q) => q,
        Err(e) => {
            return Ok(AxiomResult::fail(
                "round_trip",
                Witness { clause: "quotient by A failed".into(), detail: e.to_string(), ..Witness::default() },
            ))
        }
    };
    let mut sizes_q: Vec<usize> = quotient.mor_sizes().into_iter().flatten().collect();
    let mut sizes_b: Vec<usize> = base.mor_sizes().into_iter().flatten().collect();
    sizes_q.sort_unstable();
    sizes_b.sort_unstable();
    let iso = fusion_isomorphism(quotient.fusion(), base.fusion(), budget)?;
    Ok(match (sizes_q == sizes_b, iso) {
        (true, Some(cert)) => AxiomResult::pass("round_trip")
            .with_note(format!("T̃/A has the morphism-set sizes of T, and F̃/A ≅ F via {:?}", cert.generator_images)),
        (sizes, iso) => AxiomResult::fail(
            "round_trip",
            Witness {
                clause: "T̃/A does not recover the base".into(),
                detail: format!("sizes agree: {sizes}, fusion isomorphism found: {}", iso.is_some()),
                ..Witness::default()
            },
        ),
    })
}

/// With `S₁` the elements of `S` acting on `A` by inner automorphisms, every fully
/// centralized `P ≤ S` with `C_{S₁}(P) ≤ P` must be an object of the base.
fn admissibility(total: &Transporter, base: &Transporter, a: SubId, q_map: &HashMap<Elem, Elem>) -> AxiomResult {
    let amb = total.fusion().ambient();
    let fb = base.fusion();
    let bamb = fb.ambient();
    let mut lift: BTreeMap<Elem, Elem> = BTreeMap::new();
    for (&x, &qx) in q_map {
        lift.entry(qx).or_insert(x);
    }
    let a_elems = amb.sub(a).elements();
    let inner: HashSet<Vec<Elem>> = a_elems.iter().map(|&g| amb.conj_images(g, a)).collect();
    let s1: Vec<Elem> = bamb
        .sub(fb.base())
        .elements()
        .iter()
        .copied()
        .filter(|s| lift.get(s).is_some_and(|&x| inner.contains(&amb.conj_images(x, a))))
        .collect();
    let s1_id = bamb.generated(&s1);
    for p in fb.objects() {
        if !fb.is_fully_centralized(p) {
            continue;
        }
        let c = bamb.meet(bamb.centralizer(p), s1_id);
        if bamb.is_sub(c, p) && base.object_index(p).is_none() {
            return AxiomResult::fail(
                "admissible",
                Witness {
                    clause: "fully centralized P with C_{S₁}(P) ≤ P is not an object".into(),
                    subgroup: bamb.sub(p).elements().to_vec(),
                    detail: bamb.describe(p),
                    ..Witness::default()
                },
            );
        }
    }
    AxiomResult::pass("admissible").with_note(format!("S₁ = {}", bamb.describe(s1_id)))
}
