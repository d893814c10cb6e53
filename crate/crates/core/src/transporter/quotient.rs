//! Quotients by an F-normal subgroup, and fusion-system isomorphism search.
//!
//! Only morphisms between subgroups containing `A` are used to generate `F/A`;
//! every subgroup of `S/A` has the form `P/A` with `A ≤ P`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::ambient::{Ambient, SubId};
use crate::analysis::closed::is_f_normal;
use crate::budget::Budget;
use crate::catalog;
use crate::error::{Error, Result};
use crate::fusion::{generating_subset, image_id, FusionSystem, Iso};
use crate::group::{injective_homs, quotient_group, Elem, Subgroup};

use super::{MorphismData, Transporter, TransporterData};

/// Largest group order the isomorphism search accepts.
pub const ISOMORPHISM_ORDER_CAP: usize = 512;

/// `S/A` as an ambient, with the projection from `S`.
#[derive(Debug, Clone)]
pub struct QuotientAmbient {
    pub ambient: Arc<Ambient>,
    /// `proj[s]` is the image of the ambient element `s`.
    pub proj: Vec<Elem>,
}

impl QuotientAmbient {
    /// The image `P/A` of a subgroup `P`.
    pub fn image(&self, amb: &Ambient, p: SubId) -> SubId {
        let mut elems: Vec<Elem> = amb.sub(p).elements().iter().map(|&x| self.proj[x as usize]).collect();
        elems.sort_unstable();
        elems.dedup();
        self.ambient.id_of_elements(&elems).expect("image of a subgroup is a subgroup")
    }
}

fn log_p(mut n: usize, p: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        n /= p as usize;
        k += 1;
    }
    k
}

/// Generator labels of a subgroup, as `<a,b>`.
pub fn generator_text(amb: &Ambient, a: SubId) -> String {
    let gens: Vec<String> = amb.sub(a).gens().iter().map(|&g| amb.label(g)).collect();
    format!("<{}>", gens.join(","))
}

/// The ambient `S/A` for `A` normal in `S`.
///
/// The torus of the quotient is the image of the torus. Its rank is the rank of
/// the image's socle and its level is the exponent of the image. Element names
/// carry over, except names of elements of `A`.
pub fn quotient_ambient(amb: &Arc<Ambient>, a: SubId, budget: &Budget) -> Result<QuotientAmbient> {
    let whole = amb.sub(amb.whole());
    if !amb.sub(a).is_normal_in(whole) {
        return Err(Error::Precondition(format!("{} is not normal in S", amb.describe(a))));
    }
    let (group, proj) = quotient_group(amb.group(), amb.sub(a))?;
    let torus_elems: Vec<Elem> = amb.torus().elements().iter().map(|&x| proj[x as usize]).collect();
    let torus = Subgroup::generated(&group, &torus_elems);
    let p = amb.p();
    let socle = torus.elements().iter().filter(|&&x| group.elem_order(x) as u64 <= p).count();
    let rank = log_p(socle, p) as usize;
    let exponent = torus.elements().iter().map(|&x| group.elem_order(x)).max().unwrap_or(1);
    let level = log_p(exponent as usize, p);
    let mut names = BTreeMap::new();
    let mut taken = std::collections::HashSet::new();
    for (k, &v) in amb.names() {
        let image = proj[v as usize];
        if image != group.identity() && taken.insert(image) {
            names.insert(k.clone(), image);
        }
    }
    let name = format!("{}/{}", amb.name(), generator_text(amb, a));
    let ambient = Ambient::from_group(&name, p, group, torus, rank, level, names, budget)?;
    Ok(QuotientAmbient { ambient, proj })
}

/// `ind(f)` on `P/A`, for `f` defined on `P ≥ A` with images aligned to `P`.
fn induced(amb: &Ambient, qa: &QuotientAmbient, p: SubId, images: &[Elem]) -> Result<Iso> {
    let dom = qa.image(amb, p);
    let mut out: Vec<Option<Elem>> = vec![None; qa.ambient.sub_order(dom)];
    for (i, &x) in amb.sub(p).elements().iter().enumerate() {
        let at = qa.ambient.pos(dom, qa.proj[x as usize]).expect("image of P");
        let y = qa.proj[images[i] as usize];
        match out[at] {
            None => out[at] = Some(y),
            Some(old) if old == y => {}
            Some(_) => return Err(Error::Precondition("morphism does not preserve A".into())),
        }
    }
    let images: Vec<Elem> = out.into_iter().map(|y| y.expect("every coset is hit")).collect();
    let cod = image_id(&qa.ambient, &images);
    Ok(Iso { dom, cod, images })
}

fn require_f_normal(f: &FusionSystem, a: SubId) -> Result<()> {
    if f.base() != f.ambient().whole() {
        return Err(Error::Precondition("quotients need a system over the whole ambient".into()));
    }
    if !is_f_normal(f, a) {
        return Err(Error::Precondition(format!("{} is not F-normal in {}", f.ambient().describe(a), f.label())));
    }
    Ok(())
}

/// `F/A` over `S/A`, generated by `ind(f)` for isomorphisms `f` between subgroups containing `A`.
pub fn quotient_fusion(f: &FusionSystem, a: SubId, budget: &Budget) -> Result<(FusionSystem, QuotientAmbient)> {
    require_f_normal(f, a)?;
    let amb = f.ambient();
    let qa = quotient_ambient(amb, a, budget)?;
    let mut gens = Vec::new();
    for r in f.class_representatives().into_iter().filter(|&r| amb.is_sub(a, r)) {
        let auts = f.automorphisms(r);
        for i in generating_subset(amb.sub_order(r), &f.automorphism_perms(r)) {
            gens.push(induced(amb, &qa, r, &auts[i])?);
        }
        for q in f.conjugacy_class(r).into_iter().filter(|&q| q != r) {
            gens.push(induced(amb, &qa, r, &f.iso_images(r, q)[0])?);
        }
    }
    let label = format!("{}/{}", f.label(), generator_text(amb, a));
    let system = FusionSystem::from_isos(&qa.ambient, qa.ambient.whole(), &label, gens)?;
    Ok((system, qa))
}

/// The fusion system named by `name`: a catalog name, optionally followed by
/// `/<g1,g2,...>` for the quotient by the subgroup those elements generate.
pub fn system_for_name(name: &str, budget: &Budget) -> Result<FusionSystem> {
    match name.rfind("/<") {
        None => Ok(catalog::build(name, budget)?.system),
        Some(cut) => {
            let base = system_for_name(&name[..cut], budget)?;
            let inner = name[cut + 2..]
                .strip_suffix('>')
                .ok_or_else(|| Error::UnknownEntry(format!("quotient suffix in {name:?}")))?;
            let amb = base.ambient();
            let gens: Vec<Elem> = inner
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| amb.parse_element(s))
                .collect::<Result<_>>()?;
            let a = amb.generated(&gens);
            Ok(quotient_fusion(&base, a, budget)?.0)
        }
    }
}

/// `T/A`: objects `P/A` for objects `P ≥ A`, morphisms `Mor(P, Q)/ε_P(A)`.
pub fn quotient_transporter(t: &Transporter, a: SubId, budget: &Budget) -> Result<Transporter> {
    Ok(quotient_with_orbits(t, a, budget)?.0)
}

/// [`quotient_transporter`] together with the quotient label of each retained morphism.
pub fn quotient_with_orbits(
    t: &Transporter,
    a: SubId,
    budget: &Budget,
) -> Result<(Transporter, HashMap<usize, usize>)> {
    let f = t.fusion();
    let amb = f.ambient();
    let (fq, qa) = quotient_fusion(f, a, budget)?;
    let kept: Vec<usize> = (0..t.objects().len()).filter(|&i| amb.is_sub(a, t.objects()[i])).collect();
    let new_index: HashMap<usize, usize> = kept.iter().enumerate().map(|(n, &o)| (o, n)).collect();
    let a_elems = amb.sub(a).elements();
    let mut class_of: HashMap<usize, usize> = HashMap::new();
    let mut morphisms: Vec<MorphismData> = Vec::new();
    for (label, m) in t.data().morphisms.iter().enumerate() {
        let (Some(&s), Some(&d)) = (new_index.get(&m.source), new_index.get(&m.target)) else { continue };
        if class_of.contains_key(&label) {
            continue;
        }
        let orbit: Vec<usize> = a_elems
            .iter()
            .map(|&x| {
                let e = t.eps(m.source, m.source, x).ok_or_else(|| Error::Malformed("ε_P(A) is not defined".into()))?;
                Ok(t.compose(label, e))
            })
            .collect::<Result<_>>()?;
        let p = t.objects()[m.source];
        let iso = induced(amb, &qa, p, &m.rho)?;
        let eps = orbit.iter().find_map(|&l| t.morphism(l).eps).map(|g| qa.proj[g as usize]);
        for &l in &orbit {
            if induced(amb, &qa, p, &t.morphism(l).rho)?.images != iso.images {
                return Err(Error::Precondition("ρ is not constant on ε_P(A)-orbits".into()));
            }
            class_of.insert(l, morphisms.len());
        }
        morphisms.push(MorphismData { source: s, target: d, rho: iso.images, eps });
    }
    let mut composition = Vec::new();
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for &[f_, g_, h_] in &t.data().composition {
        let (Some(&cf), Some(&cg), Some(&ch)) = (class_of.get(&f_), class_of.get(&g_), class_of.get(&h_)) else {
            continue;
        };
        match seen.insert((cf, cg), ch) {
            None => composition.push([cf, cg, ch]),
            Some(old) if old == ch => {}
            Some(_) => return Err(Error::Malformed("composition is not well defined on orbits".into())),
        }
    }
    let data = TransporterData {
        ambient: format!("{}/{}", t.data().ambient, generator_text(amb, a)),
        objects: kept.iter().map(|&o| qa.ambient.sub(qa.image(amb, t.objects()[o])).elements().to_vec()).collect(),
        morphisms,
        composition,
    };
    Ok((Transporter::new(fq, data)?, class_of))
}

/// A certified isomorphism between two fusion systems over whole ambients.
#[derive(Clone, Debug, Serialize)]
pub struct FusionIsomorphism {
    pub source: String,
    pub target: String,
    /// Each generator of the source group with its image, by label.
    pub generator_images: Vec<(String, String)>,
    /// Image of every element of the source group.
    pub map: Vec<Elem>,
}

/// Whether the bijective homomorphism `map: S₁ -> S₂` carries the generators of
/// `f1` into `f2` and the generators of `f2` back into `f1`.
pub fn verify_fusion_isomorphism(f1: &FusionSystem, f2: &FusionSystem, map: &[Elem]) -> bool {
    let mut inverse = vec![0 as Elem; map.len()];
    for (x, &y) in map.iter().enumerate() {
        inverse[y as usize] = x as Elem;
    }
    carries(f1, f2, map) && carries(f2, f1, &inverse)
}

fn carries(from: &FusionSystem, to: &FusionSystem, map: &[Elem]) -> bool {
    let (a1, a2) = (from.ambient(), to.ambient());
    from.generators().iter().all(|g| {
        let mut dom: Vec<Elem> = a1.sub(g.dom).elements().iter().map(|&x| map[x as usize]).collect();
        dom.sort_unstable();
        let Some(d) = a2.id_of_elements(&dom) else { return false };
        let images: Vec<Elem> = dom
            .iter()
            .map(|&y| {
                let x = a1.sub(g.dom).elements().iter().position(|&x| map[x as usize] == y).expect("preimage");
                map[g.images[x] as usize]
            })
            .collect();
        to.is_morphism(d, &images)
    })
}

/// Searches for an isomorphism `f1 ≅ f2`: a group isomorphism of the bases that
/// carries the generators of each system into the other.
pub fn fusion_isomorphism(f1: &FusionSystem, f2: &FusionSystem, budget: &Budget) -> Result<Option<FusionIsomorphism>> {
    let (a1, a2) = (f1.ambient(), f2.ambient());
    if f1.base() != a1.whole() || f2.base() != a2.whole() {
        return Err(Error::Precondition("isomorphism search needs systems over whole ambients".into()));
    }
    if a1.order() > ISOMORPHISM_ORDER_CAP {
        return Err(Error::Budget {
            what: "isomorphism search group order".into(),
            size: a1.order(),
            cap: ISOMORPHISM_ORDER_CAP,
        });
    }
    if a1.order() != a2.order() || a1.p() != a2.p() {
        return Ok(None);
    }
    let whole1 = a1.sub(a1.whole());
    for hom in injective_homs(whole1, a2.sub(a2.whole()), budget)? {
        let map = hom.images().to_vec();
        if verify_fusion_isomorphism(f1, f2, &map) {
            let generator_images = whole1.gens().iter().map(|&g| (a1.label(g), a2.label(map[g as usize]))).collect();
            return Ok(Some(FusionIsomorphism {
                source: f1.label().to_string(),
                target: f2.label().to_string(),
                generator_images,
                map,
            }));
        }
    }
    Ok(None)
}
