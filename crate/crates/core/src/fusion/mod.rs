//! Fusion systems generated by isomorphisms between subgroups.
//!
//! A fusion system is stored through its generators. The closure is computed
//! once, lazily, as a groupoid: subgroups of the base are split into
//! F-conjugacy classes by a breadth-first search along restrictions of the
//! generators, each class member `Q` gets a fixed isomorphism `φ_Q` from the
//! class representative `R`, and `Aut_F(R)` is the permutation group generated
//! by the loops `φ_{Q'}⁻¹ ∘ α ∘ φ_Q`. Every Hom-set is then
//! `{ φ_{P'} ∘ a ∘ φ_P⁻¹ : a ∈ Aut_F(R), P' ∈ P^F, P' ≤ Q }`.

pub mod sat1;
pub mod saturation;
pub mod stability;

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;

use crate::ambient::{Ambient, SubId};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{Elem, GroupHom, Subgroup};

/// A permutation of the positions `0..|R|` of a class representative.
pub type Perm = Vec<u16>;

/// An isomorphism between two subgroups of the ambient group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Iso {
    /// Domain subgroup id.
    pub dom: SubId,
    /// Image subgroup id.
    pub cod: SubId,
    /// Images aligned with the sorted elements of the domain.
    pub images: Vec<Elem>,
}

impl Iso {
    /// Whether domain and image coincide.
    pub fn is_automorphism(&self) -> bool {
        self.dom == self.cod
    }
}

#[derive(Debug)]
struct Member {
    id: SubId,
    /// `φ(R[i])` for each position `i` of the representative.
    phi: Vec<Elem>,
    /// For each position `j` of this member, the position `i` in `R` with `φ(R[i]) = Q[j]`.
    phiinv: Vec<u16>,
}

#[derive(Debug)]
struct Class {
    members: Vec<Member>,
    auts: Vec<Perm>,
    aut_index: HashMap<Perm, usize>,
}

#[derive(Debug)]
struct Closure {
    /// For each subgroup of the base: (class, member index). `None` outside the base.
    place: Vec<Option<(usize, usize)>>,
    classes: Vec<Class>,
    /// `N_{S₀}(P)` and `C_{S₀}(P)` for subgroups of the base `S₀`.
    norm: Vec<SubId>,
    cent: Vec<SubId>,
}

/// A fusion system over a subgroup `S₀` (the base) of an ambient p-group.
pub struct FusionSystem {
    ambient: Arc<Ambient>,
    base: SubId,
    label: String,
    generators: Vec<Iso>,
    closure: OnceLock<Closure>,
}

impl std::fmt::Debug for FusionSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FusionSystem({}, {} generators)", self.label, self.generators.len())
    }
}

impl FusionSystem {
    /// The fusion system over `S` generated by `Hom_S` and the given automorphisms.
    ///
    /// Each generator must be an automorphism of its domain.
    pub fn generate(ambient: &Arc<Ambient>, label: &str, generators: &[GroupHom]) -> Result<FusionSystem> {
        let mut isos = Vec::with_capacity(generators.len());
        for g in generators {
            let iso = iso_from_hom(ambient, g)?;
            if !iso.is_automorphism() {
                return Err(Error::InvalidGenerator(format!(
                    "generator on {} is not an automorphism",
                    ambient.describe(iso.dom)
                )));
            }
            isos.push(iso);
        }
        FusionSystem::from_isos(ambient, ambient.whole(), label, isos)
    }

    /// The fusion system over the base `S₀` generated by `Hom_{S₀}` and the given isomorphisms.
    pub fn from_isos(ambient: &Arc<Ambient>, base: SubId, label: &str, generators: Vec<Iso>) -> Result<FusionSystem> {
        for g in &generators {
            validate_iso(ambient, base, g)?;
        }
        let mut gens = generators;
        gens.sort_by(|a, b| (a.dom, &a.images).cmp(&(b.dom, &b.images)));
        gens.dedup();
        Ok(FusionSystem {
            ambient: ambient.clone(),
            base,
            label: label.to_string(),
            generators: gens,
            closure: OnceLock::new(),
        })
    }

    /// The fusion system `F_{S₀}(S₀)` with only inner morphisms.
    pub fn inner(ambient: &Arc<Ambient>, base: SubId, label: &str) -> FusionSystem {
        FusionSystem::from_isos(ambient, base, label, Vec::new()).expect("no generators to validate")
    }

    /// The ambient group.
    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    /// The base subgroup `S₀` over which the system lives.
    pub fn base(&self) -> SubId {
        self.base
    }

    /// Display label.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Generators (excluding inner automorphisms).
    pub fn generators(&self) -> &[Iso] {
        &self.generators
    }

    /// The maximal torus of the base, `T ∩ S₀`.
    pub fn torus(&self) -> SubId {
        self.ambient.meet(self.ambient.torus_id(), self.base)
    }

    /// Ids of all subgroups of the base, in lattice order.
    pub fn objects(&self) -> Vec<SubId> {
        let c = self.closure();
        self.ambient.ids().filter(|&i| c.place[i].is_some()).collect()
    }

    /// Whether `p` is a subgroup of the base.
    pub fn is_object(&self, p: SubId) -> bool {
        self.closure().place[p].is_some()
    }

    fn closure(&self) -> &Closure {
        self.closure.get_or_init(|| build_closure(&self.ambient, self.base, &self.generators))
    }

    /// Forces the closure computation, failing early when the ambient exceeds the budget.
    pub fn ensure_closed(&self, budget: &Budget) -> Result<()> {
        budget.check_group_order(self.ambient.order())?;
        self.closure();
        Ok(())
    }

    fn place(&self, p: SubId) -> (usize, usize) {
        self.closure().place[p].unwrap_or_else(|| panic!("subgroup {p} is not an object of {}", self.label))
    }

    /// `N_{S₀}(P)`.
    pub fn normalizer(&self, p: SubId) -> SubId {
        self.place(p);
        self.closure().norm[p]
    }

    /// `C_{S₀}(P)`.
    pub fn centralizer(&self, p: SubId) -> SubId {
        self.place(p);
        self.closure().cent[p]
    }

    /// Index of the F-conjugacy class of `p`.
    pub fn class_index(&self, p: SubId) -> usize {
        self.place(p).0
    }

    /// Number of F-conjugacy classes of subgroups.
    pub fn class_count(&self) -> usize {
        self.closure().classes.len()
    }

    /// Members of the class with a given index, in lattice order.
    pub fn class_members(&self, class: usize) -> Vec<SubId> {
        let mut out: Vec<SubId> = self.closure().classes[class].members.iter().map(|m| m.id).collect();
        out.sort_unstable();
        out
    }

    /// The F-conjugacy class `P^F`, in lattice order.
    pub fn conjugacy_class(&self, p: SubId) -> Vec<SubId> {
        self.class_members(self.class_index(p))
    }

    /// Smallest member of each class, one per class, in class order.
    pub fn class_representatives(&self) -> Vec<SubId> {
        (0..self.class_count()).map(|c| self.class_members(c)[0]).collect()
    }

    /// `|Aut_F(P)|`.
    pub fn aut_order(&self, p: SubId) -> usize {
        self.closure().classes[self.place(p).0].auts.len()
    }

    /// `|Aut_{S₀}(P)| = |N_{S₀}(P)| / |C_{S₀}(P)|`.
    pub fn aut_s_order(&self, p: SubId) -> usize {
        self.ambient.sub_order(self.normalizer(p)) / self.ambient.sub_order(self.centralizer(p))
    }

    /// `|Inn(P)| = |P| / |Z(P)|`.
    pub fn inn_order(&self, p: SubId) -> usize {
        self.ambient.sub_order(p) / self.ambient.sub_order(self.ambient.center(p))
    }

    /// `|Out_F(P)|`.
    pub fn out_order(&self, p: SubId) -> usize {
        self.aut_order(p) / self.inn_order(p)
    }

    /// `Aut_F(P)` as image lists aligned with the elements of `P`.
    pub fn automorphisms(&self, p: SubId) -> Vec<Vec<Elem>> {
        let (c, k) = self.place(p);
        let class = &self.closure().classes[c];
        let m = &class.members[k];
        class.auts.iter().map(|a| m.phiinv.iter().map(|&i| m.phi[a[i as usize] as usize]).collect()).collect()
    }

    /// `Aut_F(P)` as permutations of the positions of `P`.
    pub fn automorphism_perms(&self, p: SubId) -> Vec<Perm> {
        let amb = &self.ambient;
        self.automorphisms(p)
            .into_iter()
            .map(|imgs| imgs.iter().map(|&y| amb.pos(p, y).expect("automorphism image") as u16).collect())
            .collect()
    }

    /// `Hom_F(P, Q)` as image lists aligned with the elements of `P`.
    pub fn hom_images(&self, p: SubId, q: SubId) -> Vec<Vec<Elem>> {
        let (c, k) = self.place(p);
        let class = &self.closure().classes[c];
        let mp = &class.members[k];
        let mut targets: Vec<&Member> = class.members.iter().filter(|m| self.ambient.is_sub(m.id, q)).collect();
        targets.sort_by_key(|m| m.id);
        let mut out = Vec::with_capacity(targets.len() * class.auts.len());
        for m in targets {
            for a in &class.auts {
                out.push(mp.phiinv.iter().map(|&i| m.phi[a[i as usize] as usize]).collect());
            }
        }
        out
    }

    /// `|Hom_F(P, Q)|`.
    pub fn hom_count(&self, p: SubId, q: SubId) -> usize {
        let (c, _) = self.place(p);
        let class = &self.closure().classes[c];
        class.members.iter().filter(|m| self.ambient.is_sub(m.id, q)).count() * class.auts.len()
    }

    /// `Hom_F(P, Q)` as [`GroupHom`] values.
    pub fn hom_set(&self, p: SubId, q: SubId) -> Vec<GroupHom> {
        let dp = self.ambient.sub(p);
        let dq = self.ambient.sub(q);
        self.hom_images(p, q).into_iter().map(|imgs| GroupHom::from_images_unchecked(dp, dq, imgs)).collect()
    }

    /// `Iso_F(P, Q)`: the F-isomorphisms from `P` onto `Q` (empty unless `Q ∈ P^F`).
    pub fn iso_images(&self, p: SubId, q: SubId) -> Vec<Vec<Elem>> {
        let (c, k) = self.place(p);
        let class = &self.closure().classes[c];
        let mp = &class.members[k];
        let Some(mq) = class.members.iter().find(|m| m.id == q) else { return Vec::new() };
        class.auts.iter().map(|a| mp.phiinv.iter().map(|&i| mq.phi[a[i as usize] as usize]).collect()).collect()
    }

    /// Searches `Hom_F(big, within)` for a morphism whose restriction to `small`
    /// sends `small.gens()` to `gen_images`. Returns the images of `big`'s elements.
    pub fn find_extension(&self, big: SubId, small: SubId, gen_images: &[Elem], within: SubId) -> Option<Vec<Elem>> {
        let pairs: Vec<(Elem, Elem)> =
            self.ambient.sub(small).gens().iter().copied().zip(gen_images.iter().copied()).collect();
        self.find_morphism_with(big, within, &pairs)
    }

    /// Searches `Hom_F(big, within)` for a morphism sending each `x` to `y` for the
    /// given pairs `(x, y)`, with every `x` in `big`. Returns the images of `big`'s elements.
    pub fn find_morphism_with(&self, big: SubId, within: SubId, pairs: &[(Elem, Elem)]) -> Option<Vec<Elem>> {
        let mut found = None;
        self.scan_morphisms_with(big, within, pairs, &mut |imgs| {
            found = Some(imgs);
            false
        });
        found
    }

    /// All morphisms in `Hom_F(big, within)` sending each `x` to `y` for the given pairs.
    pub fn morphisms_with(&self, big: SubId, within: SubId, pairs: &[(Elem, Elem)]) -> Vec<Vec<Elem>> {
        let mut out = Vec::new();
        self.scan_morphisms_with(big, within, pairs, &mut |imgs| {
            out.push(imgs);
            true
        });
        out
    }

    /// Feeds matching morphisms to `visit` in a fixed order until it returns `false`.
    fn scan_morphisms_with(
        &self,
        big: SubId,
        within: SubId,
        pairs: &[(Elem, Elem)],
        visit: &mut dyn FnMut(Vec<Elem>) -> bool,
    ) {
        let amb = &self.ambient;
        let (c, k) = self.place(big);
        let class = &self.closure().classes[c];
        let mb = &class.members[k];
        let pos: Vec<usize> =
            pairs.iter().map(|&(x, _)| mb.phiinv[amb.pos(big, x).expect("element of big")] as usize).collect();
        let mut targets: Vec<&Member> = class.members.iter().filter(|m| amb.is_sub(m.id, within)).collect();
        targets.sort_by_key(|m| m.id);
        for m in targets {
            if pairs.iter().any(|&(_, y)| !amb.contains(m.id, y)) {
                continue;
            }
            for a in &class.auts {
                if pos.iter().zip(pairs).all(|(&i, &(_, y))| m.phi[a[i] as usize] == y)
                    && !visit(mb.phiinv.iter().map(|&i| m.phi[a[i as usize] as usize]).collect())
                {
                    return;
                }
            }
        }
    }

    /// Whether the map `P -> S` with the given images (aligned with `P`'s elements) lies in F.
    pub fn is_morphism(&self, p: SubId, images: &[Elem]) -> bool {
        let amb = &self.ambient;
        if images.len() != amb.sub_order(p) || !self.is_object(p) {
            return false;
        }
        let mut set = FixedBitSet::with_capacity(amb.order());
        for &y in images {
            set.insert(y as usize);
        }
        let Some(target) = amb.id_of_set(&set) else { return false };
        let Some((c2, k2)) = self.closure().place[target] else { return false };
        let (c, k) = self.place(p);
        if c != c2 || set.count_ones(..) != images.len() {
            return false;
        }
        let class = &self.closure().classes[c];
        let (mp, mt) = (&class.members[k], &class.members[k2]);
        let perm: Option<Perm> = mp
            .phi
            .iter()
            .map(|&x| amb.pos(p, x).and_then(|j| amb.pos(target, images[j])).map(|j| mt.phiinv[j]))
            .collect();
        match perm {
            Some(perm) => class.aut_index.contains_key(&perm),
            None => false,
        }
    }

    /// Whether every generator of `other` (over the same ambient) is a morphism of `self`.
    pub fn contains_system(&self, other: &FusionSystem) -> bool {
        Arc::ptr_eq(&self.ambient, &other.ambient)
            && self.ambient.is_sub(other.base, self.base)
            && other.generators.iter().all(|g| self.is_morphism(g.dom, &g.images))
            && self.ambient.sub(other.base).gens().iter().all(|&s| {
                let imgs = self.ambient.conj_images(s, other.base);
                self.is_morphism(other.base, &imgs)
            })
    }

    /// Whether `P` maximizes `|N_{S₀}(·)|` over its class.
    pub fn is_fully_normalized(&self, p: SubId) -> bool {
        let n = self.ambient.sub_order(self.normalizer(p));
        self.conjugacy_class(p).iter().all(|&q| self.ambient.sub_order(self.normalizer(q)) <= n)
    }

    /// Whether `P` maximizes `|C_{S₀}(·)|` over its class.
    pub fn is_fully_centralized(&self, p: SubId) -> bool {
        let n = self.ambient.sub_order(self.centralizer(p));
        self.conjugacy_class(p).iter().all(|&q| self.ambient.sub_order(self.centralizer(q)) <= n)
    }

    /// The smallest fully normalized member of the class of `p`.
    pub fn fully_normalized_rep(&self, p: SubId) -> SubId {
        let members = self.conjugacy_class(p);
        let best = members.iter().map(|&q| self.ambient.sub_order(self.normalizer(q))).max().unwrap_or(0);
        *members.iter().find(|&&q| self.ambient.sub_order(self.normalizer(q)) == best).expect("nonempty class")
    }

    /// The F-class of the element `x`: all `f(x)` for `f ∈ Hom_F(⟨x⟩, S₀)`.
    pub fn element_class(&self, x: Elem) -> Vec<Elem> {
        let amb = &self.ambient;
        let c = amb.generated(&[x]);
        let (ci, k) = self.place(c);
        let class = &self.closure().classes[ci];
        let i = class.members[k].phiinv[amb.pos(c, x).expect("generator of its cyclic subgroup")];
        let orbit: HashSet<u16> = class.auts.iter().map(|a| a[i as usize]).collect();
        let mut out: Vec<Elem> =
            class.members.iter().flat_map(|m| orbit.iter().map(move |&j| m.phi[j as usize])).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Partition of the elements of order `p` of the base into F-classes.
    pub fn element_classes_of_order_p(&self) -> Vec<Vec<Elem>> {
        let amb = &self.ambient;
        let p = amb.p() as u32;
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for &x in amb.sub(self.base).elements() {
            if amb.group().elem_order(x) != p || seen.contains(&x) {
                continue;
            }
            let cls = self.element_class(x);
            seen.extend(cls.iter().copied());
            out.push(cls);
        }
        out
    }

    /// Rebuilds the closure from scratch and reports whether anything changed.
    ///
    /// The closure of a closed system adds nothing; this is used as a self-check.
    pub fn closure_is_idempotent(&self) -> bool {
        let mut gens = self.generators.clone();
        for p in self.class_representatives() {
            for imgs in self.automorphisms(p) {
                gens.push(Iso { dom: p, cod: p, images: imgs });
            }
        }
        let again = match FusionSystem::from_isos(&self.ambient, self.base, "recheck", gens) {
            Ok(f) => f,
            Err(_) => return false,
        };
        self.objects()
            .iter()
            .all(|&p| again.aut_order(p) == self.aut_order(p) && again.conjugacy_class(p) == self.conjugacy_class(p))
    }

    /// A generating set of F as isomorphisms: `Aut_F(R)` for each class representative
    /// together with `φ_Q` for each other member.
    pub fn canonical_generators(&self) -> Vec<Iso> {
        let c = self.closure();
        let mut out = Vec::new();
        for class in &c.classes {
            let rep = class.members[0].id;
            for a in &class.auts {
                let sub = self.ambient.sub(rep);
                out.push(Iso { dom: rep, cod: rep, images: a.iter().map(|&i| sub.elements()[i as usize]).collect() });
            }
            for m in &class.members[1..] {
                out.push(Iso { dom: rep, cod: m.id, images: m.phi.clone() });
            }
        }
        out
    }
}

/// Converts a [`GroupHom`] between subgroups of the ambient into an [`Iso`].
pub fn iso_from_hom(ambient: &Ambient, hom: &GroupHom) -> Result<Iso> {
    let dom = ambient
        .id_of(hom.domain())
        .ok_or_else(|| Error::AmbientMismatch("generator domain is not a subgroup of S".into()))?;
    if !Arc::ptr_eq(hom.codomain().group(), ambient.group()) {
        return Err(Error::AmbientMismatch("generator codomain is not in S".into()));
    }
    if !hom.is_injective() {
        return Err(Error::InvalidGenerator(format!("generator on {} is not injective", ambient.describe(dom))));
    }
    let cod = ambient.id_of(&hom.image()).expect("image is a subgroup");
    Ok(Iso { dom, cod, images: hom.images().to_vec() })
}

fn validate_iso(amb: &Ambient, base: SubId, g: &Iso) -> Result<()> {
    if !amb.is_sub(g.dom, base) || !amb.is_sub(g.cod, base) {
        return Err(Error::InvalidGenerator("generator does not live inside the base subgroup".into()));
    }
    let dom = amb.sub(g.dom);
    if g.images.len() != dom.order() || amb.sub_order(g.cod) != dom.order() {
        return Err(Error::InvalidGenerator("generator is not a bijection onto its image".into()));
    }
    if g.images.iter().any(|&y| !amb.contains(g.cod, y)) {
        return Err(Error::InvalidGenerator("generator image leaves its codomain".into()));
    }
    let hom = GroupHom::from_images(dom, amb.sub(g.cod), g.images.clone())?;
    if !hom.is_injective() {
        return Err(Error::InvalidGenerator("generator is not injective".into()));
    }
    Ok(())
}

/// Inverse of an isomorphism.
pub fn invert_iso(amb: &Ambient, g: &Iso) -> Iso {
    let dom = amb.sub(g.dom);
    let mut images = vec![0; g.images.len()];
    for (i, &y) in g.images.iter().enumerate() {
        images[amb.pos(g.cod, y).expect("image element")] = dom.elements()[i];
    }
    Iso { dom: g.cod, cod: g.dom, images }
}

/// Composition `b ∘ a` of isomorphisms with `a.cod ≤ b.dom`.
pub fn compose_iso(amb: &Ambient, b: &Iso, a: &Iso) -> Iso {
    let images: Vec<Elem> = a.images.iter().map(|&y| b.images[amb.pos(b.dom, y).expect("composable")]).collect();
    let cod = image_id(amb, &images);
    Iso { dom: a.dom, cod, images }
}

/// Restriction of an isomorphism to a subgroup `p` of its domain.
pub fn restrict_iso(amb: &Ambient, g: &Iso, p: SubId) -> Iso {
    let images: Vec<Elem> =
        amb.sub(p).elements().iter().map(|&x| g.images[amb.pos(g.dom, x).expect("restriction")]).collect();
    let cod = image_id(amb, &images);
    Iso { dom: p, cod, images }
}

/// Conjugation by `s` on subgroup `p`, as an isomorphism onto `s p s⁻¹`.
pub fn conj_iso(amb: &Ambient, s: Elem, p: SubId) -> Iso {
    let images = amb.conj_images(s, p);
    let cod = image_id(amb, &images);
    Iso { dom: p, cod, images }
}

/// Lattice id of the subgroup whose elements are `images`.
pub fn image_id(amb: &Ambient, images: &[Elem]) -> SubId {
    let mut set = FixedBitSet::with_capacity(amb.order());
    for &y in images {
        set.insert(y as usize);
    }
    amb.id_of_set(&set).expect("image of a homomorphism is a subgroup")
}

/// All elements of the permutation group generated by `gens` on `degree` points, sorted.
pub fn perm_closure(degree: usize, gens: &[Perm]) -> Vec<Perm> {
    let id: Perm = (0..degree as u16).collect();
    let mut set: HashSet<Perm> = HashSet::new();
    set.insert(id.clone());
    let mut elems = vec![id];
    let mut useful: Vec<&Perm> = Vec::new();
    for g in gens {
        if set.contains(g) {
            continue;
        }
        useful.push(g);
        // Re-close: every current element times every useful generator.
        let mut i = 0;
        while i < elems.len() {
            for h in &useful {
                let prod: Perm = elems[i].iter().map(|&k| h[k as usize]).collect();
                if set.insert(prod.clone()) {
                    elems.push(prod);
                }
            }
            i += 1;
        }
    }
    elems.sort();
    elems
}

/// Indices of a generating set of the group formed by `perms`, chosen greedily in order.
pub fn generating_subset(degree: usize, perms: &[Perm]) -> Vec<usize> {
    let mut chosen: Vec<Perm> = Vec::new();
    let mut out = Vec::new();
    let mut reached: HashSet<Perm> = perm_closure(degree, &[]).into_iter().collect();
    for (i, p) in perms.iter().enumerate() {
        if reached.contains(p) {
            continue;
        }
        chosen.push(p.clone());
        out.push(i);
        reached = perm_closure(degree, &chosen).into_iter().collect();
        if reached.len() == perms.len() {
            break;
        }
    }
    out
}

fn build_closure(amb: &Ambient, base: SubId, generators: &[Iso]) -> Closure {
    let n = amb.subgroup_count();
    let mut edges: Vec<Iso> = amb.sub(base).gens().iter().map(|&s| conj_iso(amb, s, base)).collect();
    for g in generators {
        edges.push(g.clone());
        if !g.is_automorphism() {
            edges.push(invert_iso(amb, g));
        }
    }
    let objects: Vec<SubId> = amb.ids().filter(|&i| amb.is_sub(i, base)).collect();
    let applicable: Vec<Vec<usize>> = (0..n)
        .map(|q| {
            if amb.is_sub(q, base) {
                (0..edges.len()).filter(|&e| amb.is_sub(q, edges[e].dom)).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let mut place: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut classes: Vec<Class> = Vec::new();
    let mut set = FixedBitSet::with_capacity(amb.order());
    for &start in &objects {
        if place[start].is_some() {
            continue;
        }
        let ci = classes.len();
        let rep_elems = amb.sub(start).elements().to_vec();
        let degree = rep_elems.len();
        let mut members = vec![Member { id: start, phi: rep_elems.clone(), phiinv: (0..degree as u16).collect() }];
        place[start] = Some((ci, 0));
        let mut loops: HashSet<Perm> = HashSet::new();
        let identity: Perm = (0..degree as u16).collect();
        let mut idx = 0;
        while idx < members.len() {
            let q = members[idx].id;
            for &e in &applicable[q] {
                let g = &edges[e];
                let mapped: Vec<Elem> =
                    members[idx].phi.iter().map(|&y| g.images[amb.pos(g.dom, y).expect("edge applies")]).collect();
                set.clear();
                for &y in &mapped {
                    set.insert(y as usize);
                }
                let target = amb.id_of_set(&set).expect("image is a subgroup");
                match place[target] {
                    None => {
                        let mut phiinv = vec![0u16; degree];
                        for (i, &y) in mapped.iter().enumerate() {
                            phiinv[amb.pos(target, y).expect("member element")] = i as u16;
                        }
                        place[target] = Some((ci, members.len()));
                        members.push(Member { id: target, phi: mapped, phiinv });
                    }
                    Some((c2, k)) => {
                        debug_assert_eq!(c2, ci);
                        let m = &members[k];
                        let perm: Perm =
                            mapped.iter().map(|&y| m.phiinv[amb.pos(target, y).expect("member element")]).collect();
                        if perm != identity {
                            loops.insert(perm);
                        }
                    }
                }
            }
            idx += 1;
        }
        let mut loops: Vec<Perm> = loops.into_iter().collect();
        loops.sort();
        let auts = perm_closure(degree, &loops);
        let aut_index = auts.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        classes.push(Class { members, auts, aut_index });
    }
    let mut norm = vec![usize::MAX; n];
    let mut cent = vec![usize::MAX; n];
    for &p in &objects {
        norm[p] = amb.meet(amb.normalizer(p), base);
        cent[p] = amb.meet(amb.centralizer(p), base);
    }
    Closure { place, classes, norm, cent }
}

/// Subgroup helper used by analysis code: the subgroup of `S` as a [`Subgroup`].
pub fn sub_of(f: &FusionSystem, id: SubId) -> &Subgroup {
    f.ambient().sub(id)
}
