//! Finite transporter systems and the validation of their axioms.
//!
//! Morphism sets are finite labeled sets. Each morphism records its source and
//! target objects, `ρ(φ)` as images of the sorted elements of the source, and the
//! element `g` when `φ = ε(g)`. Composition is an explicit table of triples
//! `[f, g, f∘g]` (apply `g` first) covering every composable pair.

pub mod build;
pub mod extension;
pub mod quotient;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::ambient::SubId;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fusion::FusionSystem;
use crate::group::{Elem, FiniteGroup};
use crate::report::{millis_since, AxiomResult, Report, Witness};

pub const A1: &str = "A1";
pub const A2: &str = "A2";
pub const B: &str = "B";
pub const C: &str = "C";
pub const I: &str = "I";
pub const II: &str = "II";
pub const III: &str = "III";

/// One morphism of a transporter category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismData {
    /// Index of the source object.
    pub source: usize,
    /// Index of the target object.
    pub target: usize,
    /// `ρ(φ)` as images of the sorted elements of the source.
    pub rho: Vec<Elem>,
    /// The element `g ∈ N_S(P, Q)` with `φ = ε(g)`, if there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Elem>,
}

/// Serialized transporter category over a named ambient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransporterData {
    /// Catalog name of the fusion system, optionally followed by `/<gens>` for a quotient.
    pub ambient: String,
    /// Objects as sorted element lists of the ambient group.
    pub objects: Vec<Vec<Elem>>,
    /// Morphisms; a morphism's label is its index.
    pub morphisms: Vec<MorphismData>,
    /// Triples `[f, g, h]` with `h = f ∘ g`.
    pub composition: Vec<[usize; 3]>,
}

impl TransporterData {
    /// Parses JSON data.
    pub fn from_json(text: &str) -> Result<TransporterData> {
        Ok(serde_json::from_str(text)?)
    }

    /// JSON with one record per line.
    pub fn to_json(&self) -> String {
        fn list<T: Serialize>(items: &[T]) -> String {
            let lines: Vec<String> =
                items.iter().map(|x| format!("    {}", serde_json::to_string(x).expect("data serializes"))).collect();
            if lines.is_empty() {
                "[]".into()
            } else {
                format!("[\n{}\n  ]", lines.join(",\n"))
            }
        }
        format!(
            "{{\n  \"ambient\": {},\n  \"objects\": {},\n  \"morphisms\": {},\n  \"composition\": {}\n}}\n",
            serde_json::to_string(&self.ambient).expect("string serializes"),
            list(&self.objects),
            list(&self.morphisms),
            list(&self.composition)
        )
    }
}

/// A transporter category checked for well-formedness, bound to its fusion system.
#[derive(Debug)]
pub struct Transporter {
    fusion: FusionSystem,
    data: TransporterData,
    objects: Vec<SubId>,
    /// `mor[p][q]`: labels of `Mor(P, Q)` in label order.
    mor: Vec<Vec<Vec<usize>>>,
    comp: HashMap<(usize, usize), usize>,
    eps: HashMap<(usize, usize, Elem), usize>,
    identity: Vec<usize>,
}

impl Transporter {
    /// Binds data to a fusion system over the same ambient.
    ///
    /// Fails with [`Error::Malformed`] when the data is not a category, for
    /// example when an index is out of range or an identity is missing.
    pub fn new(fusion: FusionSystem, data: TransporterData) -> Result<Transporter> {
        let amb = fusion.ambient().clone();
        let bad = |msg: String| Error::Malformed(msg);
        let mut objects = Vec::with_capacity(data.objects.len());
        for (i, elems) in data.objects.iter().enumerate() {
            let id = amb
                .id_of_elements(elems)
                .ok_or_else(|| bad(format!("object {i} is not a subgroup of {}", amb.name())))?;
            if !amb.is_sub(id, fusion.base()) {
                return Err(bad(format!("object {i} does not lie in the base")));
            }
            if objects.contains(&id) {
                return Err(bad(format!("object {i} is listed twice")));
            }
            objects.push(id);
        }
        let n = objects.len();
        let mut mor = vec![vec![Vec::new(); n]; n];
        let mut eps = HashMap::new();
        for (label, m) in data.morphisms.iter().enumerate() {
            if m.source >= n || m.target >= n {
                return Err(bad(format!("morphism {label} has an object index out of range")));
            }
            if m.rho.len() != amb.sub_order(objects[m.source]) {
                return Err(bad(format!("morphism {label}: rho has the wrong length")));
            }
            if m.rho.iter().any(|&y| y as usize >= amb.order()) {
                return Err(bad(format!("morphism {label}: rho leaves the ambient group")));
            }
            if let Some(g) = m.eps {
                if g as usize >= amb.order() || eps.insert((m.source, m.target, g), label).is_some() {
                    return Err(bad(format!("morphism {label}: eps element repeated or out of range")));
                }
            }
            mor[m.source][m.target].push(label);
        }
        let mut comp = HashMap::new();
        let count = data.morphisms.len();
        for &[f, g, h] in &data.composition {
            if f >= count || g >= count || h >= count {
                return Err(bad(format!("composition [{f}, {g}, {h}] has a label out of range")));
            }
            let (mf, mg, mh) = (&data.morphisms[f], &data.morphisms[g], &data.morphisms[h]);
            if mg.target != mf.source || mh.source != mg.source || mh.target != mf.target {
                return Err(bad(format!("composition [{f}, {g}, {h}] does not match sources and targets")));
            }
            if let Some(old) = comp.insert((f, g), h) {
                if old != h {
                    return Err(bad(format!("composition of {f} after {g} is given twice")));
                }
            }
        }
        let one = amb.group().identity();
        let mut identity = Vec::with_capacity(n);
        for p in 0..n {
            let id = *eps.get(&(p, p, one)).ok_or_else(|| bad(format!("object {p} has no identity ε(1)")))?;
            identity.push(id);
        }
        let t = Transporter { fusion, data, objects, mor, comp, eps, identity };
        t.check_category()?;
        Ok(t)
    }

    /// Loads JSON data, building the fusion system from its `ambient` name.
    pub fn from_json(text: &str, budget: &Budget) -> Result<Transporter> {
        let data = TransporterData::from_json(text)?;
        let fusion = quotient::system_for_name(&data.ambient, budget)?;
        Transporter::new(fusion, data)
    }

    fn check_category(&self) -> Result<()> {
        let n = self.objects.len();
        for p in 0..n {
            for q in 0..n {
                for &g in &self.mor[p][q] {
                    for r in 0..n {
                        for &f in &self.mor[q][r] {
                            if !self.comp.contains_key(&(f, g)) {
                                return Err(Error::Malformed(format!("composition of {f} after {g} is missing")));
                            }
                        }
                    }
                    if self.comp[&(g, self.identity[p])] != g || self.comp[&(self.identity[q], g)] != g {
                        return Err(Error::Malformed(format!("identity law fails at morphism {g}")));
                    }
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                for &g in &self.mor[p][q] {
                    for r in 0..n {
                        for &f in &self.mor[q][r] {
                            let fg = self.comp[&(f, g)];
                            for s in 0..n {
                                for &e in &self.mor[r][s] {
                                    if self.comp[&(e, fg)] != self.comp[&(self.comp[&(e, f)], g)] {
                                        return Err(Error::Malformed(format!(
                                            "composition is not associative at ({e}, {f}, {g})"
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The fusion system the data lives over.
    pub fn fusion(&self) -> &FusionSystem {
        &self.fusion
    }

    /// The underlying data.
    pub fn data(&self) -> &TransporterData {
        &self.data
    }

    /// Objects as subgroup ids, in data order.
    pub fn objects(&self) -> &[SubId] {
        &self.objects
    }

    /// Index of an object, if it is one.
    pub fn object_index(&self, p: SubId) -> Option<usize> {
        self.objects.iter().position(|&o| o == p)
    }

    /// Labels of `Mor(P, Q)` by object index.
    pub fn mor(&self, p: usize, q: usize) -> &[usize] {
        &self.mor[p][q]
    }

    /// `f ∘ g`.
    pub fn compose(&self, f: usize, g: usize) -> usize {
        self.comp[&(f, g)]
    }

    /// `ε_{P,Q}(g)`, if defined.
    pub fn eps(&self, p: usize, q: usize, g: Elem) -> Option<usize> {
        self.eps.get(&(p, q, g)).copied()
    }

    /// The identity of an object.
    pub fn identity(&self, p: usize) -> usize {
        self.identity[p]
    }

    /// The morphism with a given label.
    pub fn morphism(&self, label: usize) -> &MorphismData {
        &self.data.morphisms[label]
    }

    /// `|Mor(P, Q)|` for every pair of objects, by object index.
    pub fn mor_sizes(&self) -> Vec<Vec<usize>> {
        self.mor.iter().map(|row| row.iter().map(Vec::len).collect()).collect()
    }

    /// `Aut_T(P)` as a finite group, with the label of each element.
    pub fn aut_group(&self, p: usize) -> Result<(crate::group::Group, Vec<usize>)> {
        let mut labels = self.mor[p][p].clone();
        // The identity comes first, as group construction expects.
        let pos = labels.iter().position(|&l| l == self.identity[p]).expect("identity is an automorphism");
        labels.swap(0, pos);
        let index: HashMap<usize, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let names: Vec<String> = labels.iter().map(|l| format!("m{l}")).collect();
        let group = FiniteGroup::from_fn(labels.len(), names, |a, b| index[&self.compose(labels[a], labels[b])])?;
        Ok((group, labels))
    }

    /// `E(P) = Ker(ρ_P)`.
    pub fn kernel(&self, p: usize) -> Vec<usize> {
        let amb = self.fusion.ambient();
        let elems = amb.sub(self.objects[p]).elements();
        self.mor[p][p].iter().copied().filter(|&l| self.data.morphisms[l].rho == elems).collect()
    }
}

/// The full subcategory on the objects in `keep`.
pub fn restrict_objects(t: &Transporter, keep: &[SubId]) -> Result<Transporter> {
    let amb = t.fusion.ambient();
    let old: Vec<usize> = keep
        .iter()
        .map(|&p| t.object_index(p).ok_or_else(|| Error::Precondition(format!("{} is not an object", amb.describe(p)))))
        .collect::<Result<_>>()?;
    let new_index: HashMap<usize, usize> = old.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let mut relabel = HashMap::new();
    let mut morphisms = Vec::new();
    for (label, m) in t.data.morphisms.iter().enumerate() {
        if let (Some(&s), Some(&d)) = (new_index.get(&m.source), new_index.get(&m.target)) {
            relabel.insert(label, morphisms.len());
            morphisms.push(MorphismData { source: s, target: d, rho: m.rho.clone(), eps: m.eps });
        }
    }
    let composition = t
        .data
        .composition
        .iter()
        .filter_map(|&[f, g, h]| Some([*relabel.get(&f)?, *relabel.get(&g)?, *relabel.get(&h)?]))
        .collect();
    let data = TransporterData {
        ambient: t.data.ambient.clone(),
        objects: old.iter().map(|&o| t.data.objects[o].clone()).collect(),
        morphisms,
        composition,
    };
    let fusion = FusionSystem::from_isos(amb, t.fusion.base(), t.fusion.label(), t.fusion.generators().to_vec())?;
    Transporter::new(fusion, data)
}

fn witness(
    t: &Transporter,
    clause: &str,
    p: usize,
    q: Option<usize>,
    morphism: Option<usize>,
    detail: String,
) -> Witness {
    let amb = t.fusion.ambient();
    let mut values = BTreeMap::new();
    if let Some(l) = morphism {
        values.insert("label".to_string(), l as u64);
    }
    Witness {
        clause: clause.into(),
        subgroup: amb.sub(t.objects[p]).elements().to_vec(),
        target: q.map(|q| amb.sub(t.objects[q]).elements().to_vec()).unwrap_or_default(),
        morphism: morphism.map(|l| t.data.morphisms[l].rho.clone()).unwrap_or_default(),
        values,
        detail,
    }
}

/// Checks axioms (A1), (A2), (B), (C), (I) and (II). Axiom (III) is reported as
/// vacuous, since a finite object set has no infinite ascending chains.
pub fn validate_transporter(t: &Transporter) -> Report {
    let start = Instant::now();
    let axioms = vec![
        axiom_a1(t),
        axiom_a2(t),
        axiom_b(t),
        axiom_c(t),
        axiom_i(t),
        axiom_ii(t),
        AxiomResult::pass(III).with_note("vacuous at truncation: finite object sets have no infinite ascending chains"),
    ];
    let mut report = Report::from_axioms(axioms, millis_since(start));
    let sizes: BTreeMap<String, usize> =
        (0..t.objects.len()).map(|p| (t.fusion.ambient().describe(t.objects[p]), t.mor[p][p].len())).collect();
    report = report.with_detail("aut_orders", serde_json::to_value(sizes).expect("serializes"));
    report
}

/// Elements `g` of the base with `g P g⁻¹ ≤ Q`.
fn transporter_set(t: &Transporter, p: usize, q: usize) -> Vec<Elem> {
    let amb = t.fusion.ambient();
    let (pp, qq) = (t.objects[p], t.objects[q]);
    amb.sub(t.fusion.base())
        .elements()
        .iter()
        .copied()
        .filter(|&g| amb.sub(pp).gens().iter().all(|&x| amb.contains(qq, amb.group().conj(g, x))))
        .collect()
}

fn compose_images(t: &Transporter, f: usize, g: usize) -> Vec<Elem> {
    let amb = t.fusion.ambient();
    let (mf, mg) = (&t.data.morphisms[f], &t.data.morphisms[g]);
    let mid = t.objects[mf.source];
    mg.rho.iter().map(|&y| mf.rho[amb.pos(mid, y).expect("image lies in the middle object")]).collect()
}

fn axiom_a1(t: &Transporter) -> AxiomResult {
    let f = &t.fusion;
    let amb = f.ambient();
    let n = t.objects.len();
    for (i, &p) in t.objects.iter().enumerate() {
        if let Some(&r) = f.conjugacy_class(p).iter().find(|r| t.object_index(**r).is_none()) {
            return AxiomResult::fail(
                A1,
                witness(
                    t,
                    "objects are not closed under F-conjugacy",
                    i,
                    None,
                    None,
                    format!("{} is missing", amb.describe(r)),
                ),
            );
        }
        if let Some(&r) = amb.overgroups_of(p).iter().find(|&&r| amb.is_sub(r, f.base()) && t.object_index(r).is_none())
        {
            return AxiomResult::fail(
                A1,
                witness(
                    t,
                    "objects are not closed under overgroups",
                    i,
                    None,
                    None,
                    format!("{} is missing", amb.describe(r)),
                ),
            );
        }
    }
    for p in 0..n {
        for q in 0..n {
            let ns = transporter_set(t, p, q);
            let with_eps = t.mor[p][q].iter().filter(|&&l| t.data.morphisms[l].eps.is_some()).count();
            if let Some(&g) = ns.iter().find(|&&g| t.eps(p, q, g).is_none()) {
                return AxiomResult::fail(
                    A1,
                    witness(
                        t,
                        "ε is not defined on N_S(P, Q)",
                        p,
                        Some(q),
                        None,
                        format!("no morphism ε({})", amb.label(g)),
                    ),
                );
            }
            if with_eps != ns.len() {
                return AxiomResult::fail(
                    A1,
                    witness(
                        t,
                        "ε has values outside N_S(P, Q)",
                        p,
                        Some(q),
                        None,
                        format!("{with_eps} labelled, {} expected", ns.len()),
                    ),
                );
            }
            let mut images: HashSet<&[Elem]> = HashSet::new();
            for &l in &t.mor[p][q] {
                let rho = &t.data.morphisms[l].rho;
                let lands = rho.iter().all(|&y| amb.contains(t.objects[q], y));
                if !lands || !f.is_morphism(t.objects[p], rho) {
                    return AxiomResult::fail(
                        A1,
                        witness(t, "ρ(φ) is not in Hom_F(P, Q)", p, Some(q), Some(l), "bad image".into()),
                    );
                }
                images.insert(rho);
            }
            let homs = f.hom_count(t.objects[p], t.objects[q]);
            if images.len() != homs {
                return AxiomResult::fail(
                    A1,
                    Witness {
                        values: [("images".to_string(), images.len() as u64), ("homs".to_string(), homs as u64)]
                            .into_iter()
                            .collect(),
                        ..witness(
                            t,
                            "ρ is not surjective onto Hom_F(P, Q)",
                            p,
                            Some(q),
                            None,
                            "missing morphisms".into(),
                        )
                    },
                );
            }
        }
    }
    for (&(f_, g_), &h) in &t.comp {
        if compose_images(t, f_, g_) != t.data.morphisms[h].rho {
            let src = t.data.morphisms[g_].source;
            return AxiomResult::fail(
                A1,
                witness(t, "ρ does not respect composition", src, None, Some(h), format!("at {f_} after {g_}")),
            );
        }
        let (ef, eg) = (t.data.morphisms[f_].eps, t.data.morphisms[g_].eps);
        if let (Some(a), Some(b)) = (ef, eg) {
            if t.data.morphisms[h].eps != Some(amb.group().mul(a, b)) {
                let src = t.data.morphisms[g_].source;
                return AxiomResult::fail(
                    A1,
                    witness(t, "ε does not respect composition", src, None, Some(h), format!("at {f_} after {g_}")),
                );
            }
        }
    }
    AxiomResult::pass(A1)
}

fn axiom_a2(t: &Transporter) -> AxiomResult {
    let n = t.objects.len();
    for p in 0..n {
        let kernel = t.kernel(p);
        for q in 0..n {
            let mut fibers: HashMap<&[Elem], Vec<usize>> = HashMap::new();
            for &l in &t.mor[p][q] {
                fibers.entry(&t.data.morphisms[l].rho).or_default().push(l);
            }
            for &phi in &t.mor[p][q] {
                let mut orbit: Vec<usize> = kernel.iter().map(|&e| t.compose(phi, e)).collect();
                orbit.sort_unstable();
                orbit.dedup();
                if orbit.len() != kernel.len() {
                    return AxiomResult::fail(
                        A2,
                        witness(
                            t,
                            "E(P) does not act freely",
                            p,
                            Some(q),
                            Some(phi),
                            format!("orbit of size {} for |E(P)| = {}", orbit.len(), kernel.len()),
                        ),
                    );
                }
                let mut fiber = fibers[t.data.morphisms[phi].rho.as_slice()].clone();
                fiber.sort_unstable();
                if fiber != orbit {
                    return AxiomResult::fail(
                        A2,
                        Witness {
                            values: [
                                ("orbit".to_string(), orbit.len() as u64),
                                ("fiber".to_string(), fiber.len() as u64),
                            ]
                            .into_iter()
                            .collect(),
                            ..witness(
                                t,
                                "ρ is not the orbit map of E(P)",
                                p,
                                Some(q),
                                Some(phi),
                                "fiber differs from orbit".into(),
                            )
                        },
                    );
                }
            }
        }
    }
    AxiomResult::pass(A2)
}

fn axiom_b(t: &Transporter) -> AxiomResult {
    let amb = t.fusion.ambient();
    for (label, m) in t.data.morphisms.iter().enumerate() {
        if let Some(g) = m.eps {
            if amb.conj_images(g, t.objects[m.source]) != m.rho {
                return AxiomResult::fail(
                    B,
                    witness(
                        t,
                        "ρ(ε(g)) differs from c_g",
                        m.source,
                        Some(m.target),
                        Some(label),
                        format!("g = {}", amb.label(g)),
                    ),
                );
            }
        }
    }
    AxiomResult::pass(B)
}

fn axiom_c(t: &Transporter) -> AxiomResult {
    let amb = t.fusion.ambient();
    for (phi, m) in t.data.morphisms.iter().enumerate() {
        let (p, q) = (m.source, m.target);
        for (i, &g) in amb.sub(t.objects[p]).elements().iter().enumerate() {
            let left = t.eps(p, p, g).map(|e| t.compose(phi, e));
            let right = t.eps(q, q, m.rho[i]).map(|e| t.compose(e, phi));
            if left.is_none() || right != left {
                return AxiomResult::fail(
                    C,
                    witness(
                        t,
                        "φ ∘ ε_P(g) differs from ε_Q(ρ(φ)(g)) ∘ φ",
                        p,
                        Some(q),
                        Some(phi),
                        format!("g = {}", amb.label(g)),
                    ),
                );
            }
        }
    }
    AxiomResult::pass(C)
}

fn axiom_i(t: &Transporter) -> AxiomResult {
    let f = &t.fusion;
    let amb = f.ambient();
    let prime = amb.p() as usize;
    let mut seen = HashSet::new();
    for p in 0..t.objects.len() {
        if !seen.insert(f.class_index(t.objects[p])) {
            continue;
        }
        let good = f.conjugacy_class(t.objects[p]).into_iter().any(|r| {
            let Some(ri) = t.object_index(r) else { return false };
            let aut = t.mor[ri][ri].len();
            let ns = amb.sub_order(f.normalizer(r));
            aut.is_multiple_of(ns) && !(aut / ns).is_multiple_of(prime)
        });
        if !good {
            return AxiomResult::fail(
                I,
                witness(
                    t,
                    "no object in the class has ε(N_S(P)) Sylow in Aut_T(P)",
                    p,
                    None,
                    None,
                    amb.describe(t.objects[p]),
                ),
            );
        }
    }
    AxiomResult::pass(I)
}

fn axiom_ii(t: &Transporter) -> AxiomResult {
    let f = &t.fusion;
    let amb = f.ambient();
    let one = amb.group().identity();
    let n = t.objects.len();
    for p in 0..n {
        let pp = t.objects[p];
        let bars: Vec<usize> = amb
            .overgroups_of(pp)
            .into_iter()
            .filter(|&r| amb.is_sub(r, f.normalizer(pp)) && r != pp)
            .filter_map(|r| t.object_index(r))
            .collect();
        for q in 0..n {
            let qq = t.objects[q];
            if amb.sub_order(qq) != amb.sub_order(pp) {
                continue;
            }
            let nq: Vec<Elem> = amb.sub(f.normalizer(qq)).elements().to_vec();
            for &phi in &t.mor[p][q] {
                for &pb in &bars {
                    // Q̄ = {h ∈ N_S(Q) : ε_Q(h) ∘ φ = φ ∘ ε_P(g) for some g ∈ P̄}.
                    let targets: HashSet<usize> = amb
                        .sub(t.objects[pb])
                        .elements()
                        .iter()
                        .filter_map(|&g| t.eps(p, p, g).map(|e| t.compose(phi, e)))
                        .collect();
                    let qbar: Vec<Elem> = nq
                        .iter()
                        .copied()
                        .filter(|&h| t.eps(q, q, h).is_some_and(|e| targets.contains(&t.compose(e, phi))))
                        .collect();
                    if qbar.len() != amb.sub_order(t.objects[pb]) {
                        continue;
                    }
                    let Some(qb) = amb.id_of_elements(&qbar).and_then(|id| t.object_index(id)) else {
                        return AxiomResult::fail(
                            II,
                            witness(t, "the subgroup Q̄ is not an object", p, Some(q), Some(phi), "Q̄ missing".into()),
                        );
                    };
                    let (Some(incl_p), Some(incl_q)) = (t.eps(p, pb, one), t.eps(q, qb, one)) else {
                        return AxiomResult::fail(
                            II,
                            witness(t, "an inclusion ε(1) is missing", p, Some(q), Some(phi), "no inclusion".into()),
                        );
                    };
                    let want = t.compose(incl_q, phi);
                    if !t.mor[pb][qb].iter().any(|&ext| t.compose(ext, incl_p) == want) {
                        return AxiomResult::fail(
                            II,
                            witness(
                                t,
                                "φ does not extend to P̄",
                                p,
                                Some(q),
                                Some(phi),
                                format!("P̄ = {}", amb.describe(t.objects[pb])),
                            ),
                        );
                    }
                }
            }
        }
    }
    AxiomResult::pass(II)
}
