//! JSON form of a fusion system: the ambient group and the generators.
//!
//! Elements are encoded by their indices in the ambient group. Each generator
//! entry lists a subgroup, a generating set of it, and for every generator
//! morphism the images of that generating set. An entry with a `target` holds
//! isomorphisms onto that subgroup; without one the maps are automorphisms.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ambient::{Ambient, SubId};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fusion::{FusionSystem, Iso};
use crate::group::{Elem, FiniteGroup, GroupHom, Subgroup};
use crate::truncation::{Truncation, TruncationSpec};

/// The ambient group of a serialized system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AmbientDoc {
    /// A truncated p-toral group given by its parameters.
    Truncation {
        spec: TruncationSpec,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        names: BTreeMap<String, Elem>,
    },
    /// A finite p-group given by its multiplication table.
    Table {
        p: u64,
        table: Vec<Vec<Elem>>,
        torus: Vec<Elem>,
        rank: usize,
        level: u32,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        names: BTreeMap<String, Elem>,
    },
}

/// Generator morphisms sharing a domain (and target).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    /// Elements of the domain subgroup.
    pub subgroup: Vec<Elem>,
    /// Generating set of the domain.
    pub gens: Vec<Elem>,
    /// Elements of the image subgroup, when different from the domain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<Elem>>,
    /// For each morphism, the images of `gens`.
    pub automorphisms: Vec<Vec<Elem>>,
}

/// A serialized fusion system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDoc {
    pub name: String,
    pub ambient: AmbientDoc,
    /// Elements of the base subgroup, when it is not the whole ambient.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<Elem>>,
    pub generators: Vec<GeneratorDoc>,
}

/// Serializes a fusion system.
pub fn to_doc(f: &FusionSystem) -> SystemDoc {
    let amb = f.ambient();
    let ambient = match amb.truncation() {
        Some(t) => AmbientDoc::Truncation { spec: t.spec().clone(), names: amb.names().clone() },
        None => {
            let g = amb.group();
            let n = g.order() as Elem;
            AmbientDoc::Table {
                p: amb.p(),
                table: (0..n).map(|a| (0..n).map(|b| g.mul(a, b)).collect()).collect(),
                torus: amb.torus().elements().to_vec(),
                rank: amb.rank(),
                level: amb.level(),
                names: amb.names().clone(),
            }
        }
    };
    let mut grouped: BTreeMap<(SubId, SubId), Vec<Vec<Elem>>> = BTreeMap::new();
    for g in f.generators() {
        let sub = amb.sub(g.dom);
        let imgs = sub.gens().iter().map(|&x| g.images[amb.pos(g.dom, x).expect("generator")]).collect();
        grouped.entry((g.dom, g.cod)).or_default().push(imgs);
    }
    let generators = grouped
        .into_iter()
        .map(|((dom, cod), automorphisms)| GeneratorDoc {
            subgroup: amb.sub(dom).elements().to_vec(),
            gens: amb.sub(dom).gens().to_vec(),
            target: (dom != cod).then(|| amb.sub(cod).elements().to_vec()),
            automorphisms,
        })
        .collect();
    SystemDoc {
        name: f.label().to_string(),
        ambient,
        base: (f.base() != amb.whole()).then(|| amb.sub(f.base()).elements().to_vec()),
        generators,
    }
}

fn ambient_of(doc: &SystemDoc, budget: &Budget) -> Result<Arc<Ambient>> {
    match &doc.ambient {
        AmbientDoc::Truncation { spec, names } => {
            let t = Truncation::new(spec.clone(), budget)?;
            if let Some((k, _)) = names.iter().find(|(_, &e)| e as usize >= t.group().order()) {
                return Err(Error::Malformed(format!("name {k} refers to a missing element")));
            }
            Ambient::from_truncation(&doc.name, t, names.clone(), budget)
        }
        AmbientDoc::Table { p, table, torus, rank, level, names } => {
            let n = table.len();
            budget.check_group_order(n)?;
            if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x as usize >= n)) {
                return Err(Error::Malformed("multiplication table is not square".into()));
            }
            let g = FiniteGroup::from_fn(n, (0..n).map(|i| format!("#{i}")).collect(), |a, b| table[a][b] as usize)?;
            if torus.iter().any(|&x| x as usize >= n) {
                return Err(Error::Malformed("torus element out of range".into()));
            }
            let torus = Subgroup::from_elements(&g, torus);
            Ambient::from_group(&doc.name, *p, g, torus, *rank, *level, names.clone(), budget)
        }
    }
}

fn check_range(amb: &Ambient, elems: &[Elem]) -> Result<()> {
    if elems.iter().any(|&x| x as usize >= amb.order()) {
        return Err(Error::Malformed("element index out of range".into()));
    }
    Ok(())
}

fn subgroup_id(amb: &Ambient, elems: &[Elem]) -> Result<SubId> {
    check_range(amb, elems)?;
    amb.id_of_elements(elems).ok_or_else(|| Error::Malformed("element list is not a subgroup".into()))
}

/// Rebuilds a fusion system from its serialized form.
pub fn from_doc(doc: &SystemDoc, budget: &Budget) -> Result<FusionSystem> {
    let amb = ambient_of(doc, budget)?;
    let base = match &doc.base {
        Some(elems) => subgroup_id(&amb, elems)?,
        None => amb.whole(),
    };
    let mut isos = Vec::new();
    for g in &doc.generators {
        let dom = subgroup_id(&amb, &g.subgroup)?;
        let cod = match &g.target {
            Some(t) => subgroup_id(&amb, t)?,
            None => dom,
        };
        check_range(&amb, &g.gens)?;
        if g.gens.iter().any(|&x| !amb.contains(dom, x)) || amb.generated(&g.gens) != dom {
            return Err(Error::Malformed("listed generators do not generate the subgroup".into()));
        }
        let domain = Subgroup::generated(amb.group(), &g.gens);
        for imgs in &g.automorphisms {
            check_range(&amb, imgs)?;
            if imgs.len() != g.gens.len() || imgs.iter().any(|&y| !amb.contains(cod, y)) {
                return Err(Error::Malformed("generator images do not fit the target".into()));
            }
            // `domain.gens()` keeps only the non-redundant listed generators.
            let kept: Vec<Elem> = domain
                .gens()
                .iter()
                .map(|&x| imgs[g.gens.iter().position(|&y| y == x).expect("kept generator is listed")])
                .collect();
            let hom = GroupHom::from_gen_images(&domain, amb.sub(cod), &kept)?;
            if g.gens.iter().zip(imgs).any(|(&x, &y)| hom.apply(x) != y) {
                return Err(Error::InvalidGenerator("generator images violate a relation of the domain".into()));
            }
            let images: Vec<Elem> = amb.sub(dom).elements().iter().map(|&x| hom.apply(x)).collect();
            isos.push(Iso { dom, cod, images });
        }
    }
    FusionSystem::from_isos(&amb, base, &doc.name, isos)
}
