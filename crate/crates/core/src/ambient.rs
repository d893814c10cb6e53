//! The ambient p-group `S` of a fusion system, with its full subgroup lattice.
//!
//! Subgroups are addressed by their position in the sorted lattice, so
//! fusion-system data can be stored in flat vectors.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{enumerate_subgroups_of, is_power_of, Elem, FiniteGroup, Group, Subgroup};
use crate::truncation::Truncation;

/// Index of a subgroup in the ambient lattice.
pub type SubId = usize;

/// Sentinel for "not an element of this subgroup" in position tables.
const ABSENT: u16 = u16::MAX;

/// Per-subgroup cached structure.
#[derive(Debug)]
struct Entry {
    sub: Subgroup,
    normalizer: SubId,
    centralizer: SubId,
    center: SubId,
    pos: Vec<u16>,
}

/// A finite p-group together with its enumerated subgroup lattice.
#[derive(Debug)]
pub struct Ambient {
    name: String,
    p: u64,
    group: Group,
    whole: SubId,
    torus: SubId,
    rank: usize,
    level: u32,
    truncation: Option<Arc<Truncation>>,
    names: BTreeMap<String, Elem>,
    entries: Vec<Entry>,
    index: HashMap<FixedBitSet, SubId>,
}

impl Ambient {
    /// Ambient for a truncated p-toral group.
    pub fn from_truncation(
        name: &str,
        truncation: Truncation,
        names: BTreeMap<String, Elem>,
        budget: &Budget,
    ) -> Result<Arc<Ambient>> {
        let group = truncation.group().clone();
        let torus = truncation.torus().clone();
        let p = truncation.spec().p;
        let rank = truncation.spec().rank;
        let level = truncation.spec().level;
        Self::build(name, p, group, torus, rank, level, Some(Arc::new(truncation)), names, budget)
    }

    /// Ambient for an arbitrary finite p-group with a designated torus subgroup.
    #[allow(clippy::too_many_arguments)]
    pub fn from_group(
        name: &str,
        p: u64,
        group: Group,
        torus: Subgroup,
        rank: usize,
        level: u32,
        names: BTreeMap<String, Elem>,
        budget: &Budget,
    ) -> Result<Arc<Ambient>> {
        Self::build(name, p, group, torus, rank, level, None, names, budget)
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        name: &str,
        p: u64,
        group: Group,
        torus: Subgroup,
        rank: usize,
        level: u32,
        truncation: Option<Arc<Truncation>>,
        names: BTreeMap<String, Elem>,
        budget: &Budget,
    ) -> Result<Arc<Ambient>> {
        budget.check_group_order(group.order())?;
        if !is_power_of(group.order(), p) {
            return Err(Error::Precondition(format!("ambient group of order {} is not a {p}-group", group.order())));
        }
        let whole_sub = Subgroup::whole(&group);
        let subs = enumerate_subgroups_of(&whole_sub, budget)?;
        let index: HashMap<FixedBitSet, SubId> = subs.iter().enumerate().map(|(i, s)| (s.set().clone(), i)).collect();
        let n = group.order();
        let entries: Vec<Entry> = subs
            .iter()
            .map(|s| {
                let mut pos = vec![ABSENT; n];
                for (i, &e) in s.elements().iter().enumerate() {
                    pos[e as usize] = i as u16;
                }
                let normalizer = index[s.normalizer_in(&whole_sub).set()];
                let centralizer = index[s.centralizer_in(&whole_sub).set()];
                let center = index[s.center().set()];
                Entry { sub: s.clone(), normalizer, centralizer, center, pos }
            })
            .collect();
        let whole = index[whole_sub.set()];
        let torus = *index
            .get(torus.set())
            .ok_or_else(|| Error::Precondition("torus is not a subgroup of the ambient group".into()))?;
        Ok(Arc::new(Ambient {
            name: name.to_string(),
            p,
            group,
            whole,
            torus,
            rank,
            level,
            truncation,
            names,
            entries,
            index,
        }))
    }

    /// The direct product of two ambients over the same prime.
    ///
    /// Names of the factors are prefixed with `s1.` and `s2.`.
    pub fn product(a: &Ambient, b: &Ambient, budget: &Budget) -> Result<(Arc<Ambient>, Vec<Elem>, Vec<Elem>)> {
        if a.p != b.p {
            return Err(Error::Precondition(format!("prime mismatch: {} vs {}", a.p, b.p)));
        }
        budget.check_group_order(a.group.order().saturating_mul(b.group.order()))?;
        let group = FiniteGroup::direct_product(&a.group, &b.group)?;
        let nb = b.group.order() as Elem;
        let embed_a: Vec<Elem> = (0..a.group.order() as Elem).map(|x| x * nb).collect();
        let embed_b: Vec<Elem> = (0..nb).collect();
        let torus_elems: Vec<Elem> =
            a.torus().elements().iter().flat_map(|&x| b.torus().elements().iter().map(move |&y| x * nb + y)).collect();
        let torus = Subgroup::from_elements(&group, &torus_elems);
        let mut names = BTreeMap::new();
        for (k, &v) in &a.names {
            names.insert(format!("s1.{k}"), embed_a[v as usize]);
        }
        for (k, &v) in &b.names {
            names.insert(format!("s2.{k}"), embed_b[v as usize]);
        }
        let name = format!("({})x({})", a.name, b.name);
        let amb = Self::build(&name, a.p, group, torus, a.rank + b.rank, a.level.max(b.level), None, names, budget)?;
        Ok((amb, embed_a, embed_b))
    }

    /// Display name.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// The prime.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The group `S`.
    pub fn group(&self) -> &Group {
        &self.group
    }

    /// `|S|`.
    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Rank of the torus.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Truncation level (`0` for finite-group ambients).
    pub fn level(&self) -> u32 {
        self.level
    }

    /// The truncation model, when the ambient is a truncated p-toral group.
    pub fn truncation(&self) -> Option<&Arc<Truncation>> {
        self.truncation.as_ref()
    }

    /// Named elements.
    pub fn names(&self) -> &BTreeMap<String, Elem> {
        &self.names
    }

    /// A named element.
    pub fn named(&self, name: &str) -> Option<Elem> {
        self.names.get(name).copied()
    }

    /// Number of subgroups.
    pub fn subgroup_count(&self) -> usize {
        self.entries.len()
    }

    /// All subgroup ids, in lattice order.
    pub fn ids(&self) -> std::ops::Range<SubId> {
        0..self.entries.len()
    }

    /// The subgroup with a given id.
    pub fn sub(&self, id: SubId) -> &Subgroup {
        &self.entries[id].sub
    }

    /// Order of a subgroup.
    pub fn sub_order(&self, id: SubId) -> usize {
        self.entries[id].sub.order()
    }

    /// Id of `S` itself.
    pub fn whole(&self) -> SubId {
        self.whole
    }

    /// Id of the trivial subgroup.
    pub fn trivial(&self) -> SubId {
        0
    }

    /// Id of the maximal torus.
    pub fn torus_id(&self) -> SubId {
        self.torus
    }

    /// The maximal torus.
    pub fn torus(&self) -> &Subgroup {
        self.sub(self.torus)
    }

    /// `N_S(P)`.
    pub fn normalizer(&self, id: SubId) -> SubId {
        self.entries[id].normalizer
    }

    /// `C_S(P)`.
    pub fn centralizer(&self, id: SubId) -> SubId {
        self.entries[id].centralizer
    }

    /// `Z(P)`.
    pub fn center(&self, id: SubId) -> SubId {
        self.entries[id].center
    }

    /// Position of `e` in the sorted element list of subgroup `id`.
    #[inline]
    pub fn pos(&self, id: SubId, e: Elem) -> Option<usize> {
        match self.entries[id].pos[e as usize] {
            ABSENT => None,
            i => Some(i as usize),
        }
    }

    /// Whether subgroup `id` contains `e`.
    #[inline]
    pub fn contains(&self, id: SubId, e: Elem) -> bool {
        self.entries[id].pos[e as usize] != ABSENT
    }

    /// Whether `a ≤ b`.
    pub fn is_sub(&self, a: SubId, b: SubId) -> bool {
        self.entries[a].sub.is_subgroup_of(&self.entries[b].sub)
    }

    /// Id of a subgroup of `S`.
    pub fn id_of(&self, sub: &Subgroup) -> Option<SubId> {
        if !Arc::ptr_eq(sub.group(), &self.group) {
            return None;
        }
        self.index.get(sub.set()).copied()
    }

    /// Id of a subgroup given as a membership set.
    pub fn id_of_set(&self, set: &FixedBitSet) -> Option<SubId> {
        self.index.get(set).copied()
    }

    /// Id of the subgroup generated by `gens`.
    pub fn generated(&self, gens: &[Elem]) -> SubId {
        let s = Subgroup::generated(&self.group, gens);
        self.index[s.set()]
    }

    /// Id of the subgroup whose elements are exactly `elems`.
    pub fn id_of_elements(&self, elems: &[Elem]) -> Option<SubId> {
        let mut set = FixedBitSet::with_capacity(self.order());
        for &e in elems {
            if e as usize >= self.order() {
                return None;
            }
            set.insert(e as usize);
        }
        self.index.get(&set).copied()
    }

    /// Ids of all subgroups of `id`.
    pub fn subgroups_of(&self, id: SubId) -> Vec<SubId> {
        self.ids().filter(|&q| self.is_sub(q, id)).collect()
    }

    /// Ids of all subgroups containing `id`.
    pub fn overgroups_of(&self, id: SubId) -> Vec<SubId> {
        self.ids().filter(|&q| self.is_sub(id, q)).collect()
    }

    /// Intersection of two subgroups.
    pub fn meet(&self, a: SubId, b: SubId) -> SubId {
        let mut set = self.sub(a).set().clone();
        set.intersect_with(self.sub(b).set());
        self.index[&set]
    }

    /// The subgroup generated by two subgroups.
    pub fn join(&self, a: SubId, b: SubId) -> SubId {
        let mut gens = self.sub(a).gens().to_vec();
        gens.extend_from_slice(self.sub(b).gens());
        self.generated(&gens)
    }

    /// Element label (a name if one is registered).
    pub fn label(&self, e: Elem) -> String {
        for (k, &v) in &self.names {
            if v == e {
                return k.clone();
            }
        }
        self.group.label(e).to_string()
    }

    /// Parses an element expression: `name`, `name^k`, `#index`, or products joined by `*`.
    pub fn parse_element(&self, text: &str) -> Result<Elem> {
        let g = &self.group;
        let mut acc = g.identity();
        for factor in text.split('*') {
            let factor = factor.trim();
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => {
                    let e: i64 =
                        e.trim().parse().map_err(|_| Error::Precondition(format!("bad exponent in {factor:?}")))?;
                    (b.trim(), e)
                }
                None => (factor, 1),
            };
            let elem = if let Some(idx) = base.strip_prefix('#') {
                let i: usize = idx.parse().map_err(|_| Error::Precondition(format!("bad element index {base:?}")))?;
                if i >= self.order() {
                    return Err(Error::Precondition(format!("element index {i} out of range")));
                }
                i as Elem
            } else if base == "1" || base == "e" {
                g.identity()
            } else {
                self.named(base).ok_or_else(|| Error::Precondition(format!("unknown element name {base:?}")))?
            };
            let ord = g.elem_order(elem) as i64;
            let k = exp.rem_euclid(ord) as u64;
            acc = g.mul(acc, g.pow(elem, k));
        }
        Ok(acc)
    }

    /// Display labels of a subgroup's generators.
    pub fn describe(&self, id: SubId) -> String {
        let gens: Vec<String> = self.sub(id).gens().iter().map(|&g| self.label(g)).collect();
        format!("<{}> (order {})", gens.join(", "), self.sub_order(id))
    }

    /// Conjugation by `g` restricted to subgroup `id`, as an image list.
    pub fn conj_images(&self, g: Elem, id: SubId) -> Vec<Elem> {
        self.sub(id).elements().iter().map(|&x| self.group.conj(g, x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truncation::{Complement, TruncationSpec};

    fn d16() -> Arc<Ambient> {
        let spec = TruncationSpec {
            p: 2,
            rank: 1,
            level: 3,
            complement: Complement::Cyclic { order: 2 },
            action: vec![vec![vec!["-1".into()]]],
            cocycle: vec![],
        };
        let t = Truncation::new(spec, &Budget::default()).unwrap();
        Ambient::from_truncation("d16", t, BTreeMap::new(), &Budget::default()).unwrap()
    }

    #[test]
    fn lattice_of_d16() {
        let a = d16();
        assert_eq!(a.subgroup_count(), 19);
        assert_eq!(a.sub_order(a.whole()), 16);
        assert_eq!(a.sub_order(a.center(a.whole())), 2);
        assert_eq!(a.sub_order(a.torus_id()), 8);
    }

    #[test]
    fn parse_products() {
        let a = d16();
        assert_eq!(a.parse_element("#3*#3^-1").unwrap(), 0);
        assert!(a.parse_element("nosuch").is_err());
    }
}
