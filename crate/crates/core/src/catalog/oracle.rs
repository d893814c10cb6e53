//! Fusion systems of finite groups, computed directly from the group.
//!
//! `F_S(G)` has `Hom(P, Q) = {c_g : g P g⁻¹ ≤ Q}`. The oracle keeps `G` so that
//! Hom-sets can be recomputed by brute force and compared with the closure of
//! the harvested generators.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::ambient::{Ambient, SubId};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fusion::{FusionSystem, Iso};
use crate::group::{is_power_of, sylow_subgroup, Elem, FiniteGroup, Group, Subgroup};

/// A finite group `G` with a Sylow subgroup used as the ambient.
#[derive(Debug)]
pub struct FiniteOracle {
    name: String,
    group: Group,
    /// Permutation of each element of `G`.
    perms: Vec<Vec<u32>>,
    ambient: Arc<Ambient>,
    /// `embed[s]` is the element of `G` for ambient element `s`.
    embed: Vec<Elem>,
    back: HashMap<Elem, Elem>,
}

/// Small groups available as oracles, by name.
pub fn oracle_permutations(name: &str) -> Option<(usize, Vec<Vec<u32>>)> {
    Some(match name {
        // Σ₄ on four points.
        "sym4" => (4, vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]]),
        // D₁₂, symmetries of a hexagon.
        "d12" => (6, vec![vec![1, 2, 3, 4, 5, 0], vec![0, 5, 4, 3, 2, 1]]),
        // SL₂(3) on the eight nonzero vectors of F₃².
        "sl23" => {
            let vecs: Vec<(u32, u32)> = (0..9).map(|i| (i / 3, i % 3)).filter(|&(a, b)| (a, b) != (0, 0)).collect();
            let act = |m: [[u32; 2]; 2]| -> Vec<u32> {
                vecs.iter()
                    .map(|&(a, b)| {
                        let img = ((m[0][0] * a + m[0][1] * b) % 3, (m[1][0] * a + m[1][1] * b) % 3);
                        vecs.iter().position(|&v| v == img).expect("nonzero image") as u32
                    })
                    .collect()
            };
            (8, vec![act([[1, 1], [0, 1]]), act([[1, 0], [1, 1]])])
        }
        _ => return None,
    })
}

impl FiniteOracle {
    /// Builds the oracle for a named group at the prime `p`.
    pub fn named(name: &str, p: u64, budget: &Budget) -> Result<FiniteOracle> {
        let (degree, gens) =
            oracle_permutations(name).ok_or_else(|| Error::UnknownEntry(format!("oracle group {name}")))?;
        let (group, perms) = FiniteGroup::from_permutations(degree, &gens, budget)?;
        FiniteOracle::new(&format!("oracle:{name},p={p}"), group, perms, p, budget)
    }

    /// Builds the oracle for `G` (with its permutations) at the prime `p`.
    pub fn new(name: &str, group: Group, perms: Vec<Vec<u32>>, p: u64, budget: &Budget) -> Result<FiniteOracle> {
        budget.check_group_order(group.order())?;
        let s = sylow_subgroup(&Subgroup::whole(&group), p);
        if !is_power_of(s.order(), p) {
            return Err(Error::Precondition("Sylow computation failed".into()));
        }
        let (sg, embed) = s.to_group()?;
        let trivial = Subgroup::trivial(&sg);
        let ambient = Ambient::from_group(name, p, sg, trivial, 0, 0, BTreeMap::new(), budget)?;
        let back = embed.iter().enumerate().map(|(i, &g)| (g, i as Elem)).collect();
        Ok(FiniteOracle { name: name.to_string(), group, perms, ambient, embed, back })
    }

    /// Display name.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// The finite group `G`.
    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Permutation of each element of `G`.
    pub fn permutations(&self) -> &[Vec<u32>] {
        &self.perms
    }

    /// The Sylow subgroup as an ambient.
    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    /// Element of `G` for an ambient element.
    pub fn to_g(&self, s: Elem) -> Elem {
        self.embed[s as usize]
    }

    /// Ambient element for an element of `G` lying in the Sylow subgroup.
    pub fn from_g(&self, g: Elem) -> Option<Elem> {
        self.back.get(&g).copied()
    }

    /// The Sylow subgroup as a subgroup of `G`.
    pub fn sylow_in_g(&self) -> Subgroup {
        Subgroup::from_elements(&self.group, &self.embed)
    }

    /// `c_g` on `P` as ambient images, or `None` when `g P g⁻¹` leaves `S`.
    pub fn conj_images(&self, g: Elem, p: SubId) -> Option<Vec<Elem>> {
        self.ambient.sub(p).elements().iter().map(|&x| self.from_g(self.group.conj(g, self.to_g(x)))).collect()
    }

    /// `Aut_G(P)` for every subgroup `P` of `S`, as fusion generators.
    pub fn harvested_generators(&self) -> Vec<Iso> {
        let mut out = Vec::new();
        for p in self.ambient.ids() {
            let mut seen = std::collections::HashSet::new();
            for g in 0..self.group.order() as Elem {
                if let Some(images) = self.conj_images(g, p) {
                    if images.iter().all(|&y| self.ambient.contains(p, y)) && seen.insert(images.clone()) {
                        out.push(Iso { dom: p, cod: p, images });
                    }
                }
            }
        }
        out
    }

    /// `F_S(G)` generated by the harvested automorphism groups.
    pub fn fusion_system(&self) -> Result<FusionSystem> {
        FusionSystem::from_isos(&self.ambient, self.ambient.whole(), &self.name, self.harvested_generators())
    }

    /// `Hom_G(P, Q)` computed by running over all of `G`, sorted and deduplicated.
    pub fn brute_hom_images(&self, p: SubId, q: SubId) -> Vec<Vec<Elem>> {
        let mut out: Vec<Vec<Elem>> = (0..self.group.order() as Elem)
            .filter_map(|g| self.conj_images(g, p))
            .filter(|imgs| imgs.iter().all(|&y| self.ambient.contains(q, y)))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}
