//! Homomorphisms between subgroups, stored extensionally.

use std::collections::HashSet;
use std::fmt;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::finite::{Elem, Subgroup};

/// A homomorphism `domain -> codomain`, stored as the image of every domain element.
///
/// `images[i]` is the image of `domain.elements()[i]`. Domain and codomain may
/// live in different ambient groups.
#[derive(Clone)]
pub struct GroupHom {
    domain: Subgroup,
    codomain: Subgroup,
    images: Vec<Elem>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cod = self.codomain.group();
        let pairs: Vec<String> = self
            .domain
            .gens()
            .iter()
            .map(|&g| format!("{}->{}", self.domain.group().label(g), cod.label(self.apply(g))))
            .collect();
        write!(f, "GroupHom[{}]", pairs.join(", "))
    }
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.images == other.images
    }
}

impl Eq for GroupHom {}

impl std::hash::Hash for GroupHom {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.images.hash(state);
    }
}

impl GroupHom {
    /// Builds the homomorphism sending `domain.gens()[i]` to `gen_images[i]`.
    ///
    /// Fails with [`Error::InvalidGenerator`] when the assignment does not
    /// extend to a homomorphism into `codomain`.
    pub fn from_gen_images(domain: &Subgroup, codomain: &Subgroup, gen_images: &[Elem]) -> Result<GroupHom> {
        let gens = domain.gens();
        if gens.len() != gen_images.len() {
            return Err(Error::InvalidGenerator(format!(
                "{} generator images given for {} generators",
                gen_images.len(),
                gens.len()
            )));
        }
        if let Some(&bad) = gen_images.iter().find(|&&y| !codomain.contains(y)) {
            return Err(Error::InvalidGenerator(format!(
                "image {} lies outside the codomain",
                codomain.group().label(bad)
            )));
        }
        let g = domain.group();
        let h = codomain.group();
        let n = domain.order();
        let mut images = vec![Elem::MAX; n];
        let pos = |x: Elem| domain.elements().binary_search(&x).expect("element of domain");
        images[pos(g.identity())] = h.identity();
        let mut stack = vec![g.identity()];
        while let Some(x) = stack.pop() {
            let fx = images[pos(x)];
            for (&s, &fs) in gens.iter().zip(gen_images) {
                let y = g.mul(x, s);
                let fy = h.mul(fx, fs);
                let slot = &mut images[pos(y)];
                if *slot == Elem::MAX {
                    *slot = fy;
                    stack.push(y);
                } else if *slot != fy {
                    return Err(Error::InvalidGenerator("generator images violate a relation of the domain".into()));
                }
            }
        }
        Ok(GroupHom { domain: domain.clone(), codomain: codomain.clone(), images })
    }

    /// Builds a homomorphism from a full image list, verifying the homomorphism law.
    pub fn from_images(domain: &Subgroup, codomain: &Subgroup, images: Vec<Elem>) -> Result<GroupHom> {
        if images.len() != domain.order() {
            return Err(Error::InvalidGenerator("image list length differs from domain order".into()));
        }
        let gen_images: Vec<Elem> = domain
            .gens()
            .iter()
            .map(|&g| images[domain.elements().binary_search(&g).expect("generator in domain")])
            .collect();
        let hom = GroupHom::from_gen_images(domain, codomain, &gen_images)?;
        if hom.images != images {
            return Err(Error::InvalidGenerator("image list is not a homomorphism".into()));
        }
        Ok(hom)
    }

    /// Builds a homomorphism from an image list without verification.
    ///
    /// Callers must guarantee the homomorphism law; used by closure code that
    /// only composes verified maps.
    pub(crate) fn from_images_unchecked(domain: &Subgroup, codomain: &Subgroup, images: Vec<Elem>) -> GroupHom {
        debug_assert_eq!(images.len(), domain.order());
        GroupHom { domain: domain.clone(), codomain: codomain.clone(), images }
    }

    /// The identity map of `p`.
    pub fn identity(p: &Subgroup) -> GroupHom {
        GroupHom { domain: p.clone(), codomain: p.clone(), images: p.elements().to_vec() }
    }

    /// The inclusion `p -> q` (requires `p ≤ q`).
    pub fn inclusion(p: &Subgroup, q: &Subgroup) -> Result<GroupHom> {
        if !p.is_subgroup_of(q) {
            return Err(Error::Precondition("inclusion requires P ≤ Q".into()));
        }
        Ok(GroupHom { domain: p.clone(), codomain: q.clone(), images: p.elements().to_vec() })
    }

    /// The conjugation map `c_g: p -> q`, `x -> g x g^-1` (requires `g p g^-1 ≤ q`).
    pub fn conjugation(g: Elem, p: &Subgroup, q: &Subgroup) -> Result<GroupHom> {
        let grp = p.group();
        let images: Vec<Elem> = p.elements().iter().map(|&x| grp.conj(g, x)).collect();
        if images.iter().any(|&y| !q.contains(y)) {
            return Err(Error::Precondition("conjugate does not lie in the codomain".into()));
        }
        Ok(GroupHom { domain: p.clone(), codomain: q.clone(), images })
    }

    /// Domain subgroup.
    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    /// Codomain subgroup.
    pub fn codomain(&self) -> &Subgroup {
        &self.codomain
    }

    /// Images aligned with `domain().elements()`.
    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    /// Image of a domain element.
    pub fn apply(&self, x: Elem) -> Elem {
        let i = self.domain.elements().binary_search(&x).expect("argument lies in the domain");
        self.images[i]
    }

    /// Images of the domain generators.
    pub fn gen_images(&self) -> Vec<Elem> {
        self.domain.gens().iter().map(|&g| self.apply(g)).collect()
    }

    /// The image subgroup.
    pub fn image(&self) -> Subgroup {
        let gens = self.gen_images();
        Subgroup::generated(self.codomain.group(), &gens)
    }

    /// Whether the kernel is trivial.
    pub fn is_injective(&self) -> bool {
        let set: HashSet<Elem> = self.images.iter().copied().collect();
        set.len() == self.images.len()
    }

    /// `self ∘ other`; requires the image of `other` to lie in `self.domain()`.
    pub fn compose(&self, other: &GroupHom) -> Result<GroupHom> {
        if !std::sync::Arc::ptr_eq(other.codomain.group(), self.domain.group()) {
            return Err(Error::AmbientMismatch("composition across different groups".into()));
        }
        let mut images = Vec::with_capacity(other.images.len());
        for &y in &other.images {
            if !self.domain.contains(y) {
                return Err(Error::Precondition("composition: image leaves the domain".into()));
            }
            images.push(self.apply(y));
        }
        Ok(GroupHom { domain: other.domain.clone(), codomain: self.codomain.clone(), images })
    }

    /// Restriction to a subgroup `p` of the domain.
    pub fn restrict(&self, p: &Subgroup) -> Result<GroupHom> {
        if !p.is_subgroup_of(&self.domain) {
            return Err(Error::Precondition("restriction to a non-subgroup".into()));
        }
        let images = p.elements().iter().map(|&x| self.apply(x)).collect();
        Ok(GroupHom { domain: p.clone(), codomain: self.codomain.clone(), images })
    }

    /// The same map with a different codomain containing the image.
    pub fn with_codomain(&self, q: &Subgroup) -> Result<GroupHom> {
        if self.images.iter().any(|&y| !q.contains(y)) {
            return Err(Error::Precondition("image not contained in the new codomain".into()));
        }
        Ok(GroupHom { domain: self.domain.clone(), codomain: q.clone(), images: self.images.clone() })
    }

    /// Inverse of an injective map, as a map from its image back to the domain.
    pub fn inverse(&self) -> Result<GroupHom> {
        if !self.is_injective() {
            return Err(Error::Precondition("inverse of a non-injective map".into()));
        }
        let image = self.image();
        let mut inv = vec![0; image.order()];
        for (i, &y) in self.images.iter().enumerate() {
            let j = image.elements().binary_search(&y).expect("image element");
            inv[j] = self.domain.elements()[i];
        }
        Ok(GroupHom { domain: image, codomain: self.domain.clone(), images: inv })
    }
}

/// All injective homomorphisms `p -> q`, in lexicographic order of generator images.
///
/// Candidate images for each generator are the elements of `q` of the same
/// order. Fails with [`Error::Budget`] when the product of candidate counts
/// exceeds `budget.search`.
pub fn injective_homs(p: &Subgroup, q: &Subgroup, budget: &Budget) -> Result<Vec<GroupHom>> {
    if p.order() > q.order() {
        return Ok(Vec::new());
    }
    let pg = p.group();
    let qg = q.group();
    let gens = p.gens().to_vec();
    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&g| q.elements().iter().copied().filter(|&y| qg.elem_order(y) == pg.elem_order(g)).collect())
        .collect();
    let space = candidates.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len().max(1)));
    match space {
        Some(s) if s <= budget.search => {}
        _ => {
            return Err(Error::Budget {
                what: "homomorphism search space".into(),
                size: space.unwrap_or(usize::MAX),
                cap: budget.search,
            })
        }
    }
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(gens.len());
    search(p, q, &gens, &candidates, &mut chosen, &mut out);
    Ok(out)
}

fn search(
    p: &Subgroup,
    q: &Subgroup,
    gens: &[Elem],
    candidates: &[Vec<Elem>],
    chosen: &mut Vec<Elem>,
    out: &mut Vec<GroupHom>,
) {
    let k = chosen.len();
    if k > 0 {
        // Prune: the partial assignment must be an injective homomorphism on the
        // subgroup generated by the first k generators.
        let partial = Subgroup::generated(p.group(), &gens[..k]);
        if partial.gens().len() == k {
            match GroupHom::from_gen_images(&partial, q, chosen) {
                Ok(h) if h.is_injective() => {}
                _ => return,
            }
        }
    }
    if k == gens.len() {
        if let Ok(h) = GroupHom::from_gen_images(p, q, chosen) {
            if h.is_injective() {
                out.push(h);
            }
        }
        return;
    }
    for &y in &candidates[k] {
        chosen.push(y);
        search(p, q, gens, candidates, chosen, out);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::finite::FiniteGroup;
    use std::sync::Arc;

    fn klein() -> Arc<FiniteGroup> {
        FiniteGroup::from_fn(4, (0..4).map(|i| i.to_string()).collect(), |a, b| a ^ b).unwrap()
    }

    #[test]
    fn klein_four_has_six_automorphisms() {
        let g = klein();
        let v = Subgroup::whole(&g);
        let homs = injective_homs(&v, &v, &Budget::default()).unwrap();
        assert_eq!(homs.len(), 6);
        assert!(homs.contains(&GroupHom::identity(&v)));
    }

    #[test]
    fn automorphisms_are_closed_under_composition() {
        let g = klein();
        let v = Subgroup::whole(&g);
        let homs = injective_homs(&v, &v, &Budget::default()).unwrap();
        for a in &homs {
            for b in &homs {
                assert!(homs.contains(&a.compose(b).unwrap()));
            }
        }
    }

    #[test]
    fn no_injection_into_smaller_group() {
        let z4 = FiniteGroup::from_fn(4, (0..4).map(|i| i.to_string()).collect(), |a, b| (a + b) % 4).unwrap();
        let z2 = FiniteGroup::from_fn(2, vec!["0".into(), "1".into()], |a, b| a ^ b).unwrap();
        let homs = injective_homs(&Subgroup::whole(&z4), &Subgroup::whole(&z2), &Budget::default()).unwrap();
        assert!(homs.is_empty());
    }

    #[test]
    fn bad_generator_images_are_rejected() {
        let z4 = FiniteGroup::from_fn(4, (0..4).map(|i| i.to_string()).collect(), |a, b| (a + b) % 4).unwrap();
        let z2 = FiniteGroup::from_fn(2, vec!["0".into(), "1".into()], |a, b| a ^ b).unwrap();
        let c = Subgroup::whole(&z2);
        let w = Subgroup::whole(&z4);
        assert!(GroupHom::from_gen_images(&c, &w, &[1]).is_err());
        assert!(GroupHom::from_gen_images(&c, &w, &[2]).is_ok());
    }
}
