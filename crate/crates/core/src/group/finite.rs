//! Finite groups stored as Cayley tables, and their subgroups.
//!
//! Elements are the integers `0..order`, with `0` the identity. Every group in
//! the crate (truncations, permutation groups, automorphism groups, quotients)
//! is converted to this form, so subgroup algorithms are written once.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::budget::Budget;
use crate::error::{Error, Result};

/// Element index inside a [`FiniteGroup`].
pub type Elem = u32;

/// Shared handle to a finite group.
pub type Group = Arc<FiniteGroup>;

/// A finite group given by its multiplication table.
pub struct FiniteGroup {
    order: usize,
    table: Vec<u16>,
    inverses: Vec<u16>,
    elem_orders: Vec<u32>,
    labels: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

impl FiniteGroup {
    /// Builds a group of order `n` from a multiplication function on indices.
    ///
    /// Index `0` must be the identity. The group axioms are verified: identity,
    /// inverses, and associativity (exhaustively up to order 256, on a fixed
    /// pseudo-random sample of 10^4 triples above that).
    pub fn from_fn(n: usize, labels: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> Result<Group> {
        if n == 0 || n > u16::MAX as usize {
            return Err(Error::Precondition(format!("group order {n} outside 1..=65535")));
        }
        if labels.len() != n {
            return Err(Error::Malformed("label count differs from group order".into()));
        }
        let mut table = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                let c = mul(a, b);
                if c >= n {
                    return Err(Error::Malformed(format!("product {a}*{b} out of range")));
                }
                table[a * n + b] = c as u16;
            }
        }
        Self::from_table(n, table, labels)
    }

    fn from_table(n: usize, table: Vec<u16>, labels: Vec<String>) -> Result<Group> {
        for a in 0..n {
            if table[a] as usize != a || table[a * n] as usize != a {
                return Err(Error::Malformed("element 0 is not the identity".into()));
            }
        }
        let mut inverses = vec![u16::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inverses[a] = b as u16;
                    break;
                }
            }
            if inverses[a] == u16::MAX {
                return Err(Error::Malformed(format!("element {a} has no inverse")));
            }
        }
        let check = |a: usize, b: usize, c: usize| -> bool {
            let ab = table[a * n + b] as usize;
            let bc = table[b * n + c] as usize;
            table[ab * n + c] == table[a * n + bc]
        };
        if n <= 256 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !check(a, b, c) {
                            return Err(Error::Malformed(format!("associativity fails on ({a},{b},{c})")));
                        }
                    }
                }
            }
        } else {
            let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
            for _ in 0..10_000 {
                let mut next = || {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (state % n as u64) as usize
                };
                let (a, b, c) = (next(), next(), next());
                if !check(a, b, c) {
                    return Err(Error::Malformed(format!("associativity fails on ({a},{b},{c})")));
                }
            }
        }
        let mut elem_orders = vec![0u32; n];
        for a in 0..n {
            let mut k = 1u32;
            let mut x = a;
            while x != 0 {
                x = table[x * n + a] as usize;
                k += 1;
            }
            elem_orders[a] = k;
        }
        Ok(Arc::new(FiniteGroup { order: n, table, inverses, elem_orders, labels }))
    }

    /// Builds the group generated by permutations of `0..degree`.
    ///
    /// Elements are sorted lexicographically by image list, so the identity is
    /// element `0`. The product `a * b` is the permutation `i -> a(b(i))`.
    /// Returns the group and, for each element, its permutation.
    pub fn from_permutations(degree: usize, gens: &[Vec<u32>], budget: &Budget) -> Result<(Group, Vec<Vec<u32>>)> {
        for g in gens {
            if g.len() != degree {
                return Err(Error::Malformed("permutation of wrong degree".into()));
            }
            let mut seen = vec![false; degree];
            for &i in g {
                if i as usize >= degree || seen[i as usize] {
                    return Err(Error::Malformed("generator is not a permutation".into()));
                }
                seen[i as usize] = true;
            }
        }
        let identity: Vec<u32> = (0..degree as u32).collect();
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
        index.insert(identity, 0);
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let prod: Vec<u32> = elems[i].iter().map(|&k| g[k as usize]).collect();
                if !index.contains_key(&prod) {
                    index.insert(prod.clone(), elems.len());
                    elems.push(prod);
                    budget.check_group_order(elems.len())?;
                }
            }
            i += 1;
        }
        elems.sort();
        let index: HashMap<&Vec<u32>, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let labels = elems.iter().map(|e| perm_label(e)).collect();
        let group = Self::from_fn(elems.len(), labels, |a, b| {
            let prod: Vec<u32> = elems[b].iter().map(|&k| elems[a][k as usize]).collect();
            index[&prod]
        })?;
        Ok((group, elems))
    }

    /// The direct product `g1 × g2`, element `(a, b)` stored at `a * |g2| + b`.
    pub fn direct_product(g1: &FiniteGroup, g2: &FiniteGroup) -> Result<Group> {
        let n2 = g2.order();
        let n = g1.order() * n2;
        let labels = (0..n)
            .map(|i| format!("({},{})", g1.label(i as Elem / n2 as Elem), g2.label(i as Elem % n2 as Elem)))
            .collect();
        Self::from_fn(n, labels, |a, b| {
            let (a1, a2) = (a / n2, a % n2);
            let (b1, b2) = (b / n2, b % n2);
            g1.mul(a1 as Elem, b1 as Elem) as usize * n2 + g2.mul(a2 as Elem, b2 as Elem) as usize
        })
    }

    /// Number of elements.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The identity element (always `0`).
    pub fn identity(&self) -> Elem {
        0
    }

    /// Product `a * b`.
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize * self.order + b as usize] as Elem
    }

    /// Inverse of `a`.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a as usize] as Elem
    }

    /// Conjugate `g a g^-1`.
    #[inline]
    pub fn conj(&self, g: Elem, a: Elem) -> Elem {
        self.mul(self.mul(g, a), self.inv(g))
    }

    /// Order of the element `a`.
    pub fn elem_order(&self, a: Elem) -> u32 {
        self.elem_orders[a as usize]
    }

    /// `a^k` for a non-negative exponent.
    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        let k = k % self.elem_order(a) as u64;
        let mut r = 0;
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }

    /// Human-readable label of an element.
    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a as usize]
    }

    /// All element labels.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Whether `a` and `b` commute.
    pub fn commute(&self, a: Elem, b: Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }
}

fn perm_label(p: &[u32]) -> String {
    let body: Vec<String> = p.iter().map(|i| i.to_string()).collect();
    format!("[{}]", body.join(","))
}

/// Largest power of `p` dividing `n`.
pub fn p_part(n: usize, p: u64) -> usize {
    let mut k = 1usize;
    let mut m = n;
    while m.is_multiple_of(p as usize) {
        m /= p as usize;
        k *= p as usize;
    }
    k
}

/// Whether `n` is a power of `p` (including `1`).
pub fn is_power_of(n: usize, p: u64) -> bool {
    p_part(n, p) == n
}

/// A subgroup of a finite group, stored as a membership bitset with its sorted elements.
#[derive(Clone)]
pub struct Subgroup {
    group: Group,
    set: FixedBitSet,
    elements: Vec<Elem>,
    gens: Vec<Elem>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<&str> = self.elements.iter().map(|&e| self.group.label(e)).collect();
        write!(f, "Subgroup(order {}: {:?})", self.order(), labels)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) && self.set == other.set
    }
}

impl Eq for Subgroup {}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subgroup {
    /// Deterministic order: by order, then by the sorted element list.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.order(), &self.elements).cmp(&(other.order(), &other.elements))
    }
}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl Subgroup {
    /// The subgroup generated by `gens`.
    pub fn generated(group: &Group, gens: &[Elem]) -> Subgroup {
        let n = group.order();
        let mut set = FixedBitSet::with_capacity(n);
        set.insert(0);
        let mut elements = vec![0];
        let mut kept = Vec::new();
        for &g in gens {
            if set.contains(g as usize) {
                continue;
            }
            kept.push(g);
            let mut i = 0;
            // Re-close using all kept generators; the set grows monotonically.
            while i < elements.len() {
                let x = elements[i];
                for &s in &kept {
                    let y = group.mul(x, s);
                    if !set.contains(y as usize) {
                        set.insert(y as usize);
                        elements.push(y);
                    }
                }
                i += 1;
            }
        }
        elements.sort_unstable();
        Subgroup { group: group.clone(), set, elements, gens: kept }
    }

    /// The whole group, with a small generating set.
    pub fn whole(group: &Group) -> Subgroup {
        let all: Vec<Elem> = (0..group.order() as Elem).collect();
        Subgroup::from_elements(group, &all)
    }

    /// The trivial subgroup.
    pub fn trivial(group: &Group) -> Subgroup {
        Subgroup::generated(group, &[])
    }

    /// Builds a subgroup from a complete element list (assumed closed).
    ///
    /// A generating set is chosen greedily in increasing element order.
    pub fn from_elements(group: &Group, elems: &[Elem]) -> Subgroup {
        let mut sorted: Vec<Elem> = elems.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut current = Subgroup::trivial(group);
        let mut gens = Vec::new();
        // Prefer elements of large order so generating sets stay small.
        let mut by_order = sorted.clone();
        by_order.sort_by_key(|&e| (std::cmp::Reverse(group.elem_order(e)), e));
        for e in by_order {
            if !current.contains(e) {
                gens.push(e);
                current = Subgroup::generated(group, &gens);
                if current.order() == sorted.len() {
                    break;
                }
            }
        }
        current
    }

    /// Builds a subgroup from a membership bitset (assumed closed).
    pub fn from_set(group: &Group, set: &FixedBitSet) -> Subgroup {
        let elems: Vec<Elem> = set.ones().map(|i| i as Elem).collect();
        Subgroup::from_elements(group, &elems)
    }

    /// The ambient group.
    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Number of elements.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Sorted element list.
    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    /// Generators (a subset of the elements generating the subgroup).
    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    /// Membership bitset over the ambient group.
    pub fn set(&self) -> &FixedBitSet {
        &self.set
    }

    /// Whether `g` lies in the subgroup.
    #[inline]
    pub fn contains(&self, g: Elem) -> bool {
        self.set.contains(g as usize)
    }

    /// Whether `self ≤ other`.
    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.set.is_subset(&other.set)
    }

    /// Whether `g self g^-1 = self`.
    pub fn is_normalized_by(&self, g: Elem) -> bool {
        self.gens.iter().all(|&h| self.contains(self.group.conj(g, h)))
    }

    /// Whether `g` commutes with every element of the subgroup.
    pub fn is_centralized_by(&self, g: Elem) -> bool {
        self.gens.iter().all(|&h| self.group.commute(g, h))
    }

    /// `g self g^-1`.
    pub fn conjugate(&self, g: Elem) -> Subgroup {
        let gens: Vec<Elem> = self.gens.iter().map(|&h| self.group.conj(g, h)).collect();
        Subgroup::generated(&self.group, &gens)
    }

    /// Normalizer of `self` inside `within`.
    pub fn normalizer_in(&self, within: &Subgroup) -> Subgroup {
        let elems: Vec<Elem> = within.elements.iter().copied().filter(|&g| self.is_normalized_by(g)).collect();
        Subgroup::from_elements(&self.group, &elems)
    }

    /// Centralizer of `self` inside `within`.
    pub fn centralizer_in(&self, within: &Subgroup) -> Subgroup {
        let elems: Vec<Elem> = within.elements.iter().copied().filter(|&g| self.is_centralized_by(g)).collect();
        Subgroup::from_elements(&self.group, &elems)
    }

    /// Center of the subgroup.
    pub fn center(&self) -> Subgroup {
        self.centralizer_in(self)
    }

    /// Whether `self` is normal in `other` (requires `self ≤ other`).
    pub fn is_normal_in(&self, other: &Subgroup) -> bool {
        self.is_subgroup_of(other) && other.gens.iter().all(|&g| self.is_normalized_by(g))
    }

    /// Intersection of two subgroups.
    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let mut set = self.set.clone();
        set.intersect_with(&other.set);
        Subgroup::from_set(&self.group, &set)
    }

    /// The subgroup generated by `self` and `other`.
    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        Subgroup::generated(&self.group, &gens)
    }

    /// Whether the subgroup is abelian.
    pub fn is_abelian(&self) -> bool {
        self.gens.iter().all(|&a| self.gens.iter().all(|&b| self.group.commute(a, b)))
    }

    /// Element labels, in sorted element order.
    pub fn labels(&self) -> Vec<String> {
        self.elements.iter().map(|&e| self.group.label(e).to_string()).collect()
    }

    /// The subgroup as a standalone group, with the embedding of its elements.
    ///
    /// Element `i` of the returned group is `self.elements()[i]`.
    pub fn to_group(&self) -> Result<(Group, Vec<Elem>)> {
        let elems = self.elements.clone();
        let pos: HashMap<Elem, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let labels = elems.iter().map(|&e| self.group.label(e).to_string()).collect();
        let g = FiniteGroup::from_fn(elems.len(), labels, |a, b| pos[&self.group.mul(elems[a], elems[b])])?;
        Ok((g, elems))
    }
}

/// All cyclic subgroups, deduplicated, in deterministic order.
pub fn cyclic_subgroups(group: &Group) -> Vec<Subgroup> {
    let mut seen: HashMap<FixedBitSet, Subgroup> = HashMap::new();
    for g in 0..group.order() as Elem {
        let c = Subgroup::generated(group, &[g]);
        seen.entry(c.set.clone()).or_insert(c);
    }
    let mut out: Vec<Subgroup> = seen.into_values().collect();
    out.sort();
    out
}

/// All subgroups of `within`, deduplicated and sorted by (order, elements).
///
/// Seeds are the cyclic subgroups; joins with cyclic subgroups are taken until
/// no new subgroup appears.
pub fn enumerate_subgroups_of(within: &Subgroup, budget: &Budget) -> Result<Vec<Subgroup>> {
    budget.check_group_order(within.order())?;
    let group = within.group();
    let mut cyclic: Vec<Subgroup> = Vec::new();
    {
        let mut seen: HashMap<FixedBitSet, ()> = HashMap::new();
        for &g in within.elements() {
            let c = Subgroup::generated(group, &[g]);
            if seen.insert(c.set.clone(), ()).is_none() {
                cyclic.push(c);
            }
        }
    }
    cyclic.sort();
    let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
    let mut all: Vec<Subgroup> = Vec::new();
    for c in &cyclic {
        index.insert(c.set.clone(), all.len());
        all.push(c.clone());
    }
    let mut i = 0;
    while i < all.len() {
        let h = all[i].clone();
        for c in &cyclic {
            if c.set.is_subset(&h.set) {
                continue;
            }
            let mut gens = h.gens.clone();
            gens.extend_from_slice(&c.gens);
            let j = Subgroup::generated(group, &gens);
            if !index.contains_key(&j.set) {
                index.insert(j.set.clone(), all.len());
                all.push(j);
                if all.len() > budget.subgroups {
                    return Err(Error::Budget {
                        what: "subgroup count".into(),
                        size: all.len(),
                        cap: budget.subgroups,
                    });
                }
            }
        }
        i += 1;
    }
    // Re-derive canonical generating sets so output is independent of discovery order.
    let mut out: Vec<Subgroup> = all.iter().map(|s| Subgroup::from_set(group, &s.set)).collect();
    out.sort();
    Ok(out)
}

/// Quotient `G / N` for a normal subgroup `N` of `G` (given as the whole group).
///
/// Cosets are ordered by their smallest element. Returns the quotient group and
/// the projection of each element of `G`.
pub fn quotient_group(group: &Group, normal: &Subgroup) -> Result<(Group, Vec<Elem>)> {
    let whole = Subgroup::whole(group);
    if !normal.is_normal_in(&whole) {
        return Err(Error::Precondition("quotient by a non-normal subgroup".into()));
    }
    let n = group.order();
    let mut proj = vec![u32::MAX; n];
    let mut reps: Vec<Elem> = Vec::new();
    for g in 0..n as Elem {
        if proj[g as usize] != u32::MAX {
            continue;
        }
        let idx = reps.len() as Elem;
        reps.push(g);
        for &h in normal.elements() {
            proj[group.mul(g, h) as usize] = idx;
        }
    }
    let labels = reps.iter().map(|&r| format!("{}N", group.label(r))).collect();
    let q = FiniteGroup::from_fn(reps.len(), labels, |a, b| proj[group.mul(reps[a], reps[b]) as usize] as usize)?;
    Ok((q, proj))
}

/// A Sylow `p`-subgroup of `within`, grown deterministically from the trivial group.
pub fn sylow_subgroup(within: &Subgroup, p: u64) -> Subgroup {
    let target = p_part(within.order(), p);
    let group = within.group();
    let mut current = Subgroup::trivial(group);
    while current.order() < target {
        let norm = current.normalizer_in(within);
        let mut grown = None;
        for &g in norm.elements() {
            if current.contains(g) {
                continue;
            }
            if current.contains(group.pow(g, p)) {
                let mut gens = current.gens().to_vec();
                gens.push(g);
                grown = Some(Subgroup::generated(group, &gens));
                break;
            }
        }
        match grown {
            Some(s) => current = s,
            // Cannot happen for a genuine non-Sylow p-subgroup (Cauchy in N/P).
            None => break,
        }
    }
    current
}

/// All Sylow `p`-subgroups of `within` (conjugates of one Sylow subgroup).
pub fn all_sylow_subgroups(within: &Subgroup, p: u64) -> Vec<Subgroup> {
    let s = sylow_subgroup(within, p);
    let mut out: Vec<Subgroup> = Vec::new();
    for &g in within.elements() {
        let c = s.conjugate(g);
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out.sort();
    out
}

/// `O_p(within)`: the largest normal `p`-subgroup, as the intersection of all Sylows.
pub fn o_p(within: &Subgroup, p: u64) -> Subgroup {
    let sylows = all_sylow_subgroups(within, p);
    let mut acc = sylows[0].clone();
    for s in &sylows[1..] {
        acc = acc.intersect(s);
    }
    acc
}

/// The subgroup of `within` generated by all elements of order prime to `p`.
pub fn p_prime_generated(within: &Subgroup, p: u64) -> Subgroup {
    let group = within.group();
    let gens: Vec<Elem> =
        within.elements().iter().copied().filter(|&g| !(group.elem_order(g) as u64).is_multiple_of(p)).collect();
    Subgroup::generated(group, &gens)
}

/// The subgroup of `within` generated by all elements of `p`-power order.
pub fn p_element_generated(within: &Subgroup, p: u64) -> Subgroup {
    let group = within.group();
    let gens: Vec<Elem> =
        within.elements().iter().copied().filter(|&g| is_power_of(group.elem_order(g) as usize, p)).collect();
    Subgroup::generated(group, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> Group {
        FiniteGroup::from_fn(n, (0..n).map(|i| i.to_string()).collect(), |a, b| (a + b) % n).unwrap()
    }

    fn sym(n: usize) -> Group {
        let mut gens = vec![];
        let mut t: Vec<u32> = (0..n as u32).collect();
        t.swap(0, 1);
        gens.push(t);
        let c: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        gens.push(c);
        FiniteGroup::from_permutations(n, &gens, &Budget::default()).unwrap().0
    }

    #[test]
    fn cyclic_group_subgroups_match_divisors() {
        let g = cyclic(12);
        let subs = enumerate_subgroups_of(&Subgroup::whole(&g), &Budget::default()).unwrap();
        assert_eq!(subs.len(), 6);
    }

    #[test]
    fn sym4_has_thirty_subgroups() {
        let g = sym(4);
        assert_eq!(g.order(), 24);
        let subs = enumerate_subgroups_of(&Subgroup::whole(&g), &Budget::default()).unwrap();
        assert_eq!(subs.len(), 30);
    }

    #[test]
    fn sylow_and_op_core_in_sym4() {
        let g = sym(4);
        let whole = Subgroup::whole(&g);
        assert_eq!(sylow_subgroup(&whole, 2).order(), 8);
        assert_eq!(all_sylow_subgroups(&whole, 2).len(), 3);
        assert_eq!(o_p(&whole, 2).order(), 4);
        assert_eq!(p_prime_generated(&whole, 2).order(), 12);
        assert_eq!(all_sylow_subgroups(&whole, 3).len(), 4);
    }

    #[test]
    fn quotient_orders() {
        let g = sym(4);
        let v4 = o_p(&Subgroup::whole(&g), 2);
        let (q, proj) = quotient_group(&g, &v4).unwrap();
        assert_eq!(q.order(), 6);
        assert_eq!(proj.len(), 24);
    }

    #[test]
    fn budget_cap_rejects_large_groups() {
        let g = cyclic(20);
        let err = enumerate_subgroups_of(&Subgroup::whole(&g), &Budget::with_group_order(10)).unwrap_err();
        assert!(matches!(err, Error::Budget { size: 20, cap: 10, .. }));
    }
}
