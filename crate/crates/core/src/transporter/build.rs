//! Transporter categories of finite groups, and the shipped linking fixtures.
//!
//! For a finite group `G` containing `S`, the transporter category on a family
//! of subgroups has `Mor(P, Q) = N_G(P, Q) = {g ∈ G : g P g⁻¹ ≤ Q}`, with `ε`
//! the inclusion of `N_S(P, Q)` and `ρ(g) = c_g`.

use std::collections::HashMap;

use crate::ambient::SubId;
use crate::analysis::classify::is_centric;
use crate::budget::Budget;
use crate::catalog::{self, oracle::oracle_permutations};
use crate::error::{Error, Result};
use crate::fusion::FusionSystem;
use crate::group::{injective_homs, sylow_subgroup, Elem, FiniteGroup, Group, Subgroup};

use super::{MorphismData, Transporter, TransporterData};

/// File name of the `Σ₄` linking fixture over `so3:l=2`.
pub const SIGMA4_FIXTURE: &str = "so3-sigma4.json";
/// File name of the binary octahedral linking fixture over `su2:l=3`.
pub const OCTAHEDRAL_FIXTURE: &str = "su2-binary-octahedral.json";

/// The shipped fixture with a given file name.
pub fn fixture_text(name: &str) -> Option<&'static str> {
    match name {
        SIGMA4_FIXTURE => Some(include_str!("../../fixtures/so3-sigma4.json")),
        OCTAHEDRAL_FIXTURE => Some(include_str!("../../fixtures/su2-binary-octahedral.json")),
        _ => None,
    }
}

/// Loads a shipped fixture.
pub fn load_fixture(name: &str, budget: &Budget) -> Result<Transporter> {
    let text = fixture_text(name).ok_or_else(|| Error::UnknownEntry(format!("fixture {name}")))?;
    Transporter::from_json(text, budget)
}

/// The transporter category of `G` on `objects`, where `embed[s]` is the element
/// of `G` corresponding to the ambient element `s`.
pub fn transporter_category(
    f: &FusionSystem,
    ambient_name: &str,
    g: &Group,
    embed: &[Elem],
    objects: &[SubId],
) -> TransporterData {
    let amb = f.ambient();
    let back: HashMap<Elem, Elem> = embed.iter().enumerate().map(|(s, &x)| (x, s as Elem)).collect();
    let carries = |x: Elem, p: SubId, q: SubId| {
        amb.sub(p).gens().iter().all(|&a| back.get(&g.conj(x, embed[a as usize])).is_some_and(|&b| amb.contains(q, b)))
    };
    let mut morphisms = Vec::new();
    let mut label: HashMap<(usize, usize, Elem), usize> = HashMap::new();
    let mut by_pair: Vec<Vec<Vec<Elem>>> = vec![vec![Vec::new(); objects.len()]; objects.len()];
    for (pi, &p) in objects.iter().enumerate() {
        for (qi, &q) in objects.iter().enumerate() {
            for x in 0..g.order() as Elem {
                if !carries(x, p, q) {
                    continue;
                }
                let rho = amb.sub(p).elements().iter().map(|&a| back[&g.conj(x, embed[a as usize])]).collect();
                label.insert((pi, qi, x), morphisms.len());
                by_pair[pi][qi].push(x);
                morphisms.push(MorphismData { source: pi, target: qi, rho, eps: back.get(&x).copied() });
            }
        }
    }
    let n = objects.len();
    let mut composition = Vec::new();
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for &x in &by_pair[p][q] {
                    for &y in &by_pair[q][r] {
                        composition.push([label[&(q, r, y)], label[&(p, q, x)], label[&(p, r, g.mul(y, x))]]);
                    }
                }
            }
        }
    }
    TransporterData {
        ambient: ambient_name.to_string(),
        objects: objects.iter().map(|&p| amb.sub(p).elements().to_vec()).collect(),
        morphisms,
        composition,
    }
}

/// An embedding of the base of `f` onto `sylow ≤ G` under which conjugation in
/// `G` induces exactly `Hom_F(P, Q)` for all objects `P, Q`. The first such
/// embedding in search order is returned.
pub fn find_embedding(
    f: &FusionSystem,
    g: &Group,
    sylow: &Subgroup,
    objects: &[SubId],
    budget: &Budget,
) -> Result<Option<Vec<Elem>>> {
    let amb = f.ambient();
    if f.base() != amb.whole() || sylow.order() != amb.order() {
        return Err(Error::Precondition("the base must be the whole ambient and match the Sylow order".into()));
    }
    let (sg, _) = amb.sub(amb.whole()).to_group()?;
    for hom in injective_homs(&Subgroup::whole(&sg), sylow, budget)? {
        let embed = hom.images().to_vec();
        let back: HashMap<Elem, Elem> = embed.iter().enumerate().map(|(s, &x)| (x, s as Elem)).collect();
        let induced = |p: SubId, q: SubId| {
            let mut out: Vec<Vec<Elem>> = (0..g.order() as Elem)
                .filter_map(|x| {
                    amb.sub(p).elements().iter().map(|&a| back.get(&g.conj(x, embed[a as usize])).copied()).collect()
                })
                .filter(|imgs: &Vec<Elem>| imgs.iter().all(|&b| amb.contains(q, b)))
                .collect();
            out.sort();
            out.dedup();
            out
        };
        let matches = objects.iter().all(|&p| {
            objects.iter().all(|&q| {
                let mut expected = f.hom_images(p, q);
                expected.sort();
                induced(p, q) == expected
            })
        });
        if matches {
            return Ok(Some(embed));
        }
    }
    Ok(None)
}

/// F-centric subgroups of the base, in lattice order.
pub fn centric_objects(f: &FusionSystem) -> Vec<SubId> {
    f.objects().into_iter().filter(|&p| is_centric(f, p)).collect()
}

/// The binary octahedral group of order 48, as a subgroup of `SL₂(F₇)` acting
/// on the 48 nonzero vectors of `F₇²`.
///
/// Generated by the first element of order 8 in lexicographic matrix order and
/// the first element of order 3 that together with it generates a group of
/// order 48. Every subgroup of order 48 of `SL₂(F₇)` with an element of order 8
/// is binary octahedral.
pub fn binary_octahedral(budget: &Budget) -> Result<(Group, Vec<Vec<u32>>)> {
    type M = [[u32; 2]; 2];
    const Q: u32 = 7;
    let mul = |a: M, b: M| -> M {
        let mut c = [[0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]) % Q;
            }
        }
        c
    };
    let one: M = [[1, 0], [0, 1]];
    let order = |m: M| -> usize {
        let (mut k, mut x) = (1, m);
        while x != one {
            x = mul(x, m);
            k += 1;
        }
        k
    };
    let sl2: Vec<M> = (0..Q.pow(4))
        .map(|i| [[i / 343, (i / 49) % 7], [(i / 7) % 7, i % 7]])
        .filter(|m| (m[0][0] * m[1][1] + Q * Q - m[0][1] * m[1][0]) % Q == 1)
        .collect();
    let closure = |gens: &[M], cap: usize| -> Option<Vec<M>> {
        let mut seen = vec![one];
        let mut i = 0;
        while i < seen.len() {
            for &gen in gens {
                let y = mul(seen[i], gen);
                if !seen.contains(&y) {
                    if seen.len() == cap {
                        return None;
                    }
                    seen.push(y);
                }
            }
            i += 1;
        }
        Some(seen)
    };
    let a = *sl2.iter().find(|&&m| order(m) == 8).expect("SL2(7) has elements of order 8");
    let b = *sl2
        .iter()
        .filter(|&&m| order(m) == 3)
        .find(|&&m| closure(&[a, m], 48).is_some_and(|s| s.len() == 48))
        .ok_or_else(|| Error::Precondition("no binary octahedral subgroup found".into()))?;
    let vecs: Vec<(u32, u32)> = (0..Q * Q).map(|i| (i / Q, i % Q)).filter(|&v| v != (0, 0)).collect();
    let act = |m: M| -> Vec<u32> {
        vecs.iter()
            .map(|&(x, y)| {
                let img = ((m[0][0] * x + m[0][1] * y) % Q, (m[1][0] * x + m[1][1] * y) % Q);
                vecs.iter().position(|&v| v == img).expect("nonzero image") as u32
            })
            .collect()
    };
    FiniteGroup::from_permutations(vecs.len(), &[act(a), act(b)], budget)
}

fn linking_fixture(catalog_name: &str, group: Group, budget: &Budget) -> Result<TransporterData> {
    let entry = catalog::build(catalog_name, budget)?;
    let f = &entry.system;
    let objects = centric_objects(f);
    let sylow = sylow_subgroup(&Subgroup::whole(&group), f.ambient().p());
    let embed = find_embedding(f, &group, &sylow, &objects, budget)?
        .ok_or_else(|| Error::Precondition(format!("no embedding of {catalog_name} realizes its fusion")))?;
    Ok(transporter_category(f, catalog_name, &group, &embed, &objects))
}

/// `Σ₄` on the F-centric subgroups of `so3:l=2`.
pub fn sigma4_linking(budget: &Budget) -> Result<TransporterData> {
    let (degree, gens) = oracle_permutations("sym4").expect("sym4 oracle");
    let (group, _) = FiniteGroup::from_permutations(degree, &gens, budget)?;
    linking_fixture("so3:l=2", group, budget)
}

/// The binary octahedral group on the F-centric subgroups of `su2:l=3`.
pub fn octahedral_linking(budget: &Budget) -> Result<TransporterData> {
    let (group, _) = binary_octahedral(budget)?;
    linking_fixture("su2:l=3", group, budget)
}

/// The transporter category of the base itself on all of its subgroups.
pub fn self_transporter(catalog_name: &str, budget: &Budget) -> Result<TransporterData> {
    let entry = catalog::build(catalog_name, budget)?;
    let f = &entry.system;
    let amb = f.ambient();
    let embed: Vec<Elem> = (0..amb.order() as Elem).collect();
    Ok(transporter_category(f, catalog_name, amb.group(), &embed, &f.objects()))
}

/// The transporter category of an oracle group `G` on all subgroups of its Sylow subgroup.
pub fn oracle_transporter(catalog_name: &str, budget: &Budget) -> Result<TransporterData> {
    let entry = catalog::build(catalog_name, budget)?;
    let oracle = entry.oracle.as_ref().ok_or_else(|| Error::Precondition(format!("{catalog_name} has no oracle")))?;
    let f = &entry.system;
    let embed: Vec<Elem> = (0..f.ambient().order() as Elem).map(|s| oracle.to_g(s)).collect();
    Ok(transporter_category(f, catalog_name, oracle.group(), &embed, &f.objects()))
}
