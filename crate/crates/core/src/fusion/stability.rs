//! Comparison of a catalog construction at two consecutive truncation levels.
//!
//! The level-ℓ group embeds into the level-(ℓ+1) group by `(t, w) -> (p·t, w)`.
//! The check passes when
//! - both saturation checkers give the same verdicts at both levels,
//! - every generator of `F_ℓ` is carried to a morphism of `F_{ℓ+1}`, so fusion
//!   and Hom-sets of `F_ℓ` survive the embedding,
//! - every Hom-set count between level-ℓ subgroups is at most the count between
//!   their images, and
//! - `|Aut_F(P)|` is unchanged for every `F_ℓ`-centric radical `P` that does not
//!   contain the level-ℓ torus.
//!
//! Subgroups containing the torus grow with the level, so their automorphism
//! groups are compared only through the embedding condition.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::ambient::{Ambient, SubId};
use crate::analysis::classify::{is_centric, is_radical};
use crate::error::{Error, Result};
use crate::group::Elem;
use crate::report::{millis_since, AxiomResult, Report, Witness};

use super::saturation::{check_saturation, check_saturation_alt};
use super::FusionSystem;

/// Tags of the stability conditions.
pub const STABLE_VERDICT: &str = "stable.verdict";
pub const STABLE_EMBEDDING: &str = "stable.embedding";
pub const STABLE_HOM_COUNTS: &str = "stable.hom_counts";
pub const STABLE_AUT: &str = "stable.centric_radical_aut";

/// The canonical element map from a truncation ambient to the next level.
pub fn level_inclusion(low: &Ambient, high: &Ambient) -> Result<Vec<Elem>> {
    let (Some(a), Some(b)) = (low.truncation(), high.truncation()) else {
        return Err(Error::Precondition("level inclusion needs truncation ambients".into()));
    };
    let (sa, sb) = (a.spec(), b.spec());
    if sa.p != sb.p || sa.rank != sb.rank || sa.level + 1 != sb.level || sa.complement != sb.complement {
        return Err(Error::Precondition("ambients are not consecutive levels of one construction".into()));
    }
    let map: Vec<Elem> = (0..low.order() as Elem).map(|e| a.include_into(b, e)).collect();
    let g = low.group();
    let h = high.group();
    for x in 0..low.order() as Elem {
        for y in 0..low.order() as Elem {
            if map[g.mul(x, y) as usize] != h.mul(map[x as usize], map[y as usize]) {
                return Err(Error::Precondition("level inclusion is not a homomorphism".into()));
            }
        }
    }
    Ok(map)
}

fn map_sub(low: &Ambient, high: &Ambient, iota: &[Elem], p: SubId) -> SubId {
    let elems: Vec<Elem> = low.sub(p).elements().iter().map(|&x| iota[x as usize]).collect();
    high.id_of_elements(&elems).expect("image of a subgroup")
}

/// Compares `low` (level ℓ) with `high` (level ℓ+1), both over the whole ambient group.
pub fn stability_between(low: &FusionSystem, high: &FusionSystem) -> Result<Report> {
    let start = Instant::now();
    let (la, ha) = (low.ambient(), high.ambient());
    let iota = level_inclusion(la, ha)?;
    let mut axioms = Vec::new();

    let verdicts = [
        check_saturation(low).passed(),
        check_saturation(high).passed(),
        check_saturation_alt(low).passed(),
        check_saturation_alt(high).passed(),
    ];
    let mut values = BTreeMap::new();
    for (k, v) in ["low", "high", "low_alt", "high_alt"].iter().zip(verdicts) {
        values.insert(k.to_string(), v as u64);
    }
    if verdicts[0] == verdicts[1] && verdicts[2] == verdicts[3] {
        axioms.push(
            AxiomResult::pass(STABLE_VERDICT)
                .with_note(format!("saturation verdict {} at both levels", if verdicts[0] { "pass" } else { "fail" })),
        );
    } else {
        axioms.push(AxiomResult::fail(
            STABLE_VERDICT,
            Witness {
                clause: "saturation verdicts differ between levels".into(),
                values,
                detail: "the saturation verdict at level ℓ is not reproduced at level ℓ+1".into(),
                ..Witness::default()
            },
        ));
    }

    let mut embedding = AxiomResult::pass(STABLE_EMBEDDING);
    for g in low.canonical_generators() {
        let dom = map_sub(la, ha, &iota, g.dom);
        let de = ha.sub(dom).elements();
        let mut images = vec![0; de.len()];
        for (i, &x) in la.sub(g.dom).elements().iter().enumerate() {
            images[ha.pos(dom, iota[x as usize]).expect("image element")] = iota[g.images[i] as usize];
        }
        if !high.is_morphism(dom, &images) {
            embedding = AxiomResult::fail(
                STABLE_EMBEDDING,
                Witness {
                    clause: "level-ℓ morphism missing at level ℓ+1".into(),
                    subgroup: de.to_vec(),
                    morphism: images,
                    detail: format!(
                        "the image of a morphism {} -> {} is not in the level-ℓ+1 system",
                        la.describe(g.dom),
                        la.describe(g.cod)
                    ),
                    ..Witness::default()
                },
            );
            break;
        }
    }
    axioms.push(embedding);

    let objects = low.objects();
    let images: Vec<SubId> = objects.iter().map(|&p| map_sub(la, ha, &iota, p)).collect();
    let mut counts = AxiomResult::pass(STABLE_HOM_COUNTS);
    'pairs: for (i, &p) in objects.iter().enumerate() {
        for (j, &q) in objects.iter().enumerate() {
            if la.sub_order(p) > la.sub_order(q) {
                continue;
            }
            let (a, b) = (low.hom_count(p, q), high.hom_count(images[i], images[j]));
            if a > b {
                counts = AxiomResult::fail(
                    STABLE_HOM_COUNTS,
                    Witness {
                        clause: "Hom-set shrinks under the level inclusion".into(),
                        subgroup: la.sub(p).elements().to_vec(),
                        target: la.sub(q).elements().to_vec(),
                        values: BTreeMap::from([("low".to_string(), a as u64), ("high".to_string(), b as u64)]),
                        detail: format!(
                            "|Hom({}, {})| = {a} at level ℓ but {b} at level ℓ+1",
                            la.describe(p),
                            la.describe(q)
                        ),
                        ..Witness::default()
                    },
                );
                break 'pairs;
            }
        }
    }
    axioms.push(counts);

    let torus = low.torus();
    let mut auts = AxiomResult::pass(STABLE_AUT);
    let mut compared = 0u64;
    for (i, &p) in objects.iter().enumerate() {
        if la.is_sub(torus, p) || !is_centric(low, p) || !is_radical(low, p)? {
            continue;
        }
        compared += 1;
        let (a, b) = (low.aut_order(p), high.aut_order(images[i]));
        if a != b {
            auts = AxiomResult::fail(
                STABLE_AUT,
                Witness {
                    clause: "automorphism group of a centric radical subgroup changes".into(),
                    subgroup: la.sub(p).elements().to_vec(),
                    values: BTreeMap::from([("low".to_string(), a as u64), ("high".to_string(), b as u64)]),
                    detail: format!("|Aut_F({})| = {a} at level ℓ but {b} at level ℓ+1", la.describe(p)),
                    ..Witness::default()
                },
            );
            break;
        }
    }
    if auts.pass {
        auts = auts.with_note(format!("{compared} centric radical subgroups compared"));
    }
    axioms.push(auts);

    Ok(Report::from_axioms(axioms, millis_since(start)))
}

/// Builds a construction at `level` and `level + 1` and compares them.
pub fn stability_check(builder: &dyn Fn(u32) -> Result<FusionSystem>, level: u32) -> Result<Report> {
    let low = builder(level)?;
    let high = builder(level + 1)?;
    stability_between(&low, &high)
}
