//! Saturation through a set of elements of order p.
//!
//! The criterion asks for a set `X` of elements of order `p` such that
//! (i) every element of order `p` is F-conjugate into `X`,
//! (ii) for F-conjugate `x` and `y ∈ X` some `ρ ∈ Hom_F(C_S(x), C_S(y))` sends `x` to `y`, and
//! (iii) `C_F(x)` is saturated for every `x ∈ X`.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::analysis::normalizer::centralizer_subsystem;
use crate::error::{Error, Result};
use crate::group::Elem;
use crate::report::{millis_since, AxiomResult, Report, Witness};

use super::saturation::check_saturation;
use super::FusionSystem;

/// Tags of the three conditions.
pub const SAT1_I: &str = "sat1.i";
pub const SAT1_II: &str = "sat1.ii";
pub const SAT1_III: &str = "sat1.iii";

/// Checks the three conditions for the set `x_set`.
///
/// Fails with [`Error::Precondition`] when an element of `x_set` does not have order `p`
/// or lies outside the base.
pub fn check_sat1(f: &FusionSystem, x_set: &[Elem]) -> Result<Report> {
    let start = Instant::now();
    let amb = f.ambient();
    let g = amb.group();
    let p = amb.p() as u32;
    for &x in x_set {
        if (x as usize) >= amb.order() || g.elem_order(x) != p || !amb.contains(f.base(), x) {
            return Err(Error::Precondition(format!("{x} is not an element of order {p} in the base")));
        }
    }
    let mut xs: Vec<Elem> = x_set.to_vec();
    xs.sort_unstable();
    xs.dedup();

    // (i): every element of order p lies in the F-class of some member of X.
    let covered: std::collections::HashSet<Elem> = xs.iter().flat_map(|&y| f.element_class(y)).collect();
    let uncovered =
        amb.sub(f.base()).elements().iter().copied().find(|&x| g.elem_order(x) == p && !covered.contains(&x));
    let cond_i = match uncovered {
        None => AxiomResult::pass(SAT1_I),
        Some(x) => AxiomResult::fail(
            SAT1_I,
            Witness {
                clause: "element of order p not conjugate into X".into(),
                subgroup: amb.sub(amb.generated(&[x])).elements().to_vec(),
                values: BTreeMap::from([("element".to_string(), x as u64)]),
                detail: format!("{} is not F-conjugate to any element of X", amb.label(x)),
                ..Witness::default()
            },
        ),
    };

    // (ii): centralizer-level morphisms carrying x to y.
    let mut cond_ii = AxiomResult::pass(SAT1_II);
    'outer: for &y in &xs {
        let cy = f.centralizer(amb.generated(&[y]));
        for x in f.element_class(y) {
            let cx = f.centralizer(amb.generated(&[x]));
            if f.find_morphism_with(cx, cy, &[(x, y)]).is_none() {
                cond_ii = AxiomResult::fail(
                    SAT1_II,
                    Witness {
                        clause: "no morphism C_S(x) -> C_S(y) sending x to y".into(),
                        subgroup: amb.sub(cx).elements().to_vec(),
                        target: amb.sub(cy).elements().to_vec(),
                        values: BTreeMap::from([
                            ("x".to_string(), x as u64),
                            ("y".to_string(), y as u64),
                            ("hom_count".to_string(), f.hom_count(cx, cy) as u64),
                        ]),
                        detail: format!(
                            "none of the {} morphisms C_S({}) -> C_S({}) sends {} to {}",
                            f.hom_count(cx, cy),
                            amb.label(x),
                            amb.label(y),
                            amb.label(x),
                            amb.label(y)
                        ),
                        ..Witness::default()
                    },
                );
                break 'outer;
            }
        }
    }

    // (iii): C_F(x) saturated for x ∈ X.
    let mut cond_iii = AxiomResult::pass(SAT1_III);
    let mut sub_reports = Vec::new();
    for &x in &xs {
        let cyclic = amb.generated(&[x]);
        let failure = match centralizer_subsystem(f, cyclic) {
            Ok(c) => {
                let r = check_saturation(&c);
                let failed = r.first_failure().cloned();
                sub_reports.push(serde_json::json!({ "element": amb.label(x), "report": r }));
                failed.map(|a| {
                    let mut w = a.witness.unwrap_or_default();
                    w.detail = format!("C_F({}) fails axiom ({}): {}", amb.label(x), a.tag, w.detail);
                    w
                })
            }
            Err(e) => Some(Witness {
                clause: "centralizer system unavailable".into(),
                subgroup: amb.sub(cyclic).elements().to_vec(),
                detail: format!("C_F({}) could not be formed: {e}", amb.label(x)),
                ..Witness::default()
            }),
        };
        if let Some(w) = failure {
            cond_iii = AxiomResult::fail(SAT1_III, w);
            break;
        }
    }

    let report = Report::from_axioms(vec![cond_i, cond_ii, cond_iii], millis_since(start));
    Ok(report.with_detail("centralizer_reports", serde_json::Value::Array(sub_reports)))
}
