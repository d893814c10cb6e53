//! The acceptance table: eleven criteria, each a list of named checks.
//!
//! Every check records whether it passed and a short description of what was
//! measured. Time limits are pinned by the `*_SECONDS` constants. The level
//! parameter selects the truncation level of the `so3` and `su2` entries; the
//! exotic entries run one level lower.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::Serialize;

use crate::ambient::SubId;
use crate::analysis::{classify, closed, exotic, hyperfocal, irreducible, normality, normalizer};
use crate::budget::Budget;
use crate::catalog::{self, CatalogEntry};
use crate::error::{Error, Result};
use crate::fusion::sat1::check_sat1;
use crate::fusion::saturation::{check_saturation, check_saturation_alt, replay_witness, AXIOM_I, AXIOM_I_ALT};
use crate::fusion::stability::stability_check;
use crate::fusion::FusionSystem;
use crate::group::{Elem, Subgroup};
use crate::report::millis_since;
use crate::transporter::{self, build, quotient, Transporter, TransporterData};

/// Limit for each single saturation check of criterion 1.
pub const SATURATION_SECONDS: u64 = 60;
/// Limit for the whole of criterion 3.
pub const ORACLE_SECONDS: u64 = 120;
/// Limit for the whole of criterion 9.
pub const EXOTIC_SECONDS: u64 = 300;
/// Default truncation level of the `so3` and `su2` entries.
pub const DEFAULT_LEVEL: u32 = 3;

/// Identifiers of the criteria, in order.
pub const CRITERIA: [u8; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];

/// One measured check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    /// Whether the check stopped on a budget cap.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub budget_exceeded: bool,
}

/// Result of one criterion.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub millis: u64,
}

impl CriterionOutcome {
    /// Whether any check hit a budget cap.
    pub fn budget_exceeded(&self) -> bool {
        self.checks.iter().any(|c| c.budget_exceeded)
    }

    /// The names of the failing checks.
    pub fn failing(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }

    /// One summary line per criterion, with the names of failing checks.
    pub fn summary_line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let mut line = format!("criterion {:>2} {verdict} {}", self.id, self.title);
        if !self.pass {
            line.push_str(&format!(" [failing: {}]", self.failing().join(", ")));
        }
        line
    }
}

/// Settings of a suite run.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub level: u32,
    pub budget: Budget,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { level: DEFAULT_LEVEL, budget: Budget::from_env() }
    }
}

/// Accumulates checks; errors become failing checks.
struct Checks {
    items: Vec<Check>,
}

impl Checks {
    fn new() -> Checks {
        Checks { items: Vec::new() }
    }

    fn push(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.items.push(Check { name: name.into(), pass, detail: detail.into(), budget_exceeded: false });
    }

    /// Runs a fallible group of checks, recording an error as a failing check.
    fn run(&mut self, name: &str, body: impl FnOnce(&mut Checks) -> Result<()>) {
        if let Err(e) = body(self) {
            let budget_exceeded = matches!(e, Error::Budget { .. });
            self.items.push(Check { name: name.into(), pass: false, detail: e.to_string(), budget_exceeded });
        }
    }
}

fn title(id: u8) -> &'static str {
    match id {
        1 => "saturation positive suite",
        2 => "saturation negative control",
        3 => "oracle equivalence",
        4 => "so3 invariants",
        5 => "su2 invariants and quotient",
        6 => "rank-1 irreducibility",
        7 => "hyperfocal subgroups",
        8 => "p-power index subsystems are normal",
        9 => "exotic suite",
        10 => "transporter validation",
        11 => "stability across levels",
        _ => "unknown",
    }
}

/// Runs one criterion.
pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> CriterionOutcome {
    let start = Instant::now();
    let mut c = Checks::new();
    match id {
        1 => criterion_1(&mut c, cfg),
        2 => criterion_2(&mut c, cfg),
        3 => criterion_3(&mut c, cfg),
        4 => criterion_4(&mut c, cfg),
        5 => criterion_5(&mut c, cfg),
        6 => criterion_6(&mut c, cfg),
        7 => criterion_7(&mut c, cfg),
        8 => criterion_8(&mut c, cfg),
        9 => criterion_9(&mut c, cfg),
        10 => criterion_10(&mut c, cfg),
        11 => criterion_11(&mut c, cfg),
        _ => c.push("criterion", false, format!("no criterion {id}")),
    }
    let pass = !c.items.is_empty() && c.items.iter().all(|x| x.pass);
    CriterionOutcome { id, title: title(id).to_string(), pass, checks: c.items, millis: millis_since(start) }
}

/// Runs the given criteria on up to `jobs` threads. Results are in input order.
pub fn run_suite(ids: &[u8], cfg: &SuiteConfig, jobs: usize) -> Vec<CriterionOutcome> {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<CriterionOutcome>>> = Mutex::new(vec![None; ids.len()]);
    std::thread::scope(|scope| {
        for _ in 0..jobs.max(1).min(ids.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(&id) = ids.get(i) else { break };
                let outcome = run_criterion(id, cfg);
                results.lock().expect("no poisoned lock")[i] = Some(outcome);
            });
        }
    });
    results.into_inner().expect("no poisoned lock").into_iter().map(|o| o.expect("every criterion ran")).collect()
}

fn so3(cfg: &SuiteConfig) -> String {
    format!("so3:l={}", cfg.level)
}

fn su2(cfg: &SuiteConfig) -> String {
    format!("su2:l={}", cfg.level)
}

fn exotic(cfg: &SuiteConfig) -> String {
    format!("exotic3:l={}", cfg.level.saturating_sub(1).max(1))
}

fn elements(f: &FusionSystem, a: SubId) -> Vec<Elem> {
    f.ambient().sub(a).elements().to_vec()
}

fn criterion_1(c: &mut Checks, cfg: &SuiteConfig) {
    let names = [
        "so2:p=2,l=2".to_string(),
        "so2:p=3,l=2".to_string(),
        "so2:p=5,l=2".to_string(),
        "sullivan:p=5,n=4,l=2".to_string(),
        so3(cfg),
        su2(cfg),
        exotic(cfg),
        format!("product:({})x(so2:p=2,l=2)", so3(cfg)),
    ];
    for name in names {
        c.run(&name, |c| {
            let entry = catalog::build(&name, &cfg.budget)?;
            let t0 = Instant::now();
            let std = check_saturation(&entry.system);
            let std_secs = t0.elapsed().as_secs_f64();
            let t1 = Instant::now();
            let alt = check_saturation_alt(&entry.system);
            let alt_secs = t1.elapsed().as_secs_f64();
            c.push(
                format!("{name} saturated"),
                std.passed() && alt.passed(),
                format!("standard {:?}, alternative {:?}", std.verdict, alt.verdict),
            );
            c.push(
                format!("{name} within {SATURATION_SECONDS} s"),
                std_secs < SATURATION_SECONDS as f64 && alt_secs < SATURATION_SECONDS as f64,
                format!("limit {SATURATION_SECONDS} s per check"),
            );
            Ok(())
        });
    }
}

fn criterion_2(c: &mut Checks, cfg: &SuiteConfig) {
    c.run("control:d16-outer", |c| {
        let entry = catalog::build("control:d16-outer", &cfg.budget)?;
        let f = &entry.system;
        for (report, tag) in [(check_saturation(f), AXIOM_I), (check_saturation_alt(f), AXIOM_I_ALT)] {
            match report.axiom(tag) {
                Some(ax) if !ax.pass => {
                    let w = ax.witness.as_ref().ok_or_else(|| Error::Malformed("failure without witness".into()))?;
                    c.push(format!("axiom {tag} fails"), true, w.clause.clone());
                    let replayed = replay_witness(f, tag, w)?;
                    c.push(format!("axiom {tag} witness replays"), replayed, w.detail.clone());
                }
                _ => c.push(format!("axiom {tag} fails"), false, "no failure reported"),
            }
        }
        Ok(())
    });
}

fn criterion_3(c: &mut Checks, cfg: &SuiteConfig) {
    let start = Instant::now();
    for name in ["oracle:sym4,p=2", "oracle:d12,p=3", "oracle:sl23,p=3"] {
        c.run(name, |c| {
            let entry = catalog::build(name, &cfg.budget)?;
            let f = &entry.system;
            let oracle = entry.oracle.as_ref().ok_or_else(|| Error::Precondition(format!("{name} has no oracle")))?;
            let objects = f.objects();
            let mut mismatches = 0;
            for &p in &objects {
                for &q in &objects {
                    let mut homs = f.hom_images(p, q);
                    homs.sort();
                    if homs != oracle.brute_hom_images(p, q) {
                        mismatches += 1;
                    }
                }
            }
            c.push(
                format!("{name} Hom-sets equal"),
                mismatches == 0,
                format!("{} pairs, {mismatches} mismatches", objects.len() * objects.len()),
            );
            Ok(())
        });
    }
    c.push(
        format!("total within {ORACLE_SECONDS} s"),
        start.elapsed().as_secs() < ORACLE_SECONDS,
        format!("limit {ORACLE_SECONDS} s"),
    );
}

fn is_klein(f: &FusionSystem, p: SubId) -> bool {
    let amb = f.ambient();
    amb.p() == 2 && amb.sub_order(p) == 4 && amb.sub(p).elements().iter().all(|&x| amb.group().elem_order(x) <= 2)
}

fn criterion_4(c: &mut Checks, cfg: &SuiteConfig) {
    let name = so3(cfg);
    c.run(&name, |c| {
        let entry = catalog::build(&name, &cfg.budget)?;
        let f = &entry.system;
        let amb = f.ambient();
        let (s, t, v) = (f.base(), entry.subgroup("T")?, entry.subgroup("V")?);
        c.push("|Aut_F(V)| = 6", f.aut_order(v) == 6, format!("{}", f.aut_order(v)));
        let mut cr: Vec<usize> = classify::centric_radical_classes(f)?.into_iter().map(|p| f.class_index(p)).collect();
        cr.sort_unstable();
        let mut want = vec![f.class_index(s), f.class_index(v)];
        want.sort_unstable();
        c.push("centric-radical classes are S and V", cr == want, format!("{} classes", cr.len()));
        let mut klein: Vec<usize> = amb.ids().filter(|&p| is_klein(f, p)).map(|p| f.class_index(p)).collect();
        klein.sort_unstable();
        klein.dedup();
        c.push("Klein four-subgroups form one class", klein.len() == 1, format!("{} classes", klein.len()));
        let z = closed::f_center(f);
        c.push("Z(F) = 1", z == amb.trivial(), amb.describe(z));
        c.push("T not strongly closed", !closed::is_strongly_closed(f, t), amb.describe(t));
        Ok(())
    });
}

fn criterion_5(c: &mut Checks, cfg: &SuiteConfig) {
    let name = su2(cfg);
    c.run(&name, |c| {
        let entry = catalog::build(&name, &cfg.budget)?;
        let f = &entry.system;
        let amb = f.ambient();
        let w = entry.subgroup("W")?;
        c.push("|Aut_F(W)| = 24", f.aut_order(w) == 24, format!("{}", f.aut_order(w)));
        let t1 = amb.named("t1").ok_or_else(|| Error::Precondition("no element t1".into()))?;
        let z = closed::f_center(f);
        let want = amb.generated(&[t1]);
        c.push("Z(F) = <t1> of order 2", z == want && amb.sub_order(z) == 2, amb.describe(z));
        let (fq, _) = quotient::quotient_fusion(f, want, &cfg.budget)?;
        let target_name = format!("so3:l={}", cfg.level - 1);
        let target = catalog::build(&target_name, &cfg.budget)?;
        match quotient::fusion_isomorphism(&fq, &target.system, &cfg.budget)? {
            Some(iso) => {
                let ok = quotient::verify_fusion_isomorphism(&fq, &target.system, &iso.map);
                let images: Vec<String> = iso.generator_images.iter().map(|(a, b)| format!("{a}->{b}")).collect();
                c.push(format!("F/<t1> isomorphic to {target_name}"), ok, images.join(", "));
            }
            None => c.push(format!("F/<t1> isomorphic to {target_name}"), false, "no isomorphism"),
        }
        Ok(())
    });
}

fn criterion_6(c: &mut Checks, cfg: &SuiteConfig) {
    for name in ["so2:p=2,l=2".to_string(), "so2:p=3,l=2".to_string(), "so2:p=5,l=2".to_string(), so3(cfg), su2(cfg)] {
        c.run(&name, |c| {
            let entry = catalog::build(&name, &cfg.budget)?;
            let rep = irreducible::is_irreducible_rank1(&entry.system)?;
            c.push(format!("{name} irreducible"), rep.passed(), format!("{:?}", rep.verdict));
            Ok(())
        });
    }
    c.run("sullivan:p=5,n=4,l=2", |c| {
        let entry = catalog::build("sullivan:p=5,n=4,l=2", &cfg.budget)?;
        let result = irreducible::irreducibility_rank1(&entry.system)?;
        c.push("sullivan:p=5,n=4,l=2 reducible", !result.irreducible, "");
        let witness = result.candidates.iter().find(|x| x.name == "F_T(T)");
        let all_four = witness.is_some_and(|x| {
            x.normal && ["N1", "N2", "N3", "N4"].iter().all(|t| x.report.axiom(t).is_some_and(|a| a.pass))
        });
        c.push("F_T(T) passes N1 to N4", all_four, "");
        Ok(())
    });
    let name = so3(cfg);
    c.run(&name, |c| {
        let entry = catalog::build(&name, &cfg.budget)?;
        let f = &entry.system;
        let v = elements(f, entry.subgroup("V")?);
        let result = irreducible::irreducibility_rank1(f)?;
        let cand = result.candidates.iter().find(|x| x.name == "F_S(S)");
        let Some(cand) = cand else {
            c.push("F_S(S) fails N2 at P = Q = V", false, "no F_S(S) candidate");
            return Ok(());
        };
        let n1 = cand.report.axiom(normality::N1).is_some_and(|a| a.pass);
        let first = cand.report.first_failure();
        let at_v = first.is_some_and(|a| {
            a.tag == normality::N2
                && a.witness.as_ref().is_some_and(|w| {
                    let (mut p, mut q) = (w.subgroup.clone(), w.target.clone());
                    p.sort_unstable();
                    q.sort_unstable();
                    p == v && q == v
                })
        });
        c.push(
            "F_S(S) fails N2 at P = Q = V",
            n1 && at_v,
            first.map(|a| a.tag.clone()).unwrap_or_else(|| "no failure".into()),
        );
        Ok(())
    });
}

fn criterion_7(c: &mut Checks, cfg: &SuiteConfig) {
    c.run("oracle:sym4,p=2", |c| {
        let entry = catalog::build("oracle:sym4,p=2", &cfg.budget)?;
        let f = &entry.system;
        let amb = f.ambient();
        let h = hyperfocal::hyperfocal(f)?;
        let oracle = entry.oracle.as_ref().ok_or_else(|| Error::Precondition("sym4 has no oracle".into()))?;
        let g = oracle.group();
        let odd: Vec<Elem> = (0..g.order() as Elem).filter(|&x| g.elem_order(x) % 2 == 1).collect();
        let in_g = Subgroup::generated(g, &odd).intersect(&oracle.sylow_in_g());
        let mut from_g: Vec<Elem> = in_g.elements().iter().filter_map(|&x| oracle.from_g(x)).collect();
        from_g.sort_unstable();
        let other = amb.id_of_elements(&from_g);
        c.push("hyperfocal order 4", amb.sub_order(h) == 4, amb.describe(h));
        c.push("equals D8 meet <2'-elements>", other == Some(h), format!("order {}", in_g.order()));
        Ok(())
    });
    let name = so3(cfg);
    c.run(&name, |c| {
        let entry = catalog::build(&name, &cfg.budget)?;
        let f = &entry.system;
        let (h, q) = hyperfocal::hyperfocal_quotient(f)?;
        c.push(format!("{name} hyperfocal = S"), h == f.base() && q.order() == 1, f.ambient().describe(h));
        let fs = FusionSystem::inner(f.ambient(), f.base(), "F_S(S)");
        let (h, q) = hyperfocal::hyperfocal_quotient(&fs)?;
        c.push(
            "F_S(S) hyperfocal = T with quotient Z/2",
            h == fs.torus() && q.order() == 2,
            format!("{}, quotient order {}", f.ambient().describe(h), q.order()),
        );
        Ok(())
    });
}

fn ppi_normal(c: &mut Checks, label: &str, f: &FusionSystem) -> Result<()> {
    let h = hyperfocal::hyperfocal(f)?;
    let fr = hyperfocal::p_power_index_subsystem(f, h)?;
    let rep = normality::is_normal_subsystem(&fr, f)?;
    let detail = rep.first_failure().map(|a| a.tag.clone()).unwrap_or_default();
    c.push(format!("{label} over its hyperfocal subgroup is normal"), rep.passed(), detail);
    Ok(())
}

fn criterion_8(c: &mut Checks, cfg: &SuiteConfig) {
    let name = so3(cfg);
    c.run(&name, |c| {
        let entry = catalog::build(&name, &cfg.budget)?;
        let fs = FusionSystem::inner(entry.ambient(), entry.system.base(), "F_S(S)");
        ppi_normal(c, "F_S(S)", &fs)
    });
    c.run("sullivan:p=5,n=4,l=2", |c| {
        let entry = catalog::build("sullivan:p=5,n=4,l=2", &cfg.budget)?;
        ppi_normal(c, "sullivan:p=5,n=4,l=2", &entry.system)
    });
}

fn criterion_9(c: &mut Checks, cfg: &SuiteConfig) {
    let start = Instant::now();
    let name = exotic(cfg);
    c.run(&name, |c| {
        let entry: CatalogEntry = catalog::build(&name, &cfg.budget)?;
        let f = &entry.system;
        let amb = f.ambient();
        let v1 = amb.named("v1").ok_or_else(|| Error::Precondition("no element v1".into()))?;
        let sat1 = check_sat1(f, &[v1])?;
        c.push(
            "sat1 with X = {v1}",
            sat1.passed(),
            sat1.first_failure().map(|a| format!("fails {}", a.tag)).unwrap_or_default(),
        );
        let classes = f.element_classes_of_order_p();
        let sizes: Vec<String> = classes.iter().map(|k| k.len().to_string()).collect();
        c.push("one class of order-3 elements", classes.len() == 1, format!("class sizes {}", sizes.join(", ")));
        let (v, t) = (entry.subgroup("V")?, entry.subgroup("T")?);
        let cf = normalizer::centralizer_subsystem(f, amb.generated(&[v1]))?;
        let (av, at) = (cf.aut_order(v), cf.aut_order(t));
        c.push("C_F(<v1>) has |Aut(V)| = 6 and |Aut(T)| = 6", av == 6 && at == 6, format!("{av} and {at}"));
        let sc = closed::strongly_closed_subgroups(f);
        c.push(
            "strongly closed subgroups are 1 and S",
            sc == vec![amb.trivial(), f.base()],
            format!("{} found", sc.len()),
        );
        let rep = exotic::verify_exotic_simplicity(&entry)?;
        for tag in ["a", "b", "c"] {
            c.push(format!("simplicity ({tag})"), rep.axiom(tag).is_some_and(|a| a.pass), "");
        }
        Ok(())
    });
    c.push(
        format!("total within {EXOTIC_SECONDS} s"),
        start.elapsed().as_secs() < EXOTIC_SECONDS,
        format!("limit {EXOTIC_SECONDS} s"),
    );
}

/// The Σ₄ fixture with one morphism of `Mor(V, V)` outside the image of `ε`
/// given the `ρ`-value of a morphism in a different `E(V)`-orbit.
pub fn corrupted_sigma4(budget: &Budget) -> Result<TransporterData> {
    let t = build::load_fixture(build::SIGMA4_FIXTURE, budget)?;
    let mut data = t.data().clone();
    let v = (0..t.objects().len())
        .find(|&i| {
            t.fusion().ambient().sub_order(t.objects()[i]) == 4
                && t.mor(i, i).iter().any(|&m| t.morphism(m).eps.is_none())
        })
        .ok_or_else(|| Error::Precondition("no object with morphisms outside ε".into()))?;
    let mor = t.mor(v, v);
    let victim = *mor.iter().find(|&&m| t.morphism(m).eps.is_none()).expect("found above");
    let rho = &t.morphism(victim).rho;
    let donor = *mor
        .iter()
        .find(|&&m| &t.morphism(m).rho != rho)
        .ok_or_else(|| Error::Precondition("Mor(V, V) has a single ρ-value".into()))?;
    data.morphisms[victim].rho = t.morphism(donor).rho.clone();
    Ok(data)
}

fn criterion_10(c: &mut Checks, cfg: &SuiteConfig) {
    for name in [build::SIGMA4_FIXTURE, build::OCTAHEDRAL_FIXTURE] {
        c.run(name, |c| {
            let t = build::load_fixture(name, &cfg.budget)?;
            let rep = transporter::validate_transporter(&t);
            let detail = rep.first_failure().map(|a| format!("fails {}", a.tag)).unwrap_or_default();
            c.push(format!("{name} passes A1 to II"), rep.passed(), detail);
            Ok(())
        });
    }
    c.run("quotient", |c| {
        let t = build::load_fixture(build::OCTAHEDRAL_FIXTURE, &cfg.budget)?;
        let amb = t.fusion().ambient().clone();
        let t1 = amb.named("t1").ok_or_else(|| Error::Precondition("no element t1".into()))?;
        let a = amb.generated(&[t1]);
        let q = quotient::quotient_transporter(&t, a, &cfg.budget)?;
        let rep = transporter::validate_transporter(&q);
        let detail = rep.first_failure().map(|a| format!("fails {}", a.tag)).unwrap_or_default();
        c.push("quotient by <t1> validates", rep.passed(), detail);
        let kept: Vec<usize> = (0..t.objects().len()).filter(|&i| amb.is_sub(a, t.objects()[i])).collect();
        let (big, small) = (t.mor_sizes(), q.mor_sizes());
        let halved = kept.len() == t.objects().len()
            && kept
                .iter()
                .enumerate()
                .all(|(qi, &i)| kept.iter().enumerate().all(|(qj, &j)| big[i][j] == 2 * small[qi][qj]));
        c.push("morphism sets halved", halved, format!("{} objects", kept.len()));
        Ok(())
    });
    c.run("corrupted", |c| {
        let data = corrupted_sigma4(&cfg.budget)?;
        let fusion = quotient::system_for_name(&data.ambient, &cfg.budget)?;
        let t = Transporter::new(fusion, data)?;
        let rep = transporter::validate_transporter(&t);
        let a2 = rep.axiom(transporter::A2).is_some_and(|a| !a.pass);
        c.push("corrupted fixture fails A2", a2, "");
        Ok(())
    });
}

fn criterion_11(c: &mut Checks, cfg: &SuiteConfig) {
    let low = cfg.level - 1;
    let exotic_low = cfg.level.saturating_sub(2).max(1);
    let runs: [(&str, u32); 3] = [("so3", low), ("su2", low), ("exotic3", exotic_low)];
    for (family, level) in runs {
        let label = format!("{family} {level} to {}", level + 1);
        c.run(&label.clone(), |c| {
            let builder = |l: u32| -> Result<FusionSystem> {
                Ok(catalog::build(&format!("{family}:l={l}"), &cfg.budget)?.system)
            };
            let rep = stability_check(&builder, level)?;
            let detail = rep.first_failure().map(|a| format!("fails {}", a.tag)).unwrap_or_default();
            c.push(label, rep.passed(), detail);
            Ok(())
        });
    }
}
