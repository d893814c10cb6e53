//! `fusionkit`: runs checkers and analyses on catalog systems and prints JSON reports.
//!
//! Exit codes: 0 pass, 1 check failed (the report carries a witness), 2 usage
//! or precondition error, 3 budget exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fusionkit::acceptance::{self, SuiteConfig, CRITERIA, DEFAULT_LEVEL};
use fusionkit::analysis::{classify, closed, hyperfocal, irreducible};
use fusionkit::catalog::{self, doc};
use fusionkit::fusion::sat1::check_sat1;
use fusionkit::fusion::saturation::{check_saturation, check_saturation_alt};
use fusionkit::group::Elem;
use fusionkit::report::strip_millis;
use fusionkit::transporter::{self, build, quotient, Transporter};
use fusionkit::{Budget, Error, FusionSystem, SubId};

/// Version of the JSON envelope written by every command.
const FORMAT_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "fusionkit", version, about = "Fusion systems over truncated discrete p-toral groups")]
struct Cli {
    /// Zero every timing field so that output is byte-stable.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Group-order cap for enumerations; overrides FUSIONKIT_BUDGET.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List catalog entries or show one serialized system.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Run a saturation checker.
    Check {
        /// Catalog name (optionally suffixed by /<g,...>) or path to a system JSON file.
        input: String,
        #[arg(long, value_enum, default_value_t = Axioms::Std)]
        axioms: Axioms,
        /// Comma-separated elements of the set X for --axioms sat1.
        #[arg(long, value_delimiter = ',')]
        x: Vec<String>,
    },
    /// Run structure analyses.
    Analyze {
        /// Catalog name (optionally suffixed by /<g,...>) or path to a system JSON file.
        input: String,
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        ops: Vec<Op>,
    },
    /// Quotient by an F-normal subgroup, with an isomorphism certificate when one is found.
    Quotient {
        /// Catalog name (optionally suffixed by /<g,...>) or path to a system JSON file.
        input: String,
        /// Comma-separated generators of the subgroup.
        #[arg(long, value_delimiter = ',', required = true)]
        by: Vec<String>,
        /// Catalog system to certify an isomorphism against. Without it the
        /// standard catalog entries of the same order are tried.
        #[arg(long)]
        compare: Option<String>,
    },
    /// Validate a transporter system given as a shipped fixture name or a JSON file.
    Transporter {
        input: String,
        /// Also validate the quotient by the subgroup these elements generate.
        #[arg(long, value_delimiter = ',')]
        quotient_by: Vec<String>,
    },
    /// Run the acceptance table.
    Suite {
        /// Truncation level of the so3 and su2 entries; the exotic entries run one level lower.
        #[arg(long, default_value_t = DEFAULT_LEVEL, value_parser = clap::value_parser!(u32).range(2..))]
        level: u32,
        /// Number of criteria run concurrently.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: u64,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    /// List the standard entries.
    List,
    /// Show one entry together with its serialized system.
    Show { name: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Axioms {
    Std,
    Alt,
    Sat1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Op {
    Classify,
    StronglyClosed,
    Center,
    Hyperfocal,
    Irreducible,
    Component,
}

impl Op {
    fn key(self) -> &'static str {
        match self {
            Op::Classify => "classify",
            Op::StronglyClosed => "strongly-closed",
            Op::Center => "center",
            Op::Hyperfocal => "hyperfocal",
            Op::Irreducible => "irreducible",
            Op::Component => "component",
        }
    }
}

/// A command's JSON result and whether it counts as a pass.
struct Outcome {
    report: Value,
    pass: bool,
    budget_exceeded: bool,
}

impl Outcome {
    fn pass(report: Value) -> Outcome {
        Outcome { report, pass: true, budget_exceeded: false }
    }

    fn verdict(report: Value, pass: bool) -> Outcome {
        Outcome { report, pass, budget_exceeded: false }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli.budget.filter(|&b| b > 0).map(Budget::with_group_order).unwrap_or_else(Budget::from_env);
    let (name, input) = describe(&cli.command);
    match run(&cli.command, &budget) {
        Ok(outcome) => {
            let mut envelope = json!({
                "format_version": FORMAT_VERSION,
                "command": name,
                "input": input,
                "pass": outcome.pass,
                "report": outcome.report,
            });
            if cli.no_timing {
                strip_millis(&mut envelope);
            }
            if let Err(e) = emit(&envelope, cli.output.as_deref()) {
                eprintln!("fusionkit: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if outcome.budget_exceeded {
                ExitCode::from(3)
            } else if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("fusionkit: {e}");
            let error = json!({
                "format_version": FORMAT_VERSION,
                "command": name,
                "input": input,
                "error": e.to_string(),
            });
            let _ = emit(&error, cli.output.as_deref());
            match e {
                Error::Budget { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn describe(command: &Command) -> (&'static str, Value) {
    match command {
        Command::Catalog { action: CatalogAction::List } => ("catalog list", Value::Null),
        Command::Catalog { action: CatalogAction::Show { name } } => ("catalog show", json!(name)),
        Command::Check { input, .. } => ("check", json!(input)),
        Command::Analyze { input, .. } => ("analyze", json!(input)),
        Command::Quotient { input, .. } => ("quotient", json!(input)),
        Command::Transporter { input, .. } => ("transporter", json!(input)),
        Command::Suite { .. } => ("suite", Value::Null),
    }
}

fn emit(value: &Value, output: Option<&Path>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n";
    match output {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: &Command, budget: &Budget) -> fusionkit::Result<Outcome> {
    match command {
        Command::Catalog { action: CatalogAction::List } => Ok(Outcome::pass(catalog_list())),
        Command::Catalog { action: CatalogAction::Show { name } } => Ok(Outcome::pass(catalog_show(name, budget)?)),
        Command::Check { input, axioms, x } => check(input, *axioms, x, budget),
        Command::Analyze { input, ops } => Ok(Outcome::pass(analyze(&load_system(input, budget)?, ops)?)),
        Command::Quotient { input, by, compare } => {
            Ok(Outcome::pass(quotient_cmd(input, by, compare.as_deref(), budget)?))
        }
        Command::Transporter { input, quotient_by } => transporter_cmd(input, quotient_by, budget),
        Command::Suite { level, jobs, criteria } => suite(*level, *jobs as usize, criteria, budget),
    }
}

/// A system from a JSON file when `input` names an existing file, otherwise by catalog name.
fn load_system(input: &str, budget: &Budget) -> fusionkit::Result<FusionSystem> {
    let path = Path::new(input);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{input}: {e}")))?;
        let system: doc::SystemDoc = serde_json::from_str(&text)?;
        doc::from_doc(&system, budget)
    } else {
        quotient::system_for_name(input, budget)
    }
}

fn parse_elements(f: &FusionSystem, texts: &[String]) -> fusionkit::Result<Vec<Elem>> {
    texts.iter().map(|t| f.ambient().parse_element(t)).collect()
}

fn subgroup_json(f: &FusionSystem, a: SubId) -> Value {
    let amb = f.ambient();
    let gens: Vec<String> = amb.sub(a).gens().iter().map(|&g| amb.label(g)).collect();
    json!({ "generators": gens, "order": amb.sub_order(a) })
}

fn catalog_list() -> Value {
    let entries: Vec<Value> = catalog::standard_names()
        .into_iter()
        .map(|name| {
            let parsed: catalog::CatalogName = name.parse().expect("standard names parse");
            json!({ "name": name, "parameters": parameters(&parsed) })
        })
        .collect();
    json!({ "entries": entries })
}

fn parameters(name: &catalog::CatalogName) -> Value {
    use catalog::CatalogName as N;
    match name {
        N::So2 { p, level } => json!({ "family": "so2", "p": p, "l": level }),
        N::Sullivan { p, n, level } => json!({ "family": "sullivan", "p": p, "n": n, "l": level }),
        N::So3 { level } => json!({ "family": "so3", "p": 2, "l": level }),
        N::Su2 { level } => json!({ "family": "su2", "p": 2, "l": level }),
        N::Exotic3 { level } => json!({ "family": "exotic3", "p": 3, "l": level }),
        N::Product(a, b) => json!({ "family": "product", "factors": [a.to_string(), b.to_string()] }),
        N::Oracle { group, p } => json!({ "family": "oracle", "group": group, "p": p }),
        N::D16Outer => json!({ "family": "control", "p": 2 }),
    }
}

fn catalog_show(name: &str, budget: &Budget) -> fusionkit::Result<Value> {
    let entry = catalog::build(name, budget)?;
    let f = &entry.system;
    let amb = f.ambient();
    let subgroups: serde_json::Map<String, Value> =
        entry.subgroups.iter().map(|(k, &a)| (k.clone(), subgroup_json(f, a))).collect();
    Ok(json!({
        "name": entry.name.to_string(),
        "parameters": parameters(&entry.name),
        "p": amb.p(),
        "order": amb.sub_order(f.base()),
        "rank": amb.rank(),
        "level": amb.level(),
        "subgroups": subgroups,
        "expected": entry.expected,
        "mismatches": entry.mismatches(),
        "system": doc::to_doc(f),
    }))
}

fn check(input: &str, axioms: Axioms, x: &[String], budget: &Budget) -> fusionkit::Result<Outcome> {
    let f = load_system(input, budget)?;
    if axioms != Axioms::Sat1 && !x.is_empty() {
        return Err(Error::Precondition("--x is only used with --axioms sat1".into()));
    }
    let report = match axioms {
        Axioms::Std => check_saturation(&f),
        Axioms::Alt => check_saturation_alt(&f),
        Axioms::Sat1 => check_sat1(&f, &parse_elements(&f, x)?)?,
    };
    let pass = report.passed();
    Ok(Outcome::verdict(serde_json::to_value(&report)?, pass))
}

fn analyze(f: &FusionSystem, ops: &[Op]) -> fusionkit::Result<Value> {
    let mut out = serde_json::Map::new();
    for &op in ops {
        let value = match op {
            Op::Classify => {
                let rows: Vec<Value> = classify::classify(f)?
                    .into_iter()
                    .map(|(p, flags)| {
                        json!({
                            "subgroup": subgroup_json(f, p),
                            "class": f.class_index(p),
                            "centric": flags.centric,
                            "radical": flags.radical,
                            "quasicentric": flags.quasicentric,
                        })
                    })
                    .collect();
                let reps: Vec<Value> =
                    classify::centric_radical_classes(f)?.into_iter().map(|p| subgroup_json(f, p)).collect();
                json!({ "subgroups": rows, "centric_radical_classes": reps })
            }
            Op::StronglyClosed => {
                let list: Vec<Value> =
                    closed::strongly_closed_subgroups(f).into_iter().map(|a| subgroup_json(f, a)).collect();
                json!(list)
            }
            Op::Center => subgroup_json(f, closed::f_center(f)),
            Op::Hyperfocal => {
                let (h, q) = hyperfocal::hyperfocal_quotient(f)?;
                json!({
                    "subgroup": subgroup_json(f, h),
                    "equals_base": h == f.base(),
                    "quotient_order": q.order(),
                })
            }
            Op::Irreducible => serde_json::to_value(irreducible::is_irreducible_rank1(f)?)?,
            Op::Component => {
                let c = irreducible::irreducible_component_rank1(f)?;
                json!({ "shape": c.shape, "base": subgroup_json(f, c.base) })
            }
        };
        out.insert(op.key().to_string(), value);
    }
    Ok(Value::Object(out))
}

fn quotient_cmd(input: &str, by: &[String], compare: Option<&str>, budget: &Budget) -> fusionkit::Result<Value> {
    let f = load_system(input, budget)?;
    let amb = f.ambient();
    let a = amb.generated(&parse_elements(&f, by)?);
    if a == amb.trivial() {
        return Ok(json!({
            "subgroup": subgroup_json(&f, a),
            "order": amb.sub_order(f.base()),
            "system": doc::to_doc(&f),
            "isomorphism": Value::Null,
        }));
    }
    let (q, _) = quotient::quotient_fusion(&f, a, budget)?;
    let targets: Vec<String> = match compare {
        Some(name) => vec![name.to_string()],
        None => catalog::standard_names().into_iter().map(String::from).collect(),
    };
    let qa = q.ambient();
    let mut iso = None;
    for name in targets {
        let target = quotient::system_for_name(&name, budget)?;
        let ta = target.ambient();
        if target.base() != ta.whole() || ta.order() != qa.order() || ta.p() != qa.p() {
            continue;
        }
        if let Some(found) = quotient::fusion_isomorphism(&q, &target, budget)? {
            iso = Some(json!({ "target": name, "certificate": found }));
            break;
        }
    }
    Ok(json!({
        "subgroup": subgroup_json(&f, a),
        "order": qa.order(),
        "system": doc::to_doc(&q),
        "isomorphism": iso,
    }))
}

fn transporter_cmd(input: &str, quotient_by: &[String], budget: &Budget) -> fusionkit::Result<Outcome> {
    let t = match build::fixture_text(input) {
        Some(text) => Transporter::from_json(text, budget)?,
        None => {
            let text = std::fs::read_to_string(input).map_err(|e| Error::Malformed(format!("{input}: {e}")))?;
            Transporter::from_json(&text, budget)?
        }
    };
    let report = transporter::validate_transporter(&t);
    let mut pass = report.passed();
    let mut out = json!({ "mor_sizes": t.mor_sizes(), "validation": report });
    if !quotient_by.is_empty() {
        let gens = parse_elements(t.fusion(), quotient_by)?;
        let a = t.fusion().ambient().generated(&gens);
        let q = quotient::quotient_transporter(&t, a, budget)?;
        let qreport = transporter::validate_transporter(&q);
        pass &= qreport.passed();
        out["quotient"] = json!({ "mor_sizes": q.mor_sizes(), "validation": qreport });
    }
    Ok(Outcome::verdict(out, pass))
}

fn suite(level: u32, jobs: usize, criteria: &[u8], budget: &Budget) -> fusionkit::Result<Outcome> {
    if let Some(bad) = criteria.iter().find(|id| !CRITERIA.contains(id)) {
        return Err(Error::Precondition(format!("no criterion {bad}")));
    }
    let ids: Vec<u8> = if criteria.is_empty() { CRITERIA.to_vec() } else { criteria.to_vec() };
    let cfg = SuiteConfig { level, budget: *budget };
    let outcomes = acceptance::run_suite(&ids, &cfg, jobs);
    for o in &outcomes {
        eprintln!("{}", o.summary_line());
    }
    let pass = outcomes.iter().all(|o| o.pass);
    let budget_exceeded = outcomes.iter().any(|o| o.budget_exceeded());
    Ok(Outcome { report: json!({ "level": level, "criteria": outcomes }), pass, budget_exceeded })
}
