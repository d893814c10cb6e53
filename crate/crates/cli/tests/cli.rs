use std::process::{Command, Output};

use serde_json::Value;

fn fusionkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusionkit")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn catalog_list_has_the_standard_entries() {
    let out = fusionkit(&["catalog", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let entries = json(&out)["report"]["entries"].as_array().expect("entries").len();
    assert!(entries >= 7, "{entries} entries");
}

#[test]
fn catalog_show_reports_the_group_order() {
    let out = fusionkit(&["catalog", "show", "so3:l=3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["order"], 16);
}

#[test]
fn unknown_name_is_a_usage_error() {
    assert_eq!(fusionkit(&["catalog", "show", "nosuch"]).status.code(), Some(2));
    assert_eq!(fusionkit(&["check", "nosuch"]).status.code(), Some(2));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(fusionkit(&["check", "so3:l=3", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(fusionkit(&["check", "so3:l=3", "--axioms", "other"]).status.code(), Some(2));
}

#[test]
fn check_passes_on_a_saturated_system() {
    let out = fusionkit(&["check", "so3:l=3", "--axioms", "std"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["verdict"], "pass");
    assert_eq!(fusionkit(&["check", "so3:l=3", "--axioms", "alt"]).status.code(), Some(0));
}

#[test]
fn negative_control_file_fails_with_a_witness() {
    let out = fusionkit(&["check", &data("d16-outer.json")]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    let failing: Vec<&Value> =
        report["report"]["axioms"].as_array().expect("axioms").iter().filter(|a| a["pass"] == false).collect();
    assert_eq!(failing[0]["tag"], "I");
    assert!(failing[0]["witness"].is_object());
}

#[test]
fn sat1_runs_with_elements_from_the_command_line() {
    let out = fusionkit(&["check", "exotic3:l=1", "--axioms", "sat1", "--x", "v1"]);
    let report = json(&out);
    let tags: Vec<&str> =
        report["report"]["axioms"].as_array().expect("axioms").iter().map(|a| a["tag"].as_str().unwrap()).collect();
    assert_eq!(tags, ["sat1.i", "sat1.ii", "sat1.iii"]);
    let expected = if report["pass"] == true { 0 } else { 1 };
    assert_eq!(out.status.code(), Some(expected));
}

#[test]
fn sat1_with_an_unknown_element_is_a_usage_error() {
    assert_eq!(fusionkit(&["check", "so3:l=3", "--axioms", "sat1", "--x", "nosuch"]).status.code(), Some(2));
}

#[test]
fn analyze_center_of_su2() {
    let out = fusionkit(&["analyze", "su2:l=3", "--ops", "center"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["center"]["order"], 2);
}

#[test]
fn analyze_sullivan_is_reducible_with_the_torus_witness() {
    let out = fusionkit(&["analyze", "sullivan:p=5,n=4,l=2", "--ops", "irreducible"]);
    let report = json(&out);
    let irr = &report["report"]["irreducible"];
    assert_eq!(irr["verdict"], "fail");
    assert!(irr["axioms"][0]["witness"]["detail"].as_str().unwrap().starts_with("F_T(T)"));
}

#[test]
fn analyze_hyperfocal_of_a_torus_is_everything() {
    let out = fusionkit(&["analyze", "so2:p=3,l=2", "--ops", "hyperfocal,strongly-closed,classify,component"]);
    let report = json(&out);
    assert_eq!(report["report"]["hyperfocal"]["equals_base"], true);
    assert_eq!(report["report"]["hyperfocal"]["quotient_order"], 1);
    assert_eq!(report["report"]["component"]["shape"], "So2");
}

#[test]
fn irreducibility_needs_rank_one() {
    assert_eq!(fusionkit(&["analyze", "exotic3:l=1", "--ops", "irreducible"]).status.code(), Some(2));
}

#[test]
fn quotient_of_su2_by_its_center_is_so3() {
    let out = fusionkit(&["quotient", "su2:l=3", "--by", "t1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["report"]["order"], 8);
    assert_eq!(report["report"]["isomorphism"]["target"], "so3:l=2");
    assert!(report["report"]["isomorphism"]["certificate"]["generator_images"].is_array());
}

#[test]
fn quotient_with_an_explicit_comparison() {
    let out = fusionkit(&["quotient", "su2:l=3", "--by", "t1", "--compare", "su2:l=2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["report"]["isomorphism"].is_null());
}

#[test]
fn quotient_by_the_trivial_subgroup_echoes_the_input() {
    let shown = json(&fusionkit(&["catalog", "show", "so3:l=3"]));
    let out = fusionkit(&["quotient", "so3:l=3", "--by", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["system"], shown["report"]["system"]);
}

#[test]
fn quotient_by_a_non_normal_subgroup_is_a_precondition_error() {
    let out = fusionkit(&["quotient", "so3:l=3", "--by", "t3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not F-normal"));
}

#[test]
fn quotient_names_resolve_as_inputs() {
    let out = fusionkit(&["check", "su2:l=3/<t1>"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn transporter_fixture_validates_with_its_quotient() {
    let out = fusionkit(&["transporter", "su2-binary-octahedral.json", "--quotient-by", "t1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let big = &report["report"]["mor_sizes"];
    let small = &report["report"]["quotient"]["mor_sizes"];
    assert_eq!(big[0][0].as_u64().unwrap(), 2 * small[0][0].as_u64().unwrap());
}

#[test]
fn budget_overflow_exits_3() {
    let out = Command::new(env!("CARGO_BIN_EXE_fusionkit"))
        .args(["check", "so3:l=3"])
        .env("FUSIONKIT_BUDGET", "8")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(fusionkit(&["--budget", "8", "check", "so3:l=3"]).status.code(), Some(3));
}

#[test]
fn reports_are_byte_stable_without_timing() {
    let a = fusionkit(&["--no-timing", "check", "sullivan:p=5,n=4,l=2"]);
    let b = fusionkit(&["--no-timing", "check", "sullivan:p=5,n=4,l=2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn suite_subset_is_deterministic_across_job_counts() {
    let a = fusionkit(&["--no-timing", "suite", "--criteria", "2,3,7", "--jobs", "1"]);
    let b = fusionkit(&["--no-timing", "suite", "--criteria", "2,3,7", "--jobs", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let ids: Vec<u64> =
        json(&a)["report"]["criteria"].as_array().unwrap().iter().map(|c| c["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, [2, 3, 7]);
}

#[test]
fn suite_rejects_unknown_criteria_and_levels() {
    assert_eq!(fusionkit(&["suite", "--criteria", "12"]).status.code(), Some(2));
    assert_eq!(fusionkit(&["suite", "--level", "1"]).status.code(), Some(2));
}

#[test]
fn full_suite_reports_failures_with_exit_1() {
    let out = fusionkit(&["--no-timing", "suite", "--jobs", "4"]);
    let report = json(&out);
    let all_pass = report["report"]["criteria"].as_array().unwrap().iter().all(|c| c["pass"] == true);
    assert_eq!(out.status.code(), Some(if all_pass { 0 } else { 1 }));
}

#[test]
fn output_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("fusionkit-cli-test-{}.json", std::process::id()));
    let out = fusionkit(&["--output", path.to_str().unwrap(), "catalog", "list"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).expect("written");
    std::fs::remove_file(&path).ok();
    assert!(serde_json::from_str::<Value>(&text).is_ok());
}
