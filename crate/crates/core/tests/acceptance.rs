//! Runs the acceptance table and prints one line per criterion.
//!
//! Criteria that fail are printed as FAIL and listed in the summary; the test
//! itself only fails when a criterion outside `KNOWN_FAILING` fails, or when a
//! known-failing criterion starts passing without the list being updated.

use fusionkit::acceptance::{run_criterion, SuiteConfig, CRITERIA};

/// Criteria that fail at finite truncation level, with the failing checks.
const KNOWN_FAILING: &[(u8, &[&str])] = &[
    (4, &["Klein four-subgroups form one class"]),
    (9, &["sat1 with X = {v1}", "one class of order-3 elements"]),
    (11, &["su2 2 to 3"]),
];

#[test]
fn acceptance() {
    let cfg = SuiteConfig::default();
    let mut unexpected = Vec::new();
    for id in CRITERIA {
        let outcome = run_criterion(id, &cfg);
        println!("{}", outcome.summary_line());
        for check in outcome.checks.iter().filter(|c| !c.pass) {
            println!("    {}: {}", check.name, check.detail);
        }
        let known: &[&str] = KNOWN_FAILING.iter().find(|(k, _)| *k == id).map(|(_, v)| *v).unwrap_or(&[]);
        if outcome.failing() != known {
            unexpected.push(format!("criterion {id}: failing {:?}, recorded {:?}", outcome.failing(), known));
        }
    }
    assert!(unexpected.is_empty(), "{}", unexpected.join("\n"));
}
