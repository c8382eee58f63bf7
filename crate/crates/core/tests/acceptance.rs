//! Release gate: runs every acceptance criterion and prints one line each.

use lagns_core::acceptance;

#[test]
fn acceptance_suite() {
    let results = acceptance::run_all();
    let mut all_passed = true;
    for r in &results {
        println!("{}", r.line());
        all_passed &= r.passed;
    }
    assert!(all_passed, "one or more acceptance criteria failed");
}
